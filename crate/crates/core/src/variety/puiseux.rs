//! Branch expansions at infinity for plane curves by the Newton-polygon
//! method.
//!
//! The curve f(ζ₁, ζ₂) is rewritten through ζ₁ = 1/t as a polynomial in
//! (t, ζ₂) with the substitution-cleared power t^{deg_ζ₁ f}, and branches
//! ζ₂(t) are grown term by term: each Newton-polygon edge of exact
//! rational slope γ contributes roots c of its edge polynomial, the
//! substitution ζ₂ ← t^γ(c + ζ₂′) recurses, and only strictly positive
//! slopes continue an existing prefix.  Exponent arithmetic is exact
//! throughout; coefficients stay exact rationals until a root forces an
//! algebraic extension, at which point they switch to double precision.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{rat_to_f64, Polynomial, Rat};

use super::multigcd;
use super::numeric;
use super::unipoly::{rational_roots, UniPoly};

pub const PUISEUX_DEGREE_CAP: u32 = 8;
const NUMERIC_DUST: f64 = 1e-11;
const ROOT_CLUSTER_TOL: f64 = 1e-7;

/// Branch coefficient: exact over ℚ while the expansion stays rational,
/// double precision once an algebraic extension enters.
#[derive(Debug, Clone)]
pub enum Coef {
    Exact(Rat),
    Numeric(Complex64),
}

impl Coef {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Coef::Exact(r) => Complex64::new(rat_to_f64(r), 0.0),
            Coef::Numeric(c) => *c,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coef::Exact(_))
    }

    fn add(&self, other: &Coef) -> Coef {
        match (self, other) {
            (Coef::Exact(a), Coef::Exact(b)) => Coef::Exact(a + b),
            _ => Coef::Numeric(self.to_complex() + other.to_complex()),
        }
    }

    fn mul(&self, other: &Coef) -> Coef {
        match (self, other) {
            (Coef::Exact(a), Coef::Exact(b)) => Coef::Exact(a * b),
            _ => Coef::Numeric(self.to_complex() * other.to_complex()),
        }
    }

    fn pow(&self, e: u32) -> Coef {
        match self {
            Coef::Exact(r) => {
                let mut acc = Rat::one();
                for _ in 0..e {
                    acc *= r;
                }
                Coef::Exact(acc)
            }
            Coef::Numeric(c) => Coef::Numeric(c.powu(e)),
        }
    }

    fn is_exact_zero(&self) -> bool {
        match self {
            Coef::Exact(r) => r.is_zero(),
            Coef::Numeric(_) => false,
        }
    }

    fn magnitude(&self) -> f64 {
        match self {
            Coef::Exact(r) => rat_to_f64(r).abs(),
            Coef::Numeric(c) => c.norm(),
        }
    }
}

/// Polynomial in (t, y) with exact rational t-exponents.
#[derive(Debug, Clone)]
struct FracPoly {
    terms: BTreeMap<(Rat, usize), Coef>,
}

impl FracPoly {
    fn new() -> Self {
        FracPoly {
            terms: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, t_exp: Rat, y_pow: usize, c: Coef) {
        if c.is_exact_zero() {
            return;
        }
        match self.terms.remove(&(t_exp.clone(), y_pow)) {
            Some(existing) => {
                let sum = existing.add(&c);
                if !sum.is_exact_zero() {
                    self.terms.insert((t_exp, y_pow), sum);
                }
            }
            None => {
                self.terms.insert((t_exp, y_pow), c);
            }
        }
    }

    /// Transform the curve: ζ₁ = 1/t cleared by t^{deg_ζ₁}, so the term
    /// ζ₁^a ζ₂^b lands at t-exponent deg_ζ₁ − a.
    fn from_curve(curve: &Polynomial) -> (FracPoly, u32) {
        let dx = curve.degree_in(0).unwrap_or(0);
        let mut out = FracPoly::new();
        for (m, c) in curve.terms() {
            let a = m.exps()[0];
            let b = m.exps()[1] as usize;
            out.add_term(
                Rat::from_integer(BigInt::from(dx - a)),
                b,
                Coef::Exact(c.clone()),
            );
        }
        (out, dx)
    }

    /// Drop numeric coefficients that are rounding dust relative to the
    /// largest coefficient.  Exact coefficients are never dropped.
    fn cleanup(&mut self) {
        let max_mag = self
            .terms
            .values()
            .map(Coef::magnitude)
            .fold(0.0f64, f64::max);
        if max_mag == 0.0 {
            return;
        }
        self.terms.retain(|_, c| match c {
            Coef::Exact(_) => true,
            Coef::Numeric(v) => v.norm() >= NUMERIC_DUST * max_mag,
        });
    }

    fn y_order(&self) -> usize {
        self.terms.keys().map(|(_, b)| *b).min().unwrap_or(0)
    }

    /// ord_t of the y-free part; `None` when y divides the polynomial.
    fn t_order_at_zero(&self) -> Option<Rat> {
        self.terms
            .keys()
            .filter(|(_, b)| *b == 0)
            .map(|(a, _)| a.clone())
            .min()
    }

    /// Vertices (b, min t-exponent at b) of the support, b ascending.
    fn column_minima(&self) -> Vec<(usize, Rat)> {
        let mut minima: BTreeMap<usize, Rat> = BTreeMap::new();
        for (a, b) in self.terms.keys() {
            match minima.get(b) {
                Some(current) if current <= a => {}
                _ => {
                    minima.insert(*b, a.clone());
                }
            }
        }
        minima.into_iter().collect()
    }

    /// Substitute y ← t^γ (c + y); exponent arithmetic stays exact.
    fn substitute(&self, gamma: &Rat, c: &Coef) -> FracPoly {
        let mut out = FracPoly::new();
        for ((a, b), coef) in &self.terms {
            let b = *b;
            let base_exp = a + gamma * Rat::from_integer(BigInt::from(b));
            // (c + y)^b expanded by binomial coefficients.
            let mut binom = BigInt::one();
            for j in 0..=b {
                if j > 0 {
                    binom = &binom * BigInt::from(b - j + 1) / BigInt::from(j);
                }
                let scale = Coef::Exact(Rat::from_integer(binom.clone()))
                    .mul(&c.pow((b - j) as u32));
                out.add_term(base_exp.clone(), j, coef.mul(&scale));
            }
        }
        out.cleanup();
        out
    }
}

/// Newton-polygon edges of the support: exact slope parameter γ with the
/// minimized value μ = min(a + γb), plus the edge's sheet count.
struct Edge {
    gamma: Rat,
    mu: Rat,
}

fn polygon_edges(columns: &[(usize, Rat)]) -> Vec<Edge> {
    if columns.len() < 2 {
        return Vec::new();
    }
    // Lower convex hull over points (b, a) by the monotone chain; popping
    // on collinear keeps maximal edges.
    let mut hull: Vec<(usize, Rat)> = Vec::new();
    for p in columns {
        while hull.len() >= 2 {
            let o = &hull[hull.len() - 2];
            let a = &hull[hull.len() - 1];
            let cross = (Rat::from_integer(BigInt::from(a.0 - o.0))) * (&p.1 - &o.1)
                - (&a.1 - &o.1) * Rat::from_integer(BigInt::from(p.0 - o.0));
            if cross <= Rat::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p.clone());
    }
    hull.windows(2)
        .map(|w| {
            let (b0, a0) = &w[0];
            let (b1, a1) = &w[1];
            let gamma = (a0 - a1) / Rat::from_integer(BigInt::from(b1 - b0));
            let mu = a0 + &gamma * Rat::from_integer(BigInt::from(*b0));
            Edge { gamma, mu }
        })
        .collect()
}

/// Edge polynomial ψ(c) = Σ coef · c^{b − b_min} over support points on
/// the edge line a + γb = μ, dense ascending.
fn edge_char_poly(f: &FracPoly, edge: &Edge) -> Vec<Coef> {
    let mut points: Vec<(usize, Coef)> = Vec::new();
    for ((a, b), coef) in &f.terms {
        if a + &edge.gamma * Rat::from_integer(BigInt::from(*b)) == edge.mu {
            points.push((*b, coef.clone()));
        }
    }
    let b_min = points.iter().map(|(b, _)| *b).min().unwrap();
    let b_max = points.iter().map(|(b, _)| *b).max().unwrap();
    let mut dense = vec![Coef::Exact(Rat::zero()); b_max - b_min + 1];
    for (b, coef) in points {
        dense[b - b_min] = coef;
    }
    dense
}

/// Roots of the edge polynomial with multiplicities: exact rational roots
/// first, double-precision clusters for the rest.
fn char_roots(psi: &[Coef]) -> Vec<(Coef, usize)> {
    let mut out: Vec<(Coef, usize)> = Vec::new();

    if psi.iter().all(Coef::is_exact) {
        let uni = UniPoly::from_coeffs(
            psi.iter()
                .map(|c| match c {
                    Coef::Exact(r) => r.clone(),
                    Coef::Numeric(_) => unreachable!(),
                })
                .collect(),
        );
        let mut remaining = uni.clone();
        for (root, mult) in rational_roots(&uni) {
            if root.is_zero() {
                continue;
            }
            let linear = UniPoly::from_coeffs(vec![-root.clone(), Rat::one()]);
            for _ in 0..mult {
                remaining = remaining.exact_div(&linear).unwrap();
            }
            out.push((Coef::Exact(root), mult as usize));
        }
        if remaining.degree().unwrap_or(0) > 0 {
            let coeffs: Vec<Complex64> = remaining
                .coeffs()
                .iter()
                .map(|r| Complex64::new(rat_to_f64(r), 0.0))
                .collect();
            out.extend(cluster_roots(numeric::all_roots(&coeffs)));
        }
        return out;
    }

    let coeffs: Vec<Complex64> = psi.iter().map(Coef::to_complex).collect();
    cluster_roots(numeric::all_roots(&coeffs))
}

fn cluster_roots(mut roots: Vec<Complex64>) -> Vec<(Coef, usize)> {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let scale = 1.0
        + roots
            .iter()
            .map(|r| r.norm())
            .fold(0.0f64, f64::max);
    let mut out: Vec<(Vec<Complex64>, Complex64)> = Vec::new();
    'next: for r in roots {
        if r.norm() < ROOT_CLUSTER_TOL * scale {
            // c = 0 never starts a branch term; it belongs to other edges.
            continue;
        }
        for (members, center) in out.iter_mut() {
            if (r - *center).norm() < ROOT_CLUSTER_TOL * scale {
                members.push(r);
                let n = members.len() as f64;
                *center = members.iter().sum::<Complex64>() / n;
                continue 'next;
            }
        }
        out.push((vec![r], r));
    }
    out.into_iter()
        .map(|(members, center)| (Coef::Numeric(center), members.len()))
        .collect()
}

/// One expansion before conjugacy bookkeeping: cumulative t-exponents with
/// their coefficients, exactness, and the t-order of the trailing residual.
struct RawBranch {
    terms: Vec<(Rat, Coef)>,
    exact: bool,
    residual_t_order: Option<Rat>,
}

fn expand(
    f: &FracPoly,
    depth_left: u32,
    prefix: &[(Rat, Coef)],
    sheets: usize,
    top_level: bool,
    out: &mut Vec<RawBranch>,
) -> Result<()> {
    if out.len() > 64 {
        return Err(Error::ResourceCap(
            "branch expansion produced more than 64 series".into(),
        ));
    }

    let y_order = f.y_order();
    if top_level {
        debug_assert_eq!(y_order, 0, "the ζ₂ factor is divided out before expansion");
    }

    // y ≡ 0 from here on solves the equation exactly: the prefix is a
    // complete series.
    for _ in 0..y_order.min(sheets) {
        out.push(RawBranch {
            terms: prefix.to_vec(),
            exact: true,
            residual_t_order: None,
        });
    }
    let sheets_left = sheets.saturating_sub(y_order);
    if sheets_left == 0 {
        return Ok(());
    }

    if depth_left == 0 {
        let residual = f.t_order_at_zero();
        for _ in 0..sheets_left {
            out.push(RawBranch {
                terms: prefix.to_vec(),
                exact: false,
                residual_t_order: residual.clone(),
            });
        }
        return Ok(());
    }

    let columns = f.column_minima();
    let edges = polygon_edges(&columns);
    let mut placed = 0usize;
    for edge in edges {
        if !top_level && edge.gamma <= Rat::zero() {
            continue;
        }
        let psi = edge_char_poly(f, &edge);
        for (root, mult) in char_roots(&psi) {
            let next = f.substitute(&edge.gamma, &root);
            let cumulative = prefix
                .last()
                .map(|(e, _)| e + &edge.gamma)
                .unwrap_or_else(|| edge.gamma.clone());
            let mut new_prefix = prefix.to_vec();
            new_prefix.push((cumulative, root));
            expand(&next, depth_left - 1, &new_prefix, mult, false, out)?;
            placed += mult;
        }
    }

    // Every sheet must be accounted for by an edge root or the exact
    // termination above; a shortfall means numeric dust swallowed a root.
    if placed < sheets_left {
        let residual = f.t_order_at_zero();
        for _ in 0..sheets_left - placed {
            out.push(RawBranch {
                terms: prefix.to_vec(),
                exact: false,
                residual_t_order: residual.clone(),
            });
        }
    }
    Ok(())
}

/// One branch of the curve at |ζ₁| → ∞: ζ₂ = Σ cₖ ζ₁^{eₖ} with strictly
/// decreasing rational exponents.
#[derive(Debug, Clone)]
pub struct PuiseuxBranch {
    /// Lcm of the exponent denominators.
    pub ramification: u32,
    /// (exponent in ζ₁, coefficient), exponents strictly decreasing.
    pub terms: Vec<(Rat, Coef)>,
    /// Number of expansion steps that were requested.
    pub requested_order: u32,
    /// The series terminates: substituting it into the curve gives zero.
    pub exact: bool,
    /// Residual exponent bound for truncated series: substituting the
    /// truncated branch leaves only ζ₁-exponents at or below this value.
    /// `None` means the residual vanishes identically.
    pub residual_exponent_bound: Option<Rat>,
    /// Size of this branch's conjugacy class under ζ₁^{1/q} rotations.
    pub conjugacy_class_size: u32,
}

impl PuiseuxBranch {
    /// Leading exponent; `None` for the identically-zero branch.
    pub fn leading_exponent(&self) -> Option<&Rat> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn leading_coefficient(&self) -> Option<&Coef> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn all_coefficients_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| match c {
            Coef::Exact(_) => true,
            Coef::Numeric(v) => v.im.abs() <= 1e-9 * (1.0 + v.norm()),
        })
    }
}

/// Complete set of branches of a plane curve at infinity.
#[derive(Debug)]
pub struct PuiseuxExpansion {
    pub branches: Vec<PuiseuxBranch>,
    /// deg_ζ₂ of the square-free part that was expanded.
    pub curve_y_degree: u32,
    /// The input had repeated factors and was reduced before expansion.
    pub squarefree_reduced: bool,
    /// The curve contains the line ζ₂ = 0, reported separately so every
    /// listed branch keeps a nonzero leading coefficient.
    pub zero_branch: bool,
}

/// All Puiseux branches ζ₂(ζ₁) of the curve at |ζ₁| → ∞, each series
/// listed individually (conjugates included) so the branch count equals
/// deg_ζ₂ of the square-free part.
pub fn puiseux_at_infinity(curve: &Polynomial, order: u32) -> Result<PuiseuxExpansion> {
    if curve.n_vars() != 2 {
        return Err(Error::Input(format!(
            "branch expansion needs a curve in exactly 2 variables, got {}",
            curve.n_vars()
        )));
    }
    if curve.is_zero() {
        return Err(Error::Input("branch expansion of the zero curve".into()));
    }
    if curve.total_degree().unwrap_or(0) > PUISEUX_DEGREE_CAP {
        return Err(Error::Range(format!(
            "branch expansion capped at total degree {PUISEUX_DEGREE_CAP}, got {}",
            curve.total_degree().unwrap()
        )));
    }

    let (_, parts) = multigcd::squarefree_decomposition(curve);
    let squarefree_reduced = parts.iter().any(|(_, m)| *m > 1);
    let mut reduced = Polynomial::one(2);
    for (part, _) in &parts {
        reduced = reduced.mul(part);
    }

    let y = Polynomial::var(2, 1);
    let zero_branch = multigcd::exact_div(&reduced, &y).is_some();
    if zero_branch {
        reduced = multigcd::exact_div(&reduced, &y).unwrap();
    }

    let dy = reduced.degree_in(1).unwrap_or(0);
    if dy == 0 {
        return Ok(PuiseuxExpansion {
            branches: Vec::new(),
            curve_y_degree: if zero_branch { 1 } else { 0 },
            squarefree_reduced,
            zero_branch,
        });
    }

    let (f0, dx) = FracPoly::from_curve(&reduced);
    let mut raw = Vec::new();
    expand(&f0, order, &[], dy as usize, true, &mut raw)?;

    let mut branches: Vec<PuiseuxBranch> = raw
        .into_iter()
        .map(|rb| {
            let terms: Vec<(Rat, Coef)> = rb
                .terms
                .into_iter()
                .map(|(t_exp, c)| (-t_exp, c))
                .collect();
            let ramification = terms
                .iter()
                .map(|(e, _)| e.denom().clone())
                .fold(BigInt::one(), |acc, d| acc.lcm(&d))
                .to_u32()
                .unwrap_or(u32::MAX);
            let residual_exponent_bound = rb
                .residual_t_order
                .map(|o| Rat::from_integer(BigInt::from(dx)) - o);
            PuiseuxBranch {
                ramification: ramification.max(1),
                terms,
                requested_order: order,
                exact: rb.exact,
                residual_exponent_bound,
                conjugacy_class_size: 1,
            }
        })
        .collect();

    assign_conjugacy_classes(&mut branches);
    branches.sort_by(compare_branches);
    Ok(PuiseuxExpansion {
        branches,
        curve_y_degree: dy + u32::from(zero_branch),
        squarefree_reduced,
        zero_branch,
    })
}

fn compare_branches(a: &PuiseuxBranch, b: &PuiseuxBranch) -> std::cmp::Ordering {
    let len = a.terms.len().max(b.terms.len());
    for i in 0..len {
        match (a.terms.get(i), b.terms.get(i)) {
            (Some((ea, ca)), Some((eb, cb))) => {
                // Larger leading exponents first, then coefficients by value.
                let ord = eb.cmp(ea).then_with(|| {
                    let x = ca.to_complex();
                    let y = cb.to_complex();
                    x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
                });
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
            (Some(_), None) => return std::cmp::Ordering::Greater,
            (None, Some(_)) => return std::cmp::Ordering::Less,
            (None, None) => break,
        }
    }
    std::cmp::Ordering::Equal
}

/// Group branches into orbits of the deck rotation ζ₁^{1/q} ↦ ω ζ₁^{1/q}:
/// conjugates share exponents while coefficients pick up the phase
/// e^{2πi m eₖ}.  Matching is numeric with a fixed tolerance.
fn assign_conjugacy_classes(branches: &mut [PuiseuxBranch]) {
    let n = branches.len();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut next_class = 0usize;
    for i in 0..n {
        if class_of[i].is_some() {
            continue;
        }
        let class = next_class;
        next_class += 1;
        class_of[i] = Some(class);
        let q = branches[i].ramification;
        for j in i + 1..n {
            if class_of[j].is_some() || branches[j].ramification != q {
                continue;
            }
            if same_exponents(&branches[i], &branches[j])
                && (1..q).any(|m| conjugate_matches(&branches[i], &branches[j], m))
            {
                class_of[j] = Some(class);
            }
        }
    }
    let mut sizes = vec![0u32; next_class];
    for c in class_of.iter().flatten() {
        sizes[*c] += 1;
    }
    for (branch, c) in branches.iter_mut().zip(class_of) {
        branch.conjugacy_class_size = sizes[c.unwrap()];
    }
}

fn same_exponents(a: &PuiseuxBranch, b: &PuiseuxBranch) -> bool {
    a.terms.len() == b.terms.len()
        && a.terms
            .iter()
            .zip(&b.terms)
            .all(|((ea, _), (eb, _))| ea == eb)
}

fn conjugate_matches(a: &PuiseuxBranch, b: &PuiseuxBranch, m: u32) -> bool {
    a.terms.iter().zip(&b.terms).all(|((e, ca), (_, cb))| {
        let phase = 2.0 * std::f64::consts::PI * m as f64 * rat_to_f64(e);
        let rotated = ca.to_complex() * Complex64::new(phase.cos(), phase.sin());
        let target = cb.to_complex();
        (rotated - target).norm() <= 1e-6 * (1.0 + target.norm())
    })
}

/// Leading ζ₁-exponent of f(ζ₁, ŷ(ζ₁)) for a truncated branch ŷ, computed
/// with exact exponent arithmetic; `None` when the residual vanishes
/// (identically, or to numeric precision for double-precision branches).
pub fn branch_residual_leading_exponent(
    curve: &Polynomial,
    branch: &PuiseuxBranch,
) -> Option<Rat> {
    // Series in ζ₁ alone: map exponent → coefficient.
    let mut power_cache: Vec<BTreeMap<Rat, Coef>> = Vec::new();
    let mut base: BTreeMap<Rat, Coef> = BTreeMap::new();
    for (e, c) in &branch.terms {
        base.insert(e.clone(), c.clone());
    }
    let one: BTreeMap<Rat, Coef> = [(Rat::zero(), Coef::Exact(Rat::one()))].into();
    power_cache.push(one);
    power_cache.push(base);

    let mul_series = |x: &BTreeMap<Rat, Coef>, y: &BTreeMap<Rat, Coef>| {
        let mut out: BTreeMap<Rat, Coef> = BTreeMap::new();
        for (ex, cx) in x {
            for (ey, cy) in y {
                let e = ex + ey;
                let c = cx.mul(cy);
                match out.remove(&e) {
                    Some(prev) => {
                        let sum = prev.add(&c);
                        if !sum.is_exact_zero() {
                            out.insert(e, sum);
                        }
                    }
                    None => {
                        out.insert(e, c);
                    }
                }
            }
        }
        out
    };

    let max_y = curve.degree_in(1).unwrap_or(0) as usize;
    while power_cache.len() <= max_y {
        let next = mul_series(power_cache.last().unwrap(), &power_cache[1]);
        power_cache.push(next);
    }

    let mut residual: BTreeMap<Rat, Coef> = BTreeMap::new();
    for (m, c) in curve.terms() {
        let a = m.exps()[0];
        let b = m.exps()[1] as usize;
        for (e, coef) in &power_cache[b] {
            let exponent = e + Rat::from_integer(BigInt::from(a));
            let contribution = coef.mul(&Coef::Exact(c.clone()));
            match residual.remove(&exponent) {
                Some(prev) => {
                    let sum = prev.add(&contribution);
                    if !sum.is_exact_zero() {
                        residual.insert(exponent, sum);
                    }
                }
                None => {
                    residual.insert(exponent, contribution);
                }
            }
        }
    }

    let max_mag = residual
        .values()
        .map(Coef::magnitude)
        .fold(0.0f64, f64::max);
    residual
        .into_iter()
        .filter(|(_, c)| match c {
            Coef::Exact(r) => !r.is_zero(),
            Coef::Numeric(v) => v.norm() > 1e-7 * max_mag.max(1.0),
        })
        .map(|(e, _)| e)
        .max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rat};

    fn curve(src: &str) -> Polynomial {
        parse_polynomial(src, &["z1".into(), "z2".into()]).unwrap()
    }

    fn exponents(b: &PuiseuxBranch) -> Vec<Rat> {
        b.terms.iter().map(|(e, _)| e.clone()).collect()
    }

    #[test]
    fn cusp_has_two_half_integer_branches() {
        let exp = puiseux_at_infinity(&curve("z2^2 - z1^3"), 6).unwrap();
        assert_eq!(exp.branches.len(), 2);
        assert!(!exp.zero_branch);
        for b in &exp.branches {
            assert_eq!(exponents(b), vec![rat(3, 2)]);
            assert_eq!(b.ramification, 2);
            assert_eq!(b.conjugacy_class_size, 2);
            assert!(b.exact);
        }
        let leads: Vec<f64> = exp
            .branches
            .iter()
            .map(|b| b.leading_coefficient().unwrap().to_complex().re)
            .collect();
        assert!((leads[0] + 1.0).abs() < 1e-12 || (leads[0] - 1.0).abs() < 1e-12);
        assert!((leads[0] + leads[1]).abs() < 1e-12);
    }

    #[test]
    fn hyperbola_has_one_reciprocal_branch() {
        let exp = puiseux_at_infinity(&curve("z1*z2 - 1"), 4).unwrap();
        assert_eq!(exp.branches.len(), 1);
        let b = &exp.branches[0];
        assert_eq!(exponents(b), vec![rat(-1, 1)]);
        assert_eq!(b.ramification, 1);
        assert_eq!(b.conjugacy_class_size, 1);
        assert!(b.exact);
        match &b.terms[0].1 {
            Coef::Exact(r) => assert_eq!(r, &rat(1, 1)),
            Coef::Numeric(_) => panic!("rational branch must stay exact"),
        }
    }

    #[test]
    fn split_quadratic_gives_two_linear_branches() {
        let exp = puiseux_at_infinity(&curve("z2^2 - z1^2"), 4).unwrap();
        assert_eq!(exp.branches.len(), 2);
        for b in &exp.branches {
            assert_eq!(exponents(b), vec![rat(1, 1)]);
            assert_eq!(b.ramification, 1);
            assert_eq!(b.conjugacy_class_size, 1);
            assert!(b.exact);
            assert!(b.all_coefficients_real());
        }
    }

    #[test]
    fn perturbed_cusp_expands_the_square_root_series() {
        // ζ₂² = ζ₁³ + ζ₁²: ζ₂ = ±ζ₁^{3/2}(1 + ζ₁^{-1})^{1/2}, so the terms
        // follow the binomial series 1 + u/2 − u²/8 + u³/16 − …
        let exp = puiseux_at_infinity(&curve("z2^2 - z1^3 - z1^2"), 4).unwrap();
        assert_eq!(exp.branches.len(), 2);
        for b in &exp.branches {
            assert_eq!(
                exponents(b),
                vec![rat(3, 2), rat(1, 2), rat(-1, 2), rat(-3, 2)]
            );
            assert!(!b.exact);
            assert_eq!(b.ramification, 2);
            assert_eq!(b.conjugacy_class_size, 2);
        }
        let plus = exp
            .branches
            .iter()
            .find(|b| b.leading_coefficient().unwrap().to_complex().re > 0.0)
            .unwrap();
        let coeffs: Vec<Rat> = plus
            .terms
            .iter()
            .map(|(_, c)| match c {
                Coef::Exact(r) => r.clone(),
                Coef::Numeric(_) => panic!("series over ℚ must stay exact"),
            })
            .collect();
        assert_eq!(coeffs, vec![rat(1, 1), rat(1, 2), rat(-1, 8), rat(1, 16)]);
    }

    #[test]
    fn truncated_residual_respects_the_reported_bound() {
        let c = curve("z2^2 - z1^3 - z1^2");
        let exp = puiseux_at_infinity(&c, 4).unwrap();
        for b in &exp.branches {
            let bound = b.residual_exponent_bound.clone().expect("truncated");
            let leading = branch_residual_leading_exponent(&c, b).expect("nonzero residual");
            assert!(
                leading <= bound,
                "residual exponent {leading} exceeds bound {bound}"
            );
        }
    }

    #[test]
    fn exact_branches_have_vanishing_residual() {
        let c = curve("z2^2 - z1^3");
        let exp = puiseux_at_infinity(&c, 6).unwrap();
        for b in &exp.branches {
            assert!(b.exact);
            assert_eq!(branch_residual_leading_exponent(&c, b), None);
        }
    }

    #[test]
    fn non_monic_curve_needs_no_preprocessing() {
        // ζ₁ζ₂² − 1: ζ₂ = ±ζ₁^{−1/2}
        let exp = puiseux_at_infinity(&curve("z1*z2^2 - 1"), 4).unwrap();
        assert_eq!(exp.branches.len(), 2);
        for b in &exp.branches {
            assert_eq!(exponents(b), vec![rat(-1, 2)]);
            assert_eq!(b.ramification, 2);
            assert_eq!(b.conjugacy_class_size, 2);
        }
    }

    #[test]
    fn zero_component_is_reported_separately() {
        let exp = puiseux_at_infinity(&curve("z2^2 - z1*z2"), 4).unwrap();
        assert!(exp.zero_branch);
        assert_eq!(exp.branches.len(), 1);
        assert_eq!(exponents(&exp.branches[0]), vec![rat(1, 1)]);
        assert_eq!(exp.curve_y_degree, 2);
    }

    #[test]
    fn repeated_factors_are_reduced_with_a_flag() {
        let doubled = curve("z2 - z1").mul(&curve("z2 - z1"));
        let exp = puiseux_at_infinity(&doubled, 4).unwrap();
        assert!(exp.squarefree_reduced);
        assert_eq!(exp.branches.len(), 1);
        assert_eq!(exponents(&exp.branches[0]), vec![rat(1, 1)]);
    }

    #[test]
    fn irrational_coefficients_fall_back_to_numeric_with_conjugacy() {
        // ζ₂² − 2ζ₁²... coefficient √2 is irrational: branches ±√2·ζ₁.
        let exp = puiseux_at_infinity(&curve("z2^2 - 2*z1^2"), 4).unwrap();
        assert_eq!(exp.branches.len(), 2);
        for b in &exp.branches {
            assert_eq!(exponents(b), vec![rat(1, 1)]);
            match &b.terms[0].1 {
                Coef::Numeric(v) => assert!((v.re.abs() - 2f64.sqrt()).abs() < 1e-9),
                Coef::Exact(_) => panic!("√2 cannot be exact"),
            }
        }
    }

    #[test]
    fn branch_count_matches_the_fiber_degree() {
        for (src, expected) in [
            ("z2^3 - z1^2", 3usize),
            ("z2^2 - z1^3 - z1", 2),
            ("z1*z2^2 - z2 + 1", 2),
            ("z2^4 - z1^3*z2 - 1", 4),
        ] {
            let c = curve(src);
            let exp = puiseux_at_infinity(&c, 5).unwrap();
            assert_eq!(
                exp.branches.len() + usize::from(exp.zero_branch),
                expected,
                "curve {src}"
            );
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let big = curve("z2^9 - z1");
        assert!(matches!(
            puiseux_at_infinity(&big, 4),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn roots_of_unity_conjugates_are_grouped() {
        // ζ₂³ − ζ₁: three branches ζ₁^{1/3}, ωζ₁^{1/3}, ω²ζ₁^{1/3}.
        let exp = puiseux_at_infinity(&curve("z2^3 - z1"), 4).unwrap();
        assert_eq!(exp.branches.len(), 3);
        for b in &exp.branches {
            assert_eq!(exponents(b), vec![rat(1, 3)]);
            assert_eq!(b.ramification, 3);
            assert_eq!(b.conjugacy_class_size, 3);
        }
    }
}
