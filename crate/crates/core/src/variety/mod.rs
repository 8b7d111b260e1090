//! Factorization, zero-dimensional solving, and branch expansions at
//! infinity for the varieties attached to annihilator ideals.
//!
//! Everything here is exact over ℚ until a root genuinely requires an
//! algebraic extension; from there double-precision values carry clearly
//! flagged numeric data.

pub mod multigcd;
pub mod numeric;
pub mod puiseux;
pub mod unipoly;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{buchberger, GroebnerConfig};
use crate::poly::{rat_to_f64, ModuleElement, Monomial, Polynomial, Rat, TermOrder};
use crate::weights::WeightSpec;

pub use puiseux::{
    branch_residual_leading_exponent, puiseux_at_infinity, Coef, PuiseuxBranch,
    PuiseuxExpansion, PUISEUX_DEGREE_CAP,
};
pub use unipoly::FACTOR_DEGREE_CAP;

pub const BIVARIATE_TOTAL_DEGREE_CAP: u32 = 8;
pub const ELIMINANT_DEGREE_CAP: usize = 40;
pub const SOLUTION_CAP: usize = 200;
const PARTIAL_POINT_CAP: usize = 512;
const KRONECKER_SUBSET_CAP: usize = 1 << 18;

/// Exact factorization over ℚ: `unit · Π factorᵢ^multᵢ` reconstructs the
/// input, factors pairwise non-associate with positive integer-primitive
/// normalization.
#[derive(Debug, Clone)]
pub struct FactorList {
    pub factors: Vec<(Polynomial, u32)>,
    pub unit: Rat,
}

impl FactorList {
    pub fn reconstruct(&self, n_vars: usize) -> Polynomial {
        let mut acc = Polynomial::constant(n_vars, self.unit.clone());
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        acc
    }
}

fn occurring_variables(p: &Polynomial) -> Vec<usize> {
    (0..p.n_vars())
        .filter(|&j| p.degree_in(j).unwrap_or(0) > 0)
        .collect()
}

/// Integer-primitive form with a positive grevlex-leading coefficient;
/// the factor-list unit absorbs the removed scalar.
fn canonical_factor(p: &Polynomial) -> Polynomial {
    let q = p.primitive_normalized();
    let order = TermOrder::grevlex();
    if let Some((_, c)) = q.leading_term(&order) {
        if c.is_negative() {
            return q.neg();
        }
    }
    q
}

fn sort_factors(factors: &mut [(Polynomial, u32)]) {
    factors.sort_by(|a, b| {
        let da = a.0.total_degree().unwrap_or(0);
        let db = b.0.total_degree().unwrap_or(0);
        da.cmp(&db)
            .then_with(|| a.0.n_terms().cmp(&b.0.n_terms()))
            .then_with(|| a.0.to_text().cmp(&b.0.to_text()))
    });
}

/// Factor a polynomial over ℚ: exact irreducible factorization for one or
/// two occurring variables, square-free decomposition for three or more.
pub fn factor(p: &Polynomial) -> Result<FactorList> {
    if p.is_zero() {
        return Err(Error::Input("cannot factor the zero polynomial".into()));
    }
    let occurring = occurring_variables(p);

    let mut factors: Vec<(Polynomial, u32)> = Vec::new();
    match occurring.len() {
        0 => {}
        1 => {
            factors.extend(factor_univariate_in(p, occurring[0])?);
        }
        2 => {
            let total = p.total_degree().unwrap_or(0);
            if total > BIVARIATE_TOTAL_DEGREE_CAP {
                return Err(Error::Range(format!(
                    "bivariate factorization capped at total degree \
                     {BIVARIATE_TOTAL_DEGREE_CAP}, got {total}"
                )));
            }
            factors.extend(factor_bivariate(p, occurring[0], occurring[1])?);
        }
        _ => {
            let (_, parts) = multigcd::squarefree_decomposition(p);
            factors.extend(
                parts
                    .into_iter()
                    .map(|(f, m)| (canonical_factor(&f), m)),
            );
        }
    }

    sort_factors(&mut factors);
    finish_factor_list(p, factors)
}

/// Recompute the unit by exact division and check the reconstruction
/// identity.
fn finish_factor_list(p: &Polynomial, factors: Vec<(Polynomial, u32)>) -> Result<FactorList> {
    let mut rem = p.clone();
    for (f, m) in &factors {
        for _ in 0..*m {
            rem = multigcd::exact_div(&rem, f).ok_or_else(|| {
                Error::Invariant("factor does not divide the input".into())
            })?;
        }
    }
    if rem.total_degree().is_some_and(|d| d > 0) {
        return Err(Error::Invariant(
            "factorization left a nonconstant cofactor".into(),
        ));
    }
    let unit = rem
        .terms()
        .next()
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Rat::zero);
    let list = FactorList { factors, unit };
    if list.reconstruct(p.n_vars()) != *p {
        return Err(Error::Invariant(
            "factor reconstruction identity failed".into(),
        ));
    }
    Ok(list)
}

fn factor_univariate_in(p: &Polynomial, var: usize) -> Result<Vec<(Polynomial, u32)>> {
    let uni = unipoly::UniPoly::from_polynomial(p, var)
        .ok_or_else(|| Error::Invariant("univariate image lost a variable".into()))?;
    let (_, parts) = unipoly::factor_unipoly(&uni)?;
    Ok(parts
        .into_iter()
        .map(|(f, m)| (canonical_factor(&f.to_polynomial(p.n_vars(), var)), m))
        .collect())
}

fn factor_bivariate(
    p: &Polynomial,
    vx: usize,
    vy: usize,
) -> Result<Vec<(Polynomial, u32)>> {
    let mut factors: Vec<(Polynomial, u32)> = Vec::new();

    // Content along vy is a polynomial in vx alone; it carries every factor
    // free of vy.
    let content = multigcd::content_in(p, vy);
    let mut pp = multigcd::exact_div(p, &content)
        .ok_or_else(|| Error::Invariant("content does not divide its polynomial".into()))?;
    if content.total_degree().unwrap_or(0) > 0 {
        factors.extend(factor_univariate_in(&content, vx)?);
    }

    // A factor free of vx would be content along vx; split it off the same
    // way so the Kronecker step sees a doubly-primitive polynomial.
    let content_x = multigcd::content_in(&pp, vx);
    if content_x.total_degree().unwrap_or(0) > 0 {
        factors.extend(factor_univariate_in(&content_x, vy)?);
        pp = multigcd::exact_div(&pp, &content_x)
            .ok_or_else(|| Error::Invariant("content does not divide its polynomial".into()))?;
    }

    if pp.total_degree().unwrap_or(0) == 0 {
        return Ok(factors);
    }

    let (_, parts) = multigcd::squarefree_decomposition(&pp);
    let mut budget = KRONECKER_SUBSET_CAP;
    for (part, mult) in parts {
        let part_occurring = occurring_variables(&part);
        if part_occurring.len() == 1 {
            for (f, m) in factor_univariate_in(&part, part_occurring[0])? {
                factors.push((f, m * mult));
            }
            continue;
        }
        for f in factor_bivariate_squarefree(&part, vx, vy, &mut budget)? {
            factors.push((f, mult));
        }
    }
    Ok(factors)
}

/// Factor a square-free, doubly-primitive bivariate polynomial through the
/// substitution vy ← vx^K with K = deg_vx + 1: monomials map injectively
/// below the cap, so every bivariate factor divides a subset product of
/// the univariate factors of the image.
fn factor_bivariate_squarefree(
    g: &Polynomial,
    vx: usize,
    vy: usize,
    budget: &mut usize,
) -> Result<Vec<Polynomial>> {
    let n_vars = g.n_vars();
    let k = g.degree_in(vx).unwrap_or(0) as usize + 1;
    let dy = g.degree_in(vy).unwrap_or(0) as usize;

    let mut image = vec![Rat::zero(); k * dy + k];
    for (m, c) in g.terms() {
        let a = m.exps()[vx] as usize;
        let b = m.exps()[vy] as usize;
        image[a + k * b] += c.clone();
    }
    let image = unipoly::UniPoly::from_coeffs(image);

    // The substitution can merge distinct factors on special curves, so the
    // image factors form a multiset for recombination.
    let (_, image_parts) = unipoly::factor_unipoly(&image)?;
    let mut flat: Vec<unipoly::UniPoly> = Vec::new();
    for (f, m) in image_parts {
        for _ in 0..m {
            flat.push(f.clone());
        }
    }

    let de_kronecker = |u: &unipoly::UniPoly| -> Polynomial {
        let mut out = Polynomial::zero(n_vars);
        for (e, c) in u.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut exps = vec![0u32; n_vars];
            exps[vx] = (e % k) as u32;
            exps[vy] = (e / k) as u32;
            out.add_term(Monomial::from_exps(exps), c.clone());
        }
        out
    };

    let mut found: Vec<Polynomial> = Vec::new();
    let mut remaining = g.clone();
    'outer: while !flat.is_empty() {
        if remaining.total_degree().unwrap_or(0) == 0 {
            break;
        }
        for size in 1..=flat.len() {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                if *budget == 0 {
                    return Err(Error::ResourceCap(format!(
                        "factor recombination exceeded {KRONECKER_SUBSET_CAP} \
                         subset trials ({} factors placed)",
                        found.len()
                    )));
                }
                *budget -= 1;
                let mut prod = unipoly::UniPoly::constant(Rat::one());
                for &i in &combo {
                    prod = prod.mul(&flat[i]);
                }
                let candidate = canonical_factor(&de_kronecker(&prod));
                if candidate.total_degree().unwrap_or(0) > 0 {
                    if let Some(q) = multigcd::exact_div(&remaining, &candidate) {
                        remaining = q;
                        found.push(candidate);
                        for &i in combo.iter().rev() {
                            flat.remove(i);
                        }
                        continue 'outer;
                    }
                }
                if !next_subset(&mut combo, flat.len()) {
                    break;
                }
            }
        }
        break;
    }
    if remaining.total_degree().unwrap_or(0) > 0 {
        found.push(canonical_factor(&remaining));
    }
    Ok(found)
}

fn next_subset(combo: &mut [usize], n: usize) -> bool {
    let size = combo.len();
    let mut i = size;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (size - i) {
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// One solution of a zero-dimensional polynomial system.
#[derive(Debug, Clone)]
pub struct SolvedPoint {
    pub coordinates: Vec<Complex64>,
    pub multiplicity: u32,
    /// max over generators of |g(point)| relative to the evaluated term
    /// scale.
    pub residual: f64,
}

fn pure_power_of(m: &Monomial, var: usize) -> bool {
    m.exps()
        .iter()
        .enumerate()
        .all(|(j, &e)| if j == var { e > 0 } else { e == 0 })
}

fn only_vars_from(p: &Polynomial, var: usize) -> bool {
    (0..var).all(|j| p.degree_in(j).unwrap_or(0) == 0)
}

/// Partial evaluation: coefficients of powers of `var` after substituting
/// `suffix` for the variables after `var`.  `None` when an earlier
/// variable still occurs.
fn univariate_slice(
    p: &Polynomial,
    var: usize,
    suffix: &[Complex64],
) -> Option<Vec<Complex64>> {
    if !only_vars_from(p, var) {
        return None;
    }
    let deg = p.degree_in(var).unwrap_or(0) as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
    for (m, c) in p.terms() {
        let mut v = Complex64::new(rat_to_f64(c), 0.0);
        for (j, &e) in m.exps().iter().enumerate().skip(var + 1) {
            if e > 0 {
                v *= suffix[j - var - 1].powu(e);
            }
        }
        coeffs[m.exps()[var] as usize] += v;
    }
    let max_mag = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    for c in coeffs.iter_mut() {
        if c.norm() < 1e-9 * max_mag {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() == 0.0 {
        coeffs.pop();
    }
    Some(coeffs)
}

fn newton_polish(system: &[Polynomial], point: &mut [Complex64]) {
    let n = point.len();
    for _ in 0..8 {
        let vals: Vec<Complex64> = match system
            .iter()
            .map(|p| p.eval_complex(point))
            .collect::<Result<Vec<_>>>()
        {
            Ok(v) => v,
            Err(_) => return,
        };
        let err = vals.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        if err < 1e-14 {
            return;
        }
        let mut jac = Vec::with_capacity(n);
        for p in system {
            let row: Vec<Complex64> = (0..n)
                .map(|j| p.derivative(j).eval_complex(point).unwrap_or_default())
                .collect();
            jac.push(row);
        }
        let rhs: Vec<Complex64> = vals.iter().map(|v| -v).collect();
        let Some(delta) = numeric::solve_complex(jac, rhs) else {
            return;
        };
        let mut lambda = 1.0f64;
        let mut improved = false;
        for _ in 0..8 {
            let trial: Vec<Complex64> = point
                .iter()
                .zip(&delta)
                .map(|(z, d)| z + lambda * d)
                .collect();
            let trial_err = system
                .iter()
                .map(|p| p.eval_complex(&trial).map(|v| v.norm()).unwrap_or(f64::MAX))
                .fold(0.0f64, f64::max);
            if trial_err < err {
                point.copy_from_slice(&trial);
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            return;
        }
    }
}

/// Solve a zero-dimensional ideal: lex Gröbner basis, univariate eliminant
/// roots, back-substitution along the triangular structure, and a damped
/// Newton correction, with residuals checked against every generator.
pub fn solve_zero_dim(gens: &[Polynomial]) -> Result<Vec<SolvedPoint>> {
    let active: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    if active.is_empty() {
        return Err(Error::Input(
            "no nonzero generators: the solution set is all of affine space".into(),
        ));
    }
    let n = active[0].n_vars();
    if active.iter().any(|g| g.n_vars() != n) {
        return Err(Error::Input("generators disagree on variable count".into()));
    }

    let order = TermOrder::lex();
    let elements: Vec<ModuleElement> = active
        .iter()
        .map(|g| ModuleElement::from_components(vec![(*g).clone()]))
        .collect();
    let gb = buchberger(&elements, &order, &GroebnerConfig::default())?;
    let basis: Vec<Polynomial> = gb
        .elements()
        .iter()
        .map(|e| e.component(0).clone())
        .collect();

    if basis
        .iter()
        .any(|p| !p.is_zero() && p.total_degree() == Some(0))
    {
        return Ok(Vec::new());
    }

    for j in 0..n {
        let led = basis.iter().any(|p| {
            p.leading_term(&order)
                .is_some_and(|(m, _)| pure_power_of(m, j))
        });
        if !led {
            return Err(Error::Input(format!(
                "ideal is positive-dimensional: no pure power of z{} leads the lex \
                 basis, so the solution set is infinite; expand branches at \
                 infinity with puiseux_at_infinity on a defining curve instead",
                j + 1
            )));
        }
    }

    // Triangular polish system: per variable the basis element led by its
    // pure power; under lex it involves no earlier variable and the power
    // carries a constant coefficient.
    let mut triangular: Vec<Polynomial> = Vec::with_capacity(n);
    for j in 0..n {
        let elem = basis
            .iter()
            .filter(|p| {
                p.leading_term(&order)
                    .is_some_and(|(m, _)| pure_power_of(m, j))
            })
            .min_by_key(|p| (p.degree_in(j).unwrap_or(0), p.to_text()))
            .expect("pure-power element exists after the zero-dimension check");
        triangular.push(elem.clone());
    }

    let eliminant = &triangular[n - 1];
    let eliminant_degree = eliminant.degree_in(n - 1).unwrap_or(0) as usize;
    if eliminant_degree > ELIMINANT_DEGREE_CAP {
        return Err(Error::ResourceCap(format!(
            "eliminant degree {eliminant_degree} exceeds cap {ELIMINANT_DEGREE_CAP}"
        )));
    }

    let eliminant_coeffs = univariate_slice(eliminant, n - 1, &[])
        .expect("eliminant involves only the last variable");
    let mut partials: Vec<Vec<Complex64>> = numeric::all_roots(&eliminant_coeffs)
        .into_iter()
        .map(|r| vec![r])
        .collect();

    for k in (0..n.saturating_sub(1)).rev() {
        let mut candidates: Vec<&Polynomial> = basis
            .iter()
            .filter(|p| only_vars_from(p, k) && p.degree_in(k).unwrap_or(0) > 0)
            .collect();
        candidates.sort_by_key(|p| (p.degree_in(k).unwrap_or(0), p.to_text()));
        let mut extended: Vec<Vec<Complex64>> = Vec::new();
        for suffix in &partials {
            let mut placed = false;
            for candidate in &candidates {
                let Some(coeffs) = univariate_slice(candidate, k, suffix) else {
                    continue;
                };
                if coeffs.len() < 2 {
                    continue;
                }
                for root in numeric::all_roots(&coeffs) {
                    let mut point = vec![root];
                    point.extend_from_slice(suffix);
                    extended.push(point);
                }
                placed = true;
                break;
            }
            if !placed {
                return Err(Error::Invariant(format!(
                    "back-substitution found no usable basis element for z{}",
                    k + 1
                )));
            }
            if extended.len() > PARTIAL_POINT_CAP {
                return Err(Error::ResourceCap(format!(
                    "back-substitution exceeded {PARTIAL_POINT_CAP} partial points"
                )));
            }
        }
        partials = extended;
    }

    let mut accepted: Vec<Vec<Complex64>> = Vec::new();
    for mut point in partials {
        newton_polish(&triangular, &mut point);
        let mut residual = 0.0f64;
        let mut ok = true;
        for g in &active {
            let val = match g.eval_complex(&point) {
                Ok(v) => v.norm(),
                Err(_) => {
                    ok = false;
                    break;
                }
            };
            let scale = g.eval_scale(&point).unwrap_or(1.0).max(1.0);
            residual = residual.max(val / scale);
        }
        if ok && residual < 1e-8 {
            accepted.push(point);
        }
    }

    // Coincident points cluster into one solution; multiplicity is the
    // cluster size.
    let spread = accepted
        .iter()
        .flat_map(|p| p.iter().map(|c| c.norm()))
        .fold(0.0f64, f64::max);
    let tol = 1e-6 * (1.0 + spread);
    let mut clusters: Vec<(Vec<Vec<Complex64>>, Vec<Complex64>)> = Vec::new();
    'next: for p in accepted {
        for (members, center) in clusters.iter_mut() {
            let dist = p
                .iter()
                .zip(center.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            if dist < tol {
                members.push(p);
                let m = members.len() as f64;
                for (j, c) in center.iter_mut().enumerate() {
                    *c = members.iter().map(|q| q[j]).sum::<Complex64>() / m;
                }
                continue 'next;
            }
        }
        clusters.push((vec![p.clone()], p));
    }

    if clusters.len() > SOLUTION_CAP {
        return Err(Error::ResourceCap(format!(
            "solution count {} exceeds cap {SOLUTION_CAP}",
            clusters.len()
        )));
    }

    let mut out: Vec<SolvedPoint> = clusters
        .into_iter()
        .map(|(members, center)| {
            let mut residual = 0.0f64;
            for g in &active {
                let val = g
                    .eval_complex(&center)
                    .map(|v| v.norm())
                    .unwrap_or(f64::MAX);
                let scale = g.eval_scale(&center).unwrap_or(1.0).max(1.0);
                residual = residual.max(val / scale);
            }
            SolvedPoint {
                coordinates: center,
                multiplicity: members.len() as u32,
                residual,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        for (x, y) in a.coordinates.iter().zip(&b.coordinates) {
            let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok(out)
}

/// Optional rule evaluated per branch against the weight; the crate ships
/// the branch data and this hook, not a built-in solvability criterion.
pub trait BranchPredicate {
    fn name(&self) -> &str;
    /// Verdict for one branch, or `None` when the rule does not apply.
    fn evaluate(&self, branch: &PuiseuxBranch, weight: &WeightSpec) -> Option<bool>;
}

pub const BRANCH_REPORT_LABEL: &str = "branch data only; no solvability verdict";

#[derive(Debug, Serialize)]
pub struct BranchTerm {
    pub exponent: String,
    pub coefficient: [f64; 2],
    pub exact: bool,
}

#[derive(Debug, Serialize)]
pub struct BranchSummary {
    pub leading_exponent: Option<String>,
    pub ramification: u32,
    pub conjugacy_class_size: u32,
    pub exact: bool,
    pub all_coefficients_real: bool,
    pub requested_order: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_exponent_bound: Option<String>,
    pub terms: Vec<BranchTerm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicate_verdict: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct BranchReport {
    pub label: String,
    pub weight_family: String,
    /// s = 1/α, present only for the gevrey family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gevrey_s: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicate: Option<String>,
    pub branches: Vec<BranchSummary>,
}

/// Branch data next to the weight scale: for gevrey(α) the comparison
/// value s = 1/α is reported alongside each leading exponent; other
/// families annotate exponents only.
pub fn branch_report(branches: &[PuiseuxBranch], weight: &WeightSpec) -> BranchReport {
    branch_report_with(branches, weight, None)
}

pub fn branch_report_with(
    branches: &[PuiseuxBranch],
    weight: &WeightSpec,
    predicate: Option<&dyn BranchPredicate>,
) -> BranchReport {
    let gevrey_s = match weight {
        WeightSpec::Gevrey { alpha } => Some(alpha.recip().to_string()),
        _ => None,
    };
    let summaries = branches
        .iter()
        .map(|b| BranchSummary {
            leading_exponent: b.leading_exponent().map(|e| e.to_string()),
            ramification: b.ramification,
            conjugacy_class_size: b.conjugacy_class_size,
            exact: b.exact,
            all_coefficients_real: b.all_coefficients_real(),
            requested_order: b.requested_order,
            residual_exponent_bound: b
                .residual_exponent_bound
                .as_ref()
                .map(|e| e.to_string()),
            terms: b
                .terms
                .iter()
                .map(|(e, c)| {
                    let v = c.to_complex();
                    BranchTerm {
                        exponent: e.to_string(),
                        coefficient: [v.re, v.im],
                        exact: c.is_exact(),
                    }
                })
                .collect(),
            predicate_verdict: predicate.and_then(|p| p.evaluate(b, weight)),
        })
        .collect();
    BranchReport {
        label: BRANCH_REPORT_LABEL.to_string(),
        weight_family: weight.family_name().to_string(),
        gevrey_s,
        predicate: predicate.map(|p| p.name().to_string()),
        branches: summaries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rat};

    fn poly(src: &str, vars: &[&str]) -> Polynomial {
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        parse_polynomial(src, &names).unwrap()
    }

    fn curve(src: &str) -> Polynomial {
        poly(src, &["z1", "z2"])
    }

    #[test]
    fn factor_splits_difference_of_squares() {
        let list = factor(&curve("z1^2 - 1")).unwrap();
        assert_eq!(list.factors.len(), 2);
        assert_eq!(list.unit, rat(1, 1));
        assert_eq!(list.factors[0].0, curve("z1 + 1"));
        assert_eq!(list.factors[1].0, curve("z1 - 1"));
        assert_eq!(list.reconstruct(2), curve("z1^2 - 1"));
    }

    #[test]
    fn factor_keeps_the_cusp_irreducible() {
        let list = factor(&curve("z2^2 - z1^3")).unwrap();
        assert_eq!(list.factors.len(), 1);
        assert_eq!(list.factors[0].1, 1);
        assert_eq!(list.reconstruct(2), curve("z2^2 - z1^3"));
    }

    #[test]
    fn factor_reports_multiplicities() {
        let p = curve("(z1 + z2)^2 * z1");
        let list = factor(&p).unwrap();
        assert_eq!(list.factors.len(), 2);
        assert_eq!(list.factors[0], (curve("z1"), 1));
        assert_eq!(list.factors[1], (curve("z1 + z2"), 2));
        assert_eq!(list.reconstruct(2), p);
    }

    #[test]
    fn factor_bivariate_mixed_content_and_unit() {
        let p = curve("z1 * (z2^2 - 1) * (z1*z2 - 1)").scale(&rat(-3, 4));
        let list = factor(&p).unwrap();
        assert_eq!(list.unit, rat(-3, 4));
        assert_eq!(list.factors.len(), 4);
        assert_eq!(list.reconstruct(2), p);
        for i in 0..list.factors.len() {
            for j in i + 1..list.factors.len() {
                let g = multigcd::poly_gcd(&list.factors[i].0, &list.factors[j].0);
                assert_eq!(g.total_degree(), Some(0), "factors share a divisor");
            }
        }
    }

    #[test]
    fn factor_with_three_variables_splits_square_free_parts() {
        let p = poly("(z1*z2 - z3)^2 * (z1 - 1)", &["z1", "z2", "z3"]).scale(&rat(5, 2));
        let list = factor(&p).unwrap();
        assert_eq!(list.factors.len(), 2);
        assert_eq!(list.unit, rat(5, 2));
        assert_eq!(list.reconstruct(3), p);
        let mults: Vec<u32> = list.factors.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 2]);
    }

    #[test]
    fn factor_rejects_zero_and_oversized_inputs() {
        assert!(matches!(factor(&Polynomial::zero(2)), Err(Error::Input(_))));
        assert!(matches!(
            factor(&curve("z1^5*z2^4 + z2 + 1")),
            Err(Error::Range(_))
        ));
        assert!(matches!(
            factor(&poly("z1^41 - 1", &["z1"])),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn solve_reports_a_double_point() {
        let pts = solve_zero_dim(&[curve("z1^2"), curve("z2 - 1")]).unwrap();
        assert_eq!(pts.len(), 1);
        let p = &pts[0];
        assert_eq!(p.multiplicity, 2);
        assert!(p.coordinates[0].norm() < 1e-6);
        assert!((p.coordinates[1] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!(p.residual < 1e-8);
    }

    #[test]
    fn solve_back_substitutes_a_line_section() {
        let pts = solve_zero_dim(&[curve("z1^2 - 1"), curve("z2 - z1")]).unwrap();
        assert_eq!(pts.len(), 2);
        let coords: Vec<(f64, f64)> = pts
            .iter()
            .map(|p| (p.coordinates[0].re, p.coordinates[1].re))
            .collect();
        assert!((coords[0].0 + 1.0).abs() < 1e-9 && (coords[0].1 + 1.0).abs() < 1e-9);
        assert!((coords[1].0 - 1.0).abs() < 1e-9 && (coords[1].1 - 1.0).abs() < 1e-9);
        for p in &pts {
            assert_eq!(p.multiplicity, 1);
            assert!(p.residual < 1e-10);
        }
    }

    #[test]
    fn solve_finds_conjugate_quadratic_roots() {
        let pts = solve_zero_dim(&[poly("z1^2 + 1", &["z1"])]).unwrap();
        assert_eq!(pts.len(), 2);
        assert!((pts[0].coordinates[0] - Complex64::new(0.0, -1.0)).norm() < 1e-9);
        assert!((pts[1].coordinates[0] - Complex64::new(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn solve_handles_a_three_variable_triangle() {
        let vars = ["z1", "z2", "z3"];
        let gens = [
            poly("z3^2 - 1", &vars),
            poly("z2 - z3", &vars),
            poly("z1 + z2*z3", &vars),
        ];
        let pts = solve_zero_dim(&gens).unwrap();
        assert_eq!(pts.len(), 2);
        for p in &pts {
            assert!((p.coordinates[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
            assert!(p.residual < 1e-10);
        }
    }

    #[test]
    fn solve_rejects_positive_dimensional_ideals_with_advice() {
        let err = solve_zero_dim(&[curve("z1*z2 - 1")]).unwrap_err();
        match err {
            Error::Input(msg) => {
                assert!(msg.contains("positive-dimensional"));
                assert!(msg.contains("puiseux_at_infinity"));
            }
            other => panic!("expected Input error, got {other:?}"),
        }
    }

    #[test]
    fn solve_returns_no_points_for_inconsistent_systems() {
        let pts = solve_zero_dim(&[curve("z1"), curve("z1 - 1")]).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn branch_report_pairs_exponents_with_the_gevrey_order() {
        let exp = puiseux_at_infinity(&curve("z2^2 - z1^3"), 4).unwrap();
        let weight = WeightSpec::Gevrey { alpha: rat(1, 2) };
        let report = branch_report(&exp.branches, &weight);
        assert_eq!(report.gevrey_s.as_deref(), Some("2"));
        assert_eq!(report.label, BRANCH_REPORT_LABEL);
        assert_eq!(report.branches.len(), 2);
        for b in &report.branches {
            assert_eq!(b.leading_exponent.as_deref(), Some("3/2"));
            assert_eq!(b.ramification, 2);
        }
        let json = serde_json::to_value(&report).unwrap();
        let term = &json["branches"][0]["terms"][0];
        assert_eq!(term["exponent"], "3/2");
        assert_eq!(term["coefficient"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn branch_report_flags_real_branches_and_empty_lists() {
        let exp = puiseux_at_infinity(&curve("z2^2 - z1^2"), 4).unwrap();
        let weight = WeightSpec::LogPow { beta: rat(2, 1) };
        let report = branch_report(&exp.branches, &weight);
        assert!(report.gevrey_s.is_none());
        assert!(report.branches.iter().all(|b| b.all_coefficients_real));

        let empty = branch_report(&[], &weight);
        assert!(empty.branches.is_empty());
        assert_eq!(empty.label, BRANCH_REPORT_LABEL);
    }

    #[test]
    fn branch_report_evaluates_a_plugged_in_predicate() {
        struct LeadingExponentAtMostS;
        impl BranchPredicate for LeadingExponentAtMostS {
            fn name(&self) -> &str {
                "leading-exponent-at-most-s"
            }
            fn evaluate(&self, branch: &PuiseuxBranch, weight: &WeightSpec) -> Option<bool> {
                let WeightSpec::Gevrey { alpha } = weight else {
                    return None;
                };
                let lead = branch.leading_exponent()?;
                Some(lead <= &alpha.recip())
            }
        }

        let exp = puiseux_at_infinity(&curve("z2^2 - z1^3"), 4).unwrap();
        let weight = WeightSpec::Gevrey { alpha: rat(1, 2) };
        let report =
            branch_report_with(&exp.branches, &weight, Some(&LeadingExponentAtMostS));
        assert_eq!(
            report.predicate.as_deref(),
            Some("leading-exponent-at-most-s")
        );
        assert!(report
            .branches
            .iter()
            .all(|b| b.predicate_verdict == Some(true)));
    }

    #[test]
    fn conjugacy_classes_cover_the_fiber_degree() {
        for src in ["z2^2 - z1^3", "z2^3 - z1", "z2^2 - z1^2", "z1*z2^2 - 1"] {
            let c = curve(src);
            let exp = puiseux_at_infinity(&c, 4).unwrap();
            let degree = c.degree_in(1).unwrap();
            assert_eq!(exp.branches.len() as u32, degree, "curve {src}");
            let class_ram_sum: f64 = exp
                .branches
                .iter()
                .map(|b| b.ramification as f64 / b.conjugacy_class_size as f64)
                .sum();
            assert_eq!(
                class_ram_sum.round() as u32,
                degree,
                "ramification sum for {src}"
            );
        }
    }
}
