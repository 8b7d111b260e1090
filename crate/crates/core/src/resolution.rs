//! Free resolutions of the module presented by a polynomial operator matrix,
//! with the derived invariants used elsewhere in the crate: integrability
//! conditions, annihilator ideals, characteristic varieties, the exponential
//! kernel test, and homology of the dualized complex.
//!
//! A system of PDEs `A(D) u = f` with `a1` equations in `a0` unknowns is
//! identified with its symbol matrix over `P = Q[z1..zN]`.  The module under
//! study is `M = coker(tA0: P^{a1} -> P^{a0})`, and the resolution is built by
//! iterating syzygy computations on the columns of each transpose until the
//! syzygy module vanishes.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groebner::{membership, syzygies, GroebnerConfig};
use crate::linalg::QMat;
use crate::poly::{
    monomials_up_to_degree, GaussRat, ModuleElement, Monomial, Polynomial, Rat, TermOrder,
};

/// Matrix of polynomials, row major.  Rows index equations and columns index
/// unknowns when the matrix plays the role of a system symbol `A0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorMatrix {
    n_vars: usize,
    entries: Vec<Vec<Polynomial>>,
}

impl OperatorMatrix {
    pub fn new(n_vars: usize, entries: Vec<Vec<Polynomial>>) -> Result<Self> {
        if entries.is_empty() || entries[0].is_empty() {
            return Err(Error::Input(
                "operator matrix must have at least one row and one column".into(),
            ));
        }
        let cols = entries[0].len();
        for row in &entries {
            if row.len() != cols {
                return Err(Error::Input("operator matrix rows have unequal lengths".into()));
            }
            for p in row {
                if p.n_vars() != n_vars {
                    return Err(Error::Input(format!(
                        "matrix entry uses {} variables, expected {}",
                        p.n_vars(),
                        n_vars
                    )));
                }
            }
        }
        Ok(OperatorMatrix { n_vars, entries })
    }

    /// Matrix with no columns, the zero map into `P^rows`.
    pub fn empty_cols(n_vars: usize, rows: usize) -> Self {
        OperatorMatrix {
            n_vars,
            entries: vec![Vec::new(); rows],
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn entry(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r][c]
    }

    pub fn entries(&self) -> &[Vec<Polynomial>] {
        &self.entries
    }

    pub fn transpose(&self) -> OperatorMatrix {
        let rows = self.rows();
        let cols = self.cols();
        let entries = (0..cols)
            .map(|c| (0..rows).map(|r| self.entries[r][c].clone()).collect())
            .collect();
        OperatorMatrix {
            n_vars: self.n_vars,
            entries,
        }
    }

    /// Column `c` as an element of `P^rows`.
    pub fn column(&self, c: usize) -> ModuleElement {
        ModuleElement::from_components((0..self.rows()).map(|r| self.entries[r][c].clone()).collect())
    }

    pub fn columns(&self) -> Vec<ModuleElement> {
        (0..self.cols()).map(|c| self.column(c)).collect()
    }

    /// Matrix whose columns are the given elements (all of rank `rows`).
    pub fn from_columns(n_vars: usize, rows: usize, cols: &[ModuleElement]) -> Self {
        if cols.is_empty() {
            return Self::empty_cols(n_vars, rows);
        }
        let entries = (0..rows)
            .map(|r| cols.iter().map(|v| v.component(r).clone()).collect())
            .collect();
        OperatorMatrix {
            n_vars,
            entries,
        }
    }

    pub fn mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.cols() != other.rows() {
            return Err(Error::Input("matrix product dimension mismatch".into()));
        }
        let entries = (0..self.rows())
            .map(|r| {
                (0..other.cols())
                    .map(|c| {
                        let mut acc = Polynomial::zero(self.n_vars);
                        for k in 0..self.cols() {
                            acc = acc.add(&self.entries[r][k].mul(&other.entries[k][c]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(OperatorMatrix {
            n_vars: self.n_vars,
            entries,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Polynomial::is_zero)
    }
}

/// Why a column of the presented transpose was dropped before resolving.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneKind {
    /// The equation's symbol row was identically zero.
    ZeroRow,
    /// The equation was a polynomial combination of the remaining ones, found
    /// through a syzygy with a constant coefficient at this position.
    Dependent,
}

#[derive(Debug, Clone)]
pub struct ResolutionStep {
    /// Composite of consecutive maps is the zero matrix.
    pub composition_zero: bool,
    /// Kernel elements of degree at most this bound were checked for
    /// membership in the image.
    pub exactness_degree: u32,
    /// Dimension of the checked kernel slice.
    pub kernel_slice_dim: usize,
    /// Every checked kernel element lies in the image.
    pub exact_on_slice: bool,
}

/// Exact sequence `0 -> P^{a_d} -> ... -> P^{a_1} -> P^{a_0} -> M -> 0`
/// stored through the maps `tA_j: P^{a_{j+1}} -> P^{a_j}`.
#[derive(Debug, Clone)]
pub struct FreeResolution {
    n_vars: usize,
    order: TermOrder,
    maps: Vec<OperatorMatrix>,
    ranks: Vec<usize>,
    steps: Vec<ResolutionStep>,
    free_module: bool,
    pruned_equations: Vec<(usize, PruneKind)>,
}

impl FreeResolution {
    /// Number of maps, the length `d` of the resolution.
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    /// Map `tA_j`, a matrix of shape `a_j x a_{j+1}`.
    pub fn map(&self, j: usize) -> &OperatorMatrix {
        &self.maps[j]
    }

    pub fn maps(&self) -> &[OperatorMatrix] {
        &self.maps
    }

    /// Free ranks `a_0, ..., a_d`.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn steps(&self) -> &[ResolutionStep] {
        &self.steps
    }

    /// True when the presented module is free because every equation row was
    /// zero or dependent.
    pub fn is_free_module(&self) -> bool {
        self.free_module
    }

    /// Original equation indices dropped before resolving, with the reason.
    pub fn pruned_equations(&self) -> &[(usize, PruneKind)] {
        &self.pruned_equations
    }

    pub fn all_steps_certified(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.composition_zero && s.exact_on_slice)
    }
}

/// Degree bound for the kernel-slice exactness certificates.
const CERT_DEGREE: u32 = 3;

/// Build a free resolution of `M = coker(tA0)` by iterated syzygy
/// computations.  `a0` is an `a1 x a0` matrix whose rows are the symbols of
/// the equations.
pub fn hilbert_resolution(
    a0: &OperatorMatrix,
    order: &TermOrder,
    config: &GroebnerConfig,
) -> Result<FreeResolution> {
    let n_vars = a0.n_vars();
    let rank0 = a0.cols();
    let t0 = a0.transpose();

    let mut pruned: Vec<(usize, PruneKind)> = Vec::new();
    let mut kept: Vec<usize> = Vec::new();
    let mut gens: Vec<ModuleElement> = Vec::new();
    for c in 0..t0.cols() {
        let col = t0.column(c);
        if col.is_zero() {
            pruned.push((c, PruneKind::ZeroRow));
        } else {
            kept.push(c);
            gens.push(col);
        }
    }

    // A generator whose syzygy coefficient is a nonzero constant is a
    // polynomial combination of the others; dropping it keeps the module and
    // keeps the resolution length within the variable count.
    loop {
        if gens.is_empty() {
            break;
        }
        let syz = syzygies(&gens, order, config)?;
        let mut dependent = None;
        'rows: for row in syz.rows() {
            for (k, comp) in row.components().iter().enumerate() {
                if !comp.is_zero() && comp.total_degree() == Some(0) {
                    dependent = Some(k);
                    break 'rows;
                }
            }
        }
        match dependent {
            Some(k) => {
                pruned.push((kept[k], PruneKind::Dependent));
                kept.remove(k);
                gens.remove(k);
            }
            None => break,
        }
    }
    pruned.sort_by_key(|(idx, _)| *idx);

    if gens.is_empty() {
        // Every equation vanished: M = P^{a0} is free and the resolution is
        // the zero map from the trivial free module.
        return Ok(FreeResolution {
            n_vars,
            order: order.clone(),
            maps: vec![OperatorMatrix::empty_cols(n_vars, rank0)],
            ranks: vec![rank0, 0],
            steps: vec![ResolutionStep {
                composition_zero: true,
                exactness_degree: CERT_DEGREE,
                kernel_slice_dim: 0,
                exact_on_slice: true,
            }],
            free_module: true,
            pruned_equations: pruned,
        });
    }

    let mut maps = vec![OperatorMatrix::from_columns(n_vars, rank0, &gens)];
    let mut ranks = vec![rank0, gens.len()];
    let mut current = gens;
    loop {
        let syz = syzygies(&current, order, config)?;
        if syz.is_empty() {
            break;
        }
        let rows: Vec<ModuleElement> = syz.rows().to_vec();
        maps.push(OperatorMatrix::from_columns(n_vars, current.len(), &rows));
        ranks.push(rows.len());
        current = rows;
        if maps.len() > n_vars {
            return Err(Error::Invariant(format!(
                "resolution length exceeded the variable count {}",
                n_vars
            )));
        }
    }

    let mut steps = Vec::new();
    for j in 0..maps.len() {
        steps.push(certify_step(&maps, j, order, config)?);
    }

    Ok(FreeResolution {
        n_vars,
        order: order.clone(),
        maps,
        ranks,
        steps,
        free_module: false,
        pruned_equations: pruned,
    })
}

/// Certificate for exactness at `P^{a_{j+1}}`: the composite
/// `tA_j . tA_{j+1}` vanishes and every kernel element of `tA_j` with degree
/// at most `CERT_DEGREE` lies in the column module of `tA_{j+1}`.  For the
/// last map the kernel slice must be zero.
fn certify_step(
    maps: &[OperatorMatrix],
    j: usize,
    order: &TermOrder,
    config: &GroebnerConfig,
) -> Result<ResolutionStep> {
    let composition_zero = if j + 1 < maps.len() {
        maps[j].mul(&maps[j + 1])?.is_zero()
    } else {
        true
    };

    let kernel = kernel_slice(&maps[j], CERT_DEGREE);
    let kernel_slice_dim = kernel.len();
    let exact_on_slice = if j + 1 < maps.len() {
        let image_gens = maps[j + 1].columns();
        let mut ok = true;
        for v in &kernel {
            if !membership(v, &image_gens, order, config)? {
                ok = false;
                break;
            }
        }
        ok
    } else {
        kernel.is_empty()
    };

    Ok(ResolutionStep {
        composition_zero,
        exactness_degree: CERT_DEGREE,
        kernel_slice_dim,
        exact_on_slice,
    })
}

/// Basis of the space `{ v in P^{cols} : M v = 0, deg v <= d }`, computed by
/// exact linear algebra over the monomial coefficient space.
pub fn kernel_slice(m: &OperatorMatrix, d: u32) -> Vec<ModuleElement> {
    let n_vars = m.n_vars();
    let cols = m.cols();
    if cols == 0 {
        return Vec::new();
    }
    let monos = monomials_up_to_degree(n_vars, d);
    let unknowns: Vec<(usize, Monomial)> = (0..cols)
        .flat_map(|c| monos.iter().cloned().map(move |mo| (c, mo)))
        .collect();

    let max_entry_deg = m
        .entries()
        .iter()
        .flatten()
        .filter_map(Polynomial::total_degree)
        .max()
        .unwrap_or(0);
    let out_monos = monomials_up_to_degree(n_vars, d + max_entry_deg);
    let mono_index: std::collections::BTreeMap<&Monomial, usize> =
        out_monos.iter().enumerate().map(|(i, mo)| (mo, i)).collect();

    let n_rows = m.rows() * out_monos.len();
    let mut mat = QMat::zero(n_rows, unknowns.len());
    for (col_idx, (c, mo)) in unknowns.iter().enumerate() {
        for r in 0..m.rows() {
            let contrib = m.entry(r, *c).mul_term(mo, &Rat::from_integer(1.into()));
            for (prod_mono, coeff) in contrib.terms() {
                let row_idx = r * out_monos.len() + mono_index[prod_mono];
                mat.set(row_idx, col_idx, coeff.clone());
            }
        }
    }

    mat.nullspace()
        .into_iter()
        .map(|vec| {
            let mut comps = vec![Polynomial::zero(n_vars); cols];
            for (i, coeff) in vec.iter().enumerate() {
                if !coeff.is_zero() {
                    let (c, mo) = &unknowns[i];
                    comps[*c].add_term(mo.clone(), coeff.clone());
                }
            }
            ModuleElement::from_components(comps)
        })
        .collect()
}

/// First-order integrability conditions of the system, read off the second
/// map of the resolution.
#[derive(Debug, Clone)]
pub struct OverdeterminationReport {
    /// The system admits nontrivial conditions `A1(D) f = 0`.
    pub overdetermined: bool,
    /// Rows of `A1`, one polynomial row per condition over the kept
    /// equations.
    pub conditions: Vec<Vec<Polynomial>>,
    /// Human-readable operator form of each condition.
    pub rendered: Vec<String>,
    /// Equations dropped before resolving (zero or dependent rows); a
    /// dependent equation's data is recovered from the kept ones.
    pub dropped: Vec<(usize, PruneKind)>,
}

pub fn overdetermination_report(res: &FreeResolution) -> OverdeterminationReport {
    if res.length() < 2 {
        return OverdeterminationReport {
            overdetermined: false,
            conditions: Vec::new(),
            rendered: Vec::new(),
            dropped: res.pruned_equations().to_vec(),
        };
    }
    let a1 = res.map(1).transpose();
    let mut conditions = Vec::new();
    let mut rendered = Vec::new();
    for r in 0..a1.rows() {
        let row: Vec<Polynomial> = (0..a1.cols()).map(|c| a1.entry(r, c).clone()).collect();
        rendered.push(render_condition(&row));
        conditions.push(row);
    }
    OverdeterminationReport {
        overdetermined: true,
        conditions,
        rendered,
        dropped: res.pruned_equations().to_vec(),
    }
}

/// Render `sum_k p_k(D) f_{k+1} = 0` with `D` for the derivative symbols.
fn render_condition(row: &[Polynomial]) -> String {
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (k, p) in row.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let mut terms: Vec<(&Monomial, &Rat)> = p.terms().collect();
        terms.sort_by(|a, b| {
            b.0.total_degree()
                .cmp(&a.0.total_degree())
                .then_with(|| b.0.cmp(a.0))
        });
        for (mono, coeff) in terms {
            let negative = coeff < &Rat::from_integer(0.into());
            let abs = if negative { -coeff.clone() } else { coeff.clone() };
            let mut piece = String::new();
            if abs != Rat::from_integer(1.into()) {
                piece.push_str(&abs.to_string());
                piece.push('*');
            }
            if !mono.is_one() {
                piece.push_str(&render_derivative(mono));
                piece.push(' ');
            }
            piece.push_str(&format!("f{}", k + 1));
            parts.push((negative, piece));
        }
    }
    if parts.is_empty() {
        return "0 = 0".into();
    }
    let mut out = String::new();
    for (i, (negative, piece)) in parts.iter().enumerate() {
        if i == 0 {
            if *negative {
                out.push('-');
            }
        } else if *negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(piece);
    }
    out.push_str(" = 0");
    out
}

fn render_derivative(mono: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in mono.exps().iter().enumerate() {
        if e == 1 {
            parts.push(format!("D{}", i + 1));
        } else if e > 1 {
            parts.push(format!("D{}^{}", i + 1, e));
        }
    }
    parts.join("*")
}

/// Generators of the annihilator ideal `Ann(M)`, returned as the reduced
/// basis under the given order.  An empty list means the zero ideal.
pub fn annihilator(
    a0: &OperatorMatrix,
    order: &TermOrder,
    config: &GroebnerConfig,
) -> Result<Vec<Polynomial>> {
    let t0 = a0.transpose();
    let rank = a0.cols();
    let n_vars = a0.n_vars();
    let gens: Vec<ModuleElement> = t0.columns().into_iter().filter(|c| !c.is_zero()).collect();
    if gens.is_empty() {
        return Ok(Vec::new());
    }

    // Ann(M) is the intersection over k of the quotient ideals
    // (column module : e_k), and each quotient is read off the first
    // components of the syzygies of [e_k, columns].
    let mut ideals: Vec<Vec<Polynomial>> = Vec::new();
    for k in 0..rank {
        let mut augmented = vec![ModuleElement::unit(rank, k, Polynomial::one(n_vars))];
        augmented.extend(gens.iter().cloned());
        let syz = syzygies(&augmented, order, config)?;
        let mut quotient: Vec<Polynomial> = syz
            .rows()
            .iter()
            .map(|row| row.component(0).clone())
            .filter(|p| !p.is_zero())
            .collect();
        quotient.sort_by_key(|p| p.to_text());
        quotient.dedup();
        if quotient.is_empty() {
            return Ok(Vec::new());
        }
        ideals.push(quotient);
    }

    let mut acc = ideals[0].clone();
    for next in &ideals[1..] {
        acc = intersect_ideals(&acc, next, config)?;
        if acc.is_empty() {
            return Ok(Vec::new());
        }
    }

    let elements: Vec<ModuleElement> = acc
        .into_iter()
        .map(|p| ModuleElement::from_components(vec![p]))
        .collect();
    let basis = crate::groebner::buchberger(&elements, order, config)?;
    Ok(basis
        .elements()
        .iter()
        .map(|e| e.component(0).clone())
        .collect())
}

/// Intersection of two ideals through the auxiliary-variable construction:
/// with a fresh variable `t`, `I cap J = (t I + (1 - t) J) cap Q[z]`, and the
/// contraction is read off a lex basis that eliminates `t`.
fn intersect_ideals(
    lhs: &[Polynomial],
    rhs: &[Polynomial],
    config: &GroebnerConfig,
) -> Result<Vec<Polynomial>> {
    if lhs.is_empty() || rhs.is_empty() {
        return Ok(Vec::new());
    }
    let n_vars = lhs[0].n_vars();
    let lift = |p: &Polynomial, with_t: bool| -> Polynomial {
        // Map p(z) into Q[t, z] with t in position 0, multiplied by t or by
        // (1 - t).
        let mut shifted = Polynomial::zero(n_vars + 1);
        for (mono, coeff) in p.terms() {
            let mut exps = vec![0u32];
            exps.extend_from_slice(mono.exps());
            shifted.add_term(Monomial::from_exps(exps), coeff.clone());
        }
        let t = Polynomial::var(n_vars + 1, 0);
        if with_t {
            shifted.mul(&t)
        } else {
            shifted.mul(&Polynomial::one(n_vars + 1).sub(&t))
        }
    };

    let mut gens: Vec<ModuleElement> = Vec::new();
    for p in lhs {
        gens.push(ModuleElement::from_components(vec![lift(p, true)]));
    }
    for q in rhs {
        gens.push(ModuleElement::from_components(vec![lift(q, false)]));
    }

    let lex = TermOrder::lex();
    let basis = crate::groebner::buchberger(&gens, &lex, config)?;
    let mut out = Vec::new();
    for e in basis.elements() {
        let p = e.component(0);
        if p.terms().all(|(m, _)| m.exps()[0] == 0) {
            let mut dropped = Polynomial::zero(n_vars);
            for (mono, coeff) in p.terms() {
                let exps = mono.exps()[1..].to_vec();
                dropped.add_term(Monomial::from_exps(exps), coeff.clone());
            }
            out.push(dropped);
        }
    }
    out.sort_by_key(Polynomial::to_text);
    out.dedup();
    Ok(out)
}

/// Characteristic variety data: the annihilator generators with variables
/// negated, so that exponential solutions `exp(<x, zeta>)` of the system
/// correspond to points of the zero set.
#[derive(Debug, Clone)]
pub struct CharVariety {
    pub generators: Vec<Polynomial>,
    /// True when the annihilator is the zero ideal and the variety is all of
    /// affine space.
    pub full_space: bool,
}

pub fn characteristic_variety(annihilator_gens: &[Polynomial]) -> CharVariety {
    CharVariety {
        generators: annihilator_gens.iter().map(Polynomial::sign_flip).collect(),
        full_space: annihilator_gens.is_empty(),
    }
}

/// Exact test that `exp(<x, zeta>)` solves the scalar system: every equation
/// symbol must vanish at the negated point.  Requires one unknown.
pub fn exponential_kernel_test(a0: &OperatorMatrix, zeta: &[GaussRat]) -> Result<bool> {
    if a0.cols() != 1 {
        return Err(Error::Input(
            "exponential kernel test requires a system in one unknown".into(),
        ));
    }
    if zeta.len() != a0.n_vars() {
        return Err(Error::Input(format!(
            "point has {} coordinates, expected {}",
            zeta.len(),
            a0.n_vars()
        )));
    }
    let negated: Vec<GaussRat> = zeta.iter().map(GaussRat::neg).collect();
    for r in 0..a0.rows() {
        if !a0.entry(r, 0).eval_gaussian(&negated)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Floating-point variant of the kernel test with a relative tolerance.
pub fn exponential_kernel_test_f64(
    a0: &OperatorMatrix,
    zeta: &[num_complex::Complex64],
    rel_tol: f64,
) -> Result<bool> {
    if a0.cols() != 1 {
        return Err(Error::Input(
            "exponential kernel test requires a system in one unknown".into(),
        ));
    }
    if zeta.len() != a0.n_vars() {
        return Err(Error::Input(format!(
            "point has {} coordinates, expected {}",
            zeta.len(),
            a0.n_vars()
        )));
    }
    let negated: Vec<num_complex::Complex64> = zeta.iter().map(|z| -z).collect();
    for r in 0..a0.rows() {
        let p = a0.entry(r, 0);
        let value = p.eval_complex(&negated)?;
        let scale = p.eval_scale(&negated)?.max(1.0);
        if value.norm() > rel_tol * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Presentation of one homology module of the dualized complex.
#[derive(Debug, Clone)]
pub struct ExtPresentation {
    /// Homological position, from 0 at the start of the dual complex.
    pub position: usize,
    /// Kernel generators, elements of the free module at this position.
    pub generators: Vec<ModuleElement>,
    /// Relation rows over the generators; coefficients of combinations that
    /// land in the image from the previous position.
    pub relations: Vec<Vec<Polynomial>>,
    pub is_zero: bool,
    pub display: String,
}

/// Homology of the complex obtained by transposing every map of the
/// resolution, presented as generators and relations at each position.
pub fn dual_complex_homology(
    res: &FreeResolution,
    config: &GroebnerConfig,
) -> Result<Vec<ExtPresentation>> {
    let order = res.order().clone();
    let d = res.length();
    let n_vars = res.n_vars();
    let mut out = Vec::new();

    for j in 0..=d {
        let rank_j = res.ranks()[j];
        if rank_j == 0 {
            out.push(ExtPresentation {
                position: j,
                generators: Vec::new(),
                relations: Vec::new(),
                is_zero: true,
                display: "0".into(),
            });
            continue;
        }

        // Outgoing dual map B_j = transpose(tA_j) sends P^{a_j} to
        // P^{a_{j+1}}; its kernel generators are the syzygies of the images
        // of the coordinate vectors.  Past the last map, or when the next
        // free module is trivial, the kernel is everything.
        let kernel_gens: Vec<ModuleElement> = if j < d && res.map(j).cols() > 0 {
            let b = res.map(j).transpose();
            let images: Vec<ModuleElement> = (0..rank_j).map(|c| b.column(c)).collect();
            let syz = syzygies(&images, &order, config)?;
            syz.rows().to_vec()
        } else {
            (0..rank_j)
                .map(|k| ModuleElement::unit(rank_j, k, Polynomial::one(n_vars)))
                .collect()
        };

        let image_gens: Vec<ModuleElement> = if j > 0 {
            res.map(j - 1)
                .transpose()
                .columns()
                .into_iter()
                .filter(|c| !c.is_zero())
                .collect()
        } else {
            Vec::new()
        };

        let nonzero_kernel: Vec<ModuleElement> =
            kernel_gens.into_iter().filter(|g| !g.is_zero()).collect();

        let mut is_zero = true;
        for g in &nonzero_kernel {
            let inside = if image_gens.is_empty() {
                false
            } else {
                membership(g, &image_gens, &order, config)?
            };
            if !inside {
                is_zero = false;
                break;
            }
        }
        if nonzero_kernel.is_empty() {
            is_zero = true;
        }

        if is_zero {
            out.push(ExtPresentation {
                position: j,
                generators: Vec::new(),
                relations: Vec::new(),
                is_zero: true,
                display: "0".into(),
            });
            continue;
        }

        let relations = homology_relations(&nonzero_kernel, &image_gens, &order, config)?;
        let display = render_presentation(&nonzero_kernel, &relations);
        out.push(ExtPresentation {
            position: j,
            generators: nonzero_kernel,
            relations,
            is_zero: false,
            display,
        });
    }
    Ok(out)
}

/// Relations among the kernel generators modulo the image: coefficient rows
/// `c` with `sum c_i k_i` in the image module.
fn homology_relations(
    kernel: &[ModuleElement],
    image: &[ModuleElement],
    order: &TermOrder,
    config: &GroebnerConfig,
) -> Result<Vec<Vec<Polynomial>>> {
    let m = kernel.len();
    let mut combined: Vec<ModuleElement> = kernel.to_vec();
    combined.extend(image.iter().cloned());
    let syz = syzygies(&combined, order, config)?;
    let mut rows: Vec<Vec<Polynomial>> = Vec::new();
    let mut seen = BTreeSet::new();
    for row in syz.rows() {
        let head: Vec<Polynomial> = (0..m).map(|i| row.component(i).clone()).collect();
        if head.iter().all(Polynomial::is_zero) {
            continue;
        }
        let key = ModuleElement::from_components(head.clone()).canonical_key();
        if seen.insert(key) {
            rows.push(head);
        }
    }
    // Discard relation rows already generated by the remaining ones.
    let mut idx = 0;
    while idx < rows.len() {
        if rows.len() == 1 {
            break;
        }
        let candidate = ModuleElement::from_components(rows[idx].clone());
        let others: Vec<ModuleElement> = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, r)| ModuleElement::from_components(r.clone()))
            .collect();
        if membership(&candidate, &others, order, config)? {
            rows.remove(idx);
        } else {
            idx += 1;
        }
    }
    Ok(rows)
}

fn render_presentation(kernel: &[ModuleElement], relations: &[Vec<Polynomial>]) -> String {
    if relations.is_empty() {
        return if kernel.len() == 1 {
            "P".into()
        } else {
            format!("P^{}", kernel.len())
        };
    }
    if kernel.len() == 1 {
        let mut items: Vec<String> = relations.iter().map(|r| r[0].to_string()).collect();
        items.sort();
        return format!("P/({})", items.join(", "));
    }
    format!(
        "cokernel of a {}x{} relation matrix on {} generators",
        relations.len(),
        kernel.len(),
        kernel.len()
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn grad2() -> OperatorMatrix {
        // Gradient in two variables: two equations D1 u = f1, D2 u = f2.
        let z1 = Polynomial::var(2, 0);
        let z2 = Polynomial::var(2, 1);
        OperatorMatrix::new(2, vec![vec![z1], vec![z2]]).unwrap()
    }

    fn grad3() -> OperatorMatrix {
        let z1 = Polynomial::var(3, 0);
        let z2 = Polynomial::var(3, 1);
        let z3 = Polynomial::var(3, 2);
        OperatorMatrix::new(3, vec![vec![z1], vec![z2], vec![z3]]).unwrap()
    }

    #[test]
    fn gradient_two_vars_resolves_with_ranks_1_2_1() {
        let res = hilbert_resolution(&grad2(), &TermOrder::grevlex(), &GroebnerConfig::default())
            .unwrap();
        assert_eq!(res.ranks(), &[1, 2, 1]);
        assert_eq!(res.length(), 2);
        assert!(res.all_steps_certified());
        assert!(!res.is_free_module());
        let report = overdetermination_report(&res);
        assert!(report.overdetermined);
        assert_eq!(report.rendered, vec!["D2 f1 - D1 f2 = 0"]);
    }

    #[test]
    fn gradient_three_vars_resolves_with_koszul_ranks() {
        let res = hilbert_resolution(&grad3(), &TermOrder::grevlex(), &GroebnerConfig::default())
            .unwrap();
        assert_eq!(res.ranks(), &[1, 3, 3, 1]);
        assert!(res.all_steps_certified());
        let report = overdetermination_report(&res);
        assert!(report.overdetermined);
        assert_eq!(report.conditions.len(), 3);
    }

    #[test]
    fn single_equation_is_not_overdetermined() {
        // Heat operator symbol: z1 - z2^2.
        let p = Polynomial::var(2, 0).sub(&Polynomial::var(2, 1).pow(2));
        let m = OperatorMatrix::new(2, vec![vec![p]]).unwrap();
        let res =
            hilbert_resolution(&m, &TermOrder::grevlex(), &GroebnerConfig::default()).unwrap();
        assert_eq!(res.ranks(), &[1, 1]);
        assert_eq!(res.length(), 1);
        assert!(res.all_steps_certified());
        assert!(!overdetermination_report(&res).overdetermined);
    }

    #[test]
    fn zero_system_is_a_free_module() {
        let m = OperatorMatrix::new(2, vec![vec![Polynomial::zero(2)]]).unwrap();
        let res =
            hilbert_resolution(&m, &TermOrder::grevlex(), &GroebnerConfig::default()).unwrap();
        assert!(res.is_free_module());
        assert_eq!(res.ranks(), &[1, 0]);
        assert_eq!(res.pruned_equations(), &[(0, PruneKind::ZeroRow)]);
        assert!(!overdetermination_report(&res).overdetermined);
    }

    #[test]
    fn duplicate_equations_are_dropped_as_dependent() {
        let z1 = Polynomial::var(1, 0);
        let m = OperatorMatrix::new(1, vec![vec![z1.clone()], vec![z1]]).unwrap();
        let res =
            hilbert_resolution(&m, &TermOrder::grevlex(), &GroebnerConfig::default()).unwrap();
        assert_eq!(res.ranks(), &[1, 1]);
        assert_eq!(res.length(), 1);
        assert_eq!(res.pruned_equations().len(), 1);
        assert_eq!(res.pruned_equations()[0].1, PruneKind::Dependent);
        assert!(res.all_steps_certified());
    }

    #[test]
    fn diagonal_system_in_two_unknowns() {
        // D1 u1 = f1, D2 u2 = f2: no coupling, no conditions.
        let z1 = Polynomial::var(2, 0);
        let z2 = Polynomial::var(2, 1);
        let zero = Polynomial::zero(2);
        let m = OperatorMatrix::new(
            2,
            vec![vec![z1, zero.clone()], vec![zero, z2]],
        )
        .unwrap();
        let res =
            hilbert_resolution(&m, &TermOrder::grevlex(), &GroebnerConfig::default()).unwrap();
        assert_eq!(res.ranks(), &[2, 2]);
        assert!(res.all_steps_certified());
        assert!(!overdetermination_report(&res).overdetermined);
    }

    #[test]
    fn kernel_slice_finds_the_curl_relation() {
        let t0 = grad2().transpose();
        let kernel = kernel_slice(&t0, 1);
        assert_eq!(kernel.len(), 1);
        let v = &kernel[0];
        // The slice basis spans (z2, -z1) up to scale.
        let cross = v.component(0).mul(&Polynomial::var(2, 0)).add(
            &v.component(1).mul(&Polynomial::var(2, 1)),
        );
        assert!(cross.is_zero());
    }

    #[test]
    fn annihilator_of_gradient_is_the_maximal_ideal() {
        let gens = annihilator(&grad2(), &TermOrder::grevlex(), &GroebnerConfig::default())
            .unwrap();
        let texts: Vec<String> = gens.iter().map(|p| p.to_string()).collect();
        assert_eq!(texts, vec!["z1", "z2"]);
    }

    #[test]
    fn annihilator_of_diagonal_system_is_the_product_ideal() {
        let z1 = Polynomial::var(2, 0);
        let z2 = Polynomial::var(2, 1);
        let zero = Polynomial::zero(2);
        let m = OperatorMatrix::new(
            2,
            vec![vec![z1, zero.clone()], vec![zero, z2]],
        )
        .unwrap();
        let gens =
            annihilator(&m, &TermOrder::grevlex(), &GroebnerConfig::default()).unwrap();
        let texts: Vec<String> = gens.iter().map(|p| p.to_string()).collect();
        assert_eq!(texts, vec!["z1*z2"]);
    }

    #[test]
    fn annihilator_of_free_module_is_zero() {
        let m = OperatorMatrix::new(2, vec![vec![Polynomial::zero(2)]]).unwrap();
        let gens =
            annihilator(&m, &TermOrder::grevlex(), &GroebnerConfig::default()).unwrap();
        assert!(gens.is_empty());
        assert!(characteristic_variety(&gens).full_space);
    }

    #[test]
    fn characteristic_variety_negates_the_annihilator() {
        let p = Polynomial::var(2, 0).add(&Polynomial::constant(2, rat(3, 1)));
        let cv = characteristic_variety(&[p]);
        assert_eq!(cv.generators[0].to_string(), "-z1 + 3");
        assert!(!cv.full_space);
    }

    #[test]
    fn exponential_kernel_test_on_heat_operator() {
        // Symbol z1 - z2^2 for D1 u = D2^2 u; exp(x1 + x2) is not a solution,
        // exp(x1 - x2) is checked through the sign convention: the symbol at
        // -zeta must vanish, so zeta = (-1, 1) works since 1 - 1 = 0.
        let p = Polynomial::var(2, 0).sub(&Polynomial::var(2, 1).pow(2));
        let m = OperatorMatrix::new(2, vec![vec![p]]).unwrap();
        let good = vec![
            GaussRat::from_rat(rat(-1, 1)),
            GaussRat::from_rat(rat(1, 1)),
        ];
        let bad = vec![
            GaussRat::from_rat(rat(1, 1)),
            GaussRat::from_rat(rat(1, 1)),
        ];
        assert!(exponential_kernel_test(&m, &good).unwrap());
        assert!(!exponential_kernel_test(&m, &bad).unwrap());
    }

    #[test]
    fn dual_complex_of_gradient_concentrates_at_the_end() {
        let res = hilbert_resolution(&grad2(), &TermOrder::grevlex(), &GroebnerConfig::default())
            .unwrap();
        let ext = dual_complex_homology(&res, &GroebnerConfig::default()).unwrap();
        assert_eq!(ext.len(), 3);
        assert!(ext[0].is_zero);
        assert!(ext[1].is_zero);
        assert!(!ext[2].is_zero);
        assert_eq!(ext[2].display, "P/(z1, z2)");
    }

    #[test]
    fn dual_complex_of_zero_system_is_free_at_position_zero() {
        let m = OperatorMatrix::new(2, vec![vec![Polynomial::zero(2)]]).unwrap();
        let res =
            hilbert_resolution(&m, &TermOrder::grevlex(), &GroebnerConfig::default()).unwrap();
        let ext = dual_complex_homology(&res, &GroebnerConfig::default()).unwrap();
        assert_eq!(ext[0].display, "P");
        assert!(!ext[0].is_zero);
        assert!(ext[1].is_zero);
    }
}
