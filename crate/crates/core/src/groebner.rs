//! Groebner bases for submodules of `P^a` over `P = Q[z1..zN]`, with
//! division, membership, and syzygy computation.
//!
//! Buchberger runs with the normal pair-selection strategy (smallest lcm
//! degree first), the coprime criterion on ideals, and the chain criterion
//! on modules. Every basis element carries its representation in terms of
//! the input generators, which gives the two-way membership certificate for
//! free and is what the syzygy conversion needs anyway. All tie-breaking is
//! by serialized term lists, so results are a canonical function of the
//! input and the order.

use std::collections::BTreeSet;

use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{ModuleElement, Monomial, Polynomial, Rat, TermOrder};

/// Resource guards for Buchberger runs.
#[derive(Clone, Copy, Debug)]
pub struct GroebnerConfig {
    /// Maximum number of S-pairs processed before giving up.
    pub max_pairs: usize,
    /// Maximum total degree of any reduced basis element.
    pub max_degree: u32,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            max_pairs: 50_000,
            max_degree: 64,
        }
    }
}

/// Progress counters carried by results and resource-cap errors.
#[derive(Clone, Copy, Debug, Default)]
pub struct GroebnerStats {
    pub pairs_processed: usize,
    pub pairs_skipped: usize,
    pub reductions_to_zero: usize,
    pub max_degree_seen: u32,
}

/// A reduced Groebner basis with representation rows over the inputs.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: TermOrder,
    elements: Vec<ModuleElement>,
    /// `elements[i] = sum_j reps[i][j] * gens[j]`.
    reps: Vec<Vec<Polynomial>>,
    gens: Vec<ModuleElement>,
    pub stats: GroebnerStats,
}

impl GroebnerBasis {
    pub fn elements(&self) -> &[ModuleElement] {
        &self.elements
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn generators(&self) -> &[ModuleElement] {
        &self.gens
    }

    /// Representation of `elements[i]` over the input generators.
    pub fn representation(&self, i: usize) -> &[Polynomial] {
        &self.reps[i]
    }

    /// Normal form and quotients of `f` against this basis.
    pub fn reduce(&self, f: &ModuleElement) -> (ModuleElement, Vec<Polynomial>) {
        reduce(f, &self.elements, &self.order)
    }

    /// Submodule membership via zero normal form.
    pub fn contains(&self, f: &ModuleElement) -> bool {
        self.reduce(f).0.is_zero()
    }
}

/// Divide `f` by `basis` under `order`: returns the normal form and one
/// quotient per basis element, so `f = sum_i q_i * basis_i + nf` exactly and
/// no term of `nf` is divisible by any basis leading term. Divisor choice is
/// always the first match in list order, so the result is deterministic for
/// a fixed basis order.
pub fn reduce(
    f: &ModuleElement,
    basis: &[ModuleElement],
    order: &TermOrder,
) -> (ModuleElement, Vec<Polynomial>) {
    let rank = f.rank();
    let n_vars = f.n_vars();
    let leads: Vec<Option<(usize, Monomial, Rat)>> = basis
        .iter()
        .map(|b| {
            assert_eq!(b.rank(), rank, "divisor rank mismatch");
            b.leading_term(order)
                .map(|(p, m, c)| (p, m.clone(), c.clone()))
        })
        .collect();
    let mut rest = f.clone();
    let mut normal = ModuleElement::zero(n_vars, rank);
    let mut quotients = vec![Polynomial::zero(n_vars); basis.len()];
    while let Some((pos, mono, coeff)) = rest
        .leading_term(order)
        .map(|(p, m, c)| (p, m.clone(), c.clone()))
    {
        let divisor = leads.iter().position(|l| match l {
            Some((bp, bm, _)) => *bp == pos && bm.divides(&mono),
            None => false,
        });
        match divisor {
            Some(i) => {
                let (_, bm, bc) = leads[i].as_ref().unwrap();
                let q_mono = bm.div_into(&mono);
                let q_coeff = &coeff / bc;
                rest = rest.sub(&basis[i].mul_term(&q_mono, &q_coeff));
                quotients[i].add_term(q_mono, q_coeff);
            }
            None => {
                let t = ModuleElement::unit(
                    rank,
                    pos,
                    Polynomial::from_terms(n_vars, [(mono.clone(), coeff.clone())]),
                );
                normal = normal.add(&t);
                rest = rest.sub(&t);
            }
        }
    }
    (normal, quotients)
}

/// Queue key ordering pairs by (lcm degree, lcm exponents, indices).
type PairKey = (u32, Vec<u32>, usize, usize);

struct Working {
    order: TermOrder,
    /// Monic basis elements with their leading terms.
    basis: Vec<ModuleElement>,
    leads: Vec<(usize, Monomial)>,
    /// Representation of each basis element over the input generators.
    reps: Vec<Vec<Polynomial>>,
    stats: GroebnerStats,
}

impl Working {
    fn lead(&self, i: usize) -> &(usize, Monomial) {
        &self.leads[i]
    }
}

/// Compute the reduced Groebner basis of the submodule generated by `gens`.
pub fn buchberger(
    gens: &[ModuleElement],
    order: &TermOrder,
    config: &GroebnerConfig,
) -> Result<GroebnerBasis> {
    if gens.is_empty() {
        return Err(Error::Input("empty generator list".into()));
    }
    let rank = gens[0].rank();
    let n_vars = gens[0].n_vars();
    if gens.iter().any(|g| g.rank() != rank) {
        return Err(Error::Input("generators have inconsistent ranks".into()));
    }
    if gens.iter().any(|g| g.n_vars() != n_vars) {
        return Err(Error::Input(
            "generators have inconsistent variable counts".into(),
        ));
    }

    let mut w = Working {
        order: order.clone(),
        basis: Vec::new(),
        leads: Vec::new(),
        reps: Vec::new(),
        stats: GroebnerStats::default(),
    };
    let mut queue: BTreeSet<PairKey> = BTreeSet::new();
    let mut popped: BTreeSet<(usize, usize)> = BTreeSet::new();

    for (j, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut rep = vec![Polynomial::zero(n_vars); gens.len()];
        rep[j] = Polynomial::one(n_vars);
        insert_element(&mut w, &mut queue, g.clone(), rep, config)?;
    }

    while let Some(key) = queue.iter().next().cloned() {
        queue.remove(&key);
        let (_, _, i, j) = key;
        popped.insert((i, j));
        w.stats.pairs_processed += 1;
        if w.stats.pairs_processed > config.max_pairs {
            return Err(cap_error(&w.stats, config));
        }

        let (pi, mi) = w.lead(i).clone();
        let (_, mj) = w.lead(j).clone();
        // Coprime criterion, sound for ideals only.
        if rank == 1 && mi.gcd_is_one(&mj) {
            w.stats.pairs_skipped += 1;
            continue;
        }
        // Chain criterion: some k with lead dividing the lcm, both subpairs
        // already popped.
        let lcm = mi.lcm(&mj);
        let chained = (0..w.basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let (pk, mk) = w.lead(k);
            *pk == pi
                && mk.divides(&lcm)
                && popped.contains(&sorted_pair(i, k))
                && popped.contains(&sorted_pair(j, k))
        });
        if chained {
            w.stats.pairs_skipped += 1;
            continue;
        }

        let (s, s_rep) = s_vector(&w, i, j, gens.len());
        let (nf, quotients) = reduce(&s, &w.basis, &w.order);
        if nf.is_zero() {
            w.stats.reductions_to_zero += 1;
            continue;
        }
        let mut rep = s_rep;
        for (k, q) in quotients.iter().enumerate() {
            if !q.is_zero() {
                for (r, base) in rep.iter_mut().zip(&w.reps[k]) {
                    *r = r.sub(&q.mul(base));
                }
            }
        }
        insert_element(&mut w, &mut queue, nf, rep, config)?;
    }

    interreduce(&mut w);
    sort_canonical(&mut w);
    certify(&w, gens)?;

    Ok(GroebnerBasis {
        order: w.order,
        elements: w.basis,
        reps: w.reps,
        gens: gens.to_vec(),
        stats: w.stats,
    })
}

fn sorted_pair(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn cap_error(stats: &GroebnerStats, config: &GroebnerConfig) -> Error {
    Error::ResourceCap(format!(
        "S-pair budget exhausted: {} pairs processed (cap {}), {} skipped, \
         {} reductions to zero, max degree seen {} (cap {})",
        stats.pairs_processed,
        config.max_pairs,
        stats.pairs_skipped,
        stats.reductions_to_zero,
        stats.max_degree_seen,
        config.max_degree
    ))
}

fn s_vector(w: &Working, i: usize, j: usize, n_gens: usize) -> (ModuleElement, Vec<Polynomial>) {
    let n_vars = w.basis[i].n_vars();
    let (_, mi) = w.lead(i);
    let (_, mj) = w.lead(j);
    let lcm = mi.lcm(mj);
    let ui = mi.div_into(&lcm);
    let uj = mj.div_into(&lcm);
    let one = Rat::one();
    let s = w.basis[i]
        .mul_term(&ui, &one)
        .sub(&w.basis[j].mul_term(&uj, &one));
    let mut rep = vec![Polynomial::zero(n_vars); n_gens];
    for ((r, a), b) in rep.iter_mut().zip(&w.reps[i]).zip(&w.reps[j]) {
        *r = a.mul_term(&ui, &one).sub(&b.mul_term(&uj, &one));
    }
    (s, rep)
}

fn insert_element(
    w: &mut Working,
    queue: &mut BTreeSet<PairKey>,
    elem: ModuleElement,
    rep: Vec<Polynomial>,
    config: &GroebnerConfig,
) -> Result<()> {
    let degree = elem.total_degree().unwrap_or(0);
    w.stats.max_degree_seen = w.stats.max_degree_seen.max(degree);
    if degree > config.max_degree {
        return Err(Error::ResourceCap(format!(
            "intermediate degree {} exceeds the cap {}: {} pairs processed, basis size {}",
            degree,
            config.max_degree,
            w.stats.pairs_processed,
            w.basis.len()
        )));
    }
    let (pos, mono, coeff) = {
        let (p, m, c) = elem.leading_term(&w.order).expect("nonzero element");
        (p, m.clone(), c.clone())
    };
    let monic = elem.scale(&(Rat::one() / &coeff));
    let rep: Vec<Polynomial> = rep.iter().map(|p| p.scale(&(Rat::one() / &coeff))).collect();
    let new_idx = w.basis.len();
    for k in 0..new_idx {
        let (pk, mk) = w.lead(k);
        if *pk == pos {
            let lcm = mk.lcm(&mono);
            queue.insert((lcm.total_degree(), lcm.exps().to_vec(), k, new_idx));
        }
    }
    w.basis.push(monic);
    w.leads.push((pos, mono));
    w.reps.push(rep);
    Ok(())
}

/// Reduce every element fully against the others until stable, keeping the
/// representation rows in sync; drops elements that reduce to zero.
fn interreduce(w: &mut Working) {
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < w.basis.len() {
            let elem = w.basis[i].clone();
            let rep = w.reps[i].clone();
            let mut others = w.basis.clone();
            let mut other_reps = w.reps.clone();
            others.remove(i);
            other_reps.remove(i);
            let (nf, quotients) = reduce(&elem, &others, &w.order);
            if nf == elem {
                i += 1;
                continue;
            }
            changed = true;
            w.basis.remove(i);
            w.leads.remove(i);
            w.reps.remove(i);
            if nf.is_zero() {
                continue;
            }
            let mut new_rep = rep;
            for (k, q) in quotients.iter().enumerate() {
                if !q.is_zero() {
                    for (r, base) in new_rep.iter_mut().zip(&other_reps[k]) {
                        *r = r.sub(&q.mul(base));
                    }
                }
            }
            let (pos, mono, coeff) = {
                let (p, m, c) = nf.leading_term(&w.order).expect("nonzero");
                (p, m.clone(), c.clone())
            };
            let inv = Rat::one() / coeff;
            w.basis.insert(i, nf.scale(&inv));
            w.leads.insert(i, (pos, mono));
            w.reps
                .insert(i, new_rep.iter().map(|p| p.scale(&inv)).collect());
            i += 1;
        }
        if !changed {
            break;
        }
    }
}

/// Canonical listing: ascending lead degree, descending lex within a degree,
/// serialized form as the final tie-break.
fn sort_canonical(w: &mut Working) {
    let mut idx: Vec<usize> = (0..w.basis.len()).collect();
    let lex = TermOrder::lex();
    idx.sort_by(|&a, &b| {
        let (pa, ma) = &w.leads[a];
        let (pb, mb) = &w.leads[b];
        ma.total_degree()
            .cmp(&mb.total_degree())
            .then_with(|| lex.cmp_module((*pb, mb), (*pa, ma)))
            .then_with(|| w.basis[a].canonical_key().cmp(&w.basis[b].canonical_key()))
    });
    w.basis = idx.iter().map(|&i| w.basis[i].clone()).collect();
    w.leads = idx.iter().map(|&i| w.leads[i].clone()).collect();
    w.reps = idx.iter().map(|&i| w.reps[i].clone()).collect();
}

/// Two-way membership certificate: inputs reduce to zero against the basis,
/// and every basis element's representation row reconstructs it exactly.
fn certify(w: &Working, gens: &[ModuleElement]) -> Result<()> {
    for g in gens {
        let (nf, _) = reduce(g, &w.basis, &w.order);
        if !nf.is_zero() {
            return Err(Error::Invariant(
                "input generator does not reduce to zero against its own basis".into(),
            ));
        }
    }
    for (elem, rep) in w.basis.iter().zip(&w.reps) {
        let mut acc = ModuleElement::zero(elem.n_vars(), elem.rank());
        for (q, g) in rep.iter().zip(gens) {
            if !q.is_zero() {
                acc = acc.add(&g.scale_poly(q));
            }
        }
        if &acc != elem {
            return Err(Error::Invariant(
                "representation row fails to reconstruct basis element".into(),
            ));
        }
    }
    Ok(())
}

/// Submodule membership: does `f` lie in the module generated by `gens`?
pub fn membership(
    f: &ModuleElement,
    gens: &[ModuleElement],
    order: &TermOrder,
    config: &GroebnerConfig,
) -> Result<bool> {
    let gb = buchberger(gens, order, config)?;
    Ok(gb.contains(f))
}

/// Generating set for the syzygy module of `gens`.
#[derive(Clone, Debug)]
pub struct SyzygyBasis {
    /// Rows of rank `gens.len()`: `sum_j row[j] * gens[j] = 0`.
    rows: Vec<ModuleElement>,
}

impl SyzygyBasis {
    pub fn rows(&self) -> &[ModuleElement] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Compute a canonical generating set of the syzygy module of `gens`.
///
/// Route: extended Buchberger gives the basis `h` with `h = C g`; division
/// gives `g = D h`; Schreyer's theorem makes the S-pair reduction syzygies a
/// generating set for `Syz(h)`, and `{z C} + rows of (I - D C)` then
/// generate `Syz(g)`. Redundant rows are pruned by membership in the span
/// of the remaining rows.
pub fn syzygies(
    gens: &[ModuleElement],
    order: &TermOrder,
    config: &GroebnerConfig,
) -> Result<SyzygyBasis> {
    let s = gens.len();
    if s == 0 {
        return Err(Error::Input("empty generator list".into()));
    }
    let n_vars = gens[0].n_vars();
    let gb = buchberger(gens, order, config)?;
    let t = gb.elements.len();

    // g_i = sum_k D[i][k] h_k.
    let mut d_rows: Vec<Vec<Polynomial>> = Vec::with_capacity(s);
    for g in gens {
        let (nf, q) = gb.reduce(g);
        if !nf.is_zero() {
            return Err(Error::Invariant(
                "generator does not reduce to zero against its own basis".into(),
            ));
        }
        d_rows.push(q);
    }

    let mut rows: Vec<ModuleElement> = Vec::new();

    // Schreyer syzygies of the basis, converted through C.
    for k in 0..t {
        for l in (k + 1)..t {
            let (pk, mk) = (&gb_lead(&gb, k).0, &gb_lead(&gb, k).1);
            let (pl, ml) = (&gb_lead(&gb, l).0, &gb_lead(&gb, l).1);
            if pk != pl {
                continue;
            }
            let lcm = mk.lcm(ml);
            let uk = mk.div_into(&lcm);
            let ul = ml.div_into(&lcm);
            let one = Rat::one();
            let sv = gb.elements[k]
                .mul_term(&uk, &one)
                .sub(&gb.elements[l].mul_term(&ul, &one));
            let (nf, q) = gb.reduce(&sv);
            if !nf.is_zero() {
                return Err(Error::Invariant(
                    "S-vector of basis pair has nonzero normal form".into(),
                ));
            }
            // z over P^t: u_k e_k - u_l e_l - q.
            let mut z = vec![Polynomial::zero(n_vars); t];
            z[k].add_term(uk, Rat::one());
            z[l].add_term(ul, -Rat::one());
            for (zm, qm) in z.iter_mut().zip(&q) {
                *zm = zm.sub(qm);
            }
            // Convert to a syzygy of the generators: row_j = sum_m z_m C[m][j].
            let mut row = vec![Polynomial::zero(n_vars); s];
            for (zm, c_row) in z.iter().zip(&gb.reps) {
                if zm.is_zero() {
                    continue;
                }
                for (rj, cj) in row.iter_mut().zip(c_row) {
                    if !cj.is_zero() {
                        *rj = rj.add(&zm.mul(cj));
                    }
                }
            }
            push_nonzero(&mut rows, row);
        }
    }

    // Rows of I - D C.
    for i in 0..s {
        let mut row = vec![Polynomial::zero(n_vars); s];
        row[i] = Polynomial::one(n_vars);
        for (dk, c_row) in d_rows[i].iter().zip(&gb.reps) {
            if dk.is_zero() {
                continue;
            }
            for (rj, cj) in row.iter_mut().zip(c_row) {
                if !cj.is_zero() {
                    *rj = rj.sub(&dk.mul(cj));
                }
            }
        }
        push_nonzero(&mut rows, row);
    }

    // Exactness of every row is part of the contract.
    for row in &rows {
        let mut acc = ModuleElement::zero(n_vars, gens[0].rank());
        for (q, g) in row.components().iter().zip(gens) {
            if !q.is_zero() {
                acc = acc.add(&g.scale_poly(q));
            }
        }
        if !acc.is_zero() {
            return Err(Error::Invariant("syzygy row does not annihilate".into()));
        }
    }

    let rows = prune_and_normalize(rows, order, config)?;
    Ok(SyzygyBasis { rows })
}

fn gb_lead(gb: &GroebnerBasis, k: usize) -> (usize, Monomial) {
    let (p, m, _) = gb.elements[k]
        .leading_term(&gb.order)
        .expect("basis elements are nonzero");
    (p, m.clone())
}

fn push_nonzero(rows: &mut Vec<ModuleElement>, row: Vec<Polynomial>) {
    let elem = ModuleElement::from_components(row);
    if !elem.is_zero() {
        rows.push(elem);
    }
}

/// Scale a row to integer content 1 with a positive first coefficient.
fn module_primitive(row: &ModuleElement) -> ModuleElement {
    let mut num_gcd = num_bigint::BigInt::from(0);
    let mut den_lcm = num_bigint::BigInt::from(1);
    for comp in row.components() {
        for (_, c) in comp.terms() {
            num_gcd = num_integer::Integer::gcd(&num_gcd, c.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
    }
    let scale = Rat::new(den_lcm, num_gcd);
    let mut out = row.scale(&scale);
    let flip = out
        .components()
        .iter()
        .find(|p| !p.is_zero())
        .and_then(|p| p.terms().next())
        .map(|(_, c)| num_traits::Signed::is_negative(c))
        .unwrap_or(false);
    if flip {
        out = out.neg();
    }
    out
}

fn prune_and_normalize(
    mut rows: Vec<ModuleElement>,
    order: &TermOrder,
    config: &GroebnerConfig,
) -> Result<Vec<ModuleElement>> {
    rows = rows.iter().map(module_primitive).collect();
    rows.sort_by(|a, b| {
        (a.total_degree(), a.canonical_key()).cmp(&(b.total_degree(), b.canonical_key()))
    });
    rows.dedup();
    // Drop redundant rows, most complex first, so the simplest generating
    // set survives.
    let mut i = rows.len();
    while i > 0 {
        i -= 1;
        if rows.len() == 1 {
            break;
        }
        let candidate = rows[i].clone();
        let others: Vec<ModuleElement> = rows
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, r)| r.clone())
            .collect();
        if membership(&candidate, &others, order, config)? {
            rows.remove(i);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(src: &str, n: usize) -> Polynomial {
        let vars: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
        parse_polynomial(src, &vars).unwrap()
    }

    fn ideal(srcs: &[&str], n: usize) -> Vec<ModuleElement> {
        srcs.iter()
            .map(|s| ModuleElement::from_components(vec![p(s, n)]))
            .collect()
    }

    fn texts(elems: &[ModuleElement]) -> Vec<String> {
        elems.iter().map(|e| e.canonical_key()).collect()
    }

    #[test]
    fn division_leaves_the_classic_remainder() {
        // z1^2*z2 + z1*z2^2 + z2^2 by [z1*z2 - 1, z2^2 - 1] under lex.
        let f = ModuleElement::from_components(vec![p("z1^2*z2 + z1*z2^2 + z2^2", 2)]);
        let basis = ideal(&["z1*z2 - 1", "z2^2 - 1"], 2);
        let (nf, q) = reduce(&f, &basis, &TermOrder::lex());
        assert_eq!(nf.component(0), &p("z1 + z2 + 1", 2));
        assert_eq!(q[0], p("z1 + z2", 2));
        assert_eq!(q[1], p("1", 2));
        // Exact division identity.
        let recomposed = basis[0]
            .scale_poly(&q[0])
            .add(&basis[1].scale_poly(&q[1]))
            .add(&nf);
        assert_eq!(recomposed, f);
    }

    #[test]
    fn twisted_cubic_basis_depends_on_the_tie_break() {
        let gens = ideal(&["z1^2 - z2", "z1^3 - z3"], 3);
        let cfg = GroebnerConfig::default();

        let grlex = buchberger(&gens, &TermOrder::grlex(), &cfg).unwrap();
        assert_eq!(
            texts(grlex.elements()),
            vec![
                "z1^2 - z2".to_string(),
                "z1*z2 - z3".to_string(),
                "z1*z3 - z2^2".to_string(),
                "z2^3 - z3^2".to_string(),
            ]
        );

        // Monic under grevlex (lead z2^2); the canonical renderer still
        // lists terms in graded-lex order, so z1*z3 prints first.
        let grevlex = buchberger(&gens, &TermOrder::grevlex(), &cfg).unwrap();
        assert_eq!(
            texts(grevlex.elements()),
            vec![
                "z1^2 - z2".to_string(),
                "z1*z2 - z3".to_string(),
                "-z1*z3 + z2^2".to_string(),
            ]
        );
    }

    #[test]
    fn reduced_basis_is_canonical_under_generator_permutation() {
        let cfg = GroebnerConfig::default();
        let a = ideal(&["z1^2 - z2", "z1^3 - z3"], 3);
        let b = ideal(&["z1^3 - z3", "z1^2 - z2"], 3);
        let ga = buchberger(&a, &TermOrder::grevlex(), &cfg).unwrap();
        let gb = buchberger(&b, &TermOrder::grevlex(), &cfg).unwrap();
        assert_eq!(texts(ga.elements()), texts(gb.elements()));
    }

    #[test]
    fn membership_distinguishes_members() {
        let cfg = GroebnerConfig::default();
        let gens = ideal(&["z1", "z2"], 2);
        let order = TermOrder::grevlex();
        let inside = ModuleElement::from_components(vec![p("z1^2 + 3*z2", 2)]);
        let outside = ModuleElement::from_components(vec![p("z1^2 + 3*z2 + 1", 2)]);
        assert!(membership(&inside, &gens, &order, &cfg).unwrap());
        assert!(!membership(&outside, &gens, &order, &cfg).unwrap());
    }

    #[test]
    fn coprime_pairs_are_skipped_for_ideals() {
        let cfg = GroebnerConfig::default();
        let gens = ideal(&["z1", "z2"], 2);
        let gb = buchberger(&gens, &TermOrder::grevlex(), &cfg).unwrap();
        assert_eq!(gb.elements().len(), 2);
        assert_eq!(gb.stats.pairs_skipped, 1);
        assert_eq!(gb.stats.reductions_to_zero, 0);
    }

    #[test]
    fn pair_cap_aborts_with_statistics() {
        let cfg = GroebnerConfig {
            max_pairs: 1,
            max_degree: 64,
        };
        let gens = ideal(&["z1^2 - z2", "z1^3 - z3"], 3);
        let err = buchberger(&gens, &TermOrder::grlex(), &cfg).unwrap_err();
        assert!(matches!(err, Error::ResourceCap(_)), "{err}");
        assert!(err.to_string().contains("pairs processed"), "{err}");
    }

    #[test]
    fn degree_cap_aborts_on_oversized_elements() {
        let cfg = GroebnerConfig {
            max_pairs: 50_000,
            max_degree: 2,
        };
        let gens = ideal(&["z1^3 - z2", "z1*z2 - 1"], 2);
        let err = buchberger(&gens, &TermOrder::grlex(), &cfg).unwrap_err();
        assert!(matches!(err, Error::ResourceCap(_)), "{err}");
    }

    #[test]
    fn gradient_generators_have_the_rotational_syzygy() {
        let cfg = GroebnerConfig::default();
        let gens = ideal(&["z1", "z2"], 2);
        let syz = syzygies(&gens, &TermOrder::grevlex(), &cfg).unwrap();
        assert_eq!(texts(syz.rows()), vec!["z2 | -z1".to_string()]);
    }

    #[test]
    fn koszul_three_variables_has_three_syzygy_rows() {
        let cfg = GroebnerConfig::default();
        let gens = ideal(&["z1", "z2", "z3"], 3);
        let syz = syzygies(&gens, &TermOrder::grevlex(), &cfg).unwrap();
        let mut keys = texts(syz.rows());
        keys.sort();
        assert_eq!(
            keys,
            vec![
                "0 | z3 | -z2".to_string(),
                "z2 | -z1 | 0".to_string(),
                "z3 | 0 | -z1".to_string(),
            ]
        );
    }

    #[test]
    fn syzygies_of_a_principal_ideal_are_empty() {
        let cfg = GroebnerConfig::default();
        let gens = ideal(&["z1^2 + z2"], 2);
        let syz = syzygies(&gens, &TermOrder::grevlex(), &cfg).unwrap();
        assert!(syz.is_empty());
    }

    #[test]
    fn syzygies_catch_zero_generators() {
        let cfg = GroebnerConfig::default();
        let mut gens = ideal(&["z1", "0"], 2);
        gens.push(ModuleElement::from_components(vec![p("z2", 2)]));
        let syz = syzygies(&gens, &TermOrder::grevlex(), &cfg).unwrap();
        // e_2 for the zero generator, plus the rotational syzygy on (z1, z2).
        let keys = texts(syz.rows());
        assert!(keys.contains(&"0 | 1 | 0".to_string()), "{keys:?}");
        assert!(keys.contains(&"z2 | 0 | -z1".to_string()), "{keys:?}");
        assert_eq!(keys.len(), 2);
    }

    #[test]
    fn module_generators_with_mixed_positions() {
        let cfg = GroebnerConfig::default();
        // Submodule of P^2 generated by (z1, z2) and (z2, z1).
        let gens = vec![
            ModuleElement::from_components(vec![p("z1", 2), p("z2", 2)]),
            ModuleElement::from_components(vec![p("z2", 2), p("z1", 2)]),
        ];
        let order = TermOrder::grevlex();
        let gb = buchberger(&gens, &order, &cfg).unwrap();
        let f = gens[0].scale_poly(&p("z1 - z2", 2)).add(&gens[1].scale_poly(&p("z2^2", 2)));
        assert!(gb.contains(&f));
        let g = ModuleElement::from_components(vec![p("1", 2), p("0", 2)]);
        assert!(!gb.contains(&g));
    }
}
