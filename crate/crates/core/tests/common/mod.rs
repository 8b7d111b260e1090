//! Fixture corpus shared by the integration suites: twelve ideals and
//! submodules in up to three variables, total degree at most four, plus the
//! random-element generators the membership checks draw from.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use overdet::poly::{parse_polynomial, rat, ModuleElement, Monomial, Polynomial, Rat};

pub struct CorpusItem {
    pub name: &'static str,
    pub n_vars: usize,
    pub rank: usize,
    pub gens: Vec<ModuleElement>,
    /// Rational points at which every generator vanishes componentwise; used
    /// by the non-membership oracle for ideals.
    pub zeros: Vec<Vec<Rat>>,
}

pub fn poly(n_vars: usize, src: &str) -> Polynomial {
    let names: Vec<String> = (1..=n_vars).map(|i| format!("z{i}")).collect();
    parse_polynomial(src, &names).expect("corpus polynomial parses")
}

pub fn ideal(
    name: &'static str,
    n_vars: usize,
    srcs: &[&str],
    zeros: Vec<Vec<Rat>>,
) -> CorpusItem {
    CorpusItem {
        name,
        n_vars,
        rank: 1,
        gens: srcs
            .iter()
            .map(|s| ModuleElement::from_components(vec![poly(n_vars, s)]))
            .collect(),
        zeros,
    }
}

pub fn module(
    name: &'static str,
    n_vars: usize,
    rank: usize,
    rows: &[&[&str]],
    zeros: Vec<Vec<Rat>>,
) -> CorpusItem {
    CorpusItem {
        name,
        n_vars,
        rank,
        gens: rows
            .iter()
            .map(|comps| {
                assert_eq!(comps.len(), rank);
                ModuleElement::from_components(comps.iter().map(|s| poly(n_vars, s)).collect())
            })
            .collect(),
        zeros,
    }
}

pub fn pt(coords: &[(i64, i64)]) -> Vec<Rat> {
    coords.iter().map(|&(n, d)| rat(n, d)).collect()
}

/// Twelve ideals and submodules in up to three variables, degree at most
/// four, mixing the shapes the rest of the crate leans on.
pub fn corpus() -> Vec<CorpusItem> {
    vec![
        ideal("principal parabola", 2, &["z1^2 - z2"], vec![
            pt(&[(1, 1), (1, 1)]),
            pt(&[(2, 1), (4, 1)]),
            pt(&[(1, 2), (1, 4)]),
        ]),
        ideal(
            "space curve",
            3,
            &["z1^2 - z2", "z1^3 - z3"],
            vec![pt(&[(2, 1), (4, 1), (8, 1)]), pt(&[(-1, 1), (1, 1), (-1, 1)])],
        ),
        ideal("origin", 2, &["z1", "z2"], vec![pt(&[(0, 1), (0, 1)])]),
        ideal(
            "two planes",
            3,
            &["z1*z2", "z1*z3"],
            vec![pt(&[(0, 1), (5, 1), (7, 1)]), pt(&[(3, 1), (0, 1), (0, 1)])],
        ),
        ideal(
            "monomial curve",
            3,
            &["z1^2*z2 - z3^2", "z1*z3 - z2^2"],
            vec![pt(&[(8, 1), (16, 1), (32, 1)]), pt(&[(1, 1), (1, 1), (1, 1)])],
        ),
        ideal(
            "rational slice",
            2,
            &["1/3*z1^2 - 1/3*z2", "2*z2 - z1"],
            vec![pt(&[(1, 2), (1, 4)]), pt(&[(0, 1), (0, 1)])],
        ),
        ideal(
            "unit box spectrum",
            2,
            &["z1^3 - 1", "z2^3 - 1", "z1*z2 - 1"],
            vec![pt(&[(1, 1), (1, 1)])],
        ),
        ideal("univariate gap", 1, &["z1^2 + z1^3"], vec![
            pt(&[(0, 1)]),
            pt(&[(-1, 1)]),
        ]),
        module("curl row", 2, 2, &[&["z2", "-z1"]], vec![]),
        module(
            "divergence relations",
            3,
            3,
            &[
                &["z2", "-z1", "0"],
                &["z3", "0", "-z1"],
                &["0", "z3", "-z2"],
            ],
            vec![],
        ),
        module(
            "mixed degrees",
            2,
            2,
            &[&["z1^2", "z2"], &["z2", "z1"]],
            vec![],
        ),
        module(
            "padded with zero",
            2,
            2,
            &[&["z1", "z2"], &["0", "0"], &["z2^2", "z1*z2"]],
            vec![],
        ),
    ]
}

pub fn random_poly(rng: &mut ChaCha8Rng, n_vars: usize, max_deg: u32) -> Polynomial {
    let mut out = Polynomial::zero(n_vars);
    let n_terms = rng.gen_range(1..=3);
    for _ in 0..n_terms {
        let mut exps = vec![0u32; n_vars];
        let mut budget = max_deg;
        for e in exps.iter_mut() {
            let d = rng.gen_range(0..=budget);
            *e = d;
            budget -= d;
        }
        let coeff = loop {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                break rat(c, 1);
            }
        };
        out.add_term(Monomial::from_exps(exps), coeff);
    }
    out
}

pub fn random_member(rng: &mut ChaCha8Rng, item: &CorpusItem) -> ModuleElement {
    let mut acc = ModuleElement::zero(item.n_vars, item.rank);
    for g in &item.gens {
        if rng.gen_bool(0.7) {
            acc = acc.add(&g.scale_poly(&random_poly(rng, item.n_vars, 2)));
        }
    }
    if acc.is_zero() {
        acc = item.gens[0].scale_poly(&random_poly(rng, item.n_vars, 2));
    }
    acc
}
