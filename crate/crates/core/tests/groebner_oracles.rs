//! Cross-checks of the basis machinery against routes that share none of its
//! code: exact evaluation at rational points, exact linear algebra on
//! low-degree coefficient slices, and agreement across term orders.

mod common;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{corpus, random_member, random_poly, CorpusItem};
use overdet::groebner::{buchberger, membership, reduce, syzygies, GroebnerConfig};
use overdet::linalg::QMat;
use overdet::poly::{rat, GaussRat, ModuleElement, Polynomial, Rat, TermOrder};
use overdet::resolution::{kernel_slice, OperatorMatrix};

fn orders() -> Vec<TermOrder> {
    vec![TermOrder::lex(), TermOrder::grlex(), TermOrder::grevlex()]
}

fn eval_at(p: &Polynomial, point: &[Rat]) -> Rat {
    let lifted: Vec<GaussRat> = point.iter().map(|r| GaussRat::from_rat(r.clone())).collect();
    let value = p.eval_gaussian(&lifted).expect("arity matches");
    assert!(value.im.is_zero());
    value.re
}



/// Sound one-sided oracle: a nonzero value at a common zero of an ideal, or a
/// value outside the pointwise column span for a module, proves the element
/// is not in the module.  Returns `Some(false)` only on such proof.
fn oracle_refutes(item: &CorpusItem, f: &ModuleElement, rng: &mut ChaCha8Rng) -> bool {
    if item.rank == 1 {
        item.zeros
            .iter()
            .any(|z| !eval_at(f.component(0), z).is_zero())
    } else {
        for _ in 0..4 {
            let point: Vec<Rat> = (0..item.n_vars)
                .map(|_| rat(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=3)))
                .collect();
            let mat = QMat::from_rows(
                (0..item.rank)
                    .map(|r| {
                        item.gens
                            .iter()
                            .map(|g| eval_at(g.component(r), &point))
                            .collect()
                    })
                    .collect(),
            );
            let rhs: Vec<Rat> = (0..item.rank)
                .map(|r| eval_at(f.component(r), &point))
                .collect();
            if mat.solve(&rhs).is_none() {
                return true;
            }
        }
        false
    }
}

#[test]
fn every_generator_reduces_to_zero_in_its_own_basis() {
    let config = GroebnerConfig::default();
    for item in corpus() {
        for order in orders() {
            let basis = buchberger(&item.gens, &order, &config)
                .unwrap_or_else(|e| panic!("{}: {e}", item.name));
            for g in &item.gens {
                assert!(
                    basis.contains(g),
                    "{}: generator escaped its own basis",
                    item.name
                );
            }
        }
    }
}

#[test]
fn constructed_members_are_recognized_with_exact_certificates() {
    let config = GroebnerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for item in corpus() {
        let order = TermOrder::grevlex();
        let basis = buchberger(&item.gens, &order, &config).unwrap();
        for _ in 0..6 {
            let f = random_member(&mut rng, &item);
            let (normal, quotients) = reduce(&f, basis.elements(), &order);
            assert!(
                normal.is_zero(),
                "{}: constructed member was not recognized",
                item.name
            );
            let mut rebuilt = ModuleElement::zero(item.n_vars, item.rank);
            for (q, b) in quotients.iter().zip(basis.elements()) {
                rebuilt = rebuilt.add(&b.scale_poly(q));
            }
            assert_eq!(
                rebuilt.canonical_key(),
                f.canonical_key(),
                "{}: division certificate does not reproduce the element",
                item.name
            );
        }
    }
}

#[test]
fn membership_never_contradicts_the_evaluation_oracle() {
    let config = GroebnerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut refuted = 0usize;
    let mut total = 0usize;
    for item in corpus() {
        let order = TermOrder::grevlex();
        for _ in 0..9 {
            let mut f = random_member(&mut rng, &item);
            if rng.gen_bool(0.5) {
                let k = rng.gen_range(0..item.rank);
                let noise = ModuleElement::unit(
                    item.rank,
                    k,
                    random_poly(&mut rng, item.n_vars, 2),
                );
                f = f.add(&noise);
            }
            if f.is_zero() {
                continue;
            }
            total += 1;
            let inside = membership(&f, &item.gens, &order, &config).unwrap();
            if oracle_refutes(&item, &f, &mut rng) {
                refuted += 1;
                assert!(
                    !inside,
                    "{}: membership accepted an element the oracle refutes",
                    item.name
                );
            } else if inside {
                let basis = buchberger(&item.gens, &order, &config).unwrap();
                let (normal, quotients) = reduce(&f, basis.elements(), &order);
                assert!(normal.is_zero());
                let mut rebuilt = ModuleElement::zero(item.n_vars, item.rank);
                for (q, b) in quotients.iter().zip(basis.elements()) {
                    rebuilt = rebuilt.add(&b.scale_poly(q));
                }
                assert_eq!(rebuilt.canonical_key(), f.canonical_key());
            }
        }
    }
    assert!(total >= 100, "probe count {total} too small to mean much");
    assert!(refuted >= 10, "oracle refuted only {refuted} probes");
}

#[test]
fn membership_verdicts_agree_across_term_orders() {
    let config = GroebnerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for item in corpus() {
        for _ in 0..4 {
            let mut f = random_member(&mut rng, &item);
            if rng.gen_bool(0.5) {
                let k = rng.gen_range(0..item.rank);
                f = f.add(&ModuleElement::unit(
                    item.rank,
                    k,
                    random_poly(&mut rng, item.n_vars, 2),
                ));
            }
            if f.is_zero() {
                continue;
            }
            let verdicts: Vec<bool> = orders()
                .iter()
                .map(|order| membership(&f, &item.gens, order, &config).unwrap())
                .collect();
            assert!(
                verdicts.iter().all(|&v| v == verdicts[0]),
                "{}: orders disagree on membership: {verdicts:?}",
                item.name
            );
        }
    }
}

#[test]
fn reduced_bases_are_stable_under_generator_permutations() {
    let config = GroebnerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for item in corpus() {
        let order = TermOrder::grevlex();
        let reference: Vec<String> = buchberger(&item.gens, &order, &config)
            .unwrap()
            .elements()
            .iter()
            .map(ModuleElement::canonical_key)
            .collect();
        for _ in 0..3 {
            let mut shuffled = item.gens.clone();
            shuffled.shuffle(&mut rng);
            let listed: Vec<String> = buchberger(&shuffled, &order, &config)
                .unwrap()
                .elements()
                .iter()
                .map(ModuleElement::canonical_key)
                .collect();
            assert_eq!(listed, reference, "{}: listing depends on input order", item.name);
        }
    }
}

#[test]
fn syzygy_rows_annihilate_and_generate_the_low_degree_kernel() {
    let config = GroebnerConfig::default();
    let order = TermOrder::grevlex();
    for item in corpus() {
        let syz = syzygies(&item.gens, &order, &config)
            .unwrap_or_else(|e| panic!("{}: {e}", item.name));
        for row in syz.rows() {
            let mut acc = ModuleElement::zero(item.n_vars, item.rank);
            for (coeff, g) in row.components().iter().zip(&item.gens) {
                acc = acc.add(&g.scale_poly(coeff));
            }
            assert!(acc.is_zero(), "{}: syzygy row fails to annihilate", item.name);
        }

        let matrix = OperatorMatrix::from_columns(item.n_vars, item.rank, &item.gens);
        let slice = kernel_slice(&matrix, 3);
        if syz.is_empty() {
            assert!(
                slice.is_empty(),
                "{}: kernel slice nonempty but no syzygies returned",
                item.name
            );
            continue;
        }
        for v in &slice {
            assert!(
                membership(v, syz.rows(), &order, &config).unwrap(),
                "{}: kernel slice element escapes the syzygy module",
                item.name
            );
        }
    }
}
