//! Multivariate gcd over ℚ by primitive pseudo-remainder sequences, with
//! the square-free decomposition built on top of it.

use num_traits::{One, Zero};

use crate::groebner;
use crate::poly::{ModuleElement, Polynomial, Rat, TermOrder};

/// Exact quotient f / g; `None` when g does not divide f.
pub fn exact_div(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    if g.is_zero() {
        return None;
    }
    if f.is_zero() {
        return Some(Polynomial::zero(f.n_vars()));
    }
    let order = TermOrder::grevlex();
    let (rem, quotients) = groebner::reduce(
        &ModuleElement::from_components(vec![f.clone()]),
        &[ModuleElement::from_components(vec![g.clone()])],
        &order,
    );
    rem.is_zero().then(|| quotients.into_iter().next().unwrap())
}

fn is_constant(p: &Polynomial) -> bool {
    p.total_degree().is_none_or(|d| d == 0)
}

/// Normalized gcd of two polynomials over ℚ: primitive integer
/// coefficients with the canonical-leading coefficient positive; gcd of
/// anything with a nonzero constant is 1.
pub fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let n_vars = a.n_vars().max(b.n_vars());
    if a.is_zero() {
        return b.primitive_normalized();
    }
    if b.is_zero() {
        return a.primitive_normalized();
    }
    if is_constant(a) || is_constant(b) {
        return Polynomial::one(n_vars);
    }
    let var = (0..n_vars)
        .find(|&v| a.degree_in(v).unwrap_or(0) > 0 || b.degree_in(v).unwrap_or(0) > 0)
        .expect("nonconstant polynomials involve a variable");

    if a.degree_in(var).unwrap_or(0) == 0 {
        return poly_gcd(a, &content_in(b, var));
    }
    if b.degree_in(var).unwrap_or(0) == 0 {
        return poly_gcd(&content_in(a, var), b);
    }

    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let pa = divide_coefficients(a, var, &ca);
    let pb = divide_coefficients(b, var, &cb);
    let cont_gcd = poly_gcd(&ca, &cb);

    let (mut f, mut g) = if a.degree_in(var) >= b.degree_in(var) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = pseudo_rem(&f, &g, var);
        if r.is_zero() {
            break;
        }
        let r = primitive_in(&r, var);
        f = g;
        g = r;
    }
    let gcd_pp = primitive_in(&g, var);
    cont_gcd.mul(&gcd_pp).primitive_normalized()
}

/// Coefficients of p viewed in ℚ[others][var], low degree first.
fn coefficients_in(p: &Polynomial, var: usize) -> Vec<Polynomial> {
    let n_vars = p.n_vars();
    let deg = p.degree_in(var).unwrap_or(0) as usize;
    let mut out = vec![Polynomial::zero(n_vars); deg + 1];
    for (m, c) in p.terms() {
        let e = m.exps()[var] as usize;
        let mut exps = m.exps().to_vec();
        exps[var] = 0;
        out[e].add_term(crate::poly::Monomial::from_exps(exps), c.clone());
    }
    out
}

fn assemble_in(coeffs: &[Polynomial], var: usize, n_vars: usize) -> Polynomial {
    let mut out = Polynomial::zero(n_vars);
    for (e, c) in coeffs.iter().enumerate() {
        for (m, r) in c.terms() {
            let mut exps = m.exps().to_vec();
            exps[var] += e as u32;
            out.add_term(crate::poly::Monomial::from_exps(exps), r.clone());
        }
    }
    out
}

/// Gcd of the var-coefficients of p.
/// Gcd of the coefficient polynomials of the powers of `var`.
pub fn content_in(p: &Polynomial, var: usize) -> Polynomial {
    let mut acc = Polynomial::zero(p.n_vars());
    for c in coefficients_in(p, var) {
        if !c.is_zero() {
            acc = poly_gcd(&acc, &c);
            if is_constant(&acc) {
                return Polynomial::one(p.n_vars());
            }
        }
    }
    acc
}

fn divide_coefficients(p: &Polynomial, var: usize, content: &Polynomial) -> Polynomial {
    let coeffs: Vec<Polynomial> = coefficients_in(p, var)
        .iter()
        .map(|c| {
            if c.is_zero() {
                c.clone()
            } else {
                exact_div(c, content).expect("content must divide every coefficient")
            }
        })
        .collect();
    assemble_in(&coeffs, var, p.n_vars())
}

fn primitive_in(p: &Polynomial, var: usize) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    let cont = content_in(p, var);
    divide_coefficients(p, var, &cont).primitive_normalized()
}

/// Pseudo-remainder of f by g in the variable var.
fn pseudo_rem(f: &Polynomial, g: &Polynomial, var: usize) -> Polynomial {
    let mut fc = coefficients_in(f, var);
    let gc = coefficients_in(g, var);
    let dg = gc.len() - 1;
    let lead = gc[dg].clone();
    let n_vars = f.n_vars();
    while fc.len() > dg {
        let df = fc.len() - 1;
        let top = fc[df].clone();
        if top.is_zero() {
            fc.pop();
            continue;
        }
        for c in fc.iter_mut() {
            *c = c.mul(&lead);
        }
        for j in 0..=dg {
            let sub = top.mul(&gc[j]);
            fc[df - dg + j] = fc[df - dg + j].sub(&sub);
        }
        while fc.last().is_some_and(Polynomial::is_zero) {
            fc.pop();
        }
    }
    assemble_in(&fc, var, n_vars)
}

/// Square-free decomposition: input = unit · Π partᵢ^multᵢ with square-free
/// pairwise-coprime parts, each primitive-normalized.
pub fn squarefree_decomposition(f: &Polynomial) -> (Rat, Vec<(Polynomial, u32)>) {
    assert!(!f.is_zero(), "square-free decomposition of zero");
    let n_vars = f.n_vars();
    if is_constant(f) {
        let c = f.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero);
        return (c, Vec::new());
    }
    let p = f.primitive_normalized();

    let mut derivative_gcd = p.clone();
    for v in 0..n_vars {
        let d = p.derivative(v);
        derivative_gcd = poly_gcd(&derivative_gcd, &d);
        if is_constant(&derivative_gcd) {
            break;
        }
    }

    let mut parts = Vec::new();
    let mut g = derivative_gcd;
    let mut c = exact_div(&p, &g).expect("gcd with derivatives divides the polynomial");
    let mut i = 1u32;
    while !is_constant(&c) {
        let next = poly_gcd(&g, &c);
        let part = exact_div(&c, &next).expect("iterated gcd divides");
        if !is_constant(&part) {
            parts.push((part.primitive_normalized(), i));
        }
        g = exact_div(&g, &next).expect("iterated gcd divides the repeated part");
        c = next;
        i += 1;
    }

    let mut product = Polynomial::one(n_vars);
    for (part, mult) in &parts {
        product = product.mul(&part.pow(*mult));
    }
    let ratio = exact_div(f, &product).expect("decomposition reconstructs the input");
    assert!(is_constant(&ratio), "non-constant unit in square-free decomposition");
    let unit = ratio
        .terms()
        .next()
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Rat::one);
    (unit, parts)
}

/// Product of the distinct irreducible factors, without multiplicities.
pub fn squarefree_part(f: &Polynomial) -> Polynomial {
    let (_, parts) = squarefree_decomposition(f);
    let mut out = Polynomial::one(f.n_vars());
    for (part, _) in parts {
        out = out.mul(&part);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p2(src: &str) -> Polynomial {
        parse_polynomial(src, &["z1".into(), "z2".into()]).unwrap()
    }

    fn p3(src: &str) -> Polynomial {
        parse_polynomial(src, &["z1".into(), "z2".into(), "z3".into()]).unwrap()
    }

    #[test]
    fn gcd_of_products_recovers_the_common_factor() {
        let common = p2("z1 + z2");
        let a = common.mul(&p2("z1^2 - z2"));
        let b = common.mul(&p2("z2^3 + 1"));
        assert_eq!(poly_gcd(&a, &b), common.primitive_normalized());
    }

    #[test]
    fn coprime_polynomials_have_unit_gcd() {
        let a = p2("z1^2 - z2");
        let b = p2("z1 + 1");
        assert_eq!(poly_gcd(&a, &b), Polynomial::one(2));
    }

    #[test]
    fn gcd_handles_three_variables_and_scalars() {
        let common = p3("z1*z2 - z3");
        let a = common.mul(&p3("z1 + z3")).scale(&crate::poly::rat(3, 7));
        let b = common.mul(&common).scale(&crate::poly::rat(-2, 5));
        assert_eq!(poly_gcd(&a, &b), common.primitive_normalized());
    }

    #[test]
    fn squarefree_decomposition_splits_multiplicities() {
        // (z1 + z2)² · z1
        let f = p2("z1 + z2").pow(2).mul(&p2("z1"));
        let (unit, parts) = squarefree_decomposition(&f);
        assert_eq!(unit, crate::poly::rat(1, 1));
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (p2("z1"), 1));
        assert_eq!(parts[1], (p2("z1 + z2"), 2));
    }

    #[test]
    fn squarefree_part_drops_repeated_factors() {
        let f = p3("z1*z2 - z3").pow(3).mul(&p3("z1 - 1"));
        let part = squarefree_part(&f);
        let expected = p3("z1*z2 - z3").mul(&p3("z1 - 1"));
        assert_eq!(
            part.primitive_normalized(),
            expected.primitive_normalized()
        );
    }

    #[test]
    fn reconstruction_identity_holds_with_rational_unit() {
        let f = p2("z1^2 - z2").pow(2).scale(&crate::poly::rat(-3, 4));
        let (unit, parts) = squarefree_decomposition(&f);
        let mut product = Polynomial::constant(2, unit);
        for (part, mult) in &parts {
            product = product.mul(&part.pow(*mult));
        }
        assert_eq!(product, f);
    }
}
