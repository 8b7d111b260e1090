//! Sparse multivariate polynomials over exact rationals, together with the
//! term orders and free-module elements the Groebner layer builds on.
//!
//! Coefficients are arbitrary-precision rationals and exponent vectors have
//! fixed length equal to the ambient variable count, so equality and map
//! ordering are structural. Terms live in a `BTreeMap` keyed by the exponent
//! vector; leading terms under a caller-chosen [`TermOrder`] are found by a
//! scan, which keeps one canonical representation valid for every order.

mod order;
mod text;

pub use order::{ModulePriority, MonoOrder, TermOrder};
pub use text::{parse_polynomial, render_polynomial};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Largest total degree accepted from input text.
pub const MAX_TOTAL_DEGREE: u32 = 64;
/// Largest ambient variable count accepted from input text.
pub const MAX_VARS: usize = 8;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Convert a rational to the nearest double.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exponent vector of fixed length; the ambient variable count is the length.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(n_vars: usize) -> Self {
        Monomial {
            exps: vec![0; n_vars],
        }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    /// Single variable `z_{j+1}` to the given power.
    pub fn var(n_vars: usize, j: usize, e: u32) -> Self {
        let mut exps = vec![0; n_vars];
        exps[j] = e;
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn n_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.len() == other.exps.len()
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn gcd_is_one(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Sparse polynomial with exact rational coefficients.
///
/// Invariants: every stored coefficient is nonzero and every key has length
/// `n_vars`. The zero polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    n_vars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(n_vars: usize) -> Self {
        Polynomial {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rat::one())
    }

    pub fn constant(n_vars: usize, c: Rat) -> Self {
        let mut p = Self::zero(n_vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(n_vars), c);
        }
        p
    }

    /// The variable `z_{j+1}`.
    pub fn var(n_vars: usize, j: usize) -> Self {
        assert!(j < n_vars, "variable index {j} out of range");
        let mut p = Self::zero(n_vars);
        p.terms.insert(Monomial::var(n_vars, j, 1), Rat::one());
        p
    }

    pub fn from_terms<I>(n_vars: usize, iter: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rat)>,
    {
        let mut p = Self::zero(n_vars);
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (exponent-vector) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Degree in a single variable, or `None` for the zero polynomial.
    pub fn degree_in(&self, j: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exps[j]).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        assert_eq!(m.n_vars(), self.n_vars, "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_arity(&self, other: &Polynomial) {
        assert_eq!(
            self.n_vars, other.n_vars,
            "polynomial arity mismatch: {} vs {}",
            self.n_vars, other.n_vars
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_arity(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_arity(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_arity(other);
        let mut out = Polynomial::zero(self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Checked addition for callers holding unvalidated operands.
    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        Ok(self.add(other))
    }

    /// Checked subtraction for callers holding unvalidated operands.
    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        Ok(self.sub(other))
    }

    /// Checked multiplication for callers holding unvalidated operands.
    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        Ok(self.mul(other))
    }

    fn check_arity(&self, other: &Polynomial) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::Input(format!(
                "variable-count mismatch: {} vs {}",
                self.n_vars, other.n_vars
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n_vars);
        }
        Polynomial {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n_vars);
        }
        Polynomial {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(self.n_vars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self, j: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.n_vars);
        for (m, c) in &self.terms {
            let e = m.exps[j];
            if e > 0 {
                let mut exps = m.exps.clone();
                exps[j] -= 1;
                out.add_term(Monomial::from_exps(exps), c * Rat::from(BigInt::from(e)));
            }
        }
        out
    }

    /// Leading term under `order`, or `None` for the zero polynomial.
    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, &Rat)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp_mono(a, b))
    }

    /// `p(-z)`: negate each coordinate, flipping the sign of odd-degree terms.
    pub fn sign_flip(&self) -> Polynomial {
        Polynomial {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let c = if m.total_degree() % 2 == 1 {
                        -c.clone()
                    } else {
                        c.clone()
                    };
                    (m.clone(), c)
                })
                .collect(),
        }
    }

    /// Evaluate at a complex point, converting coefficients to doubles.
    /// Powers of each coordinate are cached, so every monomial is a short
    /// product rather than a fresh `powi`.
    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.n_vars {
            return Err(Error::Input(format!(
                "evaluation point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.n_vars
            )));
        }
        let pows = power_table(point, self.max_exps());
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(rat_to_f64(c), 0.0);
            for (j, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t *= pows[j][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Scale reference for relative tolerances: the sum of absolute values of
    /// the evaluated terms.
    pub fn eval_scale(&self, point: &[Complex64]) -> Result<f64> {
        if point.len() != self.n_vars {
            return Err(Error::Input(format!(
                "evaluation point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.n_vars
            )));
        }
        let pows = power_table(point, self.max_exps());
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = rat_to_f64(c).abs();
            for (j, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t *= pows[j][e as usize].norm();
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluate exactly at a point with rational real and imaginary parts.
    pub fn eval_gaussian(&self, point: &[GaussRat]) -> Result<GaussRat> {
        if point.len() != self.n_vars {
            return Err(Error::Input(format!(
                "evaluation point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.n_vars
            )));
        }
        let mut acc = GaussRat::zero();
        for (m, c) in &self.terms {
            let mut t = GaussRat::from_rat(c.clone());
            for (j, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[j]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    fn max_exps(&self) -> Vec<u32> {
        let mut maxes = vec![0u32; self.n_vars];
        for m in self.terms.keys() {
            for (j, &e) in m.exps.iter().enumerate() {
                maxes[j] = maxes[j].max(e);
            }
        }
        maxes
    }

    /// Substitute polynomials for each variable.
    pub fn substitute(&self, subs: &[Polynomial]) -> Polynomial {
        assert_eq!(subs.len(), self.n_vars, "substitution arity mismatch");
        let out_vars = subs
            .first()
            .map(Polynomial::n_vars)
            .unwrap_or(self.n_vars);
        let mut acc = Polynomial::zero(out_vars);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(out_vars, c.clone());
            for (j, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&subs[j].pow(e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Divide every coefficient by the integer content and normalize the
    /// first coefficient (in canonical term order) to be positive. Returns
    /// the zero polynomial unchanged.
    pub fn primitive_normalized(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_integer::Integer::gcd(&num_gcd, c.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let scale = Rat::new(den_lcm, num_gcd);
        let mut out = self.scale(&scale);
        if let Some((_, c)) = out.terms.iter().next() {
            if c.is_negative() {
                out = out.neg();
            }
        }
        out
    }

    /// Render with default variable names `z1..zN`.
    pub fn to_text(&self) -> String {
        render_polynomial(self, None)
    }
}

/// All monomials in `n_vars` variables of total degree at most `d`, in
/// canonical (exponent-vector) order.
pub fn monomials_up_to_degree(n_vars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; n_vars];
    loop {
        if exps.iter().sum::<u32>() <= d {
            out.push(Monomial::from_exps(exps.clone()));
        }
        // Odometer over [0, d]^n, skipping overweight combinations above.
        let mut j = n_vars;
        loop {
            if j == 0 {
                out.sort();
                return out;
            }
            j -= 1;
            if exps[j] < d {
                exps[j] += 1;
                for e in exps.iter_mut().skip(j + 1) {
                    *e = 0;
                }
                break;
            }
        }
    }
}

fn power_table(point: &[Complex64], maxes: Vec<u32>) -> Vec<Vec<Complex64>> {
    point
        .iter()
        .zip(maxes)
        .map(|(z, e)| {
            let mut row = Vec::with_capacity(e as usize + 1);
            row.push(Complex64::new(1.0, 0.0));
            for k in 1..=e as usize {
                let prev = row[k - 1];
                row.push(prev * z);
            }
            row
        })
        .collect()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Complex number with exact rational real and imaginary parts; just enough
/// arithmetic for exact polynomial evaluation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }

    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussRat {
            re,
            im: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn neg(&self) -> GaussRat {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn mul(&self, other: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

/// Element of the free module `P^rank`: a dense vector of polynomials
/// sharing one ambient variable count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleElement {
    comps: Vec<Polynomial>,
}

impl ModuleElement {
    pub fn zero(n_vars: usize, rank: usize) -> Self {
        ModuleElement {
            comps: vec![Polynomial::zero(n_vars); rank],
        }
    }

    pub fn from_components(comps: Vec<Polynomial>) -> Self {
        assert!(!comps.is_empty(), "module elements need positive rank");
        let n = comps[0].n_vars();
        assert!(
            comps.iter().all(|p| p.n_vars() == n),
            "module element mixes variable counts"
        );
        ModuleElement { comps }
    }

    /// Standard basis vector `e_pos` scaled by a polynomial.
    pub fn unit(rank: usize, pos: usize, p: Polynomial) -> Self {
        let mut el = ModuleElement::zero(p.n_vars(), rank);
        el.comps[pos] = p;
        el
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn n_vars(&self) -> usize {
        self.comps[0].n_vars()
    }

    pub fn component(&self, k: usize) -> &Polynomial {
        &self.comps[k]
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Polynomial::is_zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.comps.iter().filter_map(Polynomial::total_degree).max()
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        assert_eq!(self.rank(), other.rank(), "module rank mismatch");
        ModuleElement {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        assert_eq!(self.rank(), other.rank(), "module rank mismatch");
        ModuleElement {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> ModuleElement {
        ModuleElement {
            comps: self.comps.iter().map(Polynomial::neg).collect(),
        }
    }

    pub fn scale_poly(&self, p: &Polynomial) -> ModuleElement {
        ModuleElement {
            comps: self.comps.iter().map(|c| c.mul(p)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> ModuleElement {
        ModuleElement {
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> ModuleElement {
        ModuleElement {
            comps: self.comps.iter().map(|p| p.mul_term(m, c)).collect(),
        }
    }

    /// Leading `(position, monomial, coefficient)` under `order`, or `None`
    /// for the zero element.
    pub fn leading_term(&self, order: &TermOrder) -> Option<(usize, &Monomial, &Rat)> {
        let mut best: Option<(usize, &Monomial, &Rat)> = None;
        for (pos, p) in self.comps.iter().enumerate() {
            for (m, c) in p.terms() {
                let better = match &best {
                    None => true,
                    Some((bp, bm, _)) => {
                        order.cmp_module((pos, m), (*bp, bm)) == Ordering::Greater
                    }
                };
                if better {
                    best = Some((pos, m, c));
                }
            }
        }
        best
    }

    /// Deterministic serialization used for tie-breaking and sorting.
    pub fn canonical_key(&self) -> String {
        let parts: Vec<String> = self.comps.iter().map(Polynomial::to_text).collect();
        parts.join(" | ")
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.canonical_key())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(src: &str, n: usize) -> Polynomial {
        let vars: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
        parse_polynomial(src, &vars).unwrap()
    }

    #[test]
    fn product_of_binomials() {
        let a = p("z1 + z2", 2);
        let b = p("z1 - z2", 2);
        assert_eq!(a.mul(&b), p("z1^2 - z2^2", 2));
    }

    #[test]
    fn sign_flip_negates_odd_degree_terms() {
        let q = p("z1^2*z2 + z2", 2);
        assert_eq!(q.sign_flip(), p("-z1^2*z2 - z2", 2));
        let even = p("z1^2 + z1*z2 + 7", 2);
        assert_eq!(even.sign_flip(), even);
    }

    #[test]
    fn sign_flip_matches_substitution_of_negated_variables() {
        let q = p("3*z1^3 - 2*z1*z2^2 + z2 - 5", 2);
        let subs = vec![p("-z1", 2), p("-z2", 2)];
        assert_eq!(q.sign_flip(), q.substitute(&subs));
    }

    #[test]
    fn checked_ops_reject_arity_mismatch() {
        let a = p("z1", 1);
        let b = p("z1 + z2", 2);
        assert!(a.checked_add(&b).is_err());
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn eval_gaussian_is_exact() {
        // z1*z2 at (i, i) is i^2 = -1.
        let q = p("z1*z2", 2);
        let i = GaussRat::new(rat(0, 1), rat(1, 1));
        let v = q.eval_gaussian(&[i.clone(), i]).unwrap();
        assert_eq!(v, GaussRat::new(rat(-1, 1), rat(0, 1)));
    }

    #[test]
    fn eval_complex_matches_gaussian_conversion() {
        let q = p("z1^3 - 2/3*z1*z2 + 1", 2);
        let pt = [
            GaussRat::new(rat(1, 2), rat(-3, 4)),
            GaussRat::new(rat(2, 1), rat(1, 3)),
        ];
        let exact = q.eval_gaussian(&pt).unwrap().to_complex64();
        let approx = q
            .eval_complex(&[pt[0].to_complex64(), pt[1].to_complex64()])
            .unwrap();
        assert!((exact - approx).norm() < 1e-12);
    }

    #[test]
    fn eval_rejects_wrong_point_length() {
        let q = p("z1", 2);
        assert!(q.eval_complex(&[Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn derivative_of_power() {
        let q = p("z1^3*z2", 2);
        assert_eq!(q.derivative(0), p("3*z1^2*z2", 2));
        assert_eq!(q.derivative(1), p("z1^3", 2));
    }

    #[test]
    fn primitive_normalization_clears_content_and_sign() {
        let q = p("-2/3*z1 - 4/3", 1);
        assert_eq!(q.primitive_normalized(), p("z1 + 2", 1));
    }

    #[test]
    fn module_leading_term_respects_position_priority() {
        let order = TermOrder::grlex();
        let e = ModuleElement::from_components(vec![p("z2", 2), p("z1", 2)]);
        let (pos, _, _) = e.leading_term(&order).unwrap();
        // Position 0 outranks position 1 under the default priority.
        assert_eq!(pos, 0);
        let flipped = order.with_position_rank(vec![1, 0]);
        let (pos, _, _) = e.leading_term(&flipped).unwrap();
        assert_eq!(pos, 1);
    }
}
