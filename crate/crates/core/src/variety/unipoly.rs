//! Dense univariate polynomials over ℚ with exact factorization.
//!
//! Factorization runs square-free decomposition first, then factors each
//! square-free primitive integer part by reduction mod an odd prime,
//! distinct/equal-degree splitting, quadratic Hensel lifting past the
//! coefficient bound, and subset recombination.  All randomness comes from
//! a fixed-seed generator, so results are reproducible bit for bit.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rat};

pub const FACTOR_DEGREE_CAP: usize = 40;
const RECOMBINATION_CAP: usize = 1 << 18;
const FACTOR_SEED: u64 = 0x5eed_0f_ac70__u64;

/// Univariate polynomial over ℚ, coefficients ascending, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Rat::zero())
    }

    pub fn lead(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            Some(l) if !l.is_zero() => self.scale(&(Rat::one() / l)),
            _ => self.clone(),
        }
    }

    /// Field division: (quotient, remainder) with deg r < deg divisor.
    pub fn divrem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let d = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.lead().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] / &lead;
            quot[i - d] = q.clone();
            for j in 0..=d {
                let sub = &q * &divisor.coeffs[j];
                rem[i - d + j] -= sub;
            }
        }
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    pub fn exact_div(&self, divisor: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divrem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i + 1)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Monic gcd over ℚ by the Euclidean algorithm with integer-content
    /// trimming between steps to keep coefficients small.
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut f = a.trim_content();
        let mut g = b.trim_content();
        while !g.is_zero() {
            let (_, r) = f.divrem(&g);
            f = g;
            g = r.trim_content();
        }
        f.monic()
    }

    fn trim_content(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let (_, prim) = self.integer_primitive();
        UniPoly::from_coeffs(prim.into_iter().map(Rat::from_integer).collect())
    }

    /// Write self = content · primitive with primitive ∈ ℤ[x], coprime
    /// integer coefficients and positive leading coefficient.
    pub fn integer_primitive(&self) -> (Rat, Vec<BigInt>) {
        assert!(!self.is_zero());
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut gcd = BigInt::zero();
        for c in &ints {
            gcd = gcd.gcd(c);
        }
        let mut sign = BigInt::one();
        if ints.last().unwrap().is_negative() {
            sign = -sign;
        }
        let scale = &gcd * &sign;
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &scale).collect();
        (Rat::new(scale, den_lcm), prim)
    }

    /// Extract a univariate view of a multivariate polynomial that involves
    /// only variable `var`.
    pub fn from_polynomial(p: &Polynomial, var: usize) -> Option<UniPoly> {
        let deg = p.degree_in(var).unwrap_or(0) as usize;
        let mut coeffs = vec![Rat::zero(); deg + 1];
        for (m, c) in p.terms() {
            let exps = m.exps();
            for (j, &e) in exps.iter().enumerate() {
                if j != var && e > 0 {
                    return None;
                }
            }
            coeffs[exps[var] as usize] = c.clone();
        }
        Some(UniPoly::from_coeffs(coeffs))
    }

    pub fn to_polynomial(&self, n_vars: usize, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(n_vars);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.add_term(Monomial::var(n_vars, var, i as u32), c.clone());
            }
        }
        out
    }
}

/// Square-free decomposition over ℚ: monic parts with multiplicities such
/// that input = unit · Π partᵢ^multᵢ.
pub fn yun_squarefree(f: &UniPoly) -> (Rat, Vec<(UniPoly, u32)>) {
    let lead = f.lead().expect("square-free decomposition of zero").clone();
    let f = f.monic();
    if f.degree() == Some(0) {
        return (lead, Vec::new());
    }
    let df = f.derivative();
    let g = UniPoly::gcd(&f, &df);
    let mut parts = Vec::new();
    if g.degree() == Some(0) {
        return (lead, vec![(f, 1)]);
    }
    let mut c = f.exact_div(&g).unwrap();
    let mut d = df.exact_div(&g).unwrap().sub(&c.derivative());
    let mut i = 1u32;
    while c.degree() != Some(0) {
        let a = UniPoly::gcd(&c, &d);
        if a.degree() != Some(0) {
            parts.push((a.clone(), i));
        }
        c = c.exact_div(&a).unwrap();
        d = d.exact_div(&a).unwrap().sub(&c.derivative());
        i += 1;
    }
    (lead, parts)
}

/// Exact irreducible factorization over ℚ: input = unit · Π factorᵢ^multᵢ
/// with primitive integer factors, positive leading coefficients, pairwise
/// non-associate.
pub fn factor_unipoly(f: &UniPoly) -> Result<(Rat, Vec<(UniPoly, u32)>)> {
    if f.is_zero() {
        return Err(Error::Input("cannot factor the zero polynomial".into()));
    }
    let deg = f.degree().unwrap();
    if deg > FACTOR_DEGREE_CAP {
        return Err(Error::Range(format!(
            "univariate factorization capped at degree {FACTOR_DEGREE_CAP}, got {deg}"
        )));
    }
    if deg == 0 {
        return Ok((f.coeff(0), Vec::new()));
    }

    let (_, squarefree_parts) = yun_squarefree(f);
    let mut factors: Vec<(UniPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_parts {
        let (_, prim) = part.integer_primitive();
        for irr in factor_squarefree_integer(&prim)? {
            let poly = UniPoly::from_coeffs(irr.into_iter().map(Rat::from_integer).collect());
            factors.push((poly, mult));
        }
    }
    factors.sort_by(|(a, am), (b, bm)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| compare_coeffs(a, b))
            .then(am.cmp(bm))
    });

    let mut unit = f.lead().unwrap().clone();
    for (fac, mult) in &factors {
        let l = fac.lead().unwrap();
        for _ in 0..*mult {
            unit /= l;
        }
    }
    Ok((unit, factors))
}

fn compare_coeffs(a: &UniPoly, b: &UniPoly) -> std::cmp::Ordering {
    for i in (0..a.coeffs.len().max(b.coeffs.len())).rev() {
        let ord = a.coeff(i).cmp(&b.coeff(i));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// Rational roots of f with multiplicities, found from divisor candidates
/// of the extreme coefficients.  Complete whenever the candidate
/// enumeration below is complete; callers that need every root exactly
/// must not rely on this for huge coefficients.
pub fn rational_roots(f: &UniPoly) -> Vec<(Rat, u32)> {
    if f.is_zero() || f.degree() == Some(0) {
        return Vec::new();
    }
    let mut work = f.clone();
    let mut roots = Vec::new();

    let mut zero_mult = 0u32;
    while work.coeff(0).is_zero() && work.degree() > Some(0) {
        work = work.exact_div(&UniPoly::from_coeffs(vec![Rat::zero(), Rat::one()])).unwrap();
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rat::zero(), zero_mult));
    }
    if work.degree() == Some(0) {
        return roots;
    }

    let (_, prim) = work.integer_primitive();
    let nums = small_divisors(&prim[0]);
    let dens = small_divisors(prim.last().unwrap());
    let mut candidates: Vec<Rat> = Vec::new();
    for n in &nums {
        for d in &dens {
            let c = Rat::new(n.clone(), d.clone());
            if !candidates.contains(&c) {
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
    }
    for cand in candidates {
        if work.eval(&cand).is_zero() {
            let linear = UniPoly::from_coeffs(vec![-cand.clone(), Rat::one()]);
            let mut mult = 0u32;
            while let Some(q) = work.exact_div(&linear) {
                work = q;
                mult += 1;
            }
            roots.push((cand, mult));
        }
    }
    roots.sort_by(|(a, _), (b, _)| a.cmp(b));
    roots
}

/// Positive divisors of |n|, capped; incomplete for numbers with large
/// prime content, in which case some rational roots may go undetected.
fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut divisors = vec![BigInt::one()];
    let mut remaining = n.clone();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2u32);
    while &p * &p <= remaining && p < BigInt::from(100_000u32) {
        let mut e = 0u32;
        while (&remaining % &p).is_zero() {
            remaining /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += 1u32;
    }
    if remaining > BigInt::one() {
        primes.push((remaining, 1));
    }
    for (p, e) in primes {
        let current = divisors.clone();
        let mut power = BigInt::one();
        for _ in 0..e {
            power *= &p;
            for d in &current {
                divisors.push(d * &power);
            }
            if divisors.len() > 4096 {
                return divisors;
            }
        }
    }
    divisors
}

// ---------------------------------------------------------------------
// Factorization of square-free primitive integer polynomials.
// ---------------------------------------------------------------------

/// Irreducible factors (primitive, positive lead) of a square-free
/// primitive integer polynomial with positive leading coefficient.
fn factor_squarefree_integer(f: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let n = f.len() - 1;
    if n <= 1 {
        return Ok(vec![f.to_vec()]);
    }

    // Scale to a monic polynomial: for f with lead l, the map
    // F(y) = l^{n−1} f(y/l) is monic over ℤ and factors of F at y = l·x
    // recover the factors of f.
    let lead = f[n].clone();
    let monic_input = lead.is_one();
    let capital = if monic_input {
        f.to_vec()
    } else {
        let mut scaled = Vec::with_capacity(n + 1);
        for (i, c) in f.iter().enumerate() {
            scaled.push(c * lead.pow((n - 1 - i.min(n - 1)) as u32));
        }
        scaled[n] = BigInt::one();
        scaled
    };

    let monic_factors = factor_monic_squarefree(&capital)?;
    if monic_input {
        return Ok(monic_factors);
    }
    Ok(monic_factors
        .into_iter()
        .map(|fac| {
            let substituted: Vec<BigInt> = fac
                .iter()
                .enumerate()
                .map(|(i, c)| c * lead.pow(i as u32))
                .collect();
            primitive_int(&substituted)
        })
        .collect())
}

fn primitive_int(f: &[BigInt]) -> Vec<BigInt> {
    let mut gcd = BigInt::zero();
    for c in f {
        gcd = gcd.gcd(c);
    }
    if f.last().unwrap().is_negative() {
        gcd = -gcd;
    }
    f.iter().map(|c| c / &gcd).collect()
}

fn factor_monic_squarefree(f: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let n = f.len() - 1;
    if n <= 1 {
        return Ok(vec![f.to_vec()]);
    }

    let p = choose_prime(f)?;
    let fp = reduce_mod_p(f, p);
    let modular = factor_mod_p(&fp, p);
    if modular.len() == 1 {
        return Ok(vec![f.to_vec()]);
    }

    // Mignotte-style bound: coefficients of any monic factor are below
    // 2^n (‖f‖₂ + 1); lift until the modulus exceeds twice that.
    let norm_sq: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::from(2u32).pow(n as u32)) * (sqrt_ceil(&norm_sq) + 1u32);
    let mut modulus = BigInt::from(p);
    let target = &bound * 2u32 + 1u32;
    while modulus < target {
        modulus = &modulus * &modulus;
    }

    let lifted = hensel_lift_tree(f, &modular, p, &modulus);
    recombine(f, lifted, &modulus)
}

fn choose_prime(f: &[BigInt]) -> Result<u64> {
    let mut p = 101u64;
    for _ in 0..2000 {
        while !is_prime_u64(p) {
            p += 2;
        }
        let fp = reduce_mod_p(f, p);
        if fp.len() == f.len() {
            let dfp = derive_mod_p(&fp, p);
            if poly_gcd_mod_p(&fp, &dfp, p).len() == 1 {
                return Ok(p);
            }
        }
        p += 2;
    }
    Err(Error::Invariant(
        "no suitable prime found for modular factorization".into(),
    ))
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn sqrt_ceil(n: &BigInt) -> BigInt {
    let root = n.sqrt();
    if &(&root * &root) < n {
        root + 1u32
    } else {
        root
    }
}

// -------------------- arithmetic mod a machine prime --------------------

fn reduce_mod_p(f: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut out: Vec<u64> = f
        .iter()
        .map(|c| {
            let r = c.mod_floor(&pb);
            r.to_u64().unwrap()
        })
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn invmod(a: u64, p: u64) -> u64 {
    // Fermat inverse; p prime, a ≢ 0.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(result, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    result
}

fn trim_p(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn derive_mod_p(f: &[u64], p: u64) -> Vec<u64> {
    if f.len() <= 1 {
        return Vec::new();
    }
    trim_p(
        f[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| mulmod(c, (i as u64 + 1) % p, p))
            .collect(),
    )
}

fn poly_mul_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim_p(out)
}

fn poly_divrem_mod_p(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let inv_lead = invmod(b[db], p);
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), trim_p(rem));
    }
    let mut quot = vec![0u64; rem.len() - db];
    for i in (db..rem.len()).rev() {
        if rem[i] == 0 {
            continue;
        }
        let q = mulmod(rem[i], inv_lead, p);
        quot[i - db] = q;
        for j in 0..=db {
            let sub = mulmod(q, b[j], p);
            rem[i - db + j] = (rem[i - db + j] + p - sub) % p;
        }
    }
    (trim_p(quot), trim_p(rem))
}

fn poly_gcd_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut f = a.to_vec();
    let mut g = b.to_vec();
    while !g.is_empty() {
        let (_, r) = poly_divrem_mod_p(&f, &g, p);
        f = g;
        g = r;
    }
    if f.is_empty() {
        return f;
    }
    let inv = invmod(*f.last().unwrap(), p);
    f.iter().map(|&c| mulmod(c, inv, p)).collect()
}

/// Extended Euclid mod p: (s, t) with s·a + t·b = 1 for coprime a, b.
fn poly_xgcd_mod_p(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let mut s0: Vec<u64> = vec![1];
    let mut s1: Vec<u64> = Vec::new();
    let mut t0: Vec<u64> = Vec::new();
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = poly_divrem_mod_p(&r0, &r1, p);
        let next_s = poly_sub_mod_p(&s0, &poly_mul_mod_p(&q, &s1, p), p);
        let next_t = poly_sub_mod_p(&t0, &poly_mul_mod_p(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = std::mem::replace(&mut s1, next_s);
        t0 = std::mem::replace(&mut t1, next_t);
    }
    debug_assert_eq!(r0.len(), 1, "xgcd of non-coprime polynomials");
    let inv = invmod(r0[0], p);
    (
        s0.iter().map(|&c| mulmod(c, inv, p)).collect(),
        t0.iter().map(|&c| mulmod(c, inv, p)).collect(),
    )
}

fn poly_sub_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    trim_p(out)
}

fn poly_powmod_mod_p(base: &[u64], e: &BigUint, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let (_, mut b) = poly_divrem_mod_p(base, modulus, p);
    for i in 0..e.bits() {
        if e.bit(i) {
            let prod = poly_mul_mod_p(&result, &b, p);
            result = poly_divrem_mod_p(&prod, modulus, p).1;
        }
        let sq = poly_mul_mod_p(&b, &b, p);
        b = poly_divrem_mod_p(&sq, modulus, p).1;
    }
    result
}

/// Monic irreducible factors of a monic square-free polynomial mod p.
fn factor_mod_p(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
    let mut by_degree: Vec<(Vec<u64>, usize)> = Vec::new();

    let mut work = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0usize;
    while work.len() > 1 && 2 * (d + 1) <= work.len() - 1 {
        d += 1;
        h = poly_powmod_mod_p(&h, &BigUint::from(p), &work, p);
        let h_minus_x = poly_sub_mod_p(&h, &x, p);
        let g = poly_gcd_mod_p(&h_minus_x, &work, p);
        if g.len() > 1 {
            by_degree.push((g.clone(), d));
            work = poly_divrem_mod_p(&work, &g, p).0;
            h = poly_divrem_mod_p(&h, &work, p).1;
        }
    }
    if work.len() > 1 {
        let deg = work.len() - 1;
        by_degree.push((work, deg));
    }

    let mut out = Vec::new();
    for (g, d) in by_degree {
        split_equal_degree(&g, d, p, &mut rng, &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)));
    out
}

fn split_equal_degree(
    g: &[u64],
    d: usize,
    p: u64,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Vec<u64>>,
) {
    let deg = g.len() - 1;
    if deg == d {
        out.push(g.to_vec());
        return;
    }
    let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let r: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
        let r = trim_p(r);
        if r.len() <= 1 {
            continue;
        }
        let power = poly_powmod_mod_p(&r, &e, g, p);
        let shifted = poly_sub_mod_p(&power, &[1], p);
        let w = poly_gcd_mod_p(&shifted, g, p);
        if w.len() > 1 && w.len() < g.len() {
            let rest = poly_divrem_mod_p(g, &w, p).0;
            split_equal_degree(&w, d, p, rng, out);
            split_equal_degree(&rest, d, p, rng, out);
            return;
        }
    }
}

// -------------------- Hensel lifting over ℤ/p^k --------------------

fn mod_reduce(f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = f.iter().map(|c| c.mod_floor(m)).collect();
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

fn lift_from_p(f: &[u64]) -> Vec<BigInt> {
    f.iter().map(|&c| BigInt::from(c)).collect()
}

fn poly_mul_mod_m(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    mod_reduce(&out, m)
}

fn poly_sub_mod_m(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        *slot = x - y;
    }
    mod_reduce(&out, m)
}

fn poly_add_mod_m(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        *slot = x + y;
    }
    mod_reduce(&out, m)
}

/// Division by a monic divisor over ℤ/m.
fn poly_divrem_monic_mod_m(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut rem: Vec<BigInt> = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), mod_reduce(&rem, m));
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let q = rem[i].mod_floor(m);
        if q.is_zero() {
            rem[i] = BigInt::zero();
            continue;
        }
        quot[i - db] = q.clone();
        for j in 0..=db {
            let sub = &q * &b[j];
            rem[i - db + j] = (&rem[i - db + j] - sub).mod_floor(m);
        }
    }
    (mod_reduce(&quot, m), mod_reduce(&rem, m))
}

/// One quadratic Hensel step: from f ≡ g·h (mod m), s·g + t·h ≡ 1 (mod m)
/// with g, h monic, produce the same data mod m².
#[allow(clippy::type_complexity)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let m2 = m * m;
    let gh = poly_mul_mod_m(g, h, &m2);
    let e = poly_sub_mod_m(&mod_reduce(f, &m2), &gh, &m2);
    let se = poly_mul_mod_m(s, &e, &m2);
    let (q, r) = poly_divrem_monic_mod_m(&se, h, &m2);
    let te = poly_mul_mod_m(t, &e, &m2);
    let qg = poly_mul_mod_m(&q, g, &m2);
    let g1 = poly_add_mod_m(&poly_add_mod_m(g, &te, &m2), &qg, &m2);
    let h1 = poly_add_mod_m(h, &r, &m2);

    let sg = poly_mul_mod_m(s, &g1, &m2);
    let th = poly_mul_mod_m(t, &h1, &m2);
    let b = poly_sub_mod_m(&poly_add_mod_m(&sg, &th, &m2), &[BigInt::one()], &m2);
    let sb = poly_mul_mod_m(s, &b, &m2);
    let (c, d) = poly_divrem_monic_mod_m(&sb, &h1, &m2);
    let s1 = poly_sub_mod_m(s, &d, &m2);
    let tb = poly_mul_mod_m(t, &b, &m2);
    let cg = poly_mul_mod_m(&c, &g1, &m2);
    let t1 = poly_sub_mod_m(&poly_sub_mod_m(t, &tb, &m2), &cg, &m2);
    (g1, h1, s1, t1)
}

/// Lift the modular factorization of a monic f to the given modulus by
/// binary splitting; returns monic factors mod `modulus` aligned with the
/// input list.
fn hensel_lift_tree(
    f: &[BigInt],
    modular: &[Vec<u64>],
    p: u64,
    modulus: &BigInt,
) -> Vec<Vec<BigInt>> {
    if modular.len() == 1 {
        return vec![mod_reduce(f, modulus)];
    }
    let half = modular.len() / 2;
    let pb = BigInt::from(p);

    let mut g0 = vec![1u64];
    for fac in &modular[..half] {
        g0 = poly_mul_mod_p(&g0, fac, p);
    }
    let mut h0 = vec![1u64];
    for fac in &modular[half..] {
        h0 = poly_mul_mod_p(&h0, fac, p);
    }
    let (s0, t0) = poly_xgcd_mod_p(&g0, &h0, p);

    let mut g = lift_from_p(&g0);
    let mut h = lift_from_p(&h0);
    let mut s = lift_from_p(&s0);
    let mut t = lift_from_p(&t0);
    let mut m = pb;
    while &m < modulus {
        let (g1, h1, s1, t1) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = &m * &m;
    }
    let g = mod_reduce(&g, modulus);
    let h = mod_reduce(&h, modulus);

    let mut out = hensel_lift_tree(&g, &modular[..half], p, modulus);
    out.extend(hensel_lift_tree(&h, &modular[half..], p, modulus));
    out
}

// -------------------- recombination --------------------

fn symmetric(f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2u32;
    f.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

/// Exact division over ℤ by a monic divisor; `None` when not divisible.
fn poly_exact_div_int(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    if a.len() <= db {
        return None;
    }
    debug_assert!(b[db].is_one());
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let q = rem[i].clone();
        if q.is_zero() {
            continue;
        }
        quot[i - db] = q.clone();
        for j in 0..=db {
            let sub = &q * &b[j];
            rem[i - db + j] -= sub;
        }
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

/// Advance `combo` to the next k-combination of {0..n−1} in lexicographic
/// order; false when exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn recombine(
    f: &[BigInt],
    lifted: Vec<Vec<BigInt>>,
    modulus: &BigInt,
) -> Result<Vec<Vec<BigInt>>> {
    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut current = f.to_vec();
    let mut result = Vec::new();
    let mut tried = 0usize;

    'outer: while !remaining.is_empty() {
        let r = remaining.len();
        for size in 1..=r {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                tried += 1;
                if tried > RECOMBINATION_CAP {
                    return Err(Error::ResourceCap(format!(
                        "factor recombination explored {RECOMBINATION_CAP} subsets \
                         ({} factors placed so far)",
                        result.len()
                    )));
                }
                let mut prod = vec![BigInt::one()];
                for &i in &combo {
                    prod = poly_mul_mod_m(&prod, &remaining[i], modulus);
                }
                let cand = symmetric(&prod, modulus);
                if let Some(quot) = poly_exact_div_int(&current, &cand) {
                    result.push(cand);
                    for &i in combo.iter().rev() {
                        remaining.remove(i);
                    }
                    current = quot;
                    continue 'outer;
                }
                if !next_combination(&mut combo, r) {
                    break;
                }
            }
        }
        // The full remaining product always divides; reaching here means a
        // bookkeeping bug rather than an input condition.
        return Err(Error::Invariant(
            "factor recombination failed to place the remaining factors".into(),
        ));
    }
    Ok(result)
}
