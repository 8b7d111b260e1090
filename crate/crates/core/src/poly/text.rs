//! Text form of polynomials: rational coefficients, named variables, the
//! operators `+ - * ^`, and parentheses. Multiplication is always explicit
//! (`2*z1`, never `2z1`) and exponents are non-negative integer literals.
//!
//! The renderer emits a canonical form (terms in descending graded-lex
//! order) that parses back to the same polynomial.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Monomial, Polynomial, Rat, TermOrder, MAX_TOTAL_DEGREE, MAX_VARS};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    vars: &'a [String],
}

impl<'a> Cursor<'a> {
    fn new(src: &str, vars: &'a [String]) -> Self {
        Cursor {
            src: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            vars,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn n_vars(&self) -> usize {
        self.vars.len()
    }

    /// expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    /// term := ['-'] factor ('*' factor)*
    fn term(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        let negate = if self.peek() == Some('-') {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
                acc = acc.mul(&self.factor()?);
            } else {
                break;
            }
        }
        Ok(if negate { acc.neg() } else { acc })
    }

    /// factor := atom ['^' uint]
    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let e = self.uint("a non-negative integer exponent after '^'")?;
            if e > MAX_TOTAL_DEGREE as u64 {
                return Err(Error::ResourceCap(format!(
                    "exponent {e} exceeds the degree cap {MAX_TOTAL_DEGREE}"
                )));
            }
            Ok(base.pow(e as u32))
        } else {
            Ok(base)
        }
    }

    /// atom := rational | variable | '(' expr ')'
    fn atom(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                self.skip_ws();
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.bigint();
                self.skip_ws();
                if self.peek() == Some('/') {
                    self.bump();
                    self.skip_ws();
                    if !matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                        return Err(self.err("expected a denominator after '/'"));
                    }
                    let den = self.bigint();
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Polynomial::constant(self.n_vars(), Rat::new(num, den)))
                } else {
                    Ok(Polynomial::constant(self.n_vars(), Rat::from(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let (name, line, col) = self.ident();
                match self.vars.iter().position(|v| v == &name) {
                    Some(j) => Ok(Polynomial::var(self.n_vars(), j)),
                    None => Err(Error::Syntax {
                        line,
                        col,
                        message: format!("unknown variable `{name}`"),
                    }),
                }
            }
            Some(c) => Err(self.err(format!("unexpected character '{c}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn bigint(&mut self) -> BigInt {
        let mut digits = String::new();
        while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        digits.parse().expect("digit run parses as an integer")
    }

    fn uint(&mut self, what: &str) -> Result<u64> {
        if !matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
            return Err(self.err(format!("expected {what}")));
        }
        let mut value: u64 = 0;
        while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
            let d = self.bump().unwrap().to_digit(10).unwrap() as u64;
            value = value.saturating_mul(10).saturating_add(d);
        }
        Ok(value)
    }

    fn ident(&mut self) -> (String, usize, usize) {
        let (line, col) = (self.line, self.col);
        let mut name = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            name.push(self.bump().unwrap());
        }
        (name, line, col)
    }
}

/// Parse one polynomial over the named variables.
pub fn parse_polynomial(src: &str, vars: &[String]) -> Result<Polynomial> {
    if vars.len() > MAX_VARS {
        return Err(Error::ResourceCap(format!(
            "{} variables exceed the cap of {MAX_VARS}",
            vars.len()
        )));
    }
    let mut cur = Cursor::new(src, vars);
    let p = cur.expr()?;
    cur.skip_ws();
    if let Some(c) = cur.peek() {
        return Err(cur.err(format!("unexpected character '{c}'")));
    }
    if let Some(d) = p.total_degree() {
        if d > MAX_TOTAL_DEGREE {
            return Err(Error::ResourceCap(format!(
                "total degree {d} exceeds the cap {MAX_TOTAL_DEGREE}"
            )));
        }
    }
    Ok(p)
}

/// Render in canonical form; `names` defaults to `z1..zN`.
pub fn render_polynomial(p: &Polynomial, names: Option<&[String]>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let order = TermOrder::grlex();
    let mut terms: Vec<(&Monomial, &Rat)> = p.terms().collect();
    terms.sort_by(|(a, _), (b, _)| match order.cmp_mono(b, a) {
        Ordering::Equal => Ordering::Equal,
        other => other,
    });
    let default_names: Vec<String>;
    let names = match names {
        Some(n) => n,
        None => {
            default_names = (1..=p.n_vars()).map(|i| format!("z{i}")).collect();
            &default_names
        }
    };
    let mut out = String::new();
    for (i, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mag = c.abs();
        let mono = render_monomial(m, names);
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    out
}

fn render_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (j, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[j].clone()),
            _ => parts.push(format!("{}^{}", names[j], e)),
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn vars(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("z{i}")).collect()
    }

    #[test]
    fn parses_mixed_terms() {
        let p = parse_polynomial("2*z1^2*z2 - 1/3*z2 + 4", &vars(2)).unwrap();
        assert_eq!(p.n_terms(), 3);
        assert_eq!(p.coeff(&Monomial::from_exps(vec![2, 1])), rat(2, 1));
        assert_eq!(p.coeff(&Monomial::from_exps(vec![0, 1])), rat(-1, 3));
        assert_eq!(p.coeff(&Monomial::from_exps(vec![0, 0])), rat(4, 1));
    }

    #[test]
    fn leading_minus_binds_the_whole_term() {
        let p = parse_polynomial("-z1^2", &vars(1)).unwrap();
        assert_eq!(p.coeff(&Monomial::from_exps(vec![2])), rat(-1, 1));
        let q = parse_polynomial("-2/5*z1", &vars(1)).unwrap();
        assert_eq!(q.coeff(&Monomial::from_exps(vec![1])), rat(-2, 5));
    }

    #[test]
    fn parenthesized_expressions_expand() {
        let p = parse_polynomial("(z1 + z2)^2", &vars(2)).unwrap();
        let q = parse_polynomial("z1^2 + 2*z1*z2 + z2^2", &vars(2)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        let err = parse_polynomial("2z1", &vars(1)).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, col: 2, .. }), "{err}");
    }

    #[test]
    fn negative_exponents_are_rejected_with_position() {
        let err = parse_polynomial("z1^-2", &vars(2)).unwrap_err();
        match err {
            Error::Syntax { line, col, .. } => {
                assert_eq!((line, col), (1, 4));
            }
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn unknown_variables_are_rejected() {
        let err = parse_polynomial("z1 + z3", &vars(2)).unwrap_err();
        match err {
            Error::Syntax { col, message, .. } => {
                assert_eq!(col, 6);
                assert!(message.contains("z3"), "{message}");
            }
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn zero_denominators_are_rejected() {
        assert!(parse_polynomial("1/0", &vars(1)).is_err());
    }

    #[test]
    fn degree_cap_is_enforced() {
        assert!(matches!(
            parse_polynomial("z1^65", &vars(1)),
            Err(Error::ResourceCap(_))
        ));
        assert!(parse_polynomial("z1^64", &vars(1)).is_ok());
        let nine: Vec<String> = (1..=9).map(|i| format!("z{i}")).collect();
        assert!(matches!(
            parse_polynomial("z1", &nine),
            Err(Error::ResourceCap(_))
        ));
    }

    #[test]
    fn render_round_trips_specific_cases() {
        for src in [
            "0",
            "-1/2",
            "z1",
            "-z1",
            "2*z1^2*z2 - 1/3*z2 + 4",
            "z1^64",
            "1/7*z2^3 - z1 + 2/3",
        ] {
            let p = parse_polynomial(src, &vars(2)).unwrap();
            let rendered = render_polynomial(&p, None);
            let q = parse_polynomial(&rendered, &vars(2)).unwrap();
            assert_eq!(p, q, "round trip failed for {src} -> {rendered}");
        }
    }
}
