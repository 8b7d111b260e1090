//! Term orders on monomials and their extensions to free-module terms.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Monomial;

/// Base order on monomials.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonoOrder {
    /// Pure lexicographic, `z1 > z2 > ...`.
    Lex,
    /// Total degree, ties by lexicographic.
    GrLex,
    /// Total degree, ties by reverse lexicographic on the last variable.
    GrevLex,
}

/// How module positions interact with the monomial order.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModulePriority {
    /// Compare positions first, monomials second.
    PositionOverTerm,
    /// Compare monomials first, positions second.
    TermOverPosition,
}

/// A complete module term order: monomial order, position handling, and an
/// optional position priority (a permutation ranking positions; lower rank
/// wins). The default ranks position 0 highest.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TermOrder {
    pub mono: MonoOrder,
    pub module: ModulePriority,
    position_rank: Option<Vec<usize>>,
}

impl TermOrder {
    pub fn new(mono: MonoOrder, module: ModulePriority) -> Self {
        TermOrder {
            mono,
            module,
            position_rank: None,
        }
    }

    pub fn lex() -> Self {
        Self::new(MonoOrder::Lex, ModulePriority::PositionOverTerm)
    }

    pub fn grlex() -> Self {
        Self::new(MonoOrder::GrLex, ModulePriority::PositionOverTerm)
    }

    pub fn grevlex() -> Self {
        Self::new(MonoOrder::GrevLex, ModulePriority::PositionOverTerm)
    }

    /// Replace the position priority; `rank[p]` is the rank of position `p`
    /// and smaller ranks compare greater.
    pub fn with_position_rank(mut self, rank: Vec<usize>) -> Self {
        self.position_rank = Some(rank);
        self
    }

    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.n_vars(), b.n_vars(), "comparing mixed-arity monomials");
        match self.mono {
            MonoOrder::Lex => a.exps().cmp(b.exps()),
            MonoOrder::GrLex => a
                .total_degree()
                .cmp(&b.total_degree())
                .then_with(|| a.exps().cmp(b.exps())),
            MonoOrder::GrevLex => a.total_degree().cmp(&b.total_degree()).then_with(|| {
                for (x, y) in a.exps().iter().zip(b.exps()).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        // Larger exponent on a later variable loses.
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }),
        }
    }

    fn cmp_pos(&self, a: usize, b: usize) -> Ordering {
        let rank = |p: usize| match &self.position_rank {
            Some(r) => r.get(p).copied().unwrap_or(p),
            None => p,
        };
        // Lower rank is the greater position.
        rank(b).cmp(&rank(a))
    }

    /// Compare `(position, monomial)` module terms.
    pub fn cmp_module(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        match self.module {
            ModulePriority::PositionOverTerm => self
                .cmp_pos(a.0, b.0)
                .then_with(|| self.cmp_mono(a.1, b.1)),
            ModulePriority::TermOverPosition => self
                .cmp_mono(a.1, b.1)
                .then_with(|| self.cmp_pos(a.0, b.0)),
        }
    }
}
