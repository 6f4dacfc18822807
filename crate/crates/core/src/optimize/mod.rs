//! Preferred-extension selection by weighted satisfiability.
//!
//! After propagation, every literal targeted by an ambiguous nonmonotonic
//! antecedent becomes a boolean variable `x_p`: true when `p` reaches its
//! threshold (it is coerced to its upper bound), false when it stays below
//! (coerced to its lower bound). Hard clauses tie each `x_p` to the values
//! the graph then actually derives for `p`; two soft unit clauses per
//! variable carry the information-content costs.

mod encode;
mod solve;
mod wcnf;

use thiserror::Error;

use crate::extensions::{check_admissible, Labeling};
use crate::graph::LiteralId;
use crate::propagate::BoundsState;
use crate::scalar::Scalar;

pub use encode::{encode, Abstraction, EncodeError};
pub(crate) use solve::{blocking_clause as blocking, compare as compare_solutions};
pub use solve::{lower_bound, solve_exact, solve_exact_excluding, solve_heuristic, Heuristic, Solution, SolveError};
pub use wcnf::write_wcnf;

/// Information content: the midpoint of the literal's bounds.
pub fn ic<S: Scalar>(state: &BoundsState<'_, S>, p: LiteralId) -> S {
    state.literal_interval(p).midpoint()
}

/// `W(p) = IC(p) + (1 - IC(~p))`, the cost of making `x_p` false.
pub fn weight_w<S: Scalar>(state: &BoundsState<'_, S>, p: LiteralId) -> S {
    let complement = state.graph().complement(p);
    ic(state, p) + (S::one() - ic(state, complement))
}

/// A propositional literal over instance variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolLit {
    pub var: usize,
    pub positive: bool,
}

impl BoolLit {
    pub fn pos(var: usize) -> Self {
        BoolLit { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        BoolLit { var, positive: false }
    }

    pub fn negate(self) -> Self {
        BoolLit {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Signed 1-based index, as in DIMACS files.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn holds(self, values: &[bool]) -> bool {
        values[self.var] == self.positive
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight<S> {
    Hard,
    Soft(S),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedClause<S> {
    pub literals: Vec<BoolLit>,
    pub weight: Weight<S>,
    /// Where the clause came from, for humans.
    pub note: String,
}

impl<S> WeightedClause<S> {
    pub fn is_hard(&self) -> bool {
        matches!(self.weight, Weight::Hard)
    }

    pub fn satisfied_by(&self, values: &[bool]) -> bool {
        self.literals.iter().any(|l| l.holds(values))
    }
}

/// One variable per ambiguous literal.
#[derive(Debug, Clone, PartialEq)]
pub struct VarInfo<S> {
    pub literal: LiteralId,
    pub name: String,
    /// The threshold at which the literal is tested while ambiguous.
    pub alpha: S,
    pub ic: S,
    pub ic_complement: S,
}

impl<S: Scalar> VarInfo<S> {
    /// `W(p)`: weight of the soft clause `(x_p)`.
    pub fn weight_pos(&self) -> S {
        self.ic + (S::one() - self.ic_complement)
    }

    /// `W(~p)`: weight of the soft clause `(~x_p)`.
    pub fn weight_neg(&self) -> S {
        self.ic_complement + (S::one() - self.ic)
    }

    /// Search priority: distance of the information content from 1/2.
    pub fn priority(&self) -> S {
        (self.ic - S::of(0.5)).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WcnfInstance<S> {
    pub vars: Vec<VarInfo<S>>,
    pub clauses: Vec<WeightedClause<S>>,
}

impl<S: Scalar> WcnfInstance<S> {
    pub fn hard(&self) -> impl Iterator<Item = &WeightedClause<S>> {
        self.clauses.iter().filter(|c| c.is_hard())
    }

    pub fn soft(&self) -> impl Iterator<Item = (&WeightedClause<S>, S)> {
        self.clauses.iter().filter_map(|c| match c.weight {
            Weight::Soft(w) => Some((c, w)),
            Weight::Hard => None,
        })
    }

    pub fn satisfies_hard(&self, a: &Assignment) -> bool {
        self.hard().all(|c| c.satisfied_by(&a.values))
    }

    /// Sum of falsified soft weights, or `None` when a hard clause is
    /// falsified (infinite weight).
    pub fn weight(&self, a: &Assignment) -> Option<S> {
        if !self.satisfies_hard(a) {
            return None;
        }
        Some(
            self.soft()
                .filter(|(c, _)| !c.satisfied_by(&a.values))
                .fold(S::zero(), |acc, (_, w)| acc + w),
        )
    }

    pub fn var_by_name(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }
}

/// A total truth assignment over an instance's variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Every assignment over `n` variables, in binary counting order.
    pub fn all(n: usize) -> impl Iterator<Item = Assignment> {
        assert!(n < usize::BITS as usize);
        (0..1usize << n).map(move |bits| Assignment::new((0..n).map(|i| bits >> i & 1 == 1).collect()))
    }
}

/// `sum |IC(p) - FPV(p)| + |IC(~p) - FPV(~p)|` over the instance's
/// variables, with `FPV(p) = x_p` and `FPV(~p) = 1 - x_p`. IC values are read
/// from the state.
pub fn objective<S: Scalar>(state: &BoundsState<'_, S>, inst: &WcnfInstance<S>, a: &Assignment) -> S {
    let g = state.graph();
    inst.vars
        .iter()
        .zip(&a.values)
        .map(|(var, &x)| {
            let fpv = if x { S::one() } else { S::zero() };
            let p = ic(state, var.literal);
            let np = ic(state, g.complement(var.literal));
            (p - fpv).abs() + (np - (S::one() - fpv)).abs()
        })
        .fold(S::zero(), |acc, t| acc + t)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("assignment has {got} values but the instance has {expected} variables")]
    WrongLength { expected: usize, got: usize },
    #[error("decoded labeling is not admissible (encoding defect): {0}")]
    EncodingBug(String),
}

/// Turns an assignment back into a labeling: each variable fixes the value of
/// the nonmonotonic antecedents on its literal, then the graph is evaluated
/// exactly. The result is checked for admissibility.
pub fn decode<S: Scalar>(
    state: &BoundsState<'_, S>,
    inst: &WcnfInstance<S>,
    a: &Assignment,
) -> Result<Labeling<S>, DecodeError> {
    if a.len() != inst.vars.len() {
        return Err(DecodeError::WrongLength {
            expected: inst.vars.len(),
            got: a.len(),
        });
    }
    let abstraction = Abstraction::new(state, &inst.vars).map_err(|e| DecodeError::EncodingBug(e.to_string()))?;
    let labeling = Labeling::new(abstraction.evaluate(&a.values));
    check_admissible(state.graph(), &labeling).map_err(|v| DecodeError::EncodingBug(v.to_string()))?;
    Ok(labeling)
}
