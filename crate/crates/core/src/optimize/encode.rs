use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use super::{ic, BoolLit, VarInfo, WcnfInstance, Weight, WeightedClause};
use crate::graph::{LiteralId, PrimoGraph, Vertex};
use crate::propagate::{AntecedentStatus, BoundsState};
use crate::scalar::Scalar;
use crate::scc::tarjan;

/// Largest number of variables a single literal may depend on before the
/// truth-table construction of its clauses is refused.
pub const MAX_DEPENDENCIES: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EncodeError {
    #[error("no ambiguous nonmonotonic antecedent: the labeling is already exact")]
    AlreadyExact,
    #[error("`{literal}` is ambiguous under several thresholds {alphas:?}; one boolean cannot represent it")]
    ConflictingThresholds { literal: String, alphas: Vec<f64> },
    #[error("`{literal}` depends on {count} variables (limit {MAX_DEPENDENCIES})")]
    TooManyDependencies { literal: String, count: usize },
    #[error("graph has a monotonic cycle")]
    MonotonicCycle,
    #[error("ambiguous antecedent on `{0}` has no variable")]
    UnknownVariable(String),
}

#[derive(Debug, Clone, Copy)]
enum Factor<S> {
    Constant(S),
    Var(usize),
}

/// The graph with every nonmonotonic antecedent reduced to a constant (when
/// resolved by propagation) or to the negation of a variable (when
/// ambiguous). Cutting those edges leaves an acyclic monotonic graph that is
/// evaluated exactly.
#[derive(Debug, Clone)]
pub struct Abstraction<'a, 'g, S> {
    state: &'a BoundsState<'g, S>,
    factors: Vec<Vec<Factor<S>>>,
    order: Vec<Vertex>,
}

impl<'a, 'g, S: Scalar> Abstraction<'a, 'g, S> {
    pub fn new(state: &'a BoundsState<'g, S>, vars: &[VarInfo<S>]) -> Result<Self, EncodeError> {
        let g = state.graph();
        let mut var_of = vec![None; g.literal_count()];
        for (i, v) in vars.iter().enumerate() {
            var_of[v.literal.0] = Some(i);
        }
        let mut factors = Vec::with_capacity(g.justification_count());
        for j in g.justification_ids() {
            let mut row = Vec::new();
            for (k, &(target, _)) in g.nonmonotonic_antecedents(j).iter().enumerate() {
                row.push(match state.classify(j, k) {
                    AntecedentStatus::Satisfied => Factor::Constant(S::one()),
                    AntecedentStatus::Exceeded => Factor::Constant(S::zero()),
                    AntecedentStatus::Ambiguous => match var_of[target.0] {
                        Some(i) => Factor::Var(i),
                        None => return Err(EncodeError::UnknownVariable(g.literal(target).to_string())),
                    },
                });
            }
            factors.push(row);
        }
        let order = monotonic_order(g)?;
        Ok(Abstraction { state, factors, order })
    }

    /// Vertex values under the given variable values.
    pub fn evaluate(&self, x: &[bool]) -> Vec<S> {
        let g = self.state.graph();
        let family = g.family();
        let mut values = vec![S::zero(); g.vertex_count()];
        for &v in &self.order {
            let value = match v {
                Vertex::Justification(j) => {
                    let mono = g.monotonic_antecedents(j).iter().map(|m| values[m.0]);
                    let nonmon = self.factors[j.0].iter().map(|f| match *f {
                        Factor::Constant(c) => c,
                        Factor::Var(i) if x[i] => S::zero(),
                        Factor::Var(_) => S::one(),
                    });
                    family.and_all(std::iter::once(g.sufficiency(j)).chain(mono).chain(nonmon))
                }
                Vertex::Literal(l) => {
                    let support = g
                        .supports(l)
                        .iter()
                        .map(|&j| values[g.index_of(Vertex::Justification(j))]);
                    family.or_all(g.input(l).into_iter().chain(support))
                }
            };
            values[g.index_of(v)] = value;
        }
        values
    }

    /// Variables whose value can influence each vertex.
    fn dependencies(&self) -> Vec<BTreeSet<usize>> {
        let g = self.state.graph();
        let mut deps = vec![BTreeSet::new(); g.vertex_count()];
        for &v in &self.order {
            let mut set = BTreeSet::new();
            match v {
                Vertex::Justification(j) => {
                    for m in g.monotonic_antecedents(j) {
                        set.extend(deps[m.0].iter().copied());
                    }
                    for f in &self.factors[j.0] {
                        if let Factor::Var(i) = f {
                            set.insert(*i);
                        }
                    }
                }
                Vertex::Literal(l) => {
                    for &j in g.supports(l) {
                        set.extend(deps[g.index_of(Vertex::Justification(j))].iter().copied());
                    }
                }
            }
            deps[g.index_of(v)] = set;
        }
        deps
    }
}

fn monotonic_order<S: Scalar>(g: &PrimoGraph<S>) -> Result<Vec<Vertex>, EncodeError> {
    let adj = g.adjacency(true);
    let mut comps = tarjan(&adj);
    comps.reverse();
    let mut order = Vec::with_capacity(g.vertex_count());
    for comp in comps {
        if comp.len() > 1 || adj[comp[0]].iter().any(|&(w, _)| w == comp[0]) {
            return Err(EncodeError::MonotonicCycle);
        }
        order.push(g.vertex_at(comp[0]));
    }
    Ok(order)
}

/// Ambiguous literals, sorted by literal, each with its unique ambiguous
/// threshold.
fn ambiguous_variables<S: Scalar>(state: &BoundsState<'_, S>) -> Result<Vec<VarInfo<S>>, EncodeError> {
    let g = state.graph();
    let mut found: Vec<(LiteralId, Vec<S>)> = Vec::new();
    for j in g.justification_ids() {
        for (k, &(target, alpha)) in g.nonmonotonic_antecedents(j).iter().enumerate() {
            if state.classify(j, k) != AntecedentStatus::Ambiguous {
                continue;
            }
            match found.iter_mut().find(|(l, _)| *l == target) {
                Some((_, alphas)) => {
                    if !alphas.contains(&alpha) {
                        alphas.push(alpha);
                    }
                }
                None => found.push((target, vec![alpha])),
            }
        }
    }
    found.sort_by(|a, b| g.literal(a.0).cmp(g.literal(b.0)));
    found
        .into_iter()
        .map(|(literal, alphas)| {
            if alphas.len() > 1 {
                return Err(EncodeError::ConflictingThresholds {
                    literal: g.literal(literal).to_string(),
                    alphas: alphas.iter().map(|a| a.to_f64().unwrap_or(f64::NAN)).collect(),
                });
            }
            Ok(VarInfo {
                literal,
                name: g.literal(literal).to_string(),
                alpha: alphas[0],
                ic: ic(state, literal),
                ic_complement: ic(state, g.complement(literal)),
            })
        })
        .collect()
}

/// Minimal sets (as bitmasks over `n` positions, smallest first) on which
/// `holds` is true, assuming `holds` is upward closed.
fn minimal_sets(n: usize, holds: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut masks: Vec<usize> = (0..1usize << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut out: Vec<usize> = Vec::new();
    for m in masks {
        if out.iter().any(|&k| k & !m == 0) {
            continue;
        }
        if holds(m) {
            out.push(m);
        }
    }
    out
}

fn normalize(mut lits: Vec<BoolLit>) -> Option<Vec<BoolLit>> {
    lits.sort();
    lits.dedup();
    let tautology = lits.windows(2).any(|w| w[0].var == w[1].var);
    (!tautology).then_some(lits)
}

/// Builds the weighted instance for a stable state.
///
/// For each ambiguous literal `p` with threshold `a`, let `g_p(x)` say
/// whether the graph, evaluated with the nonmonotonic antecedents fixed by
/// `x`, derives `LB(p) >= a`. `g_p` is antitone in `x`, so `x_p <-> g_p` is
/// written as one clause `(x_p | x_q ...)` per minimal set of variables whose
/// falsity makes `g_p` true, and one clause `(~x_p | ~x_q ...)` per minimal
/// set whose truth makes it false. Soft units `(x_p)` and `(~x_p)` carry
/// `W(p)` and `W(~p)`.
pub fn encode<S: Scalar>(state: &BoundsState<'_, S>) -> Result<WcnfInstance<S>, EncodeError> {
    let vars = ambiguous_variables(state)?;
    if vars.is_empty() {
        return Err(EncodeError::AlreadyExact);
    }
    let g = state.graph();
    let abstraction = Abstraction::new(state, &vars)?;
    let deps = abstraction.dependencies();

    let mut clauses = Vec::new();
    let mut seen: HashSet<Vec<BoolLit>> = HashSet::new();
    let mut push_hard = |lits: Vec<BoolLit>, note: String, clauses: &mut Vec<WeightedClause<S>>| {
        if let Some(lits) = normalize(lits) {
            if seen.insert(lits.clone()) {
                clauses.push(WeightedClause {
                    literals: lits,
                    weight: Weight::Hard,
                    note,
                });
            }
        }
    };

    let n = vars.len();
    for (p, var) in vars.iter().enumerate() {
        let relevant: Vec<usize> = deps[var.literal.0].iter().copied().collect();
        if relevant.len() > MAX_DEPENDENCIES {
            return Err(EncodeError::TooManyDependencies {
                literal: var.name.clone(),
                count: relevant.len(),
            });
        }
        let r = relevant.len();
        let reaches: Vec<bool> = (0..1usize << r)
            .map(|mask| {
                let mut x = vec![false; n];
                for (bit, &v) in relevant.iter().enumerate() {
                    x[v] = mask >> bit & 1 == 1;
                }
                abstraction.evaluate(&x)[var.literal.0] >= var.alpha
            })
            .collect();
        let full = (1usize << r) - 1;
        let names = |mask: usize, negate: bool| -> String {
            let parts: Vec<String> = (0..r)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| format!("{}x_{}", if negate { "!" } else { "" }, vars[relevant[b]].name))
                .collect();
            if parts.is_empty() {
                String::from("true")
            } else {
                parts.join(" & ")
            }
        };

        // Sets of variables that, all false, make p reach its threshold.
        for mask in minimal_sets(r, |m| reaches[full & !m]) {
            let mut lits = vec![BoolLit::pos(p)];
            lits.extend((0..r).filter(|b| mask >> b & 1 == 1).map(|b| BoolLit::pos(relevant[b])));
            push_hard(lits, format!("x_{} <- {}", var.name, names(mask, true)), &mut clauses);
        }
        // Sets of variables that, all true, keep p below its threshold.
        for mask in minimal_sets(r, |m| !reaches[m]) {
            let mut lits = vec![BoolLit::neg(p)];
            lits.extend((0..r).filter(|b| mask >> b & 1 == 1).map(|b| BoolLit::neg(relevant[b])));
            let body = if mask == 0 {
                "false".to_string()
            } else {
                format!("!({})", names(mask, false))
            };
            push_hard(lits, format!("x_{} -> {body}", var.name), &mut clauses);
        }
    }

    for (p, var) in vars.iter().enumerate() {
        clauses.push(WeightedClause {
            literals: vec![BoolLit::pos(p)],
            weight: Weight::Soft(var.weight_pos()),
            note: format!("W({})", var.name),
        });
        clauses.push(WeightedClause {
            literals: vec![BoolLit::neg(p)],
            weight: Weight::Soft(var.weight_neg()),
            note: format!("W({})", g.literal(g.complement(var.literal))),
        });
    }
    Ok(WcnfInstance { vars, clauses })
}
