use std::cmp::Ordering;

use thiserror::Error;

use super::{Assignment, BoolLit, WcnfInstance, Weight, WeightedClause};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<S> {
    pub assignment: Assignment,
    pub weight: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("hard clauses are unsatisfiable: no admissible labeling")]
    Unsatisfiable,
    #[error("heuristic search found no assignment satisfying the hard clauses")]
    NoSolutionFound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Heuristic {
    Greedy,
    Beam { width: usize },
}

/// Per-variable cost of each value from soft unit clauses: `(if true, if false)`.
fn unit_costs<S: Scalar>(inst: &WcnfInstance<S>) -> Vec<(S, S)> {
    let mut costs = vec![(S::zero(), S::zero()); inst.vars.len()];
    for (c, w) in inst.soft() {
        if let [l] = c.literals[..] {
            if l.positive {
                costs[l.var].1 = costs[l.var].1 + w;
            } else {
                costs[l.var].0 = costs[l.var].0 + w;
            }
        }
    }
    costs
}

fn lit_value(l: BoolLit, partial: &[Option<bool>]) -> Option<bool> {
    partial[l.var].map(|v| v == l.positive)
}

fn falsified(c: &WeightedClause<impl Scalar>, partial: &[Option<bool>]) -> bool {
    c.literals.iter().all(|&l| lit_value(l, partial) == Some(false))
}

/// Weight already lost by a partial assignment plus, for every unassigned
/// variable, the cheaper of its two unit costs. Never exceeds the weight of
/// any completion; `None` when a hard clause is already falsified.
pub fn lower_bound<S: Scalar>(inst: &WcnfInstance<S>, partial: &[Option<bool>]) -> Option<S> {
    bound_with(inst, &unit_costs(inst), partial)
}

fn bound_with<S: Scalar>(inst: &WcnfInstance<S>, costs: &[(S, S)], partial: &[Option<bool>]) -> Option<S> {
    let mut total = S::zero();
    for c in &inst.clauses {
        if !falsified(c, partial) {
            continue;
        }
        match c.weight {
            Weight::Hard => return None,
            Weight::Soft(w) => total = total + w,
        }
    }
    for (v, &(t, f)) in costs.iter().enumerate() {
        if partial[v].is_none() {
            total = total + t.min(f);
        }
    }
    Some(total)
}

/// Total order on finite solutions: lower weight (within tolerance), then
/// fewer true variables, then lexicographic with false before true.
pub(crate) fn compare<S: Scalar>(a: &Solution<S>, b: &Solution<S>) -> Ordering {
    if !a.weight.approx_eq(b.weight) {
        return a.weight.partial_cmp(&b.weight).unwrap_or(Ordering::Equal);
    }
    let trues = |s: &Solution<S>| s.assignment.values.iter().filter(|&&x| x).count();
    trues(a)
        .cmp(&trues(b))
        .then_with(|| a.assignment.values.cmp(&b.assignment.values))
}

/// Variables by decreasing distance of IC from 1/2, ties by index.
fn search_order<S: Scalar>(inst: &WcnfInstance<S>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.vars.len()).collect();
    order.sort_by(|&a, &b| {
        inst.vars[b]
            .priority()
            .partial_cmp(&inst.vars[a].priority())
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

struct BranchAndBound<'a, S> {
    inst: &'a WcnfInstance<S>,
    costs: Vec<(S, S)>,
    order: Vec<usize>,
    partial: Vec<Option<bool>>,
    best: Option<Solution<S>>,
}

impl<S: Scalar> BranchAndBound<'_, S> {
    fn search(&mut self, depth: usize) {
        let Some(bound) = bound_with(self.inst, &self.costs, &self.partial) else {
            return;
        };
        if let Some(best) = &self.best {
            if bound > best.weight + S::tolerance() {
                return;
            }
        }
        if depth == self.order.len() {
            let candidate = Solution {
                assignment: Assignment::new(self.partial.iter().map(|v| v.unwrap_or(false)).collect()),
                weight: bound,
            };
            let better = match &self.best {
                None => true,
                Some(best) => compare(&candidate, best) == Ordering::Less,
            };
            if better {
                self.best = Some(candidate);
            }
            return;
        }
        let v = self.order[depth];
        let (t, f) = self.costs[v];
        let first = t + S::tolerance() < f;
        for value in [first, !first] {
            self.partial[v] = Some(value);
            self.search(depth + 1);
        }
        self.partial[v] = None;
    }
}

/// Minimum-weight assignment satisfying every hard clause.
pub fn solve_exact<S: Scalar>(inst: &WcnfInstance<S>) -> Result<Solution<S>, SolveError> {
    let mut bb = BranchAndBound {
        inst,
        costs: unit_costs(inst),
        order: search_order(inst),
        partial: vec![None; inst.vars.len()],
        best: None,
    };
    bb.search(0);
    bb.best.ok_or(SolveError::Unsatisfiable)
}

/// Hard clause falsified exactly by `a`.
pub(crate) fn blocking_clause<S>(a: &Assignment) -> WeightedClause<S> {
    WeightedClause {
        literals: a
            .values
            .iter()
            .enumerate()
            .map(|(v, &x)| BoolLit { var: v, positive: !x })
            .collect(),
        weight: Weight::Hard,
        note: String::from("excluded solution"),
    }
}

pub(crate) fn with_exclusions<S: Scalar>(inst: &WcnfInstance<S>, excluded: &[Assignment]) -> WcnfInstance<S> {
    let mut inst = inst.clone();
    inst.clauses.extend(excluded.iter().map(blocking_clause));
    inst
}

/// Like [`solve_exact`], but never returns one of `excluded`. Calling it with
/// the previous answers appended yields solutions in increasing weight.
pub fn solve_exact_excluding<S: Scalar>(
    inst: &WcnfInstance<S>,
    excluded: &[Assignment],
) -> Result<Solution<S>, SolveError> {
    solve_exact(&with_exclusions(inst, excluded))
}

/// Assigns forced literals of hard clauses until none is left. Returns false
/// on a falsified hard clause.
fn unit_propagate<S: Scalar>(inst: &WcnfInstance<S>, partial: &mut [Option<bool>]) -> bool {
    loop {
        let mut changed = false;
        for c in inst.hard() {
            let mut open = None;
            let mut open_count = 0;
            let mut satisfied = false;
            for &l in &c.literals {
                match lit_value(l, partial) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open = Some(l);
                        open_count += 1;
                    }
                }
            }
            if satisfied {
                continue;
            }
            match (open_count, open) {
                (0, _) => return false,
                (1, Some(l)) => {
                    partial[l.var] = Some(l.positive);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn greedy<S: Scalar>(inst: &WcnfInstance<S>) -> Result<Solution<S>, SolveError> {
    let n = inst.vars.len();
    let mut partial = vec![None; n];
    if !unit_propagate(inst, &mut partial) {
        return Err(SolveError::NoSolutionFound);
    }
    for v in search_order(inst) {
        if partial[v].is_some() {
            continue;
        }
        let preferred = inst.vars[v].ic > S::of(0.5);
        let mut placed = false;
        for value in [preferred, !preferred] {
            let mut trial = partial.clone();
            trial[v] = Some(value);
            if unit_propagate(inst, &mut trial) {
                partial = trial;
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(SolveError::NoSolutionFound);
        }
    }
    let mut current = Assignment::new(partial.into_iter().map(|v| v.unwrap_or(false)).collect());
    let mut weight = inst.weight(&current).ok_or(SolveError::NoSolutionFound)?;
    loop {
        let mut step: Option<(usize, S)> = None;
        for v in 0..n {
            current.values[v] = !current.values[v];
            if let Some(w) = inst.weight(&current) {
                let target = step.map_or(weight, |(_, s)| s);
                if w + S::tolerance() < target {
                    step = Some((v, w));
                }
            }
            current.values[v] = !current.values[v];
        }
        match step {
            Some((v, w)) => {
                current.values[v] = !current.values[v];
                weight = w;
            }
            None => break,
        }
    }
    Ok(Solution {
        assignment: current,
        weight,
    })
}

fn beam<S: Scalar>(inst: &WcnfInstance<S>, width: usize) -> Result<Solution<S>, SolveError> {
    let width = width.max(1);
    let costs = unit_costs(inst);
    let mut frontier: Vec<Vec<Option<bool>>> = vec![vec![None; inst.vars.len()]];
    for v in search_order(inst) {
        let mut next: Vec<(S, Vec<Option<bool>>)> = Vec::new();
        for partial in &frontier {
            for value in [false, true] {
                let mut child = partial.clone();
                child[v] = Some(value);
                if let Some(b) = bound_with(inst, &costs, &child) {
                    next.push((b, child));
                }
            }
        }
        next.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        next.truncate(width);
        if next.is_empty() {
            return Err(SolveError::NoSolutionFound);
        }
        frontier = next.into_iter().map(|(_, p)| p).collect();
    }
    frontier
        .into_iter()
        .filter_map(|p| {
            let a = Assignment::new(p.into_iter().map(|v| v.unwrap_or(false)).collect());
            inst.weight(&a).map(|weight| Solution { assignment: a, weight })
        })
        .min_by(compare)
        .ok_or(SolveError::NoSolutionFound)
}

/// Fast search without an optimality guarantee. The returned weight is never
/// below the exact optimum.
pub fn solve_heuristic<S: Scalar>(inst: &WcnfInstance<S>, method: Heuristic) -> Result<Solution<S>, SolveError> {
    match method {
        Heuristic::Greedy => greedy(inst),
        Heuristic::Beam { width } => beam(inst, width),
    }
}
