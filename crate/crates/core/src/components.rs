//! Component-wise solving: the weighted instance is split along the SCC
//! condensation and solved bottom up, with values from solved components
//! substituted into the clauses of later ones.

use std::cmp::Ordering;

use thiserror::Error;

use crate::extensions::Labeling;
use crate::graph::{PrimoGraph, Vertex};
use crate::optimize::{
    decode, encode, objective, solve_exact, solve_heuristic, Assignment, BoolLit, DecodeError, EncodeError, Heuristic,
    Solution, SolveError, WcnfInstance, WeightedClause,
};
use crate::propagate::BoundsState;
use crate::scalar::Scalar;
use crate::scc::condense;
use crate::validate::validate_graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Heuristic(Heuristic),
}

/// Variables and clauses owned by one strongly connected component.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentBlock<S> {
    /// Index of the component in the condensation's topological order.
    pub component: usize,
    /// Global variable indices, ascending.
    pub vars: Vec<usize>,
    /// Clauses whose latest variable lives here. Literals use global indices
    /// and may mention variables of earlier blocks.
    pub clauses: Vec<WeightedClause<S>>,
}

/// Blocks in topological order. Every clause references only variables of
/// its own block or of earlier ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentPlan<S> {
    pub blocks: Vec<ComponentBlock<S>>,
}

impl<S: Scalar> ComponentPlan<S> {
    pub fn new(state: &BoundsState<'_, S>, inst: &WcnfInstance<S>) -> Self {
        let g = state.graph();
        let cond = condense(g);
        let comp_of: Vec<usize> = inst
            .vars
            .iter()
            .map(|v| cond.component_of(g, Vertex::Literal(v.literal)))
            .collect();
        let mut comps: Vec<usize> = comp_of.clone();
        comps.sort_unstable();
        comps.dedup();
        let mut blocks: Vec<ComponentBlock<S>> = comps
            .iter()
            .map(|&component| ComponentBlock {
                component,
                vars: (0..inst.vars.len()).filter(|&v| comp_of[v] == component).collect(),
                clauses: Vec::new(),
            })
            .collect();
        for c in &inst.clauses {
            let latest = c.literals.iter().map(|l| comp_of[l.var]).max();
            let Some(latest) = latest else { continue };
            let b = comps.binary_search(&latest).expect("component of a variable");
            blocks[b].clauses.push(c.clone());
        }
        ComponentPlan { blocks }
    }

    /// The block's sub-instance with earlier variables fixed by `upstream`.
    /// `None` when a clause is falsified by the fixed values alone.
    fn local_instance(&self, inst: &WcnfInstance<S>, b: usize, upstream: &[Option<bool>]) -> Option<WcnfInstance<S>> {
        let block = &self.blocks[b];
        let mut local_of = vec![usize::MAX; inst.vars.len()];
        for (i, &v) in block.vars.iter().enumerate() {
            local_of[v] = i;
        }
        let mut clauses = Vec::new();
        for c in &block.clauses {
            let mut literals = Vec::new();
            let mut satisfied = false;
            for l in &c.literals {
                match upstream[l.var] {
                    Some(x) if x == l.positive => satisfied = true,
                    Some(_) => {}
                    None => literals.push(BoolLit {
                        var: local_of[l.var],
                        positive: l.positive,
                    }),
                }
            }
            if satisfied {
                continue;
            }
            if literals.is_empty() {
                if c.is_hard() {
                    return None;
                }
                continue;
            }
            clauses.push(WeightedClause {
                literals,
                weight: c.weight,
                note: c.note.clone(),
            });
        }
        Some(WcnfInstance {
            vars: block.vars.iter().map(|&v| inst.vars[v].clone()).collect(),
            clauses,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSolution<S> {
    pub labeling: Labeling<S>,
    pub objective: S,
    /// Empty when propagation alone resolved every antecedent.
    pub assignment: Assignment,
    /// Sub-problems found unsolvable under the upstream values in force.
    pub backtracks: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComponentError {
    #[error("graph has a monotonic cycle")]
    InvalidGraph,
    #[error("propagation is inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Encode(EncodeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

struct Search<'a, S> {
    plan: &'a ComponentPlan<S>,
    inst: &'a WcnfInstance<S>,
    method: Method,
    /// `rest[b]`: cheapest possible weight of blocks `b..`.
    rest: Vec<S>,
    values: Vec<Option<bool>>,
    best: Option<Solution<S>>,
    backtracks: usize,
}

impl<S: Scalar> Search<'_, S> {
    fn local_solve(&self, local: &WcnfInstance<S>) -> Result<Solution<S>, SolveError> {
        match self.method {
            Method::Exact => solve_exact(local),
            Method::Heuristic(h) => solve_heuristic(local, h),
        }
    }

    /// Returns true when the search is finished.
    fn run(&mut self, b: usize, acc: S) -> bool {
        if b == self.plan.blocks.len() {
            let assignment = Assignment::new(self.values.iter().map(|v| v.unwrap_or(false)).collect());
            let weight = self.inst.weight(&assignment).unwrap_or(acc);
            let candidate = Solution { assignment, weight };
            let better = match &self.best {
                None => true,
                Some(best) => crate::optimize::compare_solutions(&candidate, best) == Ordering::Less,
            };
            if better {
                self.best = Some(candidate);
            }
            return matches!(self.method, Method::Heuristic(_));
        }
        let Some(mut local) = self.plan.local_instance(self.inst, b, &self.values) else {
            self.backtracks += 1;
            return false;
        };
        let vars = self.plan.blocks[b].vars.clone();
        let mut tried = 0;
        loop {
            let Ok(sol) = self.local_solve(&local) else {
                if tried == 0 {
                    self.backtracks += 1;
                }
                break;
            };
            tried += 1;
            let total = acc + sol.weight;
            if let (Method::Exact, Some(best)) = (self.method, &self.best) {
                // Alternatives arrive in increasing weight.
                let rest = self.rest.get(b + 1).copied().unwrap_or_else(S::zero);
                if total + rest > best.weight + S::tolerance() {
                    break;
                }
            }
            for (i, &v) in vars.iter().enumerate() {
                self.values[v] = Some(sol.assignment.values[i]);
            }
            if self.run(b + 1, total) {
                return true;
            }
            local.clauses.push(crate::optimize::blocking(&sol.assignment));
        }
        for &v in &vars {
            self.values[v] = None;
        }
        false
    }
}

/// Solves the graph component by component. With [`Method::Exact`] the
/// search keeps exploring upstream alternatives while they can still improve
/// on the best total, so the result is globally optimal. Heuristic methods
/// stop at the first complete solution and go back upstream only when a
/// component has no solution.
pub fn solve_by_components<S: Scalar>(
    g: &PrimoGraph<S>,
    method: Method,
) -> Result<ComponentSolution<S>, ComponentError> {
    if !validate_graph(g).is_valid() {
        return Err(ComponentError::InvalidGraph);
    }
    let mut state = BoundsState::initialize(g);
    state
        .propagate()
        .map_err(|e| ComponentError::Inconsistent(e.to_string()))?;
    let inst = match encode(&state) {
        Ok(inst) => inst,
        Err(EncodeError::AlreadyExact) => {
            return Ok(ComponentSolution {
                labeling: state.to_labeling(),
                objective: S::zero(),
                assignment: Assignment::new(Vec::new()),
                backtracks: 0,
            })
        }
        Err(e) => return Err(ComponentError::Encode(e)),
    };
    let plan = ComponentPlan::new(&state, &inst);
    let mut rest = vec![S::zero(); plan.blocks.len() + 1];
    for b in (0..plan.blocks.len()).rev() {
        let cheapest = plan.blocks[b]
            .vars
            .iter()
            .map(|&v| inst.vars[v].weight_pos().min(inst.vars[v].weight_neg()))
            .fold(S::zero(), |a, w| a + w);
        rest[b] = rest[b + 1] + cheapest;
    }
    let mut search = Search {
        plan: &plan,
        inst: &inst,
        method,
        rest,
        values: vec![None; inst.vars.len()],
        best: None,
        backtracks: 0,
    };
    search.run(0, S::zero());
    let best = search.best.ok_or(match method {
        Method::Exact => SolveError::Unsatisfiable,
        Method::Heuristic(_) => SolveError::NoSolutionFound,
    })?;
    let labeling = decode(&state, &inst, &best.assignment)?;
    Ok(ComponentSolution {
        labeling,
        objective: objective(&state, &inst, &best.assignment),
        assignment: best.assignment,
        backtracks: search.backtracks,
    })
}
