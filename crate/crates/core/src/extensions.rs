//! Admissible labelings and their enumeration by starter-dependency
//! backtracking.

use std::fmt;

use thiserror::Error;

use crate::graph::{JustId, LiteralId, PrimoGraph, Vertex};
use crate::propagate::{AntecedentStatus, BoundsState, CertaintyInterval, Force};
use crate::scalar::Scalar;
use crate::scc::{condense, Condensation};
use crate::tnorm::eval_nonmon;

/// A point certainty for every vertex, indexed like the graph's vertices.
/// Arc labels follow from vertex labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Labeling<S> {
    values: Vec<S>,
}

impl<S: Scalar> Labeling<S> {
    pub fn new(values: Vec<S>) -> Self {
        Labeling { values }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn value(&self, g: &PrimoGraph<S>, v: Vertex) -> S {
        self.values[g.index_of(v)]
    }

    pub fn literal(&self, g: &PrimoGraph<S>, l: LiteralId) -> S {
        self.value(g, Vertex::Literal(l))
    }

    pub fn justification(&self, g: &PrimoGraph<S>, j: JustId) -> S {
        self.value(g, Vertex::Justification(j))
    }

    pub fn set(&mut self, g: &PrimoGraph<S>, v: Vertex, value: S) {
        let i = g.index_of(v);
        self.values[i] = value;
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.values.len() == other.values.len() && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_eq(*b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibilityCondition {
    /// A justification's label must be the t-norm of its sufficiency and
    /// entering arcs.
    JustificationTNorm,
    /// A literal's label must be the s-conorm of its entering arcs (and its
    /// input confidence).
    LiteralSConorm,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{condition:?} violated at {vertex:?}: expected {expected}, labeled {actual}")]
pub struct Violation<S: fmt::Debug + fmt::Display> {
    pub condition: AdmissibilityCondition,
    pub vertex: Vertex,
    pub expected: S,
    pub actual: S,
}

/// The value a vertex must carry given the labels of its predecessors.
pub(crate) fn required_value<S: Scalar>(g: &PrimoGraph<S>, lab: &[S], v: Vertex) -> S {
    let family = g.family();
    match v {
        Vertex::Justification(j) => {
            let mono = g.monotonic_antecedents(j).iter().map(|m| lab[m.0]);
            let nonmon = g
                .nonmonotonic_antecedents(j)
                .iter()
                .map(|&(t, alpha)| eval_nonmon(alpha, lab[t.0]));
            family.and_all(std::iter::once(g.sufficiency(j)).chain(mono).chain(nonmon))
        }
        Vertex::Literal(l) => {
            let support = g.supports(l).iter().map(|&j| lab[g.index_of(Vertex::Justification(j))]);
            family.or_all(g.input(l).into_iter().chain(support))
        }
    }
}

/// Checks both admissibility conditions at every vertex, literals first, and
/// reports the first violation.
pub fn check_admissible<S: Scalar>(g: &PrimoGraph<S>, lab: &Labeling<S>) -> Result<(), Violation<S>> {
    assert_eq!(lab.values.len(), g.vertex_count(), "labeling must be total");
    for v in g.vertices() {
        let expected = required_value(g, &lab.values, v);
        let actual = lab.value(g, v);
        if !expected.approx_eq(actual) {
            let condition = match v {
                Vertex::Literal(_) => AdmissibilityCondition::LiteralSConorm,
                Vertex::Justification(_) => AdmissibilityCondition::JustificationTNorm,
            };
            return Err(Violation {
                condition,
                vertex: v,
                expected,
                actual,
            });
        }
    }
    Ok(())
}

/// An AND-vertex whose only unresolved inputs are ambiguous nonmonotonic
/// antecedents; it must end up at exactly its lower or upper bound.
#[derive(Debug, Clone, PartialEq)]
pub struct StarterDependency<S> {
    pub justification: JustId,
    pub interval: CertaintyInterval<S>,
    /// Position of the justification's component in the condensation.
    pub component: usize,
    /// Branch taken, once the search has committed to one.
    pub choice: Option<Force>,
}

/// All starter dependencies of a stable state, earliest component first and
/// then by rule id.
pub fn find_starters<S: Scalar>(state: &BoundsState<'_, S>) -> Vec<StarterDependency<S>> {
    find_starters_in(state, &condense(state.graph()))
}

fn find_starters_in<S: Scalar>(state: &BoundsState<'_, S>, cond: &Condensation) -> Vec<StarterDependency<S>> {
    let g = state.graph();
    let mut starters: Vec<StarterDependency<S>> = g
        .justification_ids()
        .filter(|&j| is_starter(state, j))
        .map(|j| StarterDependency {
            justification: j,
            interval: state.justification_interval(j),
            component: cond.component_of(g, Vertex::Justification(j)),
            choice: None,
        })
        .collect();
    starters.sort_by(|a, b| {
        a.component.cmp(&b.component).then_with(|| {
            g.justification(a.justification)
                .id
                .cmp(&g.justification(b.justification).id)
        })
    });
    starters
}

fn is_starter<S: Scalar>(state: &BoundsState<'_, S>, j: JustId) -> bool {
    let g = state.graph();
    let iv = state.justification_interval(j);
    if state.is_pinned(j) || iv.is_exact() {
        return false;
    }
    let monos_exact = g
        .monotonic_antecedents(j)
        .iter()
        .all(|&m| state.literal_interval(m).is_exact());
    if !monos_exact {
        return false;
    }
    let statuses: Vec<AntecedentStatus> = (0..g.nonmonotonic_antecedents(j).len())
        .map(|i| state.classify(j, i))
        .collect();
    !statuses.contains(&AntecedentStatus::Exceeded) && statuses.contains(&AntecedentStatus::Ambiguous)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtensionError {
    #[error("stable state is not exact but has no starter dependency; unlabeled: {unlabeled:?}")]
    MissingStarter { unlabeled: Vec<String> },
    #[error("search produced an inadmissible labeling: {0}")]
    Inadmissible(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration<S> {
    pub labelings: Vec<Labeling<S>>,
    /// Set when more labelings exist beyond the requested maximum.
    pub truncated: bool,
    /// Search-tree nodes visited, each one a propagation run.
    pub nodes: usize,
    /// Starter dependencies branched on along the deepest path.
    pub max_depth: usize,
}

/// Enumerates up to `max_count` admissible labelings by depth-first
/// backtracking over starter dependencies. The lower-bound branch is explored
/// first, so the output order is deterministic. Zero labelings is a legal
/// result.
pub fn enumerate<S: Scalar>(g: &PrimoGraph<S>, max_count: usize) -> Result<Enumeration<S>, ExtensionError> {
    let cond = condense(g);
    let mut search = Search {
        cond: &cond,
        limit: max_count.saturating_add(1),
        out: Vec::new(),
        nodes: 0,
        max_depth: 0,
    };
    search.run(BoundsState::initialize(g), 0)?;
    let truncated = search.out.len() > max_count;
    search.out.truncate(max_count);
    Ok(Enumeration {
        labelings: search.out,
        truncated,
        nodes: search.nodes,
        max_depth: search.max_depth,
    })
}

struct Search<'c, S> {
    cond: &'c Condensation,
    limit: usize,
    out: Vec<Labeling<S>>,
    nodes: usize,
    max_depth: usize,
}

impl<S: Scalar> Search<'_, S> {
    fn run(&mut self, mut state: BoundsState<'_, S>, depth: usize) -> Result<(), ExtensionError> {
        if self.out.len() >= self.limit {
            return Ok(());
        }
        self.nodes += 1;
        self.max_depth = self.max_depth.max(depth);
        if state.propagate().is_err() {
            return Ok(());
        }
        let g = state.graph();
        if state.is_exact() {
            let lab = state.to_labeling();
            if let Err(v) = check_admissible(g, &lab) {
                return Err(ExtensionError::Inadmissible(v.to_string()));
            }
            self.out.push(lab);
            return Ok(());
        }
        let Some(starter) = find_starters_in(&state, self.cond).into_iter().next() else {
            let unlabeled = g
                .vertices()
                .filter(|&v| !state.interval(v).is_exact())
                .map(|v| g.vertex_name(v))
                .collect();
            return Err(ExtensionError::MissingStarter { unlabeled });
        };
        for force in [Force::Lo, Force::Hi] {
            let mut child = state.clone();
            child.force(starter.justification, force);
            self.run(child, depth + 1)?;
        }
        Ok(())
    }
}
