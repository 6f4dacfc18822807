//! Certainty-bounds propagation to a fixpoint.
//!
//! Every vertex carries an interval `[lb-, lb+]` bounding its certainty in any
//! admissible labeling. Starting from `[k, 1]` on inputs and `[0, 1]`
//! elsewhere, vertices are relabeled with freshly computed bounds until
//! nothing changes. The lower bound of a justification reads the lower bounds
//! of its monotonic antecedents and the upper bounds of its nonmonotonic
//! targets; the upper bound reads the opposite ends. The fixpoint does not
//! depend on the order in which vertices are visited.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::extensions::Labeling;
use crate::graph::{JustId, LiteralId, PrimoGraph, Vertex};
use crate::scalar::Scalar;
use crate::scc::condense;
use crate::tnorm::eval_nonmon;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertaintyInterval<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> CertaintyInterval<S> {
    pub fn new(lo: S, hi: S) -> Self {
        CertaintyInterval { lo, hi }
    }

    pub fn exact(value: S) -> Self {
        CertaintyInterval { lo: value, hi: value }
    }

    pub fn unknown() -> Self {
        CertaintyInterval::new(S::zero(), S::one())
    }

    pub fn is_exact(&self) -> bool {
        self.hi - self.lo <= S::tolerance()
    }

    pub fn midpoint(&self) -> S {
        (self.lo + self.hi) / S::of(2.0)
    }

    /// Containment with the global tolerance on both ends.
    pub fn contains(&self, value: S) -> bool {
        value >= self.lo - S::tolerance() && value <= self.hi + S::tolerance()
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.lo.approx_eq(other.lo) && self.hi.approx_eq(other.hi)
    }
}

impl<S: Scalar> fmt::Display for CertaintyInterval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Status of a nonmonotonic antecedent `not[alpha] p` against p's bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AntecedentStatus {
    /// `lb+(p) < alpha`: the antecedent holds in every admissible labeling.
    Satisfied,
    /// `lb-(p) >= alpha`: the antecedent fails in every admissible labeling.
    Exceeded,
    /// `lb-(p) < alpha <= lb+(p)`.
    Ambiguous,
}

pub fn classify_interval<S: Scalar>(target: CertaintyInterval<S>, alpha: S) -> AntecedentStatus {
    if target.lo >= alpha {
        AntecedentStatus::Exceeded
    } else if target.hi < alpha {
        AntecedentStatus::Satisfied
    } else {
        AntecedentStatus::Ambiguous
    }
}

/// Branch choice for a starter dependency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Force {
    /// Pin to `lb-`, which is zero for a starter.
    Lo,
    /// Pin to the current `lb+`.
    Hi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Pin<S> {
    force: Force,
    value: S,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InconsistencyKind<S> {
    /// Computed lower bound exceeds computed upper bound.
    Crossing { lo: S, hi: S },
    /// A starter pinned to zero acquired positive support.
    ForcedLowSupported { support: S },
    /// A starter pinned to its upper bound lost the support for it.
    ForcedHighUnsupported { support: S, pinned: S },
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("inconsistent bounds at vertex {vertex:?}: {kind:?}")]
pub struct Inconsistency<S: fmt::Debug> {
    pub vertex: Vertex,
    pub kind: InconsistencyKind<S>,
}

/// Interval labels for every vertex of one graph, plus the propagation
/// worklist.
#[derive(Debug, Clone)]
pub struct BoundsState<'g, S> {
    graph: &'g PrimoGraph<S>,
    intervals: Vec<CertaintyInterval<S>>,
    pins: Vec<Option<Pin<S>>>,
    worklist: VecDeque<usize>,
    queued: Vec<bool>,
    relabels: usize,
}

impl<'g, S: Scalar> BoundsState<'g, S> {
    /// Inputs start at `[k, 1]`, everything else at `[0, 1]`. All vertices
    /// are queued, dependencies first.
    pub fn initialize(graph: &'g PrimoGraph<S>) -> Self {
        let intervals = graph
            .vertices()
            .map(|v| match v {
                Vertex::Literal(l) => match graph.input(l) {
                    Some(k) => CertaintyInterval::new(k, S::one()),
                    None => CertaintyInterval::unknown(),
                },
                Vertex::Justification(_) => CertaintyInterval::unknown(),
            })
            .collect();
        let worklist: VecDeque<usize> = condense(graph)
            .components()
            .iter()
            .flatten()
            .map(|&v| graph.index_of(v))
            .collect();
        let n = graph.vertex_count();
        BoundsState {
            graph,
            intervals,
            pins: vec![None; n],
            worklist,
            queued: vec![true; n],
            relabels: 0,
        }
    }

    pub fn graph(&self) -> &'g PrimoGraph<S> {
        self.graph
    }

    pub fn interval(&self, v: Vertex) -> CertaintyInterval<S> {
        self.intervals[self.graph.index_of(v)]
    }

    pub fn literal_interval(&self, l: LiteralId) -> CertaintyInterval<S> {
        self.intervals[l.0]
    }

    pub fn justification_interval(&self, j: JustId) -> CertaintyInterval<S> {
        self.interval(Vertex::Justification(j))
    }

    pub fn intervals(&self) -> &[CertaintyInterval<S>] {
        &self.intervals
    }

    /// Number of relabelings performed so far.
    pub fn relabel_count(&self) -> usize {
        self.relabels
    }

    pub fn is_pinned(&self, j: JustId) -> bool {
        self.pins[self.graph.index_of(Vertex::Justification(j))].is_some()
    }

    pub fn lb_minus(&self, v: Vertex) -> S {
        self.bound(v, false)
    }

    pub fn lb_plus(&self, v: Vertex) -> S {
        self.bound(v, true)
    }

    fn bound(&self, v: Vertex, upper: bool) -> S {
        let g = self.graph;
        let family = g.family();
        let pick = |iv: CertaintyInterval<S>, same_end: bool| {
            if upper == same_end {
                iv.hi
            } else {
                iv.lo
            }
        };
        match v {
            Vertex::Justification(j) => {
                let mono = g
                    .monotonic_antecedents(j)
                    .iter()
                    .map(|&m| pick(self.intervals[m.0], true));
                let nonmon = g
                    .nonmonotonic_antecedents(j)
                    .iter()
                    .map(|&(t, alpha)| eval_nonmon(alpha, pick(self.intervals[t.0], false)));
                family.and_all(std::iter::once(g.sufficiency(j)).chain(mono).chain(nonmon))
            }
            Vertex::Literal(l) => {
                let support = g
                    .supports(l)
                    .iter()
                    .map(|&j| pick(self.interval(Vertex::Justification(j)), true));
                family.or_all(g.input(l).into_iter().chain(support))
            }
        }
    }

    /// Status of the `index`-th nonmonotonic antecedent of `j`.
    pub fn classify(&self, j: JustId, index: usize) -> AntecedentStatus {
        let (target, alpha) = self.graph.nonmonotonic_antecedents(j)[index];
        classify_interval(self.intervals[target.0], alpha)
    }

    /// True when every vertex interval has collapsed to a point.
    pub fn is_exact(&self) -> bool {
        self.intervals.iter().all(CertaintyInterval::is_exact)
    }

    /// Runs to the fixpoint with a FIFO worklist.
    pub fn propagate(&mut self) -> Result<(), Inconsistency<S>> {
        self.propagate_with(|_| 0, |_, _, _| {})
    }

    /// Runs to the fixpoint, letting `choose` pick which pending vertex to
    /// visit next (an index into the pending list of the given length) and
    /// reporting every relabeling to `observe` as `(vertex, old, new)`.
    pub fn propagate_with(
        &mut self,
        mut choose: impl FnMut(usize) -> usize,
        mut observe: impl FnMut(Vertex, CertaintyInterval<S>, CertaintyInterval<S>),
    ) -> Result<(), Inconsistency<S>> {
        while !self.worklist.is_empty() {
            let pick = choose(self.worklist.len()).min(self.worklist.len() - 1);
            let idx = self.worklist.remove(pick).expect("index in range");
            self.queued[idx] = false;
            let v = self.graph.vertex_at(idx);
            let computed = CertaintyInterval::new(self.lb_minus(v), self.lb_plus(v));

            if let Some(pin) = self.pins[idx] {
                check_pin(v, pin, computed)?;
                continue;
            }
            if computed.lo > computed.hi + S::tolerance() {
                return Err(Inconsistency {
                    vertex: v,
                    kind: InconsistencyKind::Crossing {
                        lo: computed.lo,
                        hi: computed.hi,
                    },
                });
            }
            let old = self.intervals[idx];
            if !old.approx_eq(&computed) {
                observe(v, old, computed);
                self.intervals[idx] = computed;
                self.relabels += 1;
                self.enqueue_successors(v);
            }
        }
        Ok(())
    }

    fn enqueue(&mut self, idx: usize) {
        if !self.queued[idx] {
            self.queued[idx] = true;
            self.worklist.push_back(idx);
        }
    }

    fn enqueue_successors(&mut self, v: Vertex) {
        let g = self.graph;
        match v {
            Vertex::Literal(l) => {
                for &j in g.uses(l) {
                    self.enqueue(g.index_of(Vertex::Justification(j)));
                }
            }
            Vertex::Justification(j) => self.enqueue(g.conclusion(j).0),
        }
    }

    /// Pins justification `j` to its lower bound (zero) or its current upper
    /// bound and schedules re-propagation. Returns the pinned value.
    pub fn force(&mut self, j: JustId, force: Force) -> S {
        let v = Vertex::Justification(j);
        let idx = self.graph.index_of(v);
        let value = match force {
            Force::Lo => S::zero(),
            Force::Hi => self.intervals[idx].hi,
        };
        self.pins[idx] = Some(Pin { force, value });
        self.intervals[idx] = CertaintyInterval::exact(value);
        self.enqueue(idx);
        self.enqueue_successors(v);
        value
    }

    /// Point labeling read from the lower bounds; meaningful once the state
    /// is exact.
    pub fn to_labeling(&self) -> Labeling<S> {
        Labeling::new(self.intervals.iter().map(|iv| iv.lo).collect())
    }
}

fn check_pin<S: Scalar>(v: Vertex, pin: Pin<S>, computed: CertaintyInterval<S>) -> Result<(), Inconsistency<S>> {
    let kind = match pin.force {
        Force::Lo if computed.lo > S::tolerance() => InconsistencyKind::ForcedLowSupported { support: computed.lo },
        Force::Hi if computed.hi < pin.value - S::tolerance() => InconsistencyKind::ForcedHighUnsupported {
            support: computed.hi,
            pinned: pin.value,
        },
        _ => return Ok(()),
    };
    Err(Inconsistency { vertex: v, kind })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::tweety;
    use crate::graph::rule;
    use crate::tnorm::TNormFamily;

    fn stable(g: &PrimoGraph<f64>) -> BoundsState<'_, f64> {
        let mut s = BoundsState::initialize(g);
        s.propagate().unwrap();
        s
    }

    fn lit_iv(s: &BoundsState<'_, f64>, name: &str) -> CertaintyInterval<f64> {
        s.literal_interval(s.graph().find(name).unwrap())
    }

    #[test]
    fn tweety_initialization() {
        let g = tweety::<f64>(TNormFamily::ProductProbSum, 1.0);
        let s = BoundsState::initialize(&g);
        assert_eq!(lit_iv(&s, "BIRD"), CertaintyInterval::new(1.0, 1.0));
        assert_eq!(lit_iv(&s, "EMU"), CertaintyInterval::new(1.0, 1.0));
        for name in ["FLEMU", "FLIES", "HOPS", "~FLIES"] {
            assert_eq!(lit_iv(&s, name), CertaintyInterval::unknown());
        }
    }

    #[test]
    fn tweety_final_bounds() {
        for family in TNormFamily::ALL {
            let g = tweety::<f64>(family, 1.0);
            let s = stable(&g);
            let expect = |name, lo: f64, hi: f64| {
                let iv = lit_iv(&s, name);
                assert!(iv.lo.approx_eq(lo) && iv.hi.approx_eq(hi), "{family} {name} {iv}");
            };
            expect("FLIES", 0.0, 0.8);
            expect("HOPS", 0.0, 0.9);
            expect("~FLIES", 0.0, 0.0);
            expect("~HOPS", 0.0, 0.0);
            expect("FLEMU", 0.0, 0.0);
            expect("BIRD", 1.0, 1.0);
        }
    }

    #[test]
    fn flies_bounds_come_from_opposite_ends() {
        let g = tweety::<f64>(TNormFamily::ProductProbSum, 1.0);
        let s = stable(&g);
        let flies = Vertex::Literal(g.find("FLIES").unwrap());
        let r1 = Vertex::Justification(g.justification_by_name("r1").unwrap());
        assert!(s.lb_plus(flies).approx_eq(0.8));
        assert_eq!(s.lb_minus(flies), 0.0);
        assert!(s.lb_plus(r1).approx_eq(0.8));
        assert_eq!(s.lb_minus(r1), 0.0);
    }

    #[test]
    fn unsupported_vertex_is_zero() {
        let g = tweety::<f64>(TNormFamily::ProductProbSum, 1.0);
        let s = BoundsState::initialize(&g);
        let v = Vertex::Literal(g.find("~HOPS").unwrap());
        assert_eq!(s.lb_minus(v), 0.0);
        assert_eq!(s.lb_plus(v), 0.0);
    }

    #[test]
    fn no_inputs_means_unknown_everywhere() {
        let g = PrimoGraph::<f64>::builder(TNormFamily::MinMax)
            .rule(rule("r", &["A"], &[], 0.5, "B"))
            .build()
            .unwrap();
        let s = BoundsState::initialize(&g);
        assert!(s.intervals().iter().all(|iv| *iv == CertaintyInterval::unknown()));
    }

    #[test]
    fn full_input_is_degenerate() {
        let g = PrimoGraph::<f64>::builder(TNormFamily::MinMax)
            .input(crate::graph::Literal::positive("A"), 1.0)
            .build()
            .unwrap();
        let s = BoundsState::initialize(&g);
        assert_eq!(lit_iv(&s, "A"), CertaintyInterval::exact(1.0));
    }

    #[test]
    fn monotonic_chain_is_exact() {
        let g = PrimoGraph::<f64>::builder(TNormFamily::ProductProbSum)
            .input(crate::graph::Literal::positive("A"), 0.5)
            .rule(rule("ab", &["A"], &[], 0.8, "B"))
            .rule(rule("bc", &["B", "A"], &[], 0.5, "C"))
            .build()
            .unwrap();
        let s = stable(&g);
        assert!(s.is_exact());
        assert!(lit_iv(&s, "C").lo.approx_eq(0.5 * 0.4 * 0.5));
    }

    #[test]
    fn input_combines_with_support() {
        let g = PrimoGraph::<f64>::builder(TNormFamily::ProductProbSum)
            .input(crate::graph::Literal::positive("A"), 0.5)
            .rule(rule("fa", &[], &[], 0.5, "A"))
            .build()
            .unwrap();
        let s = stable(&g);
        assert_eq!(lit_iv(&s, "A"), CertaintyInterval::exact(0.75));
    }

    #[test]
    fn classification() {
        let g = tweety::<f64>(TNormFamily::ProductProbSum, 1.0);
        let s = stable(&g);
        let r1 = g.justification_by_name("r1").unwrap();
        assert_eq!(s.classify(r1, 0), AntecedentStatus::Ambiguous);
        let flemu = lit_iv(&s, "FLEMU");
        assert_eq!(classify_interval(flemu, 0.2), AntecedentStatus::Satisfied);
        let bird = lit_iv(&s, "BIRD");
        assert_eq!(classify_interval(bird, 0.2), AntecedentStatus::Exceeded);
        assert_eq!(
            classify_interval(CertaintyInterval::new(0.0, 0.2), 0.2),
            AntecedentStatus::Ambiguous
        );
    }

    #[test]
    fn forcing_detects_both_triggers() {
        // FORCE_LO on the FLIES default and then supporting FLIES again is
        // impossible here, so craft the triggers on a self-supporting default.
        let g = PrimoGraph::<f64>::builder(TNormFamily::ProductProbSum)
            .rule(rule("j", &[], &[("P", 0.5)], 1.0, "P"))
            .build()
            .unwrap();
        let mut s = stable(&g);
        let j = g.justification_by_name("j").unwrap();
        let mut lo = s.clone();
        lo.force(j, Force::Lo);
        let err = lo.propagate().unwrap_err();
        assert!(matches!(err.kind, InconsistencyKind::ForcedLowSupported { .. }));
        s.force(j, Force::Hi);
        let err = s.propagate().unwrap_err();
        assert!(matches!(err.kind, InconsistencyKind::ForcedHighUnsupported { .. }));
    }

    #[test]
    fn forcing_tweety_resolves_the_loop() {
        let g = tweety::<f64>(TNormFamily::ProductProbSum, 1.0);
        let mut s = stable(&g);
        let r1 = g.justification_by_name("r1").unwrap();
        s.force(r1, Force::Lo);
        s.propagate().unwrap();
        assert!(s.is_exact());
        assert!(lit_iv(&s, "HOPS").lo.approx_eq(0.9));
        assert_eq!(lit_iv(&s, "FLIES").lo, 0.0);
    }

    #[test]
    fn works_in_single_precision() {
        let g = tweety::<f32>(TNormFamily::ProductProbSum, 1.0);
        let mut s = BoundsState::initialize(&g);
        s.propagate().unwrap();
        let iv = s.literal_interval(g.find("HOPS").unwrap());
        assert!(iv.lo.approx_eq(0.0) && iv.hi.approx_eq(0.9));
    }
}
