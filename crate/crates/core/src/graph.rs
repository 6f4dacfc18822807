//! The AND/OR dependency graph: literals are OR-vertices, justifications are
//! AND-vertices.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;
use crate::tnorm::TNormFamily;

/// A ground proposition with polarity. `P` and `~P` are distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    name: String,
    negated: bool,
}

impl Literal {
    pub fn new(name: impl Into<String>, negated: bool) -> Self {
        Literal {
            name: name.into(),
            negated,
        }
    }

    pub fn positive(name: impl Into<String>) -> Self {
        Self::new(name, false)
    }

    pub fn negative(name: impl Into<String>) -> Self {
        Self::new(name, true)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn complement(&self) -> Literal {
        Literal::new(self.name.clone(), !self.negated)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~{}", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

/// `not[alpha] target`: holds unless `target` is proven to degree `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonmonAntecedent<S> {
    pub target: Literal,
    pub alpha: S,
}

/// One AND-vertex: antecedents, sufficiency and conclusion.
#[derive(Debug, Clone, PartialEq)]
pub struct Justification<S> {
    pub id: String,
    pub monotonic: Vec<Literal>,
    pub nonmonotonic: Vec<NonmonAntecedent<S>>,
    pub sufficiency: S,
    pub conclusion: Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiteralId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JustId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Literal(LiteralId),
    Justification(JustId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Monotonic,
    Nonmonotonic,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("input `{literal}` has confidence {value} outside [0, 1]")]
    InputOutOfRange { literal: Literal, value: f64 },
    #[error("rule `{rule}` has sufficiency {value} outside (0, 1]")]
    SufficiencyOutOfRange { rule: String, value: f64 },
    #[error("rule `{rule}` has threshold {value} on `{target}` outside (0, 1]")]
    AlphaOutOfRange { rule: String, target: Literal, value: f64 },
    #[error("duplicate input declaration for `{0}`")]
    DuplicateInput(Literal),
    #[error("duplicate rule id `{0}`")]
    DuplicateRule(String),
}

#[derive(Debug, Clone)]
struct Resolved<S> {
    monotonic: Vec<LiteralId>,
    nonmonotonic: Vec<(LiteralId, S)>,
    conclusion: LiteralId,
}

/// Bipartite AND/OR graph together with input confidences and the t-norm
/// calculus used to evaluate it.
///
/// Literal ids come in complementary pairs: `id ^ 1` is the complement.
/// Vertex indices put literals first, then justifications.
#[derive(Debug, Clone)]
pub struct PrimoGraph<S> {
    family: TNormFamily,
    literals: Vec<Literal>,
    index: HashMap<Literal, LiteralId>,
    inputs: Vec<Option<S>>,
    justifications: Vec<Justification<S>>,
    resolved: Vec<Resolved<S>>,
    supports: Vec<Vec<JustId>>,
    uses: Vec<Vec<JustId>>,
}

impl<S: Scalar> PrimoGraph<S> {
    pub fn builder(family: TNormFamily) -> GraphBuilder<S> {
        GraphBuilder::new(family)
    }

    pub fn family(&self) -> TNormFamily {
        self.family
    }

    /// Same structure evaluated under another calculus.
    pub fn with_family(mut self, family: TNormFamily) -> Self {
        self.family = family;
        self
    }

    pub fn literal_count(&self) -> usize {
        self.literals.len()
    }

    pub fn justification_count(&self) -> usize {
        self.justifications.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.literals.len() + self.justifications.len()
    }

    pub fn literal_ids(&self) -> impl Iterator<Item = LiteralId> + '_ {
        (0..self.literals.len()).map(LiteralId)
    }

    pub fn justification_ids(&self) -> impl Iterator<Item = JustId> + '_ {
        (0..self.justifications.len()).map(JustId)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).map(|i| self.vertex_at(i))
    }

    pub fn index_of(&self, v: Vertex) -> usize {
        match v {
            Vertex::Literal(l) => l.0,
            Vertex::Justification(j) => self.literals.len() + j.0,
        }
    }

    pub fn vertex_at(&self, index: usize) -> Vertex {
        if index < self.literals.len() {
            Vertex::Literal(LiteralId(index))
        } else {
            Vertex::Justification(JustId(index - self.literals.len()))
        }
    }

    pub fn literal(&self, id: LiteralId) -> &Literal {
        &self.literals[id.0]
    }

    pub fn literal_id(&self, literal: &Literal) -> Option<LiteralId> {
        self.index.get(literal).copied()
    }

    /// Looks up a literal written as `NAME` or `~NAME`.
    pub fn find(&self, text: &str) -> Option<LiteralId> {
        let lit = match text.strip_prefix('~') {
            Some(name) => Literal::negative(name),
            None => Literal::positive(text),
        };
        self.literal_id(&lit)
    }

    pub fn complement(&self, id: LiteralId) -> LiteralId {
        LiteralId(id.0 ^ 1)
    }

    pub fn input(&self, id: LiteralId) -> Option<S> {
        self.inputs[id.0]
    }

    pub fn justification(&self, id: JustId) -> &Justification<S> {
        &self.justifications[id.0]
    }

    pub fn justification_by_name(&self, name: &str) -> Option<JustId> {
        self.justifications.iter().position(|j| j.id == name).map(JustId)
    }

    pub fn monotonic_antecedents(&self, id: JustId) -> &[LiteralId] {
        &self.resolved[id.0].monotonic
    }

    pub fn nonmonotonic_antecedents(&self, id: JustId) -> &[(LiteralId, S)] {
        &self.resolved[id.0].nonmonotonic
    }

    pub fn conclusion(&self, id: JustId) -> LiteralId {
        self.resolved[id.0].conclusion
    }

    pub fn sufficiency(&self, id: JustId) -> S {
        self.justifications[id.0].sufficiency
    }

    /// Justifications concluding `id`.
    pub fn supports(&self, id: LiteralId) -> &[JustId] {
        &self.supports[id.0]
    }

    /// Justifications having `id` as an antecedent of either kind.
    pub fn uses(&self, id: LiteralId) -> &[JustId] {
        &self.uses[id.0]
    }

    pub fn vertex_name(&self, v: Vertex) -> String {
        match v {
            Vertex::Literal(l) => self.literal(l).to_string(),
            Vertex::Justification(j) => self.justification(j).id.clone(),
        }
    }

    /// Outgoing edges of `v`. Parallel edges are reported once per occurrence.
    pub fn successors(&self, v: Vertex) -> Vec<(Vertex, EdgeKind)> {
        match v {
            Vertex::Justification(j) => {
                vec![(Vertex::Literal(self.conclusion(j)), EdgeKind::Monotonic)]
            }
            Vertex::Literal(l) => {
                let mut out = Vec::new();
                for &j in self.uses(l) {
                    let r = &self.resolved[j.0];
                    for _ in r.monotonic.iter().filter(|&&m| m == l) {
                        out.push((Vertex::Justification(j), EdgeKind::Monotonic));
                    }
                    for _ in r.nonmonotonic.iter().filter(|(t, _)| *t == l) {
                        out.push((Vertex::Justification(j), EdgeKind::Nonmonotonic));
                    }
                }
                out
            }
        }
    }

    /// Every edge as `(from, to, kind)`.
    pub fn edges(&self) -> Vec<(Vertex, Vertex, EdgeKind)> {
        let mut out = Vec::new();
        for j in self.justification_ids() {
            let r = &self.resolved[j.0];
            let jv = Vertex::Justification(j);
            for &m in &r.monotonic {
                out.push((Vertex::Literal(m), jv, EdgeKind::Monotonic));
            }
            for &(t, _) in &r.nonmonotonic {
                out.push((Vertex::Literal(t), jv, EdgeKind::Nonmonotonic));
            }
            out.push((jv, Vertex::Literal(r.conclusion), EdgeKind::Monotonic));
        }
        out
    }

    /// Adjacency lists over vertex indices, optionally restricted to
    /// monotonic edges.
    pub(crate) fn adjacency(&self, monotonic_only: bool) -> Vec<Vec<(usize, EdgeKind)>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for (from, to, kind) in self.edges() {
            if monotonic_only && kind == EdgeKind::Nonmonotonic {
                continue;
            }
            adj[self.index_of(from)].push((self.index_of(to), kind));
        }
        adj
    }
}

/// Incremental construction of a [`PrimoGraph`], validating numeric ranges
/// and uniqueness as it goes.
#[derive(Debug, Clone)]
pub struct GraphBuilder<S> {
    family: TNormFamily,
    inputs: Vec<(Literal, S)>,
    rules: Vec<Justification<S>>,
}

impl<S: Scalar> GraphBuilder<S> {
    pub fn new(family: TNormFamily) -> Self {
        GraphBuilder {
            family,
            inputs: Vec::new(),
            rules: Vec::new(),
        }
    }

    pub fn input(mut self, literal: Literal, confidence: S) -> Self {
        self.inputs.push((literal, confidence));
        self
    }

    pub fn rule(mut self, rule: Justification<S>) -> Self {
        self.rules.push(rule);
        self
    }

    pub fn build(self) -> Result<PrimoGraph<S>, Vec<GraphError>> {
        let mut errors = Vec::new();
        let unit_open = |v: S| v > S::zero() && v <= S::one();

        let mut seen_inputs = HashSet::new();
        for (lit, k) in &self.inputs {
            if !k.in_unit_interval() {
                errors.push(GraphError::InputOutOfRange {
                    literal: lit.clone(),
                    value: k.to_f64().unwrap_or(f64::NAN),
                });
            }
            if !seen_inputs.insert(lit.clone()) {
                errors.push(GraphError::DuplicateInput(lit.clone()));
            }
        }
        let mut seen_rules = HashSet::new();
        for rule in &self.rules {
            if !seen_rules.insert(rule.id.clone()) {
                errors.push(GraphError::DuplicateRule(rule.id.clone()));
            }
            if !unit_open(rule.sufficiency) {
                errors.push(GraphError::SufficiencyOutOfRange {
                    rule: rule.id.clone(),
                    value: rule.sufficiency.to_f64().unwrap_or(f64::NAN),
                });
            }
            for nm in &rule.nonmonotonic {
                if !unit_open(nm.alpha) {
                    errors.push(GraphError::AlphaOutOfRange {
                        rule: rule.id.clone(),
                        target: nm.target.clone(),
                        value: nm.alpha.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }

        let mut literals = Vec::new();
        let mut index = HashMap::new();
        let mut intern = |lit: &Literal| -> LiteralId {
            if let Some(&id) = index.get(lit) {
                return id;
            }
            let pos = Literal::positive(lit.name());
            let neg = Literal::negative(lit.name());
            let base = literals.len();
            index.insert(pos.clone(), LiteralId(base));
            index.insert(neg.clone(), LiteralId(base + 1));
            literals.push(pos);
            literals.push(neg);
            index[lit]
        };

        let input_ids: Vec<(LiteralId, S)> = self.inputs.iter().map(|(l, k)| (intern(l), *k)).collect();
        let resolved: Vec<Resolved<S>> = self
            .rules
            .iter()
            .map(|r| Resolved {
                monotonic: r.monotonic.iter().map(&mut intern).collect(),
                nonmonotonic: r.nonmonotonic.iter().map(|nm| (intern(&nm.target), nm.alpha)).collect(),
                conclusion: intern(&r.conclusion),
            })
            .collect();

        let n = literals.len();
        let mut inputs = vec![None; n];
        for (id, k) in input_ids {
            inputs[id.0] = Some(k);
        }
        let mut supports = vec![Vec::new(); n];
        let mut uses: Vec<Vec<JustId>> = vec![Vec::new(); n];
        for (j, r) in resolved.iter().enumerate() {
            supports[r.conclusion.0].push(JustId(j));
            let antecedents = r
                .monotonic
                .iter()
                .copied()
                .chain(r.nonmonotonic.iter().map(|(t, _)| *t));
            for a in antecedents {
                if uses[a.0].last() != Some(&JustId(j)) {
                    uses[a.0].push(JustId(j));
                }
            }
        }

        Ok(PrimoGraph {
            family: self.family,
            literals,
            index,
            inputs,
            justifications: self.rules,
            resolved,
            supports,
            uses,
        })
    }
}

/// Convenience constructor used in tests and examples.
pub fn rule<S: Scalar>(
    id: &str,
    monotonic: &[&str],
    nonmonotonic: &[(&str, f64)],
    sufficiency: f64,
    conclusion: &str,
) -> Justification<S> {
    Justification {
        id: id.to_string(),
        monotonic: monotonic.iter().map(|s| parse_literal(s)).collect(),
        nonmonotonic: nonmonotonic
            .iter()
            .map(|(t, a)| NonmonAntecedent {
                target: parse_literal(t),
                alpha: S::of(*a),
            })
            .collect(),
        sufficiency: S::of(sufficiency),
        conclusion: parse_literal(conclusion),
    }
}

pub(crate) fn parse_literal(text: &str) -> Literal {
    match text.strip_prefix('~') {
        Some(name) => Literal::negative(name),
        None => Literal::positive(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tweety() -> PrimoGraph<f64> {
        crate::fixtures::tweety(TNormFamily::ProductProbSum, 1.0)
    }

    #[test]
    fn complements_are_paired() {
        let g = tweety();
        for l in g.literal_ids() {
            let c = g.complement(l);
            assert_eq!(g.literal(c), &g.literal(l).complement());
            assert_eq!(g.complement(c), l);
        }
        assert_eq!(g.literal_count(), 10);
        assert_eq!(g.justification_count(), 5);
    }

    #[test]
    fn edges_follow_rule_structure() {
        let g = tweety();
        let r1 = g.justification_by_name("r1").unwrap();
        let hops = g.find("HOPS").unwrap();
        let succ = g.successors(Vertex::Literal(hops));
        assert!(succ.contains(&(Vertex::Justification(r1), EdgeKind::Nonmonotonic)));
        assert_eq!(
            g.successors(Vertex::Justification(r1)),
            vec![(Vertex::Literal(g.find("FLIES").unwrap()), EdgeKind::Monotonic)]
        );
        assert_eq!(g.edges().len(), 2 * 3 + 3 * 2);
    }

    #[test]
    fn builder_reports_all_range_errors() {
        let errs = PrimoGraph::<f64>::builder(TNormFamily::MinMax)
            .input(Literal::positive("A"), 1.5)
            .input(Literal::positive("A"), 0.5)
            .rule(rule("r", &[], &[("A", 0.0)], 0.0, "B"))
            .rule(rule("r", &["A"], &[], 1.0, "B"))
            .build()
            .unwrap_err();
        assert_eq!(errs.len(), 5);
        assert!(matches!(errs[0], GraphError::InputOutOfRange { .. }));
        assert!(matches!(errs[1], GraphError::DuplicateInput(_)));
        assert!(errs.contains(&GraphError::DuplicateRule("r".into())));
    }

    #[test]
    fn alpha_of_one_is_allowed() {
        let g = PrimoGraph::<f64>::builder(TNormFamily::MinMax)
            .rule(rule("r", &[], &[("A", 1.0)], 1.0, "B"))
            .build();
        assert!(g.is_ok());
    }
}
