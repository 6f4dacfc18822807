//! Structural checks: monotonic cycles, odd loops and LB(P) + LB(~P) > 1
//! conflicts.

use std::collections::VecDeque;

use crate::extensions::Labeling;
use crate::graph::{EdgeKind, LiteralId, PrimoGraph, Vertex};
use crate::scalar::Scalar;
use crate::scc::{condense, tarjan};

/// Upper bound on the number of odd cycles [`detect_odd_loops`] lists.
pub const ODD_LOOP_LIMIT: usize = 4096;

/// A closed walk written as a vertex sequence whose last element repeats the
/// first.
pub type Cycle = Vec<Vertex>;

/// A simple cycle together with the kind of each edge it takes, so parallel
/// monotonic and nonmonotonic edges are told apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddLoop {
    /// Closed: the last vertex repeats the first.
    pub cycle: Cycle,
    /// `edges[i]` joins `cycle[i]` to `cycle[i + 1]`.
    pub edges: Vec<EdgeKind>,
}

impl OddLoop {
    pub fn nonmonotonic_edges(&self) -> usize {
        self.edges.iter().filter(|&&k| k == EdgeKind::Nonmonotonic).count()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub monotonic_cycles: Vec<Cycle>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.monotonic_cycles.is_empty()
    }
}

/// A graph is valid iff no cycle consists of monotonic edges only. One
/// witness cycle is reported per offending monotonic component.
pub fn validate_graph<S: Scalar>(g: &PrimoGraph<S>) -> ValidationReport {
    let adj = g.adjacency(true);
    let mut cycles = Vec::new();
    for comp in tarjan(&adj) {
        let start = comp[0];
        let self_loop = adj[start].iter().any(|&(w, _)| w == start);
        if comp.len() > 1 || self_loop {
            let cycle = cycle_through(&adj, &comp, start);
            cycles.push(cycle.into_iter().map(|i| g.vertex_at(i)).collect());
        }
    }
    cycles.sort();
    ValidationReport {
        monotonic_cycles: cycles,
    }
}

/// Shortest cycle through `start` staying inside `members`.
fn cycle_through(adj: &[Vec<(usize, EdgeKind)>], members: &[usize], start: usize) -> Vec<usize> {
    let inside = |v: usize| members.binary_search(&v).is_ok();
    let mut parent = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::from([start]);
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &(w, _) in &adj[v] {
            if w == start {
                let mut path = vec![v];
                let mut cur = v;
                while cur != start {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                path.push(start);
                return path;
            }
            if inside(w) && !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    unreachable!("a strongly connected component contains a cycle through each member")
}

/// True iff some cycle crosses an odd number of nonmonotonic edges.
///
/// A component is free of odd loops exactly when its vertices can be
/// two-coloured so that nonmonotonic edges switch colour and monotonic edges
/// keep it.
pub fn has_odd_loop<S: Scalar>(g: &PrimoGraph<S>) -> bool {
    let adj = g.adjacency(false);
    let cond = condense(g);
    let mut colour: Vec<Option<bool>> = vec![None; adj.len()];
    for v in 0..adj.len() {
        if colour[v].is_some() {
            continue;
        }
        colour[v] = Some(false);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            let cu = colour[u].unwrap();
            for &(w, kind) in &adj[u] {
                if cond.component_of_index(w) != cond.component_of_index(u) {
                    continue;
                }
                let want = cu ^ (kind == EdgeKind::Nonmonotonic);
                match colour[w] {
                    None => {
                        colour[w] = Some(want);
                        stack.push(w);
                    }
                    Some(c) if c != want => return true,
                    Some(_) => {}
                }
            }
        }
    }
    false
}

/// Simple cycles traversing an odd number of nonmonotonic edges.
///
/// Only components that actually contain an odd loop are searched. At most
/// [`ODD_LOOP_LIMIT`] cycles are returned; an empty result always means the
/// graph has no odd loop.
pub fn detect_odd_loops<S: Scalar>(g: &PrimoGraph<S>) -> Vec<OddLoop> {
    let adj = g.adjacency(false);
    let cond = condense(g);
    let mut out = Vec::new();
    for comp in cond.components() {
        if comp.len() < 2 {
            continue;
        }
        let members: Vec<usize> = comp.iter().map(|&v| g.index_of(v)).collect();
        if !component_is_unbalanced(&adj, &members) {
            continue;
        }
        for &start in &members {
            let mut walk = Walk {
                adj: &adj,
                members: &members,
                start,
                path: vec![start],
                kinds: Vec::new(),
                on_path: vec![false; adj.len()],
            };
            walk.on_path[start] = true;
            walk.extend(0, &mut out);
            if out.len() >= ODD_LOOP_LIMIT {
                out.truncate(ODD_LOOP_LIMIT);
                break;
            }
        }
    }
    out.into_iter()
        .map(|(path, edges)| OddLoop {
            cycle: path.into_iter().map(|i| g.vertex_at(i)).collect(),
            edges,
        })
        .collect()
}

fn component_is_unbalanced(adj: &[Vec<(usize, EdgeKind)>], members: &[usize]) -> bool {
    let inside = |v: usize| members.binary_search(&v).is_ok();
    let mut colour: Vec<Option<bool>> = vec![None; adj.len()];
    colour[members[0]] = Some(false);
    let mut stack = vec![members[0]];
    while let Some(u) = stack.pop() {
        let cu = colour[u].unwrap();
        for &(w, kind) in adj[u].iter().filter(|(w, _)| inside(*w)) {
            let want = cu ^ (kind == EdgeKind::Nonmonotonic);
            match colour[w] {
                None => {
                    colour[w] = Some(want);
                    stack.push(w);
                }
                Some(c) if c != want => return true,
                Some(_) => {}
            }
        }
    }
    false
}

type FoundCycle = (Vec<usize>, Vec<EdgeKind>);

// Cycles are rooted at their smallest vertex so each edge sequence is listed
// once.
struct Walk<'a> {
    adj: &'a [Vec<(usize, EdgeKind)>],
    members: &'a [usize],
    start: usize,
    path: Vec<usize>,
    kinds: Vec<EdgeKind>,
    on_path: Vec<bool>,
}

impl Walk<'_> {
    fn extend(&mut self, nonmon: usize, out: &mut Vec<FoundCycle>) {
        if out.len() >= ODD_LOOP_LIMIT {
            return;
        }
        let v = *self.path.last().unwrap();
        for &(w, kind) in &self.adj[v] {
            let count = nonmon + usize::from(kind == EdgeKind::Nonmonotonic);
            if w == self.start {
                if count % 2 == 1 {
                    let mut cycle = self.path.clone();
                    cycle.push(w);
                    let mut kinds = self.kinds.clone();
                    kinds.push(kind);
                    out.push((cycle, kinds));
                }
            } else if w > self.start && !self.on_path[w] && self.members.binary_search(&w).is_ok() {
                self.on_path[w] = true;
                self.path.push(w);
                self.kinds.push(kind);
                self.extend(count, out);
                self.kinds.pop();
                self.path.pop();
                self.on_path[w] = false;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Conflict<S> {
    /// The positive literal of the clashing pair.
    pub literal: LiteralId,
    pub positive: S,
    pub negative: S,
}

/// Literals believed together with their complement: LB(P) + LB(~P) > 1.
/// Detection only.
pub fn check_conflict<S: Scalar>(g: &PrimoGraph<S>, labeling: &Labeling<S>) -> Vec<Conflict<S>> {
    g.literal_ids()
        .filter(|l| !g.literal(*l).is_negated())
        .filter_map(|l| {
            let positive = labeling.literal(g, l);
            let negative = labeling.literal(g, g.complement(l));
            (positive + negative - S::one() > S::tolerance()).then_some(Conflict {
                literal: l,
                positive,
                negative,
            })
        })
        .collect()
}
