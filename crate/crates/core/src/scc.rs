//! Strongly connected components and the condensation order.

use crate::graph::{EdgeKind, PrimoGraph, Vertex};
use crate::scalar::Scalar;

/// Iterative Tarjan over an adjacency list. Components are returned in
/// reverse topological order (sinks first), as Tarjan discovers them.
pub(crate) fn tarjan(adj: &[Vec<(usize, EdgeKind)>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next = 0;
    // (vertex, position in its adjacency list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&(w, _)) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }
    components
}

/// The SCC partition of a graph over all edges, in topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    components: Vec<Vec<Vertex>>,
    component_of: Vec<usize>,
}

impl Condensation {
    /// Components with dependencies first: every edge goes from a component to
    /// itself or to a later one.
    pub fn components(&self) -> &[Vec<Vertex>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Position of the component holding the vertex with the given index.
    pub fn component_of_index(&self, vertex_index: usize) -> usize {
        self.component_of[vertex_index]
    }

    pub fn component_of<S: Scalar>(&self, g: &PrimoGraph<S>, v: Vertex) -> usize {
        self.component_of[g.index_of(v)]
    }
}

/// Decomposes `g` into strongly connected components over monotonic and
/// nonmonotonic edges alike, ordered bottom up.
pub fn condense<S: Scalar>(g: &PrimoGraph<S>) -> Condensation {
    let mut comps = tarjan(&g.adjacency(false));
    comps.reverse();
    let mut component_of = vec![0; g.vertex_count()];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            component_of[v] = c;
        }
    }
    Condensation {
        components: comps
            .into_iter()
            .map(|c| c.into_iter().map(|i| g.vertex_at(i)).collect())
            .collect(),
        component_of,
    }
}
