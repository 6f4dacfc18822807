//! Random graph generators and brute-force oracles shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use primo::graph::{EdgeKind, Justification, NonmonAntecedent};
use primo::optimize::{BoolLit, VarInfo, WcnfInstance, Weight, WeightedClause};
use primo::{Graph, Literal, PrimoGraph, TNormFamily, Vertex};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Thresholds chosen so that no product, minimum or bounded sum of the
/// generated confidences lands exactly on one.
pub const ALPHAS: [f64; 5] = [0.13, 0.37, 0.61, 0.83, 0.97];
pub const SUFFICIENCIES: [f64; 5] = [0.55, 0.7, 0.8, 0.9, 1.0];
pub const CONFIDENCES: [f64; 4] = [0.0, 0.45, 0.75, 1.0];

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub names: (usize, usize),
    pub rules: (usize, usize),
    pub max_monotonic: usize,
    pub max_nonmonotonic: usize,
    /// Upper limit on nonmonotonic antecedents over the whole graph.
    pub nonmonotonic_budget: usize,
    pub input_probability: f64,
    /// Every nonmonotonic antecedent on a literal uses the same threshold.
    pub one_alpha_per_literal: bool,
    pub family: Option<TNormFamily>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            names: (2, 5),
            rules: (2, 8),
            max_monotonic: 2,
            max_nonmonotonic: 2,
            nonmonotonic_budget: 10,
            input_probability: 0.25,
            one_alpha_per_literal: false,
            family: None,
        }
    }
}

/// A random graph whose monotonic part is acyclic: literals get a random
/// rank and monotonic antecedents always rank below the conclusion.
pub fn random_graph(rng: &mut impl Rng, cfg: &GenConfig) -> Graph {
    let family = cfg.family.unwrap_or_else(|| *TNormFamily::ALL.choose(rng).unwrap());
    let n_names = rng.gen_range(cfg.names.0..=cfg.names.1);
    let mut literals: Vec<Literal> = (0..n_names)
        .flat_map(|i| [Literal::positive(format!("P{i}")), Literal::negative(format!("P{i}"))])
        .collect();
    literals.shuffle(rng);

    let mut builder = PrimoGraph::builder(family);
    for l in &literals {
        if rng.gen_bool(cfg.input_probability) {
            builder = builder.input(l.clone(), *CONFIDENCES.choose(rng).unwrap());
        }
    }
    let mut alpha_of: HashMap<Literal, f64> = HashMap::new();
    let mut budget = cfg.nonmonotonic_budget;
    let n_rules = rng.gen_range(cfg.rules.0..=cfg.rules.1);
    for r in 0..n_rules {
        let rank = rng.gen_range(0..literals.len());
        let conclusion = literals[rank].clone();
        let mut below: Vec<Literal> = literals[..rank].to_vec();
        below.shuffle(rng);
        let m = rng.gen_range(0..=cfg.max_monotonic.min(below.len()));
        let monotonic: Vec<Literal> = below.into_iter().take(m).collect();

        let mut targets = literals.clone();
        targets.shuffle(rng);
        let k = rng.gen_range(0..=cfg.max_nonmonotonic.min(budget));
        budget -= k;
        let nonmonotonic = targets
            .into_iter()
            .take(k)
            .map(|target| {
                let alpha = if cfg.one_alpha_per_literal {
                    *alpha_of
                        .entry(target.clone())
                        .or_insert_with(|| *ALPHAS.choose(rng).unwrap())
                } else {
                    *ALPHAS.choose(rng).unwrap()
                };
                NonmonAntecedent { target, alpha }
            })
            .collect();
        builder = builder.rule(Justification {
            id: format!("r{r}"),
            monotonic,
            nonmonotonic,
            sufficiency: *SUFFICIENCIES.choose(rng).unwrap(),
            conclusion,
        });
    }
    builder.build().expect("generated graph is well formed")
}

/// A graph built from `loops` independent or chained default loops, some
/// self-defeating rules guarded by them, and rules reading across loops.
pub fn layered_graph<R: Rng>(rng: &mut R, loops: usize) -> Graph {
    let family = *TNormFamily::ALL.choose(rng).unwrap();
    let mut builder = PrimoGraph::builder(family);
    let mut alpha_of: HashMap<String, f64> = HashMap::new();
    let mut alpha = |rng: &mut R, name: &str| {
        *alpha_of
            .entry(name.to_string())
            .or_insert_with(|| *ALPHAS.choose(rng).unwrap())
    };
    let mut r = 0;
    let mut push = |b: primo::GraphBuilder<f64>, mono: Vec<String>, nm: Vec<(String, f64)>, s: f64, c: String| {
        r += 1;
        b.rule(Justification {
            id: format!("r{r}"),
            monotonic: mono.iter().map(|m| Literal::positive(m.clone())).collect(),
            nonmonotonic: nm
                .into_iter()
                .map(|(t, alpha)| NonmonAntecedent {
                    target: Literal::positive(t),
                    alpha,
                })
                .collect(),
            sufficiency: s,
            conclusion: Literal::positive(c),
        })
    };
    for i in 0..loops {
        let (a, b) = (format!("A{i}"), format!("B{i}"));
        let (alpha_a, alpha_b) = (alpha(rng, &a), alpha(rng, &b));
        let mut guard = Vec::new();
        if i > 0 && rng.gen_bool(0.6) {
            guard.push(format!("{}{}", if rng.gen_bool(0.5) { "A" } else { "B" }, i - 1));
        }
        let s1 = *SUFFICIENCIES.choose(rng).unwrap();
        let s2 = *SUFFICIENCIES.choose(rng).unwrap();
        builder = push(builder, guard.clone(), vec![(b.clone(), alpha_b)], s1, a.clone());
        builder = push(builder, guard, vec![(a.clone(), alpha_a)], s2, b.clone());
        if rng.gen_bool(0.3) {
            // Self-defeat unless the loop settles one way.
            let c = format!("C{i}");
            let s3 = *SUFFICIENCIES.choose(rng).unwrap();
            builder = push(builder, vec![a.clone()], vec![(c.clone(), 0.5)], s3, c);
        }
        if i > 0 && rng.gen_bool(0.5) {
            let pick = |rng: &mut R, up_to: usize| {
                let side = if rng.gen_bool(0.5) { "A" } else { "B" };
                format!("{side}{}", rng.gen_range(0..up_to))
            };
            let mono = pick(rng, i + 1);
            let target = pick(rng, i + 1);
            let s4 = *SUFFICIENCIES.choose(rng).unwrap();
            let alpha_d = alpha(rng, &target);
            builder = push(builder, vec![mono], vec![(target, alpha_d)], s4, format!("D{i}"));
        }
    }
    builder.build().expect("generated graph is well formed")
}

fn t_and(family: TNormFamily, a: f64, b: f64) -> f64 {
    match family {
        TNormFamily::MinMax => a.min(b),
        TNormFamily::ProductProbSum => a * b,
        TNormFamily::Lukasiewicz => (a + b - 1.0).max(0.0),
    }
}

fn s_or(family: TNormFamily, a: f64, b: f64) -> f64 {
    match family {
        TNormFamily::MinMax => a.max(b),
        TNormFamily::ProductProbSum => a + b - a * b,
        TNormFamily::Lukasiewicz => (a + b).min(1.0),
    }
}

/// Kahn's algorithm over the monotonic edges. `None` on a cycle.
pub fn kahn_order(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.vertex_count();
    let mut indegree = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (from, to, kind) in g.edges() {
        if kind == EdgeKind::Monotonic {
            out[g.index_of(from)].push(g.index_of(to));
            indegree[g.index_of(to)] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(g.vertex_at(v));
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Every admissible labeling, found by guessing the 0/1 value of each
/// nonmonotonic antecedent, evaluating the acyclic remainder, and keeping
/// the guesses the evaluation confirms.
pub fn brute_force_labelings(g: &Graph) -> Vec<Vec<f64>> {
    let order = kahn_order(g).expect("monotonic part is acyclic");
    let family = g.family();
    let sites: Vec<(usize, usize)> = g
        .justification_ids()
        .flat_map(|j| (0..g.nonmonotonic_antecedents(j).len()).map(move |k| (j.0, k)))
        .collect();
    assert!(sites.len() <= 20, "too many nonmonotonic antecedents for brute force");
    let mut found = Vec::new();
    for mask in 0u64..1 << sites.len() {
        let guess = |j: usize, k: usize| {
            let i = sites.iter().position(|&s| s == (j, k)).unwrap();
            if mask >> i & 1 == 1 {
                1.0
            } else {
                0.0
            }
        };
        let mut values = vec![0.0; g.vertex_count()];
        for &v in &order {
            let value = match v {
                Vertex::Justification(j) => {
                    let mut acc = g.sufficiency(j);
                    for m in g.monotonic_antecedents(j) {
                        acc = t_and(family, acc, values[m.0]);
                    }
                    for k in 0..g.nonmonotonic_antecedents(j).len() {
                        acc = t_and(family, acc, guess(j.0, k));
                    }
                    acc
                }
                Vertex::Literal(l) => {
                    let mut acc = g.input(l).unwrap_or(0.0);
                    for &j in g.supports(l) {
                        acc = s_or(family, acc, values[g.index_of(Vertex::Justification(j))]);
                    }
                    acc
                }
            };
            values[g.index_of(v)] = value;
        }
        let confirmed = sites.iter().all(|&(j, k)| {
            let (target, alpha) = g.nonmonotonic_antecedents(primo::JustId(j))[k];
            let actual = if values[target.0] >= alpha { 0.0 } else { 1.0 };
            actual == guess(j, k)
        });
        if confirmed {
            found.push(values);
        }
    }
    found
}

pub fn close(a: &[f64], b: &[f64], eps: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= eps)
}

/// Same multiset of labelings up to `eps`.
pub fn same_labelings(a: &[Vec<f64>], b: &[Vec<f64>], eps: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter()
        .all(|x| match (0..b.len()).find(|&i| !used[i] && close(x, &b[i], eps)) {
            Some(i) => {
                used[i] = true;
                true
            }
            None => false,
        })
}

/// A random weighted instance with two soft units per variable and random
/// hard clauses.
pub fn random_instance(rng: &mut impl Rng, max_vars: usize, max_hard: usize) -> WcnfInstance<f64> {
    let n = rng.gen_range(1..=max_vars);
    let vars: Vec<VarInfo<f64>> = (0..n)
        .map(|i| {
            let ic: f64 = rng.gen_range(0.0..=1.0);
            let ic_complement: f64 = rng.gen_range(0.0..=1.0);
            VarInfo {
                literal: primo::LiteralId(2 * i),
                name: format!("V{i:02}"),
                alpha: 0.5,
                ic,
                ic_complement,
            }
        })
        .collect();
    let mut clauses = Vec::new();
    for _ in 0..rng.gen_range(0..=max_hard) {
        let len = rng.gen_range(1..=3.min(n));
        let mut picked: Vec<usize> = (0..n).collect();
        picked.shuffle(rng);
        clauses.push(WeightedClause {
            literals: picked
                .into_iter()
                .take(len)
                .map(|var| BoolLit {
                    var,
                    positive: rng.gen_bool(0.5),
                })
                .collect(),
            weight: Weight::Hard,
            note: String::new(),
        });
    }
    for (i, v) in vars.iter().enumerate() {
        clauses.push(WeightedClause {
            literals: vec![BoolLit::pos(i)],
            weight: Weight::Soft(v.weight_pos()),
            note: String::new(),
        });
        clauses.push(WeightedClause {
            literals: vec![BoolLit::neg(i)],
            weight: Weight::Soft(v.weight_neg()),
            note: String::new(),
        });
    }
    WcnfInstance { vars, clauses }
}

/// Minimum finite weight over all `2^n` assignments, by independent
/// clause-weight summation.
pub fn exhaustive_minimum(inst: &WcnfInstance<f64>) -> Option<f64> {
    let n = inst.vars.len();
    let mut best: Option<f64> = None;
    for bits in 0u64..1 << n {
        let x = |v: usize| bits >> v & 1 == 1;
        let mut total = 0.0;
        let mut feasible = true;
        for c in &inst.clauses {
            let sat = c.literals.iter().any(|l| x(l.var) == l.positive);
            if sat {
                continue;
            }
            match c.weight {
                Weight::Hard => {
                    feasible = false;
                    break;
                }
                Weight::Soft(w) => total += w,
            }
        }
        if feasible {
            best = Some(best.map_or(total, |b: f64| b.min(total)));
        }
    }
    best
}

/// Vertex sets that are mutually reachable, by plain DFS from every vertex.
pub fn reachability(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (from, to, _) in g.edges() {
        out[g.index_of(from)].push(g.index_of(to));
    }
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for &w in &out[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen
        })
        .collect()
}
