//! Exact clique search on [`CompatGraph`]s.
//!
//! Branch and bound over bit-set candidate sets with greedy colouring bounds:
//! each colour class is an independent set, so a clique inside the first `c`
//! classes weighs at most the sum of their heaviest members. With unit
//! weights this is the classic colouring bound for maximum cardinality.
//!
//! Root branches may run on several workers. The shared incumbent is an
//! atomic key `(weight, branch priority)`; a branch only yields to strictly
//! heavier cliques or to equal cliques from earlier branches, so the answer
//! does not depend on thread count or scheduling.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::GraphError;
use crate::graph::CompatGraph;
use crate::par::{self, Exec};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Maximize the number of vertices.
    Cardinality,
    /// Maximize the sum of vertex weights.
    #[default]
    Weight,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolverOptions {
    pub exec: Exec,
    /// Stop after this long and return the best clique found so far.
    pub time_budget: Option<Duration>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueResult {
    /// Sorted vertex ids of the graph that was searched.
    pub vertices: Vec<usize>,
    /// Sum of weights (of the graph's weights, whatever the objective).
    pub weight: u64,
    pub is_proved_optimal: bool,
    pub nodes_explored: u64,
    pub bound_cuts: u64,
    #[serde(with = "duration_secs")]
    pub time: Duration,
}

impl CliqueResult {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

mod duration_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

const PRIORITY_BITS: u32 = 20;
const MAX_PRIORITY: u64 = (1 << PRIORITY_BITS) - 1;

#[inline]
fn key(weight: u64, branch: usize) -> u64 {
    // branch 0 gets the highest priority; greedy seeds use branch MAX_PRIORITY
    (weight << PRIORITY_BITS) | (MAX_PRIORITY - branch as u64)
}

/// Search state shared by all root branches.
struct Shared {
    best: AtomicU64,
    nodes: AtomicU64,
    cuts: AtomicU64,
    aborted: AtomicBool,
    deadline: Option<Instant>,
}

/// The graph relabelled into search order, with objective weights.
struct Instance {
    adj: Vec<BitSet>,
    weights: Vec<u64>,
    // original id of each relabelled vertex
    label: Vec<usize>,
}

impl Instance {
    fn new(g: &CompatGraph, objective: Objective) -> Self {
        let order = search_order(g);
        let m = order.len();
        let mut pos = vec![0; m];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut adj = vec![BitSet::new(m); m];
        for (i, &v) in order.iter().enumerate() {
            for u in g.neighbors(v).iter() {
                adj[i].insert(pos[u]);
            }
        }
        let weights = order
            .iter()
            .map(|&v| match objective {
                Objective::Cardinality => 1,
                Objective::Weight => g.weights[v],
            })
            .collect();
        Instance { adj, weights, label: order }
    }

    fn len(&self) -> usize {
        self.weights.len()
    }

    /// Greedy colour classes of `p` in label order; returns vertices in
    /// class order with the cumulative bound of their class.
    fn color_sort(&self, p: &BitSet, out: &mut Vec<(usize, u64)>) {
        out.clear();
        let mut uncolored = p.clone();
        let mut q = p.clone();
        let mut cum = 0u64;
        while !uncolored.is_empty() {
            q.clone_from(&uncolored);
            let start = out.len();
            let mut class_max = 0;
            while let Some(v) = q.first() {
                q.remove(v);
                q.difference_with(&self.adj[v]);
                uncolored.remove(v);
                class_max = class_max.max(self.weights[v]);
                out.push((v, 0));
            }
            cum += class_max;
            for e in &mut out[start..] {
                e.1 = cum;
            }
        }
    }

    fn greedy(&self) -> (Vec<usize>, u64) {
        let mut cand: Vec<usize> = (0..self.len()).collect();
        cand.sort_by(|&a, &b| {
            self.weights[b]
                .cmp(&self.weights[a])
                .then(self.adj[b].count().cmp(&self.adj[a].count()))
                .then(a.cmp(&b))
        });
        let mut clique: Vec<usize> = Vec::new();
        for v in cand {
            if clique.iter().all(|&u| self.adj[u].contains(v)) {
                clique.push(v);
            }
        }
        let w = clique.iter().map(|&v| self.weights[v]).sum();
        (clique, w)
    }
}

/// Smallest-last (degeneracy) order; ties go to the lower vertex id.
fn search_order(g: &CompatGraph) -> Vec<usize> {
    let m = g.len();
    let mut deg: Vec<usize> = (0..m).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for _ in 0..m {
        let v = (0..m)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        removed[v] = true;
        order.push(v);
        for u in g.neighbors(v).iter() {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    order.reverse();
    order
}

struct Branch<'a> {
    inst: &'a Instance,
    shared: &'a Shared,
    id: usize,
    cur: Vec<usize>,
    best: Option<(u64, Vec<usize>)>,
    nodes: u64,
    cuts: u64,
}

impl Branch<'_> {
    fn check_time(&mut self) -> bool {
        if self.shared.aborted.load(Ordering::Relaxed) {
            return true;
        }
        if self.nodes % 1024 == 0 {
            if let Some(dl) = self.shared.deadline {
                if Instant::now() >= dl {
                    self.shared.aborted.store(true, Ordering::Relaxed);
                    return true;
                }
            }
        }
        false
    }

    fn record(&mut self, w: u64) {
        if self.best.as_ref().is_some_and(|(bw, _)| *bw >= w) {
            return;
        }
        self.best = Some((w, self.cur.clone()));
        self.shared.best.fetch_max(key(w, self.id), Ordering::AcqRel);
    }

    fn expand(&mut self, p: BitSet, cur_w: u64) {
        self.nodes += 1;
        if self.check_time() {
            return;
        }
        let mut order = Vec::with_capacity(p.count());
        self.inst.color_sort(&p, &mut order);
        let mut p = p;
        for &(v, bound) in order.iter().rev() {
            if key(cur_w + bound, self.id) <= self.shared.best.load(Ordering::Acquire) {
                self.cuts += 1;
                return;
            }
            let w = cur_w + self.inst.weights[v];
            self.cur.push(v);
            let np = p.intersection(&self.inst.adj[v]);
            if np.is_empty() {
                self.record(w);
            } else {
                self.expand(np, w);
            }
            self.cur.pop();
            p.remove(v);
            if self.shared.aborted.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}

fn solve(g: &CompatGraph, objective: Objective, opts: &SolverOptions) -> CliqueResult {
    let start = Instant::now();
    let inst = Instance::new(g, objective);
    let m = inst.len();
    if m == 0 {
        return CliqueResult {
            vertices: Vec::new(),
            weight: 0,
            is_proved_optimal: true,
            nodes_explored: 0,
            bound_cuts: 0,
            time: start.elapsed(),
        };
    }
    assert!((m as u64) < MAX_PRIORITY, "graph too large for the branch encoding");

    let (greedy, greedy_w) = inst.greedy();
    let shared = Shared {
        best: AtomicU64::new(key(greedy_w, MAX_PRIORITY as usize)),
        nodes: AtomicU64::new(0),
        cuts: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        deadline: opts.time_budget.map(|b| start + b),
    };

    let mut root = Vec::new();
    inst.color_sort(&BitSet::full(m), &mut root);
    // branch b handles root[m-1-b] with candidates from the positions before it
    let results: Vec<Option<(u64, usize, Vec<usize>)>> = par::map_range(opts.exec, 0..m, |b| {
        let j = m - 1 - b;
        let (v, bound) = root[j];
        if key(bound, b) <= shared.best.load(Ordering::Acquire) {
            shared.cuts.fetch_add(1, Ordering::Relaxed);
            return None;
        }
        if shared.aborted.load(Ordering::Relaxed) {
            return None;
        }
        let mut p = BitSet::new(m);
        for &(u, _) in &root[..j] {
            p.insert(u);
        }
        p.intersect_with(&inst.adj[v]);
        let mut br = Branch {
            inst: &inst,
            shared: &shared,
            id: b,
            cur: vec![v],
            best: None,
            nodes: 0,
            cuts: 0,
        };
        let w = inst.weights[v];
        if p.is_empty() {
            br.record(w);
        } else {
            br.expand(p, w);
        }
        shared.nodes.fetch_add(br.nodes + 1, Ordering::Relaxed);
        shared.cuts.fetch_add(br.cuts, Ordering::Relaxed);
        br.best.map(|(w, c)| (w, b, c))
    });

    let mut best_key = key(greedy_w, MAX_PRIORITY as usize);
    let mut best = greedy;
    for (w, b, c) in results.into_iter().flatten() {
        let k = key(w, b);
        if k > best_key {
            best_key = k;
            best = c;
        }
    }
    let mut vertices: Vec<usize> = best.iter().map(|&v| inst.label[v]).collect();
    vertices.sort_unstable();
    debug_assert!(g.is_clique(&vertices));
    assert!(g.is_clique(&vertices), "solver returned a non-clique");
    CliqueResult {
        weight: g.weight_of(&vertices),
        vertices,
        is_proved_optimal: !shared.aborted.load(Ordering::Relaxed),
        nodes_explored: shared.nodes.load(Ordering::Relaxed),
        bound_cuts: shared.cuts.load(Ordering::Relaxed),
        time: start.elapsed(),
    }
}

/// A maximum-cardinality clique.
pub fn max_clique(g: &CompatGraph, opts: &SolverOptions) -> CliqueResult {
    solve(g, Objective::Cardinality, opts)
}

/// A clique of maximum total weight.
pub fn max_weight_clique(g: &CompatGraph, opts: &SolverOptions) -> CliqueResult {
    solve(g, Objective::Weight, opts)
}

/// Best clique containing the clique `fixed`: `fixed` plus the optimum of
/// its common neighbourhood. Vertex ids and weight refer to `g`.
pub fn max_clique_with_fixed(
    g: &CompatGraph,
    fixed: &[usize],
    objective: Objective,
    opts: &SolverOptions,
) -> Result<CliqueResult, GraphError> {
    let keep = g.common_neighbors(fixed)?;
    let sub = g.induced(&keep);
    let mut r = solve(&sub, objective, opts);
    let mut vertices: Vec<usize> = r.vertices.iter().map(|&v| keep[v]).chain(fixed.iter().copied()).collect();
    vertices.sort_unstable();
    vertices.dedup();
    debug_assert!(g.is_clique(&vertices));
    r.weight = g.weight_of(&vertices);
    r.vertices = vertices;
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalCliques {
    pub cliques: Vec<Vec<usize>>,
    pub truncated: bool,
}

/// Visit maximal cliques (pivoting Bron–Kerbosch) until `cap` have been
/// produced. Returns `true` when the enumeration was cut short.
pub fn for_each_maximal_clique<F: FnMut(&[usize])>(g: &CompatGraph, cap: usize, mut f: F) -> bool {
    fn rec<F: FnMut(&[usize])>(
        g: &CompatGraph,
        r: &mut Vec<usize>,
        mut p: BitSet,
        mut x: BitSet,
        left: &mut usize,
        f: &mut F,
    ) -> bool {
        if p.is_empty() {
            if x.is_empty() {
                if *left == 0 {
                    return true;
                }
                let mut c = r.clone();
                c.sort_unstable();
                f(&c);
                *left -= 1;
            }
            return false;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| (p.intersection_count(g.neighbors(u)), std::cmp::Reverse(u)))
            .unwrap();
        let mut cand = p.clone();
        cand.difference_with(g.neighbors(pivot));
        for v in cand.iter() {
            r.push(v);
            let stop = rec(
                g,
                r,
                p.intersection(g.neighbors(v)),
                x.intersection(g.neighbors(v)),
                left,
                f,
            );
            r.pop();
            if stop {
                return true;
            }
            p.remove(v);
            x.insert(v);
        }
        false
    }
    let m = g.len();
    if m == 0 {
        return false;
    }
    let mut left = cap;
    rec(g, &mut Vec::new(), BitSet::full(m), BitSet::new(m), &mut left, &mut f)
}

pub fn enumerate_maximal_cliques(g: &CompatGraph, cap: usize) -> MaximalCliques {
    let mut cliques = Vec::new();
    let truncated = for_each_maximal_clique(g, cap, |c| cliques.push(c.to_vec()));
    MaximalCliques { cliques, truncated }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    // Exhaustive oracle over all vertex subsets.
    fn brute(g: &CompatGraph, objective: Objective) -> u64 {
        let m = g.len();
        let mut best = 0;
        for mask in 0u32..(1 << m) {
            let vs: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            if g.is_clique(&vs) {
                let val = match objective {
                    Objective::Cardinality => vs.len() as u64,
                    Objective::Weight => g.weight_of(&vs),
                };
                best = best.max(val);
            }
        }
        best
    }

    fn random_graph(rng: &mut impl Rng, m: usize, density: f64, wmax: u64) -> CompatGraph {
        let mut edges = Vec::new();
        for u in 0..m {
            for v in u + 1..m {
                if rng.gen_bool(density) {
                    edges.push((u, v));
                }
            }
        }
        let weights = (0..m).map(|_| rng.gen_range(1..=wmax)).collect();
        CompatGraph::from_edges(weights, &edges)
    }

    fn triangle() -> CompatGraph {
        CompatGraph::from_edges(vec![1, 1, 1], &[(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn empty_and_single() {
        let g = CompatGraph::from_edges(vec![], &[]);
        let r = max_clique(&g, &SolverOptions::default());
        assert_eq!(r.size(), 0);
        assert!(r.is_proved_optimal);
        let g = CompatGraph::from_edges(vec![63], &[]);
        let r = max_weight_clique(&g, &SolverOptions::default());
        assert_eq!((r.vertices.clone(), r.weight), (vec![0], 63));
    }

    #[test]
    fn weight_beats_cardinality() {
        // triangle of light vertices vs a heavy edge
        let g = CompatGraph::from_edges(vec![1, 1, 1, 10, 10], &[(0, 1), (1, 2), (0, 2), (3, 4)]);
        assert_eq!(max_clique(&g, &SolverOptions::default()).vertices, vec![0, 1, 2]);
        assert_eq!(max_weight_clique(&g, &SolverOptions::default()).vertices, vec![3, 4]);
    }

    #[test]
    fn fixed_vertices() {
        let g = CompatGraph::from_edges(vec![1, 1, 1, 1, 1], &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]);
        let free = max_clique(&g, &SolverOptions::default());
        let none = max_clique_with_fixed(&g, &[], Objective::Cardinality, &SolverOptions::default()).unwrap();
        assert_eq!(free.size(), none.size());
        let r = max_clique_with_fixed(&g, &[4], Objective::Cardinality, &SolverOptions::default()).unwrap();
        assert_eq!(r.vertices, vec![2, 3, 4]);
        assert!(matches!(
            max_clique_with_fixed(&g, &[0, 4], Objective::Cardinality, &SolverOptions::default()),
            Err(GraphError::FixedNotClique)
        ));
    }

    #[test]
    fn maximal_cliques() {
        let r = enumerate_maximal_cliques(&triangle(), 10);
        assert_eq!(r.cliques, vec![vec![0, 1, 2]]);
        assert!(!r.truncated);
        let edgeless = CompatGraph::from_edges(vec![1; 5], &[]);
        let r = enumerate_maximal_cliques(&edgeless, 10);
        assert_eq!(r.cliques.len(), 5);
        assert!(r.cliques.iter().all(|c| c.len() == 1));
        let r = enumerate_maximal_cliques(&edgeless, 3);
        assert_eq!(r.cliques.len(), 3);
        assert!(r.truncated);
    }

    #[test]
    fn zero_budget_reports_unproved() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let g = random_graph(&mut rng, 120, 0.9, 1);
        let r = max_clique(
            &g,
            &SolverOptions {
                time_budget: Some(Duration::ZERO),
                ..Default::default()
            },
        );
        assert!(!r.is_proved_optimal);
        assert!(g.is_clique(&r.vertices));
        assert!(r.size() >= 1);
    }

    #[test]
    fn deterministic_across_exec_modes() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..5 {
            let g = random_graph(&mut rng, 60, 0.6, 5);
            let s = max_weight_clique(&g, &SolverOptions { exec: Exec::Sequential, ..Default::default() });
            for _ in 0..3 {
                let p = max_weight_clique(&g, &SolverOptions { exec: Exec::Parallel, ..Default::default() });
                assert_eq!(s.vertices, p.vertices);
            }
        }
    }

    proptest! {
        #[test]
        fn matches_exhaustive_search(seed in any::<u64>(), m in 0usize..=14, density in 0.1f64..0.95) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let g = random_graph(&mut rng, m, density, 9);
            let c = max_clique(&g, &SolverOptions::default());
            let w = max_weight_clique(&g, &SolverOptions::default());
            prop_assert!(g.is_clique(&c.vertices) && g.is_clique(&w.vertices));
            prop_assert_eq!(c.size() as u64, brute(&g, Objective::Cardinality));
            prop_assert_eq!(w.weight, brute(&g, Objective::Weight));
            prop_assert!(w.weight >= g.weight_of(&c.vertices));
            let all = enumerate_maximal_cliques(&g, usize::MAX);
            for cl in &all.cliques {
                prop_assert!(g.is_clique(cl));
                let ext = (0..m).any(|v| !cl.contains(&v) && cl.iter().all(|&u| g.has_edge(u, v)));
                prop_assert!(!ext);
            }
            let mut dedup = all.cliques.clone();
            dedup.sort();
            dedup.dedup();
            prop_assert_eq!(dedup.len(), all.cliques.len());
            if m > 0 {
                prop_assert_eq!(all.cliques.iter().map(|c| c.len()).max().unwrap(), c.size());
            }
        }

        #[test]
        fn fixing_never_increases(seed in any::<u64>(), m in 1usize..=12) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let g = random_graph(&mut rng, m, 0.5, 4);
            let free = max_weight_clique(&g, &SolverOptions::default());
            let v = rng.gen_range(0..m);
            let fixed = max_clique_with_fixed(&g, &[v], Objective::Weight, &SolverOptions::default()).unwrap();
            prop_assert!(fixed.vertices.contains(&v));
            prop_assert!(fixed.weight <= free.weight);
        }
    }
}
