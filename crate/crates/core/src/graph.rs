//! The orbit compatibility graph.
//!
//! Vertices are the orbits whose own minimum distance reaches `d`; two of
//! them are adjacent when every cross pair of members is at distance `≥ d`.
//! A clique is then exactly a cyclic code of minimum distance `≥ d`, with
//! vertex weights (orbit sizes) summing to its number of codewords.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::GraphError;
use crate::field::{Exponent, FieldCtx};
use crate::orbits::{inter_distance_with, inter_orbit_distance_pairwise, OrbitSet};
use crate::par::{self, Exec};

/// How inter-orbit distances are obtained while building edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DistanceMode {
    /// Representative against all shifts (difference histogram).
    #[default]
    ShiftReduced,
    /// Every cross pair of members, rank-based. Test oracle.
    Pairwise,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GraphOptions {
    pub exec: Exec,
    pub mode: DistanceMode,
}

#[derive(Clone, Debug)]
pub struct CompatGraph {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    /// Target minimum distance (normalized to even).
    pub d: u32,
    /// Orbit index (into the originating [`OrbitSet`]) of each vertex.
    pub orbit_ids: Vec<usize>,
    /// Canonical representative exponents of each vertex's orbit.
    pub reps: Vec<Vec<Exponent>>,
    /// Orbit size of each vertex.
    pub weights: Vec<u64>,
    /// Stabilizer degree of each vertex's orbit.
    pub ts: Vec<u32>,
    adj: Vec<BitSet>,
}

/// Map a requested distance onto the even distances of `G_q(n, k)`.
///
/// Distances between equal-dimension spaces are even, so an odd request is
/// equivalent to the next even value. Anything above `2k` is kept: no two
/// distinct `k`-spaces are that far apart, so the graph comes out empty.
pub fn normalize_distance(d: u32, k: u32) -> Result<u32, GraphError> {
    let max = 2 * k;
    if d == 0 {
        return Err(GraphError::BadDistance { d, max });
    }
    if d > max {
        log::info!("distance {d} exceeds 2k = {max}; no orbit qualifies");
    }
    if d % 2 == 1 {
        log::warn!("odd distance {d} treated as {}", d + 1);
        return Ok(d + 1);
    }
    Ok(d)
}

impl CompatGraph {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            out.extend(self.adj[u].iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    /// Orbit size for stabilizer degree `t`.
    pub fn class_period(&self, t: u32) -> u64 {
        let order = (self.q as u64).pow(self.n) - 1;
        order / ((self.q as u64).pow(t) - 1)
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &u)| {
            u < self.len() && vs[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v))
        })
    }

    pub fn weight_of(&self, vs: &[usize]) -> u64 {
        vs.iter().map(|&v| self.weights[v]).sum()
    }

    /// Graph on explicit vertices and edges; mostly for tests and for
    /// feeding the clique solver graphs that did not come from orbits.
    pub fn from_edges(weights: Vec<u64>, edges: &[(usize, usize)]) -> Self {
        let m = weights.len();
        let mut adj = vec![BitSet::new(m); m];
        for &(u, v) in edges {
            if u != v {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        CompatGraph {
            q: 2,
            n: 1,
            k: 1,
            d: 2,
            orbit_ids: (0..m).collect(),
            reps: vec![Vec::new(); m],
            weights,
            ts: vec![1; m],
            adj,
        }
    }

    /// Induced subgraph; vertex `i` of the result is `keep[i]` here.
    pub fn induced(&self, keep: &[usize]) -> CompatGraph {
        let m = keep.len();
        let mut adj = vec![BitSet::new(m); m];
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        CompatGraph {
            q: self.q,
            n: self.n,
            k: self.k,
            d: self.d,
            orbit_ids: keep.iter().map(|&v| self.orbit_ids[v]).collect(),
            reps: keep.iter().map(|&v| self.reps[v].clone()).collect(),
            weights: keep.iter().map(|&v| self.weights[v]).collect(),
            ts: keep.iter().map(|&v| self.ts[v]).collect(),
            adj,
        }
    }

    /// Vertices whose orbit has stabilizer degree `t`.
    pub fn class_vertices(&self, t: u32) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.ts[v] == t).collect()
    }

    /// Vertices adjacent to every member of `fixed` (excluding `fixed`).
    pub fn common_neighbors(&self, fixed: &[usize]) -> Result<Vec<usize>, GraphError> {
        if let Some(&v) = fixed.iter().find(|&&v| v >= self.len()) {
            return Err(GraphError::NoSuchVertex(v));
        }
        if !self.is_clique(fixed) {
            return Err(GraphError::FixedNotClique);
        }
        let mut cand = BitSet::full(self.len());
        for &v in fixed {
            cand.intersect_with(&self.adj[v]);
        }
        Ok(cand.iter().collect())
    }

    /// Plain-text DIMACS edge list with `n <v> <w>` weight lines.
    pub fn to_dimacs(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "c orbit compatibility graph q={} n={} k={} d={}",
            self.q, self.n, self.k, self.d
        );
        let _ = writeln!(s, "p edge {} {}", self.len(), self.edge_count());
        for (v, w) in self.weights.iter().enumerate() {
            let _ = writeln!(s, "n {} {}", v + 1, w);
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "e {} {}", u + 1, v + 1);
        }
        s
    }

    pub fn to_export(&self) -> GraphExport {
        GraphExport {
            q: self.q,
            n: self.n,
            k: self.k,
            d: self.d,
            vertices: (0..self.len())
                .map(|v| ExportVertex {
                    orbit: self.orbit_ids[v],
                    rep: self.reps[v].clone(),
                    weight: self.weights[v],
                    t: self.ts[v],
                })
                .collect(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

/// JSON form of a compatibility graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExport {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub vertices: Vec<ExportVertex>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportVertex {
    pub orbit: usize,
    pub rep: Vec<Exponent>,
    pub weight: u64,
    pub t: u32,
}

/// Build the compatibility graph for minimum distance `d`.
pub fn build_graph(
    ctx: &FieldCtx,
    orbits: &OrbitSet,
    d: u32,
    opts: &GraphOptions,
) -> Result<CompatGraph, GraphError> {
    let d = normalize_distance(d, orbits.k)?;
    let ids: Vec<usize> = orbits
        .orbits
        .iter()
        .enumerate()
        .filter(|(_, o)| o.min_dist.is_some_and(|m| m >= d))
        .map(|(i, _)| i)
        .collect();
    let m = ids.len();

    let rows: Vec<BitSet> = par::map_range_with(opts.exec, 0..m, Vec::new, |hist, i| {
        let mut row = BitSet::new(m);
        let a = &orbits.orbits[ids[i]];
        for j in i + 1..m {
            let b = &orbits.orbits[ids[j]];
            let dist = match opts.mode {
                DistanceMode::ShiftReduced => inter_distance_with(ctx, a, b, hist),
                DistanceMode::Pairwise => inter_orbit_distance_pairwise(ctx, a, b)
                    .expect("distinct orbits of one field"),
            };
            if dist >= d {
                row.insert(j);
            }
        }
        row
    });
    let mut adj = rows;
    for i in 0..m {
        let upper: Vec<usize> = adj[i].iter().collect();
        for j in upper {
            adj[j].insert(i);
        }
    }

    Ok(CompatGraph {
        q: orbits.q,
        n: orbits.n,
        k: orbits.k,
        d,
        orbit_ids: ids.clone(),
        reps: ids.iter().map(|&i| orbits.orbits[i].rep.elems().to_vec()).collect(),
        weights: ids.iter().map(|&i| orbits.orbits[i].period as u64).collect(),
        ts: ids.iter().map(|&i| orbits.orbits[i].t).collect(),
        adj,
    })
}

/// Induced subgraph on the orbits of size `(q^n - 1)/(q^t - 1)`.
pub fn size_class_subgraph(g: &CompatGraph, t: u32) -> CompatGraph {
    g.induced(&g.class_vertices(t))
}

/// Induced subgraph on the common neighbourhood of the clique `fixed`.
pub fn common_neighborhood_subgraph(g: &CompatGraph, fixed: &[usize]) -> Result<CompatGraph, GraphError> {
    Ok(g.induced(&g.common_neighbors(fixed)?))
}
