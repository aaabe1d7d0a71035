//! End-to-end classification: orbits, compatibility graph, exact clique
//! optimisation, per-class bounds and certificates.
//!
//! `C_q(n, d, k)` is the weight of a maximum-weight clique of the
//! compatibility graph with orbit sizes as weights. The per-class clique
//! numbers bound how many orbits of each size a code can use, and the
//! conditional bounds repeat that with some orbits held fixed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::cache::{load_or_enumerate, OrbitCache};
use crate::clique::{max_clique, max_weight_clique, CliqueResult, SolverOptions};
use crate::error::ClassifyError;
use crate::field::{default_primitive_poly, Exponent, FieldCtx, FieldParams};
use crate::graph::{build_graph, size_class_subgraph, CompatGraph, GraphOptions};
use crate::orbits::{EnumOptions, OrbitSet, DEFAULT_SPAN_CAP};
use crate::par::{self, Exec};
use crate::subspace::{subspace_distance, Subspace};

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    /// Primitive polynomial; the shipped default when `None`.
    pub field: Option<FieldParams>,
    pub exec: Exec,
    /// Per clique search.
    pub time_budget: Option<Duration>,
    pub span_cap: Option<u64>,
    pub cache: Option<OrbitCache>,
    /// Extra conditional bounds to compute and report.
    pub conditional: Vec<FixedProfile>,
}

impl ClassifyOptions {
    fn solver(&self) -> SolverOptions {
        SolverOptions {
            exec: self.exec,
            time_budget: self.time_budget,
        }
    }

    fn enum_opts(&self) -> EnumOptions {
        EnumOptions {
            exec: self.exec,
            span_cap: self.span_cap.unwrap_or(DEFAULT_SPAN_CAP),
        }
    }

    pub fn field_ctx(&self, q: u32, n: u32) -> Result<FieldCtx, ClassifyError> {
        let params = match &self.field {
            Some(p) => {
                if p.q != q || p.n != n {
                    return Err(ClassifyError::BadCertificate(format!(
                        "polynomial {} does not define GF({q}^{n})",
                        p.poly_string()
                    )));
                }
                p.clone()
            }
            None => default_primitive_poly(q, n)?,
        };
        Ok(FieldCtx::new(params)?)
    }
}

/// Which orbits to hold fixed in a conditional bound: every clique of
/// `fixed_count` orbits of stabilizer degree `fixed_t` is tried, and the
/// largest number of further orbits from the `target_ts` classes (all other
/// classes when empty) that extends it is reported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedProfile {
    pub fixed_t: u32,
    pub fixed_count: usize,
    #[serde(default)]
    pub target_ts: Vec<u32>,
}

impl fmt::Display for FixedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fix {}×t={}", self.fixed_count, self.fixed_t)?;
        if !self.target_ts.is_empty() {
            let ts: Vec<String> = self.target_ts.iter().map(|t| t.to_string()).collect();
            write!(f, " → t∈{{{}}}", ts.join(","))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for FixedProfile {
    type Err = String;

    /// `t:count` or `t:count:t1,t2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || format!("expected t:count[:targets], got {s:?}");
        if parts.len() < 2 || parts.len() > 3 {
            return Err(bad());
        }
        let fixed_t = parts[0].trim().parse().map_err(|_| bad())?;
        let fixed_count = parts[1].trim().parse().map_err(|_| bad())?;
        let target_ts = match parts.get(2) {
            Some(t) if !t.trim().is_empty() => t
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?,
            _ => Vec::new(),
        };
        Ok(FixedProfile {
            fixed_t,
            fixed_count,
            target_ts,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionalBound {
    pub profile: FixedProfile,
    /// Largest number of extra orbits over all fixed cliques; `None` when no
    /// clique of the fixed shape exists.
    pub bound: Option<u64>,
    pub fixed_cliques: usize,
    pub proved: bool,
}

/// A cyclic code as one generator subspace per orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub poly: String,
    /// Exponents spanning (or listing) each generator subspace.
    pub generators: Vec<Vec<Exponent>>,
    #[serde(rename = "M")]
    pub m: u64,
}

impl Certificate {
    pub fn field_params(&self) -> Result<FieldParams, ClassifyError> {
        let p = FieldParams::parse(self.q, &self.poly)?;
        if p.n != self.n {
            return Err(ClassifyError::BadCertificate(format!(
                "polynomial {} has degree {}, expected n={}",
                self.poly, p.n, self.n
            )));
        }
        Ok(p)
    }

    /// `[n,M,d,k]`
    pub fn parameter_string(&self) -> String {
        format!("[{},{},{},{}]", self.n, self.m, self.d, self.k)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}-cyclic code over GF({}^{}) mod {}, all cyclic shifts of:",
            self.parameter_string(),
            self.q,
            self.n,
            self.poly
        )?;
        for g in &self.generators {
            f.write_str("  ")?;
            crate::subspace::fmt_exponents(f, g)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub poly: String,
    /// t → number of orbits in G_q(n,k) with that stabilizer degree.
    pub orbit_counts: BTreeMap<u32, usize>,
    /// t → orbit size (q^n-1)/(q^t-1).
    pub class_sizes: BTreeMap<u32, u64>,
    /// t → clique number of the size class (upper bound on α_t).
    pub alpha_bounds: BTreeMap<u32, u64>,
    pub alpha_bounds_proved: bool,
    pub conditional_bounds: Vec<ConditionalBound>,
    pub best_code: Certificate,
    #[serde(rename = "M")]
    pub m: u64,
    pub optimal: bool,
    /// Proven upper bound on C_q(n,d,k): M when optimal, otherwise the
    /// class-bound sum when those bounds are proved.
    pub upper_bound: Option<u64>,
    /// Σ_t alpha_bounds[t]·class_sizes[t].
    pub class_bound_sum: u64,
    /// t → α_t used by the best code.
    pub decomposition: BTreeMap<u32, u64>,
    pub graph_vertices: usize,
    pub graph_edges: usize,
    pub solver: CliqueResult,
}

impl ClassificationReport {
    pub fn headline(&self) -> String {
        let status = if self.optimal {
            "optimal".to_string()
        } else {
            match self.upper_bound {
                Some(u) => format!("lower bound; C ≤ {u}"),
                None => "lower bound".to_string(),
            }
        };
        format!("C_{}({},{},{}) = {} ({})", self.q, self.n, self.d, self.k, self.m, status)
    }

    /// Right-hand side of `M = Σ α_t (q^n-1)/(q^t-1)` with this code's α_t.
    pub fn decomposition_string(&self) -> String {
        let terms: Vec<String> = self
            .decomposition
            .iter()
            .filter(|(_, &a)| a > 0)
            .map(|(t, a)| format!("{}·{}", a, self.class_sizes[t]))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.headline())?;
        writeln!(f, "field: GF({}^{}) mod {}", self.q, self.n, self.poly)?;
        let counts: Vec<String> = self
            .orbit_counts
            .iter()
            .map(|(t, c)| format!("{c} of size {}", self.class_sizes.get(t).copied().unwrap_or(1)))
            .collect();
        writeln!(f, "orbits: {}", counts.join(", "))?;
        writeln!(f, "graph: {} vertices, {} edges", self.graph_vertices, self.graph_edges)?;
        for (t, b) in &self.alpha_bounds {
            writeln!(f, "alpha_{t} <= {b}   (orbits of size {})", self.class_sizes[t])?;
        }
        writeln!(f, "class-bound sum: {}", self.class_bound_sum)?;
        for c in &self.conditional_bounds {
            match c.bound {
                Some(b) => writeln!(f, "{}: at most {b} more orbits ({} fixed cliques)", c.profile, c.fixed_cliques)?,
                None => writeln!(f, "{}: no such fixed clique", c.profile)?,
            }
        }
        writeln!(f, "M = {} = {}", self.m, self.decomposition_string())?;
        writeln!(
            f,
            "solver: {} nodes, {} cuts, {:.3}s",
            self.solver.nodes_explored,
            self.solver.bound_cuts,
            self.solver.time.as_secs_f64()
        )?;
        if self.m > 0 {
            write!(f, "{}", self.best_code)?;
        }
        Ok(())
    }
}

/// Orbits and compatibility graph of one `(q, n, k, d)` instance.
pub struct Instance {
    pub ctx: FieldCtx,
    pub orbits: OrbitSet,
    pub graph: CompatGraph,
}

impl Instance {
    pub fn build(q: u32, n: u32, k: u32, d: u32, opts: &ClassifyOptions) -> Result<Self, ClassifyError> {
        let ctx = opts.field_ctx(q, n)?;
        let orbits = load_or_enumerate(&ctx, k, &opts.enum_opts(), opts.cache.as_ref())?;
        Self::from_orbits(ctx, orbits, d, opts)
    }

    pub fn from_orbits(ctx: FieldCtx, orbits: OrbitSet, d: u32, opts: &ClassifyOptions) -> Result<Self, ClassifyError> {
        let graph = build_graph(
            &ctx,
            &orbits,
            d,
            &GraphOptions {
                exec: opts.exec,
                ..Default::default()
            },
        )?;
        Ok(Instance { ctx, orbits, graph })
    }

    /// Stabilizer degrees of the nontrivial orbit sizes, `t | n`, `t < n`.
    pub fn stabilizer_degrees(&self) -> Vec<u32> {
        let n = self.ctx.n();
        (1..n).filter(|t| n % t == 0).collect()
    }

    pub fn alpha_bound(&self, t: u32, opts: &ClassifyOptions) -> Result<CliqueResult, ClassifyError> {
        let n = self.ctx.n();
        if t == 0 || n % t != 0 {
            return Err(ClassifyError::BadStabilizer { t, n });
        }
        Ok(max_clique(&size_class_subgraph(&self.graph, t), &opts.solver()))
    }

    pub fn conditional_bound(&self, profile: &FixedProfile, opts: &ClassifyOptions) -> Result<ConditionalBound, ClassifyError> {
        let n = self.ctx.n();
        for &t in std::iter::once(&profile.fixed_t).chain(&profile.target_ts) {
            if t == 0 || n % t != 0 {
                return Err(ClassifyError::BadStabilizer { t, n });
            }
        }
        let g = &self.graph;
        let fixed_class = g.class_vertices(profile.fixed_t);
        let in_target = |v: usize| {
            if profile.target_ts.is_empty() {
                g.ts[v] != profile.fixed_t
            } else {
                profile.target_ts.contains(&g.ts[v])
            }
        };
        let targets: Vec<usize> = (0..g.len()).filter(|&v| in_target(v)).collect();
        let restricted = g.induced(&targets);

        let mut fixed_sets = Vec::new();
        cliques_of_size(g, &fixed_class, profile.fixed_count, &mut Vec::new(), 0, &mut fixed_sets);

        // the clique search itself is parallel, so fixed sets go one at a time
        let results: Vec<CliqueResult> = fixed_sets
            .iter()
            .map(|fixed| {
                let keep: Vec<usize> = (0..restricted.len())
                    .filter(|&i| fixed.iter().all(|&f| g.has_edge(f, targets[i])))
                    .collect();
                max_clique(&restricted.induced(&keep), &opts.solver())
            })
            .collect();
        let mut bound: Option<u64> = None;
        let mut proved = true;
        for r in results {
            proved &= r.is_proved_optimal;
            bound = Some(bound.map_or(r.size() as u64, |b: u64| b.max(r.size() as u64)));
        }
        Ok(ConditionalBound {
            profile: profile.clone(),
            bound,
            fixed_cliques: fixed_sets.len(),
            proved,
        })
    }

    pub fn report(&self, opts: &ClassifyOptions) -> Result<ClassificationReport, ClassifyError> {
        let g = &self.graph;
        let q = self.ctx.q();
        let n = self.ctx.n();
        let k = self.orbits.k;

        let mut class_sizes = BTreeMap::new();
        let mut alpha_bounds = BTreeMap::new();
        let mut alpha_bounds_proved = true;
        for t in self.stabilizer_degrees() {
            class_sizes.insert(t, g.class_period(t));
            let r = self.alpha_bound(t, opts)?;
            alpha_bounds_proved &= r.is_proved_optimal;
            alpha_bounds.insert(t, r.size() as u64);
        }
        for &t in self.orbits.counts_by_t.keys() {
            class_sizes.entry(t).or_insert_with(|| g.class_period(t));
        }
        let class_bound_sum: u64 = alpha_bounds.iter().map(|(t, a)| a * class_sizes[t]).sum();

        let conditional_bounds = opts
            .conditional
            .iter()
            .map(|p| self.conditional_bound(p, opts))
            .collect::<Result<Vec<_>, _>>()?;

        let solver = max_weight_clique(g, &opts.solver());
        let mut decomposition: BTreeMap<u32, u64> = alpha_bounds.keys().map(|&t| (t, 0)).collect();
        for &v in &solver.vertices {
            *decomposition.entry(g.ts[v]).or_insert(0) += 1;
        }
        let m = solver.weight;
        debug_assert_eq!(m, decomposition.iter().map(|(t, a)| a * class_sizes[t]).sum::<u64>());

        let best_code = Certificate {
            q,
            n,
            k,
            d: g.d,
            poly: self.ctx.params().poly_string(),
            generators: solver.vertices.iter().map(|&v| g.reps[v].clone()).collect(),
            m,
        };
        let optimal = solver.is_proved_optimal;
        let upper_bound = if optimal {
            Some(m)
        } else if alpha_bounds_proved {
            Some(class_bound_sum)
        } else {
            None
        };
        Ok(ClassificationReport {
            q,
            n,
            k,
            d: g.d,
            poly: self.ctx.params().poly_string(),
            orbit_counts: self.orbits.counts_by_t.clone(),
            class_sizes,
            alpha_bounds,
            alpha_bounds_proved,
            conditional_bounds,
            best_code,
            m,
            optimal,
            upper_bound,
            class_bound_sum,
            decomposition,
            graph_vertices: g.len(),
            graph_edges: g.edge_count(),
            solver,
        })
    }
}

/// All cliques of exactly `size` vertices among `pool` (sorted, ascending).
fn cliques_of_size(
    g: &CompatGraph,
    pool: &[usize],
    size: usize,
    cur: &mut Vec<usize>,
    start: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in start..pool.len() {
        let v = pool[i];
        if cur.iter().all(|&u| g.has_edge(u, v)) {
            cur.push(v);
            cliques_of_size(g, pool, size, cur, i + 1, out);
            cur.pop();
        }
    }
}

/// Compute `C_q(n, d, k)` with bounds and a certificate.
pub fn run_algorithm1(q: u32, n: u32, k: u32, d: u32, opts: &ClassifyOptions) -> Result<ClassificationReport, ClassifyError> {
    Instance::build(q, n, k, d, opts)?.report(opts)
}

/// Clique number of the class of orbits of size `(q^n-1)/(q^t-1)`.
pub fn alpha_bound(q: u32, n: u32, k: u32, d: u32, t: u32, opts: &ClassifyOptions) -> Result<u64, ClassifyError> {
    Ok(Instance::build(q, n, k, d, opts)?.alpha_bound(t, opts)?.size() as u64)
}

pub fn conditional_bound(
    q: u32,
    n: u32,
    k: u32,
    d: u32,
    profile: &FixedProfile,
    opts: &ClassifyOptions,
) -> Result<ConditionalBound, ClassifyError> {
    Instance::build(q, n, k, d, opts)?.conditional_bound(profile, opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A generator does not span a k-dimensional subspace.
    Dimension { generator: usize, dim: u32 },
    /// Two generators lie in the same orbit.
    Duplicate { generator: usize, other: usize },
    /// Two codewords are too close.
    Distance {
        a: Vec<Exponent>,
        b: Vec<Exponent>,
        distance: u32,
    },
    /// The expanded code does not have the claimed size.
    Count { claimed: u64, found: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dimension { generator, dim } => {
                write!(f, "generator {generator} spans a {dim}-dimensional space")
            }
            Violation::Duplicate { generator, other } => {
                write!(f, "generators {other} and {generator} lie in the same orbit")
            }
            Violation::Distance { a, b, distance } => {
                write!(f, "d({a:?}, {b:?}) = {distance}")
            }
            Violation::Count { claimed, found } => write!(f, "claimed M={claimed}, expanded to {found}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    /// Distinct codewords found.
    #[serde(rename = "M")]
    pub m: u64,
    /// Smallest pairwise distance (when all pairs were examined).
    pub min_distance: Option<u32>,
    /// Orbit size of each generator.
    pub orbit_sizes: Vec<u32>,
    pub violation: Option<Violation>,
}

/// Re-check a certificate from scratch: expand every orbit, check
/// distinctness and size, and compare every pair of codewords by rank.
pub fn verify_certificate(cert: &Certificate, exec: Exec) -> Result<Verdict, ClassifyError> {
    let ctx = FieldCtx::new(cert.field_params()?)?;
    let fail = |m: u64, sizes: Vec<u32>, v: Violation| Verdict {
        pass: false,
        m,
        min_distance: None,
        orbit_sizes: sizes,
        violation: Some(v),
    };
    let mut words: Vec<Subspace> = Vec::new();
    let mut owner: HashMap<Subspace, usize> = HashMap::new();
    let mut sizes = Vec::new();
    for (gi, gens) in cert.generators.iter().enumerate() {
        let v = Subspace::span(&ctx, gens)?;
        if v.dim() != cert.k {
            return Ok(fail(words.len() as u64, sizes, Violation::Dimension { generator: gi, dim: v.dim() }));
        }
        let mut size = 0;
        for s in 0..ctx.order() {
            let w = v.cyclic_shift(&ctx, s)?;
            match owner.get(&w) {
                Some(&o) if o == gi => {}
                Some(&o) => {
                    return Ok(fail(words.len() as u64, sizes, Violation::Duplicate { generator: gi, other: o }));
                }
                None => {
                    owner.insert(w.clone(), gi);
                    words.push(w);
                    size += 1;
                }
            }
        }
        sizes.push(size);
    }
    let m = words.len() as u64;

    // first offending pair in (i, j) order, plus the overall minimum
    let per_row: Vec<(Option<(usize, u32)>, u32)> = par::map_range(exec, 0..words.len(), |i| {
        let mut first_bad = None;
        let mut min = u32::MAX;
        for j in i + 1..words.len() {
            let dist = subspace_distance(&ctx, &words[i], &words[j]).expect("same field");
            min = min.min(dist);
            if dist < cert.d && first_bad.is_none() {
                first_bad = Some((j, dist));
            }
        }
        (first_bad, min)
    });
    let min_distance = per_row.iter().map(|r| r.1).min().filter(|&d| d != u32::MAX);
    if let Some((i, (j, dist))) = per_row.iter().enumerate().find_map(|(i, r)| r.0.map(|b| (i, b))) {
        let mut v = fail(
            m,
            sizes,
            Violation::Distance {
                a: words[i].elems().to_vec(),
                b: words[j].elems().to_vec(),
                distance: dist,
            },
        );
        v.min_distance = min_distance;
        return Ok(v);
    }
    if m != cert.m {
        let mut v = fail(m, sizes, Violation::Count { claimed: cert.m, found: m });
        v.min_distance = min_distance;
        return Ok(v);
    }
    Ok(Verdict {
        pass: true,
        m,
        min_distance,
        orbit_sizes: sizes,
        violation: None,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableCell {
    pub d: u32,
    pub k: u32,
    pub value: Option<u64>,
    pub optimal: bool,
    pub upper_bound: Option<u64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table {
    pub q: u32,
    pub n: u32,
    pub poly: String,
    pub ds: Vec<u32>,
    pub ks: Vec<u32>,
    /// Row per d, column per k.
    pub cells: Vec<Vec<TableCell>>,
}

impl Table {
    pub fn values(&self) -> Vec<Vec<Option<u64>>> {
        self.cells.iter().map(|r| r.iter().map(|c| c.value).collect()).collect()
    }

    pub fn complete(&self) -> bool {
        self.cells
            .iter()
            .flatten()
            .all(|c| c.error.is_none() && (c.optimal || c.upper_bound.is_some()))
    }

    pub fn all_optimal(&self) -> bool {
        self.cells.iter().flatten().all(|c| c.error.is_none() && c.optimal)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("d\\k");
        for k in &self.ks {
            s.push_str(&format!(",{k}"));
        }
        s.push('\n');
        for row in &self.cells {
            s.push_str(&row[0].d.to_string());
            for c in row {
                s.push(',');
                s.push_str(&c.to_string());
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for TableCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.value, &self.error) {
            (_, Some(_)) => f.write_str("error"),
            (Some(v), None) if self.optimal => write!(f, "{v}"),
            (Some(v), None) => match self.upper_bound {
                Some(u) => write!(f, "{v}-{u}"),
                None => write!(f, "≥{v}"),
            },
            (None, None) => f.write_str("?"),
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "C_{}({},d,k), GF({}^{}) mod {}", self.q, self.n, self.q, self.n, self.poly)?;
        let width = self
            .cells
            .iter()
            .flatten()
            .map(|c| c.to_string().chars().count())
            .max()
            .unwrap_or(1)
            .max(4);
        write!(f, "{:>5} |", "d\\k")?;
        for k in &self.ks {
            write!(f, " {k:>width$}")?;
        }
        writeln!(f)?;
        writeln!(f, "{}", "-".repeat(7 + self.ks.len() * (width + 1)))?;
        for row in &self.cells {
            write!(f, "{:>5} |", row[0].d)?;
            for c in row {
                write!(f, " {:>width$}", c.to_string())?;
            }
            writeln!(f)?;
        }
        for c in self.cells.iter().flatten() {
            if let Some(e) = &c.error {
                writeln!(f, "d={} k={}: {e}", c.d, c.k)?;
            }
        }
        Ok(())
    }
}

/// `C_q(n, d, k)` for every `d ∈ ds`, `k ∈ ks`. Cells fail independently.
pub fn table(q: u32, n: u32, ds: &[u32], ks: &[u32], opts: &ClassifyOptions) -> Result<Table, ClassifyError> {
    let ctx = opts.field_ctx(q, n)?;
    let orbit_sets: Vec<Result<OrbitSet, String>> = ks
        .iter()
        .map(|&k| load_or_enumerate(&ctx, k, &opts.enum_opts(), opts.cache.as_ref()).map_err(|e| e.to_string()))
        .collect();
    let jobs: Vec<(usize, usize)> = (0..ds.len()).flat_map(|i| (0..ks.len()).map(move |j| (i, j))).collect();
    let cells: Vec<TableCell> = par::map_slice(opts.exec, &jobs, |&(i, j)| {
        let (d, k) = (ds[i], ks[j]);
        let run = || -> Result<ClassificationReport, String> {
            let set = orbit_sets[j].clone()?;
            let inst = Instance::from_orbits(ctx.clone(), set, d, opts).map_err(|e| e.to_string())?;
            inst.report(opts).map_err(|e| e.to_string())
        };
        match run() {
            Ok(r) => TableCell {
                d,
                k,
                value: Some(r.m),
                optimal: r.optimal,
                upper_bound: r.upper_bound,
                error: None,
            },
            Err(e) => TableCell {
                d,
                k,
                value: None,
                optimal: false,
                upper_bound: None,
                error: Some(e),
            },
        }
    });
    let mut rows: Vec<Vec<TableCell>> = Vec::new();
    for (idx, c) in cells.into_iter().enumerate() {
        if idx % ks.len() == 0 {
            rows.push(Vec::new());
        }
        rows.last_mut().unwrap().push(c);
    }
    Ok(Table {
        q,
        n,
        poly: ctx.params().poly_string(),
        ds: ds.to_vec(),
        ks: ks.to_vec(),
        cells: rows,
    })
}
