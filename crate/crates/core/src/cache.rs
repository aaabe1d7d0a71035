//! On-disk cache of orbit enumerations, one JSON file per `(q, n, k, poly)`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::ClassifyError;
use crate::field::{Exponent, FieldCtx};
use crate::orbits::{enumerate_orbits, gaussian_binomial, EnumOptions, Orbit, OrbitSet};
use crate::subspace::Subspace;

pub const CACHE_FORMAT: &str = "grassclique-orbits/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitFile {
    pub format: String,
    pub tool_version: String,
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub poly: Vec<u32>,
    pub orbits: Vec<OrbitRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub rep: Vec<Exponent>,
    pub period: u32,
    pub t: u32,
    pub min_dist: Option<u32>,
}

impl OrbitFile {
    pub fn from_set(set: &OrbitSet) -> Self {
        OrbitFile {
            format: CACHE_FORMAT.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            q: set.q,
            n: set.n,
            k: set.k,
            poly: set.poly.clone(),
            orbits: set
                .orbits
                .iter()
                .map(|o| OrbitRecord {
                    rep: o.rep.elems().to_vec(),
                    period: o.period,
                    t: o.t,
                    min_dist: o.min_dist,
                })
                .collect(),
        }
    }

    fn matches(&self, ctx: &FieldCtx, k: u32) -> bool {
        self.format == CACHE_FORMAT
            && self.tool_version == env!("CARGO_PKG_VERSION")
            && self.q == ctx.q()
            && self.n == ctx.n()
            && self.k == k
            && self.poly == ctx.params().poly
    }

    /// Rebuild the orbit set; `None` if the file does not describe a full
    /// partition of `G_q(n, k)` in this field.
    pub fn into_set(self, ctx: &FieldCtx) -> Option<OrbitSet> {
        let k = self.k;
        let mut orbits = Vec::with_capacity(self.orbits.len());
        for r in self.orbits {
            let rep = Subspace::span(ctx, &r.rep).ok()?;
            if rep.dim() != k || rep.elems() != &r.rep[..] {
                return None;
            }
            orbits.push(Orbit {
                rep,
                period: r.period,
                t: r.t,
                min_dist: r.min_dist,
            });
        }
        let set = OrbitSet::from_orbits(ctx, k, orbits);
        (set.total_subspaces() == gaussian_binomial(ctx.n(), k, ctx.q())).then_some(set)
    }
}

#[derive(Clone, Debug)]
pub struct OrbitCache {
    dir: PathBuf,
}

impl OrbitCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        OrbitCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, ctx: &FieldCtx, k: u32) -> PathBuf {
        let poly: String = ctx.params().poly.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("");
        self.dir
            .join(format!("orbits_q{}_n{}_k{}_p{}.json", ctx.q(), ctx.n(), k, poly))
    }

    pub fn load(&self, ctx: &FieldCtx, k: u32) -> Option<OrbitSet> {
        let text = fs::read_to_string(self.path_for(ctx, k)).ok()?;
        let file: OrbitFile = serde_json::from_str(&text).ok()?;
        if !file.matches(ctx, k) {
            log::info!("stale orbit cache for k={k}, recomputing");
            return None;
        }
        file.into_set(ctx)
    }

    pub fn store(&self, set: &OrbitSet, ctx: &FieldCtx) -> Result<(), ClassifyError> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(ctx, set.k);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(&OrbitFile::from_set(set))?)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

/// Enumerate through the cache when one is given.
pub fn load_or_enumerate(
    ctx: &FieldCtx,
    k: u32,
    opts: &EnumOptions,
    cache: Option<&OrbitCache>,
) -> Result<OrbitSet, ClassifyError> {
    if let Some(c) = cache {
        if let Some(set) = c.load(ctx, k) {
            log::debug!("orbit cache hit: {}", c.path_for(ctx, k).display());
            return Ok(set);
        }
    }
    let set = enumerate_orbits(ctx, k, opts)?;
    if let Some(c) = cache {
        if let Err(e) = c.store(&set, ctx) {
            log::warn!("cannot write orbit cache: {e}");
        }
    }
    Ok(set)
}
