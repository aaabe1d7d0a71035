//! Cyclic-shift orbits of the Grassmannian `G_q(n, k)`.
//!
//! Every orbit has a member containing `α^0`, so enumeration only spans the
//! subspaces through `1` (`[n-1 choose k-1]_q` of them), canonicalizes each
//! and deduplicates.
//!
//! Distances between orbit members reduce to a representative against the
//! shifts of another representative. Since `|X ∩ α^s Y|` (nonzero elements)
//! is the number of exponent pairs `(a, b) ∈ X × Y` with `a - b ≡ s`, one
//! histogram of exponent differences yields the intersection size for every
//! shift at once.

use std::collections::{BTreeMap, HashSet};

use crate::error::OrbitError;
use crate::field::{Exponent, FieldCtx, VecCode};
use crate::par::{self, Exec};
use crate::subspace::{subspace_distance, Subspace};

/// Default ceiling on the number of spans an enumeration may perform.
pub const DEFAULT_SPAN_CAP: u64 = 50_000_000;

/// The Gaussian binomial coefficient `[n choose k]_q`.
pub fn gaussian_binomial(n: u32, k: u32, q: u32) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(k - i) - 1;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Canonical member: contains `α^0` and has the lexicographically least
    /// exponent list among all members containing `α^0`.
    pub rep: Subspace,
    /// Number of distinct members.
    pub period: u32,
    /// Stabilizer degree: `period · (q^t - 1) = q^n - 1`.
    pub t: u32,
    /// Minimum distance between distinct members; `None` for a single member.
    pub min_dist: Option<u32>,
}

impl Orbit {
    pub fn k(&self) -> u32 {
        self.rep.dim()
    }

    /// All members, `rep` shifted by `0..period`.
    pub fn members(&self, ctx: &FieldCtx) -> Vec<Subspace> {
        (0..self.period).map(|s| self.rep.shift_unchecked(ctx, s)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct OrbitSet {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub poly: Vec<u32>,
    /// Sorted by canonical representative.
    pub orbits: Vec<Orbit>,
    pub counts_by_t: BTreeMap<u32, usize>,
}

impl OrbitSet {
    pub fn total_subspaces(&self) -> u128 {
        self.orbits.iter().map(|o| o.period as u128).sum()
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Index of the orbit containing `v`.
    pub fn find(&self, v: &Subspace) -> Option<usize> {
        let (canon, _) = canonical_elems(v.elems(), self.order());
        self.orbits
            .binary_search_by(|o| o.rep.elems().cmp(&canon[..]))
            .ok()
    }

    pub fn order(&self) -> u32 {
        self.q.pow(self.n) - 1
    }

    pub(crate) fn from_orbits(ctx: &FieldCtx, k: u32, mut orbits: Vec<Orbit>) -> Self {
        orbits.sort_by(|a, b| a.rep.elems().cmp(b.rep.elems()));
        let mut counts_by_t = BTreeMap::new();
        for o in &orbits {
            *counts_by_t.entry(o.t).or_insert(0) += 1;
        }
        OrbitSet {
            q: ctx.q(),
            n: ctx.n(),
            k,
            poly: ctx.params().poly.clone(),
            orbits,
            counts_by_t,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub exec: Exec,
    pub span_cap: u64,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            exec: Exec::default(),
            span_cap: DEFAULT_SPAN_CAP,
        }
    }
}

/// Canonical exponent list of a shift class together with the shift `s`
/// that produced it (`canon = elems - s`).
pub fn canonical_elems(elems: &[Exponent], order: u32) -> (Vec<Exponent>, Exponent) {
    let mut best: Vec<Exponent> = Vec::new();
    let mut best_shift = 0;
    let mut buf = Vec::with_capacity(elems.len());
    for &e in elems {
        buf.clear();
        buf.extend(elems.iter().map(|&x| (x + order - e) % order));
        buf.sort_unstable();
        if best.is_empty() || buf < best {
            std::mem::swap(&mut best, &mut buf);
            best_shift = e;
        }
    }
    (best, best_shift)
}

fn divisors(m: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=m).take_while(|d| d * d <= m).filter(|d| m % d == 0).collect();
    let big: Vec<u32> = out.iter().rev().map(|d| m / d).filter(|&d| d * d != m).collect();
    out.extend(big);
    out
}

/// Least `s > 0` with `elems + s = elems`.
fn period_of(elems: &[Exponent], order: u32) -> u32 {
    for p in divisors(order) {
        if elems
            .iter()
            .all(|&e| elems.binary_search(&((e + p) % order)).is_ok())
        {
            return p;
        }
    }
    order
}

fn stabilizer_degree(q: u32, order: u32, period: u32) -> u32 {
    let sub = order / period + 1;
    let mut t = 0;
    let mut p = 1;
    while p < sub {
        p *= q;
        t += 1;
    }
    debug_assert_eq!(p, sub, "orbit size must be (q^n-1)/(q^t-1)");
    t
}

/// Dimension of a subspace with `count` nonzero elements.
fn dim_from_count(q: u32, count: u32) -> u32 {
    let mut d = 0;
    let mut p = 1u64;
    while p < count as u64 + 1 {
        p *= q as u64;
        d += 1;
    }
    d
}

/// Largest `|A ∩ (B + s)|` over shifts `s`, skipping shifts that are
/// multiples of `skip_period` when given.
fn max_overlap(
    a: &[Exponent],
    b: &[Exponent],
    order: u32,
    skip_period: Option<u32>,
    hist: &mut Vec<u32>,
) -> u32 {
    hist.clear();
    hist.resize(order as usize, 0);
    for &x in a {
        for &y in b {
            let s = if x >= y { x - y } else { x + order - y };
            hist[s as usize] += 1;
        }
    }
    match skip_period {
        Some(p) => hist
            .iter()
            .enumerate()
            .filter(|(s, _)| *s as u32 % p != 0)
            .map(|(_, &c)| c)
            .max()
            .unwrap_or(0),
        None => hist.iter().copied().max().unwrap_or(0),
    }
}

fn min_dist_with(q: u32, order: u32, rep: &[Exponent], k: u32, period: u32, hist: &mut Vec<u32>) -> Option<u32> {
    if period == 1 {
        return None;
    }
    let c = max_overlap(rep, rep, order, Some(period), hist);
    Some(2 * k - 2 * dim_from_count(q, c))
}

/// The orbit of `v`, with canonical representative, period, stabilizer
/// degree and minimum distance.
pub fn orbit_of(ctx: &FieldCtx, v: &Subspace) -> Orbit {
    let mut hist = Vec::new();
    let (canon, _) = canonical_elems(v.elems(), ctx.order());
    orbit_from_canonical(ctx, &canon, &mut hist)
}

fn orbit_from_canonical(ctx: &FieldCtx, canon: &[Exponent], hist: &mut Vec<u32>) -> Orbit {
    let order = ctx.order();
    let rep = Subspace::span(ctx, canon).expect("canonical exponents are in range");
    let period = period_of(canon, order);
    let t = stabilizer_degree(ctx.q(), order, period);
    let min_dist = min_dist_with(ctx.q(), order, canon, rep.dim(), period, hist);
    Orbit {
        rep,
        period,
        t,
        min_dist,
    }
}

/// Rebuild an orbit from a stored canonical representative.
pub fn orbit_from_rep(ctx: &FieldCtx, rep: &[Exponent]) -> Result<Orbit, OrbitError> {
    let v = Subspace::span(ctx, rep)?;
    Ok(orbit_of(ctx, &v))
}

/// Internal minimum distance of an orbit with at least two members.
pub fn orbit_min_distance(ctx: &FieldCtx, o: &Orbit) -> Result<u32, OrbitError> {
    if o.period < 2 {
        return Err(OrbitError::SingletonOrbit);
    }
    let mut hist = Vec::new();
    Ok(min_dist_with(ctx.q(), ctx.order(), o.rep.elems(), o.k(), o.period, &mut hist).unwrap())
}

/// Minimum distance between a member of `a` and a member of `b`.
pub fn inter_orbit_distance(ctx: &FieldCtx, a: &Orbit, b: &Orbit) -> Result<u32, OrbitError> {
    if a.rep == b.rep {
        return Err(OrbitError::SameOrbit);
    }
    let mut hist = Vec::new();
    Ok(inter_distance_with(ctx, a, b, &mut hist))
}

pub(crate) fn inter_distance_with(ctx: &FieldCtx, a: &Orbit, b: &Orbit, hist: &mut Vec<u32>) -> u32 {
    let c = max_overlap(a.rep.elems(), b.rep.elems(), ctx.order(), None, hist);
    a.k() + b.k() - 2 * dim_from_count(ctx.q(), c)
}

/// Brute-force internal minimum distance: every pair of members, rank-based.
pub fn orbit_min_distance_pairwise(ctx: &FieldCtx, o: &Orbit) -> Result<u32, OrbitError> {
    if o.period < 2 {
        return Err(OrbitError::SingletonOrbit);
    }
    let members = o.members(ctx);
    let mut best = u32::MAX;
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            best = best.min(subspace_distance(ctx, &members[i], &members[j])?);
        }
    }
    Ok(best)
}

/// Brute-force distance between two orbits over all cross pairs.
pub fn inter_orbit_distance_pairwise(ctx: &FieldCtx, a: &Orbit, b: &Orbit) -> Result<u32, OrbitError> {
    if a.rep == b.rep {
        return Err(OrbitError::SameOrbit);
    }
    let ma = a.members(ctx);
    let mb = b.members(ctx);
    let mut best = u32::MAX;
    for x in &ma {
        for y in &mb {
            best = best.min(subspace_distance(ctx, x, y)?);
        }
    }
    Ok(best)
}

/// Reduced echelon matrices `(rows) × (cols)` over `F_q`, pivots at the
/// highest nonzero coordinate of each row, as one pivot pattern each.
struct PivotPattern {
    pivots: Vec<u32>,
    // (row, column) of every free entry
    free: Vec<(usize, u32)>,
    count: u64,
}

fn pivot_patterns(rows: u32, cols: u32, q: u32) -> Vec<PivotPattern> {
    fn rec(start: u32, rows: u32, cols: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() as u32 == rows {
            out.push(cur.clone());
            return;
        }
        for c in start..cols {
            cur.push(c);
            rec(c + 1, rows, cols, cur, out);
            cur.pop();
        }
    }
    let mut combos = Vec::new();
    rec(0, rows, cols, &mut Vec::new(), &mut combos);
    combos
        .into_iter()
        .map(|pivots| {
            let mut free = Vec::new();
            for (r, &p) in pivots.iter().enumerate() {
                for c in 0..p {
                    if !pivots.contains(&c) {
                        free.push((r, c));
                    }
                }
            }
            let count = (q as u64).pow(free.len() as u32);
            PivotPattern { pivots, free, count }
        })
        .collect()
}

fn pattern_rows(pat: &PivotPattern, mut idx: u64, q: u32) -> Vec<Vec<u32>> {
    let mut rows: Vec<Vec<u32>> = pat.pivots.iter().map(|&p| {
        let mut r = vec![0u32; p as usize + 1];
        r[p as usize] = 1;
        r
    }).collect();
    for &(r, c) in &pat.free {
        rows[r][c as usize] = (idx % q as u64) as u32;
        idx /= q as u64;
    }
    rows
}

/// Enumerate all orbits of `G_q(n, k)`.
pub fn enumerate_orbits(ctx: &FieldCtx, k: u32, opts: &EnumOptions) -> Result<OrbitSet, OrbitError> {
    let n = ctx.n();
    let q = ctx.q();
    if k == 0 || k > n {
        return Err(OrbitError::BadDimension { k, n });
    }
    let needed = gaussian_binomial(n - 1, k - 1, q);
    if needed > opts.span_cap as u128 {
        return Err(OrbitError::ResourceCap {
            needed,
            cap: opts.span_cap,
        });
    }
    let order = ctx.order();
    let patterns = pivot_patterns(k - 1, n - 1, q);

    // flatten (pattern, fill) pairs into chunks of work
    const CHUNK: u64 = 2048;
    let mut jobs: Vec<(usize, u64, u64)> = Vec::new();
    for (pi, pat) in patterns.iter().enumerate() {
        let mut lo = 0;
        while lo < pat.count {
            let hi = (lo + CHUNK).min(pat.count);
            jobs.push((pi, lo, hi));
            lo = hi;
        }
    }

    let partial: Vec<Vec<Vec<Exponent>>> = par::map_range(opts.exec, 0..jobs.len(), |j| {
        let (pi, lo, hi) = jobs[j];
        let pat = &patterns[pi];
        let mut seen: HashSet<Vec<Exponent>> = HashSet::new();
        for idx in lo..hi {
            let rows = pattern_rows(pat, idx, q);
            // coordinate 0 is reserved for the vector 1
            let mut basis: Vec<VecCode> = vec![1];
            for r in rows {
                let coords: Vec<u32> = std::iter::once(0).chain(r).chain(std::iter::repeat(0)).take(n as usize).collect();
                basis.push(ctx.coords_to_code(&coords).expect("digits are reduced"));
            }
            let v = Subspace::from_vectors(ctx, basis);
            debug_assert_eq!(v.dim(), k);
            let (canon, _) = canonical_elems(v.elems(), order);
            seen.insert(canon);
        }
        seen.into_iter().collect()
    });

    let mut canon: Vec<Vec<Exponent>> = partial.into_iter().flatten().collect();
    canon.sort_unstable();
    canon.dedup();

    let orbits = par::map_range_with(opts.exec, 0..canon.len(), Vec::new, |hist, i| {
        orbit_from_canonical(ctx, &canon[i], hist)
    });
    let set = OrbitSet::from_orbits(ctx, k, orbits);
    log::debug!(
        "G_{}({},{}): {} orbits, {} subspaces",
        q,
        n,
        k,
        set.len(),
        set.total_subspaces()
    );
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldParams;
    use std::collections::BTreeMap;

    // Independent census: every RREF k×n matrix (pivot patterns over all n
    // coordinates), grouped by explicit shift closure.
    fn brute_census(ctx: &FieldCtx, k: u32) -> BTreeMap<(u32, Option<u32>), usize> {
        let n = ctx.n();
        let q = ctx.q();
        let mut all: Vec<Subspace> = Vec::new();
        for pat in pivot_patterns(k, n, q) {
            for idx in 0..pat.count {
                let rows = pattern_rows(&pat, idx, q);
                let basis = rows.into_iter().map(|r| {
                    let coords: Vec<u32> = r.into_iter().chain(std::iter::repeat(0)).take(n as usize).collect();
                    ctx.coords_to_code(&coords).unwrap()
                });
                all.push(Subspace::from_vectors(ctx, basis));
            }
        }
        assert_eq!(all.len() as u128, gaussian_binomial(n, k, q));
        let mut seen: HashSet<Subspace> = HashSet::new();
        let mut census = BTreeMap::new();
        for v in &all {
            if seen.contains(v) {
                continue;
            }
            let mut members = Vec::new();
            let mut cur = v.clone();
            loop {
                members.push(cur.clone());
                seen.insert(cur.clone());
                cur = cur.cyclic_shift(ctx, 1).unwrap();
                if &cur == v {
                    break;
                }
            }
            let mut md = None;
            for i in 0..members.len() {
                for j in i + 1..members.len() {
                    let d = subspace_distance(ctx, &members[i], &members[j]).unwrap();
                    md = Some(md.map_or(d, |m: u32| m.min(d)));
                }
            }
            *census.entry((members.len() as u32, md)).or_insert(0) += 1;
        }
        census
    }

    fn census(set: &OrbitSet) -> BTreeMap<(u32, Option<u32>), usize> {
        let mut m = BTreeMap::new();
        for o in &set.orbits {
            *m.entry((o.period, o.min_dist)).or_insert(0) += 1;
        }
        m
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(7, 0, 2), 1);
        assert_eq!(gaussian_binomial(8, 4, 2), 200787);
        assert_eq!(gaussian_binomial(3, 5, 2), 0);
        // rows of RREF matrices, counted pattern by pattern
        for (n, k, q) in [(5, 2, 2), (6, 3, 2), (4, 2, 3), (8, 4, 2)] {
            let total: u64 = pivot_patterns(k, n, q).iter().map(|p| p.count).sum();
            assert_eq!(total as u128, gaussian_binomial(n, k, q));
        }
    }

    #[test]
    fn spread_of_f16() {
        let ctx = FieldCtx::new(FieldParams::new(2, 4, vec![1, 1, 0, 0, 1])).unwrap();
        let set = enumerate_orbits(&ctx, 2, &EnumOptions::default()).unwrap();
        assert_eq!(set.total_subspaces(), 35);
        let fives: Vec<_> = set.orbits.iter().filter(|o| o.period == 5).collect();
        assert_eq!(fives.len(), 1);
        assert_eq!(fives[0].rep.elems(), &[0, 5, 10]);
        assert_eq!(fives[0].t, 2);
        assert_eq!(fives[0].min_dist, Some(4));
        assert_eq!(orbit_min_distance(&ctx, fives[0]).unwrap(), 4);
    }

    #[test]
    fn census_g2_6_3_matches_brute_force() {
        let ctx = FieldCtx::with_default(2, 6).unwrap();
        let set = enumerate_orbits(&ctx, 3, &EnumOptions::default()).unwrap();
        assert_eq!(census(&set), brute_census(&ctx, 3));
        let nines: Vec<_> = set.orbits.iter().filter(|o| o.period == 9).collect();
        assert_eq!(nines.len(), 1);
        assert_eq!(nines[0].min_dist, Some(6));
        assert_eq!(nines[0].rep.elems(), &[0, 9, 18, 27, 36, 45, 54]);
    }

    #[test]
    fn census_small_cases_match_brute_force() {
        for (q, n, k) in [(2, 4, 2), (2, 5, 2), (3, 3, 2), (3, 4, 2), (2, 6, 2)] {
            let ctx = FieldCtx::with_default(q, n).unwrap();
            let set = enumerate_orbits(&ctx, k, &EnumOptions::default()).unwrap();
            assert_eq!(census(&set), brute_census(&ctx, k), "q={q} n={n} k={k}");
        }
    }

    #[test]
    fn orbit_of_subfields() {
        let f16 = FieldCtx::new(FieldParams::new(2, 4, vec![1, 1, 0, 0, 1])).unwrap();
        let o = orbit_of(&f16, &Subspace::span(&f16, &[0, 5, 10]).unwrap());
        assert_eq!((o.period, o.t), (5, 2));

        let f256 = FieldCtx::with_default(2, 8).unwrap();
        let gens: Vec<u32> = (0..15).map(|i| 17 * i).collect();
        let v = Subspace::span(&f256, &gens).unwrap();
        assert_eq!(v.dim(), 4);
        let o = orbit_of(&f256, &v);
        assert_eq!((o.period, o.t, o.min_dist), (17, 4, Some(8)));
    }

    #[test]
    fn trivial_stabilizer_in_f512() {
        let ctx = FieldCtx::with_default(2, 9).unwrap();
        let v = Subspace::span(&ctx, &[0, 1, 3]).unwrap();
        assert_eq!(v.dim(), 3);
        let o = orbit_of(&ctx, &v);
        // explicit scan over all shifts
        let fixed = (1..511).filter(|&s| v.cyclic_shift(&ctx, s).unwrap() == v).count();
        assert_eq!(fixed, 0);
        assert_eq!((o.period, o.t), (511, 1));
        // the orbit of any shift is the same orbit
        for s in [1, 77, 510] {
            assert_eq!(orbit_of(&ctx, &v.cyclic_shift(&ctx, s).unwrap()), o);
        }
    }

    #[test]
    fn full_space_is_a_singleton_orbit() {
        let ctx = FieldCtx::with_default(2, 3).unwrap();
        let set = enumerate_orbits(&ctx, 3, &EnumOptions::default()).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.orbits[0].period, 1);
        assert_eq!(set.orbits[0].min_dist, None);
        assert_eq!(orbit_min_distance(&ctx, &set.orbits[0]), Err(OrbitError::SingletonOrbit));
    }

    #[test]
    fn errors() {
        let ctx = FieldCtx::with_default(2, 8).unwrap();
        assert!(matches!(
            enumerate_orbits(&ctx, 0, &EnumOptions::default()),
            Err(OrbitError::BadDimension { .. })
        ));
        let opts = EnumOptions { span_cap: 100, ..Default::default() };
        assert!(matches!(
            enumerate_orbits(&ctx, 4, &opts),
            Err(OrbitError::ResourceCap { .. })
        ));
        let f16 = FieldCtx::with_default(2, 4).unwrap();
        let set = enumerate_orbits(&f16, 2, &EnumOptions::default()).unwrap();
        let o = &set.orbits[0];
        assert_eq!(inter_orbit_distance(&f16, o, o), Err(OrbitError::SameOrbit));
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let ctx = FieldCtx::with_default(2, 7).unwrap();
        let set = enumerate_orbits(&ctx, 3, &EnumOptions::default()).unwrap();
        for o in set.orbits.iter().step_by(5) {
            for s in [1u32, 13, 126] {
                let shifted = o.rep.cyclic_shift(&ctx, s).unwrap();
                let (c, _) = canonical_elems(shifted.elems(), ctx.order());
                assert_eq!(c, o.rep.elems());
                assert_eq!(set.find(&shifted), set.orbits.iter().position(|x| x == o));
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let ctx = FieldCtx::with_default(2, 7).unwrap();
        let a = enumerate_orbits(&ctx, 3, &EnumOptions { exec: Exec::Sequential, ..Default::default() }).unwrap();
        let b = enumerate_orbits(&ctx, 3, &EnumOptions { exec: Exec::Parallel, ..Default::default() }).unwrap();
        assert_eq!(a.orbits, b.orbits);
    }
}
