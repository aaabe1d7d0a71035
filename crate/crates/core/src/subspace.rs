//! Subspaces of `F_{q^n}` viewed as `F_q^n`.
//!
//! A [`Subspace`] carries both its canonical reduced echelon basis (packed
//! coordinate rows, see [`crate::field`]) and the sorted exponents of its
//! nonzero elements. The zero vector is never listed.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::SubspaceError;
use crate::field::{Exponent, FieldCtx, VecCode};

#[derive(Clone, Debug)]
pub struct Subspace {
    field: u64,
    basis: Vec<VecCode>,
    elems: Vec<Exponent>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.basis.hash(state);
    }
}

impl Subspace {
    /// The `F_q`-span of `{α^e : e ∈ generators}`.
    pub fn span(ctx: &FieldCtx, generators: &[Exponent]) -> Result<Self, SubspaceError> {
        if generators.is_empty() {
            return Err(SubspaceError::NoGenerators);
        }
        let codes = generators
            .iter()
            .map(|&e| ctx.checked_exp_code(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_vectors(ctx, codes))
    }

    /// The span of packed coordinate vectors (zero vectors are ignored).
    pub fn from_vectors(ctx: &FieldCtx, vectors: impl IntoIterator<Item = VecCode>) -> Self {
        let mut ech = Echelon::new(ctx);
        for v in vectors {
            ech.insert(v);
        }
        Self::from_basis(ctx, ech.into_rref())
    }

    fn from_basis(ctx: &FieldCtx, basis: Vec<VecCode>) -> Self {
        let mut elems: Vec<Exponent> = nonzero_combinations(ctx, &basis)
            .into_iter()
            .map(|v| ctx.log_code(v))
            .collect();
        elems.sort_unstable();
        Subspace {
            field: ctx.fingerprint(),
            basis,
            elems,
        }
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    /// Canonical reduced echelon basis; pivots are the highest nonzero
    /// coordinate of each row, rows ordered by decreasing pivot.
    pub fn basis(&self) -> &[VecCode] {
        &self.basis
    }

    /// Sorted exponents of the nonzero elements.
    pub fn elems(&self) -> &[Exponent] {
        &self.elems
    }

    pub fn field_fingerprint(&self) -> u64 {
        self.field
    }

    pub fn contains_exp(&self, e: Exponent) -> bool {
        self.elems.binary_search(&e).is_ok()
    }

    /// `α^s · V`.
    pub fn cyclic_shift(&self, ctx: &FieldCtx, s: Exponent) -> Result<Self, SubspaceError> {
        check_field(ctx, self)?;
        if s >= ctx.order() {
            return Err(crate::error::FieldError::ExponentOutOfRange {
                exponent: s as u64,
                order: ctx.order(),
            }
            .into());
        }
        Ok(self.shift_unchecked(ctx, s))
    }

    pub(crate) fn shift_unchecked(&self, ctx: &FieldCtx, s: Exponent) -> Self {
        if s == 0 {
            return self.clone();
        }
        let order = ctx.order() as u64;
        let mut ech = Echelon::new(ctx);
        for &row in &self.basis {
            let e = (ctx.log_code(row) as u64 + s as u64) % order;
            ech.insert(ctx.exp_code(e as u32));
        }
        let basis = ech.into_rref();
        let mut elems: Vec<Exponent> = self
            .elems
            .iter()
            .map(|&e| ((e as u64 + s as u64) % order) as u32)
            .collect();
        elems.sort_unstable();
        Subspace {
            field: self.field,
            basis,
            elems,
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_exponents(f, &self.elems)
    }
}

pub(crate) fn fmt_exponents(f: &mut fmt::Formatter<'_>, elems: &[Exponent]) -> fmt::Result {
    f.write_str("{")?;
    for (i, e) in elems.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{e}")?;
    }
    f.write_str("}")
}

fn check_field(ctx: &FieldCtx, x: &Subspace) -> Result<(), SubspaceError> {
    if x.field != ctx.fingerprint() {
        return Err(SubspaceError::MixedFields);
    }
    Ok(())
}

/// `dim(X ∩ Y) = dim X + dim Y - rank[X; Y]`.
pub fn intersection_dim(ctx: &FieldCtx, x: &Subspace, y: &Subspace) -> Result<u32, SubspaceError> {
    check_field(ctx, x)?;
    check_field(ctx, y)?;
    let r = rank(ctx, x.basis.iter().chain(y.basis.iter()).copied());
    Ok(x.dim() + y.dim() - r)
}

/// Subspace distance `dim X + dim Y - 2 dim(X ∩ Y)`.
pub fn subspace_distance(ctx: &FieldCtx, x: &Subspace, y: &Subspace) -> Result<u32, SubspaceError> {
    let i = intersection_dim(ctx, x, y)?;
    Ok(x.dim() + y.dim() - 2 * i)
}

/// Rank of a list of packed vectors.
pub fn rank(ctx: &FieldCtx, rows: impl IntoIterator<Item = VecCode>) -> u32 {
    if ctx.q() == 2 {
        // pivot-indexed basis, one slot per bit
        let mut slots = [0u32; 32];
        let mut r = 0;
        for mut v in rows {
            while v != 0 {
                let p = 31 - v.leading_zeros() as usize;
                if slots[p] == 0 {
                    slots[p] = v;
                    r += 1;
                    break;
                }
                v ^= slots[p];
            }
        }
        return r;
    }
    let mut ech = Echelon::new(ctx);
    rows.into_iter().filter(|&v| ech.insert(v)).count() as u32
}

/// All `q^k - 1` nonzero linear combinations of `basis`.
fn nonzero_combinations(ctx: &FieldCtx, basis: &[VecCode]) -> Vec<VecCode> {
    let q = ctx.q();
    let k = basis.len() as u32;
    let total = q.pow(k) as usize;
    let mut out = Vec::with_capacity(total.saturating_sub(1));
    if q == 2 {
        // Gray code walk: each step flips one basis row
        let mut cur = 0u32;
        for i in 1..total as u32 {
            cur ^= basis[i.trailing_zeros() as usize];
            out.push(cur);
        }
        return out;
    }
    let mut counter = vec![0u32; k as usize];
    for _ in 1..total {
        let mut i = 0;
        loop {
            counter[i] += 1;
            if counter[i] == q {
                counter[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
        let v = counter
            .iter()
            .zip(basis)
            .fold(0, |acc, (&c, &row)| ctx.add(acc, ctx.scale(row, c)));
        out.push(v);
    }
    out
}

fn inv_mod(c: u32, q: u32) -> u32 {
    // Fermat, q prime
    let (mut base, mut exp, mut acc) = (c as u64 % q as u64, q as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q as u64;
        }
        base = base * base % q as u64;
        exp >>= 1;
    }
    acc as u32
}

fn pivot(ctx: &FieldCtx, v: VecCode) -> u32 {
    debug_assert!(v != 0);
    if ctx.q() == 2 {
        return 31 - v.leading_zeros();
    }
    (0..ctx.n()).rev().find(|&i| ctx.digit(v, i) != 0).unwrap()
}

/// Incrementally maintained reduced echelon form.
pub(crate) struct Echelon<'a> {
    ctx: &'a FieldCtx,
    rows: Vec<(u32, VecCode)>,
}

impl<'a> Echelon<'a> {
    pub(crate) fn new(ctx: &'a FieldCtx) -> Self {
        Echelon { ctx, rows: Vec::new() }
    }

    fn reduce(&self, mut v: VecCode) -> VecCode {
        let q = self.ctx.q();
        for &(p, row) in &self.rows {
            let c = self.ctx.digit(v, p);
            if c != 0 {
                v = self.ctx.add(v, self.ctx.scale(row, q - c));
            }
        }
        v
    }

    /// Returns true when `v` was independent of the rows so far.
    pub(crate) fn insert(&mut self, v: VecCode) -> bool {
        let ctx = self.ctx;
        let q = ctx.q();
        let mut v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let p = pivot(ctx, v);
        let lead = ctx.digit(v, p);
        if lead != 1 {
            v = ctx.scale(v, inv_mod(lead, q));
        }
        for (_, row) in self.rows.iter_mut() {
            let c = ctx.digit(*row, p);
            if c != 0 {
                *row = ctx.add(*row, ctx.scale(v, q - c));
            }
        }
        self.rows.push((p, v));
        true
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn into_rref(self) -> Vec<VecCode> {
        let mut rows: Vec<VecCode> = self.rows.into_iter().map(|(_, r)| r).collect();
        rows.sort_unstable_by(|a, b| b.cmp(a));
        rows
    }
}
