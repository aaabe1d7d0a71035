//! Extension fields `F_{q^n}` over a prime field, represented through
//! discrete-log / antilog tables.
//!
//! Elements are addressed in two ways: by exponent `e` (meaning `α^e`, where
//! `α` is the class of `x` modulo the primitive polynomial) and by a packed
//! coordinate code. The code of a vector `(c_0, …, c_{n-1})` in the power
//! basis `{1, x, …, x^{n-1}}` is `Σ c_i q^i`; for `q = 2` this is simply a
//! bit mask with one bit per coordinate.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::FieldError;

/// Largest multiplicative group order we are willing to tabulate.
pub const MAX_FIELD_ORDER: u64 = 1 << 24;

/// Packed coordinate vector (see module docs).
pub type VecCode = u32;

/// Discrete logarithm of a nonzero field element.
pub type Exponent = u32;

/// Parameters of `F_{q^n}`: a prime `q` and a monic degree-`n` polynomial,
/// coefficients stored constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    pub q: u32,
    pub n: u32,
    pub poly: Vec<u32>,
}

impl FieldParams {
    pub fn new(q: u32, n: u32, poly: Vec<u32>) -> Self {
        FieldParams { q, n, poly }
    }

    /// Parse a polynomial in either `x^8+x^4+x^3+x^2+1` form or as a
    /// comma-separated coefficient list, constant term first.
    pub fn parse(q: u32, text: &str) -> Result<Self, FieldError> {
        let poly: Polynomial = text.parse()?;
        let coeffs = poly.reduced(q);
        if coeffs.len() < 2 {
            return Err(FieldError::WrongDegree { expected: 1, found: 0 });
        }
        let n = (coeffs.len() - 1) as u32;
        Ok(FieldParams { q, n, poly: coeffs })
    }

    pub fn poly_string(&self) -> String {
        Polynomial(self.poly.clone()).to_string()
    }

    fn validate_shape(&self) -> Result<(), FieldError> {
        if !is_prime(self.q) {
            return Err(FieldError::NotPrime(self.q));
        }
        if self.n == 0 || self.poly.len() != self.n as usize + 1 {
            return Err(FieldError::WrongDegree {
                expected: self.n,
                found: self.poly.len().saturating_sub(1) as u32,
            });
        }
        if let Some(&c) = self.poly.iter().find(|&&c| c >= self.q) {
            return Err(FieldError::CoefficientOutOfRange { coeff: c, q: self.q });
        }
        if self.poly[self.n as usize] != 1 {
            return Err(FieldError::NotMonic);
        }
        let order = (self.q as u64).checked_pow(self.n).map(|v| v - 1);
        match order {
            Some(o) if o <= MAX_FIELD_ORDER => Ok(()),
            _ => Err(FieldError::TooLarge { q: self.q, n: self.n }),
        }
    }
}

impl fmt::Display for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.q, self.n, self.poly_string())
    }
}

/// A polynomial over the integers as written by the user, constant term first.
/// Coefficients are reduced modulo `q` only once the base field is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial(pub Vec<u32>);

impl Polynomial {
    fn reduced(&self, q: u32) -> Vec<u32> {
        let mut c: Vec<u32> = self.0.iter().map(|&a| a % q).collect();
        while c.len() > 1 && *c.last().unwrap() == 0 {
            c.pop();
        }
        c
    }
}

impl FromStr for Polynomial {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(FieldError::BadPolynomial(s.to_string()));
        }
        let bad = || FieldError::BadPolynomial(s.to_string());
        if !text.contains('x') && !text.contains('X') {
            if text.contains(',') {
                let coeffs = text
                    .split(',')
                    .map(|t| t.parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                return Ok(Polynomial(coeffs));
            }
        }
        let mut coeffs: Vec<u32> = Vec::new();
        for term in text.split('+') {
            if term.is_empty() {
                return Err(bad());
            }
            let (coef, power) = match term.find(['x', 'X']) {
                None => (term.parse::<u32>().map_err(|_| bad())?, 0usize),
                Some(pos) => {
                    let head = term[..pos].trim_end_matches('*');
                    let coef = if head.is_empty() {
                        1
                    } else {
                        head.parse::<u32>().map_err(|_| bad())?
                    };
                    let tail = &term[pos + 1..];
                    let power = if tail.is_empty() {
                        1
                    } else if let Some(p) = tail.strip_prefix('^') {
                        p.parse::<usize>().map_err(|_| bad())?
                    } else {
                        return Err(bad());
                    };
                    (coef, power)
                }
            };
            if power > 64 {
                return Err(bad());
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] += coef;
        }
        Ok(Polynomial(coeffs))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, c) => write!(f, "{c}*x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}*x^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Default primitive polynomials, as (q, n, nonzero-term exponents with
/// their coefficients) tables.
const DEFAULT_POLYS: &[(u32, &[(u32, u32)])] = &[
    // q = 2: monic, listed as (power, coefficient)
    (2, &[(1, 1), (0, 1)]),
    (2, &[(2, 1), (1, 1), (0, 1)]),
    (2, &[(3, 1), (1, 1), (0, 1)]),
    (2, &[(4, 1), (1, 1), (0, 1)]),
    (2, &[(5, 1), (2, 1), (0, 1)]),
    (2, &[(6, 1), (1, 1), (0, 1)]),
    (2, &[(7, 1), (1, 1), (0, 1)]),
    (2, &[(8, 1), (4, 1), (3, 1), (2, 1), (0, 1)]),
    (2, &[(9, 1), (4, 1), (0, 1)]),
    (2, &[(10, 1), (3, 1), (0, 1)]),
    (2, &[(11, 1), (2, 1), (0, 1)]),
    (2, &[(12, 1), (6, 1), (4, 1), (1, 1), (0, 1)]),
    (2, &[(13, 1), (4, 1), (3, 1), (1, 1), (0, 1)]),
    (2, &[(14, 1), (10, 1), (6, 1), (1, 1), (0, 1)]),
    (2, &[(15, 1), (1, 1), (0, 1)]),
    (2, &[(16, 1), (12, 1), (3, 1), (1, 1), (0, 1)]),
    (3, &[(1, 1), (0, 1)]),
    (3, &[(2, 1), (1, 1), (0, 2)]),
    (3, &[(3, 1), (2, 2), (0, 1)]),
    (3, &[(4, 1), (3, 1), (0, 2)]),
    (3, &[(5, 1), (4, 2), (0, 1)]),
    (3, &[(6, 1), (5, 1), (0, 2)]),
    (3, &[(7, 1), (5, 2), (0, 1)]),
    (3, &[(8, 1), (5, 1), (0, 2)]),
];

/// Look up a shipped primitive polynomial for `F_{q^n}`.
pub fn default_primitive_poly(q: u32, n: u32) -> Result<FieldParams, FieldError> {
    DEFAULT_POLYS
        .iter()
        .find(|(pq, terms)| *pq == q && terms[0].0 == n)
        .map(|(_, terms)| {
            let mut poly = vec![0; n as usize + 1];
            for &(p, c) in terms.iter() {
                poly[p as usize] = c;
            }
            FieldParams { q, n, poly }
        })
        .ok_or(FieldError::NoDefaultAvailable { q, n })
}

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= q as u64 {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The field `F_{q^n}` with precomputed log / antilog tables.
///
/// Immutable after [`FieldCtx::new`]; share it freely between threads.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    params: FieldParams,
    order: u32,
    size: u32,
    exp_table: Vec<VecCode>,
    log_table: Vec<Exponent>,
    fingerprint: u64,
}

impl FieldCtx {
    /// Build the tables, checking that `x` has multiplicative order `q^n - 1`.
    pub fn new(params: FieldParams) -> Result<Self, FieldError> {
        params.validate_shape()?;
        let q = params.q;
        let n = params.n;
        let size = q.pow(n);
        let order = size - 1;

        let mut exp_table = Vec::with_capacity(order as usize);
        let mut log_table = vec![u32::MAX; size as usize];
        let one: VecCode = 1;
        let mut cur = one;
        for e in 0..order {
            if e > 0 && cur == one {
                return Err(FieldError::NotPrimitive { order_of_x: e as u64 });
            }
            if cur == 0 || log_table[cur as usize] != u32::MAX {
                // x is not invertible or we entered a cycle avoiding 1
                return Err(FieldError::NotPrimitive { order_of_x: 0 });
            }
            exp_table.push(cur);
            log_table[cur as usize] = e;
            cur = mul_by_x(cur, &params.poly, q, n);
        }
        if cur != one {
            return Err(FieldError::NotPrimitive { order_of_x: 0 });
        }

        let mut h = DefaultHasher::new();
        params.hash(&mut h);
        let fingerprint = h.finish();

        Ok(FieldCtx {
            params,
            order,
            size,
            exp_table,
            log_table,
            fingerprint,
        })
    }

    /// Convenience: `F_{q^n}` under the shipped default polynomial.
    pub fn with_default(q: u32, n: u32) -> Result<Self, FieldError> {
        Self::new(default_primitive_poly(q, n)?)
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn q(&self) -> u32 {
        self.params.q
    }

    pub fn n(&self) -> u32 {
        self.params.n
    }

    /// Order of the multiplicative group, `q^n - 1`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Number of vectors, `q^n`.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Identifies the field (parameters and polynomial) for mixing checks.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    #[inline]
    pub fn exp_code(&self, e: Exponent) -> VecCode {
        self.exp_table[e as usize]
    }

    #[inline]
    pub fn log_code(&self, v: VecCode) -> Exponent {
        self.log_table[v as usize]
    }

    pub fn checked_exp_code(&self, e: Exponent) -> Result<VecCode, FieldError> {
        if e >= self.order {
            return Err(FieldError::ExponentOutOfRange { exponent: e as u64, order: self.order });
        }
        Ok(self.exp_code(e))
    }

    /// Coordinates of `α^e` in the power basis.
    pub fn exp_to_vec(&self, e: Exponent) -> Result<Vec<u32>, FieldError> {
        let code = self.checked_exp_code(e)?;
        Ok(self.code_to_coords(code))
    }

    pub fn vec_to_exp(&self, v: &[u32]) -> Result<Exponent, FieldError> {
        if v.len() != self.params.n as usize {
            return Err(FieldError::WrongDegree {
                expected: self.params.n,
                found: v.len() as u32,
            });
        }
        let code = self.coords_to_code(v)?;
        if code == 0 {
            return Err(FieldError::ZeroVectorHasNoLog);
        }
        Ok(self.log_code(code))
    }

    pub fn code_to_coords(&self, mut code: VecCode) -> Vec<u32> {
        let q = self.params.q;
        (0..self.params.n)
            .map(|_| {
                let d = code % q;
                code /= q;
                d
            })
            .collect()
    }

    pub fn coords_to_code(&self, v: &[u32]) -> Result<VecCode, FieldError> {
        let q = self.params.q;
        let mut code = 0u32;
        for &c in v.iter().rev() {
            if c >= q {
                return Err(FieldError::CoefficientOutOfRange { coeff: c, q });
            }
            code = code * q + c;
        }
        Ok(code)
    }

    /// Coordinate `i` of a packed vector.
    #[inline]
    pub fn digit(&self, code: VecCode, i: u32) -> u32 {
        if self.params.q == 2 {
            (code >> i) & 1
        } else {
            (code / self.params.q.pow(i)) % self.params.q
        }
    }

    /// Vector addition.
    #[inline]
    pub fn add(&self, a: VecCode, b: VecCode) -> VecCode {
        let q = self.params.q;
        if q == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a != 0 || b != 0 {
            out += ((a % q + b % q) % q) * place;
            a /= q;
            b /= q;
            place *= q;
        }
        out
    }

    /// Scalar multiplication by `c ∈ F_q`.
    #[inline]
    pub fn scale(&self, a: VecCode, c: u32) -> VecCode {
        let q = self.params.q;
        let c = c % q;
        if c == 1 {
            return a;
        }
        if c == 0 {
            return 0;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a != 0 {
            out += ((a % q) * c % q) * place;
            a /= q;
            place *= q;
        }
        out
    }

    /// Field product of two vectors via the log tables.
    pub fn mul(&self, a: VecCode, b: VecCode) -> VecCode {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log_code(a) as u64 + self.log_code(b) as u64) % self.order as u64;
        self.exp_code(e as u32)
    }
}

/// One step `v ↦ x·v mod poly` on packed coordinates.
fn mul_by_x(v: VecCode, poly: &[u32], q: u32, n: u32) -> VecCode {
    if q == 2 {
        let top = (v >> (n - 1)) & 1;
        let mut out = (v << 1) & ((1u32 << n) - 1);
        if top == 1 {
            let mut mask = 0;
            for (i, &c) in poly[..n as usize].iter().enumerate() {
                mask |= c << i;
            }
            out ^= mask;
        }
        return out;
    }
    let mut digits = vec![0u32; n as usize + 1];
    let mut code = v;
    for d in digits.iter_mut().skip(1) {
        *d = code % q;
        code /= q;
    }
    let top = digits[n as usize];
    let mut out = 0;
    for i in (0..n as usize).rev() {
        let c = (digits[i] + (q - (top * poly[i]) % q)) % q;
        out = out * q + c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // Multiply polynomials over F_q and reduce modulo `poly`, independent of
    // the tables.
    fn polymul_mod(a: &[u32], b: &[u32], poly: &[u32], q: u32) -> Vec<u32> {
        let n = poly.len() - 1;
        let mut prod = vec![0u32; 2 * n];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % q;
            }
        }
        for deg in (n..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for i in 0..=n {
                let sub = c * poly[i] % q;
                prod[deg - n + i] = (prod[deg - n + i] + q - sub) % q;
            }
        }
        prod.truncate(n);
        prod
    }

    fn order_of_x(poly: &[u32], q: u32) -> u64 {
        let n = poly.len() - 1;
        let mut x = vec![0u32; n];
        if n == 1 {
            x[0] = (q - poly[0]) % q;
        } else {
            x[1] = 1;
        }
        let one = {
            let mut v = vec![0u32; n];
            v[0] = 1;
            v
        };
        let mut cur = x.clone();
        for k in 1..=(q as u64).pow(n as u32) {
            if cur == one {
                return k;
            }
            cur = polymul_mod(&cur, &x, poly, q);
        }
        0
    }

    #[test]
    fn default_octic_is_primitive() {
        let p = FieldParams::parse(2, "x^8+x^4+x^3+x^2+1").unwrap();
        let ctx = FieldCtx::new(p).unwrap();
        assert_eq!(ctx.order(), 255);
        assert_eq!(default_primitive_poly(2, 8).unwrap().poly, vec![1, 0, 1, 1, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn degenerate_extension() {
        let ctx = FieldCtx::new(FieldParams::new(2, 1, vec![1, 1])).unwrap();
        assert_eq!(ctx.order(), 1);
        assert_eq!(ctx.exp_to_vec(0).unwrap(), vec![1]);
        assert_eq!(default_primitive_poly(2, 1).unwrap().poly, vec![1, 1]);
    }

    #[test]
    fn primitivity_matches_direct_order() {
        assert_eq!(order_of_x(&[1, 1, 0, 0, 1], 2), 15);
        assert_eq!(order_of_x(&[1, 1, 1, 1, 1], 2), 5);
        assert!(FieldCtx::new(FieldParams::new(2, 4, vec![1, 1, 0, 0, 1])).is_ok());
        match FieldCtx::new(FieldParams::new(2, 4, vec![1, 1, 1, 1, 1])) {
            Err(FieldError::NotPrimitive { order_of_x }) => assert_eq!(order_of_x, 5),
            other => panic!("expected NotPrimitive, got {other:?}"),
        }
        // reducible: x^4 + x^2 + 1 = (x^2+x+1)^2
        assert!(matches!(
            FieldCtx::new(FieldParams::new(2, 4, vec![1, 0, 1, 0, 1])),
            Err(FieldError::NotPrimitive { .. })
        ));
        // x divides the polynomial
        assert!(matches!(
            FieldCtx::new(FieldParams::new(2, 3, vec![0, 1, 0, 1])),
            Err(FieldError::NotPrimitive { .. })
        ));
    }

    #[test]
    fn sextic_candidates_agree_with_oracle() {
        // every monic sextic over F_2: table check vs direct order of x
        let mut primitive = 0;
        for tail in 0u32..64 {
            let mut poly: Vec<u32> = (0..6).map(|i| (tail >> i) & 1).collect();
            poly.push(1);
            let oracle = order_of_x(&poly, 2) == 63;
            let built = FieldCtx::new(FieldParams::new(2, 6, poly)).is_ok();
            assert_eq!(oracle, built, "tail {tail:#b}");
            primitive += oracle as u32;
        }
        // phi(63)/6
        assert_eq!(primitive, 6);
        let p = default_primitive_poly(2, 6).unwrap();
        assert_eq!(order_of_x(&p.poly, 2), 63);
    }

    #[test]
    fn shipped_table_is_primitive() {
        for n in 1..=16 {
            let p = default_primitive_poly(2, n).unwrap();
            FieldCtx::new(p).unwrap();
        }
        for n in 1..=8 {
            let p = default_primitive_poly(3, n).unwrap();
            assert_eq!(order_of_x(&p.poly, 3), 3u64.pow(n) - 1, "q=3 n={n}");
            FieldCtx::new(p).unwrap();
        }
        assert!(matches!(
            default_primitive_poly(5, 3),
            Err(FieldError::NoDefaultAvailable { .. })
        ));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            FieldCtx::new(FieldParams::new(4, 2, vec![1, 1, 1])),
            Err(FieldError::NotPrime(4))
        ));
        assert!(matches!(
            FieldCtx::new(FieldParams::new(2, 3, vec![1, 1, 1])),
            Err(FieldError::WrongDegree { .. })
        ));
        assert!(matches!(
            FieldCtx::new(FieldParams::new(3, 2, vec![2, 1, 2])),
            Err(FieldError::NotMonic)
        ));
    }

    #[test]
    fn small_exponents() {
        let ctx = FieldCtx::new(FieldParams::new(2, 4, vec![1, 1, 0, 0, 1])).unwrap();
        assert_eq!(ctx.exp_to_vec(0).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(ctx.exp_to_vec(1).unwrap(), vec![0, 1, 0, 0]);
        assert_eq!(ctx.exp_to_vec(4).unwrap(), vec![1, 1, 0, 0]);
        assert_eq!(ctx.vec_to_exp(&[1, 1, 0, 0]).unwrap(), 4);
        assert_eq!(ctx.vec_to_exp(&[1, 0, 0, 0]).unwrap(), 0);
        assert!(matches!(ctx.vec_to_exp(&[0, 0, 0, 0]), Err(FieldError::ZeroVectorHasNoLog)));
        assert!(matches!(ctx.exp_to_vec(15), Err(FieldError::ExponentOutOfRange { .. })));
    }

    #[test]
    fn round_trip_all_exponents() {
        for (q, n) in [(2, 8), (3, 4), (2, 9)] {
            let ctx = FieldCtx::with_default(q, n).unwrap();
            for e in 0..ctx.order() {
                let v = ctx.exp_to_vec(e).unwrap();
                assert_eq!(ctx.vec_to_exp(&v).unwrap(), e);
            }
        }
    }

    #[test]
    fn homomorphism_against_polynomial_product() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for (q, n) in [(2, 8), (3, 5), (2, 11)] {
            let ctx = FieldCtx::with_default(q, n).unwrap();
            let poly = ctx.params().poly.clone();
            for _ in 0..1000 {
                let a = rng.gen_range(0..ctx.order());
                let b = rng.gen_range(0..ctx.order());
                let prod = polymul_mod(
                    &ctx.exp_to_vec(a).unwrap(),
                    &ctx.exp_to_vec(b).unwrap(),
                    &poly,
                    q,
                );
                let sum = ((a as u64 + b as u64) % ctx.order() as u64) as u32;
                assert_eq!(ctx.exp_to_vec(sum).unwrap(), prod);
            }
        }
    }

    #[test]
    fn subfields_are_additively_closed() {
        for (q, n) in [(2u32, 8u32), (2, 6), (3, 4)] {
            let ctx = FieldCtx::with_default(q, n).unwrap();
            for t in (1..=n).filter(|t| n % t == 0) {
                let step = ctx.order() / (q.pow(t) - 1);
                let mut members: Vec<VecCode> =
                    (0..ctx.order()).step_by(step as usize).map(|e| ctx.exp_code(e)).collect();
                members.push(0);
                let set: std::collections::HashSet<_> = members.iter().copied().collect();
                assert_eq!(set.len() as u32, q.pow(t));
                for &a in &members {
                    for &b in &members {
                        assert!(set.contains(&ctx.add(a, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn polynomial_text_forms() {
        let a = FieldParams::parse(2, "x^8+x^4+x^3+x^2+1").unwrap();
        let b = FieldParams::parse(2, "1,0,1,1,1,0,0,0,1").unwrap();
        let c = FieldParams::parse(2, "1 + x^2 + x^3 + x^4 + x^8").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.poly_string(), "x^8+x^4+x^3+x^2+1");
        let t = FieldParams::parse(3, "x^2+x+2").unwrap();
        assert_eq!(t.poly, vec![2, 1, 1]);
        let u = FieldParams::parse(3, "x^3+2*x^2+1").unwrap();
        assert_eq!(u.poly, vec![1, 0, 2, 1]);
        assert_eq!(u.poly_string(), "x^3+2*x^2+1");
        assert!(FieldParams::parse(2, "x^^2").is_err());
        assert!(FieldParams::parse(2, "").is_err());
    }

    #[test]
    fn odd_vector_ops() {
        let ctx = FieldCtx::with_default(3, 4).unwrap();
        let a = ctx.coords_to_code(&[1, 2, 0, 1]).unwrap();
        let b = ctx.coords_to_code(&[2, 2, 1, 0]).unwrap();
        assert_eq!(ctx.code_to_coords(ctx.add(a, b)), vec![0, 1, 1, 1]);
        assert_eq!(ctx.code_to_coords(ctx.scale(a, 2)), vec![2, 1, 0, 2]);
        assert_eq!(ctx.digit(a, 1), 2);
    }
}
