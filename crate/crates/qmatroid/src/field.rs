//! Finite-field arithmetic for GF(p^m).
//!
//! Elements are stored as integer indices: the element with coefficient
//! vector `(c_0, c_1, ..., c_{m-1})` (constant term first, in terms of the
//! residue class `w` of `x` modulo the chosen modulus) has index
//! `sum c_i * p^i`. Index 0 is zero, index 1 is one, and for m >= 2 index
//! `p` is `w` itself.
//!
//! Fields of order up to 2^16 precompute log/antilog tables over a fixed
//! primitive element, so multiplication and inversion are table lookups.
//! Larger fields fall back to polynomial arithmetic on the fly.

use crate::{Error, Result};
use std::sync::Arc;

/// Largest field order for which log/antilog tables are built.
pub const TABLE_LIMIT: u64 = 1 << 16;

/// A concrete finite field GF(p^m) with a fixed modulus.
///
/// Cloning is cheap (the table data is shared).
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

struct FieldInner {
    p: u64,
    m: u32,
    /// Monic modulus, constant term first, length m+1. For m = 1 this is a
    /// placeholder (arithmetic is plain arithmetic mod p).
    modulus: Vec<u64>,
    order: u64,
    tables: Option<Tables>,
}

struct Tables {
    /// `exp[i]` is generator^i for i in 0..order-1.
    exp: Vec<u32>,
    /// `log[a]` is the discrete log of the element with index `a` (a != 0).
    log: Vec<u32>,
    generator: u64,
}

/// A field element, as an integer index into the field (see module docs).
pub type FieldElement = u64;

impl std::fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({}^{})", self.inner.p, self.inner.m)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p
            && self.inner.m == other.inner.m
            && self.inner.modulus == other.inner.modulus
    }
}
impl Eq for FieldSpec {}

/// Builds GF(p^m). With `modulus: None` a built-in default modulus is used;
/// an explicit modulus must be monic of degree m (constant term first) and
/// irreducible over GF(p).
pub fn create_field(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<FieldSpec> {
    FieldSpec::new(p, m, modulus)
}

impl FieldSpec {
    pub fn new(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree m must be >= 1".into()));
        }
        let order = checked_pow(p, m)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{m} does not fit in 64 bits")))?;
        let modulus: Vec<u64> = match modulus {
            Some(coeffs) => {
                if coeffs.len() != m as usize + 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus must have degree {m} (got {} coefficients, expected {})",
                        coeffs.len(),
                        m + 1
                    )));
                }
                if coeffs.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidField("modulus coefficients must lie in 0..p".into()));
                }
                if coeffs[m as usize] != 1 {
                    return Err(Error::InvalidField("modulus must be monic".into()));
                }
                coeffs.to_vec()
            }
            None => default_modulus(p, m)?,
        };
        if m >= 2 {
            check_irreducible(p, &modulus)?;
        }
        let tables = if order <= TABLE_LIMIT { Some(build_tables(p, m, &modulus, order)) } else { None };
        Ok(FieldSpec { inner: Arc::new(FieldInner { p, m, modulus, order, tables }) })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }
    pub fn m(&self) -> u32 {
        self.inner.m
    }
    pub fn order(&self) -> u64 {
        self.inner.order
    }
    /// Modulus coefficients, constant term first (length m+1).
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElement {
        0
    }
    pub fn one(&self) -> FieldElement {
        1
    }

    /// The residue class of x, i.e. the element usually written `w`.
    /// Only meaningful for m >= 2.
    pub fn gen_w(&self) -> FieldElement {
        debug_assert!(self.inner.m >= 2);
        self.inner.p
    }

    /// Embeds a prime-subfield value 0..p into the field.
    pub fn embed_int(&self, v: u64) -> FieldElement {
        debug_assert!(v < self.inner.p);
        v
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.inner.p;
        if p == 2 {
            return a ^ b;
        }
        digitwise(p, self.inner.m, a, b, |x, y| (x + y) % p)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.inner.p;
        if p == 2 {
            return a;
        }
        digitwise(p, self.inner.m, a, 0, |x, _| (p - x) % p)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.inner.tables {
            Some(t) => {
                let n = self.inner.order - 1;
                let s = t.log[a as usize] as u64 + t.log[b as usize] as u64;
                let s = if s >= n { s - n } else { s };
                t.exp[s as usize] as u64
            }
            None => poly_mulmod_idx(self.inner.p, &self.inner.modulus, a, b),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a == 0 {
            return Err(Error::DivisionByZero { p: self.inner.p, m: self.inner.m });
        }
        match &self.inner.tables {
            Some(t) => {
                let n = self.inner.order - 1;
                let l = t.log[a as usize] as u64;
                let s = if l == 0 { 0 } else { n - l };
                Ok(t.exp[s as usize] as u64)
            }
            // a^(order-2) = a^-1 in the multiplicative group.
            None => Ok(self.pow(a, self.inner.order - 2)),
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e by square-and-multiply (a^0 = 1, including 0^0 = 1).
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.inner.tables {
            let n = self.inner.order - 1;
            let l = (t.log[a as usize] as u128 * e as u128 % n as u128) as u64;
            return t.exp[l as usize] as u64;
        }
        let mut base = a;
        let mut e = e;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Discrete log of `a` base `w` (the residue of x), when `w` generates
    /// the multiplicative group. Used to render elements as `w^k` strings.
    pub fn log_w(&self, a: FieldElement) -> Option<u64> {
        let t = self.inner.tables.as_ref()?;
        if a == 0 {
            return None;
        }
        let n = self.inner.order - 1;
        let lw = t.log[self.inner.p as usize] as u64;
        // log_w(a) = log_g(a) / log_g(w) mod n, valid when gcd(lw, n) = 1.
        let inv = mod_inverse(lw, n)?;
        Some(((t.log[a as usize] as u128 * inv as u128) % n as u128) as u64)
    }

    /// Parses an element literal: "0", "1", decimal integers < p, "w", or
    /// "w<k>" meaning w^k.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('w') {
            if self.inner.m < 2 {
                return Err(Error::InvalidField(format!("'{s}' needs an extension field")));
            }
            let e: u64 = if rest.is_empty() {
                1
            } else {
                let rest = rest.strip_prefix('^').unwrap_or(rest);
                rest.parse().map_err(|_| Error::InvalidField(format!("bad element literal '{s}'")))?
            };
            return Ok(self.pow(self.gen_w(), e));
        }
        let v: u64 =
            s.parse().map_err(|_| Error::InvalidField(format!("bad element literal '{s}'")))?;
        if v >= self.inner.p {
            return Err(Error::InvalidField(format!(
                "integer literal {v} is not in the prime subfield GF({})",
                self.inner.p
            )));
        }
        Ok(v)
    }

    /// Renders an element as "0", "1", or "w<k>"; falls back to the raw
    /// index as "#<idx>" when no discrete log is available.
    pub fn render_element(&self, a: FieldElement) -> String {
        if a == 0 {
            return "0".into();
        }
        if a == 1 {
            return "1".into();
        }
        if a < self.inner.p {
            return a.to_string();
        }
        match self.log_w(a) {
            Some(k) => format!("w{k}"),
            None => format!("#{a}"),
        }
    }
}

fn checked_pow(p: u64, m: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..m {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

fn digitwise(p: u64, m: u32, a: u64, b: u64, f: impl Fn(u64, u64) -> u64) -> u64 {
    let mut a = a;
    let mut b = b;
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..m {
        out += f(a % p, b % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    // Extended Euclid on (a, n).
    let (mut r0, mut r1) = (n as i128, a as i128 % n as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n as i128) as u64)
}

// ---------------------------------------------------------------------------
// Polynomial arithmetic over GF(p), used for construction-time checks and as
// the multiplication fallback when the field is too large for tables.
// Polynomials are coefficient vectors, constant term first.
// ---------------------------------------------------------------------------

fn idx_to_poly(p: u64, mut a: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while a > 0 {
        out.push(a % p);
        a /= p;
    }
    out
}

fn poly_to_idx(p: u64, poly: &[u64]) -> u64 {
    let mut out = 0;
    for &c in poly.iter().rev() {
        out = out * p + c;
    }
    out
}

fn poly_trim(poly: &mut Vec<u64>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ca * cb) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `f`.
fn poly_rem(p: u64, a: &[u64], f: &[u64]) -> Vec<u64> {
    let df = f.len() - 1;
    let mut r = a.to_vec();
    poly_trim(&mut r);
    while r.len() > df {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - df;
        if lead != 0 {
            for (i, &fc) in f.iter().enumerate() {
                let idx = i + shift;
                r[idx] = (r[idx] + (p - lead % p) * fc) % p;
            }
        }
        // f is monic, so the leading coefficient cancels and trim shortens r.
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(p: u64, a: &[u64], b: &[u64], f: &[u64]) -> Vec<u64> {
    poly_rem(p, &poly_mul(p, a, b), f)
}

fn poly_mulmod_idx(p: u64, f: &[u64], a: u64, b: u64) -> u64 {
    let pa = idx_to_poly(p, a);
    let pb = idx_to_poly(p, b);
    poly_to_idx(p, &poly_mulmod(p, &pa, &pb, f))
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        // Make b monic so poly_rem applies.
        let lead = *b.last().unwrap();
        if lead != 1 {
            let inv = mod_inverse(lead, p).expect("p prime, nonzero lead");
            for c in b.iter_mut() {
                *c = *c * inv % p;
            }
        }
        let r = poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// x^(p^k) mod f, by k successive p-th powers of x.
fn frobenius_power(p: u64, f: &[u64], k: u32) -> Vec<u64> {
    let mut t = vec![0, 1]; // x
    for _ in 0..k {
        // t <- t^p mod f, by square-and-multiply on the exponent p.
        let mut acc = vec![1];
        let mut base = t.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(p, &acc, &base, f);
            }
            base = poly_mulmod(p, &base, &base, f);
            e >>= 1;
        }
        t = acc;
    }
    t
}

/// Deterministic irreducibility test for a monic modulus of degree m >= 2:
/// f is irreducible over GF(p) iff x^(p^m) = x mod f and, for every prime
/// divisor l of m, gcd(x^(p^(m/l)) - x, f) = 1.
fn check_irreducible(p: u64, f: &[u64]) -> Result<()> {
    let m = (f.len() - 1) as u32;
    let x = vec![0u64, 1];
    let xm = frobenius_power(p, f, m);
    if xm != x {
        return Err(Error::Reducible { p, reason: format!("x^{p}^{m} != x (mod f)") });
    }
    for l in prime_divisors(m as u64) {
        let k = m / l as u32;
        let mut diff = frobenius_power(p, f, k);
        // diff <- diff - x
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        poly_trim(&mut diff);
        let g = poly_gcd(p, &diff, f);
        if g.len() > 1 {
            return Err(Error::Reducible {
                p,
                reason: format!("gcd(x^{p}^{k} - x, f) has degree {}", g.len() - 1),
            });
        }
    }
    Ok(())
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---------------------------------------------------------------------------
// Log/antilog tables
// ---------------------------------------------------------------------------

fn build_tables(p: u64, _m: u32, modulus: &[u64], order: u64) -> Tables {
    let n = order - 1;
    if n == 1 {
        // GF(2): the multiplicative group is trivial.
        return Tables { exp: vec![1], log: vec![0, 0], generator: 1 };
    }
    // Find a generator of the multiplicative group; try w = x first since
    // the bundled moduli are primitive.
    let mut generator = 0;
    let mut exp = vec![0u32; n as usize];
    'candidates: for g in p..order {
        let mut acc: u64 = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = acc as u32;
            acc = poly_mulmod_idx(p, modulus, acc, g);
            if acc == 1 && (i as u64) < n - 1 {
                continue 'candidates; // order of g divides i+1 < n
            }
        }
        if acc == 1 {
            generator = g;
            break;
        }
    }
    // Fall back to small candidates below p (possible only for m = 1).
    if generator == 0 {
        'low: for g in 2..p.min(order) {
            let mut acc: u64 = 1;
            for (i, slot) in exp.iter_mut().enumerate() {
                *slot = acc as u32;
                acc = acc * g % p;
                if acc == 1 && (i as u64) < n - 1 {
                    continue 'low;
                }
            }
            if acc == 1 {
                generator = g;
                break;
            }
        }
    }
    assert!(generator != 0 || n == 1, "multiplicative group must be cyclic");
    let mut log = vec![0u32; order as usize];
    for (i, &e) in exp.iter().enumerate() {
        log[e as usize] = i as u32;
    }
    Tables { exp, log, generator }
}

#[allow(dead_code)]
fn table_generator(f: &FieldSpec) -> Option<u64> {
    f.inner.tables.as_ref().map(|t| t.generator)
}

// ---------------------------------------------------------------------------
// Default moduli
// ---------------------------------------------------------------------------

/// Built-in moduli (constant term first). These are the Conway polynomials
/// for the small common cases, together with primitive polynomials for the
/// remaining degrees; the root of each listed polynomial with m >= 2
/// generates the multiplicative group.
fn default_modulus(p: u64, m: u32) -> Result<Vec<u64>> {
    let coeffs: Option<Vec<u64>> = match (p, m) {
        (_, 1) => Some(vec![0, 1]), // placeholder: arithmetic is mod p
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        (2, 5) => Some(vec![1, 0, 1, 0, 0, 1]),
        (2, 6) => Some(vec![1, 1, 0, 1, 1, 0, 1]),
        (2, 7) => Some(vec![1, 1, 0, 0, 0, 0, 0, 1]),
        (2, 8) => Some(vec![1, 0, 1, 1, 1, 0, 0, 0, 1]),
        (2, 9) => Some(vec![1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
        (2, 10) => Some(vec![1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
        (2, 11) => Some(vec![1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
        (2, 12) => Some(vec![1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1]),
        (2, 13) => Some(vec![1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
        (2, 14) => Some(vec![1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1]),
        (2, 15) => Some(vec![1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
        (2, 16) => Some(vec![1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
        (2, 17) => Some(vec![1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
        (3, 2) => Some(vec![2, 2, 1]),
        (3, 3) => Some(vec![1, 2, 0, 1]),
        (3, 4) => Some(vec![2, 0, 0, 2, 1]),
        (3, 5) => Some(vec![1, 2, 0, 0, 0, 1]),
        (5, 2) => Some(vec![2, 4, 1]),
        (5, 3) => Some(vec![3, 3, 0, 1]),
        (7, 2) => Some(vec![3, 6, 1]),
        _ => None,
    };
    coeffs.ok_or(Error::NoDefaultModulus { p, m })
}
