//! Exact arithmetic in GF(p^r).
//!
//! Elements are polynomials of degree < r over Z/pZ, reduced by a fixed
//! monic irreducible modulus. Every element also has an integer index
//! `sum coeffs[i] * p^i`, which is used as the array key for the dense
//! discrete-log tables that drive the cyclotomic counts.

use crate::error::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const MAX_Q: u64 = 1 << 31;

/// A concrete presentation of GF(p^r): characteristic, degree, and the
/// monic irreducible modulus (coefficients for degrees 0..r-1; the
/// leading coefficient is implicitly 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    r: u32,
    q: u64,
    modulus: Vec<u64>,
}

/// An element of a [`FieldSpec`], in polynomial representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

/// Complete log/pow tables for one primitive element.
///
/// `pow[k]` is the index of alpha^k for k in 0..q-1, and `log` inverts it
/// on nonzero indices. `pow[0]` is always the index of the field identity.
#[derive(Debug, Clone)]
pub struct DlogTable {
    alpha: FieldElement,
    alpha_index: u64,
    q: u64,
    pow: Vec<u64>,
    log: Vec<u64>,
}

impl DlogTable {
    pub fn alpha(&self) -> &FieldElement {
        &self.alpha
    }

    pub fn alpha_index(&self) -> u64 {
        self.alpha_index
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Index of alpha^k.
    pub fn pow(&self, k: u64) -> u64 {
        self.pow[(k % (self.q - 1)) as usize]
    }

    /// Discrete log of a nonzero element index.
    pub fn log(&self, index: u64) -> Option<u64> {
        match self.log.get(index as usize) {
            Some(&v) if v != u64::MAX => Some(v),
            _ => None,
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Builds GF(p^r) with the lexicographically smallest irreducible monic
/// modulus of degree r, coefficients compared low-degree-first. For r = 1
/// the modulus is the zero polynomial shifted by x (elements are plain
/// residues mod p).
pub fn build_field(p: u64, r: u32) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::FieldTooLarge { p, r });
    }
    let mut q: u64 = 1;
    for _ in 0..r {
        q = q
            .checked_mul(p)
            .filter(|&q| q <= MAX_Q)
            .ok_or(Error::FieldTooLarge { p, r })?;
    }
    if r == 1 {
        return Ok(FieldSpec {
            p,
            r,
            q,
            modulus: vec![0],
        });
    }
    // Low-degree-first lexicographic scan: read the counter's digits with
    // the degree-0 coefficient most significant.
    let rr = r as usize;
    let mut coeffs = vec![0u64; rr];
    loop {
        if irreducible(p, r, &coeffs) {
            return Ok(FieldSpec {
                p,
                r,
                q,
                modulus: coeffs,
            });
        }
        // increment at the highest degree, carrying toward degree 0
        let mut i = rr;
        loop {
            if i == 0 {
                return Err(Error::Internal(format!(
                    "no irreducible monic polynomial of degree {r} over GF({p})"
                )));
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

/// Irreducibility of the monic polynomial x^r + sum coeffs[i] x^i.
/// Degree 2 and 3 reduce to root absence; higher degrees use
/// gcd(x^(p^k) - x, f) = 1 for k <= r/2.
fn irreducible(p: u64, r: u32, coeffs: &[u64]) -> bool {
    if coeffs[0] == 0 {
        return false; // root at 0
    }
    if r <= 3 {
        // degree 2 or 3: reducible iff there is a root in GF(p)
        for x in 0..p {
            let mut val = 1u64;
            for _ in 0..r {
                val = val * x % p;
            }
            let mut xp = 1u64;
            for &c in coeffs {
                val = (val + c * xp) % p;
                xp = xp * x % p;
            }
            if val == 0 {
                return false;
            }
        }
        return true;
    }
    let f = monic(coeffs);
    // x^(p^k) mod f, built by repeated Frobenius powering
    let mut frob = vec![0u64, 1]; // the polynomial x
    for _ in 1..=r / 2 {
        frob = poly_pow_mod(&frob, p, &f, p);
        let mut diff = frob.clone();
        // frob - x
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = poly_gcd(&f, &diff, p);
        if poly_deg(&g) > 0 {
            return false;
        }
    }
    true
}

fn monic(coeffs: &[u64]) -> Vec<u64> {
    let mut f = coeffs.to_vec();
    f.push(1);
    f
}

fn poly_deg(a: &[u64]) -> usize {
    a.iter().rposition(|&c| c != 0).unwrap_or(0)
}

fn trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&mut prod, f, p);
    prod
}

fn poly_rem(a: &mut Vec<u64>, f: &[u64], p: u64) {
    let df = poly_deg(f);
    let lead_inv = mod_inv(f[df], p);
    while poly_deg(a) >= df && !(a.len() == 1 && a[0] == 0) {
        let da = poly_deg(a);
        if da < df {
            break;
        }
        let factor = a[da] * lead_inv % p;
        if factor != 0 {
            for (k, &fk) in f.iter().enumerate().take(df + 1) {
                let idx = da - df + k;
                a[idx] = (a[idx] + p - factor * fk % p) % p;
            }
        }
        trim(a);
        if poly_deg(a) < df {
            break;
        }
    }
    trim(a);
}

fn poly_pow_mod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = base.to_vec();
    poly_rem(&mut b, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul_mod(&result, &b, f, p);
        }
        b = poly_mul_mod(&b, &b, f, p);
        e >>= 1;
    }
    result
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        poly_rem(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p prime; Fermat
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.r as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut coeffs = vec![0; self.r as usize];
        coeffs[0] = 1;
        FieldElement { coeffs }
    }

    /// Validates and wraps raw coefficients.
    pub fn element(&self, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.r as usize {
            return Err(Error::BadElementShape {
                got: coeffs.len(),
                expected: self.r as usize,
            });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::CoefficientRange {
                value: c,
                p: self.p,
            });
        }
        Ok(FieldElement { coeffs })
    }

    /// Integer encoding sum coeffs[i] * p^i.
    pub fn index(&self, e: &FieldElement) -> u64 {
        let mut idx = 0u64;
        for &c in e.coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    pub fn from_index(&self, mut idx: u64) -> FieldElement {
        let mut coeffs = vec![0u64; self.r as usize];
        for c in coeffs.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        coeffs.into()
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    /// Coefficient-wise addition on integer indices (no carries across
    /// digits; field addition is componentwise).
    pub fn index_add(&self, a: u64, b: u64) -> u64 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.r {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn index_neg(&self, a: u64) -> u64 {
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.r {
            let d = a % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    /// Polynomial product reduced by the modulus.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let r = self.r as usize;
        if r == 1 {
            return FieldElement {
                coeffs: vec![a.coeffs[0] * b.coeffs[0] % self.p],
            };
        }
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % self.p;
            }
        }
        // x^r = -modulus, applied from the top degree down
        for d in (r..2 * r - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (k, &mk) in self.modulus.iter().enumerate() {
                let idx = d - r + k;
                prod[idx] = (prod[idx] + c * (self.p - mk) % self.p) % self.p;
            }
        }
        prod.truncate(r);
        FieldElement { coeffs: prod }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn mul_order(&self, a: &FieldElement) -> u64 {
        let group = self.q - 1;
        let mut order = group;
        for f in prime_factors(group) {
            while order.is_multiple_of(f) && self.pow(a, order / f) == self.one() {
                order /= f;
            }
        }
        order
    }

    /// All generators of the multiplicative group, ascending by integer
    /// encoding. The count is Euler's totient of q - 1.
    pub fn primitive_elements(&self) -> Vec<FieldElement> {
        let mut out = Vec::new();
        for idx in 1..self.q {
            let e = self.from_index(idx);
            if self.mul_order(&e) == self.q - 1 {
                out.push(e);
            }
        }
        out
    }

    /// Smallest primitive element by integer encoding.
    pub fn smallest_primitive(&self) -> FieldElement {
        for idx in 1..self.q {
            let e = self.from_index(idx);
            if self.mul_order(&e) == self.q - 1 {
                return e;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    /// Full log/pow tables for a primitive alpha. O(q) memory.
    pub fn dlog_table(&self, alpha: &FieldElement) -> Result<DlogTable> {
        let alpha_index = self.index(alpha);
        if alpha_index == 0 || self.mul_order(alpha) != self.q - 1 {
            return Err(Error::NotPrimitive(alpha_index));
        }
        let n = (self.q - 1) as usize;
        let mut pow = vec![0u64; n];
        let mut log = vec![u64::MAX; self.q as usize];
        let mut acc = self.one();
        for (k, slot) in pow.iter_mut().enumerate() {
            let idx = self.index(&acc);
            *slot = idx;
            log[idx as usize] = k as u64;
            acc = self.mul(&acc, alpha);
        }
        Ok(DlogTable {
            alpha: alpha.clone(),
            alpha_index,
            q: self.q,
            pow,
            log,
        })
    }
}

impl From<Vec<u64>> for FieldElement {
    fn from(coeffs: Vec<u64>) -> Self {
        FieldElement { coeffs }
    }
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

pub fn euler_totient(n: u64) -> u64 {
    let mut result = n;
    for f in prime_factors(n) {
        result = result / f * (f - 1);
    }
    result
}

/// If q is a prime power p^r, returns (p, r).
pub fn prime_power_decompose(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let fs = prime_factors(q);
    if fs.len() != 1 {
        return None;
    }
    let p = fs[0];
    let mut r = 0u32;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            modulus: &'a [u64],
            p: u64,
            r: u32,
        }
        Wire {
            modulus: &self.modulus,
            p: self.p,
            r: self.r,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            modulus: Vec<u64>,
            p: u64,
            r: u32,
        }
        let w = Wire::deserialize(deserializer)?;
        let built = build_field(w.p, w.r).map_err(D::Error::custom)?;
        if built.modulus != w.modulus {
            // a non-canonical modulus is accepted if it is irreducible
            if w.modulus.len() != w.r as usize || w.r < 2 || !irreducible(w.p, w.r, &w.modulus) {
                return Err(D::Error::custom(
                    "modulus is not irreducible of the stated degree",
                ));
            }
            return Ok(FieldSpec {
                p: w.p,
                r: w.r,
                q: built.q,
                modulus: w.modulus,
            });
        }
        Ok(built)
    }
}
