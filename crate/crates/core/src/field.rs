//! Exact arithmetic in GF(p^e).
//!
//! Elements are stored by their index in canonical order: the coefficient
//! vector `(c_0, …, c_{e-1})` of the polynomial representative maps to
//! `c_0 + c_1 p + … + c_{e-1} p^{e-1}`. Multiplication goes through
//! exp/log tables built from the first primitive element in that order;
//! the tables are private and every result is the same canonical index the
//! polynomial arithmetic would produce.
//!
//! Over GF(q²) (`e` even) the conjugation `x ↦ x^q` and the norm
//! `x ↦ x^{q+1}` give the Hermitian structure; the subfield GF(q) is the
//! fixed field of conjugation and its elements stay encoded in the big field.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const FIELD_CAP: u64 = 1 << 20;

/// Fields up to this order get a full addition table.
const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field order {p}^{e} exceeds the cap of {cap}")]
    CapExceeded { p: u64, e: u32, cap: u64 },
    #[error("extension degree must be at least 1")]
    BadExponent,
    #[error("modulus {0:?} is not a monic irreducible polynomial of the stated degree")]
    BadModulus(Vec<u64>),
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation needs an even extension degree (GF(q^2)), got e = {0}")]
    OddExtension(u32),
    #[error("no nonzero element with the requested norm property exists in this field")]
    NoSuchElement,
    #[error("zero has no norm preimage in the multiplicative group")]
    ZeroInput,
    #[error("element is not in the subfield GF(q)")]
    NotInSubfield,
    #[error("bad coefficient vector {0:?}")]
    BadCoefficients(Vec<u64>),
}

/// Identity tag shared by a field and all of its elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId(u64);

/// An element of some GF(p^e), tagged with the field it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    index: u32,
    field: FieldId,
}

impl FieldElement {
    /// Position in the canonical enumeration of the field.
    pub fn index(self) -> u32 {
        self.index
    }

    pub fn field_id(self) -> FieldId {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.index == 0
    }
}

struct FieldInner {
    p: u32,
    e: u32,
    size: u32,
    modulus: Vec<u64>,
    id: FieldId,
    /// `exp[i] = g^i` for `i < 2(size-1)` so products of logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    digit_pow: Vec<u32>,
}

/// A finite field GF(p^e) with a fixed monic irreducible modulus.
///
/// Cloning is cheap; the arithmetic tables are shared.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.0.p)
            .field("e", &self.0.e)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id && self.0.modulus == other.0.modulus && self.0.p == other.0.p
    }
}

impl Eq for FieldSpec {}

fn field_cache() -> &'static Mutex<HashMap<(u64, u32, Vec<u64>), FieldSpec>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32, Vec<u64>), FieldSpec>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Splits a prime power `q = p^e` into `(p, e)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = *prime_factors(q).first()?;
    let mut e = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn checked_order(p: u64, e: u32) -> Result<u64, FieldError> {
    let cap_err = FieldError::CapExceeded { p, e, cap: FIELD_CAP };
    let size = p.checked_pow(e).ok_or(cap_err.clone())?;
    if size > FIELD_CAP {
        return Err(cap_err);
    }
    Ok(size)
}

// Dense polynomials over GF(p), constant term first, no trailing zeros.
mod poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut result = 1;
        let mut base = a % p;
        let mut exp = p - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        result
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let factor = r[r.len() - 1] * lead_inv % p;
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - factor * c % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(a: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = rem(&[1], m, p);
        let mut base = rem(a, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                result = mul_mod(&result, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            exp >>= 1;
        }
        result
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }
}

/// Rabin's test: `f` (monic, degree `e`) is irreducible over GF(p) iff
/// `x^{p^e} ≡ x (mod f)` and `gcd(x^{p^{e/r}} - x, f) = 1` for every prime `r | e`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let e = f.len() - 1;
    if e == 1 {
        return true;
    }
    let x = vec![0, 1];
    // x^{p^j} mod f for j = 0..=e
    let mut frob = vec![poly::rem(&x, f, p)];
    for j in 1..=e {
        let next = poly::pow_mod(&frob[j - 1], p, f, p);
        frob.push(next);
    }
    if poly::sub(&frob[e], &x, p) != Vec::<u64>::new() {
        return false;
    }
    prime_factors(e as u64).into_iter().all(|r| {
        let j = e / r as usize;
        let g = poly::gcd(f, &poly::sub(&frob[j], &x, p), p);
        g.len() == 1
    })
}

impl FieldSpec {
    /// GF(p^e) with the lexicographically smallest monic irreducible modulus,
    /// coefficients compared constant term first.
    pub fn new(p: u64, e: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::BadExponent);
        }
        checked_order(p, e)?;
        let modulus = smallest_irreducible(p, e);
        Self::with_modulus(p, e, modulus)
    }

    /// GF(q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrime(q))?;
        Self::new(p, e)
    }

    /// GF(q²) for a prime power `q`.
    pub fn hermitian(q: u64) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrime(q))?;
        Self::new(p, 2 * e)
    }

    /// Builds the field from an explicit modulus (constant term first),
    /// checking that it is monic of degree `e` and irreducible.
    pub fn with_modulus(p: u64, e: u32, modulus: Vec<u64>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::BadExponent);
        }
        let size = checked_order(p, e)?;
        if modulus.len() != e as usize + 1
            || modulus[e as usize] != 1
            || modulus.iter().any(|&c| c >= p)
            || !is_irreducible(&modulus, p)
        {
            return Err(FieldError::BadModulus(modulus));
        }
        let key = (p, e, modulus.clone());
        if let Some(f) = field_cache().lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let spec = FieldSpec(Arc::new(build_tables(p as u32, e, size as u32, modulus)));
        field_cache().lock().unwrap().insert(key, spec.clone());
        Ok(spec)
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    /// Number of elements, `p^e`.
    pub fn size(&self) -> u64 {
        self.0.size as u64
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn id(&self) -> FieldId {
        self.0.id
    }

    /// `q` with `q² = p^e`.
    pub fn q(&self) -> Result<u64, FieldError> {
        self.require_even()?;
        Ok(self.p().pow(self.e() / 2))
    }

    fn require_even(&self) -> Result<(), FieldError> {
        if self.0.e % 2 == 0 {
            Ok(())
        } else {
            Err(FieldError::OddExtension(self.0.e))
        }
    }

    #[inline]
    pub(crate) fn wrap(&self, index: u32) -> FieldElement {
        debug_assert!(index < self.0.size);
        FieldElement { index, field: self.0.id }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// Element at position `index` of the canonical order.
    pub fn element(&self, index: u64) -> Option<FieldElement> {
        (index < self.size()).then(|| self.wrap(index as u32))
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.0.p as i64;
        self.wrap(n.rem_euclid(p) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() > self.0.e as usize || coeffs.iter().any(|&c| c >= self.p()) {
            return Err(FieldError::BadCoefficients(coeffs.to_vec()));
        }
        let index = coeffs
            .iter()
            .zip(&self.0.digit_pow)
            .map(|(&c, &w)| c as u32 * w)
            .sum();
        Ok(self.wrap(index))
    }

    /// Coefficients of the polynomial representative, constant term first,
    /// always `e` long.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let p = self.0.p;
        let mut rest = a.index;
        (0..self.0.e)
            .map(|_| {
                let c = rest % p;
                rest /= p;
                c as u64
            })
            .collect()
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.field == self.0.id
    }

    fn check(&self, a: FieldElement) -> Result<(), FieldError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(FieldError::SpecMismatch)
        }
    }

    // Raw index arithmetic. Callers guarantee indices belong to this field.

    #[inline]
    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if let Some(t) = &f.add {
            return t[(a * f.size + b) as usize];
        }
        if f.p == 2 {
            return a ^ b;
        }
        if f.e == 1 {
            let s = a + b;
            return if s >= f.p { s - f.p } else { s };
        }
        let (mut x, mut y, mut out, mut w) = (a, b, 0, 1);
        for _ in 0..f.e {
            let mut d = x % f.p + y % f.p;
            if d >= f.p {
                d -= f.p;
            }
            out += d * w;
            x /= f.p;
            y /= f.p;
            w *= f.p;
        }
        out
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let f = &*self.0;
        f.exp[(f.log[a as usize] + f.log[b as usize]) as usize]
    }

    #[inline]
    pub(crate) fn inv_raw(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let f = &*self.0;
        let order = f.size - 1;
        let l = f.log[a as usize];
        f.exp[((order - l) % order) as usize]
    }

    pub(crate) fn pow_raw(&self, a: u32, n: u64) -> u32 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let f = &*self.0;
        let order = (f.size - 1) as u64;
        let l = f.log[a as usize] as u64 * (n % order) % order;
        f.exp[l as usize]
    }

    /// `g^i` for the fixed primitive element `g`.
    pub(crate) fn primitive_power(&self, i: u64) -> FieldElement {
        let order = self.size() - 1;
        self.wrap(self.0.exp[(i % order) as usize])
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.add_raw(a.index, b.index)))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.sub_raw(a.index, b.index)))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.mul_raw(a.index, b.index)))
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        Ok(self.wrap(self.neg_raw(a.index)))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.wrap(self.inv_raw(a.index)))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        let b_inv = self.inv(b)?;
        self.mul(a, b_inv)
    }

    pub fn pow(&self, a: FieldElement, n: u64) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        Ok(self.wrap(self.pow_raw(a.index, n)))
    }

    /// `p^l mod (p^e - 1)`, the exponent of the l-th Frobenius power.
    pub(crate) fn frobenius_exponent(&self, l: u32) -> u64 {
        let order = self.size() - 1;
        let l = l % self.e();
        let mut x = 1u64;
        for _ in 0..l {
            x = x * self.p() % order.max(1);
        }
        if order == 1 {
            1
        } else {
            x
        }
    }

    /// `a^{p^l}`; `l` is reduced mod `e`.
    pub fn frobenius(&self, a: FieldElement, l: u32) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        Ok(self.wrap(self.frobenius_raw(a.index, l)))
    }

    pub(crate) fn frobenius_raw(&self, a: u32, l: u32) -> u32 {
        if l % self.e() == 0 {
            return a;
        }
        self.pow_raw(a, self.frobenius_exponent(l))
    }

    /// `a^q` over GF(q²).
    pub fn conj(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.require_even()?;
        self.frobenius(a, self.e() / 2)
    }

    pub(crate) fn conj_raw(&self, a: u32) -> u32 {
        self.frobenius_raw(a, self.e() / 2)
    }

    /// `a^{q+1}`, which always lies in GF(q).
    pub fn norm(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        let q = self.q()?;
        let out = self.pow(a, q + 1)?;
        debug_assert_eq!(self.conj_raw(out.index), out.index);
        Ok(out)
    }

    /// `a^{p^l + 1}`, the norm-like map governing the l-Galois hull transform.
    pub fn galois_norm(&self, a: FieldElement, l: u32) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        let exp = self.frobenius_exponent(l) + 1;
        Ok(self.wrap(self.pow_raw(a.index, exp)))
    }

    /// Membership in the subfield GF(q) ⊂ GF(q²), tested as `conj(a) = a`.
    pub fn in_subfield(&self, a: FieldElement) -> Result<bool, FieldError> {
        Ok(self.conj(a)? == a)
    }

    /// All elements in canonical (base-p counting) order.
    pub fn enumerate(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.size).map(move |i| self.wrap(i))
    }

    /// The nonzero elements of GF(q) inside GF(q²), in canonical order.
    pub fn subfield_units(&self) -> Result<Vec<FieldElement>, FieldError> {
        self.require_even()?;
        Ok(self
            .enumerate()
            .filter(|&a| !a.is_zero() && self.conj_raw(a.index) == a.index)
            .collect())
    }

    /// `count` nonzero elements whose norm is not 1: the first qualifying
    /// elements in canonical order, cycling if `count` exceeds their number.
    pub fn find_norm_non_one(&self, count: usize) -> Result<Vec<FieldElement>, FieldError> {
        let q = self.q()?;
        self.find_galois_norm_non_one_exp(q + 1, count)
    }

    /// As [`find_norm_non_one`](Self::find_norm_non_one) for `λ^{p^l+1} ≠ 1`.
    pub fn find_galois_norm_non_one(
        &self,
        l: u32,
        count: usize,
    ) -> Result<Vec<FieldElement>, FieldError> {
        self.find_galois_norm_non_one_exp(self.frobenius_exponent(l) + 1, count)
    }

    fn find_galois_norm_non_one_exp(
        &self,
        exp: u64,
        count: usize,
    ) -> Result<Vec<FieldElement>, FieldError> {
        let pool: Vec<FieldElement> = self
            .enumerate()
            .skip(1)
            .filter(|a| self.pow_raw(a.index, exp) != 1)
            .take(count)
            .collect();
        if pool.is_empty() {
            return if count == 0 { Ok(pool) } else { Err(FieldError::NoSuchElement) };
        }
        Ok(pool.iter().copied().cycle().take(count).collect())
    }

    /// First `v` in canonical order with `v^{q+1} = w`.
    pub fn norm_preimage(&self, w: FieldElement) -> Result<FieldElement, FieldError> {
        let q = self.q()?;
        self.check(w)?;
        if w.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        if self.conj_raw(w.index) != w.index {
            return Err(FieldError::NotInSubfield);
        }
        self.enumerate()
            .find(|v| self.pow_raw(v.index, q + 1) == w.index)
            .ok_or(FieldError::NoSuchElement)
    }

    /// Human-readable polynomial form in the generator `a`, e.g. `2a+1`.
    pub fn format(&self, x: FieldElement) -> String {
        let coeffs = self.coeffs(x);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}a^{i}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

fn smallest_irreducible(p: u64, e: u32) -> Vec<u64> {
    // Odometer over (c_0, …, c_{e-1}) with c_0 most significant.
    let e = e as usize;
    let mut coeffs = vec![0u64; e];
    if e > 1 {
        // x divides every candidate with a zero constant term
        coeffs[0] = 1;
    }
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        let mut i = e;
        loop {
            // Irreducible polynomials of every degree exist, so the odometer
            // never runs out.
            assert!(i > 0, "no irreducible polynomial of degree {e} over GF({p})");
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

fn field_id(p: u32, e: u32, modulus: &[u64]) -> FieldId {
    // FNV-1a over the defining data.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    feed(p as u64);
    feed(e as u64);
    modulus.iter().for_each(|&c| feed(c));
    FieldId(h)
}

fn build_tables(p: u32, e: u32, size: u32, modulus: Vec<u64>) -> FieldInner {
    let digit_pow: Vec<u32> = (0..e).map(|i| p.pow(i)).collect();
    let to_poly = |mut idx: u32| -> Vec<u64> {
        let v = (0..e)
            .map(|_| {
                let c = idx % p;
                idx /= p;
                c as u64
            })
            .collect();
        poly::trim(v)
    };
    let to_index = |v: &[u64]| -> u32 {
        v.iter().zip(&digit_pow).map(|(&c, &w)| c as u32 * w).sum()
    };

    let order = size - 1;
    let factors = prime_factors(order as u64);
    let generator = (1..size)
        .find(|&g| {
            let gp = to_poly(g);
            factors
                .iter()
                .all(|&r| poly::pow_mod(&gp, order as u64 / r, &modulus, p as u64) != vec![1])
        })
        .expect("multiplicative group of a finite field is cyclic");

    // Multiplication by g is GF(p)-linear: row i holds the coefficients of g·x^i.
    let e_us = e as usize;
    let mut rows = Vec::with_capacity(e_us);
    let mut basis = to_poly(generator);
    for _ in 0..e_us {
        let mut row = basis.clone();
        row.resize(e_us, 0);
        rows.push(row);
        basis = times_x(&basis, &modulus, p as u64);
    }
    let mut exp = vec![0u32; 2 * order as usize];
    let mut log = vec![0u32; size as usize];
    let mut cur = vec![0u64; e_us];
    let mut next = vec![0u64; e_us];
    cur[0] = 1;
    for i in 0..order {
        let idx = to_index(&cur);
        exp[i as usize] = idx;
        log[idx as usize] = i;
        next.iter_mut().for_each(|c| *c = 0);
        for (&c, row) in cur.iter().zip(&rows) {
            if c != 0 {
                for (n, &r) in next.iter_mut().zip(row) {
                    *n += c * r;
                }
            }
        }
        for (c, &n) in cur.iter_mut().zip(&next) {
            *c = n % p as u64;
        }
    }
    for i in order..2 * order {
        exp[i as usize] = exp[(i - order) as usize];
    }

    let neg = (0..size)
        .map(|a| {
            let coeffs = to_poly(a);
            let n: Vec<u64> = coeffs.iter().map(|&c| (p as u64 - c) % p as u64).collect();
            to_index(&n)
        })
        .collect();

    let mut inner = FieldInner {
        p,
        e,
        size,
        id: field_id(p, e, &modulus),
        modulus,
        exp,
        log,
        neg,
        add: None,
        digit_pow,
    };
    if size <= ADD_TABLE_LIMIT && p != 2 && e > 1 {
        let spec = FieldSpec(Arc::new(inner));
        let table = (0..size * size)
            .map(|i| spec.add_raw(i / size, i % size))
            .collect();
        inner = Arc::try_unwrap(spec.0).ok().expect("sole owner");
        inner.add = Some(table);
    }
    inner
}

/// Multiplies by `x` modulo a monic modulus in O(e).
fn times_x(a: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let e = modulus.len() - 1;
    let mut out = vec![0u64; e + 1];
    let a = poly::trim(a.to_vec());
    out[1..=a.len()].copy_from_slice(&a);
    let top = out[e];
    if top != 0 {
        for i in 0..e {
            out[i] = (out[i] + p - top * modulus[i] % p) % p;
        }
    }
    out.truncate(e);
    poly::trim(out)
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    p: u64,
    e: u32,
    modulus: Vec<u64>,
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FieldJson { p: self.p(), e: self.e(), modulus: self.modulus().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = FieldJson::deserialize(d)?;
        FieldSpec::with_modulus(raw.p, raw.e, raw.modulus).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> (FieldSpec, FieldElement) {
        let f = FieldSpec::new(3, 2).unwrap();
        let w = f.from_coeffs(&[0, 1]).unwrap();
        (f, w)
    }

    /// Polynomial-arithmetic reference product, independent of the tables.
    fn slow_mul(f: &FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = f.p();
        let prod = poly::mul_mod(
            &poly::trim(f.coeffs(a)),
            &poly::trim(f.coeffs(b)),
            f.modulus(),
            p,
        );
        f.from_coeffs(&prod).unwrap()
    }

    #[test]
    fn gf9_modulus_is_x2_plus_1() {
        let (f, _) = gf9();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // Everything before x^2 + 1 in constant-term-first order has a root mod 3.
        let has_root = |c0: u64, c1: u64| (0..3u64).any(|x| (x * x + c1 * x + c0) % 3 == 0);
        for c1 in 0..3 {
            assert!(has_root(0, c1));
        }
        assert!(!has_root(1, 0));
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.size(), 2);
    }

    #[test]
    fn gf25_modulus_has_no_roots() {
        let f = FieldSpec::new(5, 2).unwrap();
        let m = f.modulus();
        assert_eq!(m.len(), 3);
        assert_eq!(m[2], 1);
        for x in 0..5u64 {
            assert_ne!((m[0] + m[1] * x + x * x) % 5, 0);
        }
        // Smallest in constant-term-first order: nothing earlier is root-free.
        for c0 in 0..5u64 {
            for c1 in 0..5u64 {
                if (c0, c1) >= (m[0], m[1]) {
                    continue;
                }
                assert!((0..5u64).any(|x| (c0 + c1 * x + x * x) % 5 == 0));
            }
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert!(matches!(FieldSpec::new(2, 21), Err(FieldError::CapExceeded { .. })));
        assert!(matches!(FieldSpec::new(3, 0), Err(FieldError::BadExponent)));
        assert!(matches!(
            FieldSpec::with_modulus(3, 2, vec![0, 0, 1]),
            Err(FieldError::BadModulus(_))
        ));
    }

    #[test]
    fn make_field_is_deterministic() {
        let a = FieldSpec::new(2, 8).unwrap();
        let b = FieldSpec::new(2, 8).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.id(), b.id());
    }

    #[test]
    fn gf9_products() {
        let (f, w) = gf9();
        let w1 = f.add(w, f.one()).unwrap();
        let two_w = f.from_coeffs(&[0, 2]).unwrap();
        assert_eq!(f.mul(w1, w1).unwrap(), two_w);
        assert_eq!(f.add(w1, f.neg(w1).unwrap()).unwrap(), f.zero());
        let g3 = FieldSpec::new(3, 1).unwrap();
        let two = g3.from_int(2);
        assert_eq!(g3.inv(two).unwrap(), two);
        assert_eq!(g3.inv(g3.zero()).unwrap_err(), FieldError::DivisionByZero);
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let (f, w) = gf9();
        let g = FieldSpec::new(5, 2).unwrap();
        assert_eq!(f.add(w, g.one()).unwrap_err(), FieldError::SpecMismatch);
        assert_eq!(g.mul(w, g.one()).unwrap_err(), FieldError::SpecMismatch);
    }

    #[test]
    fn frobenius_conj_norm_gf9() {
        let (f, w) = gf9();
        let two_w = f.from_coeffs(&[0, 2]).unwrap();
        assert_eq!(f.frobenius(w, 1).unwrap(), two_w);
        assert_eq!(f.conj(w).unwrap(), two_w);
        assert_eq!(f.conj(f.zero()).unwrap(), f.zero());
        for a in f.enumerate() {
            assert_eq!(f.frobenius(a, 0).unwrap(), a);
            assert_eq!(f.frobenius(a, 2).unwrap(), a);
            assert_eq!(f.conj(f.conj(a).unwrap()).unwrap(), a);
        }
        let w1 = f.add(w, f.one()).unwrap();
        assert_eq!(f.norm(w1).unwrap(), f.from_int(2));
        assert_eq!(f.norm(f.one()).unwrap(), f.one());
        assert_eq!(f.norm(w).unwrap(), f.one());
        for c in 0..3 {
            let c = f.from_int(c);
            assert_eq!(f.conj(c).unwrap(), c);
        }
    }

    #[test]
    fn odd_extension_rejects_hermitian_maps() {
        let f = FieldSpec::new(2, 3).unwrap();
        assert_eq!(f.conj(f.one()).unwrap_err(), FieldError::OddExtension(3));
        assert_eq!(f.norm(f.one()).unwrap_err(), FieldError::OddExtension(3));
    }

    #[test]
    fn canonical_enumeration() {
        let g3 = FieldSpec::new(3, 1).unwrap();
        let idx: Vec<u32> = g3.enumerate().map(|a| a.index()).collect();
        assert_eq!(idx, vec![0, 1, 2]);
        assert_eq!(FieldSpec::new(3, 2).unwrap().enumerate().count(), 9);
        let g4 = FieldSpec::new(2, 2).unwrap();
        let coeffs: Vec<Vec<u64>> = g4.enumerate().map(|a| g4.coeffs(a)).collect();
        assert_eq!(coeffs, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn norm_non_one_selection() {
        let (f, w) = gf9();
        let w1 = f.add(w, f.one()).unwrap();
        assert_eq!(f.find_norm_non_one(1).unwrap(), vec![w1]);
        let g4 = FieldSpec::hermitian(2).unwrap();
        assert_eq!(g4.find_norm_non_one(1).unwrap_err(), FieldError::NoSuchElement);
        let g25 = FieldSpec::hermitian(5).unwrap();
        let picks = g25.find_norm_non_one(3).unwrap();
        assert_eq!(picks.len(), 3);
        for l in picks {
            assert!(!l.is_zero());
            // brute-force norm: multiply q+1 = 6 times
            let mut acc = g25.one();
            for _ in 0..6 {
                acc = slow_mul(&g25, acc, l);
            }
            assert_ne!(acc, g25.one());
        }
    }

    #[test]
    fn norm_preimages() {
        let (f, w) = gf9();
        assert_eq!(f.norm_preimage(f.one()).unwrap(), f.one());
        let v = f.norm_preimage(f.from_int(2)).unwrap();
        assert_eq!(f.norm(v).unwrap(), f.from_int(2));
        assert_eq!(v, f.add(w, f.one()).unwrap());
        assert_eq!(f.norm_preimage(f.zero()).unwrap_err(), FieldError::ZeroInput);
        assert_eq!(f.norm_preimage(w).unwrap_err(), FieldError::NotInSubfield);
        for q in [3u64, 4, 5] {
            let f = FieldSpec::hermitian(q).unwrap();
            for w in f.subfield_units().unwrap() {
                assert_eq!(f.norm(f.norm_preimage(w).unwrap()).unwrap(), w);
            }
        }
    }

    #[test]
    fn norm_fibers_have_size_q_plus_1() {
        for q in [3u64, 4, 5] {
            let f = FieldSpec::hermitian(q).unwrap();
            let mut counts: HashMap<FieldElement, u64> = HashMap::new();
            for a in f.enumerate().skip(1) {
                *counts.entry(f.norm(a).unwrap()).or_default() += 1;
            }
            assert_eq!(counts.len() as u64, q - 1);
            for (w, c) in counts {
                assert!(f.in_subfield(w).unwrap());
                assert_eq!(c, q + 1);
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (3, 4)] {
            let f = FieldSpec::new(p, e).unwrap();
            let els: Vec<FieldElement> = f.enumerate().collect();
            for &a in &els {
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()).unwrap(), f.one());
                }
                assert_eq!(f.add(a, f.neg(a).unwrap()).unwrap(), f.zero());
                for &b in &els {
                    let ab = f.mul(a, b).unwrap();
                    assert_eq!(ab, slow_mul(&f, a, b), "GF({p}^{e})");
                    assert_eq!(ab, f.mul(b, a).unwrap());
                    assert_eq!(f.add(a, b).unwrap(), f.add(b, a).unwrap());
                }
            }
            if f.size() <= 27 {
                for &a in &els {
                    for &b in &els {
                        for &c in &els {
                            let l = f.mul(a, f.add(b, c).unwrap()).unwrap();
                            let r = f.add(f.mul(a, b).unwrap(), f.mul(a, c).unwrap()).unwrap();
                            assert_eq!(l, r);
                            let l = f.mul(f.mul(a, b).unwrap(), c).unwrap();
                            let r = f.mul(a, f.mul(b, c).unwrap()).unwrap();
                            assert_eq!(l, r);
                            let l = f.add(f.add(a, b).unwrap(), c).unwrap();
                            let r = f.add(a, f.add(b, c).unwrap()).unwrap();
                            assert_eq!(l, r);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_an_automorphism() {
        for (p, e) in [(2, 4), (3, 2), (3, 4), (5, 2), (2, 6)] {
            let f = FieldSpec::new(p, e).unwrap();
            for l in 0..e {
                let mut image: Vec<FieldElement> =
                    f.enumerate().map(|a| f.frobenius(a, l).unwrap()).collect();
                for a in f.enumerate() {
                    for b in f.enumerate().step_by(3) {
                        let fa = f.frobenius(a, l).unwrap();
                        let fb = f.frobenius(b, l).unwrap();
                        assert_eq!(f.frobenius(f.add(a, b).unwrap(), l).unwrap(), f.add(fa, fb).unwrap());
                        assert_eq!(f.frobenius(f.mul(a, b).unwrap(), l).unwrap(), f.mul(fa, fb).unwrap());
                    }
                }
                image.sort();
                image.dedup();
                assert_eq!(image.len() as u64, f.size());
            }
        }
    }

    #[test]
    fn cap_sized_field_builds() {
        let f = FieldSpec::new(2, 20).unwrap();
        assert_eq!(f.size(), FIELD_CAP);
        let a = f.element(123_456).unwrap();
        assert_eq!(f.mul(a, f.inv(a).unwrap()).unwrap(), f.one());
        assert_eq!(f.mul(a, a).unwrap(), slow_mul(&f, a, a));
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn json_roundtrip() {
        let f = FieldSpec::new(3, 2).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"p":3,"e":2,"modulus":[1,0,1]}"#);
        let back: FieldSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<FieldSpec>(r#"{"p":3,"e":2,"modulus":[0,0,1]}"#).is_err());
    }

    proptest::proptest! {
        #[test]
        fn gf3_5_axioms(a in 0u64..243, b in 0u64..243, c in 0u64..243) {
            let f = FieldSpec::new(3, 5).unwrap();
            let (a, b, c) = (f.element(a).unwrap(), f.element(b).unwrap(), f.element(c).unwrap());
            let l = f.mul(a, f.add(b, c).unwrap()).unwrap();
            let r = f.add(f.mul(a, b).unwrap(), f.mul(a, c).unwrap()).unwrap();
            proptest::prop_assert_eq!(l, r);
            proptest::prop_assert_eq!(f.mul(a, b).unwrap(), slow_mul(&f, a, b));
            proptest::prop_assert_eq!(f.sub(f.add(a, b).unwrap(), b).unwrap(), a);
        }
    }
}
