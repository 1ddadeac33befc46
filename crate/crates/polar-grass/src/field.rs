//! Exact arithmetic for small finite fields GF(p^e).
//!
//! Elements are dense integer codes in `[0, q)` encoding polynomial-basis
//! coordinates base `p`. Multiplication, inversion and the Frobenius
//! involution go through precomputed log/antilog tables, so every operation
//! is an exact table lookup or a short digit loop.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible field order unless a caller raises the bound.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 16;

/// Identity of an interned field; equal ids mean the same (p, e, poly).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldId(u32);

/// An element tagged with the field it belongs to, for the checked API.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    pub value: u16,
    pub field: FieldId,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Neg,
}

struct FieldInner {
    id: FieldId,
    p: u32,
    e: u32,
    q: u32,
    poly: Vec<u16>,
    /// exp[i] = g^i for a fixed generator g, doubled so products skip the mod.
    exp: Vec<u16>,
    /// log[code] for code != 0.
    log: Vec<u16>,
    neg_table: Vec<u16>,
    add_table: Option<Vec<u16>>,
    conj_table: Option<Vec<u16>>,
}

/// A finite field GF(p^e). Cheap to clone; instances with identical
/// parameters are interned and compare equal by id.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

/// JSON form of a field: `{"p":…, "e":…, "poly":[…]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub p: u32,
    pub e: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<u16>>,
}

impl FieldDescriptor {
    pub fn resolve(&self) -> Result<FieldSpec> {
        FieldSpec::make(self.p, self.e, self.poly.clone())
    }
}

fn registry() -> &'static Mutex<HashMap<(u32, u32, Vec<u16>), Arc<FieldInner>>> {
    static REGISTRY: OnceLock<Mutex<HashMap<(u32, u32, Vec<u16>), Arc<FieldInner>>>> =
        OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---- polynomial helpers over GF(p), used only while building tables ----

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (k, &mk) in m.iter().enumerate() {
                let idx = shift + k;
                let sub = (lead * mk) % p;
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn code_to_poly(code: u32, p: u32) -> Vec<u32> {
    let mut digits = vec![];
    let mut c = code;
    while c > 0 {
        digits.push(c % p);
        c /= p;
    }
    digits
}

fn poly_to_code(poly: &[u32], p: u32) -> u32 {
    let mut code = 0u32;
    for &d in poly.iter().rev() {
        code = code * p + d;
    }
    code
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn poly_is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // monic divisor candidates: x^d + (lower part encoded by `low`)
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut cand = code_to_poly(low, p);
            cand.resize(d + 1, 0);
            cand[d] = 1;
            if poly_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn default_irreducible(p: u32, e: u32) -> Vec<u16> {
    let count = (p as u64).pow(e);
    for low in 0..count {
        let mut cand = code_to_poly(low as u32, p);
        cand.resize(e as usize + 1, 0);
        cand[e as usize] = 1;
        if poly_is_irreducible(&cand, p) {
            return cand.iter().map(|&c| c as u16).collect();
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

impl FieldSpec {
    /// Build (or fetch the interned) GF(p^e) with the default order bound.
    pub fn make(p: u32, e: u32, reduction_poly: Option<Vec<u16>>) -> Result<Self> {
        Self::make_with_bound(p, e, reduction_poly, DEFAULT_MAX_ORDER)
    }

    pub fn make_with_bound(
        p: u32,
        e: u32,
        reduction_poly: Option<Vec<u16>>,
        bound: u64,
    ) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e < 1 {
            return Err(Error::DimensionMismatch("extension degree must be >= 1".into()));
        }
        let order = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if order > bound || order > DEFAULT_MAX_ORDER {
            return Err(Error::OrderTooLarge { order, bound: bound.min(DEFAULT_MAX_ORDER) });
        }
        let poly = match reduction_poly {
            Some(poly) => {
                if poly.len() != e as usize + 1 || *poly.last().unwrap() != 1 {
                    return Err(Error::BadDescriptor(format!(
                        "reduction polynomial must be monic of degree {e}"
                    )));
                }
                if poly.iter().any(|&c| c as u32 >= p) {
                    return Err(Error::BadDescriptor(
                        "reduction polynomial coefficients must lie in [0, p)".into(),
                    ));
                }
                let as_u32: Vec<u32> = poly.iter().map(|&c| c as u32).collect();
                if !poly_is_irreducible(&as_u32, p) {
                    return Err(Error::ReduciblePolynomial(poly, p));
                }
                poly
            }
            None => default_irreducible(p, e),
        };

        let key = (p, e, poly.clone());
        {
            let reg = registry().lock().unwrap();
            if let Some(inner) = reg.get(&key) {
                return Ok(FieldSpec { inner: inner.clone() });
            }
        }

        let inner = Arc::new(build_tables(p, e, poly));
        let mut reg = registry().lock().unwrap();
        // Racing constructions are resolved by whoever inserted first.
        let entry = reg.entry(key).or_insert_with(|| inner);
        Ok(FieldSpec { inner: entry.clone() })
    }

    pub fn id(&self) -> FieldId {
        self.inner.id
    }
    pub fn p(&self) -> u32 {
        self.inner.p
    }
    pub fn e(&self) -> u32 {
        self.inner.e
    }
    pub fn order(&self) -> u32 {
        self.inner.q
    }
    pub fn reduction_poly(&self) -> &[u16] {
        &self.inner.poly
    }
    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p(), e: self.e(), poly: Some(self.inner.poly.clone()) }
    }
    pub fn has_involution(&self) -> bool {
        self.inner.conj_table.is_some()
    }

    // ---- raw code arithmetic (codes must belong to this field) ----

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        let inner = &*self.inner;
        if inner.p == 2 {
            return a ^ b;
        }
        if let Some(t) = &inner.add_table {
            return t[a as usize * inner.q as usize + b as usize];
        }
        let p = inner.p;
        let mut out = 0u32;
        let mut mult = 1u32;
        let (mut x, mut y) = (a as u32, b as u32);
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * mult;
            mult *= p;
            x /= p;
            y /= p;
        }
        out as u16
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.inner.neg_table[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.inner;
        inner.exp[inner.log[a as usize] as usize + inner.log[b as usize] as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> Result<u16> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if a == 1 {
            return Ok(1);
        }
        let inner = &*self.inner;
        let n = inner.q - 1;
        Ok(inner.exp[(n - inner.log[a as usize] as u32) as usize])
    }

    pub fn pow(&self, a: u16, mut k: u64) -> u16 {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let n = (self.inner.q - 1) as u64;
        k %= n;
        let inner = &*self.inner;
        inner.exp[((inner.log[a as usize] as u64 * k) % n) as usize]
    }

    /// The involution x -> x^{p^{e/2}} of GF(q0^2); errors when e is odd.
    #[inline]
    pub fn conj(&self, a: u16) -> Result<u16> {
        match &self.inner.conj_table {
            Some(t) => Ok(t[a as usize]),
            None => Err(Error::NoInvolution(self.inner.e)),
        }
    }

    /// All element codes, ascending.
    pub fn elements(&self) -> impl Iterator<Item = u16> + '_ {
        (0..self.order() as u32).map(|c| c as u16)
    }

    // ---- checked element-level API ----

    pub fn element(&self, value: u16) -> Result<FieldElement> {
        if (value as u32) < self.order() {
            Ok(FieldElement { value, field: self.id() })
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { value: 0, field: self.id() }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { value: 1, field: self.id() }
    }

    /// Checked arithmetic; `Inv` and `Neg` ignore `b`.
    pub fn arith(&self, a: FieldElement, b: FieldElement, op: FieldOp) -> Result<FieldElement> {
        if a.field != self.id() || (matches!(op, FieldOp::Add | FieldOp::Mul) && b.field != self.id())
        {
            return Err(Error::FieldMismatch);
        }
        let value = match op {
            FieldOp::Add => self.add(a.value, b.value),
            FieldOp::Mul => self.mul(a.value, b.value),
            FieldOp::Inv => self.inv(a.value)?,
            FieldOp::Neg => self.neg(a.value),
        };
        Ok(FieldElement { value, field: self.id() })
    }

    pub fn frobenius_conjugate(&self, a: FieldElement) -> Result<FieldElement> {
        if a.field != self.id() {
            return Err(Error::FieldMismatch);
        }
        Ok(FieldElement { value: self.conj(a.value)?, field: self.id() })
    }

    /// Exhaustive field-axiom verification; quadratic and cubic sweeps, so
    /// intended for q up to a few hundred.
    pub fn verify_axioms(&self) -> std::result::Result<(), String> {
        let q = self.order() as u16;
        for a in 0..q {
            if self.add(a, 0) != a {
                return Err(format!("additive identity fails at {a}"));
            }
            if self.mul(a, 1) != a {
                return Err(format!("multiplicative identity fails at {a}"));
            }
            if self.add(a, self.neg(a)) != 0 {
                return Err(format!("additive inverse fails at {a}"));
            }
            if a != 0 {
                let inv = self.inv(a).unwrap();
                if self.mul(a, inv) != 1 {
                    return Err(format!("multiplicative inverse fails at {a}"));
                }
            }
        }
        for a in 0..q {
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) {
                    return Err(format!("addition not commutative at ({a},{b})"));
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("multiplication not commutative at ({a},{b})"));
                }
            }
        }
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(format!("addition not associative at ({a},{b},{c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("multiplication not associative at ({a},{b},{c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(format!("distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}
impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.order())?;
        if self.e() > 1 {
            write!(f, " = GF({}^{})", self.p(), self.e())?;
        }
        Ok(())
    }
}

fn build_tables(p: u32, e: u32, poly: Vec<u16>) -> FieldInner {
    let q = p.pow(e);
    let poly_u32: Vec<u32> = poly.iter().map(|&c| c as u32).collect();

    let mul_codes = |a: u32, b: u32| -> u32 {
        let prod = poly_mul(&code_to_poly(a, p), &code_to_poly(b, p), p);
        poly_to_code(&poly_rem(&prod, &poly_u32, p), p)
    };

    // log/antilog tables from a multiplicative generator
    let n = q - 1;
    let mut exp = vec![0u16; (2 * n.max(1)) as usize];
    let mut log = vec![0u16; q as usize];
    if n == 1 {
        exp = vec![1u16, 1u16];
    } else {
        let mut found = false;
        'candidates: for g in 2..q {
            let mut x = 1u32;
            for i in 0..n {
                exp[i as usize] = x as u16;
                x = mul_codes(x, g);
                if x == 1 && i + 1 < n {
                    continue 'candidates;
                }
            }
            if x == 1 {
                found = true;
                break;
            }
        }
        assert!(found, "multiplicative group of a finite field is cyclic");
        for i in 0..n {
            exp[(n + i) as usize] = exp[i as usize];
            log[exp[i as usize] as usize] = i as u16;
        }
    }

    // negation: digit-wise p-complement
    let mut neg_table = vec![0u16; q as usize];
    for a in 0..q {
        let digits = code_to_poly(a, p);
        let negd: Vec<u32> = digits.iter().map(|&d| (p - d) % p).collect();
        neg_table[a as usize] = poly_to_code(&negd, p) as u16;
    }

    let add_codes = |a: u32, b: u32| -> u32 {
        let (mut x, mut y) = (a, b);
        let mut out = 0u32;
        let mut mult = 1u32;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * mult;
            mult *= p;
            x /= p;
            y /= p;
        }
        out
    };

    let add_table = if p != 2 && q <= 256 {
        let mut t = vec![0u16; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                t[(a * q + b) as usize] = add_codes(a, b) as u16;
            }
        }
        Some(t)
    } else {
        None
    };

    // Frobenius involution x -> x^{p^{e/2}} when the degree is even
    let conj_table = if e % 2 == 0 {
        let q0 = p.pow(e / 2) as u64;
        let mut t = vec![0u16; q as usize];
        for a in 1..q {
            let li = log[a as usize] as u64;
            t[a as usize] = exp[((li * q0) % n as u64) as usize];
        }
        Some(t)
    } else {
        None
    };

    static NEXT_ID: OnceLock<Mutex<u32>> = OnceLock::new();
    let mut counter = NEXT_ID.get_or_init(|| Mutex::new(0)).lock().unwrap();
    let id = FieldId(*counter);
    *counter += 1;

    FieldInner { id, p, e, q, poly, exp, log, neg_table, add_table, conj_table }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_basics() {
        let f = FieldSpec::make(2, 1, None).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
        assert_eq!(f.inv(1).unwrap(), 1);
        assert!(matches!(f.inv(0), Err(Error::DivisionByZero)));
    }

    #[test]
    fn gf3_arith() {
        let f = FieldSpec::make(3, 1, None).unwrap();
        assert_eq!(f.add(1, 2), 0);
        // 2 * 2 = 4 = 1 mod 3, so inv(2) = 2
        assert_eq!(f.inv(2).unwrap(), 2);
        assert_eq!(f.neg(1), 2);
    }

    #[test]
    fn gf4_multiplication_oracle() {
        // GF(4) with x^2 + x + 1: code 2 = x, code 3 = x + 1.
        // x * (x+1) = x^2 + x = (x+1) + x = 1, worked by hand.
        let f = FieldSpec::make(2, 2, Some(vec![1, 1, 1])).unwrap();
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.inv(2).unwrap(), 3);
        assert_eq!(f.mul(2, 2), 3); // x^2 = x + 1
    }

    #[test]
    fn gf4_frobenius() {
        let f = FieldSpec::make(2, 2, None).unwrap();
        assert_eq!(f.reduction_poly(), &[1, 1, 1]);
        assert_eq!(f.conj(0).unwrap(), 0);
        assert_eq!(f.conj(1).unwrap(), 1);
        // x^2 = x + 1 mod x^2+x+1
        assert_eq!(f.conj(2).unwrap(), 3);
        assert_eq!(f.conj(3).unwrap(), 2);
    }

    #[test]
    fn conj_is_an_involution_fixing_the_base_subfield() {
        for (p, e) in [(2u32, 2u32), (2, 4), (3, 2), (5, 2)] {
            let f = FieldSpec::make(p, e, None).unwrap();
            let q0 = p.pow(e / 2);
            let mut fixed = 0u32;
            for a in f.elements() {
                let c = f.conj(a).unwrap();
                assert_eq!(f.conj(c).unwrap(), a, "conj twice in GF({})", f.order());
                if c == a {
                    fixed += 1;
                }
            }
            assert_eq!(fixed, q0, "conj must fix exactly GF({q0})");
        }
    }

    #[test]
    fn no_involution_for_odd_degree() {
        let f = FieldSpec::make(2, 3, None).unwrap();
        assert!(matches!(f.conj(1), Err(Error::NoInvolution(3))));
    }

    #[test]
    fn axioms_exhaustive_small_orders() {
        for (p, e) in [(2u32, 1u32), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (2, 6)]
        {
            let f = FieldSpec::make(p, e, None).unwrap();
            assert!(f.order() <= 64);
            f.verify_axioms().unwrap_or_else(|e| panic!("GF({}) axioms: {e}", f.order()));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FieldSpec::make(4, 1, None), Err(Error::NotPrime(4))));
        assert!(matches!(FieldSpec::make(6, 2, None), Err(Error::NotPrime(6))));
        // x^2 + 1 = (x+1)^2 over GF(2)
        assert!(matches!(
            FieldSpec::make(2, 2, Some(vec![1, 0, 1])),
            Err(Error::ReduciblePolynomial(_, 2))
        ));
        assert!(matches!(
            FieldSpec::make(2, 17, None),
            Err(Error::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn interning_gives_equal_specs() {
        let a = FieldSpec::make(2, 2, None).unwrap();
        let b = FieldSpec::make(2, 2, Some(vec![1, 1, 1])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.id(), b.id());
        let c = FieldSpec::make(3, 1, None).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn checked_api_detects_mismatch() {
        let f2 = FieldSpec::make(2, 1, None).unwrap();
        let f3 = FieldSpec::make(3, 1, None).unwrap();
        let a = f2.one();
        let b = f3.one();
        assert!(matches!(f2.arith(a, b, FieldOp::Add), Err(Error::FieldMismatch)));
        assert_eq!(f2.arith(a, a, FieldOp::Add).unwrap().value, 0);
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let f = FieldSpec::make(3, 2, None).unwrap();
        for a in f.elements().skip(1) {
            let mut acc = 1u16;
            for k in 0..10u64 {
                assert_eq!(f.pow(a, k), acc);
                acc = f.mul(acc, a);
            }
        }
    }
}
