//! Table-driven arithmetic in GF(q), q = p^m ≤ 2^16.
//!
//! Elements are encoded as integers `0..q`. For a prime field the encoding is
//! the residue itself. For an extension field the element
//! `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` (mod the field polynomial) is encoded
//! as `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. The field polynomial is the
//! smallest monic primitive polynomial of degree `m` in that same
//! coefficient order, so every run produces identical encodings.
//!
//! Multiplication uses exp/log tables and addition in extension fields uses
//! Zech logarithms. Fields of order at most [`FULL_TABLE_LIMIT`] additionally
//! carry full `q × q` addition and multiplication tables, which is what the
//! enumeration engines hit in their inner loops.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Fields up to this order get full addition and multiplication tables.
pub const FULL_TABLE_LIMIT: u32 = 256;

const NO_LOG: u32 = u32::MAX;

/// An element of some GF(q), interpreted by the [`FieldSpec`] that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(pub u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn value(self) -> u32 {
        u32::from(self.0)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    q: u32,
    p: u32,
    m: u32,
    /// Low coefficients c_0..c_{m-1} of the monic field polynomial.
    modulus: Vec<u32>,
    /// exp[e] = encoding of α^e for e in 0..q-1.
    exp: Vec<u16>,
    /// log[a] for a != 0; log[0] = NO_LOG.
    log: Vec<u32>,
    /// zech[d] = log(1 + α^d), NO_LOG when 1 + α^d = 0.
    zech: Vec<u32>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
}

/// A finite field GF(q) with complete arithmetic tables.
///
/// Cloning is cheap (shared tables). Two specs compare equal iff they have
/// the same order, since the field polynomial is a fixed function of `q`.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.q == other.inner.q
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.inner.q)
    }
}

/// Splits `q` as `p^m` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn digits(mut v: u32, p: u32, m: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(m as usize);
    for _ in 0..m {
        d.push(v % p);
        v /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn add_digitwise(a: u32, b: u32, p: u32, m: u32) -> u32 {
    let da = digits(a, p, m);
    let db = digits(b, p, m);
    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
    undigits(&sum, p)
}

/// Multiplies the encoded polynomial `a` by x modulo the monic polynomial
/// with low coefficients `modulus`.
fn times_x(a: u32, p: u32, m: u32, modulus: &[u32]) -> u32 {
    let d = digits(a, p, m);
    let top = d[m as usize - 1];
    let mut out = vec![0u32; m as usize];
    for i in (1..m as usize).rev() {
        out[i] = d[i - 1];
    }
    for (i, c) in modulus.iter().enumerate() {
        out[i] = (out[i] + p - (top * c) % p) % p;
    }
    undigits(&out, p)
}

/// Powers of x modulo the candidate polynomial, if x has order exactly `q - 1`.
fn primitive_powers(p: u32, m: u32, modulus: &[u32]) -> Option<Vec<u16>> {
    let q = p.pow(m);
    let mut exp = Vec::with_capacity(q as usize - 1);
    let mut cur = 1u32;
    for e in 0..q - 1 {
        if e > 0 && cur == 1 {
            return None;
        }
        exp.push(cur as u16);
        cur = times_x(cur, p, m, modulus);
        if cur == 0 {
            return None;
        }
    }
    (cur == 1).then_some(exp)
}

fn prime_field_powers(p: u32) -> (u32, Vec<u16>) {
    if p == 2 {
        return (1, vec![1]);
    }
    for g in 2..p {
        let mut exp = Vec::with_capacity(p as usize - 1);
        let mut cur = 1u64;
        let mut ok = true;
        for e in 0..p - 1 {
            if e > 0 && cur == 1 {
                ok = false;
                break;
            }
            exp.push(cur as u16);
            cur = cur * u64::from(g) % u64::from(p);
        }
        if ok && cur == 1 {
            return (g, exp);
        }
    }
    unreachable!("every prime field has a primitive root")
}

impl FieldSpec {
    /// Builds GF(q) for a prime power `q ≤ 2^16`.
    pub fn new(q: u64) -> Result<Self> {
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let (p, q) = (p as u32, q as u32);

        let (modulus, exp) = if m == 1 {
            let (g, exp) = prime_field_powers(p);
            // field polynomial x - g
            (vec![(p - g) % p], exp)
        } else {
            let mut found = None;
            for v in 0..p.pow(m) {
                let cand = digits(v, p, m);
                if cand[0] == 0 {
                    continue;
                }
                if let Some(exp) = primitive_powers(p, m, &cand) {
                    found = Some((cand, exp));
                    break;
                }
            }
            found.expect("a primitive polynomial exists for every degree")
        };

        let order = q - 1;
        let mut log = vec![NO_LOG; q as usize];
        for (e, &a) in exp.iter().enumerate() {
            log[a as usize] = e as u32;
        }

        let add_raw = |a: u32, b: u32| -> u32 {
            if m == 1 {
                (a + b) % p
            } else {
                add_digitwise(a, b, p, m)
            }
        };

        let zech: Vec<u32> = (0..order)
            .map(|d| {
                let s = add_raw(1, u32::from(exp[d as usize]));
                if s == 0 {
                    NO_LOG
                } else {
                    log[s as usize]
                }
            })
            .collect();

        let minus_one = if p == 2 {
            1u32
        } else {
            u32::from(exp[(order / 2) as usize])
        };
        let mut neg = vec![0u16; q as usize];
        let mut inv = vec![0u16; q as usize];
        for a in 1..q {
            let la = log[a as usize];
            let lm = log[minus_one as usize];
            neg[a as usize] = exp[((la + lm) % order) as usize];
            inv[a as usize] = exp[((order - la) % order) as usize];
        }

        let mut tables = Tables {
            q,
            p,
            m,
            modulus,
            exp,
            log,
            zech,
            neg,
            inv,
            add_table: None,
            mul_table: None,
        };

        if q <= FULL_TABLE_LIMIT {
            let qs = q as usize;
            let mut add = vec![0u16; qs * qs];
            let mut mul = vec![0u16; qs * qs];
            for a in 0..q {
                for b in 0..q {
                    let idx = (a * q + b) as usize;
                    add[idx] = tables.zech_add(a as u16, b as u16);
                    mul[idx] = tables.log_mul(a as u16, b as u16);
                }
            }
            tables.add_table = Some(add);
            tables.mul_table = Some(mul);
        }

        Ok(Self {
            inner: Arc::new(tables),
        })
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.m
    }

    /// Low coefficients `c_0..c_{m-1}` of the monic field polynomial
    /// `x^m + c_{m-1} x^{m-1} + ... + c_0`.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// Validates an integer code as an element of this field.
    pub fn elem(&self, value: u64) -> Result<FieldElem> {
        if value < u64::from(self.inner.q) {
            Ok(FieldElem(value as u16))
        } else {
            Err(Error::InvalidEntry { value, q: self.inner.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.inner.q).map(|v| FieldElem(v as u16))
    }

    /// The generator α whose powers index the log tables.
    pub fn primitive_element(&self) -> FieldElem {
        FieldElem(self.inner.exp[1 % self.inner.exp.len()])
    }

    /// Discrete log base the primitive element, `None` for zero.
    pub fn log(&self, a: FieldElem) -> Option<u32> {
        let l = self.inner.log[a.0 as usize];
        (l != NO_LOG).then_some(l)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.inner.add_table {
            Some(t) => FieldElem(t[a.0 as usize * self.inner.q as usize + b.0 as usize]),
            None => FieldElem(self.inner.zech_add(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.inner.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.inner.mul_table {
            Some(t) => FieldElem(t[a.0 as usize * self.inner.q as usize + b.0 as usize]),
            None => FieldElem(self.inner.log_mul(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(FieldElem(self.inner.inv[a.0 as usize]))
        }
    }

    /// Inverse of a known nonzero element.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: FieldElem) -> FieldElem {
        debug_assert!(!a.is_zero());
        FieldElem(self.inner.inv[a.0 as usize])
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.is_zero() {
            return FieldElem::ZERO;
        }
        let order = u64::from(self.inner.q - 1);
        let l = u64::from(self.inner.log[a.0 as usize]);
        FieldElem(self.inner.exp[((l * (e % order)) % order) as usize])
    }
}

impl Tables {
    fn log_mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(s % order) as usize]
    }

    fn zech_add(&self, a: u16, b: u16) -> u16 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let order = self.q - 1;
        let la = self.log[a as usize];
        let lb = self.log[b as usize];
        // α^la + α^lb = α^la (1 + α^(lb - la))
        let d = (lb + order - la) % order;
        match self.zech[d as usize] {
            NO_LOG => 0,
            z => self.exp[((la + z) % order) as usize],
        }
    }
}
