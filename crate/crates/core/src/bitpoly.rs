//! Non-negative integers stored as bit sequences and read as binary
//! polynomials evaluated at `x = 2`.
//!
//! A value `n = c_p 2^p + ... + c_1 2 + c_0` is the polynomial
//! `c_p x^p + ... + c_1 x + c_0`. Carrying in base two is what makes the
//! reduction rules `2 x^(t-1) = x^t` and `x + 1 = x^2 - 1` hold, so the
//! arithmetic here is plain carried integer arithmetic on 64-bit limbs and
//! the polynomial view (exponents, text form) is derived on demand.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Shl};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const LIMB_BITS: u64 = 64;
/// Largest power of ten that fits in a limb.
const DEC_CHUNK: u64 = 10_000_000_000_000_000_000;
const DEC_CHUNK_DIGITS: usize = 19;

/// Arbitrary-precision unsigned integer, least-significant limb first.
///
/// The limb vector never carries zero high limbs, so zero is the empty
/// vector and structural equality is numeric equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitPoly {
    limbs: Vec<u64>,
}

impl BitPoly {
    pub const fn zero() -> Self {
        BitPoly { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        BitPoly { limbs: vec![1] }
    }

    pub fn from_u64(v: u64) -> Self {
        let mut r = BitPoly { limbs: vec![v] };
        r.normalize();
        r
    }

    pub fn from_u128(v: u128) -> Self {
        let mut r = BitPoly {
            limbs: vec![v as u64, (v >> 64) as u64],
        };
        r.normalize();
        r
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    pub fn to_u128(&self) -> Option<u128> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0] as u128),
            2 => Some(self.limbs[0] as u128 | (self.limbs[1] as u128) << 64),
            _ => None,
        }
    }

    /// Little-endian limbs of the canonical form.
    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    fn from_limbs(limbs: Vec<u64>) -> Self {
        let mut r = BitPoly { limbs };
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    /// The monomial `x^e`.
    pub fn pow2(e: u64) -> Self {
        let mut r = BitPoly::zero();
        r.set_bit(e);
        r
    }

    /// `Σ 2^e` over the distinct exponents in `exps`; repeats are ignored.
    pub fn from_exponents<I: IntoIterator<Item = u64>>(exps: I) -> Self {
        let mut r = BitPoly::zero();
        for e in exps {
            r.set_bit(e);
        }
        r
    }

    fn set_bit(&mut self, e: u64) {
        let limb = (e / LIMB_BITS) as usize;
        if self.limbs.len() <= limb {
            self.limbs.resize(limb + 1, 0);
        }
        self.limbs[limb] |= 1 << (e % LIMB_BITS);
    }

    pub fn bit(&self, e: u64) -> bool {
        let limb = (e / LIMB_BITS) as usize;
        self.limbs
            .get(limb)
            .is_some_and(|w| w >> (e % LIMB_BITS) & 1 == 1)
    }

    /// Set-bit exponents in ascending order.
    pub fn exponents(&self) -> impl DoubleEndedIterator<Item = u64> + '_ {
        self.limbs.iter().enumerate().flat_map(|(i, &w)| {
            let base = i as u64 * LIMB_BITS;
            (0..LIMB_BITS)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| base + b)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    pub fn is_odd(&self) -> bool {
        self.limbs.first().is_some_and(|w| w & 1 == 1)
    }

    /// Low 64 bits.
    pub fn low_u64(&self) -> u64 {
        self.limbs.first().copied().unwrap_or(0)
    }

    /// Number of significant bits; zero has none.
    pub fn bit_len(&self) -> u64 {
        match self.limbs.last() {
            None => 0,
            Some(&top) => {
                (self.limbs.len() as u64 - 1) * LIMB_BITS + (LIMB_BITS - top.leading_zeros() as u64)
            }
        }
    }

    /// Index of the highest set bit, i.e. the polynomial degree.
    pub fn degree(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::Zero);
        }
        Ok(self.bit_len() - 1)
    }

    /// Number of non-zero coefficients.
    pub fn term_count(&self) -> u64 {
        self.limbs.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Largest `t` with `2^t | self`.
    pub fn two_adic_valuation(&self) -> Result<u64> {
        let (i, w) = self
            .limbs
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .ok_or(Error::Zero)?;
        Ok(i as u64 * LIMB_BITS + w.trailing_zeros() as u64)
    }

    /// `self * m + a` for word-sized `m` and `a`.
    pub fn mul_small_add(&self, m: u64, a: u64) -> Self {
        let mut out = Vec::with_capacity(self.limbs.len() + 1);
        let mut carry = a as u128;
        for &w in &self.limbs {
            let t = w as u128 * m as u128 + carry;
            out.push(t as u64);
            carry = t >> 64;
        }
        if carry != 0 {
            out.push(carry as u64);
        }
        BitPoly::from_limbs(out)
    }

    /// Quotient and remainder by a non-zero word.
    pub fn div_rem_small(&self, d: u64) -> (Self, u64) {
        assert!(d != 0, "division by zero");
        let mut q = vec![0u64; self.limbs.len()];
        let mut rem: u128 = 0;
        for i in (0..self.limbs.len()).rev() {
            let cur = rem << 64 | self.limbs[i] as u128;
            q[i] = (cur / d as u128) as u64;
            rem = cur % d as u128;
        }
        (BitPoly::from_limbs(q), rem as u64)
    }

    pub fn checked_sub(&self, other: &BitPoly) -> Result<Self> {
        if *self < *other {
            return Err(Error::Underflow);
        }
        let mut out = self.limbs.clone();
        let mut borrow = false;
        for (i, slot) in out.iter_mut().enumerate() {
            let b = other.limbs.get(i).copied().unwrap_or(0);
            let (d1, o1) = slot.overflowing_sub(b);
            let (d2, o2) = d1.overflowing_sub(borrow as u64);
            *slot = d2;
            borrow = o1 || o2;
            if !borrow && i >= other.limbs.len() {
                break;
            }
        }
        debug_assert!(!borrow);
        Ok(BitPoly::from_limbs(out))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = BitPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Division by `2^k`, which must be exact.
    pub fn shr_exact(&self, k: u64) -> Result<Self> {
        if !self.is_zero() && self.two_adic_valuation()? < k {
            return Err(Error::NotDivisible {
                value: self.to_decimal_string(),
                shift: k,
            });
        }
        Ok(self.shr_floor(k))
    }

    fn shr_floor(&self, k: u64) -> Self {
        let skip = (k / LIMB_BITS) as usize;
        if skip >= self.limbs.len() {
            return BitPoly::zero();
        }
        let s = (k % LIMB_BITS) as u32;
        let src = &self.limbs[skip..];
        let out = if s == 0 {
            src.to_vec()
        } else {
            (0..src.len())
                .map(|i| {
                    let hi = src.get(i + 1).map_or(0, |w| w << (64 - s));
                    src[i] >> s | hi
                })
                .collect()
        };
        BitPoly::from_limbs(out)
    }

    fn shl_bits(&self, k: u64) -> Self {
        if self.is_zero() {
            return BitPoly::zero();
        }
        let skip = (k / LIMB_BITS) as usize;
        let s = (k % LIMB_BITS) as u32;
        let mut out = vec![0u64; skip];
        if s == 0 {
            out.extend_from_slice(&self.limbs);
        } else {
            let mut carry = 0u64;
            for &w in &self.limbs {
                out.push(w << s | carry);
                carry = w >> (64 - s);
            }
            out.push(carry);
        }
        BitPoly::from_limbs(out)
    }

    /// Parses `term ("+" term)*` with `term := "x^" INT | "x" | "1"`,
    /// `INT >= 2`, terms in any order. The lone string `"0"` is zero.
    pub fn parse_poly(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed == "0" {
            return Ok(BitPoly::zero());
        }
        let syntax = |pos: usize, msg: &str| Error::PolySyntax {
            pos,
            msg: msg.to_string(),
        };
        let mut seen = BTreeSet::new();
        let mut offset = 0;
        for raw in text.split('+') {
            let lead = raw.len() - raw.trim_start().len();
            let term = raw.trim();
            let pos = offset + lead;
            offset += raw.len() + 1;
            let exp = match term {
                "" => return Err(syntax(pos, "empty term")),
                "1" => 0,
                "x" => 1,
                t => {
                    let digits = t
                        .strip_prefix("x^")
                        .ok_or_else(|| syntax(pos, "expected \"x^K\", \"x\" or \"1\""))?;
                    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(syntax(pos + 2, "exponent must be a decimal integer"));
                    }
                    let e: u64 = digits
                        .parse()
                        .map_err(|_| syntax(pos + 2, "exponent too large"))?;
                    if e < 2 {
                        return Err(syntax(pos + 2, "explicit exponent must be at least 2"));
                    }
                    e
                }
            };
            if !seen.insert(exp) {
                return Err(Error::DuplicateExponent(exp));
            }
        }
        Ok(BitPoly::from_exponents(seen))
    }

    /// Canonical text, descending exponents; zero renders as `"0"`.
    pub fn format_poly(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let terms: Vec<String> = self.exponents().rev().map(term_text).collect();
        terms.join("+")
    }

    /// Ascending-exponent rendering (`1+x^4` style).
    pub fn format_poly_ascending(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let terms: Vec<String> = self.exponents().map(term_text).collect();
        terms.join("+")
    }

    pub fn from_decimal_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidDecimal(s.to_string()));
        }
        let bytes = s.as_bytes();
        let mut acc = BitPoly::zero();
        let head = bytes.len() % DEC_CHUNK_DIGITS;
        let mut chunks: Vec<&[u8]> = Vec::new();
        if head > 0 {
            chunks.push(&bytes[..head]);
        }
        chunks.extend(bytes[head..].chunks(DEC_CHUNK_DIGITS));
        for chunk in chunks {
            let mut v = 0u64;
            for &b in chunk {
                v = v * 10 + (b - b'0') as u64;
            }
            let scale = 10u64.pow(chunk.len() as u32);
            acc = acc.mul_small_add(scale, v);
        }
        Ok(acc)
    }

    pub fn to_decimal_string(&self) -> String {
        if let Some(v) = self.to_u128() {
            return v.to_string();
        }
        let mut parts = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.div_rem_small(DEC_CHUNK);
            parts.push(r);
            cur = q;
        }
        let mut out = parts.pop().map(|p| p.to_string()).unwrap_or_default();
        for p in parts.iter().rev() {
            out.push_str(&format!("{p:019}"));
        }
        out
    }
}

fn term_text(e: u64) -> String {
    match e {
        0 => "1".to_string(),
        1 => "x".to_string(),
        e => format!("x^{e}"),
    }
}

impl Ord for BitPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for BitPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a BitPoly> for &'a BitPoly {
    type Output = BitPoly;

    fn add(self, other: &BitPoly) -> BitPoly {
        let (long, short) = if self.limbs.len() >= other.limbs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Vec::with_capacity(long.limbs.len() + 1);
        let mut carry = false;
        for (i, &a) in long.limbs.iter().enumerate() {
            let b = short.limbs.get(i).copied().unwrap_or(0);
            let (s1, o1) = a.overflowing_add(b);
            let (s2, o2) = s1.overflowing_add(carry as u64);
            out.push(s2);
            carry = o1 || o2;
        }
        if carry {
            out.push(1);
        }
        BitPoly::from_limbs(out)
    }
}

impl Add for BitPoly {
    type Output = BitPoly;

    fn add(self, other: BitPoly) -> BitPoly {
        &self + &other
    }
}

impl<'a> Mul<&'a BitPoly> for &'a BitPoly {
    type Output = BitPoly;

    fn mul(self, other: &BitPoly) -> BitPoly {
        if self.is_zero() || other.is_zero() {
            return BitPoly::zero();
        }
        let mut out = vec![0u64; self.limbs.len() + other.limbs.len()];
        for (i, &a) in self.limbs.iter().enumerate() {
            let mut carry: u128 = 0;
            for (j, &b) in other.limbs.iter().enumerate() {
                let t = a as u128 * b as u128 + out[i + j] as u128 + carry;
                out[i + j] = t as u64;
                carry = t >> 64;
            }
            out[i + other.limbs.len()] = carry as u64;
        }
        BitPoly::from_limbs(out)
    }
}

impl Mul for BitPoly {
    type Output = BitPoly;

    fn mul(self, other: BitPoly) -> BitPoly {
        &self * &other
    }
}

impl Shl<u64> for &BitPoly {
    type Output = BitPoly;

    fn shl(self, k: u64) -> BitPoly {
        self.shl_bits(k)
    }
}

impl Shl<u64> for BitPoly {
    type Output = BitPoly;

    fn shl(self, k: u64) -> BitPoly {
        self.shl_bits(k)
    }
}

impl From<u64> for BitPoly {
    fn from(v: u64) -> Self {
        BitPoly::from_u64(v)
    }
}

impl From<u32> for BitPoly {
    fn from(v: u32) -> Self {
        BitPoly::from_u64(v as u64)
    }
}

impl From<u128> for BitPoly {
    fn from(v: u128) -> Self {
        BitPoly::from_u128(v)
    }
}

impl FromStr for BitPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BitPoly::from_decimal_str(s)
    }
}

impl fmt::Display for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad_integral(true, "", &self.to_decimal_string())
    }
}

impl fmt::Debug for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitPoly({})", self.to_decimal_string())
    }
}

impl Serialize for BitPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal_string())
    }
}

impl<'de> Deserialize<'de> for BitPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BitPoly::from_decimal_str(&s).map_err(serde::de::Error::custom)
    }
}
