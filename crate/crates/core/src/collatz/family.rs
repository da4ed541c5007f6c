use serde::{Deserialize, Serialize};

use crate::bitpoly::BitPoly;
use crate::error::{Error, Result};

/// A named closed-form family member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Family {
    /// `x^p + Σ x^(k_i) + 1` with every `k_i` in `[1, p-1]`.
    F { p: u64, inner: Vec<u64> },
    /// `Σ_{t=0..k} x^(2t)`.
    U { k: u64 },
    /// `x (x+1)^p - 1`.
    G { p: u64 },
    /// The `H_(4+6t)` recursion; `index` must be `4 mod 6`.
    H { index: u64 },
    /// `x^(p+1) - 1`, the all-ones value of degree `p`.
    Mersenne { p: u64 },
}

impl Family {
    pub fn build(&self) -> Result<BitPoly> {
        match self {
            Family::F { p, inner } => family_f(*p, inner),
            Family::U { k } => Ok(family_u(*k)),
            Family::G { p } => Ok(family_g(*p)),
            Family::H { index } => family_h(*index),
            Family::Mersenne { p } => family_mersenne(*p),
        }
    }
}

pub fn family_f(p: u64, inner: &[u64]) -> Result<BitPoly> {
    if p == 0 {
        return Err(Error::OutOfRange("F family needs p >= 1".into()));
    }
    if let Some(&k) = inner.iter().find(|&&k| k == 0 || k >= p) {
        return Err(Error::OutOfRange(format!(
            "inner exponent {k} outside [1, {}]",
            p - 1
        )));
    }
    Ok(BitPoly::from_exponents(
        [0, p].into_iter().chain(inner.iter().copied()),
    ))
}

pub fn family_u(k: u64) -> BitPoly {
    BitPoly::from_exponents((0..=k).map(|t| 2 * t))
}

pub fn family_g(p: u64) -> BitPoly {
    let three_p = BitPoly::from_u64(3).pow(p);
    (&three_p << 1)
        .checked_sub(&BitPoly::one())
        .expect("2*3^p >= 2")
}

pub fn family_h(index: u64) -> Result<BitPoly> {
    if index < 4 || index % 6 != 4 {
        return Err(Error::OutOfRange(format!(
            "H index {index} must be one of 4, 10, 16, ..."
        )));
    }
    let mut h = BitPoly::from_exponents([0, 1, 3, 4]);
    let seven = BitPoly::from_u64(7);
    let mut t = 0;
    while 4 + 6 * t < index {
        h = &h + &(&seven << (6 * t + 8));
        t += 1;
    }
    Ok(h)
}

pub fn family_mersenne(p: u64) -> Result<BitPoly> {
    if p == 0 {
        return Err(Error::OutOfRange("Mersenne family needs p >= 1".into()));
    }
    Ok(BitPoly::from_exponents(0..=p))
}
