use rayon::prelude::*;
use serde::Serialize;

use crate::bitpoly::BitPoly;
use crate::collatz::require_odd;
use crate::error::{Error, Result};

/// Odd values by their three low bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ResidueClass {
    /// `...001`: the step exponent is exactly 2.
    C1,
    /// `...011`: exponent 1.
    C2,
    /// `...101`: exponent at least 3.
    C3,
    /// `...111`: exponent 1.
    C4,
}

impl ResidueClass {
    pub const ALL: [ResidueClass; 4] = [
        ResidueClass::C1,
        ResidueClass::C2,
        ResidueClass::C3,
        ResidueClass::C4,
    ];

    fn from_low_bits(low: u64) -> Self {
        match low & 7 {
            1 => ResidueClass::C1,
            3 => ResidueClass::C2,
            5 => ResidueClass::C3,
            7 => ResidueClass::C4,
            _ => unreachable!("even value"),
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Whether a step exponent is allowed for this class.
    pub fn admits(self, q: u64) -> bool {
        match self {
            ResidueClass::C1 => q == 2,
            ResidueClass::C2 | ResidueClass::C4 => q == 1,
            ResidueClass::C3 => q >= 3,
        }
    }
}

pub fn residue_class(n: &BitPoly) -> Result<ResidueClass> {
    require_odd(n)?;
    Ok(ResidueClass::from_low_bits(n.low_u64()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassStats {
    pub class: ResidueClass,
    pub count: u64,
    pub q_sum: u64,
    pub min_q: Option<u64>,
    pub max_q: Option<u64>,
    pub mean_q: Option<f64>,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub lo: BitPoly,
    pub hi: BitPoly,
    pub total: u64,
    pub q_sum: u64,
    pub mean_q: f64,
    pub classes: Vec<ClassStats>,
}

impl CensusReport {
    pub fn class(&self, c: ResidueClass) -> &ClassStats {
        &self.classes[c.index()]
    }

    /// True when every class is populated and its exponents obey the
    /// class law.
    pub fn class_laws_hold(&self) -> bool {
        self.classes.iter().all(|s| {
            s.count == 0
                || (s.class.admits(s.min_q.unwrap_or(0)) && s.class.admits(s.max_q.unwrap_or(0)))
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    count: [u64; 4],
    q_sum: [u64; 4],
    min_q: [u64; 4],
    max_q: [u64; 4],
}

impl Tally {
    fn new() -> Self {
        Tally {
            min_q: [u64::MAX; 4],
            ..Default::default()
        }
    }

    fn record(&mut self, n: u64) {
        let c = ResidueClass::from_low_bits(n).index();
        let q = (3 * n as u128 + 1).trailing_zeros() as u64;
        self.count[c] += 1;
        self.q_sum[c] += q;
        self.min_q[c] = self.min_q[c].min(q);
        self.max_q[c] = self.max_q[c].max(q);
    }

    fn merge(mut self, other: Tally) -> Tally {
        for i in 0..4 {
            self.count[i] += other.count[i];
            self.q_sum[i] += other.q_sum[i];
            self.min_q[i] = self.min_q[i].min(other.min_q[i]);
            self.max_q[i] = self.max_q[i].max(other.max_q[i]);
        }
        self
    }
}

const CHUNK: u64 = 1 << 16;

/// One step applied to every odd `n` in `[lo, hi)`, tallied per class.
pub fn census(lo: &BitPoly, hi: &BitPoly) -> Result<CensusReport> {
    let (a, b) = match (lo.to_u64(), hi.to_u64()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::InvalidRange(
                "census bounds must fit in 64 bits".into(),
            ))
        }
    };
    if a >= b {
        return Err(Error::InvalidRange(format!("[{a}, {b}) is empty")));
    }
    let first = a | 1;
    if first >= b {
        return Err(Error::InvalidRange(format!("[{a}, {b}) has no odd values")));
    }
    let chunks = (b - first).div_ceil(CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let start = first + i * CHUNK;
            let end = (start + CHUNK).min(b);
            let mut t = Tally::new();
            for n in (start..end).step_by(2) {
                t.record(n);
            }
            t
        })
        .reduce(Tally::new, Tally::merge);

    let total: u64 = tally.count.iter().sum();
    let q_sum: u64 = tally.q_sum.iter().sum();
    let classes = ResidueClass::ALL
        .iter()
        .map(|&class| {
            let i = class.index();
            let count = tally.count[i];
            ClassStats {
                class,
                count,
                q_sum: tally.q_sum[i],
                min_q: (count > 0).then_some(tally.min_q[i]),
                max_q: (count > 0).then_some(tally.max_q[i]),
                mean_q: (count > 0).then(|| tally.q_sum[i] as f64 / count as f64),
                fraction: count as f64 / total as f64,
            }
        })
        .collect();
    Ok(CensusReport {
        lo: lo.clone(),
        hi: hi.clone(),
        total,
        q_sum,
        mean_q: q_sum as f64 / total as f64,
        classes,
    })
}
