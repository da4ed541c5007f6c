//! The accelerated Collatz operation `C_q[n] = (3n + 1) / 2^q` on odd
//! values, with `q` the full 2-adic valuation of `3n + 1`.

mod cases;
mod family;
mod identity;

pub use cases::{predict_case, CasePrediction, CaseRule};
pub use family::{family_f, family_g, family_h, family_mersenne, family_u, Family};
pub use identity::{
    check_corollary1, fixed_point_check, g_relations_check, h_chain_check, mersenne_prefix_check,
    GRelations,
};

use serde::{Deserialize, Serialize};

use crate::bitpoly::BitPoly;
use crate::error::{Error, Result};

pub(crate) fn require_odd(n: &BitPoly) -> Result<()> {
    if n.is_zero() {
        return Err(Error::Zero);
    }
    if !n.is_odd() {
        return Err(Error::Even(n.to_decimal_string()));
    }
    Ok(())
}

/// One accelerated step: returns the odd value `m` and exponent `q` with
/// `m * 2^q = 3n + 1`.
pub fn collatz_step(n: &BitPoly) -> Result<(BitPoly, u64)> {
    require_odd(n)?;
    let lifted = n.mul_small_add(3, 1);
    let q = lifted.two_adic_valuation()?;
    Ok((lifted.shr_exact(q)?, q))
}

/// Applies [`collatz_step`] `l` times. Unlike [`trajectory`], this does
/// not stop at 1; the self-loop `C_2[1] = 1` is applied as any other step.
pub fn collatz_compose(n: &BitPoly, l: u64) -> Result<(BitPoly, Vec<u64>)> {
    require_odd(n)?;
    let mut cur = n.clone();
    let mut qs = Vec::with_capacity(l as usize);
    for _ in 0..l {
        let (next, q) = collatz_step(&cur)?;
        qs.push(q);
        cur = next;
    }
    Ok((cur, qs))
}

/// Degree of `3^l`: the nearest integer to `l log2(3) - 1/2`, with
/// `u_of(0) = 0`.
pub fn u_of(l: u64) -> u64 {
    if l == 0 {
        return 0;
    }
    (l as f64 * 3f64.log2() - 0.5).round() as u64
}

/// Leading-term power count for the degree after `l` steps from a start
/// of degree `p` with `q_sum` total halvings.
pub fn degree_estimate(p: u64, l: u64, q_sum: u64) -> i64 {
    p as i64 + u_of(l) as i64 + 1 - q_sum as i64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub q: u64,
    pub value: BitPoly,
    pub degree: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    One,
    StepLimit,
    DegreeLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrajectoryLimits {
    pub max_steps: u64,
    pub max_degree: u64,
}

impl Default for TrajectoryLimits {
    fn default() -> Self {
        TrajectoryLimits {
            max_steps: 1_000_000,
            max_degree: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub start: BitPoly,
    pub steps: Vec<StepRecord>,
    pub k: u64,
    pub q_sum: u64,
    pub max_degree: u64,
    pub terminated: Termination,
}

impl TrajectoryRecord {
    pub fn q_sequence(&self) -> Vec<u64> {
        self.steps.iter().map(|s| s.q).collect()
    }

    /// Start value followed by every step value.
    pub fn values(&self) -> impl Iterator<Item = &BitPoly> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.value))
    }

    pub fn last_value(&self) -> &BitPoly {
        self.steps.last().map_or(&self.start, |s| &s.value)
    }

    pub fn start_degree(&self) -> u64 {
        self.start.degree().unwrap_or(0)
    }

    /// Degrees for prefix lengths `0..=k`.
    pub fn degrees(&self) -> Vec<u64> {
        std::iter::once(self.start_degree())
            .chain(self.steps.iter().map(|s| s.degree))
            .collect()
    }

    /// `actual - degree_estimate` for each prefix length `1..=k`.
    pub fn degree_residuals(&self) -> Vec<i64> {
        let p = self.start_degree();
        let mut q_sum = 0;
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                q_sum += s.q;
                s.degree as i64 - degree_estimate(p, i as u64 + 1, q_sum)
            })
            .collect()
    }

    pub fn max_value(&self) -> &BitPoly {
        self.values().max().expect("start is always present")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Iterates [`collatz_step`] from `n` until the value is 1 or a limit is
/// hit. The trajectory of 1 itself is empty.
pub fn trajectory(n: &BitPoly, limits: TrajectoryLimits) -> Result<TrajectoryRecord> {
    require_odd(n)?;
    if limits.max_steps == 0 || limits.max_degree == 0 {
        return Err(Error::OutOfRange(
            "trajectory limits must be positive".into(),
        ));
    }
    let mut steps = Vec::new();
    let mut q_sum = 0;
    let mut cur = n.clone();
    let mut cur_degree = n.degree()?;
    let mut max_degree = cur_degree;
    let terminated = loop {
        if cur.is_one() {
            break Termination::One;
        }
        if cur_degree > limits.max_degree {
            break Termination::DegreeLimit;
        }
        if steps.len() as u64 >= limits.max_steps {
            break Termination::StepLimit;
        }
        let (next, q) = collatz_step(&cur)?;
        cur_degree = next.degree()?;
        max_degree = max_degree.max(cur_degree);
        q_sum += q;
        steps.push(StepRecord {
            q,
            value: next.clone(),
            degree: cur_degree,
        });
        cur = next;
    };
    Ok(TrajectoryRecord {
        start: n.clone(),
        k: steps.len() as u64,
        steps,
        q_sum,
        max_degree,
        terminated,
    })
}
