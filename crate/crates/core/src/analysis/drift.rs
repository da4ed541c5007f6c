use serde::Serialize;

use crate::bitpoly::BitPoly;
use crate::collatz::TrajectoryRecord;

/// Average degree change per step when the mean exponent is 1.75.
pub const GENERIC_SLOPE: f64 = 0.584_962_500_721_156_2 - 0.75;
/// Average degree change per step while every exponent is 1.
pub const MERSENNE_SLOPE: f64 = 0.584_962_500_721_156_2;

/// Average-case upper envelope for the degree after `l` steps from a start
/// of degree `p`.
pub fn drift_bound(p: u64, l: u64, mersenne_related: bool) -> f64 {
    let (p, l) = (p as f64, l as f64);
    if !mersenne_related {
        p + 0.5 + GENERIC_SLOPE * l
    } else if l <= p {
        p + 0.5 + MERSENNE_SLOPE * l
    } else {
        0.5 + GENERIC_SLOPE * l + 1.75 * p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftPoint {
    pub l: u64,
    pub degree: u64,
    pub bound: f64,
    pub exceeds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftReport {
    pub start: BitPoly,
    pub p: u64,
    pub k: u64,
    pub mersenne_related: bool,
    pub points: Vec<DriftPoint>,
    /// Least-squares slope of degree against `l` over `0..=k`.
    pub slope: Option<f64>,
    /// `(D_k - D_0) / k`, the end-to-end degree change per step.
    pub net_drift: Option<f64>,
    /// Steps whose degree lies above the envelope. The envelope is an
    /// average, so this is informational.
    pub violations: u64,
}

pub fn drift_report(t: &TrajectoryRecord, mersenne_related: bool) -> DriftReport {
    let p = t.start_degree();
    let points: Vec<DriftPoint> = t
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let l = i as u64 + 1;
            let bound = drift_bound(p, l, mersenne_related);
            DriftPoint {
                l,
                degree: s.degree,
                bound,
                exceeds: s.degree as f64 > bound,
            }
        })
        .collect();
    let violations = points.iter().filter(|pt| pt.exceeds).count() as u64;
    let net_drift =
        (t.k > 0).then(|| (t.last_value().bit_len() as f64 - 1.0 - p as f64) / t.k as f64);
    DriftReport {
        start: t.start.clone(),
        p,
        k: t.k,
        mersenne_related,
        slope: least_squares_slope(&t.degrees()),
        net_drift,
        points,
        violations,
    }
}

fn least_squares_slope(ys: &[u64]) -> Option<f64> {
    if ys.len() < 2 {
        return None;
    }
    let n = ys.len() as f64;
    let mean_x = (n - 1.0) / 2.0;
    let mean_y = ys.iter().map(|&y| y as f64).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, &y) in ys.iter().enumerate() {
        let dx = x as f64 - mean_x;
        sxy += dx * (y as f64 - mean_y);
        sxx += dx * dx;
    }
    Some(sxy / sxx)
}
