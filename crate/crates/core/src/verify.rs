//! Desk-scale convergence sweep over odd integers.
//!
//! Each odd `n` is iterated until it reaches 1 or, with early exit, drops
//! below `max(n, floor)`; under an ascending sweep everything smaller is
//! already covered. The range is cut into fixed-size chunks that a worker
//! pool processes independently. Records are merged with an
//! order-independent maximum (ties go to the smaller origin), so the
//! report does not depend on the worker count or on checkpoint boundaries.

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitpoly::BitPoly;
use crate::error::{Error, Result};

pub const CHECKPOINT_VERSION: u32 = 1;
const CHUNK: u64 = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyPolicy {
    pub workers: usize,
    pub step_limit: u64,
    pub floor: BitPoly,
    pub early_exit: bool,
}

impl Default for VerifyPolicy {
    fn default() -> Self {
        VerifyPolicy {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            step_limit: 1_000_000,
            floor: BitPoly::one(),
            early_exit: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakRecord {
    pub value: BitPoly,
    pub origin: BitPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub value: u64,
    pub origin: BitPoly,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Records {
    /// Largest odd value met on any walk.
    pub max_odd_peak: Option<PeakRecord>,
    /// Most steps taken by one walk.
    pub max_k: Option<CountRecord>,
    /// Largest single-step exponent.
    pub max_q: Option<CountRecord>,
}

fn keep_peak(a: Option<PeakRecord>, b: Option<PeakRecord>) -> Option<PeakRecord> {
    match (a, b) {
        (Some(a), Some(b)) => {
            if (&b.value, &a.origin) > (&a.value, &b.origin) {
                Some(b)
            } else {
                Some(a)
            }
        }
        (a, b) => a.or(b),
    }
}

fn keep_count(a: Option<CountRecord>, b: Option<CountRecord>) -> Option<CountRecord> {
    match (a, b) {
        (Some(a), Some(b)) => {
            if (b.value, &a.origin) > (a.value, &b.origin) {
                Some(b)
            } else {
                Some(a)
            }
        }
        (a, b) => a.or(b),
    }
}

impl Records {
    pub fn merge(self, other: Records) -> Records {
        Records {
            max_odd_peak: keep_peak(self.max_odd_peak, other.max_odd_peak),
            max_k: keep_count(self.max_k, other.max_k),
            max_q: keep_count(self.max_q, other.max_q),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cursor {
    /// Every odd value below this (and at least `lo`) has been swept.
    pub done_upto: BitPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RangeReport {
    pub lo: BitPoly,
    pub hi: BitPoly,
    pub floor: BitPoly,
    pub verified: bool,
    /// Origins whose walk hit the step limit.
    pub counterexamples: Vec<BitPoly>,
    pub records: Records,
    /// Wall time of the call that produced this report; not serialized so
    /// that reports are reproducible byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
    pub checkpoint: Cursor,
}

impl RangeReport {
    pub fn is_complete(&self) -> bool {
        self.checkpoint.done_upto >= self.hi
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

#[derive(Debug, Default)]
struct Sweep {
    counterexamples: Vec<u64>,
    records: Records,
}

impl Sweep {
    fn merge(mut self, other: Sweep) -> Sweep {
        self.counterexamples.extend(other.counterexamples);
        self.records = self.records.merge(other.records);
        self
    }
}

/// Outcome of one walk.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Walk {
    peak: BitPoly,
    k: u64,
    max_q: u64,
    converged: bool,
}

fn walk(n: u64, threshold: u64, step_limit: u64, early_exit: bool) -> Walk {
    let stop = |v: u128| v == 1 || (early_exit && v < threshold as u128);
    let mut v = n as u128;
    let (mut peak, mut k, mut max_q) = (v, 0, 0);
    while !stop(v) {
        if k >= step_limit {
            return Walk {
                peak: BitPoly::from_u128(peak),
                k,
                max_q,
                converged: false,
            };
        }
        let Some(t) = v.checked_mul(3).and_then(|t| t.checked_add(1)) else {
            return walk_big(
                BitPoly::from_u128(v),
                peak,
                k,
                max_q,
                threshold,
                step_limit,
                early_exit,
            );
        };
        let q = t.trailing_zeros() as u64;
        v = t >> q;
        k += 1;
        max_q = max_q.max(q);
        peak = peak.max(v);
    }
    Walk {
        peak: BitPoly::from_u128(peak),
        k,
        max_q,
        converged: true,
    }
}

/// Continues a walk on multi-limb values once `3v + 1` leaves `u128`.
fn walk_big(
    mut v: BitPoly,
    peak: u128,
    mut k: u64,
    mut max_q: u64,
    threshold: u64,
    step_limit: u64,
    early_exit: bool,
) -> Walk {
    let threshold = BitPoly::from_u64(threshold);
    let mut peak = BitPoly::from_u128(peak).max(v.clone());
    while !(v.is_one() || (early_exit && v < threshold)) {
        if k >= step_limit {
            return Walk {
                peak,
                k,
                max_q,
                converged: false,
            };
        }
        let t = v.mul_small_add(3, 1);
        let q = t.two_adic_valuation().expect("3v+1 > 0");
        v = t.shr_exact(q).expect("q is the valuation");
        k += 1;
        max_q = max_q.max(q);
        if v > peak {
            peak = v.clone();
        }
    }
    Walk {
        peak,
        k,
        max_q,
        converged: true,
    }
}

fn sweep_chunk(start: u64, end: u64, floor: u64, policy: &VerifyPolicy) -> Sweep {
    let mut s = Sweep::default();
    let mut peak: Option<(BitPoly, u64)> = None;
    let mut max_k: Option<(u64, u64)> = None;
    let mut max_q: Option<(u64, u64)> = None;
    let mut n = start | 1;
    while n < end {
        let w = walk(n, n.max(floor), policy.step_limit, policy.early_exit);
        if !w.converged {
            s.counterexamples.push(n);
        }
        // Ascending n, so strict comparisons keep the smallest origin.
        if peak.as_ref().is_none_or(|(p, _)| w.peak > *p) {
            peak = Some((w.peak, n));
        }
        if max_k.is_none_or(|(k, _)| w.k > k) {
            max_k = Some((w.k, n));
        }
        if w.k > 0 && max_q.is_none_or(|(q, _)| w.max_q > q) {
            max_q = Some((w.max_q, n));
        }
        n += 2;
    }
    let origin = BitPoly::from_u64;
    s.records = Records {
        max_odd_peak: peak.map(|(value, o)| PeakRecord {
            value,
            origin: origin(o),
        }),
        max_k: max_k.map(|(value, o)| CountRecord {
            value,
            origin: origin(o),
        }),
        max_q: max_q.map(|(value, o)| CountRecord {
            value,
            origin: origin(o),
        }),
    };
    s
}

fn sweep(from: u64, to: u64, floor: u64, policy: &VerifyPolicy) -> Result<Sweep> {
    if from >= to {
        return Ok(Sweep::default());
    }
    let chunks = (to - from).div_ceil(CHUNK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(policy.workers)
        .build()
        .map_err(|e| Error::OutOfRange(format!("worker pool: {e}")))?;
    let parts: Vec<Sweep> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|i| {
                let start = from + i * CHUNK;
                sweep_chunk(start, (start + CHUNK).min(to), floor, policy)
            })
            .collect()
    });
    Ok(parts.into_iter().fold(Sweep::default(), Sweep::merge))
}

fn native(v: &BitPoly, what: &str) -> Result<u64> {
    v.to_u64()
        .ok_or_else(|| Error::InvalidRange(format!("{what} {v} exceeds the 64-bit sweep range")))
}

fn validate(lo: &BitPoly, hi: &BitPoly, policy: &VerifyPolicy) -> Result<(u64, u64, u64)> {
    if policy.workers == 0 {
        return Err(Error::ZeroWorkers);
    }
    let (a, b, f) = (
        native(lo, "lo")?,
        native(hi, "hi")?,
        native(&policy.floor, "floor")?,
    );
    if a < 1 || a >= b {
        return Err(Error::InvalidRange(format!(
            "need 1 <= lo < hi, got [{a}, {b})"
        )));
    }
    if f > a {
        return Err(Error::InvalidRange(format!("floor {f} is above lo {a}")));
    }
    Ok((a, b, f))
}

/// Sweeps every odd value in `[lo, hi)`.
pub fn verify_range(lo: &BitPoly, hi: &BitPoly, policy: &VerifyPolicy) -> Result<RangeReport> {
    verify_partial(lo, hi, hi, policy)
}

/// Sweeps `[lo, stop_at)` of the range `[lo, hi)` and leaves the cursor at
/// `stop_at`, ready for [`resume`] or [`checkpoint_save`].
pub fn verify_partial(
    lo: &BitPoly,
    hi: &BitPoly,
    stop_at: &BitPoly,
    policy: &VerifyPolicy,
) -> Result<RangeReport> {
    validate(lo, hi, policy)?;
    let empty = RangeReport {
        lo: lo.clone(),
        hi: hi.clone(),
        floor: policy.floor.clone(),
        verified: false,
        counterexamples: Vec::new(),
        records: Records::default(),
        elapsed: Duration::ZERO,
        checkpoint: Cursor {
            done_upto: lo.clone(),
        },
    };
    advance(empty, stop_at, policy)
}

/// Continues a partial report to its upper bound.
pub fn resume(report: RangeReport, policy: &VerifyPolicy) -> Result<RangeReport> {
    let hi = report.hi.clone();
    advance(report, &hi, policy)
}

fn advance(
    mut report: RangeReport,
    stop_at: &BitPoly,
    policy: &VerifyPolicy,
) -> Result<RangeReport> {
    let (_, hi, floor) = validate(
        &report.lo,
        &report.hi,
        &VerifyPolicy {
            floor: report.floor.clone(),
            ..policy.clone()
        },
    )?;
    let from = native(&report.checkpoint.done_upto, "cursor")?;
    let to = native(stop_at, "stop")?.min(hi);
    let started = Instant::now();
    if to > from {
        let s = sweep(from, to, floor, policy)?;
        report.records = std::mem::take(&mut report.records).merge(s.records);
        report
            .counterexamples
            .extend(s.counterexamples.into_iter().map(BitPoly::from_u64));
        report.counterexamples.sort();
        report.checkpoint.done_upto = BitPoly::from_u64(to);
    }
    report.elapsed = started.elapsed();
    report.verified = report.is_complete() && report.counterexamples.is_empty();
    Ok(report)
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointHeader {
    version: u32,
    lo: BitPoly,
    hi: BitPoly,
    floor: BitPoly,
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointLine {
    done_upto: BitPoly,
    records: Records,
    #[serde(default)]
    counterexamples: Vec<BitPoly>,
}

/// Writes a JSON-lines checkpoint: a header line, then one progress line.
pub fn checkpoint_save(report: &RangeReport, path: &Path) -> Result<()> {
    let header = CheckpointHeader {
        version: CHECKPOINT_VERSION,
        lo: report.lo.clone(),
        hi: report.hi.clone(),
        floor: report.floor.clone(),
    };
    let line = CheckpointLine {
        done_upto: report.checkpoint.done_upto.clone(),
        records: report.records.clone(),
        counterexamples: report.counterexamples.clone(),
    };
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        writeln!(f, "{}", serde_json::to_string(&header)?)?;
        writeln!(f, "{}", serde_json::to_string(&line)?)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Loads a checkpoint without sweeping further.
pub fn checkpoint_load(path: &Path) -> Result<RangeReport> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header_line = lines
        .next()
        .ok_or_else(|| Error::Checkpoint("empty checkpoint file".into()))?;
    let header: CheckpointHeader = serde_json::from_str(header_line)
        .map_err(|e| Error::Checkpoint(format!("bad header: {e}")))?;
    if header.version != CHECKPOINT_VERSION {
        return Err(Error::Checkpoint(format!(
            "version {} is not supported (expected {CHECKPOINT_VERSION})",
            header.version
        )));
    }
    let last = lines
        .next_back()
        .ok_or_else(|| Error::Checkpoint("no progress line".into()))?;
    let progress: CheckpointLine = serde_json::from_str(last)
        .map_err(|e| Error::Checkpoint(format!("bad progress line: {e}")))?;
    if progress.done_upto < header.lo || progress.done_upto > header.hi {
        return Err(Error::Checkpoint(format!(
            "cursor {} outside [{}, {}]",
            progress.done_upto, header.lo, header.hi
        )));
    }
    let mut report = RangeReport {
        lo: header.lo,
        hi: header.hi,
        floor: header.floor,
        verified: false,
        counterexamples: progress.counterexamples,
        records: progress.records,
        elapsed: Duration::ZERO,
        checkpoint: Cursor {
            done_upto: progress.done_upto,
        },
    };
    report.verified = report.is_complete() && report.counterexamples.is_empty();
    Ok(report)
}

/// Loads a checkpoint and sweeps the rest of its range.
pub fn checkpoint_resume(path: &Path, policy: &VerifyPolicy) -> Result<RangeReport> {
    resume(checkpoint_load(path)?, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BitPoly {
        BitPoly::from_u64(v)
    }

    fn policy(workers: usize) -> VerifyPolicy {
        VerifyPolicy {
            workers,
            ..VerifyPolicy::default()
        }
    }

    #[test]
    fn record_at_27() {
        let r = verify_range(&n(27), &n(29), &policy(1)).unwrap();
        assert!(r.verified);
        assert!(r.counterexamples.is_empty());
        let peak = r.records.max_odd_peak.unwrap();
        assert_eq!((peak.value, peak.origin), (n(3077), n(27)));
        // 27 first drops below itself at 23, after 37 steps.
        assert_eq!(r.records.max_k.unwrap().value, 37);
    }

    #[test]
    fn trivial_range() {
        let r = verify_range(&n(1), &n(3), &policy(1)).unwrap();
        assert!(r.verified);
        assert_eq!(r.records.max_k.unwrap().value, 0);
        assert!(r.records.max_q.is_none());
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(
            verify_range(&n(5), &n(5), &policy(1)),
            Err(Error::InvalidRange(_))
        ));
        assert!(matches!(
            verify_range(&n(0), &n(5), &policy(1)),
            Err(Error::InvalidRange(_))
        ));
        assert!(matches!(
            verify_range(&n(3), &n(9), &policy(0)),
            Err(Error::ZeroWorkers)
        ));
        let p = VerifyPolicy {
            floor: n(11),
            ..policy(1)
        };
        assert!(verify_range(&n(3), &n(9), &p).is_err());
        assert!(verify_range(&n(3), &BitPoly::pow2(70), &policy(1)).is_err());
    }

    #[test]
    fn step_limit_flags_counterexample_candidates() {
        let p = VerifyPolicy {
            step_limit: 3,
            ..policy(2)
        };
        let r = verify_range(&n(25), &n(29), &p).unwrap();
        assert!(!r.verified);
        assert_eq!(r.counterexamples, vec![n(27)]);
    }

    #[test]
    fn early_exit_and_full_walks_agree() {
        let full = VerifyPolicy {
            early_exit: false,
            ..policy(4)
        };
        let a = verify_range(&n(3), &n(1 << 12), &policy(4)).unwrap();
        let b = verify_range(&n(3), &n(1 << 12), &full).unwrap();
        assert_eq!(
            (a.verified, &a.counterexamples),
            (b.verified, &b.counterexamples)
        );
        // Full walks see the whole excursion, so their peak dominates.
        assert!(b.records.max_odd_peak.unwrap().value >= a.records.max_odd_peak.unwrap().value);
    }

    #[test]
    fn promotion_is_invisible() {
        for start in [(1u128 << 127) - 1, u128::MAX / 3, (u128::MAX / 3) - 2] {
            let start = start | 1;
            let fast = {
                let mut w = None;
                let mut v = start;
                // Drive the native loop from a u128 start by hand.
                let (mut peak, mut k, mut max_q) = (v, 0, 0);
                while v != 1 {
                    match v.checked_mul(3).and_then(|t| t.checked_add(1)) {
                        Some(t) => {
                            let q = t.trailing_zeros() as u64;
                            v = t >> q;
                            k += 1;
                            max_q = max_q.max(q);
                            peak = peak.max(v);
                        }
                        None => {
                            w = Some(walk_big(
                                BitPoly::from_u128(v),
                                peak,
                                k,
                                max_q,
                                1,
                                1_000_000,
                                false,
                            ));
                            break;
                        }
                    }
                }
                w.expect("start overflows within a few steps")
            };
            let slow = walk_big(BitPoly::from_u128(start), start, 0, 0, 1, 1_000_000, false);
            assert_eq!(fast, slow);
            assert!(slow.converged);
            assert!(slow.peak >= BitPoly::from_u128(u128::MAX / 3));
        }
    }

    #[test]
    fn checkpoint_errors() {
        let dir = tempfile::tempdir().unwrap();
        let empty = dir.path().join("empty.jsonl");
        fs::write(&empty, "").unwrap();
        assert!(matches!(
            checkpoint_resume(&empty, &policy(1)),
            Err(Error::Checkpoint(_))
        ));
        let bad = dir.path().join("v2.jsonl");
        fs::write(
            &bad,
            "{\"version\":2,\"lo\":\"3\",\"hi\":\"9\",\"floor\":\"1\"}\n",
        )
        .unwrap();
        assert!(matches!(
            checkpoint_resume(&bad, &policy(1)),
            Err(Error::Checkpoint(_))
        ));
        let junk = dir.path().join("junk.jsonl");
        fs::write(&junk, "not json\n").unwrap();
        assert!(matches!(
            checkpoint_resume(&junk, &policy(1)),
            Err(Error::Checkpoint(_))
        ));
    }

    #[test]
    fn checkpoint_file_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.jsonl");
        let r = verify_partial(&n(3), &n(101), &n(51), &policy(1)).unwrap();
        assert!(!r.verified && !r.is_complete());
        checkpoint_save(&r, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], r#"{"version":1,"lo":"3","hi":"101","floor":"1"}"#);
        assert!(lines[1].starts_with(r#"{"done_upto":"51","records":{"max_odd_peak":{"value":"#));
    }
}
