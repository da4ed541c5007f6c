// Degree drift along trajectories against the average envelope.

use polycollatz::analysis::drift_report;
use polycollatz::collatz::{family_mersenne, trajectory, TrajectoryLimits};
use polycollatz::BitPoly;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let m = family_mersenne(20)?;
    let t = trajectory(&m, TrajectoryLimits::default())?;
    let r = drift_report(&t, true);
    println!(
        "2^21-1: k = {}, slope {:.4}, {} points above the envelope",
        r.k,
        r.slope.unwrap_or(0.0),
        r.violations
    );
    for pt in r.points.iter().step_by(10) {
        println!(
            "  l = {:>3}  degree {:>3}  bound {:>7.2}",
            pt.l, pt.degree, pt.bound
        );
    }

    let (lo, hi) = (1u64 << 12, 1u64 << 13);
    let mut sum = 0.0;
    for n in (lo + 1..hi).step_by(2) {
        let t = trajectory(&BitPoly::from_u64(n), TrajectoryLimits::default())?;
        sum += drift_report(&t, false).slope.unwrap_or(0.0);
    }
    println!(
        "mean fitted slope over odd starts in [2^12, 2^13): {:.4}",
        sum / ((hi - lo) / 2) as f64
    );
    Ok(())
}

fn main() {
    run_example().expect("drift example");
}
