// Follow 27 down to 1 and print every step with its exponent and degree.

use polycollatz::collatz::{degree_estimate, trajectory, TrajectoryLimits};
use polycollatz::BitPoly;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let start = BitPoly::from_u64(27);
    let t = trajectory(&start, TrajectoryLimits::default())?;
    let p = t.start_degree();
    let mut q_sum = 0;
    println!(
        "{:>3} {:>2} {:>6} {:>3} {:>4}  poly",
        "l", "q", "value", "deg", "est"
    );
    for (i, s) in t.steps.iter().enumerate() {
        q_sum += s.q;
        let l = i as u64 + 1;
        println!(
            "{l:>3} {:>2} {:>6} {:>3} {:>4}  {}",
            s.q,
            s.value,
            s.degree,
            degree_estimate(p, l, q_sum),
            s.value.format_poly()
        );
    }
    println!(
        "k = {}, sum q = {}, max degree = {}, peak = {}",
        t.k,
        t.q_sum,
        t.max_degree,
        t.max_value()
    );
    println!("{}", t.to_json()?);
    Ok(())
}

fn main() {
    run_example().expect("trajectory example");
}
