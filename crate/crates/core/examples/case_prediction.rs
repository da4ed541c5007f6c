// Predict resultants from exponent structure and compare with real steps.

use polycollatz::collatz::{collatz_compose, predict_case};
use polycollatz::BitPoly;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (mut hits, mut none) = (0, 0);
    for n in (3..200u64).step_by(2) {
        let n = BitPoly::from_u64(n);
        match predict_case(&n)? {
            Some(pred) => {
                let (actual, qs) = collatz_compose(&n, pred.ops.len() as u64)?;
                assert_eq!((&actual, &qs), (&pred.predicted, &pred.ops));
                if n.to_u64() < Some(40) {
                    println!(
                        "{:<16} {:?}: -> {} via {:?}",
                        n.format_poly(),
                        pred.rule,
                        pred.predicted,
                        pred.ops
                    );
                }
                hits += 1;
            }
            None => none += 1,
        }
    }
    println!("{hits} predictions confirmed, {none} values without a rule");
    Ok(())
}

fn main() {
    run_example().expect("case prediction example");
}
