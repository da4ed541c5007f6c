// Residue-class statistics of one step over a range of odd values.

use polycollatz::analysis::{census, emit};
use polycollatz::BitPoly;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let r = census(&BitPoly::from_u64(3), &BitPoly::pow2(20))?;
    println!(
        "{} odd values, mean q = {:.4}, class laws hold: {}",
        r.total,
        r.mean_q,
        r.class_laws_hold()
    );
    for c in &r.classes {
        println!(
            "{:?}: count {:>6}  q in [{}, {}]  mean {:.4}",
            c.class,
            c.count,
            c.min_q.unwrap_or(0),
            c.max_q.unwrap_or(0),
            c.mean_q.unwrap_or(f64::NAN)
        );
    }
    print!("{}", emit::to_json(&r.classes)?);
    Ok(())
}

fn main() {
    run_example().expect("census example");
}
