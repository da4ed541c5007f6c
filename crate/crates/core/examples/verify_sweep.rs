// Parallel sweep of a range with a checkpoint halfway through.

use polycollatz::verify::{
    checkpoint_resume, checkpoint_save, verify_partial, verify_range, VerifyPolicy,
};
use polycollatz::BitPoly;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (lo, mid, hi) = (BitPoly::from_u64(3), BitPoly::pow2(19), BitPoly::pow2(20));
    let policy = VerifyPolicy::default();

    let whole = verify_range(&lo, &hi, &policy)?;
    println!(
        "verified {}: {:?} in {:?}",
        whole.verified, whole.records, whole.elapsed
    );

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("sweep.jsonl");
    checkpoint_save(&verify_partial(&lo, &hi, &mid, &policy)?, &path)?;
    print!("{}", std::fs::read_to_string(&path)?);
    let resumed = checkpoint_resume(&path, &policy)?;
    println!(
        "resumed report equals single run: {}",
        resumed.to_json()? == whole.to_json()?
    );
    Ok(())
}

fn main() {
    run_example().expect("verify example");
}
