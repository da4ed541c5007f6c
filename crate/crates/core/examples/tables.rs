// The three reference tables in text, CSV and JSON.

use polycollatz::analysis::{emit, table1, table2, table3};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", emit::to_text(&table1(10)));
    println!();
    print!("{}", emit::to_csv(&table2(12)?)?);
    println!();
    print!("{}", emit::to_json(&table3(16)?)?);
    Ok(())
}

fn main() {
    run_example().expect("tables example");
}
