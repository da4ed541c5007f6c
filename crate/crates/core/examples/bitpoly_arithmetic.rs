// Odd integers as binary polynomials: parsing, printing and exact
// multi-limb arithmetic.

use polycollatz::BitPoly;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = BitPoly::parse_poly("x^4 + x + 1")?;
    println!("{} = {}", f.format_poly(), f);
    println!(
        "degree {}, {} terms, exponents {:?}",
        f.degree()?,
        f.term_count(),
        f.exponents().collect::<Vec<_>>()
    );

    // (x+1) F + 1 is 3n + 1; its 2-adic valuation is the step exponent.
    let t = f.mul_small_add(3, 1);
    let q = t.two_adic_valuation()?;
    println!("3n+1 = {} = {} (divisible by 2^{q})", t, t.format_poly());

    let big: BitPoly = "340282366920938463463374607431768211457".parse()?;
    let square = &big * &big;
    println!("{big}^2 has {} bits: {square}", square.bit_len());
    let (quot, rem) = square.div_rem_small(1_000_000_007);
    println!(
        "mod 1e9+7: {rem}, quotient has {} limbs",
        quot.limbs().len()
    );

    let u3 = BitPoly::from_exponents([0, 2, 4, 6]);
    println!("{} in ascending order: {}", u3, u3.format_poly_ascending());
    Ok(())
}

fn main() {
    run_example().expect("bitpoly example");
}
