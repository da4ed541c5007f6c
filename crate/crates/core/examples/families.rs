// Closed-form families and the exact identities that hold for them.

use polycollatz::collatz::{
    check_corollary1, collatz_step, family_f, family_g, family_h, family_mersenne, family_u,
    g_relations_check, h_chain_check, mersenne_prefix_check, trajectory, TrajectoryLimits,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = family_f(4, &[1, 3])?;
    println!("F(4; 1,3) = {} = {}", f, f.format_poly());

    for k in 0..4 {
        let u = family_u(k);
        let (v, q) = collatz_step(&u)?;
        println!("U_{k} = {u:<4} -> {v} with q = {q}");
    }

    for p in [2, 4, 6] {
        let m = family_mersenne(p)?;
        let g = family_g(p);
        println!(
            "p = {p}: {m} reaches G = {} after {p} unit steps: {}",
            g.format_poly(),
            mersenne_prefix_check(p)?
        );
        let rel = g_relations_check(p)?;
        println!(
            "  second-step exponent r = {}, relations hold: {}",
            rel.r, rel.ok
        );
    }

    for index in [4, 10, 16] {
        let h = family_h(index)?;
        let t = trajectory(&h, TrajectoryLimits::default())?;
        println!(
            "H_{index} = {h}: chain {} k = {}",
            h_chain_check(index / 2)?,
            t.k
        );
    }

    // Lifting 5 by j keeps the image 1 and adds 2j to the exponent.
    for j in 1..=3 {
        println!(
            "corollary 1 at F = 5, j = {j}: {}",
            check_corollary1(&family_f(2, &[])?, j)?
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("families example");
}
