//! Exact identities of the accelerated map, each as a checkable predicate.

use serde::Serialize;

use super::family::{family_g, family_h, family_mersenne, family_u};
use super::{collatz_compose, collatz_step, require_odd, u_of};
use crate::bitpoly::BitPoly;
use crate::error::{Error, Result};

/// Lifting `F -> 1 + x^2 + ... + x^(2j-2) + x^(2j) F` keeps the image of the
/// step and raises its exponent by exactly `2j`.
pub fn check_corollary1(f: &BitPoly, j: u64) -> Result<bool> {
    require_odd(f)?;
    if j == 0 {
        return Err(Error::OutOfRange("lifting count j must be >= 1".into()));
    }
    let (base, q) = collatz_step(f)?;
    let lifted = &family_u(j - 1) + &(f << (2 * j));
    let (image, q_lifted) = collatz_step(&lifted)?;
    Ok(image == base && q_lifted == q + 2 * j)
}

/// The first `p` steps from `2^(p+1) - 1` are all `C_1` and land on
/// `2·3^p - 1`, whose degree is `u(p) + 1`.
pub fn mersenne_prefix_check(p: u64) -> Result<bool> {
    let start = family_mersenne(p)?;
    let (value, qs) = collatz_compose(&start, p)?;
    Ok(qs.iter().all(|&q| q == 1) && value == family_g(p) && value.degree()? == u_of(p) + 1)
}

/// Outcome of the G-family relations for one even `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GRelations {
    pub p: u64,
    /// Exponent of the second step from `G(p)`.
    pub r: u64,
    /// `G(p+1) = (x+1) G(p) + x`.
    pub recurrence: bool,
    /// `C_2[G(p)] = ((x+1)^(p+1) - 1) / x`.
    pub first_step: bool,
    /// `C_r[C_2[G(p)]] = ((x+1)^(p+2) - 1) / x^(r+1)`.
    pub closed_form: bool,
    /// `C_(r+2)[G(p+1)] = C_r[C_2[G(p)]]`.
    pub odd_neighbour: bool,
    /// `G(p+2) = x^(r+2) C_r[C_2[G(p)]] + 1`.
    pub lift: bool,
    pub ok: bool,
}

pub fn g_relations_check(p: u64) -> Result<GRelations> {
    if !p.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!("p must be even, got {p}")));
    }
    let three = BitPoly::from_u64(3);
    let one = BitPoly::one();
    let g = family_g(p);

    let recurrence = family_g(p + 1) == g.mul_small_add(3, 2);

    let (after_two, first_q) = collatz_step(&g)?;
    if first_q != 2 {
        return Err(Error::Identity(format!(
            "first step from G({p}) has q = {first_q}, expected 2"
        )));
    }
    let first_step = after_two == three.pow(p + 1).checked_sub(&one)?.shr_exact(1)?;

    let (second, r) = collatz_step(&after_two)?;
    let closed_form = second == three.pow(p + 2).checked_sub(&one)?.shr_exact(r + 1)?;

    let odd_neighbour = collatz_step(&family_g(p + 1))? == (second.clone(), r + 2);
    let lift = family_g(p + 2) == &(&second << (r + 2)) + &one;

    Ok(GRelations {
        p,
        r,
        recurrence,
        first_step,
        closed_form,
        odd_neighbour,
        lift,
        ok: recurrence && first_step && closed_form && odd_neighbour && lift,
    })
}

/// `H_(2k) -> Σ_{μ=1..k+1} x^(2μ-1) - 1 -> x^(2k+1) - 1` via `C_1` then `C_2`.
pub fn h_chain_check(k: u64) -> Result<bool> {
    let h = family_h(2 * k)?;
    let (first, q1) = collatz_step(&h)?;
    let odd_powers = BitPoly::from_exponents((1..=k + 1).map(|mu| 2 * mu - 1));
    let expect_first = odd_powers.checked_sub(&BitPoly::one())?;
    if q1 != 1 || first != expect_first {
        return Ok(false);
    }
    let (second, q2) = collatz_step(&first)?;
    Ok(q2 == 2 && second == family_mersenne(2 * k)?)
}

/// True iff the step moves `n`; only `n = 1` is fixed.
pub fn fixed_point_check(n: &BitPoly) -> Result<bool> {
    Ok(collatz_step(n)?.0 != *n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BitPoly {
        BitPoly::from_u64(v)
    }

    #[test]
    fn corollary1_examples() {
        assert!(check_corollary1(&n(7), 1).unwrap());
        assert_eq!(collatz_step(&n(29)).unwrap(), (n(11), 3));
        assert!(check_corollary1(&n(1), 1).unwrap());
        assert!(check_corollary1(&n(161), 2).unwrap());
        assert!(check_corollary1(&n(6), 1).is_err());
        assert!(check_corollary1(&n(7), 0).is_err());
    }

    #[test]
    fn mersenne_prefix_examples() {
        assert!(mersenne_prefix_check(1).unwrap());
        assert!(mersenne_prefix_check(2).unwrap());
        assert_eq!(collatz_compose(&n(7), 2).unwrap(), (n(17), vec![1, 1]));
        assert!(mersenne_prefix_check(4).unwrap());
        assert!(mersenne_prefix_check(0).is_err());
    }

    #[test]
    fn g_relations_examples() {
        for (p, r) in [(0, 2), (2, 3), (6, 4), (14, 5), (16, 2), (30, 6)] {
            let g = g_relations_check(p).unwrap();
            assert_eq!(g.r, r, "p = {p}");
            assert!(g.ok, "{g:?}");
        }
        assert!(g_relations_check(3).is_err());
    }

    #[test]
    fn h_chain_examples() {
        assert!(h_chain_check(2).unwrap());
        assert_eq!(collatz_step(&n(27)).unwrap(), (n(41), 1));
        assert_eq!(collatz_step(&n(41)).unwrap(), (n(31), 2));
        assert!(h_chain_check(5).unwrap());
        assert_eq!(collatz_step(&n(1819)).unwrap(), (n(2729), 1));
        assert_eq!(collatz_step(&n(2729)).unwrap(), (n(2047), 2));
        assert!(h_chain_check(8).unwrap());
        assert!(h_chain_check(3).is_err());
    }

    #[test]
    fn fixed_point_examples() {
        assert!(!fixed_point_check(&n(1)).unwrap());
        assert!(fixed_point_check(&n(3)).unwrap());
        assert!(fixed_point_check(&n(2)).is_err());
    }
}
