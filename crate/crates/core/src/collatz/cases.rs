//! Closed-form resultants for odd values with zero, one or two inner
//! terms, and the general `k_1 >= 2` rule.
//!
//! Each rule is a list of exponents (with multiplicity) whose power sum is
//! the predicted odd value, plus the exponents of the steps that reach it.
//! A rule is only reported where its formula is meaningful: every exponent
//! must be non-negative and the carried sum must be odd. Outside that
//! domain the real step has a different exponent and no prediction is made.

use serde::Serialize;

use super::require_odd;
use crate::bitpoly::BitPoly;
use crate::error::Result;

/// Which explicit form matched. `k`, `k1`, `k2` are the inner exponents
/// of `x^p + Σ x^(k_i) + 1` in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseRule {
    /// `x + 1`: `C_4 C_1` reaches 1.
    Linear,
    /// `x^p + 1`, `p >= 3`.
    Binomial,
    /// One inner term at `k = 1`.
    OneInnerLow,
    /// One inner term with `2 <= k <= p-2`.
    OneInnerMiddle,
    /// One inner term at `k = p-1`.
    OneInnerTop,
    /// `k1 = 1, k2 = 2`; the degree grows.
    TwoInnerOneTwo,
    /// `k1 = 1, k2 = 3`.
    TwoInnerOneThree,
    /// `k1 = 1, k2 = 4`.
    TwoInnerOneFour,
    /// `k1 = 1, k2 > 4`.
    TwoInnerOneHigh,
    /// `k1 = 2, k2 = 3`.
    TwoInnerTwoThree,
    /// `k1 = 2, k2 >= 4`.
    TwoInnerTwoHigh,
    /// `k1 >= 3`.
    TwoInnerHigh,
    /// Any number of inner terms with `k1 >= 2` and `k_m < p-1`.
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CasePrediction {
    pub rule: CaseRule,
    pub predicted: BitPoly,
    /// Step exponents in application order.
    pub ops: Vec<u64>,
}

/// Predicts the resultant of `n` from its exponent structure alone, or
/// `None` when no explicit rule applies.
pub fn predict_case(n: &BitPoly) -> Result<Option<CasePrediction>> {
    require_odd(n)?;
    if n.is_one() {
        return Ok(None);
    }
    let p = n.degree()? as i64;
    let inner: Vec<i64> = n
        .exponents()
        .map(|e| e as i64)
        .filter(|&e| e != 0 && e != p)
        .collect();

    let (rule, terms, ops): (CaseRule, Vec<i64>, Vec<u64>) = match inner.as_slice() {
        [] if p == 1 => (CaseRule::Linear, vec![0], vec![1, 4]),
        // x^2 + 1 = 5 steps straight to 1 with q = 4; the formula would
        // give the even value x + 2.
        [] if p == 2 => return Ok(None),
        [] => (CaseRule::Binomial, vec![p - 1, p - 2, 0], vec![2]),
        &[1] => (CaseRule::OneInnerLow, vec![p - 2, p - 5, 0], vec![1, 4]),
        &[k] if k == p - 1 => (
            CaseRule::OneInnerTop,
            vec![p - 1, p - 2, p - 4, p - 5, 0],
            vec![2, 2],
        ),
        &[k] => (
            CaseRule::OneInnerMiddle,
            vec![p - 1, p - 2, k - 1, k - 2, 0],
            vec![2],
        ),
        &[1, 2] => (
            CaseRule::TwoInnerOneTwo,
            vec![p + 1, p - 2, 4, 0],
            vec![1, 1],
        ),
        &[1, 3] => (CaseRule::TwoInnerOneThree, vec![p, p - 1, 4, 0], vec![1]),
        &[1, 4] => (
            CaseRule::TwoInnerOneFour,
            vec![p - 1, p - 4, 3, 1, 0],
            vec![1, 3],
        ),
        &[1, k2] => (
            CaseRule::TwoInnerOneHigh,
            vec![p - 2, p - 5, k2 - 2, k2 - 5, 0],
            vec![1, 4],
        ),
        &[2, 3] => (
            CaseRule::TwoInnerTwoThree,
            vec![p - 2, p - 3, 2, 0],
            vec![3],
        ),
        &[2, k2] => (
            CaseRule::TwoInnerTwoHigh,
            vec![p - 3, p - 4, k2 - 3, k2 - 4, 0],
            vec![4],
        ),
        &[k1, k2] => (
            CaseRule::TwoInnerHigh,
            vec![p - 1, p - 2, k2 - 1, k2 - 2, k1 - 1, k1 - 2, 0],
            vec![2],
        ),
        ks if ks[0] >= 2 && ks[ks.len() - 1] < p - 1 => {
            let mut terms = vec![p - 1, p - 2, 0];
            terms.extend(ks.iter().map(|k| k - 1));
            terms.extend(ks.iter().map(|k| k - 2));
            (CaseRule::General, terms, vec![2])
        }
        _ => return Ok(None),
    };

    Ok(assemble(&terms).map(|predicted| CasePrediction {
        rule,
        predicted,
        ops,
    }))
}

/// Carried sum of `2^e`, or `None` if an exponent is negative or the sum
/// is even.
fn assemble(terms: &[i64]) -> Option<BitPoly> {
    let mut acc = BitPoly::zero();
    for &e in terms {
        if e < 0 {
            return None;
        }
        acc = &acc + &BitPoly::pow2(e as u64);
    }
    acc.is_odd().then_some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collatz::collatz_compose;

    fn n(v: u64) -> BitPoly {
        BitPoly::from_u64(v)
    }

    #[test]
    fn binomial_case() {
        let c = predict_case(&n(9)).unwrap().unwrap();
        assert_eq!(
            (c.rule, c.predicted, c.ops),
            (CaseRule::Binomial, n(7), vec![2])
        );
        assert_eq!(predict_case(&n(5)).unwrap(), None);
        let c = predict_case(&n(3)).unwrap().unwrap();
        assert_eq!((c.predicted, c.ops), (n(1), vec![1, 4]));
    }

    #[test]
    fn carried_two_inner_case() {
        let c = predict_case(&n(45)).unwrap().unwrap();
        assert_eq!(c.rule, CaseRule::TwoInnerTwoThree);
        assert_eq!((c.predicted, c.ops), (n(17), vec![3]));
    }

    #[test]
    fn middle_rule_outside_its_domain() {
        // 37 = x^5+x^2+1: the k=2 term x^0 collides with the constant,
        // giving the even 28; the real step is C_4[37] = 7.
        assert_eq!(predict_case(&n(37)).unwrap(), None);
        assert_eq!(collatz_compose(&n(37), 1).unwrap(), (n(7), vec![4]));
    }

    #[test]
    fn no_rule_for_low_run_with_many_terms() {
        // 1+x+x^3+x^4+x^6: three inner terms starting at k1 = 1
        assert_eq!(predict_case(&n(91)).unwrap(), None);
        assert_eq!(predict_case(&n(1)).unwrap(), None);
        assert!(predict_case(&n(8)).is_err());
    }

    #[test]
    fn every_prediction_matches_actual_steps() {
        let mut hits = 0;
        for v in (3..1u64 << 14).step_by(2) {
            if let Some(c) = predict_case(&n(v)).unwrap() {
                let (value, qs) = collatz_compose(&n(v), c.ops.len() as u64).unwrap();
                assert_eq!(
                    (value, qs),
                    (c.predicted.clone(), c.ops.clone()),
                    "n = {v}: {c:?}"
                );
                hits += 1;
            }
        }
        assert!(hits > 1000);
    }
}
