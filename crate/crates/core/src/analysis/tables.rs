use num_rational::Ratio;
use serde::Serialize;

use super::emit::Tabular;
use crate::bitpoly::BitPoly;
use crate::collatz::{
    family_g, family_mersenne, g_relations_check, trajectory, u_of, TrajectoryLimits,
};
use crate::error::{Error, Result};

/// `(1+x)^q` for `q <= max_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub q: u64,
    pub degree: u64,
    pub poly: String,
}

impl Tabular for Table1Row {
    const HEADERS: &'static [&'static str] = &["q", "degree", "poly"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.q.to_string(),
            self.degree.to_string(),
            self.poly.clone(),
        ]
    }
}

pub fn table1(max_q: u64) -> Vec<Table1Row> {
    let mut power = BitPoly::one();
    let mut rows = Vec::with_capacity(max_q as usize + 1);
    for q in 0..=max_q {
        rows.push(Table1Row {
            q,
            degree: power.degree().expect("3^q > 0"),
            poly: power.format_poly(),
        });
        power = power.mul_small_add(3, 0);
    }
    rows
}

/// `Σq / k` over a trajectory, kept exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeanRatio {
    pub q_sum: u64,
    pub k: u64,
    /// Reduced fraction, e.g. `"9/5"` or `"3"`.
    pub exact: String,
    /// Rounded half-up to four places.
    pub decimal: String,
}

impl MeanRatio {
    fn new(q_sum: u64, k: u64) -> Self {
        let r = Ratio::new(q_sum, k);
        let exact = if *r.denom() == 1 {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        };
        let scaled = (q_sum as u128 * 20_000 + k as u128) / (2 * k as u128);
        let decimal = format!("{}.{:04}", scaled / 10_000, scaled % 10_000);
        MeanRatio {
            q_sum,
            k,
            exact,
            decimal,
        }
    }

    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.q_sum, self.k)
    }

    fn of_trajectory(start: &BitPoly) -> Result<Self> {
        let t = trajectory(start, TrajectoryLimits::default())?;
        Ok(MeanRatio::new(t.q_sum, t.k))
    }
}

/// One even `p`: the value reached after `p` unit steps from
/// `x^(p+1) - 1`, and mean exponents to reach 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table2Row {
    pub p: u64,
    pub degree: u64,
    pub poly: String,
    /// Counted from `G` itself down to 1.
    pub mean_ratio: MeanRatio,
    /// Counted from `x^(p+1) - 1`, including the `p` unit steps.
    pub mersenne_ratio: MeanRatio,
}

impl Tabular for Table2Row {
    const HEADERS: &'static [&'static str] = &[
        "p",
        "degree",
        "poly",
        "mean_ratio",
        "mean_ratio_decimal",
        "mersenne_ratio",
        "mersenne_ratio_decimal",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.degree.to_string(),
            self.poly.clone(),
            self.mean_ratio.exact.clone(),
            self.mean_ratio.decimal.clone(),
            self.mersenne_ratio.exact.clone(),
            self.mersenne_ratio.decimal.clone(),
        ]
    }
}

pub fn table2(max_p: u64) -> Result<Vec<Table2Row>> {
    if max_p < 2 || !max_p.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "table 2 needs an even max_p >= 2, got {max_p}"
        )));
    }
    (2..=max_p)
        .step_by(2)
        .map(|p| {
            let g = family_g(p);
            Ok(Table2Row {
                p,
                degree: u_of(p) + 1,
                poly: g.format_poly(),
                mean_ratio: MeanRatio::of_trajectory(&g)?,
                mersenne_ratio: MeanRatio::of_trajectory(&family_mersenne(p)?)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table3Row {
    pub p: u64,
    pub p_poly: String,
    pub r: u64,
}

impl Tabular for Table3Row {
    const HEADERS: &'static [&'static str] = &["p", "p_poly", "r"];

    fn cells(&self) -> Vec<String> {
        vec![self.p.to_string(), self.p_poly.clone(), self.r.to_string()]
    }
}

pub fn table3(max_p: u64) -> Result<Vec<Table3Row>> {
    if !max_p.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "table 3 needs an even max_p, got {max_p}"
        )));
    }
    (0..=max_p)
        .step_by(2)
        .map(|p| {
            let g = g_relations_check(p)?;
            if !g.ok {
                return Err(Error::Identity(format!(
                    "G relations fail at p = {p}: {g:?}"
                )));
            }
            Ok(Table3Row {
                p,
                p_poly: BitPoly::from_u64(p).format_poly(),
                r: g.r,
            })
        })
        .collect()
}
