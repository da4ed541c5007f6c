//! Per-step statistics over ranges and trajectories, and the table
//! generators.

mod census;
mod drift;
pub mod emit;
mod tables;

pub use census::{census, residue_class, CensusReport, ClassStats, ResidueClass};
pub use drift::{
    drift_bound, drift_report, DriftPoint, DriftReport, GENERIC_SLOPE, MERSENNE_SLOPE,
};
pub use tables::{table1, table2, table3, MeanRatio, Table1Row, Table2Row, Table3Row};
