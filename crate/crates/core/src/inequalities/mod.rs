//! Exact evaluators and verdicts for the classical and logarithmic
//! Brunn-Minkowski family, plus mixed discriminants.

mod classical;
mod discriminant;
mod logbm;
mod report;

pub use classical::{body_volume, check_bm, check_minkowski_first, check_minkowski_second, minkowski_combination};
pub use discriminant::{check_alexandrov_mixed_discriminant, mixed_discriminant, SymmetricMatrix};
pub use logbm::{
    check_induction_step, check_local_logbm, check_log_minkowski, integrate_expr, integrate_sq_over_support,
    mixed_volume_f, mixed_volume_ff,
};
pub use report::{CsvRecord, InequalityReport, Verdict, DEFAULT_FLOAT_TOLERANCE};
