//! Exact exponent calculus: thresholds, the admissible region at the origin,
//! theorem ranges and their combination into embedding conclusions.

pub mod example35;
pub mod ext;
pub mod region;
pub mod theorems;
pub mod thresholds;
pub mod types;

pub use example35::{example35_exponents, Example35};
pub use ext::{parse_ratio, ratio, ratio_to_f64, ArithmeticError, ExtendedRational};
pub use region::{region_case, region_membership, region_slice, RegionCase};
pub use theorems::{combine, normalize_beta, q1_range_thm0, q1_set_thm3, q2_range_thm1, q2_range_thm2};
pub use thresholds::{
    alpha_star, alpha_thresholds, max_threshold_thm1, max_threshold_thm2, max_threshold_thm2_direct, q_double_star,
    q_lower_star, q_star_upper,
};
pub use types::{
    AsymptoticProfile, CalculusError, EmbeddingConclusion, EmbeddingKind, ExponentSet, ProblemDims, Side,
};
