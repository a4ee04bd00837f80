//! Potentials given in closed form, their asymptotic analysis and the
//! resulting best exponent ranges.

mod analyze;
mod best;
mod parse;
mod spec;

pub use analyze::{analyze_end, forcing_integrable, integrable_near, is_k_l1_ball, is_k_l1_global, AlphaBound, EndAnalysis};
pub use best::{best_end, best_ranges, grid_range, BestRanges, CatalogError, Contribution, EndRange, Method, Witness};
pub use parse::parse_potential;
pub use spec::{Piece, PotentialSpec, SpecError, Term};
