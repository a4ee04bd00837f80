//! Discretization of the radial space and numerical lower bounds for the
//! embedding functionals near the origin and at infinity.

mod decay;
mod grid;
mod sup;

pub use decay::{classify, decay_report, decay_row, dyadic_schedule, DecayClass, DecayReport, DecayRow, PLATEAU_SLOPE};
pub use grid::{
    phi, read_table_csv, sphere_area, Discretization, NumericError, RadialFunction, RadialGrid, RadialPotential,
    Tabulated,
};
pub use sup::{bump, estimate_s0, estimate_schedule, estimate_sinf, estimate_sup, quotient, EstimatorOptions, SupremumEstimate};
