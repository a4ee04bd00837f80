//! Radial weak solutions of `−Δ_p u + V|u|^{p−2}u = g(|x|, u)` by global
//! minimization and by a mountain-pass search, on the discretization of the
//! estimator module.

mod common;
mod energy;
mod hypotheses;
mod mountain_pass;
mod nonlinearity;
mod problem;
mod sublinear;

pub use common::{Solution, SolutionKind, SolverError, SolverOptions};
pub use energy::{Functional, GRADIENT_DELTA};
pub use hypotheses::{check_hypotheses, ForcingFacts, HypothesisCheck, HypothesisReport, Verdict, WeightFacts};
pub use mountain_pass::{solve_mountain_pass, MOUNTAIN_PASS_TOL, PATH_POINTS};
pub use nonlinearity::{CustomTable, Nonlinearity, NonlinearityConfig, NonlinearityError};
pub use problem::{GridConfig, Mode, Problem, ProblemConfig, ProblemError, RangeCheck, RationalInput};
pub use sublinear::{solve_sublinear, SUBLINEAR_TOL};
