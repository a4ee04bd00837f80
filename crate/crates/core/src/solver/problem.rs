//! JSON problem files for the solvers.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::common::{Solution, SolverError, SolverOptions};
use super::hypotheses::{check_hypotheses, HypothesisReport, WeightFacts};
use super::mountain_pass::solve_mountain_pass;
use super::nonlinearity::{Nonlinearity, NonlinearityConfig};
use super::sublinear::solve_sublinear;
use crate::catalog::{best_ranges, parse_potential, PotentialSpec};
use crate::estimator::{Discretization, RadialGrid};
use crate::exponent::{parse_ratio, ExtendedRational, ProblemDims};
use crate::scalar::Real;
use crate::{Dims, Rational};

/// A number or an exact string such as `"3/2"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalInput {
    Number(f64),
    Text(String),
}

impl RationalInput {
    pub fn to_rational(&self) -> Result<Rational, String> {
        let s = match self {
            RationalInput::Number(x) if x.is_finite() => format!("{x}"),
            RationalInput::Number(x) => return Err(format!("{x} is not finite")),
            RationalInput::Text(s) => s.clone(),
        };
        parse_ratio(&s).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub rmin: f64,
    pub rmax: f64,
    #[serde(rename = "M")]
    pub m: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { rmin: 1e-6, rmax: 1e3, m: 512 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Global minimization.
    Min,
    /// Mountain pass.
    Mp,
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub p: RationalInput,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "V")]
    pub v: String,
    #[serde(rename = "K")]
    pub k: String,
    pub nonlinearity: NonlinearityConfig,
    #[serde(default)]
    pub grid: GridConfig,
    pub mode: Mode,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProblemError {
    /// Malformed input.
    #[error("input error: {0}")]
    Input(String),
    /// Well-formed input outside the domain of the theory.
    #[error("domain error: {0}")]
    Domain(String),
}

/// A parsed and discretized problem.
#[derive(Debug, Clone)]
pub struct Problem<T> {
    pub config: ProblemConfig,
    pub dims: Dims,
    pub v: PotentialSpec<BigInt>,
    pub k: PotentialSpec<BigInt>,
    pub forcing: Option<PotentialSpec<BigInt>>,
    pub nl: Nonlinearity<T>,
    pub disc: Discretization<T>,
}

/// Whether the growth exponents are covered by the exact embedding ranges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeCheck {
    pub origin: String,
    pub infinity: String,
    /// `(q at the origin, q at infinity)` assignment that fits, if any.
    pub assignment: Option<(f64, f64)>,
}

impl ProblemConfig {
    pub fn from_json(src: &str) -> Result<Self, ProblemError> {
        serde_json::from_str(src).map_err(|e| ProblemError::Input(e.to_string()))
    }

    pub fn build<T: Real>(&self) -> Result<Problem<T>, ProblemError> {
        let p = self.p.to_rational().map_err(ProblemError::Input)?;
        let dims = ProblemDims::new(p.clone(), self.n).map_err(|e| ProblemError::Domain(e.to_string()))?;
        let spec = |s: &str, what: &str| parse_potential::<BigInt>(s).map_err(|e| ProblemError::Input(format!("{what}: {e}")));
        let v = spec(&self.v, "V")?;
        let k = spec(&self.k, "K")?;
        let forcing = self.nonlinearity.forcing.as_deref().map(|s| spec(s, "forcing")).transpose()?;
        let nl = self.nonlinearity.build::<T>().map_err(|e| ProblemError::Input(e.to_string()))?;
        let p_real = T::c(crate::exponent::ratio_to_f64(&p));
        let grid = RadialGrid::log_spaced(T::c(self.grid.rmin), T::c(self.grid.rmax), self.grid.m, self.n, p_real)
            .map_err(|e| ProblemError::Input(e.to_string()))?;
        let disc = Discretization::new(grid, &v, &k, forcing.as_ref().map(|q| q as &dyn crate::estimator::RadialPotential<T>))
            .map_err(|e| ProblemError::Domain(e.to_string()))?;
        Ok(Problem { config: self.clone(), dims, v, k, forcing, nl, disc })
    }
}

impl<T: Real> Problem<T> {
    pub fn options(&self) -> SolverOptions {
        SolverOptions { tol: self.config.tol, seed: self.config.seed, ..Default::default() }
    }

    pub fn hypotheses(&self) -> HypothesisReport<T> {
        let facts = WeightFacts::from_specs(&self.k, self.forcing.as_ref(), &self.dims);
        check_hypotheses(&self.nl, self.disc.p(), &facts)
    }

    /// Checks that one of `q₁, q₂` lies in the exact range at the origin and
    /// the other in the range at infinity.
    pub fn range_check(&self) -> Result<RangeCheck, ProblemError> {
        let ranges = best_ranges(&self.v, &self.k, &self.dims).map_err(|e| ProblemError::Domain(e.to_string()))?;
        let mut out = RangeCheck { origin: ranges.origin.range.to_string(), infinity: ranges.infinity.range.to_string(), assignment: None };
        let Some((q1, q2)) = self.nl.exponents() else {
            return Ok(out);
        };
        let exact = |q: T| -> Result<ExtendedRational<BigInt>, ProblemError> {
            RationalInput::Number(q.to_f64_lossy()).to_rational().map(ExtendedRational::Finite).map_err(ProblemError::Input)
        };
        for (a, b) in [(q1, q2), (q2, q1)] {
            if ranges.origin.range.contains(&exact(a)?) && ranges.infinity.range.contains(&exact(b)?) {
                out.assignment = Some((a.to_f64_lossy(), b.to_f64_lossy()));
                break;
            }
        }
        Ok(out)
    }

    /// Full pipeline: exponent ranges, hypotheses for the mode, then solve.
    pub fn solve(&self) -> Result<Solution<T>, SolverError<T>> {
        if self.nl.exponents().is_some() {
            let rc = self.range_check().map_err(|e| SolverError::Hypothesis(e.to_string()))?;
            if rc.assignment.is_none() {
                return Err(SolverError::Hypothesis(format!(
                    "growth exponents outside the embedding ranges: origin {}, infinity {}",
                    rc.origin, rc.infinity
                )));
            }
        }
        let report = self.hypotheses();
        match self.config.mode {
            Mode::Mp => {
                let k_l1 = crate::catalog::is_k_l1_global(&self.k, &self.dims);
                if !(report.holds("g1") && report.holds("g2")) && !(k_l1 && report.holds("g3")) {
                    return Err(SolverError::Hypothesis("mountain pass needs (g1)+(g2), or K ∈ L¹ and (g3)".into()));
                }
                solve_mountain_pass(&self.disc, &self.nl, &self.options())
            }
            Mode::Min => {
                if !(report.holds("g0")) {
                    return Err(SolverError::Hypothesis("(g0) not established for the forcing term".into()));
                }
                if !(report.holds("g6") || report.holds("g7")) && !matches!(self.nl, Nonlinearity::Zero) {
                    return Err(SolverError::Hypothesis("minimization needs (g6) or (g7)".into()));
                }
                solve_sublinear(&self.disc, &self.nl, &self.options())
            }
        }
    }
}
