use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ext::{ArithmeticError, ExtendedRational};
use crate::scalar::ExactInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("hypothesis violated: {inequality} (threshold {threshold})")]
    HypothesisViolated { inequality: String, threshold: String },
    #[error("{quantity} is undefined at gamma = {gamma}")]
    Undefined { quantity: &'static str, gamma: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
}

/// Exponent `p` of the p-Laplacian and dimension `N`, with `1 < p < N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemDims<I: ExactInt> {
    p: Ratio<I>,
    n: u32,
}

impl<I: ExactInt> ProblemDims<I> {
    pub fn new(p: Ratio<I>, n: u32) -> Result<Self, CalculusError> {
        let n_q = Ratio::from_integer(I::from_u32(n).expect("dimension fits"));
        if p <= Ratio::one() || p >= n_q {
            return Err(CalculusError::Domain(format!("need 1 < p < N, got p = {p}, N = {n}")));
        }
        Ok(Self { p, n })
    }

    pub fn p(&self) -> &Ratio<I> {
        &self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn n_q(&self) -> Ratio<I> {
        Ratio::from_integer(I::from_u32(self.n).expect("dimension fits"))
    }

    /// Sobolev critical exponent `pN/(N−p)`.
    pub fn critical(&self) -> Ratio<I> {
        let n = self.n_q();
        self.p.clone() * n.clone() / (n - self.p.clone())
    }

    /// The singular value `p(N−1)/(p−1)` of `q_**`.
    pub fn gamma_critical(&self) -> Ratio<I> {
        let one = Ratio::one();
        self.p.clone() * (self.n_q() - one.clone()) / (self.p.clone() - one)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Origin,
    Infinity,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Origin => "origin",
            Side::Infinity => "infinity",
        })
    }
}

/// Power-type description of `K/(r^α V^β)` boundedness and of a lower bound
/// `r^γ V ≥ c > 0` at one end of `(0, ∞)`.
///
/// `alpha = +∞` at the origin (or `−∞` at infinity) means the ratio is bounded
/// for every α. `gamma = ±∞` marks a lower bound that holds for every γ on the
/// admissible side; the calculus then works with the limiting region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct AsymptoticProfile<I: ExactInt> {
    pub side: Side,
    pub alpha: ExtendedRational<I>,
    pub beta: ExtendedRational<I>,
    pub gamma: Option<ExtendedRational<I>>,
}

impl<I: ExactInt> AsymptoticProfile<I> {
    pub fn new(
        side: Side,
        alpha: ExtendedRational<I>,
        beta: Ratio<I>,
        gamma: Option<ExtendedRational<I>>,
        dims: &ProblemDims<I>,
    ) -> Result<Self, CalculusError> {
        if beta > Ratio::one() {
            return Err(CalculusError::Domain(format!("beta = {beta} > 1")));
        }
        if let Some(g) = &gamma {
            let p = ExtendedRational::Finite(dims.p().clone());
            match side {
                Side::Origin if *g < p => {
                    return Err(CalculusError::Domain(format!("gamma at the origin must be >= p, got {g}")));
                }
                Side::Infinity if *g > p => {
                    return Err(CalculusError::Domain(format!("gamma at infinity must be <= p, got {g}")));
                }
                _ => {}
            }
        }
        Ok(Self { side, alpha, beta: beta.into(), gamma })
    }

    pub fn beta(&self) -> &Ratio<I> {
        self.beta.finite().expect("beta is finite by construction")
    }
}

/// Open interval `(lower, upper)` of admissible exponents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ExponentSet<I: ExactInt> {
    pub lower: ExtendedRational<I>,
    pub upper: ExtendedRational<I>,
}

impl<I: ExactInt> ExponentSet<I> {
    pub fn open(lower: ExtendedRational<I>, upper: ExtendedRational<I>) -> Self {
        Self { lower, upper }
    }

    pub fn half_line(lower: ExtendedRational<I>) -> Self {
        Self { lower, upper: ExtendedRational::PosInf }
    }

    /// Canonical empty set anchored at `at`.
    pub fn empty_at(at: ExtendedRational<I>) -> Self {
        Self { lower: at.clone(), upper: at }
    }

    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }

    pub fn contains(&self, q: &ExtendedRational<I>) -> bool {
        self.lower < *q && *q < self.upper
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self {
            lower: self.lower.clone().max(other.lower.clone()),
            upper: self.upper.clone().min(other.upper.clone()),
        }
    }

    /// `self ⊇ other` as sets; an empty `other` is contained in anything.
    pub fn contains_set(&self, other: &Self) -> bool {
        other.is_empty() || (self.lower <= other.lower && other.upper <= self.upper)
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        !self.intersect(other).is_empty()
    }
}

impl<I: ExactInt> fmt::Display for ExponentSet<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "empty")
        } else {
            write!(f, "({}, {})", self.lower, self.upper)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "", tag = "kind")]
pub enum EmbeddingKind<I: ExactInt> {
    /// `W_r ↪ L^{q1}_K + L^{q2}_K` for `q1 ∈ q1set`, `q2 ∈ q2set`, and the two
    /// sets do not meet.
    SumSpace { q1: ExponentSet<I>, q2: ExponentSet<I> },
    /// As `SumSpace`, and additionally `W_r ↪ L^q_K` for `q ∈ q = q1 ∩ q2`.
    SingleSpace { q1: ExponentSet<I>, q2: ExponentSet<I>, q: ExponentSet<I> },
    None { diagnostics: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EmbeddingConclusion<I: ExactInt> {
    pub kind: EmbeddingKind<I>,
    pub compact: bool,
}

impl<I: ExactInt> EmbeddingConclusion<I> {
    pub fn single(&self) -> Option<&ExponentSet<I>> {
        match &self.kind {
            EmbeddingKind::SingleSpace { q, .. } => Some(q),
            _ => None,
        }
    }

    pub fn sets(&self) -> Option<(&ExponentSet<I>, &ExponentSet<I>)> {
        match &self.kind {
            EmbeddingKind::SumSpace { q1, q2 } | EmbeddingKind::SingleSpace { q1, q2, .. } => Some((q1, q2)),
            EmbeddingKind::None { .. } => None,
        }
    }
}

impl<I: ExactInt> fmt::Display for EmbeddingConclusion<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.compact { "compact" } else { "continuous" };
        match &self.kind {
            EmbeddingKind::SingleSpace { q1, q2, q } => {
                write!(f, "SingleSpace q in {q} ({c}); sum space q1 in {q1}, q2 in {q2}")
            }
            EmbeddingKind::SumSpace { q1, q2 } => write!(f, "SumSpace q1 in {q1}, q2 in {q2} ({c}); no single space"),
            EmbeddingKind::None { diagnostics } => write!(f, "None: {}", diagnostics.join("; ")),
        }
    }
}

pub(crate) fn max_one_p_beta<I: ExactInt>(beta: &Ratio<I>, dims: &ProblemDims<I>) -> Ratio<I> {
    let pb = dims.p().clone() * beta.clone();
    if pb > Ratio::one() {
        pb
    } else {
        Ratio::one()
    }
}

pub(crate) fn check_beta_unit<I: ExactInt>(beta: &Ratio<I>) -> Result<(), CalculusError> {
    if *beta < Ratio::zero() || *beta > Ratio::one() {
        return Err(CalculusError::Domain(format!("beta = {beta} outside [0, 1]")));
    }
    Ok(())
}
