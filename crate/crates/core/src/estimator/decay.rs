//! Empirical decay of the embedding functionals along a radius schedule.

use serde::Serialize;

use super::grid::{Discretization, NumericError};
use super::sup::{estimate_schedule, EstimatorOptions, SupremumEstimate};
use crate::exponent::Side;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayClass {
    Decaying,
    Plateau,
    Diverging,
    Inconclusive,
}

/// |slope| at or below this counts as a plateau.
pub const PLATEAU_SLOPE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow<T> {
    pub side: Side,
    pub q: T,
    pub radii: Vec<T>,
    pub values: Vec<T>,
    pub converged: Vec<bool>,
    /// Least-squares slope of `ln S` against `ln(1/R)` (origin) or `ln R`
    /// (infinity); negative means the functional shrinks along the schedule.
    pub slope: Option<T>,
    pub class: DecayClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport<T> {
    /// Always "empirical": these are numerical lower bounds, not proofs.
    pub status: &'static str,
    pub rows: Vec<DecayRow<T>>,
}

/// The schedule `R_k = 2^{∓k}`, k = 0..=steps.
pub fn dyadic_schedule<T: Real>(side: Side, steps: u32) -> Vec<T> {
    (0..=steps)
        .map(|k| {
            let e = T::c(f64::from(k));
            match side {
                Side::Origin => T::c(0.5).powf(e),
                Side::Infinity => T::c(2.0).powf(e),
            }
        })
        .collect()
}

fn slope<T: Real>(x: &[T], y: &[T]) -> Option<T> {
    let n = T::c(x.len() as f64);
    if x.len() < 2 {
        return None;
    }
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let sxx: T = x.iter().map(|&a| (a - mx) * (a - mx)).sum();
    let sxy: T = x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)).sum();
    (sxx > T::zero()).then(|| sxy / sxx)
}

pub fn classify<T: Real>(estimates: &[SupremumEstimate<T>]) -> (Option<T>, DecayClass) {
    if estimates.iter().any(|e| !e.converged || e.diverged || !(e.value > T::zero())) {
        return (None, DecayClass::Inconclusive);
    }
    let x: Vec<T> = estimates
        .iter()
        .map(|e| match e.side {
            Side::Origin => -e.radius.ln(),
            Side::Infinity => e.radius.ln(),
        })
        .collect();
    let y: Vec<T> = estimates.iter().map(|e| e.value.ln()).collect();
    let Some(s) = slope(&x, &y) else {
        return (None, DecayClass::Inconclusive);
    };
    let band = T::c(PLATEAU_SLOPE);
    let class = if s < -band {
        DecayClass::Decaying
    } else if s > band {
        DecayClass::Diverging
    } else {
        DecayClass::Plateau
    };
    (Some(s), class)
}

pub fn decay_row<T: Real>(
    disc: &Discretization<T>,
    side: Side,
    q: T,
    radii: &[T],
    opts: &EstimatorOptions,
) -> Result<DecayRow<T>, NumericError> {
    let est = estimate_schedule(disc, side, q, radii, opts)?;
    let (slope, class) = classify(&est);
    Ok(DecayRow {
        side,
        q,
        radii: radii.to_vec(),
        values: est.iter().map(|e| e.value).collect(),
        converged: est.iter().map(|e| e.converged && !e.diverged).collect(),
        slope,
        class,
    })
}

pub fn decay_report<T: Real>(
    disc: &Discretization<T>,
    side: Side,
    qs: &[T],
    radii: &[T],
    opts: &EstimatorOptions,
) -> Result<DecayReport<T>, NumericError> {
    let rows = qs.iter().map(|&q| decay_row(disc, side, q, radii, opts)).collect::<Result<_, _>>()?;
    Ok(DecayReport { status: "empirical", rows })
}

impl<T: Real> DecayReport<T> {
    /// Columns side, q, R, estimate, converged.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), NumericError> {
        let err = |e: csv::Error| NumericError::Other(e.to_string());
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["side", "q", "R", "estimate", "converged"]).map_err(err)?;
        for row in &self.rows {
            for ((r, v), c) in row.radii.iter().zip(&row.values).zip(&row.converged) {
                wr.write_record([
                    row.side.to_string(),
                    format!("{}", row.q),
                    format!("{r:e}"),
                    format!("{v:e}"),
                    c.to_string(),
                ])
                .map_err(err)?;
            }
        }
        wr.flush().map_err(|e| NumericError::Other(e.to_string()))
    }
}
