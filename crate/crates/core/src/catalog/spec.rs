use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exponent::{ratio_to_f64, ExtendedRational, Side};
use crate::scalar::{ExactInt, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid potential: {0}")]
    Invalid(String),
}

/// `c · r^e · exp(rate · r + inv_rate / r)` with `c ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term<I: ExactInt> {
    pub coef: Ratio<I>,
    pub power: Ratio<I>,
    pub rate: Ratio<I>,
    pub inv_rate: Ratio<I>,
}

impl<I: ExactInt> Term<I> {
    pub fn constant(c: Ratio<I>) -> Self {
        Self { coef: c, power: Ratio::zero(), rate: Ratio::zero(), inv_rate: Ratio::zero() }
    }

    pub fn one() -> Self {
        Self::constant(Ratio::one())
    }

    pub fn power(e: Ratio<I>) -> Self {
        Self { power: e, ..Self::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::constant(Ratio::zero());
        }
        Self {
            coef: self.coef.clone() * o.coef.clone(),
            power: self.power.clone() + o.power.clone(),
            rate: self.rate.clone() + o.rate.clone(),
            inv_rate: self.inv_rate.clone() + o.inv_rate.clone(),
        }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self {
            coef: self.coef.recip(),
            power: -self.power.clone(),
            rate: -self.rate.clone(),
            inv_rate: -self.inv_rate.clone(),
        })
    }

    /// The exponential rate that dominates at `side` (`1/r` at the origin,
    /// `r` at infinity).
    pub fn dominant_rate(&self, side: Side) -> &Ratio<I> {
        match side {
            Side::Origin => &self.inv_rate,
            Side::Infinity => &self.rate,
        }
    }

    pub fn eval<T: Real>(&self, r: T) -> T {
        if self.is_zero() {
            return T::zero();
        }
        let c = T::c(ratio_to_f64(&self.coef));
        let e = T::c(ratio_to_f64(&self.power));
        let s = T::c(ratio_to_f64(&self.rate));
        let si = T::c(ratio_to_f64(&self.inv_rate));
        // combine in log space so that e.g. exp(1/r)·r^-3 at small r stays finite
        // as long as the product is representable
        let mut log = c.ln() + e * r.ln();
        if !s.is_zero() {
            log += s * r;
        }
        if !si.is_zero() {
            log += si / r;
        }
        log.exp()
    }
}

fn fmt_ratio<I: ExactInt>(f: &mut fmt::Formatter<'_>, x: &Ratio<I>) -> fmt::Result {
    if x.is_integer() {
        write!(f, "{}", x.numer())
    } else {
        write!(f, "{}/{}", x.numer(), x.denom())
    }
}

impl<I: ExactInt> fmt::Display for Term<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = 0;
        if !self.coef.is_one() {
            fmt_ratio(f, &self.coef)?;
            parts += 1;
        }
        if !self.power.is_zero() {
            if parts > 0 {
                f.write_str("*")?;
            }
            f.write_str("r^")?;
            fmt_ratio(f, &self.power)?;
            parts += 1;
        }
        if !self.rate.is_zero() || !self.inv_rate.is_zero() {
            if parts > 0 {
                f.write_str("*")?;
            }
            f.write_str("exp(")?;
            let mut first = true;
            if !self.rate.is_zero() {
                fmt_ratio(f, &self.rate)?;
                f.write_str("r")?;
                first = false;
            }
            if !self.inv_rate.is_zero() {
                if !first && self.inv_rate.is_positive() {
                    f.write_str("+")?;
                }
                fmt_ratio(f, &self.inv_rate)?;
                f.write_str("/r")?;
            }
            f.write_str(")")?;
            parts += 1;
        }
        if parts == 0 {
            f.write_str("1")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece<I: ExactInt> {
    pub lo: ExtendedRational<I>,
    pub hi: ExtendedRational<I>,
    pub term: Term<I>,
}

/// A radial potential as a partition of `(0, ∞)` into intervals, each carrying
/// one term. `behaves_like` marks specs given only up to asymptotic
/// equivalence at the two ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialSpec<I: ExactInt> {
    pieces: Vec<Piece<I>>,
    pub behaves_like: bool,
}

impl<I: ExactInt> PotentialSpec<I> {
    pub fn new(pieces: Vec<Piece<I>>, behaves_like: bool) -> Result<Self, SpecError> {
        if pieces.is_empty() {
            return Err(SpecError::Invalid("no pieces".into()));
        }
        if pieces[0].lo != ExtendedRational::zero() {
            return Err(SpecError::Invalid(format!("first piece must start at 0, starts at {}", pieces[0].lo)));
        }
        if pieces.last().expect("nonempty").hi != ExtendedRational::PosInf {
            return Err(SpecError::Invalid("last piece must end at inf".into()));
        }
        for w in pieces.windows(2) {
            if w[0].hi != w[1].lo {
                return Err(SpecError::Invalid(format!("gap or overlap between {} and {}", w[0].hi, w[1].lo)));
            }
        }
        for pc in &pieces {
            if pc.lo >= pc.hi {
                return Err(SpecError::Invalid(format!("empty interval ({}, {})", pc.lo, pc.hi)));
            }
            if pc.term.coef.is_negative() {
                return Err(SpecError::Invalid(format!("negative coefficient {}", pc.term.coef)));
            }
        }
        Ok(Self { pieces, behaves_like })
    }

    pub fn single(term: Term<I>) -> Self {
        Self {
            pieces: vec![Piece { lo: ExtendedRational::zero(), hi: ExtendedRational::PosInf, term }],
            behaves_like: false,
        }
    }

    pub fn pieces(&self) -> &[Piece<I>] {
        &self.pieces
    }

    /// Term governing the behavior near `side`.
    pub fn end_term(&self, side: Side) -> &Term<I> {
        match side {
            Side::Origin => &self.pieces[0].term,
            Side::Infinity => &self.pieces[self.pieces.len() - 1].term,
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.term.is_zero())
    }

    /// Vanishes on a neighborhood of infinity.
    pub fn zero_outside(&self) -> bool {
        self.end_term(Side::Infinity).is_zero()
    }

    pub fn scaled(&self, c: &Ratio<I>) -> Self {
        let mut out = self.clone();
        for pc in &mut out.pieces {
            pc.term = pc.term.mul(&Term::constant(c.clone()));
        }
        out
    }

    pub fn eval<T: Real>(&self, r: T) -> T {
        let rf = r.to_f64_lossy();
        for pc in &self.pieces {
            if pc.hi.to_f64() >= rf {
                return pc.term.eval(r);
            }
        }
        self.end_term(Side::Infinity).eval(r)
    }
}

impl<I: ExactInt> fmt::Display for PotentialSpec<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.len() == 1 {
            return write!(f, "{}", self.pieces[0].term);
        }
        if self.behaves_like && self.pieces.len() == 2 && self.pieces[0].hi == ExtendedRational::one() {
            return write!(f, "asym[0: {}; inf: {}]", self.pieces[0].term, self.pieces[1].term);
        }
        f.write_str("piecewise[")?;
        for (k, pc) in self.pieces.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "({},{}): {}", pc.lo, pc.hi, pc.term)?;
        }
        f.write_str("]")
    }
}

impl<I: ExactInt> Serialize for PotentialSpec<I> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
