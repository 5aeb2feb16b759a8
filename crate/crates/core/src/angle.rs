//! Exact angle arithmetic on the circle.
//!
//! Angles are stored as rational multiples of a full turn, so composing
//! isometries and testing angle congruences stays exact. Conversion to
//! radians happens only at evaluation time.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A rational angle, in units of full turns, normalized to `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Turn(Ratio<i64>);

impl Turn {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse(format!("angle {num}/{den} has zero denominator")));
        }
        Ok(Self::from_ratio(Ratio::new(num, den)))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        let mut r = r - r.floor();
        if r >= Ratio::from_integer(1) || r < Ratio::zero() {
            // floor already reduced it; this only guards pathological rounding of Ratio
            r -= r.floor();
        }
        Turn(r)
    }

    pub fn zero() -> Self {
        Turn(Ratio::zero())
    }

    pub fn half() -> Self {
        Turn(Ratio::new(1, 2))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn radians(&self) -> f64 {
        (*self.0.numer() as f64 / *self.0.denom() as f64) * TAU
    }

    /// Multiply by an orientation sign (+1 or -1), staying normalized.
    pub fn oriented(&self, orientation: i8) -> Self {
        if orientation >= 0 {
            *self
        } else {
            -*self
        }
    }

    /// The two solutions of `2 theta = self (mod 1)`.
    pub fn halves(&self) -> [Turn; 2] {
        let h = Turn::from_ratio(self.0 / 2);
        [h, Turn::from_ratio(h.0 + Ratio::new(1, 2))]
    }
}

impl Add for Turn {
    type Output = Turn;
    fn add(self, rhs: Turn) -> Turn {
        Turn::from_ratio(self.0 + rhs.0)
    }
}

impl Sub for Turn {
    type Output = Turn;
    fn sub(self, rhs: Turn) -> Turn {
        Turn::from_ratio(self.0 - rhs.0)
    }
}

impl Neg for Turn {
    type Output = Turn;
    fn neg(self) -> Turn {
        Turn::from_ratio(-self.0)
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Parse an angle given as a fraction of a full turn, e.g. `"1/2"` or `"0"`.
///
/// Decimal angles are rejected so that shift discretization stays exact.
pub fn parse_turn(text: &str) -> Result<Turn> {
    let t = text.trim();
    if t.contains('.') {
        return Err(Error::Parse(format!(
            "angle '{t}' is decimal; write it as an exact fraction of a full turn, e.g. \"1/2\" for pi"
        )));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<i64>().map_err(|e| Error::Parse(format!("angle '{t}': {e}")))?,
            d.trim().parse::<i64>().map_err(|e| Error::Parse(format!("angle '{t}': {e}")))?,
        ),
        None => (
            t.parse::<i64>().map_err(|e| Error::Parse(format!("angle '{t}': {e}")))?,
            1,
        ),
    };
    Turn::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_wraps_into_unit_interval() {
        assert_eq!(Turn::new(3, 2).unwrap(), Turn::new(1, 2).unwrap());
        assert_eq!(Turn::new(-1, 4).unwrap(), Turn::new(3, 4).unwrap());
        assert_eq!(Turn::new(4, 2).unwrap(), Turn::zero());
    }

    #[test]
    fn composition_is_exact() {
        let third = Turn::new(1, 3).unwrap();
        assert_eq!(third + third + third, Turn::zero());
        assert_eq!(-third, Turn::new(2, 3).unwrap());
    }

    #[test]
    fn halves_solve_doubling() {
        let t = Turn::new(1, 3).unwrap();
        for h in t.halves() {
            assert_eq!(h + h, t);
        }
    }

    #[test]
    fn parses_fractions_and_rejects_decimals() {
        assert_eq!(parse_turn("1/2").unwrap(), Turn::half());
        assert_eq!(parse_turn("0").unwrap(), Turn::zero());
        assert_eq!(parse_turn("-1/4").unwrap(), Turn::new(3, 4).unwrap());
        assert!(parse_turn("0.5").is_err());
    }
}
