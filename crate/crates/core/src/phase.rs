//! U(1) values with a dual exact/floating representation.
//!
//! A [`Phase`] built from a rational number of turns keeps that rational
//! alongside its angle in radians. Arithmetic stays exact as long as both
//! operands are exact; mixing in a floating value drops to radians only.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Zero};

/// Default tolerance used when comparing floating phases.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Reduce a rational number of turns into `[0, 1)`.
pub fn reduce_turns(r: Rational64) -> Rational64 {
    let f = r - r.floor();
    if f >= Rational64::one() {
        f - Rational64::one()
    } else {
        f
    }
}

/// Reduce an angle into `[0, 2π)`.
pub fn reduce_radians(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Shortest distance between two angles on the circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = reduce_radians(a - b);
    d.min(TAU - d)
}

/// An element of U(1), stored as an angle modulo 2π.
#[derive(Clone, Copy, Debug)]
pub struct Phase {
    turns: Option<Rational64>,
    radians: f64,
}

impl Phase {
    pub fn zero() -> Self {
        Phase {
            turns: Some(Rational64::zero()),
            radians: 0.0,
        }
    }

    /// The phase `p/q` of a full turn.
    pub fn from_turns(p: i64, q: i64) -> Self {
        Self::from_ratio(Rational64::new(p, q))
    }

    pub fn from_ratio(turns: Rational64) -> Self {
        let t = reduce_turns(turns);
        Phase {
            turns: Some(t),
            radians: ratio_to_f64(t) * TAU,
        }
    }

    pub fn from_radians(x: f64) -> Self {
        Phase {
            turns: None,
            radians: reduce_radians(x),
        }
    }

    /// Angle in `[0, 2π)`.
    pub fn radians(&self) -> f64 {
        self.radians
    }

    /// Exact number of turns in `[0, 1)`, when known.
    pub fn turns(&self) -> Option<Rational64> {
        self.turns
    }

    /// Floating number of turns in `[0, 1)`.
    pub fn turns_f64(&self) -> f64 {
        match self.turns {
            Some(t) => ratio_to_f64(t),
            None => self.radians / TAU,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.turns.is_some()
    }

    /// Drop the exact representation.
    pub fn to_float(self) -> Self {
        Phase {
            turns: None,
            radians: self.radians,
        }
    }

    pub fn inverse(self) -> Self {
        -self
    }

    /// `k`-fold sum of the phase with itself.
    pub fn times(self, k: i64) -> Self {
        match self.turns {
            Some(t) => Phase::from_ratio(t * Rational64::from_integer(k)),
            None => Phase::from_radians(self.radians * k as f64),
        }
    }

    /// Exact equality when both sides are exact, circular distance below
    /// `tol` otherwise.
    pub fn approx_eq(&self, other: &Phase, tol: f64) -> bool {
        match (self.turns, other.turns) {
            (Some(a), Some(b)) => a == b,
            _ => circular_distance(self.radians, other.radians) <= tol,
        }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Phase::zero(), tol)
    }

    /// Distance on the circle, in radians.
    pub fn distance(&self, other: &Phase) -> f64 {
        match (self.turns, other.turns) {
            (Some(a), Some(b)) if a == b => 0.0,
            _ => circular_distance(self.radians, other.radians),
        }
    }

    /// `"p/q turns"` (or `"n turns"`) for exact phases, a decimal number of turns otherwise.
    pub fn turns_string(&self) -> String {
        match self.turns {
            Some(t) if t.is_integer() => format!("{} turns", t.numer()),
            Some(t) => format!("{}/{} turns", t.numer(), t.denom()),
            None => format!("{:.12} turns", (self.turns_f64() * 1e12).round() / 1e12 + 0.0),
        }
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::zero()
    }
}

impl PartialEq for Phase {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, DEFAULT_TOLERANCE)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        match (self.turns, rhs.turns) {
            (Some(a), Some(b)) => Phase::from_ratio(a + b),
            _ => Phase::from_radians(self.radians + rhs.radians),
        }
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        match self.turns {
            Some(t) => Phase::from_ratio(-t),
            None => Phase::from_radians(-self.radians),
        }
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.turns_string())
    }
}

pub fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parse `"p/q"`, `"p/q turns"`, or an integer number of turns.
pub fn parse_turns(s: &str) -> Option<Rational64> {
    let s = s.trim();
    let s = s.strip_suffix("turns").unwrap_or(s).trim();
    let s = s.strip_suffix("turn").unwrap_or(s).trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            if q == 0 {
                None
            } else {
                Some(Rational64::new(p, q))
            }
        }
        None => s.parse::<i64>().ok().map(Rational64::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_addition_reduces_mod_one() {
        let a = Phase::from_turns(2, 3);
        let b = Phase::from_turns(1, 2);
        assert_eq!((a + b).turns(), Some(Rational64::new(1, 6)));
        assert!((a + b).is_exact());
    }

    #[test]
    fn mixed_arithmetic_falls_back_to_float() {
        let a = Phase::from_turns(1, 4);
        let b = Phase::from_radians(std::f64::consts::FRAC_PI_2);
        let s = a + b;
        assert!(!s.is_exact());
        assert!(s.approx_eq(&Phase::from_turns(1, 2), 1e-12));
    }

    #[test]
    fn exact_comparison_is_strict() {
        let a = Phase::from_turns(1, 3);
        let b = Phase::from_ratio(Rational64::new(1, 3) + Rational64::new(1, 1_000_000_000_000));
        assert!(!a.approx_eq(&b, 1.0));
        assert!(a.approx_eq(&b.to_float(), 1e-9));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_turns("3/4 turns"), Some(Rational64::new(3, 4)));
        assert_eq!(parse_turns("-1/2"), Some(Rational64::new(-1, 2)));
        assert_eq!(parse_turns("2"), Some(Rational64::from_integer(2)));
        assert_eq!(parse_turns("1/0"), None);
        assert_eq!(Phase::from_turns(-1, 4).turns_string(), "3/4 turns");
    }

    proptest! {
        #[test]
        fn group_laws(p1 in -50i64..50, q1 in 1i64..24, p2 in -50i64..50, q2 in 1i64..24) {
            let a = Phase::from_turns(p1, q1);
            let b = Phase::from_turns(p2, q2);
            prop_assert_eq!((a + b).turns(), (b + a).turns());
            prop_assert!((a - a).is_identity(0.0));
            let fa = a.to_float();
            prop_assert!((fa + b).approx_eq(&(a + b), 1e-12));
        }
    }
}
