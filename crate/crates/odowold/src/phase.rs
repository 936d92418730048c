//! Unimodular scalars as exact rational turns.
//!
//! A [`Phase`] stores `t ∈ [0, 1)` as a reduced fraction and denotes the unit
//! scalar `e^{2πi·t}`. Keeping turns exact lets the combinatorial layer test
//! phase equations with `==` instead of a tolerance; only the matrix oracle
//! ever converts to floating complex numbers.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

/// An exact unit scalar `e^{2πi·turn}` with `0 <= turn < 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Phase {
    turn: Rational64,
}

impl Phase {
    pub const ONE: Phase = Phase {
        turn: Rational64::new_raw(0, 1),
    };

    /// Phase with turn `num/den`, reduced into `[0, 1)`.
    pub fn new(num: i64, den: i64) -> Phase {
        assert!(den != 0, "phase denominator must be nonzero");
        let mut turn = Rational64::new(num, den);
        let one = Rational64::from_integer(1);
        turn -= turn.floor();
        if turn >= one {
            turn -= one;
        }
        Phase { turn }
    }

    pub fn is_one(&self) -> bool {
        self.turn.numer() == &0
    }

    /// Product of scalars: turns add mod 1.
    pub fn mul(&self, other: &Phase) -> Phase {
        Phase::new(
            self.turn.numer() * other.turn.denom() + other.turn.numer() * self.turn.denom(),
            self.turn.denom() * other.turn.denom(),
        )
    }

    /// Complex conjugate (inverse scalar): turn negates mod 1.
    pub fn conj(&self) -> Phase {
        Phase::new(-self.turn.numer(), *self.turn.denom())
    }

    pub fn numer(&self) -> i64 {
        *self.turn.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.turn.denom()
    }

    /// The scalar as a floating complex number, for the matrix oracle.
    pub fn to_complex(&self) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * (*self.turn.numer() as f64)
            / (*self.turn.denom() as f64);
        Complex64::new(theta.cos(), theta.sin())
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.turn.numer(), self.turn.denom())
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({})", self)
    }
}

impl FromStr for Phase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: i64 = num
            .trim()
            .parse()
            .map_err(|_| format!("bad phase numerator in {s:?}"))?;
        let den: i64 = den
            .trim()
            .parse()
            .map_err(|_| format!("bad phase denominator in {s:?}"))?;
        if den == 0 {
            return Err(format!("zero phase denominator in {s:?}"));
        }
        Ok(Phase::new(num, den))
    }
}

impl TryFrom<String> for Phase {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Phase> for String {
    fn from(p: Phase) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turns_add_mod_one() {
        let a = Phase::new(2, 3);
        let b = Phase::new(1, 2);
        assert_eq!(a.mul(&b), Phase::new(1, 6));
        assert_eq!(a.mul(&a.conj()), Phase::ONE);
        assert!(Phase::new(3, 3).is_one());
        assert_eq!(Phase::new(-1, 4), Phase::new(3, 4));
    }

    #[test]
    fn display_round_trip() {
        for p in [Phase::ONE, Phase::new(1, 3), Phase::new(7, 12)] {
            let s = p.to_string();
            assert_eq!(s.parse::<Phase>().unwrap(), p);
        }
        assert_eq!("1/3".parse::<Phase>().unwrap(), Phase::new(1, 3));
        assert!("1/0".parse::<Phase>().is_err());
    }

    #[test]
    fn complex_value() {
        let z = Phase::new(1, 4).to_complex();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
