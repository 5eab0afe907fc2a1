use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Reduces a rational into `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::InvalidArgument(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// A point of the dual torus `Tᵐ`, as exact rationals in `[0, 1)`.
/// The all-zero character is the trivial one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    coords: Vec<BigRational>,
}

impl Character {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Character {
            coords: coords.iter().map(frac).collect(),
        }
    }

    pub fn trivial(m: usize) -> Self {
        Character {
            coords: vec![BigRational::zero(); m],
        }
    }

    pub fn from_ratios(xs: &[(i64, i64)]) -> Self {
        Self::new(xs.iter().map(|&(p, q)| BigRational::new(p.into(), q.into())).collect())
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `χ(a) = Σₖ χₖ aₖ mod 1`.
    pub fn evaluate(&self, a: &[BigInt]) -> BigRational {
        debug_assert_eq!(a.len(), self.coords.len());
        let s: BigRational = self
            .coords
            .iter()
            .zip(a)
            .map(|(c, x)| c * BigRational::from_integer(x.clone()))
            .sum();
        frac(&s)
    }

    /// Pointwise sum in the torus group.
    pub fn add(&self, other: &Character) -> Character {
        Character::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }
}

impl FromStr for Character {
    type Err = Error;

    /// Comma-separated rationals, e.g. `1/3,0`. The empty string is the character of `Z⁰`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(Character::trivial(0));
        }
        let coords = s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        Ok(Character::new(coords))
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}
