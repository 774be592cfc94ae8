//! Canonical integer representatives of lines through the origin.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{common_denominator, Rational};

/// An integer vector with coprime coordinates whose first nonzero coordinate
/// is positive. Two vectors span the same line exactly when they normalize to
/// the same `PrimitiveDirection`.
///
/// Ordering is lexicographic on the coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimitiveDirection {
    coords: Vec<BigInt>,
}

impl PrimitiveDirection {
    pub fn from_bigints(v: &[BigInt]) -> Result<Self> {
        let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut coords: Vec<BigInt> = v.iter().map(|x| x / &g).collect();
        if coords
            .iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative())
        {
            for x in &mut coords {
                *x = -&*x;
            }
        }
        Ok(Self { coords })
    }

    pub fn from_ints(v: &[i64]) -> Result<Self> {
        let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_bigints(&big)
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.coords
            .iter()
            .map(|x| Rational::from_integer(x.clone()))
            .collect()
    }

    /// Coordinates as `i64`, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coords.iter().map(|x| x.to_i64()).collect()
    }

    pub fn norm_squared(&self) -> BigInt {
        self.coords.iter().map(|x| x * x).sum()
    }

    pub fn dot(&self, other: &[BigInt]) -> BigInt {
        self.coords.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

/// Clears denominators, divides out the content and fixes the sign.
pub fn normalize_direction(v: &[Rational]) -> Result<PrimitiveDirection> {
    let l = common_denominator(v);
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect();
    PrimitiveDirection::from_bigints(&ints)
}

impl fmt::Display for PrimitiveDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use proptest::prelude::*;

    fn dir(v: &[i64]) -> PrimitiveDirection {
        PrimitiveDirection::from_ints(v).unwrap()
    }

    #[test]
    fn normalizes_known_vectors() {
        assert_eq!(
            normalize_direction(&[rat(11, 5), int(-3), int(2)]).unwrap(),
            dir(&[11, -15, 10])
        );
        assert_eq!(
            normalize_direction(&[rat(-13, 10), rat(-3, 2), int(2)]).unwrap(),
            dir(&[13, 15, -20])
        );
        assert_eq!(
            normalize_direction(&[int(-2), int(2)]).unwrap().coords(),
            &[BigInt::from(1), BigInt::from(-1)]
        );
    }

    #[test]
    fn zero_vector_is_rejected() {
        assert_eq!(
            normalize_direction(&[int(0), int(0)]),
            Err(Error::ZeroVector)
        );
        assert_eq!(
            PrimitiveDirection::from_ints(&[0, 0, 0]),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn leading_zeros_keep_sign_rule() {
        assert_eq!(
            dir(&[0, -3, 6]).coords(),
            &[BigInt::from(0), BigInt::from(1), BigInt::from(-2)]
        );
    }

    proptest! {
        #[test]
        fn scale_invariant_and_idempotent(
            v in prop::collection::vec(-50i64..=50, 3),
            num in -20i64..=20,
            den in 1i64..=20,
        ) {
            prop_assume!(v.iter().any(|&x| x != 0));
            prop_assume!(num != 0);
            let r: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
            let base = normalize_direction(&r).unwrap();
            let lambda = rat(num, den);
            let scaled: Vec<Rational> = r.iter().map(|x| x * &lambda).collect();
            prop_assert_eq!(&normalize_direction(&scaled).unwrap(), &base);
            prop_assert_eq!(&normalize_direction(&base.to_rationals()).unwrap(), &base);
            let g = base.coords().iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            prop_assert_eq!(g, BigInt::from(1));
        }
    }
}
