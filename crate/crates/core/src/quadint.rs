//! Exact arithmetic in `Q(√D)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::diophantine::square_free_split;
use crate::error::{Error, Result};
use crate::linalg::Rational;

/// `rational + radical·√radicand` with a square-free radicand.
///
/// The representation is canonical: a zero radical coefficient always comes
/// with radicand 1, so equality is component-wise. Binary operations between
/// elements with different nontrivial radicands panic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIntElement {
    rational: Rational,
    radical: Rational,
    radicand: BigInt,
}

impl QuadIntElement {
    /// Builds `rational + radical·√radicand`, pulling square factors out of
    /// the radicand.
    pub fn new(rational: Rational, radical: Rational, radicand: BigInt) -> Result<Self> {
        if !radicand.is_positive() {
            return Err(Error::Negative(format!("radicand {radicand}")));
        }
        let (root, free) = square_free_split(&radicand);
        Ok(Self::canonical(
            rational,
            radical * Rational::from_integer(root),
            free,
        ))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::canonical(r, Rational::zero(), BigInt::one())
    }

    /// `√n` for a positive integer `n`.
    pub fn sqrt_of(n: &BigInt) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), n.clone())
    }

    fn canonical(rational: Rational, radical: Rational, radicand: BigInt) -> Self {
        if radical.is_zero() {
            Self {
                rational,
                radical,
                radicand: BigInt::one(),
            }
        } else if radicand.is_one() {
            Self {
                rational: rational + radical,
                radical: Rational::zero(),
                radicand,
            }
        } else {
            Self {
                rational,
                radical,
                radicand,
            }
        }
    }

    pub fn rational(&self) -> &Rational {
        &self.rational
    }

    pub fn radical(&self) -> &Rational {
        &self.radical
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    /// Coefficient `c` in the alternative spelling `rational + c/√radicand`.
    pub fn over_root(&self) -> Rational {
        &self.radical * Rational::from_integer(self.radicand.clone())
    }

    /// `rational ± c/√radicand`, the spelling that keeps `c` an integer for
    /// iterates computed from integer vectors.
    pub fn to_over_root_string(&self) -> String {
        if self.radical.is_zero() {
            return self.rational.to_string();
        }
        let c = self.over_root();
        let surd = format!("{}/√{}", c.abs(), self.radicand);
        if self.rational.is_zero() {
            let sign = if c.is_negative() { "-" } else { "" };
            format!("{sign}{surd}")
        } else {
            let sign = if c.is_negative() { '-' } else { '+' };
            format!("{} {sign} {surd}", self.rational)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.radical.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self::canonical(self.rational.clone(), -&self.radical, self.radicand.clone())
    }

    /// Field norm `rational² − radical²·radicand`.
    pub fn norm(&self) -> Rational {
        &self.rational * &self.rational
            - &self.radical * &self.radical * Rational::from_integer(self.radicand.clone())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::canonical(&self.rational * k, &self.radical * k, self.radicand.clone())
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_rational(Rational::one());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.rational.to_f64().unwrap_or(f64::NAN);
        let c = self.radical.to_f64().unwrap_or(f64::NAN);
        let d = self.radicand.to_f64().unwrap_or(f64::NAN);
        r + c * d.sqrt()
    }

    fn shared_radicand(&self, other: &Self) -> BigInt {
        if self.radical.is_zero() {
            other.radicand.clone()
        } else if other.radical.is_zero() || self.radicand == other.radicand {
            self.radicand.clone()
        } else {
            panic!(
                "radicand mismatch: √{} and √{}",
                self.radicand, other.radicand
            )
        }
    }
}

impl Add for &QuadIntElement {
    type Output = QuadIntElement;

    fn add(self, rhs: &QuadIntElement) -> QuadIntElement {
        let d = self.shared_radicand(rhs);
        QuadIntElement::canonical(
            &self.rational + &rhs.rational,
            &self.radical + &rhs.radical,
            d,
        )
    }
}

impl Sub for &QuadIntElement {
    type Output = QuadIntElement;

    fn sub(self, rhs: &QuadIntElement) -> QuadIntElement {
        self + &(-rhs)
    }
}

impl Mul for &QuadIntElement {
    type Output = QuadIntElement;

    fn mul(self, rhs: &QuadIntElement) -> QuadIntElement {
        let d = self.shared_radicand(rhs);
        let dr = Rational::from_integer(d.clone());
        QuadIntElement::canonical(
            &self.rational * &rhs.rational + &self.radical * &rhs.radical * dr,
            &self.rational * &rhs.radical + &self.radical * &rhs.rational,
            d,
        )
    }
}

impl Neg for &QuadIntElement {
    type Output = QuadIntElement;

    fn neg(self) -> QuadIntElement {
        QuadIntElement::canonical(-&self.rational, -&self.radical, self.radicand.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for QuadIntElement {
            type Output = QuadIntElement;
            fn $method(self, rhs: QuadIntElement) -> QuadIntElement {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadIntElement {
    type Output = QuadIntElement;
    fn neg(self) -> QuadIntElement {
        -&self
    }
}

impl fmt::Display for QuadIntElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radical.is_zero() {
            return write!(f, "{}", self.rational);
        }
        let sign = if self.radical.is_negative() { "-" } else { "+" };
        let mag = self.radical.abs();
        let surd = if mag.is_one() {
            format!("√{}", self.radicand)
        } else {
            format!("{mag}*√{}", self.radicand)
        };
        if self.rational.is_zero() {
            if self.radical.is_negative() {
                write!(f, "-{surd}")
            } else {
                write!(f, "{surd}")
            }
        } else {
            write!(f, "{} {sign} {surd}", self.rational)
        }
    }
}
