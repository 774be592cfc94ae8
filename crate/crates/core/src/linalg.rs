//! Exact scalars, small matrices, and Gram products.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::direction::PrimitiveDirection;
use crate::error::{Error, Result};
use crate::form::{BinaryForm, TernaryForm};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// `num/den` as a [`Rational`].
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// An integer as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p` or `p/q`. Decimal notation is rejected so that no input is
/// ever silently rounded.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let t = token.trim();
    let valid = !t.is_empty()
        && t.chars()
            .all(|ch| ch.is_ascii_digit() || ch == '-' || ch == '+' || ch == '/');
    if !valid {
        return Err(Error::Parse(token.to_string()));
    }
    t.parse::<Rational>()
        .map_err(|_| Error::Parse(token.to_string()))
}

/// Squared Euclidean norm.
pub fn norm_squared(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, x| acc + x * x)
}

/// A square matrix acting on rational column vectors.
pub trait LinearMap {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[Rational]) -> Vec<Rational>;
}

/// Checks `‖Av‖² = ‖v‖²` in exact arithmetic. A dimension mismatch is never
/// norm-preserving.
pub fn verify_norm_preserving<M: LinearMap + ?Sized>(a: &M, v: &PrimitiveDirection) -> bool {
    if a.dim() != v.dim() {
        return false;
    }
    let v = v.to_rationals();
    norm_squared(&a.apply(&v)) == norm_squared(&v)
}

/// `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix2 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl RatMatrix2 {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(int(a), int(b), int(c), int(d))
    }

    /// Row-major entries.
    pub fn from_slice(entries: &[Rational]) -> Result<Self> {
        match entries {
            [a, b, c, d] => Ok(Self::new(a.clone(), b.clone(), c.clone(), d.clone())),
            _ => Err(Error::DimensionMismatch {
                expected: 4,
                found: entries.len(),
            }),
        }
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn transpose(&self) -> Self {
        Self::new(
            self.a.clone(),
            self.c.clone(),
            self.b.clone(),
            self.d.clone(),
        )
    }

    pub fn rows(&self) -> [[Rational; 2]; 2] {
        [
            [self.a.clone(), self.b.clone()],
            [self.c.clone(), self.d.clone()],
        ]
    }

    /// Sum of squared entries.
    pub fn frobenius_squared(&self) -> Rational {
        norm_squared(&[
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
        ])
    }
}

impl LinearMap for RatMatrix2 {
    fn dim(&self) -> usize {
        2
    }

    fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        vec![
            &self.a * &v[0] + &self.b * &v[1],
            &self.c * &v[0] + &self.d * &v[1],
        ]
    }
}

impl fmt::Display for RatMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Row-major 3×3 rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix3 {
    pub rows: [[Rational; 3]; 3],
}

impl RatMatrix3 {
    pub fn new(rows: [[Rational; 3]; 3]) -> Self {
        Self { rows }
    }

    pub fn from_ints(rows: [[i64; 3]; 3]) -> Self {
        Self::new(rows.map(|r| r.map(int)))
    }

    /// Row-major entries.
    pub fn from_slice(entries: &[Rational]) -> Result<Self> {
        if entries.len() != 9 {
            return Err(Error::DimensionMismatch {
                expected: 9,
                found: entries.len(),
            });
        }
        let rows = std::array::from_fn(|i| std::array::from_fn(|j| entries[3 * i + j].clone()));
        Ok(Self::new(rows))
    }

    pub fn identity() -> Self {
        Self::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn transpose(&self) -> Self {
        Self::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.rows[j][i].clone())
        }))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(Rational::zero(), |acc, k| {
                    acc + &self.rows[i][k] * &other.rows[k][j]
                })
            })
        }))
    }

    pub fn is_identity(&self) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| {
                if i == j {
                    self.rows[i][j].is_one()
                } else {
                    self.rows[i][j].is_zero()
                }
            })
        })
    }
}

impl LinearMap for RatMatrix3 {
    fn dim(&self) -> usize {
        3
    }

    fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
            })
            .collect()
    }
}

impl fmt::Display for RatMatrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        write!(f, "]")
    }
}

/// Entries of the Gram matrix `AᵀA = [[m, p], [p, n]]` of a 2×2 map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm2 {
    pub m: Rational,
    pub n: Rational,
    pub p: Rational,
}

impl GramForm2 {
    /// `mn − p²`, which always equals `det(A)²`.
    pub fn det(&self) -> Rational {
        &self.m * &self.n - &self.p * &self.p
    }

    /// The form `Φ(x, y) = (m−1)x² + 2pxy + (n−1)y²` whose zeros are the
    /// norm-preserving directions.
    pub fn phi(&self) -> BinaryForm {
        let one = Rational::one();
        BinaryForm::new(&self.m - &one, &self.p * int(2), &self.n - &one)
    }

    /// `p² − (m−1)(n−1)`; a quarter of the discriminant of [`Self::phi`].
    pub fn reduced_discriminant(&self) -> Rational {
        let one = Rational::one();
        &self.p * &self.p - (&self.m - &one) * (&self.n - &one)
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_one() && self.n.is_one() && self.p.is_zero()
    }
}

pub fn gram2(a: &RatMatrix2) -> GramForm2 {
    GramForm2 {
        m: &a.a * &a.a + &a.c * &a.c,
        n: &a.b * &a.b + &a.d * &a.d,
        p: &a.a * &a.b + &a.c * &a.d,
    }
}

/// `B = AᵀA` as a symmetric form.
pub fn gram3(a: &RatMatrix3) -> TernaryForm {
    let b = a.transpose().mul(a);
    TernaryForm::new(b.rows).expect("AᵀA is symmetric")
}

/// Smallest positive integer `L` such that `L·x` is integral for every `x`.
pub fn common_denominator<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a Rational>,
{
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(x: &Rational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
