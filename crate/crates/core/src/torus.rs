//! Iteration along the stable and unstable directions of the symmetric
//! toral automorphisms `[[q+1, q], [q, q−1]]` (determinant −1).
//!
//! The eigenvalues are `λ = q ± √(q²+1)`. Both norm-preserving lines of such
//! a matrix are integer lines, and since `A` is symmetric they sit
//! symmetrically about the eigenlines. Rescaling the second line to the
//! length of the first, `u = v₁ + v₃` and `w = v₁ − v₃` are eigenvectors, so
//! `Aⁿu` can be computed from the integer vectors `Aⁿv₁`, `Aⁿv₂` alone.
//!
//! For `q = 2` this gives `λ = 2 ± √5` and `A¹⁰` with Fibonacci entries.
//! Some write-ups of this example print `(1 + √5)ⁿ` for `λ₁ⁿ`; the value
//! consistent with the matrix is `(2 + √5)ⁿ`, which is what is used here.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::analyzer2d::{integer_lines2, solve_lines2, LineSolution2};
use crate::direction::PrimitiveDirection;
use crate::error::{Error, Result};
use crate::linalg::{RatMatrix2, Rational};
pub use crate::quadint::QuadIntElement;

/// A 2×2 integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    pub rows: [[BigInt; 2]; 2],
}

impl IntMatrix2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Self {
            rows: [[a, b], [c, d]],
        }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        let r = &self.rows;
        &r[0][0] * &r[1][1] - &r[0][1] * &r[1][0]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.rows, &other.rows);
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn apply(&self, v: &[BigInt]) -> [BigInt; 2] {
        let r = &self.rows;
        [
            &r[0][0] * &v[0] + &r[0][1] * &v[1],
            &r[1][0] * &v[0] + &r[1][1] * &v[1],
        ]
    }

    pub fn to_rational(&self) -> RatMatrix2 {
        let r = |x: &BigInt| Rational::from_integer(x.clone());
        RatMatrix2::new(
            r(&self.rows[0][0]),
            r(&self.rows[0][1]),
            r(&self.rows[1][0]),
            r(&self.rows[1][1]),
        )
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.rows;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            r[0][0], r[0][1], r[1][0], r[1][1]
        )
    }
}

/// Symmetric integer matrix with determinant −1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusMatrix {
    m: IntMatrix2,
}

impl TorusMatrix {
    pub fn new(m: IntMatrix2) -> Result<Self> {
        if m.rows[0][1] != m.rows[1][0] {
            return Err(Error::NotAutomorphism(format!("{m} is not symmetric")));
        }
        if m.det() != -BigInt::one() {
            return Err(Error::NotAutomorphism(format!("det {m} = {}", m.det())));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &IntMatrix2 {
        &self.m
    }

    pub fn trace(&self) -> BigInt {
        &self.m.rows[0][0] + &self.m.rows[1][1]
    }
}

impl fmt::Display for TorusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.m.fmt(f)
    }
}

/// `[[q+1, q], [q, q−1]]`.
pub fn autom_family(q: &BigInt) -> TorusMatrix {
    TorusMatrix::new(IntMatrix2::new(q + 1, q.clone(), q.clone(), q - 1))
        .expect("family members are symmetric with det -1")
}

/// `Aⁿ` by repeated squaring.
pub fn matrix_power(a: &IntMatrix2, mut n: u64) -> IntMatrix2 {
    let mut base = a.clone();
    let mut acc = IntMatrix2::identity();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        n >>= 1;
    }
    acc
}

fn nonzero_q(q: &BigInt) -> Result<()> {
    if q.is_zero() {
        Err(Error::Degenerate(
            "q = 0 gives an orthogonal reflection with eigenvalues ±1".into(),
        ))
    } else {
        Ok(())
    }
}

/// The two integer norm-preserving lines: `⟨1, −1⟩` first, then the other
/// one. For `q = 0` the matrix is a reflection and every line qualifies;
/// its eigenlines `⟨1, 0⟩` and `⟨0, 1⟩` are returned.
pub fn solution_lines_for_autom(q: &BigInt) -> Result<(PrimitiveDirection, PrimitiveDirection)> {
    let a = autom_family(q).matrix().to_rational();
    if solve_lines2(&a) == LineSolution2::AllLines {
        return Ok((
            PrimitiveDirection::from_ints(&[1, 0])?,
            PrimitiveDirection::from_ints(&[0, 1])?,
        ));
    }
    let v1 = PrimitiveDirection::from_ints(&[1, -1])?;
    let lines = integer_lines2(&a);
    if lines.len() != 2 || !lines.contains(&v1) {
        return Err(Error::Degenerate(format!(
            "expected two integer lines for q = {q}, found {}",
            lines.len()
        )));
    }
    let v2 = lines.into_iter().find(|d| *d != v1).expect("two lines");
    Ok((v1, v2))
}

/// `q + sgn(q)·√(q²+1)`, of absolute value > 1.
pub fn unstable_eigenvalue(q: &BigInt) -> Result<QuadIntElement> {
    nonzero_q(q)?;
    let sign = Rational::from_integer(q.signum());
    Ok(
        &QuadIntElement::from_rational(Rational::from_integer(q.clone()))
            + &QuadIntElement::sqrt_of(&(q * q + 1))?.scale(&sign),
    )
}

/// `q − sgn(q)·√(q²+1)`, of absolute value < 1.
pub fn stable_eigenvalue(q: &BigInt) -> Result<QuadIntElement> {
    let l = unstable_eigenvalue(q)?;
    Ok(l.conjugate())
}

fn lift(v: &[BigInt]) -> [QuadIntElement; 2] {
    [0, 1].map(|i| QuadIntElement::from_rational(Rational::from_integer(v[i].clone())))
}

fn apply_q(a: &IntMatrix2, v: &[QuadIntElement; 2]) -> [QuadIntElement; 2] {
    let e = |x: &BigInt| QuadIntElement::from_rational(Rational::from_integer(x.clone()));
    let r = &a.rows;
    [0, 1].map(|i| &(&e(&r[i][0]) * &v[0]) + &(&e(&r[i][1]) * &v[1]))
}

fn is_multiple(v: &[QuadIntElement; 2], w: &[QuadIntElement; 2], l: &QuadIntElement) -> bool {
    v[0] == &w[0] * l && v[1] == &w[1] * l
}

/// Eigen-decomposition data for one family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bisector {
    pub matrix: TorusMatrix,
    pub v1: PrimitiveDirection,
    /// Integer representative of the second line, oriented so that
    /// `v₁ + c·v₂` is the unstable eigenvector.
    pub v2: [BigInt; 2],
    /// `c = √(‖v₁‖²/‖v₂‖²)`, so that `v₃ = c·v₂` has the length of `v₁`.
    pub c: QuadIntElement,
    pub lambda_u: QuadIntElement,
    pub lambda_s: QuadIntElement,
}

impl Bisector {
    /// `u = v₁ + c·v₂`.
    pub fn unstable_vector(&self) -> [QuadIntElement; 2] {
        combine(&lift(self.v1.coords()), &lift(&self.v2), &self.c)
    }

    /// `w = v₁ − c·v₂`.
    pub fn stable_vector(&self) -> [QuadIntElement; 2] {
        combine(&lift(self.v1.coords()), &lift(&self.v2), &-&self.c)
    }
}

fn combine(
    a: &[QuadIntElement; 2],
    b: &[QuadIntElement; 2],
    c: &QuadIntElement,
) -> [QuadIntElement; 2] {
    [0, 1].map(|i| &a[i] + &(&b[i] * c))
}

pub fn bisector(q: &BigInt) -> Result<Bisector> {
    nonzero_q(q)?;
    let matrix = autom_family(q);
    let (v1, v2) = solution_lines_for_autom(q)?;
    let (n1, n2) = (v1.norm_squared(), v2.norm_squared());
    // √(n1/n2) = √(n1·n2)/n2
    let c = QuadIntElement::new(
        Rational::zero(),
        Rational::new(BigInt::one(), n2.clone()),
        &n1 * &n2,
    )?;
    let lambda_u = unstable_eigenvalue(q)?;
    let lambda_s = lambda_u.conjugate();
    let base = lift(v1.coords());
    for v2_oriented in [
        v2.coords().to_vec(),
        v2.coords().iter().map(|x| -x).collect(),
    ] {
        let u = combine(&base, &lift(&v2_oriented), &c);
        if is_multiple(&apply_q(matrix.matrix(), &u), &u, &lambda_u) {
            return Ok(Bisector {
                matrix,
                v1,
                v2: [v2_oriented[0].clone(), v2_oriented[1].clone()],
                c,
                lambda_u,
                lambda_s,
            });
        }
    }
    Err(Error::Degenerate(format!(
        "no orientation of {v2} bisects the eigenlines for q = {q}"
    )))
}

fn iterate(q: &BigInt, n: u64, stable: bool) -> Result<[QuadIntElement; 2]> {
    let b = bisector(q)?;
    let an = matrix_power(b.matrix.matrix(), n);
    let x = lift(&an.apply(b.v1.coords()));
    let y = lift(&an.apply(&b.v2));
    let c = if stable { -&b.c } else { b.c.clone() };
    Ok(combine(&x, &y, &c))
}

/// `Aⁿu` for the unstable eigenvector `u = v₁ + v₃`, from the integer
/// vectors `Aⁿv₁` and `Aⁿv₂`.
pub fn unstable_iterate(q: &BigInt, n: u64) -> Result<[QuadIntElement; 2]> {
    iterate(q, n, false)
}

/// `Aⁿw` for the stable eigenvector `w = v₁ − v₃`.
pub fn stable_iterate(q: &BigInt, n: u64) -> Result<[QuadIntElement; 2]> {
    iterate(q, n, true)
}

/// `λⁿ·v`, computed directly in `Q(√(q²+1))`.
pub fn eigen_power(
    lambda: &QuadIntElement,
    v: &[QuadIntElement; 2],
    n: u64,
) -> [QuadIntElement; 2] {
    let p = lambda.pow(n);
    [&v[0] * &p, &v[1] * &p]
}

/// Largest absolute coordinate, as a float; only for coarse comparisons.
pub fn magnitude(v: &[QuadIntElement; 2]) -> f64 {
    v[0].to_f64().abs().max(v[1].to_f64().abs())
}
