//! Binary and ternary quadratic forms with exact evaluation and
//! classification.

#![allow(clippy::needless_range_loop)]

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{int, Rational};

/// Exact evaluation of a quadratic form.
pub trait QuadraticForm {
    fn dim(&self) -> usize;

    /// Value at `v`; `v` must have length [`Self::dim`].
    fn eval_unchecked(&self, v: &[Rational]) -> Rational;
}

pub fn evaluate_form<F: QuadraticForm + ?Sized>(form: &F, v: &[Rational]) -> Result<Rational> {
    if v.len() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            found: v.len(),
        });
    }
    Ok(form.eval_unchecked(v))
}

/// `cxx·x² + cxy·xy + cyy·y²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    pub cxx: Rational,
    pub cxy: Rational,
    pub cyy: Rational,
}

impl BinaryForm {
    pub fn new(cxx: Rational, cxy: Rational, cyy: Rational) -> Self {
        Self { cxx, cxy, cyy }
    }

    pub fn from_ints(cxx: i64, cxy: i64, cyy: i64) -> Self {
        Self::new(int(cxx), int(cxy), int(cyy))
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        &self.cxx * x * x + &self.cxy * x * y + &self.cyy * y * y
    }

    /// `cxy² − 4·cxx·cyy`.
    pub fn discriminant(&self) -> Rational {
        &self.cxy * &self.cxy - int(4) * &self.cxx * &self.cyy
    }

    pub fn is_zero(&self) -> bool {
        self.cxx.is_zero() && self.cxy.is_zero() && self.cyy.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(&self.cxx * k, &self.cxy * k, &self.cyy * k)
    }

    pub fn coefficients(&self) -> [&Rational; 3] {
        [&self.cxx, &self.cxy, &self.cyy]
    }

    /// Polynomial rendering in the given variable names.
    pub fn to_poly_string(&self, vars: [&str; 2]) -> String {
        let [u, v] = vars;
        poly_string(&[
            (self.cxx.clone(), format!("{u}^2")),
            (self.cxy.clone(), format!("{u}*{v}")),
            (self.cyy.clone(), format!("{v}^2")),
        ])
    }
}

impl QuadraticForm for BinaryForm {
    fn dim(&self) -> usize {
        2
    }

    fn eval_unchecked(&self, v: &[Rational]) -> Rational {
        self.eval(&v[0], &v[1])
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly_string(["x", "y"]))
    }
}

/// Sign behaviour of a real symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    Zero,
    PositiveDefinite,
    NegativeDefinite,
    PositiveSemidefinite,
    NegativeSemidefinite,
    Indefinite,
}

impl Definiteness {
    pub fn name(self) -> &'static str {
        match self {
            Definiteness::Zero => "Zero",
            Definiteness::PositiveDefinite => "PositiveDefinite",
            Definiteness::NegativeDefinite => "NegativeDefinite",
            Definiteness::PositiveSemidefinite => "PositiveSemidefinite",
            Definiteness::NegativeSemidefinite => "NegativeSemidefinite",
            Definiteness::Indefinite => "Indefinite",
        }
    }

    pub fn is_definite(self) -> bool {
        matches!(self, Self::PositiveDefinite | Self::NegativeDefinite)
    }

    pub fn is_semidefinite(self) -> bool {
        matches!(
            self,
            Self::PositiveSemidefinite | Self::NegativeSemidefinite
        )
    }
}

/// The form `v·Sv` for a symmetric rational 3×3 matrix `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryForm {
    s: [[Rational; 3]; 3],
}

impl TernaryForm {
    pub fn new(s: [[Rational; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..i {
                if s[i][j] != s[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(Self { s })
    }

    /// Panics if the matrix is not symmetric.
    pub fn from_ints(s: [[i64; 3]; 3]) -> Self {
        Self::new(s.map(|r| r.map(int))).expect("symmetric integer matrix")
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Rational {
        &self.s[i][j]
    }

    pub fn matrix(&self) -> &[[Rational; 3]; 3] {
        &self.s
    }

    /// `S − I`.
    pub fn minus_identity(&self) -> Self {
        let mut s = self.s.clone();
        for (i, row) in s.iter_mut().enumerate() {
            row[i] -= Rational::one();
        }
        Self { s }
    }

    pub fn is_zero(&self) -> bool {
        self.s.iter().flatten().all(Zero::is_zero)
    }

    pub fn eval(&self, v: &[Rational; 3]) -> Rational {
        self.eval_unchecked(v)
    }

    pub fn rank(&self) -> usize {
        rank(&self.s.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    /// Principal minors grouped by order: `minors[k-1]` holds the minors of
    /// order `k`.
    pub fn principal_minors(&self) -> [Vec<Rational>; 3] {
        let mut out: [Vec<Rational>; 3] = Default::default();
        for mask in 1u8..8 {
            let idx: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
            let sub: Vec<Vec<Rational>> = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| self.s[i][j].clone()).collect())
                .collect();
            out[idx.len() - 1].push(determinant(sub));
        }
        out
    }

    /// Exact definiteness from the signs of all principal minors, which also
    /// handles singular forms.
    pub fn definiteness(&self) -> Definiteness {
        if self.is_zero() {
            return Definiteness::Zero;
        }
        let minors = self.principal_minors();
        // minors[k] has order k + 1; the same minor of -S picks up (-1)^(k+1).
        let of_negated = |k: usize, m: &Rational| if k.is_multiple_of(2) { -m } else { m.clone() };
        let all = |pred: &dyn Fn(usize, &Rational) -> bool| {
            minors
                .iter()
                .enumerate()
                .all(|(k, ms)| ms.iter().all(|m| pred(k, m)))
        };
        if all(&|_, m| m.is_positive()) {
            Definiteness::PositiveDefinite
        } else if all(&|k, m| of_negated(k, m).is_positive()) {
            Definiteness::NegativeDefinite
        } else if all(&|_, m| !m.is_negative()) {
            Definiteness::PositiveSemidefinite
        } else if all(&|k, m| !of_negated(k, m).is_negative()) {
            Definiteness::NegativeSemidefinite
        } else {
            Definiteness::Indefinite
        }
    }

    /// Polynomial rendering in `x, y, z`.
    pub fn to_poly_string(&self) -> String {
        let names = ["x", "y", "z"];
        let mut terms = Vec::new();
        for i in 0..3 {
            for j in i..3 {
                let c = if i == j {
                    self.s[i][i].clone()
                } else {
                    &self.s[i][j] * int(2)
                };
                let mono = if i == j {
                    format!("{}^2", names[i])
                } else {
                    format!("{}*{}", names[i], names[j])
                };
                terms.push((c, mono));
            }
        }
        poly_string(&terms)
    }
}

impl QuadraticForm for TernaryForm {
    fn dim(&self) -> usize {
        3
    }

    fn eval_unchecked(&self, v: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += &self.s[i][j] * &v[i] * &v[j];
            }
        }
        acc
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly_string())
    }
}

fn poly_string(terms: &[(Rational, String)]) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = if mag.is_one() {
            mono.clone()
        } else {
            format!("{mag}*{mono}")
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Rank by exact row reduction.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(piv, r);
        let p = m[r][col].clone();
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let factor = &m[i][col] / &p;
                for c in col..ncols {
                    let delta = &factor * &m[r][c];
                    m[i][c] -= delta;
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn lopez_phi_vanishes_on_first_line() {
        let phi = BinaryForm::from_ints(19, 36, 17);
        assert_eq!(evaluate_form(&phi, &ints(&[1, -1])).unwrap(), int(0));
        assert_eq!(evaluate_form(&phi, &ints(&[0, 0])).unwrap(), int(0));
    }

    #[test]
    fn example2_cone_contains_basis_vector() {
        let s = TernaryForm::from_ints([[8, 8, 8], [8, 8, 8], [8, 8, 8]]);
        assert_eq!(evaluate_form(&s, &ints(&[1, 0, -1])).unwrap(), int(0));
        assert_eq!(evaluate_form(&s, &ints(&[0, 0, 0])).unwrap(), int(0));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let phi = BinaryForm::from_ints(1, 0, 1);
        assert_eq!(
            evaluate_form(&phi, &ints(&[1, 2, 3])),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let s = [
            [int(1), int(2), int(0)],
            [int(0), int(1), int(0)],
            [int(0), int(0), int(1)],
        ];
        assert_eq!(TernaryForm::new(s), Err(Error::NotSymmetric));
    }

    #[test]
    fn definiteness_cases() {
        use Definiteness::*;
        let cases = [
            ([[3, 0, 0], [0, 3, 0], [0, 0, 3]], PositiveDefinite),
            ([[-1, 0, 0], [0, -2, 0], [0, 0, -3]], NegativeDefinite),
            ([[1, 1, 1], [1, 1, 1], [1, 1, 1]], PositiveSemidefinite),
            ([[-1, 0, 0], [0, -1, 0], [0, 0, 0]], NegativeSemidefinite),
            ([[0, 0, 0], [0, 0, 0], [0, 0, -4]], NegativeSemidefinite),
            ([[1, 0, 0], [0, -1, 0], [0, 0, 0]], Indefinite),
            ([[0, 1, 0], [1, 0, 0], [0, 0, 0]], Indefinite),
            ([[0, 0, 0], [0, 0, 0], [0, 0, 0]], Zero),
            // Leading minors are all zero here, yet the form is indefinite.
            ([[0, 0, 0], [0, 1, 0], [0, 0, -1]], Indefinite),
        ];
        for (m, want) in cases {
            assert_eq!(TernaryForm::from_ints(m).definiteness(), want, "{m:?}");
        }
    }

    #[test]
    fn rank_and_determinant() {
        let s = TernaryForm::from_ints([[8, 8, 8], [8, 8, 8], [8, 8, 8]]);
        assert_eq!(s.rank(), 1);
        let d = determinant(vec![ints(&[5, 5, 6]), ints(&[5, 5, 8]), ints(&[6, 8, 10])]);
        assert_eq!(d, int(-20));
    }

    #[test]
    fn poly_strings() {
        let f = BinaryForm::new(rat(39, 16), int(3), rat(-39, 16));
        assert_eq!(
            f.to_poly_string(["x", "y"]),
            "39/16*x^2 + 3*x*y - 39/16*y^2"
        );
        assert_eq!(BinaryForm::from_ints(0, 0, 0).to_string(), "0");
        let t = TernaryForm::from_ints([[5, 5, 6], [5, 5, 8], [6, 8, 10]]);
        assert_eq!(
            t.to_string(),
            "5*x^2 + 10*x*y + 12*x*z + 5*y^2 + 16*y*z + 10*z^2"
        );
    }

    proptest! {
        #[test]
        fn homogeneous_of_degree_two(
            c in prop::collection::vec(-9i64..=9, 6),
            v in prop::collection::vec(-9i64..=9, 3),
            num in -9i64..=9,
            den in 1i64..=9,
        ) {
            let f = TernaryForm::from_ints([
                [c[0], c[1], c[2]],
                [c[1], c[3], c[4]],
                [c[2], c[4], c[5]],
            ]);
            let lam = rat(num, den);
            let v = ints(&v);
            let scaled: Vec<Rational> = v.iter().map(|x| x * &lam).collect();
            prop_assert_eq!(
                evaluate_form(&f, &scaled).unwrap(),
                &lam * &lam * evaluate_form(&f, &v).unwrap()
            );
        }

        #[test]
        fn definiteness_matches_sampled_signs(
            c in prop::collection::vec(-4i64..=4, 6),
        ) {
            let f = TernaryForm::from_ints([
                [c[0], c[1], c[2]],
                [c[1], c[3], c[4]],
                [c[2], c[4], c[5]],
            ]);
            let mut pos = false;
            let mut neg = false;
            let mut zero_nontrivial = false;
            for x in -4i64..=4 {
                for y in -4i64..=4 {
                    for z in -4i64..=4 {
                        if (x, y, z) == (0, 0, 0) { continue; }
                        let val = f.eval(&[int(x), int(y), int(z)]);
                        pos |= val.is_positive();
                        neg |= val.is_negative();
                        zero_nontrivial |= val.is_zero();
                    }
                }
            }
            match f.definiteness() {
                Definiteness::PositiveDefinite => prop_assert!(!neg && !zero_nontrivial),
                Definiteness::NegativeDefinite => prop_assert!(!pos && !zero_nontrivial),
                Definiteness::PositiveSemidefinite => prop_assert!(!neg),
                Definiteness::NegativeSemidefinite => prop_assert!(!pos),
                Definiteness::Zero => prop_assert!(!pos && !neg),
                Definiteness::Indefinite => {
                    // Thin cones can miss the grid; fall back to float eigenvalues.
                    let m = nalgebra::Matrix3::from_fn(|i, j| {
                        num_traits::ToPrimitive::to_f64(f.coeff(i, j)).unwrap()
                    });
                    let eig = m.symmetric_eigenvalues();
                    prop_assert!((pos && neg) || (eig.min() < -1e-12 && eig.max() > 1e-12));
                }
            }
        }
    }
}
