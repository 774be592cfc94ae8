//! Norm-preserving lines of 2×2 rational matrices.
//!
//! A direction `v = (x, y)` is norm-preserving for `A` exactly when
//! `Φ(x, y) = (m−1)x² + 2pxy + (n−1)y² = 0`, where `[[m, p], [p, n]] = AᵀA`.
//! Solving `Φ = 0` for the slope gives `y/x = (−p ± √(p² − (m−1)(n−1)))/(n−1)`
//! whenever `n ≠ 1`, and lines exist iff `a² + b² + c² + d² ≥ 1 + det(A)²`.
//!
//! Everything here is exact; no eigenvalues are computed. (The classical
//! geometric argument for the existence criterion bounds the eigenvalues of
//! `AᵀA` by `λ_min ≤ 1 ≤ λ_max`; note that one common write-up of it calls
//! the same eigenvalue first the smaller and then the larger one.)

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::diophantine::{rational_sqrt, square_free_split};
use crate::direction::{normalize_direction, PrimitiveDirection};
use crate::error::{Error, Result};
use crate::linalg::{
    common_denominator, gram2, int, norm_squared, signum, verify_norm_preserving, LinearMap,
    RatMatrix2, Rational,
};
use crate::quadint::QuadIntElement;

/// A line with irrational slope `y/x = (alpha + sign·√s)/beta`, with `beta > 0`
/// and `s` a positive non-square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IrrationalSlope {
    pub alpha: BigInt,
    pub beta: BigInt,
    pub s: BigInt,
    pub sign: i8,
}

impl IrrationalSlope {
    /// `(beta, alpha + sign·√s)`, a direction vector of the line.
    pub fn direction(&self) -> Result<[QuadIntElement; 2]> {
        let root = QuadIntElement::sqrt_of(&self.s)?;
        let y = &QuadIntElement::from_rational(Rational::from_integer(self.alpha.clone()))
            + &root.scale(&int(self.sign.into()));
        Ok([
            QuadIntElement::from_rational(Rational::from_integer(self.beta.clone())),
            y,
        ])
    }
}

impl fmt::Display for IrrationalSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.sign > 0 { '+' } else { '-' };
        write!(f, "y/x = ({} {op} √{})/{}", self.alpha, self.s, self.beta)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Line2Kind {
    Rational(PrimitiveDirection),
    Irrational(IrrationalSlope),
}

/// One norm-preserving line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line2 {
    pub kind: Line2Kind,
    /// `A` maps the line onto itself (eigenvalue ±1). Irrational lines are
    /// never eigenlines of a rational matrix with eigenvalue ±1.
    pub eigenline: bool,
}

impl Line2 {
    pub fn is_rational(&self) -> bool {
        matches!(self.kind, Line2Kind::Rational(_))
    }

    pub fn direction(&self) -> Option<&PrimitiveDirection> {
        match &self.kind {
            Line2Kind::Rational(d) => Some(d),
            Line2Kind::Irrational(_) => None,
        }
    }

    /// Exact check of `‖Av‖² = ‖v‖²`, carried out in `Q(√s)` for irrational
    /// lines.
    pub fn verify(&self, a: &RatMatrix2) -> bool {
        match &self.kind {
            Line2Kind::Rational(d) => verify_norm_preserving(a, d),
            Line2Kind::Irrational(slope) => {
                let Ok([x, y]) = slope.direction() else {
                    return false;
                };
                let lift = |r: &Rational| QuadIntElement::from_rational(r.clone());
                let ax = &(&lift(&a.a) * &x) + &(&lift(&a.b) * &y);
                let ay = &(&lift(&a.c) * &x) + &(&lift(&a.d) * &y);
                let lhs = &(&ax * &ax) + &(&ay * &ay);
                let rhs = &(&x * &x) + &(&y * &y);
                lhs == rhs
            }
        }
    }
}

/// Complete description of the zero set of `Φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineSolution2 {
    NoRealLines,
    /// `AᵀA = I`: every line is norm-preserving.
    AllLines,
    /// One (tangent) or two lines. Rational lines come first in
    /// lexicographic order of their directions.
    Lines(Vec<Line2>),
}

/// `a² + b² + c² + d² ≥ 1 + det(A)²`.
pub fn existence_condition(a: &RatMatrix2) -> bool {
    let det = a.det();
    a.frobenius_squared() >= Rational::one() + &det * &det
}

fn is_eigenline(a: &RatMatrix2, d: &PrimitiveDirection) -> bool {
    let v = d.to_rationals();
    let w = a.apply(&v);
    &w[0] * &v[1] == &w[1] * &v[0]
}

fn rational_line(a: &RatMatrix2, v: [Rational; 2]) -> Line2 {
    let d = normalize_direction(&v).expect("nonzero direction");
    let eigenline = is_eigenline(a, &d);
    Line2 {
        kind: Line2Kind::Rational(d),
        eigenline,
    }
}

fn collect_rational(a: &RatMatrix2, candidates: Vec<[Rational; 2]>) -> LineSolution2 {
    let mut lines: Vec<Line2> = Vec::new();
    for v in candidates {
        let line = rational_line(a, v);
        if !lines.contains(&line) {
            lines.push(line);
        }
    }
    lines.sort_by(|x, y| x.direction().cmp(&y.direction()));
    LineSolution2::Lines(lines)
}

/// Irrational slope `(−p·w ± √(u·w)) / (w·(n−1))` for discriminant `u/w`,
/// scaled to integers with square factors of `s` removed.
fn irrational_slopes(p: &Rational, n_minus_1: &Rational, disc: &Rational) -> [IrrationalSlope; 2] {
    let w = Rational::from_integer(disc.denom().clone());
    let uw = disc.numer() * disc.denom();
    let num = -p * &w;
    let den = &w * n_minus_1;
    let l = Rational::from_integer(common_denominator([&num, &den]));
    let mut alpha = (&num * &l).to_integer();
    let mut beta = (&den * &l).to_integer();
    let (root, s) = square_free_split(&(uw * l.numer() * l.numer()));
    let g = alpha.gcd(&beta).gcd(&root);
    alpha /= &g;
    beta /= &g;
    let root = root / &g;
    let flip = beta.is_negative();
    if flip {
        alpha = -alpha;
        beta = -beta;
    }
    // y/x = (alpha ± root·√s)/beta; keep s square-free and fold `root` in.
    let s = &root * &root * s;
    let (plus, minus) = if flip { (-1, 1) } else { (1, -1) };
    [
        IrrationalSlope {
            alpha: alpha.clone(),
            beta: beta.clone(),
            s: s.clone(),
            sign: plus,
        },
        IrrationalSlope {
            alpha,
            beta,
            s,
            sign: minus,
        },
    ]
}

/// Solves `Φ(x, y) = 0` completely.
pub fn solve_lines2(a: &RatMatrix2) -> LineSolution2 {
    let g = gram2(a);
    let one = Rational::one();
    if g.is_identity() {
        return LineSolution2::AllLines;
    }
    let m1 = &g.m - &one;
    let n1 = &g.n - &one;
    if n1.is_zero() {
        // Φ = x·((m−1)x + 2py)
        let second = [&g.p * int(2), -&m1];
        return collect_rational(a, vec![[int(0), int(1)], second]);
    }
    let disc = g.reduced_discriminant();
    match signum(&disc) {
        -1 => LineSolution2::NoRealLines,
        0 => collect_rational(a, vec![[n1.clone(), -&g.p]]),
        _ => match rational_sqrt(&disc) {
            Some(r) => {
                collect_rational(a, vec![[n1.clone(), -&g.p + &r], [n1.clone(), -&g.p - &r]])
            }
            None => LineSolution2::Lines(
                irrational_slopes(&g.p, &n1, &disc)
                    .into_iter()
                    .map(|s| Line2 {
                        kind: Line2Kind::Irrational(s),
                        eigenline: false,
                    })
                    .collect(),
            ),
        },
    }
}

/// Rational norm-preserving lines, in lexicographic order. Empty for
/// orthogonal matrices, where every line qualifies.
pub fn integer_lines2(a: &RatMatrix2) -> Vec<PrimitiveDirection> {
    match solve_lines2(a) {
        LineSolution2::Lines(lines) => lines
            .into_iter()
            .filter_map(|l| match l.kind {
                Line2Kind::Rational(d) => Some(d),
                Line2Kind::Irrational(_) => None,
            })
            .collect(),
        _ => Vec::new(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Offset {
    Plus,
    Minus,
}

impl Offset {
    fn apply(self, x: &BigInt) -> BigInt {
        match self {
            Offset::Plus => x + 1,
            Offset::Minus => x - 1,
        }
    }
}

/// One of the four matrix families `[[a, a±1], [c, c±1]]` (optionally
/// transposed), all of which have rational norm-preserving lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyVariant {
    pub b_offset: Offset,
    pub d_offset: Offset,
    pub transpose: bool,
}

impl FamilyVariant {
    /// `[[a, a−1], [c, c−1]]`, the family of the classic 4, 3, −2, −3 example.
    pub const LOPEZ: FamilyVariant = FamilyVariant {
        b_offset: Offset::Minus,
        d_offset: Offset::Minus,
        transpose: false,
    };

    /// Parses `pp`, `pm`, `mp`, `mm` (sign of the offset for `b` then `d`),
    /// or `lopez` as an alias of `mm`.
    pub fn parse(name: &str, transpose: bool) -> Result<Self> {
        let (b_offset, d_offset) = match name {
            "pp" => (Offset::Plus, Offset::Plus),
            "pm" => (Offset::Plus, Offset::Minus),
            "mp" => (Offset::Minus, Offset::Plus),
            "mm" | "lopez" => (Offset::Minus, Offset::Minus),
            _ => return Err(Error::Parse(name.to_string())),
        };
        Ok(Self {
            b_offset,
            d_offset,
            transpose,
        })
    }

    pub fn name(&self) -> &'static str {
        match (self.b_offset, self.d_offset) {
            (Offset::Plus, Offset::Plus) => "pp",
            (Offset::Plus, Offset::Minus) => "pm",
            (Offset::Minus, Offset::Plus) => "mp",
            (Offset::Minus, Offset::Minus) => "mm",
        }
    }

    pub fn all() -> impl Iterator<Item = FamilyVariant> {
        let offs = [Offset::Plus, Offset::Minus];
        offs.into_iter().flat_map(move |b| {
            offs.into_iter().flat_map(move |d| {
                [false, true].into_iter().map(move |t| FamilyVariant {
                    b_offset: b,
                    d_offset: d,
                    transpose: t,
                })
            })
        })
    }
}

pub fn family_matrix(variant: FamilyVariant, a: &BigInt, c: &BigInt) -> RatMatrix2 {
    let b = variant.b_offset.apply(a);
    let d = variant.d_offset.apply(c);
    let r = |x: &BigInt| Rational::from_integer(x.clone());
    let m = RatMatrix2::new(r(a), r(&b), r(c), r(&d));
    if variant.transpose {
        m.transpose()
    } else {
        m
    }
}

/// `k` with `p² − (m−1)(n−1) = k²` for a family member, from
/// `(a−b)(a+b) + (c−d)(c+d) = 2k`. Transposition leaves the discriminant
/// unchanged, so the same `k` applies.
pub fn family_k(variant: FamilyVariant, a: &BigInt, c: &BigInt) -> BigInt {
    let b = variant.b_offset.apply(a);
    let d = variant.d_offset.apply(c);
    ((a - &b) * (a + &b) + (c - &d) * (c + &d)) / 2
}

/// Lines of `[[a, a−1], [c, c−1]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySolution {
    pub v1: PrimitiveDirection,
    /// Equals `v1` in the tangent case, and also for the two orthogonal
    /// members `(a, c) = (1, 0), (0, 1)` where the closed form vanishes.
    pub v2: PrimitiveDirection,
    pub k: BigInt,
}

/// `v1 = ⟨1, −1⟩`, `v2 = ⟨(a−1)² + (c−1)² − 1, 1 − a² − c²⟩`, `k = a + c − 1`.
pub fn family_solutions(a: &BigInt, c: &BigInt) -> FamilySolution {
    let v1 = PrimitiveDirection::from_ints(&[1, -1]).expect("nonzero");
    let one = BigInt::one();
    let x = (a - &one).pow(2) + (c - &one).pow(2) - &one;
    let y = &one - a * a - c * c;
    let v2 = PrimitiveDirection::from_bigints(&[x, y]).unwrap_or_else(|_| v1.clone());
    FamilySolution {
        v1,
        v2,
        k: a + c - one,
    }
}

/// `A = [[3/5, b], [4/5, d]]` with lines `⟨1, 0⟩` and
/// `⟨5(1 − b² − d²), 2(3b + 4d)⟩`. The second is `None` when that vector
/// vanishes (`A` orthogonal).
pub fn pythagorean_family(
    b: &Rational,
    d: &Rational,
) -> (RatMatrix2, PrimitiveDirection, Option<PrimitiveDirection>) {
    let a = RatMatrix2::new(
        Rational::new(3.into(), 5.into()),
        b.clone(),
        Rational::new(4.into(), 5.into()),
        d.clone(),
    );
    let v1 = PrimitiveDirection::from_ints(&[1, 0]).expect("nonzero");
    let x = int(5) * (Rational::one() - b * b - d * d);
    let y = int(2) * (int(3) * b + int(4) * d);
    let v2 = normalize_direction(&[x, y]).ok();
    (a, v1, v2)
}

/// Squared-norm ratio `‖Av‖²/‖v‖²` along a rational direction.
pub fn stretch_squared(a: &RatMatrix2, v: &PrimitiveDirection) -> Rational {
    let r = v.to_rationals();
    norm_squared(&a.apply(&r)) / norm_squared(&r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn dir(v: &[i64]) -> PrimitiveDirection {
        PrimitiveDirection::from_ints(v).unwrap()
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> RatMatrix2 {
        RatMatrix2::from_ints(a, b, c, d)
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn existence_examples() {
        assert!(existence_condition(&m(4, 3, -2, -3)));
        assert!(!existence_condition(&m(2, 0, 0, 2)));
        assert!(existence_condition(&m(0, -1, 1, 0)));
    }

    #[test]
    fn lopez_example_lines() {
        let a = m(4, 3, -2, -3);
        let LineSolution2::Lines(lines) = solve_lines2(&a) else {
            panic!("expected lines");
        };
        assert_eq!(lines.len(), 2);
        assert!(lines
            .iter()
            .all(|l| l.is_rational() && !l.eigenline && l.verify(&a)));
        assert_eq!(integer_lines2(&a), vec![dir(&[1, -1]), dir(&[17, -19])]);
    }

    #[test]
    fn eigenline_plus_rotated_line() {
        let a = m(1, -8, 0, 3);
        let LineSolution2::Lines(lines) = solve_lines2(&a) else {
            panic!("expected lines");
        };
        assert_eq!(lines[0].direction(), Some(&dir(&[1, 0])));
        assert!(lines[0].eigenline);
        assert_eq!(lines[1].direction(), Some(&dir(&[9, 2])));
        assert!(!lines[1].eigenline);
    }

    #[test]
    fn orthogonal_gives_all_lines() {
        assert_eq!(solve_lines2(&m(0, -1, 1, 0)), LineSolution2::AllLines);
        assert_eq!(
            solve_lines2(&RatMatrix2::identity()),
            LineSolution2::AllLines
        );
        assert!(integer_lines2(&m(0, -1, 1, 0)).is_empty());
    }

    #[test]
    fn tangent_case_has_one_line() {
        let a = m(3, 2, -2, -3);
        let g = gram2(&a);
        assert_eq!(g.reduced_discriminant(), int(0));
        assert_eq!(integer_lines2(&a), vec![dir(&[1, -1])]);
    }

    #[test]
    fn figure_two_member() {
        assert_eq!(
            integer_lines2(&m(2, 1, -3, -4)),
            vec![dir(&[1, -1]), dir(&[4, -3])]
        );
    }

    #[test]
    fn irrational_lines_are_reported_and_verified() {
        let a = m(1, 1, 1, 1);
        assert!(integer_lines2(&a).is_empty());
        let LineSolution2::Lines(lines) = solve_lines2(&a) else {
            panic!("expected lines");
        };
        assert_eq!(lines.len(), 2);
        for l in &lines {
            let Line2Kind::Irrational(s) = &l.kind else {
                panic!("expected irrational");
            };
            assert!(s.beta.is_positive());
            assert!(crate::diophantine::integer_sqrt(&s.s).unwrap().is_none());
            assert!(l.verify(&a));
        }
        // m = n = 2, p = 2: y/x = (−2 ± √3)/1
        let Line2Kind::Irrational(s) = &lines[0].kind else {
            unreachable!()
        };
        assert_eq!(
            (s.alpha.clone(), s.beta.clone(), s.s.clone()),
            (big(-2), big(1), big(3))
        );
    }

    #[test]
    fn irrational_slope_with_rational_entries() {
        let a = RatMatrix2::new(rat(1, 2), int(1), int(1), rat(1, 3));
        if let LineSolution2::Lines(lines) = solve_lines2(&a) {
            for l in &lines {
                assert!(l.verify(&a), "{l:?}");
            }
        }
    }

    #[test]
    fn n_equals_one_branch() {
        // b² + d² = 1 and m ≠ 1: lines ⟨0,1⟩ and ⟨2p, 1−m⟩.
        let a = m(2, 0, 1, 1);
        let lines = integer_lines2(&a);
        assert!(lines.contains(&dir(&[0, 1])));
        assert_eq!(lines.len(), 2);
        assert!(lines.iter().all(|d| verify_norm_preserving(&a, d)));
        // m = 1, p ≠ 0: the coordinate axes.
        let a = RatMatrix2::new(rat(3, 5), rat(4, 5), rat(4, 5), rat(3, 5));
        assert_eq!(integer_lines2(&a), vec![dir(&[0, 1]), dir(&[1, 0])]);
        // p = 0, m ≠ 1: the two factors coincide.
        let a = m(2, 0, 0, 1);
        assert_eq!(integer_lines2(&a), vec![dir(&[0, 1])]);
    }

    #[test]
    fn family_matrices() {
        let v = FamilyVariant::LOPEZ;
        assert_eq!(family_matrix(v, &big(4), &big(-2)), m(4, 3, -2, -3));
        assert_eq!(family_matrix(v, &big(2), &big(-3)), m(2, 1, -3, -4));
        for v in FamilyVariant::all() {
            let a = family_matrix(v, &big(0), &big(0));
            for e in [&a.a, &a.b, &a.c, &a.d] {
                assert!(e.abs() <= int(1));
            }
        }
        let t = FamilyVariant::parse("pm", true).unwrap();
        assert_eq!(family_matrix(t, &big(2), &big(5)), m(2, 5, 3, 4));
        assert!(FamilyVariant::parse("zz", false).is_err());
    }

    #[test]
    fn family_solution_examples() {
        let s = family_solutions(&big(4), &big(-2));
        assert_eq!(
            (s.v1.clone(), s.v2.clone(), s.k.clone()),
            (dir(&[1, -1]), dir(&[17, -19]), big(1))
        );
        let s = family_solutions(&big(2), &big(-3));
        assert_eq!((s.v2.clone(), s.k.clone()), (dir(&[4, -3]), big(-2)));
        let s = family_solutions(&big(3), &big(-2));
        assert_eq!(s.v2, s.v1);
    }

    #[test]
    fn every_variant_has_square_discriminant() {
        for v in FamilyVariant::all() {
            for a in -6..=6 {
                for c in -6..=6 {
                    let mat = family_matrix(v, &big(a), &big(c));
                    let k = family_k(v, &big(a), &big(c));
                    let kr = Rational::from_integer(k);
                    assert_eq!(
                        gram2(&mat).reduced_discriminant(),
                        &kr * &kr,
                        "{v:?} {a} {c}"
                    );
                    for d in integer_lines2(&mat) {
                        assert!(verify_norm_preserving(&mat, &d));
                    }
                }
            }
        }
    }

    #[test]
    fn pythagorean_examples() {
        let (a, v1, v2) = pythagorean_family(&int(1), &int(1));
        let v2 = v2.unwrap();
        assert_eq!(v2, dir(&[5, -14]));
        assert!(verify_norm_preserving(&a, &v1));
        assert!(verify_norm_preserving(&a, &v2));
        assert_eq!(stretch_squared(&a, &v2), int(1));

        let (_, v1, v2) = pythagorean_family(&int(0), &int(0));
        assert_eq!(v2, Some(v1));

        let (a, _, v2) = pythagorean_family(&rat(-4, 5), &rat(3, 5));
        assert_eq!(v2, None);
        assert_eq!(solve_lines2(&a), LineSolution2::AllLines);
    }
}
