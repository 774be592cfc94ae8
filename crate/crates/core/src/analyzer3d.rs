//! The solution cone `v·(B−I)v = 0` of a 3×3 rational matrix.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::diophantine::{integer_sqrt, rational_sqrt, square_free_split, IntBinaryForm};
use crate::direction::{normalize_direction, PrimitiveDirection};
use crate::error::{Error, Result};
use crate::form::{BinaryForm, TernaryForm};
use crate::linalg::{common_denominator, gram3, int, RatMatrix3, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            _ => Err(Error::Parse(s.to_string())),
        }
    }

    /// The two remaining axes in increasing order.
    pub fn others(self) -> [Axis; 2] {
        match self {
            Axis::X => [Axis::Y, Axis::Z],
            Axis::Y => [Axis::X, Axis::Z],
            Axis::Z => [Axis::X, Axis::Y],
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// `B − I` as a ternary form.
pub fn cone_form(a: &RatMatrix3) -> TernaryForm {
    gram3(a).minus_identity()
}

/// Nonzero real solutions exist iff `B − I` is neither positive nor
/// negative definite.
pub fn existence3(a: &RatMatrix3) -> bool {
    !cone_form(a).definiteness().is_definite()
}

/// Zero set of the cone form over the reals, with its rational structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeClassification {
    /// `B − I` definite: only the zero vector.
    Empty,
    /// Rank 2 and semidefinite: the kernel line.
    SingleLine { direction: PrimitiveDirection },
    /// Rank 1: a rational multiple of `(normal·v)²`.
    DoublePlane { normal: PrimitiveDirection },
    /// Rank 2, indefinite, factoring over the rationals.
    PlanePair { normals: [PrimitiveDirection; 2] },
    /// Rank 2, indefinite, factoring only over a quadratic extension. The two
    /// real planes meet in the rational kernel line, which carries every
    /// integer solution.
    IrrationalPlanePair { kernel: PrimitiveDirection },
    /// Rank 3, indefinite.
    IrreducibleCone,
    /// `B = I`.
    AllSpace,
}

impl ConeClassification {
    pub fn name(&self) -> &'static str {
        match self {
            ConeClassification::Empty => "Empty",
            ConeClassification::SingleLine { .. } => "SingleLine",
            ConeClassification::DoublePlane { .. } => "DoublePlane",
            ConeClassification::PlanePair { .. } => "PlanePair",
            ConeClassification::IrrationalPlanePair { .. } => "IrrationalPlanePair",
            ConeClassification::IrreducibleCone => "IrreducibleCone",
            ConeClassification::AllSpace => "AllSpace",
        }
    }
}

impl fmt::Display for ConeClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn cross(u: &[Rational; 3], v: &[Rational; 3]) -> [Rational; 3] {
    [
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn kernel_line(s: &TernaryForm) -> PrimitiveDirection {
    let m = s.matrix();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if let Ok(d) = normalize_direction(&cross(&m[i], &m[j])) {
            return d;
        }
    }
    unreachable!("kernel_line needs rank 2")
}

fn unit(i: usize) -> [Rational; 3] {
    let mut v: [Rational; 3] = Default::default();
    v[i] = Rational::one();
    v
}

fn sorted_pair(p: PrimitiveDirection, q: PrimitiveDirection) -> [PrimitiveDirection; 2] {
    if p <= q {
        [p, q]
    } else {
        [q, p]
    }
}

/// Factors a rank-2 indefinite form, if it splits over the rationals.
fn factor_rank2(s: &TernaryForm) -> Option<[PrimitiveDirection; 2]> {
    let m = s.matrix();
    let Some(i) = (0..3).find(|&i| !m[i][i].is_zero()) else {
        // 2(a·xy + b·xz + c·yz) with abc = 0.
        let (a, b, c) = (&m[0][1], &m[0][2], &m[1][2]);
        let zero = Rational::zero;
        let (e, other) = if c.is_zero() {
            (0, [zero(), a.clone(), b.clone()])
        } else if b.is_zero() {
            (1, [a.clone(), zero(), c.clone()])
        } else {
            (2, [b.clone(), c.clone(), zero()])
        };
        let p = normalize_direction(&unit(e)).ok()?;
        let q = normalize_direction(&other).ok()?;
        return Some(sorted_pair(p, q));
    };
    // S_ii·Q = (S_ii·x_i + L)² − Δ, with Δ = c·ℓ² of rank one.
    let [j, k] = Axis::ALL[i].others().map(Axis::index);
    let sii = &m[i][i];
    let (l_j, l_k) = (&m[i][j], &m[i][k]);
    let dp = l_j * l_j - sii * &m[j][j];
    let dq = l_j * l_k - sii * &m[j][k];
    let dr = l_k * l_k - sii * &m[k][k];
    let (c, ell) = if !dp.is_zero() {
        (dp.clone(), [Rational::one(), &dq / &dp])
    } else {
        (dr.clone(), [Rational::zero(), Rational::one()])
    };
    let root = rational_sqrt(&c)?;
    let mut base: [Rational; 3] = Default::default();
    base[i] = sii.clone();
    base[j] = l_j.clone();
    base[k] = l_k.clone();
    let shifted = |sign: i64| {
        let mut v = base.clone();
        v[j] += &root * &ell[0] * int(sign);
        v[k] += &root * &ell[1] * int(sign);
        normalize_direction(&v)
    };
    Some(sorted_pair(shifted(1).ok()?, shifted(-1).ok()?))
}

pub fn classify_form(s: &TernaryForm) -> ConeClassification {
    if s.is_zero() {
        return ConeClassification::AllSpace;
    }
    let def = s.definiteness();
    match s.rank() {
        3 if def.is_definite() => ConeClassification::Empty,
        3 => ConeClassification::IrreducibleCone,
        2 if def.is_semidefinite() => ConeClassification::SingleLine {
            direction: kernel_line(s),
        },
        2 => match factor_rank2(s) {
            Some(normals) => ConeClassification::PlanePair { normals },
            None => ConeClassification::IrrationalPlanePair {
                kernel: kernel_line(s),
            },
        },
        _ => {
            let row = s
                .matrix()
                .iter()
                .find(|r| r.iter().any(|x| !x.is_zero()))
                .expect("nonzero form");
            ConeClassification::DoublePlane {
                normal: normalize_direction(row).expect("nonzero row"),
            }
        }
    }
}

pub fn classify_cone(a: &RatMatrix3) -> ConeClassification {
    classify_form(&cone_form(a))
}

/// Two primitive vectors spanning the plane orthogonal to `normal`:
/// `n_k·e_i − n_i·e_k` for the last nonzero coordinate `k` and each `i ≠ k`.
pub fn plane_basis_for_normal(normal: &PrimitiveDirection) -> [PrimitiveDirection; 2] {
    let n = normal.coords();
    let k = (0..3)
        .rev()
        .find(|&i| !n[i].is_zero())
        .expect("nonzero normal");
    let mut out = Vec::with_capacity(2);
    for i in (0..3).filter(|&i| i != k) {
        let mut v = vec![BigInt::zero(); 3];
        v[i] = n[k].clone();
        v[k] = -&n[i];
        out.push(PrimitiveDirection::from_bigints(&v).expect("nonzero"));
    }
    [out[0].clone(), out[1].clone()]
}

/// Integer basis of a degenerate (double-plane) cone.
pub fn plane_integer_basis(c: &ConeClassification) -> Result<[PrimitiveDirection; 2]> {
    match c {
        ConeClassification::DoublePlane { normal } => Ok(plane_basis_for_normal(normal)),
        other => Err(Error::WrongClassification {
            expected: "DoublePlane",
            found: other.name().to_string(),
        }),
    }
}

/// The cone solved for one coordinate by the quadratic formula:
/// `pivot = linear·(y, z) ± √(discriminant_form(y, z)) / denominator`,
/// where `(y, z)` are the two other coordinates in increasing axis order.
///
/// `discriminant_form` has integer coefficients. It equals `scale²` times
/// the raw discriminant `L² − S_ii·Q'`, with `scale` chosen so that no
/// square factor remains in the coefficient content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotReduction {
    pub pivot: Axis,
    pub others: [Axis; 2],
    pub linear: [Rational; 2],
    pub denominator: Rational,
    pub discriminant_form: BinaryForm,
    pub scale: Rational,
}

impl PivotReduction {
    /// Places `pivot_value` and the two free coordinates into `(x, y, z)`.
    pub fn assemble(&self, pivot_value: Rational, y: Rational, z: Rational) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); 3];
        v[self.pivot.index()] = pivot_value;
        v[self.others[0].index()] = y;
        v[self.others[1].index()] = z;
        v
    }

    pub fn int_form(&self) -> IntBinaryForm {
        let [a, b, c] = self
            .discriminant_form
            .coefficients()
            .map(|x| x.to_integer());
        IntBinaryForm::new(a, b, c)
    }

    /// Checks that substituting the pivot formula back into `cone` gives
    /// the zero polynomial: the `√` terms cancel by construction of
    /// `linear`, and the rest cancels iff
    /// `disc/scale² = L² − S_ii·Q'` coefficient-wise.
    pub fn verify_identity(&self, cone: &TernaryForm) -> bool {
        let m = cone.matrix();
        let i = self.pivot.index();
        let [j, k] = self.others.map(Axis::index);
        let sii = &m[i][i];
        if sii.is_zero() || self.denominator != sii.abs() * &self.scale {
            return false;
        }
        let lin_ok = self.linear[0] == -&m[i][j] / sii && self.linear[1] == -&m[i][k] / sii;
        let raw = raw_discriminant(m, i, j, k);
        lin_ok
            && self
                .discriminant_form
                .scale(&(Rational::one() / (&self.scale * &self.scale)))
                == raw
    }
}

impl fmt::Display for PivotReduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.others.map(|a| a.name().to_string());
        let lin = BinaryLinear(&self.linear, &names);
        write!(
            f,
            "{} = {} ± √({})/{}",
            self.pivot,
            lin,
            self.discriminant_form
                .to_poly_string([names[0].as_str(), names[1].as_str()]),
            self.denominator
        )
    }
}

struct BinaryLinear<'a>(&'a [Rational; 2], &'a [String; 2]);

impl fmt::Display for BinaryLinear<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, v) in self.0.iter().zip(self.1) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = if mag.is_one() {
                v.clone()
            } else {
                format!("{mag}*{v}")
            };
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn raw_discriminant(m: &[[Rational; 3]; 3], i: usize, j: usize, k: usize) -> BinaryForm {
    let sii = &m[i][i];
    let (lj, lk) = (&m[i][j], &m[i][k]);
    BinaryForm::new(
        lj * lj - sii * &m[j][j],
        int(2) * (lj * lk - sii * &m[j][k]),
        lk * lk - sii * &m[k][k],
    )
}

pub fn pivot_reduce(a: &RatMatrix3, pivot: Axis) -> Result<PivotReduction> {
    let cone = cone_form(a);
    let m = cone.matrix();
    let i = pivot.index();
    let sii = &m[i][i];
    if sii.is_zero() {
        return Err(Error::ZeroPivot(pivot.name()));
    }
    let others = pivot.others();
    let [j, k] = others.map(Axis::index);
    let raw = raw_discriminant(m, i, j, k);

    // raw = (g/w)·P with P primitive; scale = w/f where g·w = f²·s.
    let coeffs = raw.coefficients();
    let w = common_denominator(coeffs);
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (*c * Rational::from_integer(w.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let scale = if g.is_zero() {
        Rational::one()
    } else {
        let r = Rational::new(g, w);
        let (f, _) = square_free_split(&(r.numer() * r.denom()));
        Rational::new(r.denom().clone(), f)
    };
    let disc = raw.scale(&(&scale * &scale));
    Ok(PivotReduction {
        pivot,
        others,
        linear: [-&m[i][j] / sii, -&m[i][k] / sii],
        denominator: sii.abs() * &scale,
        discriminant_form: disc,
        scale,
    })
}

/// First axis whose squared coefficient in the cone form is nonzero.
pub fn default_pivot(a: &RatMatrix3) -> Result<Axis> {
    let cone = cone_form(a);
    Axis::ALL
        .into_iter()
        .find(|ax| !cone.coeff(ax.index(), ax.index()).is_zero())
        .ok_or(Error::AllPivotsDegenerate)
}

/// All primitive integer directions with coordinates in `[−bound, bound]`
/// on the cone, in lexicographic order.
///
/// For each `(x, y)` the cone is a quadratic `a·z² + 2b·z + c = 0` in `z`,
/// so the search is quadratic in `bound` rather than cubic.
pub fn integer_line_search3(a: &RatMatrix3, bound: u32) -> Vec<PrimitiveDirection> {
    let cone = cone_form(a);
    let l = Rational::from_integer(common_denominator(cone.matrix().iter().flatten()));
    let s: Vec<Vec<BigInt>> = cone
        .matrix()
        .iter()
        .map(|r| r.iter().map(|x| (x * &l).to_integer()).collect())
        .collect();
    let bound_i = i64::from(bound);
    let bound_big = BigInt::from(bound);
    let mut found: BTreeSet<PrimitiveDirection> = BTreeSet::new();
    let mut push = |x: &BigInt, y: &BigInt, z: &BigInt| {
        if z.abs() <= bound_big {
            if let Ok(d) = PrimitiveDirection::from_bigints(&[x.clone(), y.clone(), z.clone()]) {
                found.insert(d);
            }
        }
    };
    let qa = &s[2][2];
    for xi in 0..=bound_i {
        for yi in -bound_i..=bound_i {
            if xi == 0 && yi < 0 {
                continue;
            }
            let (x, y) = (BigInt::from(xi), BigInt::from(yi));
            let qb = &s[0][2] * &x + &s[1][2] * &y;
            let qc = &s[0][0] * &x * &x + BigInt::from(2) * &s[0][1] * &x * &y + &s[1][1] * &y * &y;
            if !qa.is_zero() {
                let d = &qb * &qb - qa * &qc;
                if d.is_negative() {
                    continue;
                }
                let Ok(Some(r)) = integer_sqrt(&d) else {
                    continue;
                };
                for num in [-&qb + &r, -&qb - &r] {
                    if num.is_multiple_of(qa) {
                        push(&x, &y, &(num / qa));
                    }
                }
            } else if !qb.is_zero() {
                let den = BigInt::from(2) * &qb;
                if qc.is_multiple_of(&den) {
                    push(&x, &y, &(-&qc / den));
                }
            } else if qc.is_zero() {
                for zi in -bound_i..=bound_i {
                    push(&x, &y, &BigInt::from(zi));
                }
            }
        }
    }
    found.into_iter().collect()
}

/// The matrix `[[1, 2, 3], [2, 1, 1], [1, 1, 1]]`, whose cone carries
/// infinitely many integer lines.
pub fn example3_matrix() -> RatMatrix3 {
    RatMatrix3::from_ints([[1, 2, 3], [2, 1, 1], [1, 1, 1]])
}

/// Lines of [`example3_matrix`] from the two-parameter family
/// `x = (r² − 10v² ± 4vr)/10`, `y = −(14v² + r²)/10`, `z = 2v²`;
/// the `+` branch first, coincident branches merged.
pub fn example3_family(v: &BigInt, r: &BigInt) -> Result<Vec<PrimitiveDirection>> {
    let ten = Rational::from_integer(BigInt::from(10));
    let (vr, rr) = (
        Rational::from_integer(v.clone()),
        Rational::from_integer(r.clone()),
    );
    let base = &rr * &rr - &ten * &vr * &vr;
    let cross = int(4) * &vr * &rr;
    let y = -(int(14) * &vr * &vr + &rr * &rr) / &ten;
    let z = int(2) * &vr * &vr;
    let mut out = Vec::with_capacity(2);
    for x in [(&base + &cross) / &ten, (&base - &cross) / &ten] {
        let d = normalize_direction(&[x, y.clone(), z.clone()])?;
        if !out.contains(&d) {
            out.push(d);
        }
    }
    Ok(out)
}
