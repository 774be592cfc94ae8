//! Quadratic Diophantine machinery: perfect-square tests, the mod-4
//! obstruction for `a·x² + b·xy + c·y² = u²`, brute-force solution oracles,
//! and the two-parameter family generated from a single seed solution.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::analyzer3d::PivotReduction;
use crate::direction::{normalize_direction, PrimitiveDirection};
use crate::error::{Error, Result};
use crate::linalg::{verify_norm_preserving, RatMatrix3, Rational};

/// Exact square root of a nonnegative integer, or `None` if `n` is not a
/// perfect square.
pub fn integer_sqrt(n: &BigInt) -> Result<Option<BigInt>> {
    if n.is_negative() {
        return Err(Error::Negative(n.to_string()));
    }
    let r = n.sqrt();
    Ok((&r * &r == *n).then_some(r))
}

/// Exact square root of a rational: `u/w` in lowest terms is a square iff
/// both `u` and `w` are.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let u = integer_sqrt(x.numer()).ok()??;
    let w = integer_sqrt(x.denom()).ok()??;
    Some(Rational::new(u, w))
}

/// Splits a positive `n` as `root² · free` with `free` square-free.
///
/// Trial division runs to 10⁶ and a leftover cofactor is tested for being a
/// perfect square, which makes the split exact for every `n < 10¹⁸`. Beyond
/// that the cofactor is assumed square-free.
pub fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(
        n.is_positive(),
        "square_free_split needs a positive integer"
    );
    let mut rest = n.clone();
    let mut root = BigInt::one();
    let mut free = BigInt::one();
    let mut p = 2u64;
    while p <= 1_000_000 {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0u32;
        while rest.is_multiple_of(&bp) {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            root *= bp.pow(e / 2);
            if e % 2 == 1 {
                free *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        match integer_sqrt(&rest).expect("positive") {
            Some(r) => root *= r,
            None => free *= rest,
        }
    }
    (root, free)
}

/// `a·y² + b·yz + c·z²` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntBinaryForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl IntBinaryForm {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Self {
        Self { a, b, c }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        Self::new(a.into(), b.into(), c.into())
    }

    pub fn eval(&self, y: &BigInt, z: &BigInt) -> BigInt {
        &self.a * y * y + &self.b * y * z + &self.c * z * z
    }
}

/// The equation `form(y, z) = d·u²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareRepInstance {
    pub form: IntBinaryForm,
    pub d: BigInt,
}

impl SquareRepInstance {
    pub fn new(form: IntBinaryForm, d: BigInt) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::ZeroMultiplier);
        }
        Ok(Self { form, d })
    }

    /// `form(y, z) = u²`.
    pub fn squares(form: IntBinaryForm) -> Self {
        Self {
            form,
            d: BigInt::one(),
        }
    }

    pub fn is_solution(&self, y: &BigInt, z: &BigInt, u: &BigInt) -> bool {
        self.form.eval(y, z) == &self.d * u * u
    }
}

/// Certifies that `a·x² + b·xy + c·y² = u²` has no solution with
/// `(x, y) ≠ (0, 0)`.
///
/// Applies when `a ≡ c ≡ 3` and `b ≡ 0 (mod 4)`. Write `x = 2^α·v`,
/// `y = 2^β·w` with `v, w` odd and `α ≤ β` (the form is symmetric under the
/// swap modulo 4). After removing `4^α`, the cofactor is `≡ 2 (mod 4)` when
/// `α = β` and `≡ 3 (mod 4)` when `α < β`, and neither residue is a square.
/// Returns `false` when the pattern does not apply: that means
/// "inconclusive", never "solvable".
pub fn two_adic_obstruction(f: &IntBinaryForm) -> bool {
    let four = BigInt::from(4);
    let three = BigInt::from(3);
    f.a.mod_floor(&four) == three && f.c.mod_floor(&four) == three && f.b.mod_floor(&four).is_zero()
}

/// Every `(y, z, u)` with `|y|, |z| ≤ bound`, `u ≥ 0`, `(y, z) ≠ (0, 0)` and
/// `form(y, z) = d·u²`, ordered by `y` then `z`.
pub fn square_rep_bruteforce(
    inst: &SquareRepInstance,
    bound: u32,
) -> Vec<(BigInt, BigInt, BigInt)> {
    let b = i64::from(bound);
    let small = (
        inst.form.a.to_i64(),
        inst.form.b.to_i64(),
        inst.form.c.to_i64(),
        inst.d.to_i64(),
    );
    let mut out = Vec::new();
    match small {
        (Some(fa), Some(fb), Some(fc), Some(d)) => {
            let (fa, fb, fc, d) = (fa as i128, fb as i128, fc as i128, d as i128);
            for y in -b..=b {
                for z in -b..=b {
                    if y == 0 && z == 0 {
                        continue;
                    }
                    let (y1, z1) = (y as i128, z as i128);
                    let val = fa * y1 * y1 + fb * y1 * z1 + fc * z1 * z1;
                    if val % d != 0 {
                        continue;
                    }
                    let q = val / d;
                    if q < 0 {
                        continue;
                    }
                    let r = (q as u128).sqrt();
                    if r * r == q as u128 {
                        out.push((BigInt::from(y), BigInt::from(z), BigInt::from(r)));
                    }
                }
            }
        }
        _ => {
            for y in -b..=b {
                for z in -b..=b {
                    if y == 0 && z == 0 {
                        continue;
                    }
                    let (y, z) = (BigInt::from(y), BigInt::from(z));
                    let val = inst.form.eval(&y, &z);
                    let (q, r) = val.div_rem(&inst.d);
                    if !r.is_zero() || q.is_negative() {
                        continue;
                    }
                    if let Some(u) = integer_sqrt(&q).expect("nonnegative") {
                        out.push((y, z, u));
                    }
                }
            }
        }
    }
    out
}

/// A seed solution `(m, n, p)` of `a·y² + b·yz + c·z² = d·u²` and the
/// two-parameter family of solutions it generates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiezasFamily {
    pub instance: SquareRepInstance,
    pub seed: (BigInt, BigInt, BigInt),
}

impl PiezasFamily {
    /// `(y, z, u)` at parameters `(s, t)`:
    ///
    /// ```text
    /// y = (a·m + b·n)·s² + 2·c·n·s·t − c·m·t²
    /// z = −a·n·s² + 2·a·m·s·t + (b·m + c·n)·t²
    /// u = p·(a·s² + b·s·t + c·t²)
    /// ```
    pub fn evaluate(&self, s: &BigInt, t: &BigInt) -> (BigInt, BigInt, BigInt) {
        let IntBinaryForm { a, b, c } = &self.instance.form;
        let (m, n, p) = &self.seed;
        let (ss, st, tt) = (s * s, s * t, t * t);
        let y = (a * m + b * n) * &ss + BigInt::from(2) * c * n * &st - c * m * &tt;
        let z = -(a * n) * &ss + BigInt::from(2) * a * m * &st + (b * m + c * n) * &tt;
        let u = p * (a * &ss + b * &st + c * &tt);
        (y, z, u)
    }

    /// Coefficients of `y`, `z`, `u` as binary forms in `(s, t)`, listed as
    /// `[s², s·t, t²]`.
    pub fn coefficient_table(&self) -> [[BigInt; 3]; 3] {
        let IntBinaryForm { a, b, c } = &self.instance.form;
        let (m, n, p) = &self.seed;
        let two = BigInt::from(2);
        [
            [a * m + b * n, &two * c * n, -(c * m)],
            [-(a * n), &two * a * m, b * m + c * n],
            [p * a, p * b, p * c],
        ]
    }
}

pub fn piezas_family(
    inst: &SquareRepInstance,
    seed: (BigInt, BigInt, BigInt),
) -> Result<PiezasFamily> {
    let (m, n, p) = &seed;
    if !inst.is_solution(m, n, p) {
        return Err(Error::InvalidSeed {
            m: m.to_string(),
            n: n.to_string(),
            p: p.to_string(),
        });
    }
    Ok(PiezasFamily {
        instance: inst.clone(),
        seed,
    })
}

/// Turns a solution `(y, z, u)` of `disc(y, z) = u²` into the (at most two)
/// cone directions it determines: the pivot coordinate is
/// `linear(y, z) ± u / denominator`.
pub fn lift_to_lines(
    a: &RatMatrix3,
    red: &PivotReduction,
    sol: (&BigInt, &BigInt, &BigInt),
) -> Result<Vec<PrimitiveDirection>> {
    let (y, z, u) = sol;
    let (yr, zr) = (
        Rational::from_integer(y.clone()),
        Rational::from_integer(z.clone()),
    );
    let ur = Rational::from_integer(u.clone());
    if red.discriminant_form.eval(&yr, &zr) != &ur * &ur {
        return Err(Error::DiscriminantMismatch {
            y: y.to_string(),
            z: z.to_string(),
            u: u.to_string(),
        });
    }
    let base = &red.linear[0] * &yr + &red.linear[1] * &zr;
    let offset = &ur / &red.denominator;
    let mut out: Vec<PrimitiveDirection> = Vec::with_capacity(2);
    for pivot_value in [&base + &offset, &base - &offset] {
        let v = red.assemble(pivot_value, yr.clone(), zr.clone());
        let dir = normalize_direction(&v)?;
        if !verify_norm_preserving(a, &dir) {
            return Err(Error::Degenerate(
                "pivot reduction does not belong to this matrix".into(),
            ));
        }
        if !out.contains(&dir) {
            out.push(dir);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer3d::{pivot_reduce, Axis};
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn dir(v: &[i64]) -> PrimitiveDirection {
        PrimitiveDirection::from_ints(v).unwrap()
    }

    #[test]
    fn integer_sqrt_cases() {
        assert_eq!(integer_sqrt(&big(0)).unwrap(), Some(big(0)));
        assert_eq!(integer_sqrt(&big(2)).unwrap(), None);
        let r = big(1149851);
        assert_eq!(integer_sqrt(&(&r * &r)).unwrap(), Some(r));
        assert!(integer_sqrt(&big(-4)).is_err());
    }

    #[test]
    fn rational_square_roots() {
        use crate::linalg::rat;
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(3, 4)), None);
        assert_eq!(rational_sqrt(&rat(-1, 4)), None);
    }

    #[test]
    fn square_free_splits() {
        assert_eq!(square_free_split(&big(20)), (big(2), big(5)));
        assert_eq!(square_free_split(&big(1)), (big(1), big(1)));
        assert_eq!(square_free_split(&big(48)), (big(4), big(3)));
        let p = big(1_000_003);
        assert_eq!(square_free_split(&(&p * &p * 7)), (p.clone(), big(7)));
    }

    #[test]
    fn obstruction_cases() {
        assert!(two_adic_obstruction(&IntBinaryForm::from_ints(39, 48, 39)));
        assert!(two_adic_obstruction(&IntBinaryForm::from_ints(3, 4, 3)));
        assert!(!two_adic_obstruction(&IntBinaryForm::from_ints(1, 0, 0)));
        assert!(!two_adic_obstruction(&IntBinaryForm::from_ints(36, 52, 39)));
    }

    #[test]
    fn obstructed_forms_have_no_small_solutions() {
        for (a, b, c) in [(39, 48, 39), (3, 4, 3)] {
            let inst = SquareRepInstance::squares(IntBinaryForm::from_ints(a, b, c));
            assert!(square_rep_bruteforce(&inst, 500).is_empty());
        }
    }

    #[test]
    fn example3_discriminant_solutions() {
        let inst = SquareRepInstance::squares(IntBinaryForm::from_ints(0, -20, -14));
        let sols = square_rep_bruteforce(&inst, 10);
        assert!(sols.contains(&(big(-3), big(2), big(8))));
        assert!(sols.contains(&(big(3), big(-2), big(8))));
        for (y, z, u) in &sols {
            assert!(inst.is_solution(y, z, u));
            assert!(sols.contains(&(-y, -z, u.clone())));
        }
    }

    #[test]
    fn bruteforce_with_multiplier() {
        // y² + z² = 2u²
        let inst = SquareRepInstance::new(IntBinaryForm::from_ints(1, 0, 1), big(2)).unwrap();
        let sols = square_rep_bruteforce(&inst, 3);
        assert!(sols.contains(&(big(1), big(1), big(1))));
        assert!(sols.contains(&(big(1), big(-1), big(1))));
        assert!(sols.iter().all(|(y, z, u)| inst.is_solution(y, z, u)));
        assert!(SquareRepInstance::new(IntBinaryForm::from_ints(1, 0, 1), big(0)).is_err());
    }

    fn seed_106_family() -> PiezasFamily {
        let inst = SquareRepInstance::squares(IntBinaryForm::from_ints(36, 52, 39));
        piezas_family(&inst, (big(1), big(0), big(6))).unwrap()
    }

    #[test]
    fn piezas_seed_106_values() {
        let fam = seed_106_family();
        assert_eq!(
            fam.evaluate(&big(1), &big(1)),
            (big(-3), big(124), big(762))
        );
        assert_eq!(fam.evaluate(&big(1), &big(0)), (big(36), big(0), big(216)));
        assert_eq!(
            fam.evaluate(&big(1), &big(2)),
            (big(-120), big(352), big(1776))
        );
    }

    #[test]
    fn piezas_rejects_bad_seed() {
        let inst = SquareRepInstance::squares(IntBinaryForm::from_ints(36, 52, 39));
        assert!(matches!(
            piezas_family(&inst, (big(1), big(1), big(6))),
            Err(Error::InvalidSeed { .. })
        ));
    }

    #[test]
    fn piezas_identity_needs_negated_z_term_for_general_seeds() {
        // x² + y² = 2u² with seed (1, 1, 1): n ≠ 0.
        let inst = SquareRepInstance::new(IntBinaryForm::from_ints(1, 0, 1), big(2)).unwrap();
        let fam = piezas_family(&inst, (big(1), big(1), big(1))).unwrap();
        let (s, t) = (big(1), big(1));
        let (y, z, u) = fam.evaluate(&s, &t);
        assert!(inst.is_solution(&y, &z, &u));
        // The same parameters with `+a·n·s²` in z do not solve it.
        let z_literal = &z + BigInt::from(2) * (&inst.form.a * &fam.seed.1);
        assert!(!inst.is_solution(&y, &z_literal, &u));
    }

    #[test]
    fn lifts_reproduce_displayed_lines() {
        let a = RatMatrix3::from_ints([[1, 2, 3], [3, 4, 5], [2, 3, 4]]);
        let red = pivot_reduce(&a, Axis::X).unwrap();
        let fam = seed_106_family();
        let (y, z, u) = fam.evaluate(&big(1), &big(1));
        let lines = lift_to_lines(&a, &red, (&y, &z, &u)).unwrap();
        assert_eq!(lines, vec![dir(&[-2402, -39, 1612]), dir(&[-302, -3, 124])]);
        let (y, z, u) = fam.evaluate(&big(1), &big(2));
        let lines = lift_to_lines(&a, &red, (&y, &z, &u)).unwrap();
        assert_eq!(
            lines,
            vec![dir(&[-4976, -1560, 4576]), dir(&[-656, -120, 352])]
        );
    }

    #[test]
    fn lift_of_z_zero_gives_eigenline() {
        let a = RatMatrix3::from_ints([[1, 2, 3], [2, 1, 1], [1, 1, 1]]);
        let red = pivot_reduce(&a, Axis::X).unwrap();
        let lines = lift_to_lines(&a, &red, (&big(1), &big(0), &big(0))).unwrap();
        assert_eq!(lines, vec![dir(&[1, -1, 0])]);
    }

    #[test]
    fn lift_rejects_non_solutions() {
        let a = RatMatrix3::from_ints([[1, 2, 3], [2, 1, 1], [1, 1, 1]]);
        let red = pivot_reduce(&a, Axis::X).unwrap();
        assert!(matches!(
            lift_to_lines(&a, &red, (&big(1), &big(1), &big(1))),
            Err(Error::DiscriminantMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn integer_sqrt_round_trip(limbs in prop::collection::vec(any::<u32>(), 1..5)) {
            let n = BigInt::from(num_bigint::BigUint::new(limbs));
            let sq = &n * &n;
            prop_assert_eq!(integer_sqrt(&sq).unwrap(), Some(n.clone()));
            if !n.is_zero() {
                prop_assert_eq!(integer_sqrt(&(sq + 1u32)).unwrap(), None);
            }
        }

        #[test]
        fn piezas_identity_holds(s in -50i64..=50, t in -50i64..=50) {
            let fam = seed_106_family();
            let (y, z, u) = fam.evaluate(&big(s), &big(t));
            prop_assert!(fam.instance.is_solution(&y, &z, &u));
        }

        #[test]
        fn piezas_identity_for_arbitrary_seeds(
            a in -9i64..=9, b in -9i64..=9, c in -9i64..=9,
            m in -9i64..=9, n in -9i64..=9, p in 1i64..=9,
            s in -20i64..=20, t in -20i64..=20,
        ) {
            let val = a * m * m + b * m * n + c * n * n;
            prop_assume!(val != 0 && val % (p * p) == 0);
            let d = val / (p * p);
            let inst = SquareRepInstance::new(IntBinaryForm::from_ints(a, b, c), big(d)).unwrap();
            let fam = piezas_family(&inst, (big(m), big(n), big(p))).unwrap();
            let (y, z, u) = fam.evaluate(&big(s), &big(t));
            prop_assert!(inst.is_solution(&y, &z, &u));
        }
    }
}
