//! The standard height H* for the divisor −K_X + αF, exact height comparisons,
//! and the search boxes they induce.
//!
//! For a canonical point (y; x),
//!
//! ```text
//! H*(y; x) = H(y)^A · max_j H(y)^{a_j}·|x_j|,    A = n + 1 + α − (a₀ + a₁ + a₂ + e).
//! ```
//!
//! α is rational with denominator q, so A·q is an integer and every comparison is
//! decided exactly after raising both sides to the q-th power.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;

use crate::bundle::ConicBundleSurface;
use crate::projgeo::ProjPoint;
use crate::Error;

/// Which lower bound on α the model is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// n = 1: α > a₀ + a₁ + e.
    Curve,
    /// any n: α > e + 2(a₀ + a₁ + a₂)/3, which keeps the section x₂ = 0 out of reach.
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightModel {
    alpha: BigRational,
    big_a: BigRational,
    weights: [i64; 3],
    regime: Regime,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl HeightModel {
    /// Model for `surface` with the threshold of the natural regime: the curve
    /// regime for n = 1 and the general one otherwise.
    pub fn new(surface: &ConicBundleSurface, alpha: BigRational) -> Result<Self, Error> {
        let regime = if surface.n() == 1 {
            Regime::Curve
        } else {
            Regime::General
        };
        Self::with_regime(surface, alpha, regime)
    }

    pub fn with_regime(surface: &ConicBundleSurface, alpha: BigRational, regime: Regime) -> Result<Self, Error> {
        let [a0, a1, a2] = surface.a();
        let e = surface.e();
        let threshold = Self::threshold_for(surface, regime);
        if alpha <= threshold {
            return Err(Error::Precondition(format!(
                "alpha = {alpha} must exceed {threshold} ({regime:?} regime)"
            )));
        }
        if regime == Regime::Curve && surface.n() != 1 {
            return Err(Error::Precondition(
                "the curve regime needs a base of dimension 1".into(),
            ));
        }
        let big_a = rat(surface.n() as i64 + 1) + &alpha - rat(a0 + a1 + a2 + e);
        if &big_a + rat(a2) <= BigRational::zero() {
            return Err(Error::Precondition(format!(
                "A + a2 = {} must be positive",
                &big_a + rat(a2)
            )));
        }
        Ok(HeightModel {
            alpha,
            big_a,
            weights: [a0, a1, a2],
            regime,
        })
    }

    /// The strict lower bound on α for the given regime.
    pub fn threshold_for(surface: &ConicBundleSurface, regime: Regime) -> BigRational {
        let [a0, a1, a2] = surface.a();
        let e = surface.e();
        match regime {
            Regime::Curve => rat(a0 + a1 + e),
            Regime::General => rat(e) + BigRational::new(BigInt::from(2 * (a0 + a1 + a2)), BigInt::from(3)),
        }
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    /// A = n + 1 + α − (a₀ + a₁ + a₂ + e).
    pub fn big_a(&self) -> &BigRational {
        &self.big_a
    }

    pub fn weights(&self) -> [i64; 3] {
        self.weights
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// q, the denominator of α.
    pub fn q(&self) -> u32 {
        self.alpha.denom().to_u32().expect("alpha denominator fits in u32")
    }

    /// (A + a_j)·q as an integer.
    fn scaled_exponent(&self, j: usize) -> i64 {
        let v = (&self.big_a + rat(self.weights[j])) * rat(i64::from(self.q()));
        debug_assert!(v.is_integer());
        v.to_integer().to_i64().expect("exponent fits in i64")
    }

    /// H*(y; x), for a canonical base point and a primitive, sign-normalized x.
    pub fn standard_height(&self, y: &ProjPoint, x: &[BigInt; 3]) -> Result<HeightValue, Error> {
        check_fibre_coords(x)?;
        if !y.is_canonical() {
            return Err(Error::Representation(format!("{y:?} is not canonical")));
        }
        Ok(self.height_unchecked(&y.height(), x))
    }

    pub(crate) fn height_unchecked(&self, h: &BigInt, x: &[BigInt; 3]) -> HeightValue {
        let hr = BigRational::from_integer(h.clone());
        let max_term = (0..3)
            .map(|j| pow_rat(&hr, self.weights[j]) * BigRational::from_integer(x[j].abs()))
            .max()
            .unwrap();
        HeightValue {
            h: h.clone(),
            max_term,
            big_a: self.big_a.clone(),
            q: self.q(),
        }
    }

    /// Exact box (b₀, b₁, b₂): a point over y has H* ≤ B iff |x_j| ≤ b_j for all j.
    /// `None` when H(y)^{A+a₂} > B, i.e. no point with x₂ ≠ 0 fits.
    pub fn fibre_box(&self, y: &ProjPoint, bound: &BigRational) -> Option<[BigInt; 3]> {
        self.fibre_box_for_height(&y.height(), bound)
    }

    pub fn fibre_box_for_height(&self, h: &BigInt, bound: &BigRational) -> Option<[BigInt; 3]> {
        let q = self.q();
        let bq = bound.pow(q as i32);
        let hr = BigRational::from_integer(h.clone());
        let b2 = self.scaled_exponent(2);
        if pow_rat(&hr, b2) > bq {
            return None;
        }
        Some(std::array::from_fn(|j| {
            // largest b with b^q · h^{(A+a_j)q} ≤ B^q
            let r = &bq / pow_rat(&hr, self.scaled_exponent(j));
            floor_root(&r.floor().to_integer(), q)
        }))
    }

    /// Largest integer T with T^{A+a₂} ≤ B; fibres above it hold no point with x₂ ≠ 0.
    pub fn base_bound(&self, bound: &BigRational) -> BigInt {
        let c = self.scaled_exponent(2);
        debug_assert!(c > 0);
        let bq = bound.pow(self.q() as i32).floor().to_integer();
        floor_root(&bq, c as u32).max(BigInt::one())
    }
}

/// Largest b ≥ 0 with b^k ≤ n (0 for negative n).
fn floor_root(n: &BigInt, k: u32) -> BigInt {
    if n.is_negative() {
        return BigInt::zero();
    }
    let mut r = n.nth_root(k);
    // guard against any off-by-one in the library root
    while num_traits::pow(r.clone() + 1u32, k as usize) <= *n {
        r += 1u32;
    }
    while num_traits::pow(r.clone(), k as usize) > *n {
        r -= 1u32;
    }
    r
}

fn pow_rat(base: &BigRational, exp: i64) -> BigRational {
    base.pow(i32::try_from(exp).expect("exponent fits in i32"))
}

fn check_fibre_coords(x: &[BigInt; 3]) -> Result<(), Error> {
    let g = x.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let first = x.iter().find(|c| !c.is_zero());
    if !g.is_one() || !first.is_some_and(Signed::is_positive) {
        return Err(Error::Representation(format!(
            "({}, {}, {}) is not primitive with positive leading coordinate",
            x[0], x[1], x[2]
        )));
    }
    Ok(())
}

/// An exact value of H*, kept as H(y) and the max term so that H* with a rational
/// exponent never has to be rounded.
#[derive(Clone, Debug)]
pub struct HeightValue {
    h: BigInt,
    max_term: BigRational,
    big_a: BigRational,
    q: u32,
}

impl HeightValue {
    pub fn base_height(&self) -> &BigInt {
        &self.h
    }

    pub fn max_term(&self) -> &BigRational {
        &self.max_term
    }

    /// (H*)^q, an exact rational.
    pub fn pow_q(&self) -> BigRational {
        let aq = (&self.big_a * rat(i64::from(self.q))).to_integer();
        let hr = BigRational::from_integer(self.h.clone());
        pow_rat(&hr, aq.to_i64().expect("fits")) * self.max_term.pow(self.q as i32)
    }

    /// Exact value when A is an integer.
    pub fn exact(&self) -> Option<BigRational> {
        (self.q == 1).then(|| self.pow_q())
    }

    pub fn cmp_bound(&self, bound: &BigRational) -> Ordering {
        self.pow_q().cmp(&bound.pow(self.q as i32))
    }

    /// H* ≤ B, decided exactly.
    pub fn le(&self, bound: &BigRational) -> bool {
        self.cmp_bound(bound) != Ordering::Greater
    }

    /// Approximate value for display.
    pub fn to_f64(&self) -> f64 {
        let h = self.h.to_f64().unwrap_or(f64::INFINITY);
        let a = self.big_a.to_f64().unwrap_or(f64::NAN);
        h.powf(a) * self.max_term.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "({})^(1/{}) ≈ {:.12e}", self.pow_q(), self.q, self.to_f64()),
        }
    }
}

/// A point (y; x) of the surface in canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BundlePoint {
    pub y: ProjPoint,
    pub x: [BigInt; 3],
}

impl BundlePoint {
    /// Checks the canonical normalization and that Q_y(x) = 0.
    pub fn new(surface: &ConicBundleSurface, y: ProjPoint, x: [BigInt; 3]) -> Result<Self, Error> {
        check_fibre_coords(&x)?;
        let form = surface.fibre_form(&y)?;
        if !form.eval(&x).is_zero() {
            return Err(Error::InvalidInput(format!(
                "({}, {}, {}) does not lie on the fibre over {y}",
                x[0], x[1], x[2]
            )));
        }
        Ok(BundlePoint { y, x })
    }

    pub fn height(&self, model: &HeightModel) -> HeightValue {
        model.height_unchecked(&self.y.height(), &self.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::samples::{main_surface, northcott_form, northcott_surface};
    use proptest::prelude::*;

    fn r(n: i64) -> BigRational {
        rat(n)
    }

    fn x3(v: [i64; 3]) -> [BigInt; 3] {
        v.map(BigInt::from)
    }

    fn y(c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64s(c).unwrap()
    }

    fn main_model() -> HeightModel {
        HeightModel::new(&main_surface(), r(1)).unwrap()
    }

    #[test]
    fn exponent_for_main_surface() {
        assert_eq!(main_model().big_a(), &r(2));
    }

    #[test]
    fn height_examples() {
        let m = main_model();
        let h = m.standard_height(&y(&[1, 2]), &x3([1, 1, 1])).unwrap();
        assert_eq!(h.exact().unwrap(), r(8));
        let h = m.standard_height(&y(&[1, 1]), &x3([1, 0, 1])).unwrap();
        assert_eq!(h.exact().unwrap(), r(1));
        assert!(m.standard_height(&y(&[1, 1]), &x3([2, 0, 2])).is_err());
        assert!(m.standard_height(&y(&[1, 1]), &x3([-1, 0, 1])).is_err());
    }

    #[test]
    fn northcott_height_is_reciprocal() {
        let s = northcott_surface(&northcott_form(12));
        let m = HeightModel::new(&s, r(9)).unwrap();
        assert_eq!(m.big_a(), &r(-1));
        for n in [1i64, 2, 7, 40] {
            let h = m.standard_height(&y(&[1, n]), &x3([1, -1, 0])).unwrap();
            assert_eq!(h.exact().unwrap(), BigRational::new(1.into(), n.into()));
        }
    }

    #[test]
    fn threshold_is_strict() {
        assert!(HeightModel::new(&main_surface(), r(0)).is_err());
        assert!(HeightModel::new(&main_surface(), BigRational::new(1.into(), 100.into())).is_ok());
        // general regime: α > e + 2(0+0+1)/3 = 2/3
        let g = |a: BigRational| HeightModel::with_regime(&main_surface(), a, Regime::General);
        assert!(g(BigRational::new(2.into(), 3.into())).is_err());
        assert!(g(r(1)).is_ok());
    }

    #[test]
    fn box_examples() {
        let m = main_model();
        assert_eq!(m.fibre_box(&y(&[1, 1]), &r(100)).unwrap(), x3([100, 100, 100]));
        assert_eq!(m.fibre_box(&y(&[1, 3]), &r(100)).unwrap(), x3([11, 11, 3]));
        // 5³ = 125 > 100
        assert!(m.fibre_box(&y(&[1, 5]), &r(100)).is_none());
    }

    #[test]
    fn base_bound_examples() {
        let m = main_model();
        assert_eq!(m.base_bound(&r(1_000_000)), BigInt::from(100));
        assert_eq!(m.base_bound(&r(26)), BigInt::from(2));
        assert_eq!(m.base_bound(&r(27)), BigInt::from(3));
        assert_eq!(m.base_bound(&r(1)), BigInt::from(1));
    }

    #[test]
    fn fractional_alpha_is_exact() {
        // α = 1/2: A = 3/2, A + a2 = 5/2; T^{5/2} ≤ 32 ⟺ T ≤ 4
        let m = HeightModel::new(&main_surface(), BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(m.base_bound(&r(32)), BigInt::from(4));
        assert_eq!(m.base_bound(&r(31)), BigInt::from(3));
        // over y = (1,4): H* = 4^{3/2}·max(|x0|, |x1|, 4|x2|) = 8·max(...)
        let h = m.standard_height(&y(&[1, 4]), &x3([2, 0, 1])).unwrap();
        assert_eq!(h.pow_q(), r(32 * 32));
        assert!(h.le(&r(32)));
        assert!(!h.le(&BigRational::new(63.into(), 2.into())));
    }

    #[test]
    fn pulled_back_fibre_height() {
        // over (1:t): H* = t^{α+1} max(|x0|, |x1|, t|x2|)
        let m = main_model();
        for t in 1..20i64 {
            let x = [3i64, 4, 1];
            let h = m.standard_height(&y(&[1, t]), &x3(x)).unwrap();
            let want = t * t * [3, 4, t].into_iter().max().unwrap();
            assert_eq!(h.exact().unwrap(), r(want));
        }
    }

    #[test]
    fn bundle_point_checks_the_equation() {
        let s = main_surface();
        assert!(BundlePoint::new(&s, y(&[1, 2]), x3([1, 1, 1])).is_ok());
        assert!(BundlePoint::new(&s, y(&[1, 2]), x3([1, 2, 1])).is_err());
    }

    proptest! {
        #[test]
        fn exact_and_float_comparisons_agree(
            t in 1i64..200, x0 in 0i64..1000, x1 in -1000i64..1000, x2 in 1i64..1000,
            b in 1i64..10_000_000, num in 1i64..7, den in 1i64..4,
        ) {
            let alpha = BigRational::new(num.into(), den.into());
            let m = HeightModel::new(&main_surface(), alpha).unwrap();
            let g = [x0, x1, x2].iter().fold(0i64, |a, v| a.gcd(v));
            prop_assume!(g == 1 && x0 != 0);
            let h = m.standard_height(&y(&[1, t]), &x3([x0, x1, x2])).unwrap();
            let f = h.to_f64();
            let bf = b as f64;
            prop_assume!(((f - bf) / bf).abs() > 1e-9);
            prop_assert_eq!(h.le(&r(b)), f <= bf);
        }

        #[test]
        fn box_is_exactly_the_height_ball(t in 1i64..12, b in 1i64..3000, num in 1i64..5, den in 1i64..3) {
            let alpha = BigRational::new(num.into(), den.into());
            let m = HeightModel::new(&main_surface(), alpha).unwrap();
            let yy = y(&[1, t]);
            let bound = r(b);
            let bx = m.fibre_box(&yy, &bound);
            let hb = |v: i64| m.standard_height(&yy, &x3([1, 0, v])).unwrap().le(&bound);
            match bx {
                None => prop_assert!(!hb(1)),
                Some(bx) => {
                    let b2: i64 = (&bx[2]).try_into().unwrap();
                    let b0: i64 = (&bx[0]).try_into().unwrap();
                    prop_assert!(b2 >= 1 && hb(b2) && !hb(b2 + 1));
                    let h0 = |v: i64| m.standard_height(&yy, &x3([v, 0, 1])).unwrap().le(&bound);
                    prop_assert_eq!(h0(b0), b0 >= 1 && h0(b0));
                    prop_assert!(!h0(b0 + 1));
                }
            }
        }
    }
}
