use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::solve::canonical_triple;
use super::TernaryForm;
use crate::arith::{gcd_all, saturated_frame};
use crate::bundle::MultiPoly;
use crate::Error;

/// Rational parametrization of a conic by lines through a base point:
/// (s:t) ↦ (φ₀(s,t) : φ₁(s,t) : φ₂(s,t)), each φ_j = c₀s² + c₁st + c₂t².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicParam {
    pub base_point: [BigInt; 3],
    /// maps[j] = [c₀, c₁, c₂] for φ_j.
    pub maps: [[BigInt; 3]; 3],
}

impl ConicParam {
    pub fn eval(&self, s: &BigInt, t: &BigInt) -> [BigInt; 3] {
        std::array::from_fn(|j| {
            let c = &self.maps[j];
            &c[0] * s * s + &c[1] * s * t + &c[2] * t * t
        })
    }

    /// Canonical image of (s:t).
    pub fn point_at(&self, s: &BigInt, t: &BigInt) -> Option<[BigInt; 3]> {
        canonical_triple(self.eval(s, t))
    }

    pub fn as_binary_forms(&self) -> [MultiPoly; 3] {
        std::array::from_fn(|j| {
            let c = &self.maps[j];
            MultiPoly::from_terms(
                2,
                2,
                [
                    (c[0].clone(), vec![2, 0]),
                    (c[1].clone(), vec![1, 1]),
                    (c[2].clone(), vec![0, 2]),
                ],
            )
            .expect("binary quadratic")
        })
    }

    /// Q(φ₀, φ₁, φ₂) as a binary quartic; identically zero for a valid parametrization.
    pub fn composed(&self, form: &TernaryForm) -> MultiPoly {
        let phi = self.as_binary_forms();
        let mut acc = MultiPoly::zero(2, 4);
        for i in 0..3 {
            for j in 0..3 {
                acc = acc.add(&phi[i].mul(&phi[j]).scale(form.entry(i, j)));
            }
        }
        acc
    }
}

/// Parametrizes the conic Q = 0 through `point`.
///
/// A unimodular U with first column ±point turns Q into 2z₀·L(z₁,z₂) + q(z₁,z₂);
/// the line through the base point in direction (0, s, t) meets the conic again at
/// (−q(s,t), 2L(s,t)s, 2L(s,t)t). The common content of all coefficients is removed.
pub fn parametrize(form: &TernaryForm, point: &[BigInt; 3]) -> Result<ConicParam, Error> {
    form.require_nondegenerate()?;
    if point.iter().all(Zero::is_zero) || !form.eval(point).is_zero() {
        return Err(Error::Precondition("the base point is not on the conic".into()));
    }
    let base = canonical_triple(point.clone()).expect("nonzero");
    let w = saturated_frame(&[base.to_vec()]).expect("a nonzero vector spans a line");
    let u: [[BigInt; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| w[j][i].clone()));
    let u = reduce_frame(u);
    let g = form.transform(&u);
    debug_assert!(g.entry(0, 0).is_zero());
    let two = BigInt::from(2);
    let (l1, l2) = (g.entry(0, 1).clone(), g.entry(0, 2).clone());
    let z: [[BigInt; 3]; 3] = [
        [-g.entry(1, 1).clone(), -(&two * g.entry(1, 2)), -g.entry(2, 2).clone()],
        [&two * &l1, &two * &l2, BigInt::zero()],
        [BigInt::zero(), &two * &l1, &two * &l2],
    ];
    let mut maps: [[BigInt; 3]; 3] =
        std::array::from_fn(|r| std::array::from_fn(|k| (0..3).map(|c| &u[r][c] * &z[c][k]).sum()));
    let content = gcd_all(maps.iter().flatten());
    for v in maps.iter_mut().flatten() {
        *v = &*v / &content;
    }
    let p = ConicParam { base_point: base, maps };
    if !p.composed(form).is_zero() {
        return Err(Error::Internal(format!(
            "parametrization of {form} does not vanish identically"
        )));
    }
    Ok(p)
}

fn inverse_unimodular(m: &[[BigInt; 3]; 3]) -> [[BigInt; 3]; 3] {
    let cof = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
    };
    let det: BigInt = (0..3).map(|j| &m[0][j] * cof(0, j)).sum();
    debug_assert!(det.magnitude() == &1u32.into());
    std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i) * &det))
}

/// Keeps the first column of U and replaces the two linear forms vanishing on it
/// (rows 1, 2 of U⁻¹) by a Lagrange-reduced basis, so that the parameter of a
/// point is small when the point is.
fn reduce_frame(u: [[BigInt; 3]; 3]) -> [[BigInt; 3]; 3] {
    let mut w = inverse_unimodular(&u);
    let dot = |a: &[BigInt; 3], b: &[BigInt; 3]| -> BigInt { (0..3).map(|k| &a[k] * &b[k]).sum() };
    loop {
        if dot(&w[1], &w[1]) > dot(&w[2], &w[2]) {
            w.swap(1, 2);
        }
        let n1 = dot(&w[1], &w[1]);
        let num = dot(&w[1], &w[2]);
        // nearest integer to num / n1
        let q: BigInt = (&num * BigInt::from(2) + &n1).div_floor(&(&n1 * BigInt::from(2)));
        if q.is_zero() {
            break;
        }
        let row1 = w[1].clone();
        for (x, y) in w[2].iter_mut().zip(&row1) {
            *x -= &q * y;
        }
        if dot(&w[2], &w[2]) >= n1 {
            break;
        }
    }
    inverse_unimodular(&w)
}
