//! The archimedean density σ_∞ of a fibre conic.
//!
//! The real conic is traced as θ ↦ x(θ) = V·w(θ) with V the eigenvectors of G and
//! w(θ) on the ellipse λ₁w₁² + λ₂w₂² = |λ₃|w₃². Along any parametrization of the
//! curve x × x' = κ·∇Q(x), and the Leray density divided by the fibre height is
//! |κ|/H(x) dθ, a homogeneous expression with no chart singularities.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_traits::ToPrimitive;

use crate::conics::TernaryForm;
use crate::Error;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// A quadrature result with its estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Estimate {
    #[serde(serialize_with = "crate::census::report::ser_sig12")]
    pub value: f64,
    #[serde(serialize_with = "crate::census::report::ser_sig12")]
    pub error: f64,
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let d = h * XGK[i];
        let s = f(c - d) + f(c + d);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive Gauss–Kronrod (7, 15) on [a, b], starting from `pieces`
/// equal subintervals and bisecting the worst one until the summed error
/// estimate is at most `tol`·|value|.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    pieces: usize,
    tol: f64,
    max_intervals: usize,
) -> Result<Estimate, Error> {
    let mut parts: Vec<(f64, f64, f64, f64)> = (0..pieces)
        .map(|i| {
            let lo = a + (b - a) * i as f64 / pieces as f64;
            let hi = a + (b - a) * (i + 1) as f64 / pieces as f64;
            let (v, e) = gk15(&f, lo, hi);
            (lo, hi, v, e)
        })
        .collect();
    loop {
        let value: f64 = parts.iter().map(|p| p.2).sum();
        let error: f64 = parts.iter().map(|p| p.3).sum();
        if error <= tol * value.abs() || error < 1e-300 {
            return Ok(Estimate { value, error });
        }
        if parts.len() >= max_intervals {
            return Err(Error::ToleranceNotMet {
                estimate: value,
                error,
                requested: tol,
            });
        }
        let worst = (0..parts.len())
            .max_by(|&i, &j| parts[i].3.total_cmp(&parts[j].3))
            .unwrap();
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// ∫ ω / H over the real points of Q = 0, with H(x) = scale · max_j weights_j·|x_j|.
pub fn real_density(form: &TernaryForm, weights: [f64; 3], scale: f64, tol: f64) -> Result<Estimate, Error> {
    form.require_nondegenerate()?;
    if form.is_definite() {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let g = Matrix3::from_fn(|i, j| form.entry(i, j).to_f64().unwrap());
    // work with G/norm for the eigensolver and undo the scaling in the integrand
    let norm = g.amax();
    let g = g / norm;
    let eig = SymmetricEigen::new(g);
    let lam = eig.eigenvalues;
    let positives = (0..3).filter(|&i| lam[i] > 0.0).count();
    let sign = if positives == 2 { 1.0 } else { -1.0 };
    let mut pos: Vec<usize> = (0..3).filter(|&i| sign * lam[i] > 0.0).collect();
    let neg = (0..3).find(|&i| sign * lam[i] < 0.0).unwrap();
    pos.sort();
    let (i1, i2) = (pos[0], pos[1]);
    let (r1, r2, r3) = (
        1.0 / (sign * lam[i1]).sqrt(),
        1.0 / (sign * lam[i2]).sqrt(),
        1.0 / (-sign * lam[neg]).sqrt(),
    );
    let v = eig.eigenvectors;
    let f = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let mut w = Vector3::zeros();
        w[i1] = r1 * c;
        w[i2] = r2 * s;
        w[neg] = r3;
        let mut dw = Vector3::zeros();
        dw[i1] = -r1 * s;
        dw[i2] = r2 * c;
        let x = v * w;
        let dx = v * dw;
        let grad = 2.0 * (g * x);
        let kappa = x.cross(&dx).norm() / grad.norm();
        let h = (0..3).map(|j| weights[j] * x[j].abs()).fold(0.0, f64::max);
        // Leray form of Q/norm is norm times that of Q
        kappa / (norm * scale * h)
    };
    integrate(f, 0.0, 2.0 * std::f64::consts::PI, 16, tol, 20_000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_is_exact_on_polynomials() {
        let r = integrate(|x| x.powi(6) - 3.0 * x * x, -1.0, 2.0, 1, 1e-14, 10).unwrap();
        assert!((r.value - (128.0 / 7.0 + 1.0 / 7.0 - 9.0)).abs() < 1e-12);
    }

    #[test]
    fn circle() {
        let r = real_density(&TernaryForm::diagonal(1, 1, -1), [1.0, 1.0, 1.0], 1.0, 1e-10).unwrap();
        assert!((r.value - PI).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn circle_of_radius_root_t() {
        // H = t²·max(|x₀|, |x₁|, t|x₂|) gives π/t³
        for t in [2.0f64, 5.0, 13.0] {
            let q = TernaryForm::diagonal(1, 1, -(t as i64));
            let r = real_density(&q, [1.0, 1.0, t], t * t, 1e-10).unwrap();
            assert!((r.value / (PI / t.powi(3)) - 1.0).abs() < 1e-8, "t={t} {r:?}");
        }
    }

    #[test]
    fn definite_is_empty() {
        let r = real_density(&TernaryForm::diagonal(1, 1, 1), [1.0; 3], 1.0, 1e-8).unwrap();
        assert_eq!(r.value, 0.0);
        let r = real_density(&TernaryForm::diagonal(-1, -2, -1), [1.0; 3], 1.0, 1e-8).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn scaling_the_form() {
        let q = TernaryForm::from_i64([[2, 1, 0], [1, -3, 1], [0, 1, 1]]).unwrap();
        let a = real_density(&q, [1.0, 1.0, 1.0], 1.0, 1e-10).unwrap().value;
        let b = real_density(&q.scaled(&3.into()), [1.0, 1.0, 1.0], 1.0, 1e-10)
            .unwrap()
            .value;
        let c = real_density(&q.scaled(&(-1).into()), [1.0, 1.0, 1.0], 1.0, 1e-10)
            .unwrap()
            .value;
        // scaling Q by λ scales the Leray form by 1/|λ|
        assert!((a / b - 3.0).abs() < 1e-8);
        assert!((a / c - 1.0).abs() < 1e-10);
    }

    #[test]
    fn height_scaling() {
        let q = TernaryForm::from_i64([[2, 1, 0], [1, -3, 1], [0, 1, 1]]).unwrap();
        let a = real_density(&q, [1.0, 2.0, 3.0], 1.0, 1e-10).unwrap().value;
        let b = real_density(&q, [1.0, 2.0, 3.0], 7.5, 1e-10).unwrap().value;
        assert!((a / b - 7.5).abs() < 1e-8);
    }

    #[test]
    fn unreachable_tolerance_is_reported() {
        let err = integrate(|x: f64| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0, 1, 1e-15, 8).unwrap_err();
        assert!(matches!(err, Error::ToleranceNotMet { .. }));
    }
}
