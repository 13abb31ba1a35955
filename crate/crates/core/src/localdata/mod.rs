//! Local densities σ_p and σ_∞ of a fibre, its Tamagawa number, and the Peyre
//! constant c_y that governs the fibre count.
//!
//! τ(X_y) = σ_∞ · ∏_p σ_p. At every prime of good reduction σ_p = 1 − p⁻², so
//!
//! ```text
//! τ = σ_∞ · (6/π²) · ∏_{p | 2Δ(y)} σ_p / (1 − p⁻²)
//! ```
//!
//! and the only inexact ingredient is the quadrature for σ_∞.

mod padic;
mod real;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::arith::prime_divisors;
use crate::bundle::ConicBundleSurface;
use crate::census::report::ser_sig12;
use crate::conics::{is_soluble, TernaryForm};
use crate::heights::HeightModel;
use crate::projgeo::ProjPoint;
use crate::Error;

pub use padic::{
    count_mod_prime_power, good_density, sigma_p_form, sigma_p_stable, SigmaMethod, StableLevel, LIFT_LIMIT,
};
pub use real::{integrate, real_density, Estimate};

/// Default relative tolerance for σ_∞.
pub const DEFAULT_TOL: f64 = 1e-8;

fn nonsingular_form(surface: &ConicBundleSurface, y: &ProjPoint) -> Result<TernaryForm, Error> {
    let form = surface.fibre_form(y)?;
    if !form.is_nondegenerate() {
        return Err(Error::Precondition(format!("the fibre over {y} is singular")));
    }
    Ok(form)
}

/// σ_p of the fibre over y.
pub fn sigma_p(surface: &ConicBundleSurface, y: &ProjPoint, p: u64) -> Result<BigRational, Error> {
    sigma_p_form(&nonsingular_form(surface, y)?, p, SigmaMethod::Auto)
}

/// Weights and prefactor of the fibre height: H*(y; x) = H(y)^A · max_j H(y)^{a_j}|x_j|.
fn fibre_height(model: &HeightModel, y: &ProjPoint) -> ([f64; 3], f64) {
    let h = y.height().to_f64().unwrap();
    let a = model.big_a().to_f64().unwrap();
    (model.weights().map(|w| h.powi(w as i32)), h.powf(a))
}

/// σ_∞ of the fibre over y for the height of `model`.
pub fn sigma_inf(
    surface: &ConicBundleSurface,
    model: &HeightModel,
    y: &ProjPoint,
    tol: f64,
) -> Result<Estimate, Error> {
    let form = nonsingular_form(surface, y)?;
    let (weights, scale) = fibre_height(model, y);
    real_density(&form, weights, scale, tol)
}

/// Primes where σ_p can differ from 1 − p⁻²: those dividing 2Δ(y).
pub fn bad_primes(form: &TernaryForm) -> Result<Vec<u64>, Error> {
    Ok(prime_divisors(&(form.det().abs() * 2u32))?)
}

fn rational_map<S: Serializer>(m: &BTreeMap<u64, BigRational>, s: S) -> Result<S::Ok, S::Error> {
    let strings: BTreeMap<String, String> = m.iter().map(|(p, v)| (p.to_string(), v.to_string())).collect();
    strings.serialize(s)
}

/// Everything the local computation knows about one fibre.
#[derive(Clone, Debug, Serialize)]
pub struct FibreReport {
    pub y: ProjPoint,
    pub soluble: bool,
    pub sigma_inf: Estimate,
    /// σ_p at the primes dividing 2Δ(y); all other primes give 1 − p⁻².
    #[serde(serialize_with = "rational_map")]
    pub sigma_p: BTreeMap<u64, BigRational>,
    #[serde(serialize_with = "ser_sig12")]
    pub tamagawa: f64,
    /// Absolute error bound on τ inherited from the quadrature.
    #[serde(serialize_with = "ser_sig12")]
    pub tamagawa_error: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub peyre: f64,
}

/// τ = σ_∞ · (6/π²) · ∏_{p | 2Δ} σ_p/(1 − p⁻²) from its parts.
fn tamagawa_from(sigma_inf: Estimate, sigma_p: &BTreeMap<u64, BigRational>) -> (f64, f64) {
    let euler: BigRational = sigma_p.iter().map(|(&p, s)| s / good_density(p)).product();
    let factor = 6.0 / (std::f64::consts::PI * std::f64::consts::PI) * euler.to_f64().unwrap();
    (sigma_inf.value * factor, sigma_inf.error * factor)
}

pub fn fibre_report(
    surface: &ConicBundleSurface,
    model: &HeightModel,
    y: &ProjPoint,
    tol: f64,
) -> Result<FibreReport, Error> {
    let form = nonsingular_form(surface, y)?;
    let soluble = is_soluble(&form)?;
    let (weights, scale) = fibre_height(model, y);
    let sigma_inf = real_density(&form, weights, scale, tol)?;
    let sigma_p = bad_primes(&form)?
        .into_iter()
        .map(|p| Ok((p, sigma_p_form(&form, p, SigmaMethod::Auto)?)))
        .collect::<Result<BTreeMap<_, _>, Error>>()?;
    let (tamagawa, tamagawa_error) = tamagawa_from(sigma_inf, &sigma_p);
    let peyre = if soluble { tamagawa / 2.0 } else { 0.0 };
    Ok(FibreReport {
        y: y.clone(),
        soluble,
        sigma_inf,
        sigma_p,
        tamagawa,
        tamagawa_error,
        peyre,
    })
}

/// The Tamagawa number τ(X_y).
pub fn tamagawa(surface: &ConicBundleSurface, model: &HeightModel, y: &ProjPoint, tol: f64) -> Result<f64, Error> {
    Ok(fibre_report(surface, model, y, tol)?.tamagawa)
}

/// c_y, the constant in N(X_y ∩ U, H, B) ~ c_y·B.
///
/// A conic with a rational point is ℙ¹ embedded by O(2), and the anticanonical
/// class is O(1) there; the effective cone constant of ℙ¹ for that class is 1/2,
/// so c_y = τ/2. Insoluble fibres have c_y = 0 whatever their local densities.
pub fn peyre_constant(
    surface: &ConicBundleSurface,
    model: &HeightModel,
    y: &ProjPoint,
    tol: f64,
) -> Result<f64, Error> {
    Ok(fibre_report(surface, model, y, tol)?.peyre)
}

/// The closed form τ(X_t) = (π/t^{2+α}) ∏_{p|t} 2(1 − 1/p) ∏_{p∤2t} (1 − p⁻²) for the
/// fibres x₀² + x₁² = t·x₂² of the main example surface, t squarefree with all
/// prime factors ≡ 1 mod 4 (t = 1 allowed).
pub fn circle_family_tamagawa(t: u64, alpha: f64) -> Result<f64, Error> {
    let primes = prime_divisors(&BigInt::from(t))?;
    if primes.iter().any(|p| p % 4 != 1) || !crate::arith::is_squarefree(t) {
        return Err(Error::InvalidInput(format!(
            "{t} is not a squarefree product of primes ≡ 1 mod 4"
        )));
    }
    let pi = std::f64::consts::PI;
    let mut v = pi / (t as f64).powf(2.0 + alpha) * 6.0 / (pi * pi);
    // remove the Euler factors at 2 and p | t from 6/π² and put the local ones back
    v /= 0.75;
    for p in primes {
        let pf = p as f64;
        v *= 2.0 * (1.0 - 1.0 / pf) / (1.0 - 1.0 / (pf * pf));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::samples::main_surface;
    use std::f64::consts::PI;

    fn model() -> (ConicBundleSurface, HeightModel) {
        let s = main_surface();
        let m = HeightModel::new(&s, BigRational::from_integer(1.into())).unwrap();
        (s, m)
    }

    fn y(t: i64) -> ProjPoint {
        ProjPoint::from_i64s(&[1, t]).unwrap()
    }

    #[test]
    fn fibre_t_one() {
        let (s, m) = model();
        let r = fibre_report(&s, &m, &y(1), 1e-10).unwrap();
        assert!((r.sigma_inf.value - PI).abs() < 1e-8);
        assert!((r.tamagawa - 8.0 / PI).abs() < 1e-8, "{}", r.tamagawa);
        assert!((r.peyre - 4.0 / PI).abs() < 1e-8);
    }

    #[test]
    fn fibre_t_five() {
        let (s, m) = model();
        let r = fibre_report(&s, &m, &y(5), 1e-10).unwrap();
        assert_eq!(r.sigma_p[&5], BigRational::new(8.into(), 5.into()));
        assert_eq!(r.sigma_p[&2], BigRational::from_integer(1.into()));
        let closed = circle_family_tamagawa(5, 1.0).unwrap();
        assert!((r.tamagawa / closed - 1.0).abs() < 1e-8);
    }

    #[test]
    fn insoluble_fibre_has_no_constant() {
        let (s, m) = model();
        let r = fibre_report(&s, &m, &y(3), 1e-10).unwrap();
        assert!(!r.soluble);
        assert!(r.sigma_inf.value > 0.0);
        assert_eq!(r.peyre, 0.0);
        let r = fibre_report(&s, &m, &y(-1), 1e-10).unwrap();
        assert_eq!(r.sigma_inf.value, 0.0);
    }

    #[test]
    fn singular_fibre_is_rejected() {
        let (s, m) = model();
        assert!(matches!(
            sigma_inf(&s, &m, &ProjPoint::from_i64s(&[0, 1]).unwrap(), 1e-8),
            Err(Error::Precondition(_))
        ));
    }
}
