use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::report::{ser_display, ser_sig12, ser_sig12_opt};
use crate::arith::{is_prime, is_squarefree, prime_divisors};
use crate::bundle::samples::{main_surface, northcott_form, northcott_surface};
use crate::bundle::{ConicBundleSurface, MultiPoly};
use crate::heights::HeightModel;
use crate::localdata::{circle_family_tamagawa, fibre_report};
use crate::projgeo::{enumerate_base, ProjPoint};
use crate::Error;

#[derive(Clone, Debug, Serialize)]
pub struct BtRow {
    pub t: u64,
    pub soluble: bool,
    #[serde(serialize_with = "ser_sig12")]
    pub tamagawa: f64,
    /// τ·t^{2+α}/π.
    #[serde(serialize_with = "ser_sig12")]
    pub normalized: f64,
    /// The closed form, when every prime factor of t is ≡ 1 mod 4.
    #[serde(serialize_with = "ser_sig12_opt")]
    pub closed_form: Option<f64>,
    #[serde(serialize_with = "ser_sig12_opt")]
    pub relative_error: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BtGrowth {
    pub k: usize,
    pub t: u64,
    pub omega: usize,
    #[serde(serialize_with = "ser_sig12")]
    pub normalized: f64,
    /// (1/ζ(2))·(4/3)^ω(t).
    #[serde(serialize_with = "ser_sig12")]
    pub lower: f64,
}

/// The fibres x₀² + x₁² = t·x₂² against the two bounds c₁ ≤ τ·t^{2+α} ≤ c₂.
#[derive(Clone, Debug, Serialize)]
pub struct BtProbe {
    #[serde(serialize_with = "ser_display")]
    pub alpha: BigRational,
    pub rows: Vec<BtRow>,
    /// Primes t ≡ 3 mod 4 with τ(X_t) = 0.
    pub lower_bound_violations: Vec<u64>,
    #[serde(serialize_with = "ser_sig12")]
    pub max_relative_error: f64,
    pub growth: Vec<BtGrowth>,
    /// The normalized value is strictly increasing along the growth sequence.
    pub growth_increasing: bool,
    /// Every growth entry is at least (1/ζ(2))·(4/3)^ω.
    pub growth_above_lower: bool,
}

fn normalized_tau(
    surface: &ConicBundleSurface,
    model: &HeightModel,
    t: u64,
    alpha: f64,
    tol: f64,
) -> Result<(bool, f64, f64), Error> {
    let y = ProjPoint::from_i64s(&[1, t as i64])?;
    let r = fibre_report(surface, model, &y, tol)?;
    let norm = r.tamagawa * (t as f64).powf(2.0 + alpha) / std::f64::consts::PI;
    Ok((r.soluble, r.tamagawa, norm))
}

/// First `k` primes ≡ 1 mod 4 multiplied together: 5, 65, 1105, …
pub fn growth_sequence(k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut t = 1u64;
    let mut p = 5u64;
    while out.len() < k {
        if is_prime(p) {
            t *= p;
            out.push(t);
        }
        p += 4;
    }
    out
}

pub fn bt_probe(alpha: &BigRational, t_max: u64, growth_terms: usize, tol: f64) -> Result<BtProbe, Error> {
    let surface = main_surface();
    let model = HeightModel::new(&surface, alpha.clone())?;
    let af = alpha.to_f64().unwrap();
    let ts: Vec<u64> = (1..=t_max).filter(|&t| is_squarefree(t)).collect();
    let rows: Vec<BtRow> = ts
        .par_iter()
        .map(|&t| -> Result<BtRow, Error> {
            let (soluble, tamagawa, normalized) = normalized_tau(&surface, &model, t, af, tol)?;
            let closed = circle_family_tamagawa(t, af).ok();
            let closed_form = closed.map(|c| c * (t as f64).powf(2.0 + af) / std::f64::consts::PI);
            let relative_error = closed_form.map(|c| (normalized / c - 1.0).abs());
            Ok(BtRow {
                t,
                soluble,
                tamagawa,
                normalized,
                closed_form,
                relative_error,
            })
        })
        .collect::<Result<_, _>>()?;
    let lower_bound_violations = rows
        .iter()
        .filter(|r| is_prime(r.t) && r.t % 4 == 3 && r.tamagawa == 0.0)
        .map(|r| r.t)
        .collect();
    let max_relative_error = rows.iter().filter_map(|r| r.relative_error).fold(0.0, f64::max);

    let zeta2_inv = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    let growth: Vec<BtGrowth> = growth_sequence(growth_terms)
        .into_iter()
        .enumerate()
        .map(|(i, t)| -> Result<BtGrowth, Error> {
            let (_, _, normalized) = normalized_tau(&surface, &model, t, af, tol)?;
            let omega = prime_divisors(&BigInt::from(t))?.len();
            Ok(BtGrowth {
                k: i + 1,
                t,
                omega,
                normalized,
                lower: zeta2_inv * (4.0f64 / 3.0).powi(omega as i32),
            })
        })
        .collect::<Result<_, _>>()?;
    let growth_increasing = growth.windows(2).all(|w| w[1].normalized > w[0].normalized);
    let growth_above_lower = growth.iter().all(|g| g.normalized >= g.lower);
    Ok(BtProbe {
        alpha: alpha.clone(),
        rows,
        lower_bound_violations,
        max_relative_error,
        growth,
        growth_increasing,
        growth_above_lower,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NorthcottRow {
    pub y: ProjPoint,
    #[serde(serialize_with = "ser_display")]
    pub base_height: BigInt,
    /// H*(y; (1, −1, 0)), exact.
    #[serde(serialize_with = "ser_display")]
    pub height: BigRational,
    pub singular_fibre: bool,
}

/// Heights of the section x = (1, −1, 0) on x₀² − x₁² = f(s,t)·x₂² with α = 2a/3 + 1.
#[derive(Clone, Debug, Serialize)]
pub struct NorthcottProbe {
    pub a: u32,
    #[serde(serialize_with = "ser_display")]
    pub alpha: BigRational,
    /// 3 − a/3, the exponent with H* = H(y)^exponent on the section.
    pub exponent: i64,
    pub rows: Vec<NorthcottRow>,
    pub at_most_one: usize,
    pub equal_to_one: usize,
}

pub fn northcott_probe(a: u32, count: usize, f: Option<MultiPoly>) -> Result<NorthcottProbe, Error> {
    if !a.is_multiple_of(3) || a <= 9 {
        return Err(Error::InvalidInput(format!(
            "a must be a multiple of 3 above 9, got {a}"
        )));
    }
    let f = f.unwrap_or_else(|| northcott_form(a));
    if f.nvars() != 2 || f.degree() != 2 * a {
        return Err(Error::InvalidInput(format!(
            "f must be a binary form of degree {}",
            2 * a
        )));
    }
    let surface = northcott_surface(&f);
    let report = surface.validate();
    if let Some(c) = report.check("discriminant-squarefree") {
        if c.status == crate::bundle::CheckStatus::Fail {
            return Err(Error::InvalidInput(format!("f is not squarefree: {}", c.detail)));
        }
    }
    let alpha = BigRational::new(BigInt::from(2 * a + 3), BigInt::from(3));
    let model = HeightModel::new(&surface, alpha.clone())?;
    let exponent = 3 - i64::from(a / 3);
    let section = [BigInt::one(), BigInt::from(-1), BigInt::from(0)];
    let mut rows = Vec::with_capacity(count);
    let mut h = 1u64;
    // enumerate_base is lazy; widen until `count` points are seen
    'outer: loop {
        for y in enumerate_base(1, h).filter(|y| y.height() == BigInt::from(h)) {
            if rows.len() == count {
                break 'outer;
            }
            let height = model
                .standard_height(&y, &section)?
                .exact()
                .ok_or_else(|| Error::Internal("α is an integer here".into()))?;
            let expected = BigRational::from_integer(y.height()).pow(exponent as i32);
            if height != expected {
                return Err(Error::Internal(format!("H* over {y} is {height}, expected {expected}")));
            }
            let singular_fibre = !surface.fibre_form(&y)?.is_nondegenerate();
            rows.push(NorthcottRow {
                base_height: y.height(),
                y,
                height,
                singular_fibre,
            });
        }
        if rows.len() == count {
            break;
        }
        h += 1;
    }
    let one = BigRational::one();
    let at_most_one = rows.iter().filter(|r| r.height <= one).count();
    let equal_to_one = rows.iter().filter(|r| r.height == one).count();
    Ok(NorthcottProbe {
        a,
        alpha,
        exponent,
        rows,
        at_most_one,
        equal_to_one,
    })
}
