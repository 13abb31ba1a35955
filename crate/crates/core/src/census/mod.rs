//! Global counts over the base, Peyre partial sums, and the probes built on them.
//!
//! U is fixed to {Δ(y) ≠ 0, x₂ ≠ 0}. Fibres are independent, so every campaign is a
//! parallel map over base points followed by a reduction in enumeration order;
//! results do not depend on the number of threads.

mod probes;
pub mod report;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::ConicBundleSurface;
use crate::conics::{fibre_box_i128, is_soluble, FibreCounter, Strategy};
use crate::heights::HeightModel;
use crate::localdata::fibre_report;
use crate::projgeo::{enumerate_base, ProjPoint};
use crate::Error;

pub use probes::{bt_probe, northcott_probe, BtGrowth, BtProbe, BtRow, NorthcottProbe, NorthcottRow};
pub use report::{sha256_hex, sig12, CensusReport, FibreRow, GridRow, Metadata, PartialRow};

/// Sum in a fixed binary tree so the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

fn base_limit(model: &HeightModel, bound: &BigRational) -> Result<u64, Error> {
    model
        .base_bound(bound)
        .to_u64()
        .ok_or(Error::Overflow("base height bound"))
}

/// Exact counts for each bound of a grid, with the per-fibre breakdown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridCount {
    pub bounds: Vec<BigRational>,
    pub totals: Vec<u64>,
    /// Fibres with at least one point at the largest bound, in enumeration order;
    /// `counts[k]` belongs to `bounds[k]`.
    pub fibres: Vec<(ProjPoint, Vec<u64>)>,
}

/// N(U, H*, B) for every B in `bounds`, excluding the fibres over `exclude`.
pub fn count_grid(
    surface: &ConicBundleSurface,
    model: &HeightModel,
    bounds: &[BigRational],
    strategy: Strategy,
    exclude: &[ProjPoint],
) -> Result<GridCount, Error> {
    if bounds.is_empty() {
        return Err(Error::InvalidInput("empty grid of bounds".into()));
    }
    let top = bounds.iter().max().unwrap();
    let ys: Vec<ProjPoint> = enumerate_base(surface.n(), base_limit(model, top)?)
        .filter(|y| !exclude.contains(y))
        .collect();
    let per_fibre: Vec<Option<(ProjPoint, Vec<u64>)>> = ys
        .par_iter()
        .map(|y| -> Result<_, Error> {
            let form = surface.fibre_form(y)?;
            if !form.is_nondegenerate() {
                return Ok(None);
            }
            let boxes = bounds
                .iter()
                .map(|b| fibre_box_i128(model, y, b))
                .collect::<Result<Vec<_>, _>>()?;
            if boxes.iter().all(Option::is_none) {
                return Ok(None);
            }
            let counter = FibreCounter::new(&form)?;
            if !counter.is_soluble() {
                return Ok(None);
            }
            let counts = boxes
                .iter()
                .map(|b| b.map_or(Ok(0), |b| counter.count(&b, strategy)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((counts.iter().any(|&c| c > 0)).then(|| (y.clone(), counts)))
        })
        .collect::<Result<_, _>>()?;
    let fibres: Vec<(ProjPoint, Vec<u64>)> = per_fibre.into_iter().flatten().collect();
    let totals = (0..bounds.len())
        .map(|k| fibres.iter().map(|(_, c)| c[k]).sum())
        .collect();
    Ok(GridCount {
        bounds: bounds.to_vec(),
        totals,
        fibres,
    })
}

/// N(U, H*, B) with its per-fibre breakdown.
pub fn count_total(
    surface: &ConicBundleSurface,
    model: &HeightModel,
    bound: &BigRational,
    strategy: Strategy,
) -> Result<GridCount, Error> {
    count_grid(surface, model, std::slice::from_ref(bound), strategy, &[])
}

#[derive(Clone, Debug, Serialize)]
pub struct Shell {
    pub height: u64,
    /// Nonsingular fibres of this base height.
    pub fibres: usize,
    #[serde(serialize_with = "report::ser_sig12")]
    pub increment: f64,
    /// Σ c_y over H(y) ≤ height.
    #[serde(serialize_with = "report::ser_sig12")]
    pub partial: f64,
}

/// Σ_{H(y) ≤ T, Δ(y) ≠ 0} c_y, shell by shell.
#[derive(Clone, Debug, Serialize)]
pub struct PeyreSum {
    pub max_height: u64,
    #[serde(serialize_with = "report::ser_sig12")]
    pub total: f64,
    /// Sum of the absolute quadrature error bounds.
    #[serde(serialize_with = "report::ser_sig12")]
    pub error: f64,
    pub shells: Vec<Shell>,
}

impl PeyreSum {
    /// The partial sum over H(y) ≤ t (t ≤ max_height).
    pub fn partial(&self, t: u64) -> f64 {
        self.shells
            .iter()
            .take_while(|s| s.height <= t)
            .last()
            .map_or(0.0, |s| s.partial)
    }
}

/// (y, c_y, error bound) for every nonsingular fibre with H(y) ≤ t.
pub fn peyre_constants(
    surface: &ConicBundleSurface,
    model: &HeightModel,
    t: u64,
    tol: f64,
) -> Result<Vec<(ProjPoint, f64, f64)>, Error> {
    let ys: Vec<ProjPoint> = enumerate_base(surface.n(), t).collect();
    let out: Vec<Option<(ProjPoint, f64, f64)>> = ys
        .par_iter()
        .map(|y| -> Result<_, Error> {
            let form = surface.fibre_form(y)?;
            if !form.is_nondegenerate() {
                return Ok(None);
            }
            if !is_soluble(&form)? {
                return Ok(Some((y.clone(), 0.0, 0.0)));
            }
            let r = fibre_report(surface, model, y, tol)?;
            Ok(Some((y.clone(), r.peyre, r.tamagawa_error / 2.0)))
        })
        .collect::<Result<_, _>>()?;
    Ok(out.into_iter().flatten().collect())
}

pub fn peyre_sum(surface: &ConicBundleSurface, model: &HeightModel, t: u64, tol: f64) -> Result<PeyreSum, Error> {
    let constants = peyre_constants(surface, model, t, tol)?;
    let mut shells = Vec::new();
    let mut partial = 0.0;
    let mut start = 0;
    for h in 1..=t {
        let end = start
            + constants[start..]
                .iter()
                .take_while(|(y, _, _)| y.height() == BigInt::from(h))
                .count();
        let values: Vec<f64> = constants[start..end].iter().map(|c| c.1).collect();
        let increment = pairwise_sum(&values);
        partial += increment;
        shells.push(Shell {
            height: h,
            fibres: end - start,
            increment,
            partial,
        });
        start = end;
    }
    let errors: Vec<f64> = constants.iter().map(|c| c.2).collect();
    let total = pairwise_sum(&constants.iter().map(|c| c.1).collect::<Vec<_>>());
    Ok(PeyreSum {
        max_height: t,
        total,
        error: pairwise_sum(&errors),
        shells,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    #[serde(serialize_with = "report::ser_display")]
    pub bound: BigRational,
    #[serde(serialize_with = "report::ser_display")]
    pub count: u64,
    #[serde(serialize_with = "report::ser_sig12")]
    pub ratio: f64,
    /// The base height bound T = base_bound(B) at which the Peyre sum is read.
    pub base_bound: u64,
    #[serde(serialize_with = "report::ser_sig12")]
    pub peyre_partial: f64,
}

/// N(U, H*, B) against B, with a least-squares line through the top half of the grid.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticProbe {
    pub rows: Vec<ProbeRow>,
    #[serde(serialize_with = "report::ser_sig12")]
    pub slope: f64,
    #[serde(serialize_with = "report::ser_sig12")]
    pub intercept: f64,
    /// count − (slope·B + intercept) on the fitted rows.
    #[serde(serialize_with = "report::ser_sig12_vec")]
    pub residuals: Vec<f64>,
    pub peyre: PeyreSum,
    /// Per-fibre counts; serialized through [`CensusReport`].
    #[serde(skip)]
    pub grid: GridCount,
}

pub fn asymptotic_probe(
    surface: &ConicBundleSurface,
    model: &HeightModel,
    grid: &[BigRational],
    strategy: Strategy,
    tol: f64,
) -> Result<AsymptoticProbe, Error> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "the grid of bounds must be strictly increasing".into(),
        ));
    }
    let counts = count_grid(surface, model, grid, strategy, &[])?;
    let top = base_limit(model, grid.last().unwrap())?;
    let peyre = peyre_sum(surface, model, top, tol)?;
    let rows: Vec<ProbeRow> = grid
        .iter()
        .zip(&counts.totals)
        .map(|(b, &n)| -> Result<ProbeRow, Error> {
            let t = base_limit(model, b)?;
            let bf = b.to_f64().unwrap();
            Ok(ProbeRow {
                bound: b.clone(),
                count: n,
                ratio: n as f64 / bf,
                base_bound: t,
                peyre_partial: peyre.partial(t),
            })
        })
        .collect::<Result<_, _>>()?;
    let fit: Vec<(f64, f64)> = rows[rows.len() / 2..]
        .iter()
        .map(|r| (r.bound.to_f64().unwrap(), r.count as f64))
        .collect();
    let (slope, intercept) = least_squares(&fit);
    let residuals = fit.iter().map(|(x, y)| y - (slope * x + intercept)).collect();
    Ok(AsymptoticProbe {
        rows,
        slope,
        intercept,
        residuals,
        peyre,
        grid: counts,
    })
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    if points.len() < 2 {
        // a single point: the line through the origin
        return points.first().map_or((0.0, 0.0), |&(x, y)| (y / x, 0.0));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Geometric grid lo, lo·ratio, … up to and including hi.
pub fn geometric_grid(lo: u64, hi: u64, ratio: u64) -> Vec<BigRational> {
    let mut out = Vec::new();
    let mut b = lo.max(1);
    while b < hi {
        out.push(BigRational::from_integer(b.into()));
        b = b.saturating_mul(ratio.max(2));
    }
    out.push(BigRational::from_integer(hi.into()));
    out
}
