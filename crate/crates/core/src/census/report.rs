use std::fmt::Display;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use super::{GridCount, PeyreSum};
use crate::bundle::ConicBundleSurface;
use crate::conics::Strategy;
use crate::heights::HeightModel;

/// A float printed with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.11e}")
}

pub(crate) fn ser_sig12<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    let rounded: f64 = sig12(*x).parse().unwrap_or(*x);
    s.serialize_f64(rounded)
}

pub(crate) fn ser_sig12_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_sig12(v, s),
        None => s.serialize_none(),
    }
}

pub(crate) fn ser_sig12_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&sig12(*x).parse::<f64>().unwrap_or(*x))?;
    }
    seq.end()
}

pub(crate) fn ser_display<T: Display, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest.iter() {
        write!(out, "{b:02x}").unwrap();
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub engine_version: &'static str,
    pub surface: String,
    pub surface_sha256: String,
    pub alpha: String,
    pub strategy: Strategy,
}

impl Metadata {
    pub fn new(surface: &ConicBundleSurface, model: &HeightModel, strategy: Strategy) -> Self {
        let text = surface.to_string();
        Metadata {
            engine_version: crate::ENGINE_VERSION,
            surface_sha256: sha256_hex(text.as_bytes()),
            surface: text,
            alpha: model.alpha().to_string(),
            strategy,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridRow {
    pub bound: String,
    pub count: String,
    #[serde(serialize_with = "ser_sig12")]
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FibreRow {
    pub bound: String,
    pub y: String,
    pub count: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartialRow {
    pub t: u64,
    #[serde(serialize_with = "ser_sig12")]
    pub value: f64,
}

/// Counts on a grid of bounds, their per-fibre breakdown and, when computed, the
/// Peyre partial sums. Exact integers are decimal strings.
#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub metadata: Metadata,
    pub totals: Vec<GridRow>,
    pub fibres: Vec<FibreRow>,
    pub peyre_partial: Vec<PartialRow>,
}

impl CensusReport {
    pub fn new(metadata: Metadata, grid: &GridCount, peyre: Option<&PeyreSum>) -> Self {
        let totals = grid
            .bounds
            .iter()
            .zip(&grid.totals)
            .map(|(b, n)| GridRow {
                bound: b.to_string(),
                count: n.to_string(),
                ratio: *n as f64 / num_traits::ToPrimitive::to_f64(b).unwrap(),
            })
            .collect();
        let mut fibres = Vec::new();
        for (k, b) in grid.bounds.iter().enumerate() {
            for (y, counts) in &grid.fibres {
                fibres.push(FibreRow {
                    bound: b.to_string(),
                    y: y.key(),
                    count: counts[k].to_string(),
                });
            }
        }
        let peyre_partial = peyre
            .map(|p| {
                p.shells
                    .iter()
                    .map(|s| PartialRow {
                        t: s.height,
                        value: s.partial,
                    })
                    .collect()
            })
            .unwrap_or_default();
        CensusReport {
            metadata,
            totals,
            fibres,
            peyre_partial,
        }
    }

    /// One header row, then one row per (B, y).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bound,y,count\n");
        for r in &self.fibres {
            writeln!(out, "{},{},{}", r.bound, r.y, r.count).unwrap();
        }
        out
    }
}
