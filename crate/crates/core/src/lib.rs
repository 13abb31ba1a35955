//! Exact point counting on conic bundle surfaces over ℚ.
//!
//! A conic bundle here is a hypersurface X of bidegree (e, 2) in the ℙ²-bundle
//! 𝔽ₙ(a₀, a₁, a₂) over ℙⁿ, cut out by a symmetric Gram matrix of forms f_ij(y).
//! The crate counts rational points of bounded height H* for the divisor
//! −K_X + αF fibre by fibre, computes the local densities and Tamagawa numbers of
//! the fibre conics, and aggregates both across the base.
//!
//! The modules follow the data flow:
//!
//! * [`projgeo`]: canonical points of ℙⁿ(ℚ) and height-ordered enumeration.
//! * [`bundle`]: the surface model, its discriminant, fibres, and the importer for
//!   cubic hypersurfaces containing a line.
//! * [`heights`]: the height H*, exact comparisons, search boxes.
//! * [`conics`]: solubility, point search, parametrization and exact counts on one fibre.
//! * [`localdata`]: σ_p, σ_∞, Tamagawa numbers and Peyre constants of fibres.
//! * [`census`]: global counts, Peyre sums and the probes built on them.
//! * [`config`] and [`cli`]: the TOML run configuration and the command surface.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod bundle;
pub mod census;
pub mod cli;
pub mod config;
pub mod conics;
mod error;
pub mod heights;
pub mod localdata;
pub mod projgeo;

pub use error::{Error, Result};

/// Engine version embedded in every report.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
