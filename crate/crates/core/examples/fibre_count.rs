//! Counts points of bounded height on one fibre of the main example surface
//! x₀² + x₁² = y₀y₁·x₂² and compares N/B with the fibre's Peyre constant.
//!
//!     cargo run --release --example fibre_count -- 5 1000000

use conic_bundle::bundle::samples::main_surface;
use conic_bundle::conics::{count_fibre, Strategy};
use conic_bundle::heights::HeightModel;
use conic_bundle::localdata::{fibre_report, DEFAULT_TOL};
use conic_bundle::projgeo::ProjPoint;
use num_rational::BigRational;
use std::time::Instant;

fn main() -> Result<(), conic_bundle::Error> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let t: i64 = args.first().map_or(1, |s| s.parse().expect("t must be an integer"));
    let bound: i64 = args
        .get(1)
        .map_or(1_000_000, |s| s.parse().expect("B must be an integer"));

    let surface = main_surface();
    let model = HeightModel::new(&surface, BigRational::from_integer(1.into()))?;
    let y = ProjPoint::from_i64s(&[1, t])?;
    let b = BigRational::from_integer(bound.into());

    let start = Instant::now();
    let n = count_fibre(&surface, &model, &y, &b, Strategy::Parametrized)?;
    let elapsed = start.elapsed();
    let report = fibre_report(&surface, &model, &y, DEFAULT_TOL)?;

    println!("fibre y = {y}, B = {bound}");
    println!("  N          = {n}  ({elapsed:.2?})");
    println!("  N/B        = {:.6}", n as f64 / bound as f64);
    println!("  tau        = {:.6}", report.tamagawa);
    println!("  c_y = tau/2 = {:.6}", report.peyre);
    Ok(())
}
