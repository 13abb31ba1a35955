//! Global count N(U, H*, B) on the main example surface against the sum of the
//! fibre Peyre constants, along a grid of bounds.
//!
//!     cargo run --release --example global_census -- 10000 100000 1000000

use conic_bundle::bundle::samples::main_surface;
use conic_bundle::census::asymptotic_probe;
use conic_bundle::conics::Strategy;
use conic_bundle::heights::HeightModel;
use conic_bundle::localdata::DEFAULT_TOL;
use num_rational::BigRational;
use std::time::Instant;

fn main() -> Result<(), conic_bundle::Error> {
    let mut grid: Vec<i64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("bounds are integers"))
        .collect();
    if grid.is_empty() {
        grid = vec![10_000, 100_000, 1_000_000];
    }
    let grid: Vec<BigRational> = grid.into_iter().map(|b| BigRational::from_integer(b.into())).collect();
    let surface = main_surface();
    let model = HeightModel::new(&surface, BigRational::from_integer(1.into()))?;

    let start = Instant::now();
    let probe = asymptotic_probe(&surface, &model, &grid, Strategy::Parametrized, DEFAULT_TOL)?;
    let limit = probe.peyre.total;
    println!(
        "{:>10} {:>10} {:>10} {:>6} {:>10} {:>9}",
        "B", "N", "N/B", "T", "sum c_y", "gap"
    );
    for r in &probe.rows {
        println!(
            "{:>10} {:>10} {:>10.5} {:>6} {:>10.5} {:>8.2}%",
            r.bound.to_string(),
            r.count,
            r.ratio,
            r.base_bound,
            r.peyre_partial,
            100.0 * (r.ratio / limit - 1.0)
        );
    }
    println!("slope over the top half of the grid: {:.5}", probe.slope);
    println!("sum of c_y over H(y) <= {}: {:.6}", probe.peyre.max_height, limit);
    println!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
