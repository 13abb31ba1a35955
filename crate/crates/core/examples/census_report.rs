//! Runs a grid count and a Peyre sum and writes the JSON and CSV reports that
//! the `count` and `probe` commands produce.
//!
//!     cargo run --release --example census_report -- out/

use conic_bundle::bundle::samples::main_surface;
use conic_bundle::census::{count_grid, geometric_grid, peyre_sum, CensusReport, Metadata};
use conic_bundle::conics::Strategy;
use conic_bundle::heights::HeightModel;
use conic_bundle::localdata::DEFAULT_TOL;
use num_rational::BigRational;
use std::path::PathBuf;

fn main() -> Result<(), conic_bundle::Error> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&dir)?;
    let surface = main_surface();
    let model = HeightModel::new(&surface, BigRational::from_integer(1.into()))?;
    let grid = geometric_grid(1_000, 64_000, 2);
    let counts = count_grid(&surface, &model, &grid, Strategy::Parametrized, &[])?;
    let peyre = peyre_sum(&surface, &model, 20, DEFAULT_TOL)?;
    let report = CensusReport::new(
        Metadata::new(&surface, &model, Strategy::Parametrized),
        &counts,
        Some(&peyre),
    );

    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(dir.join("census.json"), json)?;
    std::fs::write(dir.join("census.csv"), report.to_csv())?;
    for row in &report.totals {
        println!("B = {:>6}  N = {:>6}  N/B = {:.6}", row.bound, row.count, row.ratio);
    }
    println!("sum of c_y over H(y) <= 20: {:.6}", peyre.total);
    println!("wrote {}", dir.display());
    Ok(())
}
