//! Blows a cubic surface up along a line and prints the resulting conic bundle as
//! a configuration file.
//!
//!     cargo run --example import_cubic -- fixtures/cubic_with_line.toml

use conic_bundle::bundle::import_cubic_with_line;
use conic_bundle::config::{load_config, surface_spec, ModelSpec, RunConfig};
use std::path::PathBuf;

fn main() -> Result<(), conic_bundle::Error> {
    let path = std::env::args().nth(1).map_or_else(
        || PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/cubic_with_line.toml"),
        PathBuf::from,
    );
    let (cfg, _) = load_config(&path)?;
    let (cubic, p, q) = cfg.cubic()?.expect("the file has a [cubic] section");
    let surface = import_cubic_with_line(&cubic, &p, &q)?;

    let report = surface.validate();
    eprintln!("{surface}");
    for c in &report.checks {
        eprintln!("  {:<24} {:?}  {}", c.name, c.status, c.detail);
    }
    let out = RunConfig {
        surface: Some(surface_spec(&surface)),
        model: Some(ModelSpec {
            alpha: "2".into(),
            regime: None,
        }),
        ..Default::default()
    };
    print!("{}", out.to_toml());
    Ok(())
}
