//! σ_p, σ_∞ and τ of one fibre x₀² + x₁² = t·x₂² of the main example surface.
//!
//!     cargo run --release --example local_densities -- 65

use conic_bundle::bundle::samples::main_surface;
use conic_bundle::heights::HeightModel;
use conic_bundle::localdata::{count_mod_prime_power, fibre_report, sigma_p_stable, DEFAULT_TOL};
use conic_bundle::projgeo::ProjPoint;
use num_rational::BigRational;

fn main() -> Result<(), conic_bundle::Error> {
    let t: i64 = std::env::args()
        .nth(1)
        .map_or(65, |s| s.parse().expect("t must be an integer"));
    let surface = main_surface();
    let model = HeightModel::new(&surface, BigRational::from_integer(1.into()))?;
    let y = ProjPoint::from_i64s(&[1, t])?;
    let form = surface.fibre_form(&y)?;
    let report = fibre_report(&surface, &model, &y, DEFAULT_TOL)?;

    println!("fibre over {y}: {form}");
    println!("soluble: {}", report.soluble);
    for (p, sigma) in &report.sigma_p {
        let stable = sigma_p_stable(&form, *p)?;
        let counts: Vec<String> = (1..=3)
            .map(|n| count_mod_prime_power(&form, *p, n).map(|c| c.to_string()))
            .collect::<Result<_, _>>()?;
        println!(
            "  sigma_{p} = {sigma}   (N(p^n), n=1..3: {}; stable from n = {})",
            counts.join(", "),
            stable.level
        );
    }
    println!(
        "  sigma_inf = {:.12} ± {:.1e}",
        report.sigma_inf.value, report.sigma_inf.error
    );
    println!("  pi/t^3    = {:.12}", std::f64::consts::PI / (t as f64).powi(3));
    println!("  tau       = {:.12}", report.tamagawa);
    println!("  c_y       = {:.12}", report.peyre);
    Ok(())
}
