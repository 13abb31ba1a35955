//! The normalized Tamagawa numbers τ(X_t)·t^{2+α}/π along the family
//! x₀² + x₁² = t·x₂²: zero at primes t ≡ 3 mod 4, unbounded along products of
//! primes ≡ 1 mod 4.

use conic_bundle::census::bt_probe;
use num_rational::BigRational;

fn main() -> Result<(), conic_bundle::Error> {
    let t_max: u64 = std::env::args().nth(1).map_or(200, |s| s.parse().expect("t_max"));
    let probe = bt_probe(&BigRational::from_integer(1.into()), t_max, 6, 1e-10)?;
    println!("tau = 0 at primes t = 3 mod 4: {:?}", probe.lower_bound_violations);
    println!(
        "largest relative error against the closed form: {:.2e}",
        probe.max_relative_error
    );
    println!("{:>3} {:>10} {:>3} {:>12} {:>10}", "k", "t", "w", "tau·t^3/pi", "lower");
    for g in &probe.growth {
        println!(
            "{:>3} {:>10} {:>3} {:>12.6} {:>10.6}",
            g.k, g.t, g.omega, g.normalized, g.lower
        );
    }
    println!(
        "increasing: {}, above lower: {}",
        probe.growth_increasing, probe.growth_above_lower
    );
    Ok(())
}
