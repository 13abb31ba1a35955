//! Δ(y) and Δ₀(y) across the base for the sample surfaces: Δ₀³ divides Δ², and on
//! a curve base Δ₀ stays bounded.

use conic_bundle::bundle::samples::{linear_surface, main_surface, twisted_surface};
use conic_bundle::projgeo::enumerate_base;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

fn main() -> Result<(), conic_bundle::Error> {
    for (name, s) in [
        ("main", main_surface()),
        ("twisted", twisted_surface()),
        ("linear", linear_surface()),
    ] {
        println!("{name}: {s}");
        println!("  discriminant {}", s.discriminant());
        let mut max = BigInt::zero();
        let mut checked = 0;
        for t in [10u64, 100, 300] {
            for y in enumerate_base(1, t) {
                let f = s.fibre_class(&y)?;
                if f.disc.is_zero() {
                    continue;
                }
                let d0 = &f.minors_gcd;
                assert!((&f.disc * &f.disc).is_multiple_of(&(d0 * d0 * d0)));
                checked += 1;
                max = max.max(d0.clone());
            }
            println!("  H(y) <= {t:>3}: max Δ0 = {max}");
        }
        println!("  Δ0^3 | Δ^2 held on {checked} fibres");
    }
    Ok(())
}
