//! Counts points of ℙ¹(ℚ) and ℙ²(ℚ) by height against Schanuel's constants.

use conic_bundle::projgeo::enumerate_base;
use std::f64::consts::PI;

fn main() {
    let zeta2 = PI * PI / 6.0;
    let zeta3 = 1.202_056_903_159_594_3_f64;
    for t in [10u64, 100, 1000] {
        let n = enumerate_base(1, t).count();
        let expected = 2.0 / zeta2 * (t * t) as f64;
        println!(
            "P^1, H <= {t:>4}: {n:>8}  vs 2T^2/zeta(2) = {expected:>10.1}  ({:+.3}%)",
            100.0 * (n as f64 / expected - 1.0)
        );
    }
    for t in [10u64, 50, 100] {
        let n = enumerate_base(2, t).count();
        let expected = 4.0 / zeta3 * (t * t * t) as f64;
        println!(
            "P^2, H <= {t:>4}: {n:>8}  vs 4T^3/zeta(3) = {expected:>10.1}  ({:+.3}%)",
            100.0 * (n as f64 / expected - 1.0)
        );
    }
}
