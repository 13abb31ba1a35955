//! Points of height ≤ 1 on the section x = (1, −1, 0) of
//! x₀² − x₁² = f(s,t)·x₂² once α is large: infinitely many, so Northcott fails.

use conic_bundle::census::northcott_probe;

fn main() -> Result<(), conic_bundle::Error> {
    let a: u32 = std::env::args().nth(1).map_or(12, |s| s.parse().expect("a"));
    for count in [10, 100, 1000] {
        let p = northcott_probe(a, count, None)?;
        println!(
            "a = {a}, alpha = {}, H* = H(y)^{}: {} of the first {count} base points have height <= 1 ({} equal to 1)",
            p.alpha, p.exponent, p.at_most_one, p.equal_to_one
        );
    }
    Ok(())
}
