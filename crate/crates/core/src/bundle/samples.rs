//! Surfaces used throughout the examples and tests.

use num_bigint::BigInt;

use super::{ConicBundleSurface, MultiPoly};

fn mono(c: i64, e: &[u32]) -> MultiPoly {
    MultiPoly::monomial(BigInt::from(c), e.to_vec())
}

/// x₀² + x₁² = s·t·x₂² in 𝔽₁(0,0,1), e = 0. The fibre over (1:t) is x₀² + x₁² = t·x₂².
pub fn main_surface() -> ConicBundleSurface {
    ConicBundleSurface::from_upper(
        1,
        [0, 0, 1],
        0,
        [
            mono(1, &[0, 0]),
            MultiPoly::zero(2, 0),
            MultiPoly::zero(2, 1),
            mono(1, &[0, 0]),
            MultiPoly::zero(2, 1),
            mono(-1, &[1, 1]),
        ],
    )
    .expect("well-formed")
}

/// y₀x₀² + y₁x₁² + (y₀³ + y₁³)x₂² in 𝔽₁(0,0,1), e = 1: the cubic surface
/// z₀²z₂ + z₁²z₃ + z₂³ + z₃³ = 0 blown up along the line z₂ = z₃ = 0.
pub fn cubic_surface() -> ConicBundleSurface {
    ConicBundleSurface::from_upper(
        1,
        [0, 0, 1],
        1,
        [
            mono(1, &[1, 0]),
            MultiPoly::zero(2, 1),
            MultiPoly::zero(2, 2),
            mono(1, &[0, 1]),
            MultiPoly::zero(2, 2),
            mono(1, &[3, 0]).add(&mono(1, &[0, 3])),
        ],
    )
    .expect("well-formed")
}

/// f(s,t) = ∏_{j<2a} (s − j·t), a squarefree binary form of degree 2a.
pub fn northcott_form(a: u32) -> MultiPoly {
    let mut f = MultiPoly::constant(2, BigInt::from(1));
    for j in 0..2 * a {
        let lin = mono(1, &[1, 0]).add(&mono(-(j as i64), &[0, 1]));
        f = f.mul(&lin);
    }
    f
}

/// x₀² − x₁² = f(s,t)·x₂² in 𝔽₁(0,0,a), e = 0, for a binary form f of degree 2a.
pub fn northcott_surface(f: &MultiPoly) -> ConicBundleSurface {
    let a = i64::from(f.degree() / 2);
    ConicBundleSurface::from_upper(
        1,
        [0, 0, a],
        0,
        [
            mono(1, &[0, 0]),
            MultiPoly::zero(2, 0),
            MultiPoly::zero(2, a as u32),
            mono(-1, &[0, 0]),
            MultiPoly::zero(2, a as u32),
            f.neg(),
        ],
    )
    .expect("well-formed")
}

fn linear(c0: i64, c1: i64) -> MultiPoly {
    mono(c0, &[1, 0]).add(&mono(c1, &[0, 1]))
}

/// A non-diagonal bundle with every Gram entry linear, in 𝔽₁(0,0,0), e = 1.
/// Δ = −(y₀ − 4y₁)(y₀ − 3y₁)(y₀ + y₁), and Δ₀(y) ∈ {1, 5}.
pub fn linear_surface() -> ConicBundleSurface {
    ConicBundleSurface::from_upper(
        1,
        [0, 0, 0],
        1,
        [
            linear(2, 3),
            linear(-1, 0),
            linear(1, 3),
            linear(0, 1),
            linear(-1, 1),
            linear(1, 0),
        ],
    )
    .expect("well-formed")
}

/// A non-diagonal bundle in 𝔽₁(0,0,1), e = 0, with a quadratic f₂₂.
pub fn twisted_surface() -> ConicBundleSurface {
    let f22 = mono(3, &[2, 0]).add(&mono(-1, &[1, 1])).add(&mono(7, &[0, 2]));
    ConicBundleSurface::from_upper(
        1,
        [0, 0, 1],
        0,
        [
            mono(2, &[0, 0]),
            mono(1, &[0, 0]),
            linear(1, 2),
            mono(-3, &[0, 0]),
            linear(0, 4),
            f22,
        ],
    )
    .expect("well-formed")
}
