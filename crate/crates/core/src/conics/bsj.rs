use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::TernaryForm;
use crate::arith::factor;
use crate::Error;

/// Terms of the uniform conic bound τ(|det|)·((Δ₀^{3/2} B₁B₂B₃ / |det|)^{1/3} + 1).
#[derive(Clone, Debug, PartialEq)]
pub struct BsjDiagnostic {
    pub divisors: u64,
    pub minors_gcd: BigInt,
    pub det: BigInt,
    pub bound: f64,
}

fn divisor_count(n: &BigInt) -> Result<u64, Error> {
    if n.is_one() {
        return Ok(1);
    }
    Ok(factor(n)?.iter().map(|&(_, e)| e as u64 + 1).product())
}

fn ln_big(n: &BigInt) -> f64 {
    // f64 conversion saturates above ~1e308, so go through the bit length
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap().abs().ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn bsj_diagnostic(form: &TernaryForm, boxes: [f64; 3]) -> Result<BsjDiagnostic, Error> {
    form.require_nondegenerate()?;
    if boxes.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
        return Err(Error::InvalidInput(format!(
            "box bounds must be finite and nonnegative, got {boxes:?}"
        )));
    }
    let det = form.det();
    let d0 = form.minors_gcd();
    let tau = divisor_count(&det.abs())?;
    let volume = boxes.iter().product::<f64>();
    let inner = if volume == 0.0 {
        0.0
    } else {
        ((1.5 * ln_big(&d0) + volume.ln() - ln_big(&det)) / 3.0).exp()
    };
    Ok(BsjDiagnostic {
        divisors: tau,
        minors_gcd: d0,
        det,
        bound: tau as f64 * (inner + 1.0),
    })
}
