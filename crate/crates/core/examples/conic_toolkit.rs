//! One ternary form from start to finish: local solubility at every bad place,
//! a point within Holzer's bound, the parametrization through it, and exact counts
//! in a box by both strategies.
//!
//!     cargo run --release --example conic_toolkit -- 3 5 -8 1000

use conic_bundle::conics::{
    bsj_diagnostic, find_point_certified, local_profile, parametrize, FibreCounter, Strategy, TernaryForm,
};

fn main() -> Result<(), conic_bundle::Error> {
    let args: Vec<i64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("integer arguments"))
        .collect();
    let (a, b, c, side) = match args[..] {
        [a, b, c, side] => (a, b, c, side),
        [] => (3, 5, -8, 1000),
        _ => panic!("usage: conic_toolkit a b c box"),
    };
    let form = TernaryForm::diagonal(a, b, c);
    println!("form {form}, det {}", form.det());
    for (place, ok) in local_profile(&form)? {
        println!("  soluble at {place}: {ok}");
    }
    let Some(cert) = find_point_certified(&form)? else {
        println!("no rational point");
        return Ok(());
    };
    println!(
        "point {:?} (within Holzer bound: {})",
        cert.point.each_ref().map(|v| v.to_string()),
        cert.within_holzer_bound()
    );
    let param = parametrize(&form, &cert.point)?;
    for (j, m) in param.maps.iter().enumerate() {
        println!("  x{j} = {}·s² + {}·st + {}·t²", m[0], m[1], m[2]);
    }

    let boxes = [side as i128; 3];
    let counter = FibreCounter::new(&form)?;
    let by_box = counter.count(&boxes, Strategy::Box)?;
    let by_param = counter.count(&boxes, Strategy::Parametrized)?;
    let diag = bsj_diagnostic(&form, [side as f64; 3])?;
    println!("points with |x_i| ≤ {side}, x2 > 0: box {by_box}, parametrized {by_param}");
    println!(
        "divisor-type bound {:.1} (ratio {:.3})",
        diag.bound,
        by_box as f64 / diag.bound
    );
    Ok(())
}
