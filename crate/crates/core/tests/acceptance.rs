//! Acceptance checks. Each test prints one `PASS` or `FAIL` line with the measured
//! value, the target and the tolerance, then asserts.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use conic_bundle::bundle::import_cubic_with_line;
use conic_bundle::bundle::samples::{cubic_surface, linear_surface, main_surface, twisted_surface};
use conic_bundle::bundle::{CheckStatus, MultiPoly};
use conic_bundle::census::{bt_probe, count_grid, northcott_probe, peyre_sum};
use conic_bundle::conics::{count_fibre, is_soluble, Strategy};
use conic_bundle::heights::HeightModel;
use conic_bundle::localdata::{
    circle_family_tamagawa, count_mod_prime_power, good_density, peyre_constant, sigma_inf, sigma_p, DEFAULT_TOL,
};
use conic_bundle::projgeo::{enumerate_base, ProjPoint};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIGMA_INF_REL: f64 = 1e-6;
const TAMAGAWA_REL: f64 = 1e-6;
const FIBRE_REL: f64 = 0.02;
const GLOBAL_REL: f64 = 0.10;
const SCHANUEL_REL: f64 = 0.02;

/// Writes past the test harness capture so the line lands in every log.
fn report(name: &str, pass: bool, detail: String, elapsed: Duration, budget: Duration) -> bool {
    let in_time = elapsed <= budget;
    let verdict = if pass && in_time { "PASS" } else { "FAIL" };
    let line = format!("{verdict} | {name} | {detail} | {elapsed:.2?} (budget {budget:?})\n");
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    pass && in_time
}

fn one() -> BigRational {
    BigRational::one()
}

fn y(coords: &[i64]) -> ProjPoint {
    ProjPoint::from_i64s(coords).unwrap()
}

fn main_model() -> (conic_bundle::bundle::ConicBundleSurface, HeightModel) {
    let s = main_surface();
    let m = HeightModel::new(&s, one()).unwrap();
    (s, m)
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn two_adic_density_from_count_mod_8() {
    let start = Instant::now();
    let s = main_surface();
    let mut detail = Vec::new();
    let mut pass = true;
    for t in [1i64, 5, 13, 17, 29, 65] {
        let form = s.fibre_form(&y(&[1, t])).unwrap();
        let n8 = count_mod_prime_power(&form, 2, 3).unwrap();
        let sigma = sigma_p(&s, &y(&[1, t]), 2).unwrap();
        pass &= n8 == BigInt::from(64) && sigma == one();
        detail.push(format!("t={t}: N(8)={n8}, σ2={sigma}"));
    }
    let ok = report(
        "σ2 = 1 via N(8) = 64 for t ≡ 1, 5 mod 8",
        pass,
        detail.join("; "),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok);
}

#[test]
fn p_adic_densities_exact() {
    let start = Instant::now();
    let s = main_surface();
    let mut pass = true;
    let mut bad = Vec::new();
    let mut checked = 0;
    for t in [5u64, 13, 65] {
        let yt = y(&[1, t as i64]);
        for p in [5u64, 13].into_iter().filter(|p| t % p == 0) {
            let got = sigma_p(&s, &yt, p).unwrap();
            let want = int(2) * (one() - BigRational::new(1.into(), p.into()));
            pass &= got == want;
            bad.push(format!("t={t} σ{p}={got}"));
        }
        let good: Vec<u64> = conic_bundle::arith::primes_upto(200)
            .into_iter()
            .filter(|&p| p > 2 && t % p != 0)
            .take(10)
            .collect();
        for p in good {
            let got = sigma_p(&s, &yt, p).unwrap();
            pass &= got == good_density(p);
            checked += 1;
        }
    }
    let ok = report(
        "σ_p = 2(1 − 1/p) at p | t, 1 − p⁻² at ten good odd primes",
        pass && checked == 30,
        format!("{}; {checked} good primes exact", bad.join(", ")),
        start.elapsed(),
        Duration::from_secs(10),
    );
    assert!(ok);
}

#[test]
fn real_density_closed_form() {
    let start = Instant::now();
    let (s, m) = main_model();
    let mut worst = 0.0f64;
    for t in [1i64, 2, 5] {
        let est = sigma_inf(&s, &m, &y(&[1, t]), 1e-10).unwrap();
        let want = PI / (t as f64).powi(3);
        worst = worst.max((est.value / want - 1.0).abs());
    }
    let ok = report(
        "σ∞ = π/t^{2+α} for t ∈ {1, 2, 5}, α = 1",
        worst <= SIGMA_INF_REL,
        format!("max relative error {worst:.2e} (tol {SIGMA_INF_REL:e})"),
        start.elapsed(),
        Duration::from_secs(10),
    );
    assert!(ok);
}

#[test]
fn tamagawa_closed_form_up_to_200() {
    let start = Instant::now();
    let probe = bt_probe(&one(), 200, 1, 1e-10).unwrap();
    let admissible: Vec<u64> = probe
        .rows
        .iter()
        .filter(|r| r.closed_form.is_some())
        .map(|r| r.t)
        .collect();
    let direct = admissible
        .iter()
        .map(|&t| {
            let (s, m) = main_model();
            let got = conic_bundle::localdata::tamagawa(&s, &m, &y(&[1, t as i64]), 1e-10).unwrap();
            (got / circle_family_tamagawa(t, 1.0).unwrap() - 1.0).abs()
        })
        .fold(0.0f64, f64::max);
    let worst = probe.max_relative_error.max(direct);
    let ok = report(
        "τ(X_t) matches the closed form for admissible squarefree t ≤ 200",
        worst <= TAMAGAWA_REL && admissible.len() > 10,
        format!(
            "{} admissible t, max relative error {worst:.2e} (tol {TAMAGAWA_REL:e})",
            admissible.len()
        ),
        start.elapsed(),
        Duration::from_secs(120),
    );
    assert!(ok);
}

fn fibre_ratio_t1() -> (f64, f64, Duration) {
    let start = Instant::now();
    let (s, m) = main_model();
    let b = 1_000_000i64;
    let n = count_fibre(&s, &m, &y(&[1, 1]), &int(b), Strategy::Parametrized).unwrap();
    let elapsed = start.elapsed();
    let cy = peyre_constant(&s, &m, &y(&[1, 1]), DEFAULT_TOL).unwrap();
    (n as f64 / b as f64, cy, elapsed)
}

/// The target 8/π is τ(X_1) itself; the count converges to τ/2 = 4/π, so this
/// check stays red. See `fibre_asymptotic_matches_peyre_constant`.
#[test]
fn fibre_asymptotic_against_8_over_pi() {
    let (ratio, _, elapsed) = fibre_ratio_t1();
    let target = 8.0 / PI;
    let rel = (ratio / target - 1.0).abs();
    let ok = report(
        "N(C, H, 10⁶)/10⁶ within 2% of 8/π at t = 1",
        rel <= FIBRE_REL,
        format!(
            "N/B = {ratio:.6}, target {target:.6}, relative gap {:.2}% (tol {}%)",
            100.0 * rel,
            100.0 * FIBRE_REL
        ),
        elapsed,
        Duration::from_secs(120),
    );
    assert!(ok);
}

#[test]
fn fibre_asymptotic_matches_peyre_constant() {
    let (ratio, cy, elapsed) = fibre_ratio_t1();
    let rel = (ratio / cy - 1.0).abs();
    let ok = report(
        "N(C, H, 10⁶)/10⁶ within 2% of c_y = τ/2 = 4/π at t = 1",
        rel <= FIBRE_REL && (cy - 4.0 / PI).abs() < 1e-9,
        format!(
            "N/B = {ratio:.6}, c_y = {cy:.6}, relative gap {:.3}% (tol {}%)",
            100.0 * rel,
            100.0 * FIBRE_REL
        ),
        elapsed,
        Duration::from_secs(120),
    );
    assert!(ok);
}

#[test]
fn strategies_agree_on_random_fibres() {
    let start = Instant::now();
    let (s, m) = main_model();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let bound = int(10_000);
    let mut seen = Vec::new();
    let mut total = 0u64;
    while seen.len() < 50 {
        let y0 = rng.random_range(1i64..=21);
        let y1 = rng.random_range(-21i64..=21);
        if y0.gcd(&y1) != 1 || y0.max(y1.abs()) < 2 {
            continue;
        }
        let yy = y(&[y0, y1]);
        let form = s.fibre_form(&yy).unwrap();
        if seen.contains(&yy) || !form.is_nondegenerate() || !is_soluble(&form).unwrap() {
            continue;
        }
        let by_box = count_fibre(&s, &m, &yy, &bound, Strategy::Box).unwrap();
        let by_param = count_fibre(&s, &m, &yy, &bound, Strategy::Parametrized).unwrap();
        assert_eq!(by_box, by_param, "fibre {yy}");
        total += by_box;
        seen.push(yy);
    }
    let ok = report(
        "box and parametrized counts agree on 50 random soluble fibres at B = 10⁴",
        true,
        format!("{} fibres, {total} points in all, exact agreement", seen.len()),
        start.elapsed(),
        Duration::from_secs(300),
    );
    assert!(ok);
}

/// N/B at B = 10⁴, 10⁵, 10⁶ against Σ c_y. The 10% check reads the sum at T = 100;
/// the shrinking-gap check compares each N/B with the partial sum over the base
/// points that can carry a point of height ≤ B, which is the sum N/B tends to.
#[test]
fn global_asymptotic() {
    let start = Instant::now();
    let (s, m) = main_model();
    let grid: Vec<BigRational> = [10_000i64, 100_000, 1_000_000].map(int).to_vec();
    let (counts, peyre) = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| {
            (
                count_grid(&s, &m, &grid, Strategy::Parametrized, &[]).unwrap(),
                peyre_sum(&s, &m, 100, DEFAULT_TOL).unwrap(),
            )
        });
    let mut lines = Vec::new();
    let mut matched_gaps = Vec::new();
    for (b, n) in grid.iter().zip(&counts.totals) {
        let bf: f64 = num_traits::ToPrimitive::to_f64(b).unwrap();
        let ratio = *n as f64 / bf;
        let t = num_traits::ToPrimitive::to_u64(&m.base_bound(b)).unwrap().min(100);
        let matched = peyre.partial(t);
        let gap = (ratio / matched - 1.0).abs();
        matched_gaps.push(gap);
        lines.push(format!(
            "B={b}: N/B={ratio:.6}, vs Σ(T=100) {:+.2}%, vs Σ(T={t}) {:.2}%",
            100.0 * (ratio / peyre.total - 1.0),
            100.0 * gap
        ));
    }
    let top = *counts.totals.last().unwrap() as f64 / 1e6;
    let within = (top / peyre.total - 1.0).abs() <= GLOBAL_REL;
    let shrinking = matched_gaps.windows(2).all(|w| w[1] < w[0]);
    let ok = report(
        "N(U, H, 10⁶)/10⁶ within 10% of Σ c_y (T = 100), gap shrinking along the grid",
        within && shrinking,
        format!(
            "Σ(T=100) = {:.6} (tol {}%); {}",
            peyre.total,
            100.0 * GLOBAL_REL,
            lines.join("; ")
        ),
        start.elapsed(),
        Duration::from_secs(1800),
    );
    assert!(ok);
}

fn samples() -> [(&'static str, conic_bundle::bundle::ConicBundleSurface); 3] {
    [
        ("main", main_surface()),
        ("twisted", twisted_surface()),
        ("linear", linear_surface()),
    ]
}

#[test]
fn minors_divide_discriminant() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, s) in samples() {
        let mut checked = 0;
        let mut largest = BigInt::zero();
        while checked < 200 {
            let y0 = rng.random_range(0i64..=10_000);
            let y1 = rng.random_range(-10_000i64..=10_000);
            if y0 == 0 && y1 == 0 {
                continue;
            }
            let f = s.fibre_class(&y(&[y0, y1])).unwrap();
            if f.disc.is_zero() {
                continue;
            }
            let d0 = &f.minors_gcd;
            pass &= (&f.disc * &f.disc).is_multiple_of(&(d0 * d0 * d0));
            largest = largest.max(d0.clone());
            checked += 1;
        }
        detail.push(format!("{name}: 200 fibres, max Δ0 {largest}"));
    }
    let ok = report(
        "Δ0(y)³ | Δ(y)² on random fibres",
        pass,
        detail.join("; "),
        start.elapsed(),
        Duration::from_secs(10),
    );
    assert!(ok);
}

#[test]
fn minors_bounded_on_curve_base() {
    let start = Instant::now();
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, s) in samples() {
        let max_upto = |t: u64| {
            enumerate_base(1, t)
                .map(|p| s.fibre_class(&p).unwrap())
                .filter(|f| !f.disc.is_zero())
                .map(|f| f.minors_gcd)
                .max()
                .unwrap()
        };
        let (m10, m100) = (max_upto(10), max_upto(100));
        pass &= m10 == m100;
        detail.push(format!("{name}: max Δ0 {m10} (H ≤ 10), {m100} (H ≤ 100)"));
    }
    let ok = report(
        "max Δ0 over H(y) ≤ 100 equals max over H(y) ≤ 10",
        pass,
        detail.join("; "),
        start.elapsed(),
        Duration::from_secs(30),
    );
    assert!(ok);
}

#[test]
fn cubic_import() {
    let start = Instant::now();
    let mono = |e: [u32; 4]| (BigInt::one(), e.to_vec());
    let cubic = MultiPoly::from_terms(
        4,
        3,
        [
            mono([2, 0, 1, 0]),
            mono([0, 2, 0, 1]),
            mono([0, 0, 3, 0]),
            mono([0, 0, 0, 3]),
        ],
    )
    .unwrap();
    let surface = import_cubic_with_line(&cubic, &y(&[1, 0, 0, 0]), &y(&[0, 1, 0, 0])).unwrap();
    let report_ = surface.validate();
    let delta = surface.discriminant();
    let y0 = MultiPoly::monomial(BigInt::one(), vec![1, 0]);
    let y1 = MultiPoly::monomial(BigInt::one(), vec![0, 1]);
    let expected_delta = y0.mul(&y1).mul(&y0.mul(&y0).mul(&y0).add(&y1.mul(&y1).mul(&y1)));
    let squarefree = report_
        .check("discriminant-squarefree")
        .is_some_and(|c| c.status == CheckStatus::Pass);
    let pass = surface == cubic_surface()
        && surface.e() == 1
        && report_.passed()
        && delta == expected_delta
        && delta.degree() == 5
        && squarefree;
    let ok = report(
        "cubic import gives diag(y0, y1, y0³ + y1³), e = 1, Δ squarefree of degree 5",
        pass,
        format!("{surface}; Δ = {delta}"),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok);
}

#[test]
fn northcott_failure() {
    let start = Instant::now();
    let sizes = [100usize, 1000, 4000];
    let mut found = Vec::new();
    let mut exact = true;
    for count in sizes {
        // the probe itself checks H* = H(y)^{-1} exactly at every point
        let p = northcott_probe(12, count, None).unwrap();
        exact &= p.alpha == int(9) && p.exponent == -1;
        found.push(p.at_most_one);
    }
    let growing = found.windows(2).all(|w| w[1] > w[0]) && found == sizes;
    let ok = report(
        "a = 12, α = 9: section heights are H(y)⁻¹ and points of height ≤ 1 keep coming",
        exact && growing,
        format!("height ≤ 1 among the first {sizes:?} base points: {found:?}"),
        start.elapsed(),
        Duration::from_secs(10),
    );
    assert!(ok);
}

#[test]
fn batyrev_tschinkel_probe() {
    let start = Instant::now();
    let probe = bt_probe(&one(), 50, 6, 1e-10).unwrap();
    let expected: Vec<u64> = conic_bundle::arith::primes_upto(50)
        .into_iter()
        .filter(|p| p % 4 == 3)
        .collect();
    let growth: Vec<String> = probe
        .growth
        .iter()
        .map(|g| format!("{:.4}≥{:.4}", g.normalized, g.lower))
        .collect();
    let ok = report(
        "τ = 0 at primes t ≡ 3 mod 4 ≤ 50; τ·t^{2+α}/π increasing and above (4/3)^ω/ζ(2)",
        probe.lower_bound_violations == expected
            && probe.growth.len() == 6
            && probe.growth_increasing
            && probe.growth_above_lower,
        format!(
            "violations {:?}; growth {}",
            probe.lower_bound_violations,
            growth.join(", ")
        ),
        start.elapsed(),
        Duration::from_secs(120),
    );
    assert!(ok);
}

#[test]
fn schanuel_calibration() {
    let start = Instant::now();
    let n = enumerate_base(1, 1000).count() as f64;
    let target = 12.0 / (PI * PI) * 1e6;
    let rel = (n / target - 1.0).abs();
    let ok = report(
        "#{y ∈ P¹(Q): H(y) ≤ 1000} within 2% of (12/π²)·10⁶",
        rel <= SCHANUEL_REL,
        format!(
            "{n} vs {target:.1}, relative gap {:.3}% (tol {}%)",
            100.0 * rel,
            100.0 * SCHANUEL_REL
        ),
        start.elapsed(),
        Duration::from_secs(10),
    );
    assert!(ok);
}
