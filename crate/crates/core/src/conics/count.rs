//! Exact counts of canonical points with x₂ ≠ 0 in a box |x_j| ≤ b_j on one conic.
//!
//! Two independent strategies:
//!
//! * box: iterate the two coordinates with the smallest ranges and solve the
//!   quadratic for the third;
//! * parametrized: every point is φ(v)/c(v) for a unique primitive v = ±(s, t),
//!   where c(v) = gcd φ(v) divides a fixed D. For each d | D the v with d | c(v)
//!   form a union of lattices ℤv₀ + dℤ²; on each lattice the v with |φ_j(v)| ≤ d·b_j
//!   are scanned line by line. The region is star-shaped about 0, so the scan can
//!   stop at the first empty line.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::param::{parametrize, ConicParam};
use super::solve::find_point;
use super::TernaryForm;
use crate::arith::{exact_sqrt_i128, factor, gcd_all, inv_mod_i128, sqrt_mod};
use crate::bundle::ConicBundleSurface;
use crate::heights::HeightModel;
use crate::projgeo::ProjPoint;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Box,
    Parametrized,
    Both,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "box" => Ok(Strategy::Box),
            "parametrized" => Ok(Strategy::Parametrized),
            "both" => Ok(Strategy::Both),
            _ => Err(Error::InvalidInput(format!(
                "unknown strategy {s:?}; expected box, parametrized or both"
            ))),
        }
    }
}

fn gcd3(x: &[i128; 3]) -> i128 {
    x[0].gcd(&x[1]).gcd(&x[2])
}

fn canonical_sign(x: &mut [i128; 3]) {
    if x.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        for c in x.iter_mut() {
            *c = -*c;
        }
    }
}

/// Points of Q = 0 with x₂ > 0, |x_j| ≤ b_j, primitive, by the box strategy.
/// Each projective point with x₂ ≠ 0 appears exactly once.
pub fn box_points(g: &[[i128; 3]; 3], b: &[i128; 3], mut visit: impl FnMut([i128; 3])) {
    // solve for the coordinate with the largest range
    let k = (0..3).max_by(|&i, &j| b[i].cmp(&b[j]).then(j.cmp(&i))).unwrap();
    let others: Vec<usize> = (0..3).filter(|&j| j != k).collect();
    let (i, j) = (others[0], others[1]);
    let range = |v: usize| if v == 2 { 1..=b[2] } else { -b[v]..=b[v] };
    let gkk = g[k][k];
    let mut emit = |x: [i128; 3]| {
        if x[2] > 0 && x[k].abs() <= b[k] && gcd3(&x) == 1 {
            visit(x);
        }
    };
    for xi in range(i) {
        for xj in range(j) {
            if xi == 0 && xj == 0 {
                // only e_k remains; it is a zero iff g_kk = 0
                if gkk == 0 {
                    let mut x = [0i128; 3];
                    x[k] = 1;
                    emit(x);
                }
                continue;
            }
            // g_kk x_k² + 2 s x_k + r = 0
            let s = g[k][i] * xi + g[k][j] * xj;
            let r = g[i][i] * xi * xi + 2 * g[i][j] * xi * xj + g[j][j] * xj * xj;
            let mut x = [0i128; 3];
            x[i] = xi;
            x[j] = xj;
            if gkk == 0 {
                if s == 0 {
                    // r = 0 would put a line on a nondegenerate conic
                    continue;
                }
                if r % (2 * s) == 0 {
                    x[k] = -r / (2 * s);
                    emit(x);
                }
                continue;
            }
            let disc = s * s - gkk * r;
            let Some(root) = exact_sqrt_i128(disc) else { continue };
            for num in [-s + root, -s - root] {
                if num % gkk == 0 {
                    x[k] = num / gkk;
                    emit(x);
                }
                if root == 0 {
                    break;
                }
            }
        }
    }
}

/// Canonical primitive zeros with |x_j| ≤ b_j including those with x₂ = 0, for
/// the uniformity diagnostic. Brute force over the two smallest ranges.
pub fn box_count_all(form: &TernaryForm, b: &[i128; 3]) -> Result<u64, Error> {
    let g = form.to_i128().ok_or(Error::Overflow("box count"))?;
    let mut n = 0u64;
    box_points(&g, b, |_| n += 1);
    // x₂ = 0: binary form g00 x0² + 2g01 x0x1 + g11 x1² on the remaining box
    for x0 in 0..=b[0] {
        for x1 in -b[1]..=b[1] {
            if (x0 == 0 && x1 <= 0) || x0.gcd(&x1) != 1 {
                continue;
            }
            if g[0][0] * x0 * x0 + 2 * g[0][1] * x0 * x1 + g[1][1] * x1 * x1 == 0 {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Exact box as machine integers, or `None` if no point with x₂ ≠ 0 fits.
pub fn fibre_box_i128(model: &HeightModel, y: &ProjPoint, bound: &BigRational) -> Result<Option<[i128; 3]>, Error> {
    let Some(b) = model.fibre_box(y, bound) else {
        return Ok(None);
    };
    let mut out = [0i128; 3];
    for j in 0..3 {
        // keep products of coordinates with the Gram entries inside i128
        out[j] = b[j]
            .to_i128()
            .filter(|v| *v < 1 << 40)
            .ok_or(Error::Overflow("fibre box"))?;
    }
    Ok(Some(out))
}

/// N(X_y ∩ U, H*, B): canonical points over y with x₂ ≠ 0 and H* ≤ B.
pub fn count_fibre(
    surface: &ConicBundleSurface,
    model: &HeightModel,
    y: &ProjPoint,
    bound: &BigRational,
    strategy: Strategy,
) -> Result<u64, Error> {
    let form = surface.fibre_form(y)?;
    if !form.is_nondegenerate() {
        return Err(Error::Precondition(format!("the fibre over {y} is singular")));
    }
    let Some(b) = fibre_box_i128(model, y, bound)? else {
        return Ok(0);
    };
    FibreCounter::new(&form)?.count(&b, strategy)
}

#[derive(Clone, Debug)]
struct Lattice {
    d: i128,
    /// Lagrange-reduced basis.
    basis: [[i128; 2]; 2],
}

/// Per-fibre counting data, built once and reused across bounds.
#[derive(Clone, Debug)]
pub struct FibreCounter {
    form: TernaryForm,
    g: [[i128; 3]; 3],
    param: Option<ParamData>,
}

#[derive(Clone, Debug)]
struct ParamData {
    param: ConicParam,
    phi: [[i128; 3]; 3],
    content_bound: BigInt,
    lattices: Vec<Lattice>,
}

impl FibreCounter {
    pub fn new(form: &TernaryForm) -> Result<Self, Error> {
        form.require_nondegenerate()?;
        let g = form.to_i128().ok_or(Error::Overflow("fibre form"))?;
        let param = match find_point(form)? {
            None => None,
            Some(p) => Some(ParamData::new(parametrize(form, &p)?)?),
        };
        Ok(FibreCounter {
            form: form.clone(),
            g,
            param,
        })
    }

    pub fn form(&self) -> &TernaryForm {
        &self.form
    }

    pub fn is_soluble(&self) -> bool {
        self.param.is_some()
    }

    pub fn parametrization(&self) -> Option<&ConicParam> {
        self.param.as_ref().map(|p| &p.param)
    }

    /// The bound D with c(v) | D for every primitive v.
    pub fn content_bound(&self) -> Option<&BigInt> {
        self.param.as_ref().map(|p| &p.content_bound)
    }

    pub fn count_box(&self, b: &[i128; 3]) -> u64 {
        if self.param.is_none() {
            return 0;
        }
        let mut n = 0u64;
        box_points(&self.g, b, |_| n += 1);
        n
    }

    pub fn count_parametrized(&self, b: &[i128; 3]) -> u64 {
        let mut n = 0u64;
        self.visit_parametrized(b, |_| n += 1);
        n
    }

    pub fn count(&self, b: &[i128; 3], strategy: Strategy) -> Result<u64, Error> {
        match strategy {
            Strategy::Box => Ok(self.count_box(b)),
            Strategy::Parametrized => Ok(self.count_parametrized(b)),
            Strategy::Both => {
                let (x, y) = (self.count_box(b), self.count_parametrized(b));
                if x != y {
                    return Err(Error::Internal(format!(
                        "box count {x} != parametrized count {y} on {} with box {b:?}",
                        self.form
                    )));
                }
                Ok(x)
            }
        }
    }

    /// Calls `visit` with each canonical point, x₂ ≠ 0, |x_j| ≤ b_j, exactly once.
    pub fn visit_parametrized(&self, b: &[i128; 3], mut visit: impl FnMut([i128; 3])) {
        let Some(pd) = &self.param else { return };
        for lat in &pd.lattices {
            pd.scan(lat, b, &mut visit);
        }
    }
}

fn phi_eval(c: &[i128; 3], v: [i128; 2]) -> i128 {
    c[0] * v[0] * v[0] + c[1] * v[0] * v[1] + c[2] * v[1] * v[1]
}

/// Res(f, g) for binary quadratics a₀s² + a₁st + a₂t² and b₀s² + b₁st + b₂t².
fn resultant(a: &[BigInt; 3], b: &[BigInt; 3]) -> BigInt {
    let x = &a[0] * &b[2] - &a[2] * &b[0];
    let y = &a[0] * &b[1] - &a[1] * &b[0];
    let z = &a[1] * &b[2] - &a[2] * &b[1];
    &x * &x - y * z
}

impl ParamData {
    fn new(param: ConicParam) -> Result<Self, Error> {
        let phi = {
            let mut out = [[0i128; 3]; 3];
            for j in 0..3 {
                for k in 0..3 {
                    out[j][k] = param.maps[j][k].to_i128().ok_or(Error::Overflow("parametrization"))?;
                }
            }
            out
        };
        let m = &param.maps;
        let add = |x: &[BigInt; 3], y: &[BigInt; 3]| -> [BigInt; 3] { std::array::from_fn(|k| &x[k] + &y[k]) };
        let sub = |x: &[BigInt; 3], y: &[BigInt; 3]| -> [BigInt; 3] { std::array::from_fn(|k| &x[k] - &y[k]) };
        // c(v) divides every integral combination of the φ_j, hence every resultant
        let pairs = [
            (m[0].clone(), m[1].clone()),
            (m[0].clone(), m[2].clone()),
            (m[1].clone(), m[2].clone()),
            (add(&m[0], &m[1]), m[2].clone()),
            (add(&m[0], &m[2]), m[1].clone()),
            (add(&m[1], &m[2]), m[0].clone()),
            (sub(&m[0], &m[1]), add(&m[1], &m[2])),
        ];
        let res: Vec<BigInt> = pairs
            .iter()
            .map(|(x, y)| resultant(x, y))
            .filter(|r| !r.is_zero())
            .collect();
        if res.is_empty() {
            return Err(Error::Internal("all resultants of the parametrization vanish".into()));
        }
        let content_bound = gcd_all(res.iter());
        let lattices = build_lattices(&phi, &content_bound)?;
        Ok(ParamData {
            param,
            phi,
            content_bound,
            lattices,
        })
    }

    fn scan(&self, lat: &Lattice, b: &[i128; 3], visit: &mut impl FnMut([i128; 3])) {
        let [u1, u2] = lat.basis;
        let d = lat.d;
        let k: [f64; 3] = std::array::from_fn(|j| (d * b[j]) as f64);
        // φ_j(m u1 + n u2) = A n² + (m β) n + m² C
        let a: [f64; 3] = std::array::from_fn(|j| phi_eval(&self.phi[j], u2) as f64);
        let c: [f64; 3] = std::array::from_fn(|j| phi_eval(&self.phi[j], u1) as f64);
        let beta: [f64; 3] = std::array::from_fn(|j| {
            let p = &self.phi[j];
            (2 * p[0] * u1[0] * u2[0] + p[1] * (u1[0] * u2[1] + u1[1] * u2[0]) + 2 * p[2] * u1[1] * u2[1]) as f64
        });
        let mut m: i128 = 0;
        loop {
            let mf = m as f64;
            let quad: [(f64, f64, f64); 3] = std::array::from_fn(|j| (a[j], mf * beta[j], mf * mf * c[j]));
            let segments = feasible_segments(&quad, &k);
            if segments.is_empty() && m > 0 {
                break;
            }
            let mut next_n = i128::MIN;
            for (lo, hi) in segments {
                let start = ((lo.floor() as i128) - 1).max(next_n);
                let end = (hi.ceil() as i128) + 1;
                next_n = end + 1;
                for n in start..=end {
                    if m == 0 && n <= 0 {
                        continue;
                    }
                    let v = [m * u1[0] + n * u2[0], m * u1[1] + n * u2[1]];
                    if v[0].gcd(&v[1]) != 1 {
                        continue;
                    }
                    let mut x: [i128; 3] = std::array::from_fn(|j| phi_eval(&self.phi[j], v));
                    if gcd3(&x) != d {
                        continue;
                    }
                    for c in x.iter_mut() {
                        *c /= d;
                    }
                    if x[2] == 0 || (0..3).any(|j| x[j].abs() > b[j]) {
                        continue;
                    }
                    canonical_sign(&mut x);
                    visit(x);
                }
            }
            m += 1;
        }
    }
}

/// Real n with |A n² + B n + C| ≤ K for all three constraints, as a union of
/// closed segments. Loosened slightly so rounding can only add candidates.
fn feasible_segments(quad: &[(f64, f64, f64); 3], k: &[f64; 3]) -> Vec<(f64, f64)> {
    let slack = |kj: f64| kj * (1.0 + 1e-9) + 1.0;
    let mut breaks: Vec<f64> = Vec::new();
    for (j, &(a, b, c)) in quad.iter().enumerate() {
        for rhs in [slack(k[j]), -slack(k[j])] {
            roots(a, b, c - rhs, &mut breaks);
        }
    }
    breaks.retain(|r| r.is_finite());
    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let inside = |n: f64| {
        quad.iter()
            .zip(k)
            .all(|(&(a, b, c), &kj)| (a * n * n + b * n + c).abs() <= slack(kj))
    };
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut push = |lo: f64, hi: f64| match out.last_mut() {
        Some(last) if lo <= last.1 + 1.0 => last.1 = last.1.max(hi),
        _ => out.push((lo, hi)),
    };
    if breaks.is_empty() {
        // no boundary crossing: either everything or nothing, and the region is bounded
        if inside(0.0) {
            push(0.0, 0.0);
        }
        return out;
    }
    for (idx, &r) in breaks.iter().enumerate() {
        if inside(r) {
            push(r, r);
        }
        if let Some(&next) = breaks.get(idx + 1) {
            if inside(0.5 * (r + next)) {
                push(r, next);
            }
        }
    }
    out
}

fn roots(a: f64, b: f64, c: f64, out: &mut Vec<f64>) {
    if a == 0.0 {
        if b != 0.0 {
            out.push(-c / b);
        }
        return;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return;
    }
    let sq = disc.sqrt();
    // numerically stable pair
    let q = -0.5 * (b + b.signum() * sq);
    if q != 0.0 {
        out.push(q / a);
        out.push(c / q);
    } else {
        out.push(0.0);
    }
}

/// Classes (v mod p^j) in ℙ¹(ℤ/p^j) with p^j | φ(v), for j = 1..=e.
fn classes_mod_prime_power(phi: &[[i128; 3]; 3], p: u64, e: u32) -> Vec<Vec<[i128; 2]>> {
    let pi = p as i128;
    let divides = |v: [i128; 2], modulus: i128| phi.iter().all(|c| phi_eval(c, v) % modulus == 0);
    let mut levels = Vec::new();
    let mut current: Vec<[i128; 2]> = roots_mod_p(phi, p).into_iter().collect();
    let mut modulus = pi;
    for j in 1..=e {
        if j > 1 {
            let mut next = Vec::new();
            let prev_mod = modulus;
            modulus *= pi;
            for v in &current {
                for i in 0..pi {
                    let w = if v[0] == 1 {
                        [1, (v[1] + i * prev_mod) % modulus]
                    } else {
                        [(v[0] + i * prev_mod) % modulus, 1]
                    };
                    if divides(w, modulus) {
                        next.push(w);
                    }
                }
            }
            current = next;
        }
        levels.push(current.clone());
        if current.is_empty() {
            break;
        }
    }
    levels
}

/// Common zeros of the φ_j in ℙ¹(𝔽_p), as (1, t) or (0, 1).
fn roots_mod_p(phi: &[[i128; 3]; 3], p: u64) -> Vec<[i128; 2]> {
    let pi = p as i128;
    let md = |x: i128| x.rem_euclid(pi);
    let mut out = Vec::new();
    if phi.iter().all(|c| md(c[2]) == 0) {
        out.push([0, 1]);
    }
    if p < 5000 {
        for t in 0..pi {
            if phi.iter().all(|c| md(phi_eval(c, [1, t])) == 0) {
                out.push([1, t]);
            }
        }
        return out;
    }
    // gcd over 𝔽_p of the affine polynomials c₀ + c₁t + c₂t²
    let polys: Vec<Vec<i128>> = phi
        .iter()
        .map(|c| trim_mod(vec![md(c[0]), md(c[1]), md(c[2])]))
        .collect();
    let mut g = polys[0].clone();
    for f in &polys[1..] {
        g = gcd_mod(g, f.clone(), pi);
    }
    match g.len() {
        2 => {
            let inv = inv_mod_i128(g[1], pi).unwrap();
            out.push([1, md(-g[0] * inv)]);
        }
        3 => {
            // t = (−b ± √(b² − 4ac)) / 2a
            let (c0, c1, c2) = (g[0], g[1], g[2]);
            let disc = md(c1 * c1 - 4 * c2 * c0);
            if let Some(r) = sqrt_mod(disc as u64, p) {
                let inv = inv_mod_i128(md(2 * c2), pi).unwrap();
                let mut ts = vec![md((-c1 + r as i128) * inv), md((-c1 - r as i128) * inv)];
                ts.dedup();
                out.extend(ts.into_iter().map(|t| [1, t]));
            }
        }
        _ => {}
    }
    out
}

fn trim_mod(mut f: Vec<i128>) -> Vec<i128> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn gcd_mod(mut a: Vec<i128>, mut b: Vec<i128>, p: i128) -> Vec<i128> {
    while !b.is_empty() {
        let inv = inv_mod_i128(*b.last().unwrap(), p).unwrap();
        while a.len() >= b.len() && !a.is_empty() {
            let shift = a.len() - b.len();
            let f = (a.last().unwrap() * inv).rem_euclid(p);
            for (i, c) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] - f * c).rem_euclid(p);
            }
            a = trim_mod(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn crt_pair(x: i128, m: i128, y: i128, n: i128) -> i128 {
    // z ≡ x mod m, z ≡ y mod n, gcd(m, n) = 1
    let inv = inv_mod_i128(m.rem_euclid(n), n).unwrap_or(0);
    let t = ((y - x).rem_euclid(n) * inv).rem_euclid(n);
    x + m * t
}

fn build_lattices(phi: &[[i128; 3]; 3], bound: &BigInt) -> Result<Vec<Lattice>, Error> {
    // each prime contributes either nothing or one class at some level p^j
    let mut options: Vec<Vec<(i128, [i128; 2])>> = Vec::new();
    for (p, e) in factor(bound)? {
        let mut opts = vec![(1i128, [0i128, 0])];
        let mut pj = 1i128;
        for level in classes_mod_prime_power(phi, p, e) {
            pj *= p as i128;
            opts.extend(level.into_iter().map(|v| (pj, v)));
        }
        options.push(opts);
    }
    let mut combos: Vec<(i128, [i128; 2])> = vec![(1, [0, 0])];
    for opts in options {
        let mut next = Vec::new();
        for &(d, v) in &combos {
            for &(q, w) in &opts {
                if q == 1 {
                    next.push((d, v));
                } else if d == 1 {
                    next.push((q, w));
                } else {
                    let z = [crt_pair(v[0], d, w[0], q), crt_pair(v[1], d, w[1], q)];
                    next.push((d * q, z));
                }
            }
        }
        combos = next;
    }
    Ok(combos
        .into_iter()
        .map(|(d, v)| {
            let basis = if d == 1 { [[1, 0], [0, 1]] } else { lattice_basis(v, d) };
            Lattice {
                d,
                basis: lagrange_reduce(basis),
            }
        })
        .collect())
}

/// A basis of ℤv + dℤ².
fn lattice_basis(v: [i128; 2], d: i128) -> [[i128; 2]; 2] {
    // a·v₀ + b·d = g gives (g, a·v₁); the vectors with first coordinate 0 are
    // generated by (d/g)·v − (v₀/g)·(d, 0) and (0, d)
    let e = v[0].extended_gcd(&d);
    let (g, a) = (e.gcd, e.x);
    let second = ((d / g) * v[1]).gcd(&d);
    [[g, (a * v[1]).rem_euclid(second)], [0, second]]
}

fn lagrange_reduce(mut b: [[i128; 2]; 2]) -> [[i128; 2]; 2] {
    let norm = |v: [i128; 2]| v[0] * v[0] + v[1] * v[1];
    let dot = |u: [i128; 2], v: [i128; 2]| u[0] * v[0] + u[1] * v[1];
    if norm(b[0]) > norm(b[1]) {
        b.swap(0, 1);
    }
    loop {
        let n0 = norm(b[0]);
        let q = (dot(b[0], b[1]) as f64 / n0 as f64).round() as i128;
        b[1] = [b[1][0] - q * b[0][0], b[1][1] - q * b[0][1]];
        if norm(b[1]) >= n0 {
            return b;
        }
        b.swap(0, 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn counter(q: &TernaryForm) -> FibreCounter {
        FibreCounter::new(q).unwrap()
    }

    #[test]
    fn circle_small_boxes() {
        let c = counter(&TernaryForm::diagonal(1, 1, -1));
        // |x| ≤ 1: (±1, 0, 1), (0, ±1, 1)
        assert_eq!(c.count_box(&[1, 1, 1]), 4);
        assert_eq!(c.count_parametrized(&[1, 1, 1]), 4);
        // adds (±3, ±4, 5), (±4, ±3, 5)
        assert_eq!(c.count(&[5, 5, 5], Strategy::Both).unwrap(), 4 + 8);
    }

    #[test]
    fn insoluble_counts_zero() {
        let c = counter(&TernaryForm::diagonal(1, 1, -3));
        assert!(!c.is_soluble());
        assert_eq!(c.count(&[100, 100, 100], Strategy::Both).unwrap(), 0);
    }

    #[test]
    fn point_sets_agree() {
        for q in [
            TernaryForm::diagonal(1, 1, -5),
            TernaryForm::diagonal(1, 1, -65),
            TernaryForm::diagonal(3, -5, 2),
            TernaryForm::from_i64([[2, 1, 0], [1, 2, 0], [0, 0, -14]]).unwrap(),
            TernaryForm::from_i64([[0, 1, 0], [1, 0, 2], [0, 2, -3]]).unwrap(),
        ] {
            let c = counter(&q);
            let b = [300, 250, 120];
            let mut via_box = BTreeSet::new();
            box_points(&c.g, &b, |mut x| {
                canonical_sign(&mut x);
                via_box.insert(x);
            });
            let mut via_param = BTreeSet::new();
            let mut n = 0;
            c.visit_parametrized(&b, |x| {
                via_param.insert(x);
                n += 1;
            });
            assert_eq!(n, via_param.len(), "duplicate parameters on {q}");
            assert_eq!(via_box, via_param, "on {q}");
        }
    }

    #[test]
    fn random_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut tested = 0;
        while tested < 60 {
            let mut e = || rng.random_range(-40i64..=40);
            let (a, b, c, d, f, g) = (e(), e(), e(), e(), e(), e());
            let q = TernaryForm::from_i64([[a, b, c], [b, d, f], [c, f, g]]).unwrap();
            if !q.is_nondegenerate() {
                continue;
            }
            let ctr = counter(&q);
            if !ctr.is_soluble() {
                continue;
            }
            let bx = [
                rng.random_range(1..200),
                rng.random_range(1..200),
                rng.random_range(1..200),
            ];
            assert_eq!(ctr.count_box(&bx), ctr.count_parametrized(&bx), "{q} box {bx:?}");
            tested += 1;
        }
    }

    fn brute(g: &[[i128; 3]; 3], b: &[i128; 3]) -> u64 {
        let mut n = 0;
        for x0 in -b[0]..=b[0] {
            for x1 in -b[1]..=b[1] {
                for x2 in 1..=b[2] {
                    let x = [x0, x1, x2];
                    let v: i128 = (0..3)
                        .flat_map(|i| (0..3).map(move |j| (i, j)))
                        .map(|(i, j)| g[i][j] * x[i] * x[j])
                        .sum();
                    if v == 0 && gcd3(&x) == 1 {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn sheared_form_against_brute_force() {
        let q = TernaryForm::from_i64([[2, 13, 9], [13, -16, -7], [9, -7, 14]]).unwrap();
        let c = counter(&q);
        let b = [194, 121, 15];
        assert_eq!(c.count_box(&b), brute(&c.g, &b));
        assert_eq!(c.count_parametrized(&b), brute(&c.g, &b));
    }

    #[test]
    fn main_surface_fibres() {
        use crate::bundle::samples::main_surface;
        let s = main_surface();
        let m = HeightModel::new(&s, BigRational::from_integer(1.into())).unwrap();
        let b = BigRational::from_integer(1000.into());
        let y = |t: i64| ProjPoint::from_i64s(&[1, t]).unwrap();
        assert_eq!(count_fibre(&s, &m, &y(3), &b, Strategy::Both).unwrap(), 0);
        let n = count_fibre(&s, &m, &y(1), &b, Strategy::Both).unwrap();
        assert!(n > 0);
        assert!(matches!(
            count_fibre(&s, &m, &ProjPoint::from_i64s(&[0, 1]).unwrap(), &b, Strategy::Box),
            Err(Error::Precondition(_))
        ));
        // H(y)^{A + a₂} = 11³ > 1000
        assert_eq!(count_fibre(&s, &m, &y(11), &b, Strategy::Both).unwrap(), 0);
    }

    #[test]
    fn monotone_in_the_bound() {
        let c = counter(&TernaryForm::diagonal(1, 1, -5));
        let mut last = 0;
        for k in 1..40 {
            let n = c.count_parametrized(&[k * 7, k * 7, k * 3]);
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn lattice_basis_generates() {
        let b = lattice_basis([1, 7], 13);
        let det = (b[0][0] * b[1][1] - b[0][1] * b[1][0]).abs();
        assert_eq!(det, 13);
        let r = lagrange_reduce(b);
        assert_eq!((r[0][0] * r[1][1] - r[0][1] * r[1][0]).abs(), 13);
    }

    #[test]
    fn big_prime_roots_match_scan() {
        // φ = (s − 5t)(s − 9t)·k for a few k, with a large prime
        let p = 1_000_003u64;
        let phi = [[45, -14, 1], [90, -28, 2], [0, 0, 0]];
        // the brute force branch is only used below 5000; compare against the direct check
        let roots = roots_mod_p(&phi, p);
        let mut ts: Vec<i128> = roots.iter().map(|r| r[1]).collect();
        ts.sort();
        // (1, t) with t² − 14t + 45 = 0 → t ∈ {5, 9}
        assert_eq!(ts, vec![5, 9]);
    }
}
