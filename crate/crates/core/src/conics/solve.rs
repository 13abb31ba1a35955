//! Local and global solubility of a ternary form, and point search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::TernaryForm;
use crate::arith::{exact_sqrt, factor, hilbert_symbol, isqrt, Place};
use crate::Error;

/// An integral congruence diagonalization: Q(M·z) = Σ d_i z_i².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonalization {
    pub diag: [BigInt; 3],
    /// Columns are the new basis vectors; det M ≠ 0 but M need not be unimodular.
    pub basis: [[BigInt; 3]; 3],
}

fn identity() -> [[BigInt; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { BigInt::one() } else { BigInt::zero() }))
}

fn mat_mul(a: &[[BigInt; 3]; 3], b: &[[BigInt; 3]; 3]) -> [[BigInt; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum()))
}

/// Diagonalizes a nondegenerate form by integral column operations, the integer
/// analogue of completing the square: with pivot a = g_kk, every later basis vector
/// e_j is replaced by a·e_j − g_kj·e_k.
pub fn diagonalize(form: &TernaryForm) -> Result<Diagonalization, Error> {
    form.require_nondegenerate()?;
    let mut basis = identity();
    let mut cur = form.clone();
    for k in 0..3 {
        if cur.entry(k, k).is_zero() {
            // bring a nonzero diagonal entry into position k, or make one
            let mut step = identity();
            if let Some(j) = (k + 1..3).find(|&j| !cur.entry(j, j).is_zero()) {
                step[k][k] = BigInt::zero();
                step[j][j] = BigInt::zero();
                step[k][j] = BigInt::one();
                step[j][k] = BigInt::one();
            } else if let Some(j) = (k + 1..3).find(|&j| !cur.entry(k, j).is_zero()) {
                // e_k → e_k + e_j gives diagonal entry 2·g_kj
                step[j][k] = BigInt::one();
            } else {
                return Err(Error::Internal("degenerate pivot in diagonalization".into()));
            }
            cur = cur.transform(&step);
            basis = mat_mul(&basis, &step);
        }
        let a = cur.entry(k, k).clone();
        let mut step = identity();
        for j in (k + 1)..3 {
            step[j][j] = a.clone();
            step[k][j] = -cur.entry(k, j);
        }
        cur = cur.transform(&step);
        basis = mat_mul(&basis, &step);
        // keep entries small: divide each later column's content out of the basis
        for j in (k + 1)..3 {
            let g = (0..3).fold(BigInt::zero(), |acc, i| acc.gcd(&basis[i][j]));
            if g > BigInt::one() {
                for row in basis.iter_mut() {
                    row[j] = &row[j] / &g;
                }
                cur = form.transform(&basis);
            }
        }
    }
    debug_assert!(cur.is_diagonal());
    let diag = std::array::from_fn(|i| cur.entry(i, i).clone());
    Ok(Diagonalization { diag, basis })
}

/// A diagonal form in Legendre normal shape: squarefree, pairwise coprime, with a
/// rational map back to the diagonal it came from.
#[derive(Clone, Debug)]
pub(crate) struct Reduced {
    pub coeffs: [BigInt; 3],
    /// z_i (original diagonal) = reduced_i · num_i / den_i, up to a common factor.
    pub num: [BigInt; 3],
    pub den: [BigInt; 3],
}

fn squarefree_part(n: &BigInt) -> Result<(BigInt, BigInt), Error> {
    // n = core · s²
    let mut core = n.signum();
    let mut s = BigInt::one();
    for (p, e) in factor(n)? {
        let bp = BigInt::from(p);
        s *= bp.pow(e / 2);
        if e % 2 == 1 {
            core *= bp;
        }
    }
    Ok((core, s))
}

pub(crate) fn reduce(diag: &[BigInt; 3]) -> Result<Reduced, Error> {
    let mut c = diag.clone();
    let mut num: [BigInt; 3] = std::array::from_fn(|_| BigInt::one());
    let mut den: [BigInt; 3] = std::array::from_fn(|_| BigInt::one());
    loop {
        // strip squares: d·s²·z² = d·(s z)², so z_old = z_new / s
        for i in 0..3 {
            let (core, s) = squarefree_part(&c[i])?;
            c[i] = core;
            den[i] *= s;
        }
        let g = c.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if !g.is_one() {
            for v in c.iter_mut() {
                *v = &*v / &g;
            }
            continue;
        }
        let mut changed = false;
        'pairs: for i in 0..3 {
            for j in (i + 1)..3 {
                let g = c[i].gcd(&c[j]);
                if g.is_one() {
                    continue;
                }
                let p = BigInt::from(factor(&g)?[0].0);
                // p | c_i, c_j: multiply through by p and set Z_i = p z_i
                let k = 3 - i - j;
                c[i] = &c[i] / &p;
                c[j] = &c[j] / &p;
                c[k] = &c[k] * &p;
                den[i] *= &p;
                den[j] *= &p;
                changed = true;
                break 'pairs;
            }
        }
        if !changed {
            break;
        }
    }
    // normalize each rational factor
    for i in 0..3 {
        let g = num[i].gcd(&den[i]);
        num[i] = &num[i] / &g;
        den[i] = &den[i] / &g;
    }
    Ok(Reduced { coeffs: c, num, den })
}

/// Whether the conic has a point over ℚ_v.
pub fn local_solubility(form: &TernaryForm, place: Place) -> Result<bool, Error> {
    let d = diagonalize(form)?;
    Ok(diagonal_local(&d.diag, place))
}

fn diagonal_local(d: &[BigInt; 3], place: Place) -> bool {
    // a x² + b y² + c z² is isotropic iff (−ac, −bc)_v = 1
    let s1 = -(&d[0] * &d[2]);
    let s2 = -(&d[1] * &d[2]);
    hilbert_symbol(&s1, &s2, place) == 1
}

/// Places where local solubility has to be checked: ∞ and every p | 2·d₀d₁d₂.
fn relevant_places(d: &[BigInt; 3]) -> Result<Vec<Place>, Error> {
    let prod = BigInt::from(2) * &d[0] * &d[1] * &d[2];
    let mut places = vec![Place::Infinite];
    places.extend(factor(&prod)?.into_iter().map(|(p, _)| Place::Prime(p)));
    Ok(places)
}

/// Local solubility at every relevant place, in the order ∞, then primes ascending.
pub fn local_profile(form: &TernaryForm) -> Result<Vec<(Place, bool)>, Error> {
    let d = diagonalize(form)?;
    let red = reduce(&d.diag)?;
    Ok(relevant_places(&red.coeffs)?
        .into_iter()
        .map(|v| (v, diagonal_local(&red.coeffs, v)))
        .collect())
}

/// C(ℚ) ≠ ∅, by Hasse–Minkowski.
pub fn is_soluble(form: &TernaryForm) -> Result<bool, Error> {
    Ok(local_profile(form)?.iter().all(|&(_, ok)| ok))
}

/// A point found by bounded search, with the data needed to audit the bound.
#[derive(Clone, Debug)]
pub struct PointCertificate {
    /// Canonical primitive zero of the input form.
    pub point: [BigInt; 3],
    /// Legendre normal form a·X² + b·Y² + c·Z² the search ran on.
    pub reduced: [BigInt; 3],
    /// The zero of the normal form, with |X| ≤ √|bc|, |Y| ≤ √|ac|, |Z| ≤ √|ab|.
    pub reduced_point: [BigInt; 3],
}

impl PointCertificate {
    pub fn within_holzer_bound(&self) -> bool {
        (0..3).all(|i| {
            let prod = (0..3)
                .filter(|&j| j != i)
                .map(|j| self.reduced[j].abs())
                .product::<BigInt>();
            &self.reduced_point[i] * &self.reduced_point[i] <= prod
        })
    }
}

pub(crate) fn canonical_triple(mut x: [BigInt; 3]) -> Option<[BigInt; 3]> {
    let g = x.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return None;
    }
    let neg = x.iter().find(|v| !v.is_zero()).is_some_and(Signed::is_negative);
    for v in x.iter_mut() {
        *v = &*v / &g;
        if neg {
            *v = -&*v;
        }
    }
    Some(x)
}

/// Exhaustive search in the Holzer box of a Legendre normal form. Pairs of the two
/// smallest ranges are visited in order of increasing max-norm; the third
/// coordinate is solved exactly. Among the solutions at the first successful level
/// the lexicographically largest canonical one is returned.
fn holzer_search(c: &[BigInt; 3]) -> Option<[BigInt; 3]> {
    let bounds: [BigInt; 3] = std::array::from_fn(|i| {
        let prod: BigInt = (0..3).filter(|&j| j != i).map(|j| c[j].abs()).product();
        isqrt(&prod).unwrap()
    });
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| bounds[i].cmp(&bounds[j]).then(i.cmp(&j)));
    let (i, j, k) = (order[0], order[1], order[2]);
    let bi = bounds[i].to_i64()?;
    let bj = bounds[j].to_i64()?;
    for level in 1..=bi.max(bj) {
        let mut found: Vec<[BigInt; 3]> = Vec::new();
        let mut try_pair = |u: i64, v: i64| {
            let (u, v) = (BigInt::from(u), BigInt::from(v));
            let rest = -(&c[i] * &u * &u + &c[j] * &v * &v);
            if !rest.is_multiple_of(&c[k]) {
                return;
            }
            let sq = &rest / &c[k];
            if let Some(w) = exact_sqrt(&sq) {
                if w > bounds[k] {
                    return;
                }
                for (su, sw) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
                    let mut x: [BigInt; 3] = Default::default();
                    x[i] = &u * su;
                    x[j] = v.clone();
                    x[k] = &w * sw;
                    if let Some(x) = canonical_triple(x) {
                        found.push(x);
                    }
                }
            }
        };
        // pairs (u, v) with max(|u|, |v|) = level; u ≥ 0 suffices since signs are re-added
        if level <= bi {
            let m = bj.min(level);
            for v in -m..=m {
                try_pair(level, v);
            }
        }
        if level <= bj {
            for u in 0..=bi.min(level - 1) {
                try_pair(u, level);
                try_pair(u, -level);
            }
        }
        if let Some(best) = found.into_iter().max() {
            return Some(best);
        }
    }
    None
}

/// Point on the conic with its search certificate, or `None` when C(ℚ) = ∅.
pub fn find_point_certified(form: &TernaryForm) -> Result<Option<PointCertificate>, Error> {
    let d = diagonalize(form)?;
    let red = reduce(&d.diag)?;
    let soluble = relevant_places(&red.coeffs)?
        .into_iter()
        .all(|v| diagonal_local(&red.coeffs, v));
    if !soluble {
        return Ok(None);
    }
    let z = holzer_search(&red.coeffs)
        .ok_or_else(|| Error::Internal(format!("no point in the Holzer box of {:?}", red.coeffs)))?;
    // back to the diagonal coordinates, clearing denominators
    let l = red.den.iter().fold(BigInt::one(), |acc, v| acc.lcm(v));
    let w: [BigInt; 3] = std::array::from_fn(|i| &z[i] * &red.num[i] * (&l / &red.den[i]));
    let x: [BigInt; 3] = std::array::from_fn(|r| (0..3).map(|c| &d.basis[r][c] * &w[c]).sum());
    let point = canonical_triple(x).ok_or_else(|| Error::Internal("zero pullback".into()))?;
    if !form.eval(&point).is_zero() {
        return Err(Error::Internal(format!("pulled-back point {point:?} is not on {form}")));
    }
    Ok(Some(PointCertificate {
        point,
        reduced: red.coeffs,
        reduced_point: z,
    }))
}

pub fn find_point(form: &TernaryForm) -> Result<Option<[BigInt; 3]>, Error> {
    Ok(find_point_certified(form)?.map(|c| c.point))
}
