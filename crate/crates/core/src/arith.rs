//! Integer helpers shared by the geometric and local-density code: factorisation,
//! valuations, Legendre and Hilbert symbols.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A place of ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Place {
    Infinite,
    Prime(u64),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Infinite => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Largest integer r with r² ≤ n, or `None` for negative input.
pub fn isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        None
    } else {
        Some(n.sqrt())
    }
}

pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    let r = isqrt(n)?;
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

pub fn isqrt_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r > 0 && r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    Some(r)
}

pub fn exact_sqrt_i128(n: i128) -> Option<i128> {
    let r = isqrt_i128(n)?;
    (r * r == n).then_some(r)
}

/// Exponent of `p` in `n`; `None` for n = 0.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

pub fn valuation_i128(n: i128, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let p = p as i128;
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

#[derive(Debug, thiserror::Error)]
#[error("cannot factor {0}: cofactor exceeds 64 bits after trial division")]
pub struct FactorError(pub BigUint);

/// Prime factorisation of |n| as sorted (prime, exponent) pairs. Zero and ±1 give
/// the empty list.
pub fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>, FactorError> {
    let mut m = n.magnitude().clone();
    let mut primes: Vec<u64> = Vec::new();
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let mut p = 2u64;
    while p < 1 << 14 {
        let bp = BigUint::from(p);
        loop {
            let (q, r) = m.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            primes.push(p);
            m = q;
        }
        if &bp * &bp > m {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let rest = m.to_u64().ok_or_else(|| FactorError(m.clone()))?;
        factor_u64_into(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>, FactorError> {
    Ok(factor(n)?.into_iter().map(|(p, _)| p).collect())
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0
        && factor(&BigInt::from(n))
            .map(|f| f.iter().all(|&(_, e)| e == 1))
            .unwrap_or(false)
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Hilbert symbol (a, b)_v for nonzero integers.
pub fn hilbert_symbol(a: &BigInt, b: &BigInt, place: Place) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    match place {
        Place::Infinite => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) => {
            let alpha = valuation(a, p).unwrap();
            let beta = valuation(b, p).unwrap();
            let pp = BigInt::from(p).pow(alpha);
            let u = a / pp;
            let pp = BigInt::from(p).pow(beta);
            let v = b / pp;
            if p == 2 {
                let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u32().unwrap();
                let (u8_, v8) = (m8(&u), m8(&v));
                let eps = |x: u32| ((x - 1) / 2) % 2;
                let omega = |x: u32| ((x * x - 1) / 8) % 2;
                let e = eps(u8_) * eps(v8) + alpha * omega(v8) + beta * omega(u8_);
                if e.is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            } else {
                let eps_p = ((p - 1) / 2) % 2;
                let mut s: i32 = if (alpha as u64 * beta as u64 * eps_p).is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                if beta % 2 == 1 {
                    s *= legendre(&u, p);
                }
                if alpha % 2 == 1 {
                    s *= legendre(&v, p);
                }
                s
            }
        }
    }
}

/// Inverse of `a` modulo `m` (m > 1), if it exists.
pub fn inv_mod_i128(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}

/// Extended gcd: (g, x, y) with a·x + b·y = g ≥ 0.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn to_i128(n: &BigInt) -> Option<i128> {
    n.to_i128()
}

pub fn primes_upto(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

/// Rows of a unimodular matrix W whose first k rows span the saturation of the
/// lattice spanned by the k given vectors, or `None` if they are linearly
/// dependent. Column-reduces the k×N matrix while tracking the inverse of the
/// accumulated column operations.
pub fn saturated_frame(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let n = rows.first()?.len();
    let k = rows.len();
    if k > n || rows.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut w: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    for r in 0..k {
        for j in (r + 1)..n {
            while !m[r][j].is_zero() {
                // col_r -= q·col_j on m, row_j += q·row_r on w, then swap
                let q = m[r][r].div_floor(&m[r][j]);
                for row in m.iter_mut() {
                    let t = &row[j] * &q;
                    row[r] -= t;
                }
                let add: Vec<BigInt> = w[r].iter().map(|v| v * &q).collect();
                for (x, a) in w[j].iter_mut().zip(add) {
                    *x += a;
                }
                for row in m.iter_mut() {
                    row.swap(r, j);
                }
                w.swap(r, j);
            }
        }
        if m[r][r].is_zero() {
            return None;
        }
    }
    Some(w)
}

/// A square root of a modulo an odd prime p (Tonelli–Shanks), if one exists.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}
