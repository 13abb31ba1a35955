//! p-adic densities of a ternary quadratic form.
//!
//! σ_p = lim N(pⁿ)/p²ⁿ, where N(pⁿ) counts x mod pⁿ with x ≢ 0 mod p and
//! Q(x) ≡ 0 mod pⁿ. Two exact routes:
//!
//! * class lifting: refine residue classes x₀ + pʲℤ_p³ until the gradient 2Gx₀
//!   has valuation m < j; such a class then contributes in closed form;
//! * Jordan splitting (odd p): diagonalize over ℤ_(p) and run a finite recursion
//!   on the exponent pattern.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, legendre, valuation};
use crate::conics::TernaryForm;
use crate::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaMethod {
    /// Class lifting below `LIFT_LIMIT`, Jordan splitting above.
    #[default]
    Auto,
    Lift,
    Jordan,
}

/// Largest prime handled by class lifting under `SigmaMethod::Auto`; the root
/// level alone has p³ − 1 classes.
pub const LIFT_LIMIT: u64 = 50;

fn check_prime(p: u64) -> Result<(), Error> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{p} is not prime")))
    }
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn pow(p: u64, e: u32) -> BigInt {
    Pow::pow(big(p), e)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

struct Lifter<'a> {
    g: &'a [[BigInt; 3]; 3],
    p: u64,
}

impl Lifter<'_> {
    fn q(&self, x: &[BigInt; 3]) -> BigInt {
        let mut s = BigInt::zero();
        for i in 0..3 {
            for j in 0..3 {
                s += &self.g[i][j] * &x[i] * &x[j];
            }
        }
        s
    }

    /// Valuation of the gradient 2Gx if it is below j, else None.
    fn gradient_valuation(&self, x: &[BigInt; 3], j: u32) -> Option<u32> {
        (0..3)
            .filter_map(|i| {
                let gi: BigInt = (0..3).map(|k| &self.g[i][k] * &x[k]).sum::<BigInt>() * 2;
                valuation(&gi, self.p)
            })
            .filter(|&v| v < j)
            .min()
    }

    fn children(&self, x: &[BigInt; 3], j: u32) -> Vec<[BigInt; 3]> {
        let pj = pow(self.p, j);
        let mut out = Vec::with_capacity((self.p * self.p * self.p) as usize);
        for a in 0..self.p {
            for b in 0..self.p {
                for c in 0..self.p {
                    out.push([&x[0] + &pj * big(a), &x[1] + &pj * big(b), &x[2] + &pj * big(c)]);
                }
            }
        }
        out
    }

    fn roots(&self) -> Vec<[BigInt; 3]> {
        self.children(&[BigInt::zero(), BigInt::zero(), BigInt::zero()], 0)
            .into_iter()
            .filter(|x| !x.iter().all(Zero::is_zero))
            .collect()
    }

    /// Number of x in the class x₀ + pʲ(ℤ/p^{n−j})³ with Q(x) ≡ 0 mod pⁿ.
    fn count(&self, x: &[BigInt; 3], j: u32, n: u32) -> BigInt {
        let qx = self.q(x);
        if j == n {
            return if qx.is_multiple_of(&pow(self.p, n)) {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        match self.gradient_valuation(x, j) {
            Some(m) if j + m <= n => {
                if qx.is_multiple_of(&pow(self.p, j + m)) {
                    pow(self.p, 2 * (n - j) + m)
                } else {
                    BigInt::zero()
                }
            }
            Some(_) => self.children(x, j).iter().map(|c| self.count(c, j + 1, n)).sum(),
            None => {
                if !qx.is_multiple_of(&pow(self.p, (2 * j).min(n))) {
                    return BigInt::zero();
                }
                self.children(x, j).iter().map(|c| self.count(c, j + 1, n)).sum()
            }
        }
    }

    /// Limit density of the class x₀ + pʲℤ_p³.
    fn density(&self, x: &[BigInt; 3], j: u32) -> BigRational {
        let qx = self.q(x);
        match self.gradient_valuation(x, j) {
            Some(m) => {
                if qx.is_multiple_of(&pow(self.p, j + m)) {
                    ratio(pow(self.p, m), pow(self.p, 2 * j))
                } else {
                    BigRational::zero()
                }
            }
            None => {
                if !qx.is_multiple_of(&pow(self.p, 2 * j)) {
                    return BigRational::zero();
                }
                self.children(x, j).iter().map(|c| self.density(c, j + 1)).sum()
            }
        }
    }
}

/// N(pⁿ) = #{x mod pⁿ : x ≢ 0 mod p, Q(x) ≡ 0 mod pⁿ}.
pub fn count_mod_prime_power(form: &TernaryForm, p: u64, n: u32) -> Result<BigInt, Error> {
    check_prime(p)?;
    form.require_nondegenerate()?;
    if n == 0 {
        return Err(Error::InvalidInput("exponent must be positive".into()));
    }
    let l = Lifter { g: form.gram(), p };
    Ok(l.roots().iter().map(|x| l.count(x, 1, n)).sum())
}

/// Result of the level-by-level stopping rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableLevel {
    pub value: BigRational,
    /// The level n at which N(pⁿ⁺¹) = p²N(pⁿ) first held past 2v_p(Δ) + 1.
    pub level: u32,
    /// (k, N(pᵏ)) for every level computed, including the audit level.
    pub counts: Vec<(u32, BigInt)>,
}

/// σ_p as N(pⁿ)/p²ⁿ at the first n > 2v_p(Δ) + 1 with N(pⁿ⁺¹) = p²N(pⁿ); the next
/// level is checked as well.
pub fn sigma_p_stable(form: &TernaryForm, p: u64) -> Result<StableLevel, Error> {
    check_prime(p)?;
    form.require_nondegenerate()?;
    let v = valuation(&form.det(), p).unwrap_or(0);
    let p2 = big(p * p);
    let mut n = 2 * v + 2;
    let mut counts = vec![(n, count_mod_prime_power(form, p, n)?)];
    loop {
        let next = count_mod_prime_power(form, p, n + 1)?;
        counts.push((n + 1, next.clone()));
        let current = &counts[counts.len() - 2].1;
        if next == current * &p2 {
            let audit = count_mod_prime_power(form, p, n + 2)?;
            counts.push((n + 2, audit.clone()));
            if audit != &next * &p2 {
                return Err(Error::Internal(format!(
                    "N({p}^k) not stable after level {n} on {form}"
                )));
            }
            let value = ratio(counts[counts.len() - 3].1.clone(), pow(p, 2 * n));
            return Ok(StableLevel {
                value,
                level: n,
                counts,
            });
        }
        n += 1;
        if n > 2 * v + 64 {
            return Err(Error::Internal(format!("no stable level for p = {p} on {form}")));
        }
    }
}

/// Exponent and unit square class of each diagonal entry over ℤ_(p).
fn jordan_splitting(form: &TernaryForm, p: u64) -> Result<[(u32, i32); 3], Error> {
    let vr = |r: &BigRational| -> Option<i64> {
        if r.is_zero() {
            return None;
        }
        Some(valuation(r.numer(), p).unwrap() as i64 - valuation(r.denom(), p).unwrap() as i64)
    };
    let mut g: Vec<Vec<BigRational>> = form
        .gram()
        .iter()
        .map(|row| row.iter().map(|c| BigRational::from_integer(c.clone())).collect())
        .collect();
    let mut out = Vec::new();
    while !g.is_empty() {
        let k = g.len();
        let best = (0..k)
            .flat_map(|i| (i..k).map(move |j| (i, j)))
            .filter_map(|(i, j)| vr(&g[i][j]).map(|v| (v, i != j, i, j)))
            .min()
            .ok_or_else(|| Error::Internal("degenerate block in the Jordan splitting".into()))?;
        let (_, off, i, j) = best;
        if off {
            // e_i ← e_i + e_j makes the pivot diagonal; p is odd so 2g_ij keeps its valuation
            for r in 0..k {
                let add = g[r][j].clone();
                g[r][i] += add;
            }
            for c in 0..k {
                let add = g[j][c].clone();
                g[i][c] += add;
            }
        }
        let piv = g[i][i].clone();
        let rest: Vec<usize> = (0..k).filter(|&r| r != i).collect();
        let next: Vec<Vec<BigRational>> = rest
            .iter()
            .map(|&r| rest.iter().map(|&c| &g[r][c] - &g[r][i] * &g[i][c] / &piv).collect())
            .collect();
        let e = vr(&piv).unwrap();
        if e < 0 {
            return Err(Error::Internal("negative valuation in the Jordan splitting".into()));
        }
        let unit = piv.numer() * piv.denom() / pow(p, e as u32);
        out.push((e as u32, legendre(&unit, p)));
        g = next;
    }
    Ok([out[0], out[1], out[2]])
}

fn jordan_density(split: [(u32, i32); 3], p: u64) -> BigRational {
    let pr = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(pow(p, e as u32))
        } else {
            ratio(BigInt::one(), pow(p, (-e) as u32))
        }
    };
    let chi_minus_one: i32 = if p % 4 == 1 { 1 } else { -1 };
    let mut exps: [u32; 3] = std::array::from_fn(|i| split[i].0);
    let chi: [i32; 3] = std::array::from_fn(|i| split[i].1);

    // δ(N_i) = A_i + R_i·δ(N_{i+1}) along the chain of normalized exponent patterns
    let m0 = *exps.iter().min().unwrap();
    let prefactor = pr(m0 as i64);
    let mut states: Vec<[u32; 3]> = Vec::new();
    let mut a: Vec<BigRational> = Vec::new();
    let mut r: Vec<BigRational> = Vec::new();
    let cycle_start = loop {
        let m = *exps.iter().min().unwrap();
        for e in exps.iter_mut() {
            *e -= m;
        }
        if let Some(pos) = states.iter().position(|s| *s == exps) {
            break pos;
        }
        states.push(exps);
        let units: Vec<usize> = (0..3).filter(|&i| exps[i] == 0).collect();
        let k = units.len() as i64;
        let nu: BigInt = match units.len() {
            1 => BigInt::zero(),
            2 => big(p - 1) * (1 + chi_minus_one * chi[units[0]] * chi[units[1]]),
            _ => big(p * p - 1),
        };
        a.push(BigRational::from_integer(nu) * pr(1 - k));
        for &i in &units {
            exps[i] += 2;
        }
        let m_next = *exps.iter().min().unwrap();
        r.push(pr(m_next as i64 - k));
    };
    let sum_chain = |from: usize, to: usize| -> (BigRational, BigRational) {
        let mut acc = BigRational::zero();
        let mut mult = BigRational::one();
        for i in from..to {
            acc += &mult * &a[i];
            mult *= &r[i];
        }
        (acc, mult)
    };
    let (c_cycle, r_cycle) = sum_chain(cycle_start, states.len());
    let delta_cycle = c_cycle / (BigRational::one() - r_cycle);
    let (c_head, r_head) = sum_chain(0, cycle_start);
    prefactor * (c_head + r_head * delta_cycle)
}

/// σ_p of the fibre conic Q = 0.
pub fn sigma_p_form(form: &TernaryForm, p: u64, method: SigmaMethod) -> Result<BigRational, Error> {
    check_prime(p)?;
    form.require_nondegenerate()?;
    let method = match method {
        SigmaMethod::Auto if p < LIFT_LIMIT => SigmaMethod::Lift,
        SigmaMethod::Auto => SigmaMethod::Jordan,
        m => m,
    };
    match method {
        SigmaMethod::Jordan => {
            if p == 2 {
                return Err(Error::InvalidInput("the Jordan route needs an odd prime".into()));
            }
            let split = jordan_splitting(form, p)?;
            Ok(ratio(big(p - 1), big(p)) * jordan_density(split, p))
        }
        _ => {
            let l = Lifter { g: form.gram(), p };
            Ok(l.roots().iter().map(|x| l.density(x, 1)).sum())
        }
    }
}

/// 1 − p⁻², the density at a prime of good reduction.
pub fn good_density(p: u64) -> BigRational {
    ratio(big(p * p - 1), big(p * p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        ratio(BigInt::from(n), BigInt::from(d))
    }

    fn brute(form: &TernaryForm, p: u64, n: u32) -> u64 {
        let m = p.pow(n) as i64;
        let g = form.to_i128().unwrap();
        let mut c = 0;
        for a in 0..m {
            for b in 0..m {
                for d in 0..m {
                    let x = [a as i128, b as i128, d as i128];
                    if x.iter().all(|v| v % p as i128 == 0) {
                        continue;
                    }
                    let q: i128 = (0..3)
                        .flat_map(|i| (0..3).map(move |j| (i, j)))
                        .map(|(i, j)| g[i][j] * x[i] * x[j])
                        .sum();
                    if q % m as i128 == 0 {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn eight_has_sixty_four() {
        let q = TernaryForm::diagonal(1, 1, -5);
        assert_eq!(count_mod_prime_power(&q, 2, 3).unwrap(), BigInt::from(64));
        assert_eq!(sigma_p_form(&q, 2, SigmaMethod::Auto).unwrap(), r(1, 1));
        assert_eq!(sigma_p_stable(&q, 2).unwrap().value, r(1, 1));
    }

    #[test]
    fn examples_at_odd_primes() {
        let q = TernaryForm::diagonal(1, 1, -5);
        for m in [SigmaMethod::Lift, SigmaMethod::Jordan] {
            assert_eq!(sigma_p_form(&q, 5, m).unwrap(), r(8, 5));
            assert_eq!(sigma_p_form(&q, 3, m).unwrap(), r(8, 9));
        }
        assert_eq!(sigma_p_stable(&q, 5).unwrap().value, r(8, 5));
    }

    #[test]
    fn class_counts_match_brute_force() {
        for (form, p, n) in [
            (TernaryForm::diagonal(1, 1, -5), 2, 3),
            (TernaryForm::diagonal(1, 1, -5), 5, 2),
            (TernaryForm::diagonal(3, 9, -2), 3, 3),
            (TernaryForm::from_i64([[2, 1, 0], [1, 4, 2], [0, 2, 8]]).unwrap(), 2, 4),
            (TernaryForm::diagonal(4, 1, -8), 2, 4),
        ] {
            assert_eq!(
                count_mod_prime_power(&form, p, n).unwrap(),
                BigInt::from(brute(&form, p, n)),
                "{form} p={p} n={n}"
            );
        }
    }

    #[test]
    fn rejects_composite() {
        assert!(matches!(
            sigma_p_form(&TernaryForm::diagonal(1, 1, -1), 9, SigmaMethod::Auto),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn insoluble_locally_is_zero() {
        // x² + y² = 3z² has no primitive zero mod 9 with x, y, z not all ≡ 0 mod 3
        let q = TernaryForm::diagonal(1, 1, -3);
        assert_eq!(sigma_p_form(&q, 3, SigmaMethod::Lift).unwrap(), BigRational::zero());
        assert_eq!(sigma_p_form(&q, 3, SigmaMethod::Jordan).unwrap(), BigRational::zero());
    }

    fn small_form() -> impl Strategy<Value = TernaryForm> {
        proptest::array::uniform6(-30i64..30)
            .prop_map(|[a, b, c, d, e, f]| TernaryForm::from_i64([[a, b, c], [b, d, e], [c, e, f]]).unwrap())
            .prop_filter("nondegenerate", |q| q.is_nondegenerate())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn routes_agree(q in small_form(), idx in 0usize..5) {
            let p = [3u64, 5, 7, 11, 13][idx];
            prop_assert_eq!(sigma_p_form(&q, p, SigmaMethod::Lift).unwrap(), sigma_p_form(&q, p, SigmaMethod::Jordan).unwrap());
        }

        #[test]
        fn limit_matches_stopping_rule(q in small_form(), idx in 0usize..3) {
            let p = [2u64, 3, 5][idx];
            prop_assert_eq!(sigma_p_stable(&q, p).unwrap().value, sigma_p_form(&q, p, SigmaMethod::Lift).unwrap());
        }

        #[test]
        fn good_primes_are_generic(q in small_form()) {
            let det = q.det();
            let good: Vec<u64> = [3u64, 5, 7, 11, 13, 17, 19, 23].into_iter().filter(|&p| !det.is_multiple_of(&BigInt::from(p))).take(3).collect();
            for p in good {
                prop_assert_eq!(sigma_p_form(&q, p, SigmaMethod::Lift).unwrap(), good_density(p));
            }
        }

        #[test]
        fn unit_scaling_invariant(q in small_form(), u in 1i64..6) {
            let p = 7u64;
            prop_assume!(u % 7 != 0);
            let scaled = q.scaled(&BigInt::from(u));
            prop_assert_eq!(sigma_p_form(&q, p, SigmaMethod::Auto).unwrap(), sigma_p_form(&scaled, p, SigmaMethod::Auto).unwrap());
        }
    }
}
