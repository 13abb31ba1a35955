use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::Error;

/// A homogeneous integer polynomial in a fixed number of variables.
///
/// Terms are keyed by exponent vector; zero coefficients are never stored, so the
/// zero polynomial is the empty term map and may carry any declared degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        MultiPoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars, 0);
        p.add_term(vec![0; nvars], c).unwrap();
        p
    }

    /// The monomial c·∏ y_i^{e_i}.
    pub fn monomial(c: BigInt, exps: Vec<u32>) -> Self {
        let mut p = Self::zero(exps.len(), exps.iter().sum());
        p.add_term(exps, c).unwrap();
        p
    }

    /// Builds from (coefficient, exponents) pairs. Repeated exponent vectors are
    /// summed; every exponent vector must have `nvars` entries summing to `degree`.
    pub fn from_terms(
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (BigInt, Vec<u32>)>,
    ) -> Result<Self, Error> {
        let mut p = Self::zero(nvars, degree);
        for (c, e) in terms {
            p.add_term(e, c)?;
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) -> Result<(), Error> {
        if exps.len() != self.nvars {
            return Err(Error::InvalidInput(format!(
                "monomial {exps:?} has {} exponents, expected {}",
                exps.len(),
                self.nvars
            )));
        }
        let d: u32 = exps.iter().sum();
        if d != self.degree {
            return Err(Error::InvalidInput(format!(
                "monomial {exps:?} has degree {d}, expected {}",
                self.degree
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Sum of two polynomials. The degrees must agree unless one side is zero.
    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone()).unwrap();
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.nvars, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb).unwrap();
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars, self.degree);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c).unwrap();
        }
        out
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term *= x.pow(k);
                }
            }
            acc += term;
        }
        acc
    }

    /// Coefficients of p(1, u) for a binary form, lowest degree first.
    pub fn dehomogenize_binary(&self) -> Vec<BigRational> {
        assert_eq!(self.nvars, 2);
        let mut coeffs = vec![BigRational::zero(); self.degree as usize + 1];
        for (e, c) in &self.terms {
            coeffs[e[1] as usize] = BigRational::from_integer(c.clone());
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        coeffs
    }

    /// Content-free copy with positive leading term, for display-stable comparisons.
    pub fn content(&self) -> BigInt {
        crate::arith::gcd_all(self.terms.values())
    }
}

/// Determinant of a 3×3 matrix of forms, expanded along the first row.
pub fn det3(m: &[[MultiPoly; 3]; 3]) -> MultiPoly {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0].mul(&m[r1][c1]).sub(&m[r0][c1].mul(&m[r1][c0]));
    let t0 = m[0][0].mul(&minor(1, 2, 1, 2));
    let t1 = m[0][1].mul(&minor(1, 2, 0, 2));
    let t2 = m[0][2].mul(&minor(1, 2, 0, 1));
    t0.sub(&t1).add(&t2)
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("y{i}") } else { format!("y{i}^{k}") })
                .collect();
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Dense univariate polynomial arithmetic over ℚ, used for the squarefree test of
/// binary discriminants.
pub mod univariate {
    use super::*;

    fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
        while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        if p.is_empty() {
            p.push(BigRational::zero());
        }
        p
    }

    pub fn degree(p: &[BigRational]) -> Option<usize> {
        let p = trim(p.to_vec());
        if p.len() == 1 && p[0].is_zero() {
            None
        } else {
            Some(p.len() - 1)
        }
    }

    pub fn derivative(p: &[BigRational]) -> Vec<BigRational> {
        if p.len() <= 1 {
            return vec![BigRational::zero()];
        }
        trim(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let b = trim(b.to_vec());
        let db = degree(&b).expect("division by zero polynomial");
        let mut r = trim(a.to_vec());
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let factor = &r[dr] / &b[db];
            for (i, c) in b.iter().enumerate() {
                let idx = dr - db + i;
                r[idx] = &r[idx] - &factor * c;
            }
            r = trim(r);
        }
        r
    }

    /// Monic gcd (or zero).
    pub fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while degree(&b).is_some() {
            let r = rem(&a, &b);
            a = b;
            b = r;
        }
        if let Some(d) = degree(&a) {
            let lead = a[d].clone();
            a.iter().map(|c| c / &lead).collect()
        } else {
            a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn rejects_inhomogeneous_terms() {
        assert!(MultiPoly::from_terms(2, 2, [(b(1), vec![2, 0]), (b(1), vec![1, 0])]).is_err());
        assert!(MultiPoly::from_terms(2, 2, [(b(1), vec![2, 0, 0])]).is_err());
    }

    #[test]
    fn cancelling_terms_are_dropped() {
        let p = MultiPoly::from_terms(2, 1, [(b(3), vec![1, 0]), (b(-3), vec![1, 0])]).unwrap();
        assert!(p.is_zero());
        let q = MultiPoly::monomial(b(2), vec![1, 0]);
        assert!(q.sub(&q).is_zero());
    }

    #[test]
    fn eval_and_mul() {
        // (y0 + y1)(y0 - y1) = y0² - y1²
        let s = MultiPoly::from_terms(2, 1, [(b(1), vec![1, 0]), (b(1), vec![0, 1])]).unwrap();
        let d = MultiPoly::from_terms(2, 1, [(b(1), vec![1, 0]), (b(-1), vec![0, 1])]).unwrap();
        let p = s.mul(&d);
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.eval(&[b(5), b(3)]), b(16));
        assert_eq!(p.to_string(), "y0^2 - y1^2");
    }

    #[test]
    fn univariate_gcd_detects_repeated_roots() {
        let r = |v: &[i64]| v.iter().map(|&c| BigRational::from_integer(b(c))).collect::<Vec<_>>();
        // (u-1)²(u+2) = u³ - 3u + 2
        let p = r(&[2, -3, 0, 1]);
        let g = univariate::gcd(&p, &univariate::derivative(&p));
        assert_eq!(g, r(&[-1, 1]));
        let q = r(&[1, 0, 0, 1]);
        assert_eq!(
            univariate::degree(&univariate::gcd(&q, &univariate::derivative(&q))),
            Some(0)
        );
    }
}
