//! Rational points of projective space: canonical primitive representatives and
//! enumeration in order of height.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::Error;

/// A point of ℙⁿ(ℚ), stored as its unique primitive integer representative whose
/// first nonzero coordinate is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    /// Canonical representative of the point with the given rational coordinates.
    pub fn canonicalize(raw: &[BigRational]) -> Result<Self, Error> {
        if raw.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput("the zero vector is not a projective point".into()));
        }
        let lcm = raw.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = raw.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
        Self::from_integers(ints)
    }

    /// Canonical representative of the point with the given integer coordinates.
    pub fn from_integers(mut coords: Vec<BigInt>) -> Result<Self, Error> {
        let g = crate::arith::gcd_all(coords.iter());
        if g.is_zero() {
            return Err(Error::InvalidInput("the zero vector is not a projective point".into()));
        }
        let first_negative = coords.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative);
        for c in coords.iter_mut() {
            *c = &*c / &g;
            if first_negative {
                *c = -&*c;
            }
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_i64s(coords: &[i64]) -> Result<Self, Error> {
        Self::from_integers(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Builds from coordinates already known to be canonical. Debug builds check it.
    pub(crate) fn from_canonical(coords: Vec<BigInt>) -> Self {
        let p = ProjPoint { coords };
        debug_assert!(p.is_canonical());
        p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Projective dimension n of the ambient ℙⁿ.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// The usual O(1)-height: the largest absolute value of the coordinates.
    pub fn height(&self) -> BigInt {
        self.coords.iter().map(|c| c.abs()).max().unwrap()
    }

    pub fn is_canonical(&self) -> bool {
        let g = crate::arith::gcd_all(self.coords.iter());
        g == BigInt::from(1)
            && self
                .coords
                .iter()
                .find(|c| !c.is_zero())
                .is_some_and(Signed::is_positive)
    }

    /// Coordinates joined by ':', the key format used in reports.
    pub fn key(&self) -> String {
        self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(":")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

impl TryFrom<Vec<BigInt>> for ProjPoint {
    type Error = Error;
    fn try_from(coords: Vec<BigInt>) -> Result<Self, Error> {
        let p = ProjPoint { coords };
        if p.coords.is_empty() || !p.is_canonical() {
            return Err(Error::Representation(format!(
                "{p:?} is not a canonical projective point"
            )));
        }
        Ok(p)
    }
}

impl From<ProjPoint> for Vec<BigInt> {
    fn from(p: ProjPoint) -> Vec<BigInt> {
        p.coords
    }
}

// serialized as decimal strings so large coordinates survive JSON round trips
impl TryFrom<Vec<String>> for ProjPoint {
    type Error = Error;
    fn try_from(coords: Vec<String>) -> Result<Self, Error> {
        let ints = coords
            .iter()
            .map(|c| {
                c.parse::<BigInt>()
                    .map_err(|e| Error::Representation(format!("{c:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::try_from(ints)
    }
}

impl From<ProjPoint> for Vec<String> {
    fn from(p: ProjPoint) -> Vec<String> {
        p.coords.iter().map(|c| c.to_string()).collect()
    }
}

pub fn height(y: &ProjPoint) -> BigInt {
    y.height()
}

/// All canonical points of ℙⁿ(ℚ) of height exactly `h`, in lexicographic order.
pub fn shell(n: usize, h: u64) -> Vec<ProjPoint> {
    let mut out = Vec::new();
    if h == 0 {
        return out;
    }
    let h = h as i64;
    let mut buf = vec![0i64; n + 1];
    fill_shell(&mut buf, 0, h, false, false, &mut out);
    out
}

fn fill_shell(buf: &mut [i64], pos: usize, h: i64, seen_nonzero: bool, reached: bool, out: &mut Vec<ProjPoint>) {
    if pos == buf.len() {
        if reached {
            let g = buf.iter().fold(0i64, |acc, &c| acc.gcd(&c));
            if g == 1 {
                out.push(ProjPoint::from_canonical(
                    buf.iter().map(|&c| BigInt::from(c)).collect(),
                ));
            }
        }
        return;
    }
    let last = pos + 1 == buf.len();
    let lo = if seen_nonzero { -h } else { 0 };
    for c in lo..=h {
        let hits = c.abs() == h;
        if last && !reached && !hits {
            continue;
        }
        buf[pos] = c;
        fill_shell(buf, pos + 1, h, seen_nonzero || c != 0, reached || hits, out);
    }
}

/// Iterator over canonical points of ℙⁿ(ℚ) with height ≤ T, shell by shell.
pub struct BaseEnumerator {
    n: usize,
    max_height: u64,
    next_height: u64,
    pending: std::vec::IntoIter<ProjPoint>,
}

impl Iterator for BaseEnumerator {
    type Item = ProjPoint;
    fn next(&mut self) -> Option<ProjPoint> {
        loop {
            if let Some(p) = self.pending.next() {
                return Some(p);
            }
            if self.next_height > self.max_height {
                return None;
            }
            self.pending = shell(self.n, self.next_height).into_iter();
            self.next_height += 1;
        }
    }
}

/// Every point of ℙⁿ(ℚ) with height ≤ `max_height` exactly once, in nondecreasing
/// height order and lexicographically within a height.
pub fn enumerate_base(n: usize, max_height: u64) -> BaseEnumerator {
    BaseEnumerator {
        n,
        max_height,
        next_height: 1,
        pending: Vec::new().into_iter(),
    }
}
