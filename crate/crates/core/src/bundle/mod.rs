//! The surface model: a bidegree-(e, 2) hypersurface in 𝔽ₙ(a₀, a₁, a₂), its
//! discriminant data, and the importer for cubic hypersurfaces containing a line.

mod import;
pub mod poly;
pub mod samples;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::conics::TernaryForm;
use crate::projgeo::ProjPoint;
use crate::Error;
pub use import::import_cubic_with_line;
pub use poly::MultiPoly;

/// X: Σ f_ij(y) x_i x_j = 0 in 𝔽ₙ(a₀, a₁, a₂), with deg f_ij = a_i + a_j + e.
///
/// Construction only checks the shape (entry count, variable count). Use
/// [`ConicBundleSurface::validate`] for the mathematical checks, or
/// [`ConicBundleSurface::validated`] to fail on the first report with a failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicBundleSurface {
    n: usize,
    a: [i64; 3],
    e: i64,
    gram: [[MultiPoly; 3]; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not computable by the engine and taken on trust from the user.
    Asserted,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// The discriminant, when the degree matrix allowed computing it.
    pub discriminant: Option<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// A fibre of the bundle over a canonical base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreClass {
    pub y: ProjPoint,
    pub form: TernaryForm,
    /// Δ(y), the determinant of `form`.
    pub disc: BigInt,
    /// Δ₀(y), the gcd of the 2×2 minors of `form` (0 if they all vanish).
    pub minors_gcd: BigInt,
}

impl FibreClass {
    pub fn is_singular(&self) -> bool {
        self.disc.is_zero()
    }
}

impl ConicBundleSurface {
    /// Assembles a surface from the upper triangle f00, f01, f02, f11, f12, f22.
    pub fn from_upper(n: usize, a: [i64; 3], e: i64, upper: [MultiPoly; 6]) -> Result<Self, Error> {
        let [f00, f01, f02, f11, f12, f22] = upper;
        let gram = [
            [f00, f01.clone(), f02.clone()],
            [f01, f11, f12.clone()],
            [f02, f12, f22],
        ];
        Self::new(n, a, e, gram)
    }

    pub fn new(n: usize, a: [i64; 3], e: i64, gram: [[MultiPoly; 3]; 3]) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidInput("the base dimension n must be at least 1".into()));
        }
        for (i, row) in gram.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if f.nvars() != n + 1 {
                    return Err(Error::InvalidInput(format!(
                        "f{i}{j} has {} variables, expected {}",
                        f.nvars(),
                        n + 1
                    )));
                }
            }
        }
        Ok(ConicBundleSurface { n, a, e, gram })
    }

    /// Same as [`ConicBundleSurface::new`] followed by [`ConicBundleSurface::validate`],
    /// failing if any check fails.
    pub fn validated(n: usize, a: [i64; 3], e: i64, gram: [[MultiPoly; 3]; 3]) -> Result<Self, Error> {
        let s = Self::new(n, a, e, gram)?;
        let report = s.validate();
        if !report.passed() {
            let msgs: Vec<String> = report.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
            return Err(Error::Validation(msgs.join("; ")));
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> [i64; 3] {
        self.a
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn gram(&self) -> &[[MultiPoly; 3]; 3] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.gram[i][j]
    }

    /// The degree a_i + a_j + e required of f_ij.
    pub fn expected_degree(&self, i: usize, j: usize) -> i64 {
        self.a[i] + self.a[j] + self.e
    }

    /// 2(a₀ + a₁ + a₂) + 3e.
    pub fn discriminant_degree(&self) -> i64 {
        2 * self.a.iter().sum::<i64>() + 3 * self.e
    }

    fn degree_mismatches(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for i in 0..3 {
            for j in i..3 {
                let f = &self.gram[i][j];
                let want = self.expected_degree(i, j);
                if !f.is_zero() && i64::from(f.degree()) != want {
                    bad.push(format!("f{i}{j} has degree {}, expected {want}", f.degree()));
                }
            }
        }
        bad
    }

    /// Runs every check and reports each one; never stops at the first failure.
    pub fn validate(&self) -> ValidationReport {
        fn push(checks: &mut Vec<Check>, name: &'static str, ok: bool, detail: String) {
            checks.push(Check {
                name,
                status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
                detail,
            })
        }
        let mut checks = Vec::new();

        let [a0, a1, a2] = self.a;
        push(
            &mut checks,
            "weights-ordered",
            a0 <= a1 && a1 <= a2,
            format!("a = ({a0}, {a1}, {a2})"),
        );

        let bad_degrees = self.degree_mismatches();
        let degrees_ok = bad_degrees.is_empty();
        push(
            &mut checks,
            "degree-matrix",
            degrees_ok,
            if degrees_ok {
                "all entries have degree a_i + a_j + e".into()
            } else {
                bad_degrees.join("; ")
            },
        );

        let mut asym = Vec::new();
        for i in 0..3 {
            for j in (i + 1)..3 {
                if self.gram[i][j] != self.gram[j][i] {
                    asym.push(format!("f{i}{j} != f{j}{i}"));
                }
            }
        }
        push(
            &mut checks,
            "symmetry",
            asym.is_empty(),
            if asym.is_empty() {
                "f_ij = f_ji".into()
            } else {
                asym.join("; ")
            },
        );

        let mut discriminant = None;
        if degrees_ok && asym.is_empty() {
            let delta = self.discriminant();
            discriminant = Some(delta.to_string());
            push(
                &mut checks,
                "discriminant-nonzero",
                !delta.is_zero(),
                if delta.is_zero() {
                    "Δ is the zero polynomial".into()
                } else {
                    format!("Δ = {delta}")
                },
            );
            if !delta.is_zero() {
                let want = self.discriminant_degree();
                push(
                    &mut checks,
                    "discriminant-degree",
                    i64::from(delta.degree()) == want,
                    format!("deg Δ = {}, 2(a0+a1+a2)+3e = {want}", delta.degree()),
                );
                if self.n == 1 {
                    let (ok, detail) = binary_squarefree(&delta);
                    push(&mut checks, "discriminant-squarefree", ok, detail);
                } else {
                    checks.push(Check {
                        name: "discriminant-squarefree",
                        status: CheckStatus::Asserted,
                        detail: "not checked for n > 1".into(),
                    });
                }
            }
        } else {
            push(
                &mut checks,
                "discriminant-nonzero",
                false,
                "not computed: degree matrix or symmetry check failed".into(),
            );
        }
        checks.push(Check {
            name: "smoothness",
            status: CheckStatus::Asserted,
            detail: "smoothness of X is taken on trust".into(),
        });

        ValidationReport { checks, discriminant }
    }

    /// Δ = det(f_ij), homogeneous of degree 2(a₀+a₁+a₂)+3e unless zero.
    pub fn discriminant(&self) -> MultiPoly {
        let delta = poly::det3(&self.gram);
        if delta.is_zero() {
            MultiPoly::zero(self.n + 1, self.discriminant_degree().max(0) as u32)
        } else {
            delta
        }
    }

    /// Gram matrix of the fibre conic over the canonical representative of y.
    pub fn fibre_form(&self, y: &ProjPoint) -> Result<TernaryForm, Error> {
        if y.coords().len() != self.n + 1 {
            return Err(Error::InvalidInput(format!(
                "base point {y} does not lie in P^{}",
                self.n
            )));
        }
        let g = std::array::from_fn(|i| std::array::from_fn(|j| self.gram[i][j].eval(y.coords())));
        TernaryForm::new(g)
    }

    pub fn fibre_class(&self, y: &ProjPoint) -> Result<FibreClass, Error> {
        let form = self.fibre_form(y)?;
        let disc = form.det();
        let minors_gcd = form.minors_gcd();
        Ok(FibreClass {
            y: y.clone(),
            form,
            disc,
            minors_gcd,
        })
    }
}

/// Squarefree test for a nonzero binary form Δ(y₀, y₁).
fn binary_squarefree(delta: &MultiPoly) -> (bool, String) {
    use poly::univariate;
    let p = delta.dehomogenize_binary();
    let affine_degree = univariate::degree(&p).unwrap_or(0);
    let drop = delta.degree() as usize - affine_degree;
    if drop > 1 {
        return (false, format!("y0^{drop} divides Δ"));
    }
    let g = univariate::gcd(&p, &univariate::derivative(&p));
    match univariate::degree(&g) {
        Some(0) | None => (true, "Δ is squarefree".into()),
        Some(d) => (false, format!("Δ has a repeated factor of degree {d}")),
    }
}

impl std::fmt::Display for ConicBundleSurface {
    /// `F_n(a0,a1,a2) e=E [f00; f01; f02; f11; f12; f22]`, stable across runs.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a0, a1, a2] = self.a;
        write!(f, "F_{}({a0},{a1},{a2}) e={} [", self.n, self.e)?;
        let upper = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
        for (k, (i, j)) in upper.into_iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", self.gram[i][j])?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;
    use samples::{cubic_surface, linear_surface, main_surface, twisted_surface};

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn mono(c: i64, e: &[u32]) -> MultiPoly {
        MultiPoly::monomial(b(c), e.to_vec())
    }

    fn zero(d: u32) -> MultiPoly {
        MultiPoly::zero(2, d)
    }

    #[test]
    fn validate_main_surface() {
        let s = main_surface();
        let r = s.validate();
        assert!(r.passed(), "{r:?}");
        assert_eq!(s.discriminant(), mono(-1, &[1, 1]));
        assert_eq!(s.discriminant().degree(), 2);
    }

    #[test]
    fn validate_cubic_surface() {
        let s = cubic_surface();
        assert!(s.validate().passed());
        let delta = s.discriminant();
        // y0·y1·(y0³ + y1³) expanded independently
        let expect = mono(1, &[4, 1]).add(&mono(1, &[1, 4]));
        assert_eq!(delta, expect);
        assert_eq!(delta.degree(), 5);
    }

    #[test]
    fn repeated_factor_fails() {
        let s = ConicBundleSurface::from_upper(
            1,
            [0, 0, 1],
            0,
            [
                mono(1, &[0, 0]),
                zero(0),
                zero(1),
                mono(1, &[0, 0]),
                zero(1),
                mono(1, &[2, 0]),
            ],
        )
        .unwrap();
        let r = s.validate();
        assert!(!r.passed());
        assert_eq!(r.check("discriminant-squarefree").unwrap().status, CheckStatus::Fail);
        // the other checks still ran and passed
        assert_eq!(r.check("discriminant-degree").unwrap().status, CheckStatus::Pass);
    }

    #[test]
    fn zero_row_is_rejected() {
        let s = ConicBundleSurface::from_upper(
            1,
            [0, 0, 1],
            0,
            [mono(1, &[0, 0]), zero(0), zero(1), mono(1, &[0, 0]), zero(1), zero(2)],
        )
        .unwrap();
        assert!(s.discriminant().is_zero());
        let r = s.validate();
        assert_eq!(r.check("discriminant-nonzero").unwrap().status, CheckStatus::Fail);
    }

    #[test]
    fn wrong_degree_names_the_entry() {
        let s = ConicBundleSurface::from_upper(
            1,
            [0, 0, 1],
            0,
            [
                mono(1, &[1, 0]),
                zero(0),
                zero(1),
                mono(1, &[0, 0]),
                zero(1),
                mono(-1, &[1, 1]),
            ],
        )
        .unwrap();
        let r = s.validate();
        let c = r.check("degree-matrix").unwrap();
        assert_eq!(c.status, CheckStatus::Fail);
        assert!(c.detail.contains("f00"), "{}", c.detail);
        assert!(ConicBundleSurface::validated(1, s.a(), s.e(), s.gram().clone()).is_err());
    }

    #[test]
    fn fibre_class_examples() {
        let s = main_surface();
        let f = s.fibre_class(&ProjPoint::from_i64s(&[1, 5]).unwrap()).unwrap();
        assert_eq!(f.form, TernaryForm::diagonal(1, 1, -5));
        assert_eq!(f.disc, b(-5));
        assert_eq!(f.minors_gcd, b(1));
        let f = s.fibre_class(&ProjPoint::from_i64s(&[1, 0]).unwrap()).unwrap();
        assert!(f.is_singular());
    }

    #[test]
    fn sample_surfaces_validate() {
        for s in [main_surface(), cubic_surface(), twisted_surface(), linear_surface()] {
            assert!(s.validate().passed(), "{:?}", s.validate());
        }
    }

    proptest! {
        #[test]
        fn minors_gcd_cubed_divides_disc_squared(y0 in 0i64..500, y1 in -500i64..500) {
            prop_assume!(y0 != 0 || y1 != 0);
            let y = ProjPoint::from_i64s(&[y0, y1]).unwrap();
            for s in [main_surface(), cubic_surface(), twisted_surface(), linear_surface()] {
                let f = s.fibre_class(&y).unwrap();
                if !f.is_singular() {
                    let d0 = &f.minors_gcd;
                    prop_assert!((&f.disc * &f.disc).is_multiple_of(&(d0 * d0 * d0)));
                }
            }
        }

        #[test]
        fn fibre_form_depends_only_on_the_point(y0 in 1i64..50, y1 in -50i64..50, k in 2i64..6) {
            let s = twisted_surface();
            let y = ProjPoint::from_i64s(&[y0, y1]).unwrap();
            let scaled = ProjPoint::from_i64s(&[k * y0, k * y1]).unwrap();
            prop_assert_eq!(s.fibre_form(&y).unwrap(), s.fibre_form(&scaled).unwrap());
        }
    }

    #[test]
    fn discriminant_degree_formula() {
        for s in [main_surface(), cubic_surface(), twisted_surface(), linear_surface()] {
            assert_eq!(i64::from(s.discriminant().degree()), s.discriminant_degree());
        }
    }
}
