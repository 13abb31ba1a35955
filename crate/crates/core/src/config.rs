//! TOML run configuration.
//!
//! ```toml
//! [surface]
//! n = 1
//! a = [0, 0, 1]
//! e = 0
//!
//! [surface.gram]          # upper triangle; each entry is a list of [coefficient, [exponents]]
//! f00 = [[1, [0, 0]]]
//! f11 = [[1, [0, 0]]]
//! f22 = [[-1, [1, 1]]]    # missing entries are zero
//!
//! [model]
//! alpha = "1"             # exact fraction, e.g. "5/3"
//!
//! [run]
//! bound = "1000000"
//! strategy = "parametrized"
//!
//! [output]
//! json = "report.json"
//! csv = "report.csv"
//! ```
//!
//! Coefficients and exact numbers may be TOML integers or decimal strings; strings
//! carry arbitrary precision. `[cubic]` holds the input of `import-cubic`: `vars`,
//! `terms` in the same format as a Gram entry, and `line`, two points as lists of
//! integers.

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bundle::{CheckStatus, ConicBundleSurface, MultiPoly};
use crate::conics::Strategy;
use crate::heights::{HeightModel, Regime};
use crate::localdata::SigmaMethod;
use crate::projgeo::ProjPoint;
use crate::Error;

/// An integer written either as a TOML integer or as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Int {
    Small(i64),
    Big(String),
}

impl Int {
    pub fn to_bigint(&self) -> Result<BigInt, Error> {
        match self {
            Int::Small(v) => Ok(BigInt::from(*v)),
            Int::Big(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::ConfigSemantic(format!("{s:?} is not an integer"))),
        }
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(s) => Int::Small(s),
            None => Int::Big(v.to_string()),
        }
    }
}

/// A monomial c·y^e.
pub type Term = (Int, Vec<u32>);

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f00: Vec<Term>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f01: Vec<Term>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f02: Vec<Term>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f11: Vec<Term>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f12: Vec<Term>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f22: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub n: usize,
    pub a: [i64; 3],
    pub e: i64,
    pub gram: GramSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub alpha: String,
    /// "curve" or "general"; defaults to the natural regime for n.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<String>>,
    /// Base height bound for Peyre sums.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Strategy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_method: Option<SigmaMethod>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// A base point, for `fibre` and `density`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// Fibres left out of U in addition to Δ = 0.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exclude: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubicSpec {
    pub vars: usize,
    pub terms: Vec<Term>,
    pub line: [Vec<Int>; 2],
}

/// The document as written. Everything in it has been checked by [`parse_config`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub run: RunSpec,
    #[serde(default, skip_serializing_if = "is_default")]
    pub output: OutputSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubic: Option<CubicSpec>,
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, Error> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        Error::ConfigSyntax {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    if let Some(s) = cfg.surface()? {
        if let Some(m) = &cfg.model {
            build_model(&s, m)?;
        }
    }
    if let Some(c) = &cfg.cubic {
        build_cubic(c)?;
    }
    cfg.bound()?;
    cfg.grid()?;
    cfg.y()?;
    cfg.exclude()?;
    Ok(cfg)
}

pub fn load_config(path: &std::path::Path) -> Result<(RunConfig, String), Error> {
    let text = std::fs::read_to_string(path)?;
    Ok((parse_config(&text)?, text))
}

fn build_poly(name: &str, nvars: usize, terms: &[Term], fallback_degree: i64) -> Result<MultiPoly, Error> {
    if terms.is_empty() {
        return Ok(MultiPoly::zero(nvars, fallback_degree.max(0) as u32));
    }
    let mut parsed = Vec::with_capacity(terms.len());
    for (c, e) in terms {
        if e.len() != nvars {
            return Err(Error::ConfigSemantic(format!(
                "{name}: exponent vector {e:?} needs {nvars} entries"
            )));
        }
        parsed.push((c.to_bigint()?, e.clone()));
    }
    let degree = parsed[0].1.iter().sum();
    MultiPoly::from_terms(nvars, degree, parsed).map_err(|e| Error::ConfigSemantic(format!("{name}: {e}")))
}

fn poly_terms(f: &MultiPoly) -> Vec<Term> {
    f.terms().map(|(e, c)| (Int::from_bigint(c), e.clone())).collect()
}

fn build_surface(s: &SurfaceSpec) -> Result<ConicBundleSurface, Error> {
    let g = &s.gram;
    let entries = [
        ("f00", &g.f00, 0, 0),
        ("f01", &g.f01, 0, 1),
        ("f02", &g.f02, 0, 2),
        ("f11", &g.f11, 1, 1),
        ("f12", &g.f12, 1, 2),
        ("f22", &g.f22, 2, 2),
    ];
    let mut upper = Vec::new();
    for (name, terms, i, j) in entries {
        let want = s.a[i] + s.a[j] + s.e;
        let f = build_poly(name, s.n + 1, terms, want)?;
        if !f.is_zero() && i64::from(f.degree()) != want {
            return Err(Error::ConfigSemantic(format!(
                "gram entry ({i}, {j}) has degree {}, expected a{i} + a{j} + e = {want}",
                f.degree()
            )));
        }
        upper.push(f);
    }
    let upper: [MultiPoly; 6] = upper.try_into().expect("six entries");
    let surface =
        ConicBundleSurface::from_upper(s.n, s.a, s.e, upper).map_err(|e| Error::ConfigSemantic(e.to_string()))?;
    let report = surface.validate();
    let failures: Vec<String> = report
        .checks
        .iter()
        .filter(|c| c.status == CheckStatus::Fail)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    if !failures.is_empty() {
        return Err(Error::ConfigSemantic(format!(
            "surface fails validation: {}",
            failures.join("; ")
        )));
    }
    Ok(surface)
}

/// Exact α from "p/q" or "p".
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::ConfigSemantic(format!("{s:?} is not an exact fraction"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn build_model(surface: &ConicBundleSurface, m: &ModelSpec) -> Result<HeightModel, Error> {
    let alpha = parse_rational(&m.alpha)?;
    let regime = match m.regime.as_deref() {
        None => None,
        Some("curve") => Some(Regime::Curve),
        Some("general") => Some(Regime::General),
        Some(other) => {
            return Err(Error::ConfigSemantic(format!(
                "unknown regime {other:?}; expected curve or general"
            )))
        }
    };
    let built = match regime {
        None => HeightModel::new(surface, alpha),
        Some(r) => HeightModel::with_regime(surface, alpha, r),
    };
    built.map_err(|e| Error::ConfigSemantic(e.to_string()))
}

fn build_point(name: &str, coords: &[Int]) -> Result<ProjPoint, Error> {
    let ints = coords.iter().map(Int::to_bigint).collect::<Result<Vec<_>, _>>()?;
    ProjPoint::from_integers(ints).map_err(|e| Error::ConfigSemantic(format!("{name}: {e}")))
}

fn build_cubic(c: &CubicSpec) -> Result<(MultiPoly, ProjPoint, ProjPoint), Error> {
    let f = build_poly("cubic", c.vars, &c.terms, 3)?;
    if f.degree() != 3 {
        return Err(Error::ConfigSemantic(format!("cubic has degree {}", f.degree())));
    }
    Ok((
        f,
        build_point("line[0]", &c.line[0])?,
        build_point("line[1]", &c.line[1])?,
    ))
}

impl RunConfig {
    /// The validated surface, if the document has one.
    pub fn surface(&self) -> Result<Option<ConicBundleSurface>, Error> {
        self.surface.as_ref().map(build_surface).transpose()
    }

    pub fn require_surface(&self) -> Result<ConicBundleSurface, Error> {
        self.surface()?
            .ok_or_else(|| Error::ConfigSemantic("missing [surface] section".into()))
    }

    /// The validated height model; α defaults to 1 when `[model]` is absent.
    pub fn model(&self, surface: &ConicBundleSurface) -> Result<HeightModel, Error> {
        let default = ModelSpec {
            alpha: "1".into(),
            regime: None,
        };
        build_model(surface, self.model.as_ref().unwrap_or(&default))
    }

    pub fn alpha(&self) -> Result<BigRational, Error> {
        self.model
            .as_ref()
            .map_or(Ok(BigRational::from_integer(1.into())), |m| parse_rational(&m.alpha))
    }

    pub fn bound(&self) -> Result<Option<BigRational>, Error> {
        self.run.bound.as_deref().map(parse_rational).transpose()
    }

    pub fn grid(&self) -> Result<Option<Vec<BigRational>>, Error> {
        self.run
            .grid
            .as_ref()
            .map(|g| g.iter().map(|b| parse_rational(b)).collect())
            .transpose()
    }

    pub fn y(&self) -> Result<Option<ProjPoint>, Error> {
        self.run.y.as_deref().map(|c| build_point("run.y", c)).transpose()
    }

    pub fn exclude(&self) -> Result<Vec<ProjPoint>, Error> {
        self.run.exclude.iter().map(|c| build_point("run.exclude", c)).collect()
    }

    pub fn cubic(&self) -> Result<Option<(MultiPoly, ProjPoint, ProjPoint)>, Error> {
        self.cubic.as_ref().map(build_cubic).transpose()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// The `[surface]` section describing an existing surface.
pub fn surface_spec(surface: &ConicBundleSurface) -> SurfaceSpec {
    let g = surface.gram();
    SurfaceSpec {
        n: surface.n(),
        a: surface.a(),
        e: surface.e(),
        gram: GramSpec {
            f00: poly_terms(&g[0][0]),
            f01: poly_terms(&g[0][1]),
            f02: poly_terms(&g[0][2]),
            f11: poly_terms(&g[1][1]),
            f12: poly_terms(&g[1][2]),
            f22: poly_terms(&g[2][2]),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::samples::{cubic_surface, main_surface};

    const MAIN: &str = include_str!("../fixtures/main_surface.toml");
    const CUBIC: &str = include_str!("../fixtures/cubic_with_line.toml");

    #[test]
    fn fixture_parses() {
        let cfg = parse_config(MAIN).unwrap();
        assert_eq!(cfg.require_surface().unwrap(), main_surface());
        let s = cfg.require_surface().unwrap();
        assert_eq!(cfg.model(&s).unwrap().alpha(), &BigRational::from_integer(1.into()));
        let c = parse_config(CUBIC).unwrap();
        assert!(c.cubic().unwrap().is_some());
    }

    #[test]
    fn round_trip() {
        for text in [MAIN, CUBIC] {
            let cfg = parse_config(text).unwrap();
            let again = parse_config(&cfg.to_toml()).unwrap();
            assert_eq!(cfg, again);
        }
        let mut cfg = RunConfig {
            surface: Some(surface_spec(&cubic_surface())),
            ..Default::default()
        };
        cfg.run.exclude = vec![vec![Int::Small(1), Int::Big("123456789012345678901234567890".into())]];
        assert_eq!(parse_config(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn alpha_at_threshold_is_rejected() {
        let text = MAIN.replace("alpha = \"1\"", "alpha = \"0\"");
        let err = parse_config(&text).unwrap_err();
        assert!(
            matches!(err, Error::ConfigSemantic(ref m) if m.contains("must exceed")),
            "{err}"
        );
    }

    #[test]
    fn wrong_degree_names_the_entry() {
        let text = MAIN.replace("f22 = [[-1, [1, 1]]]", "f22 = [[-1, [2, 1]]]");
        let err = parse_config(&text).unwrap_err();
        assert!(
            matches!(err, Error::ConfigSemantic(ref m) if m.contains("(2, 2)") && m.contains("expected a2 + a2 + e = 2")),
            "{err}"
        );
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_config("[surface]\nn = 1\na = [0, 0\n").unwrap_err();
        match err {
            Error::ConfigSyntax { line, column, .. } => assert!(line >= 3 && column >= 1, "{line}:{column}"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_rational("5/3").unwrap(), BigRational::new(5.into(), 3.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
