//! Run manifests: a metric, the points to evaluate it at, and run options.
//!
//! ```toml
//! points = [[1.0, 0.3, 0.7], [0.5, 0.0, 0.0]]
//!
//! [metric]
//! A = "cosh(x1)^2"
//! B = "x1^2"
//!
//! [options]
//! tol_first = 1e-8
//! tol_curv = 1e-7
//! seed = 42
//! count = 100
//! box = [-2.0, 2.0]
//!
//! [basis]
//! x = [1.0, 1.0, 1.0]
//! ```
//!
//! Only `[metric]` and `points` are required.

use crate::classify::ClassifyTolerances;
use crate::structures::MetricSpec;
use crate::tensor::Vec3;
use crate::tolerances;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed manifest: {0}")]
    Syntax(String),
    #[error("metric coefficient {which}: {source}")]
    Expression {
        which: &'static str,
        #[source]
        source: crate::Error,
    },
    #[error("point #{index} {point:?}: {source}")]
    Point {
        index: usize,
        point: Vec3,
        #[source]
        source: crate::Error,
    },
    #[error("invalid option: {0}")]
    Option(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSection {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub tol_first: f64,
    pub tol_curv: f64,
    pub seed: u64,
    pub count: usize,
    #[serde(rename = "box")]
    pub sample_box: [f64; 2],
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tol_first: tolerances::TOL_FIRST,
            tol_curv: tolerances::TOL_CURV,
            seed: 0,
            count: 100,
            sample_box: [-2.0, 2.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSection {
    pub x: Vec3,
}

/// The manifest as written, before validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestText {
    pub metric: MetricSection,
    pub points: Vec<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<PartialOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisSection>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_first: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_curv: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub sample_box: Option<[f64; 2]>,
}

/// A validated manifest: both expressions parse and every point is admissible.
#[derive(Clone, Debug)]
pub struct Manifest {
    pub spec: MetricSpec,
    pub points: Vec<Vec3>,
    pub options: Options,
    pub basis: Option<Vec3>,
    pub text: ManifestText,
}

impl Manifest {
    pub fn from_toml(src: &str) -> Result<Self, ManifestError> {
        let text: ManifestText =
            toml::from_str(src).map_err(|e| ManifestError::Syntax(e.to_string()))?;
        Self::from_text(text)
    }

    pub fn load(path: &Path) -> Result<Self, ManifestError> {
        let src = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&src)
    }

    pub fn from_text(text: ManifestText) -> Result<Self, ManifestError> {
        let parse = |which: &'static str, src: &str| {
            crate::ScalarField::parse(src).map_err(|e| ManifestError::Expression {
                which,
                source: e.into(),
            })
        };
        let spec = MetricSpec::new(parse("A", &text.metric.a)?, parse("B", &text.metric.b)?);
        for (index, p) in text.points.iter().enumerate() {
            spec.metric_at(*p).map_err(|source| ManifestError::Point {
                index,
                point: *p,
                source,
            })?;
        }
        let d = Options::default();
        let o = text.options.clone().unwrap_or_default();
        let options = Options {
            tol_first: o.tol_first.unwrap_or(d.tol_first),
            tol_curv: o.tol_curv.unwrap_or(d.tol_curv),
            seed: o.seed.unwrap_or(d.seed),
            count: o.count.unwrap_or(d.count),
            sample_box: o.sample_box.unwrap_or(d.sample_box),
        };
        for (name, v) in [
            ("tol_first", options.tol_first),
            ("tol_curv", options.tol_curv),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ManifestError::Option(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        let [lo, hi] = options.sample_box;
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(ManifestError::Option(format!(
                "box must satisfy a < b, got [{lo}, {hi}]"
            )));
        }
        Ok(Manifest {
            spec,
            points: text.points.clone(),
            options,
            basis: text.basis.as_ref().map(|b| b.x),
            text,
        })
    }

    pub fn tolerances(&self) -> ClassifyTolerances {
        ClassifyTolerances {
            first: self.options.tol_first,
            curv: self.options.tol_curv,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal() {
        let m =
            Manifest::from_toml("points = [[0, 0, 0]]\n[metric]\nA = \"1\"\nB = \"1\"\n").unwrap();
        assert_eq!(m.points, vec![[0.0; 3]]);
        assert_eq!(m.options, Options::default());
        assert_eq!(m.basis, None);
    }

    #[test]
    fn full() {
        let src = r#"
            points = [[1.0, 0.3, 0.7]]
            [metric]
            A = "cosh(x1)^2"
            B = "x1^2"
            [options]
            tol_curv = 1e-6
            seed = 7
            box = [-1, 1]
            [basis]
            x = [1, 1, 1]
        "#;
        let m = Manifest::from_toml(src).unwrap();
        assert_eq!(m.options.tol_curv, 1e-6);
        assert_eq!(m.options.tol_first, tolerances::TOL_FIRST);
        assert_eq!(m.options.seed, 7);
        assert_eq!(m.options.sample_box, [-1.0, 1.0]);
        assert_eq!(m.basis, Some([1.0, 1.0, 1.0]));
    }

    #[test]
    fn rejects_inadmissible_point() {
        let err = Manifest::from_toml("points = [[-1, 0, 0]]\n[metric]\nA = \"x1\"\nB = \"1\"\n")
            .unwrap_err();
        assert!(matches!(
            err,
            ManifestError::Point {
                source: crate::Error::NotPositiveDefinite { .. },
                ..
            }
        ));
        assert!(err.to_string().contains("not positive definite"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Manifest::from_toml("points = []\n[metric]\nA = \"x1 +\"\nB = \"1\"\n"),
            Err(ManifestError::Expression { which: "A", .. })
        ));
        assert!(matches!(
            Manifest::from_toml("points = []\n[metric]\nA = \"1\"\n"),
            Err(ManifestError::Syntax(_))
        ));
        assert!(matches!(
            Manifest::from_toml("points = []\nextra = 1\n[metric]\nA = \"1\"\nB = \"1\"\n"),
            Err(ManifestError::Syntax(_))
        ));
        assert!(matches!(
            Manifest::from_toml(
                "points = []\n[metric]\nA = \"1\"\nB = \"1\"\n[options]\nbox = [1, 0]\n"
            ),
            Err(ManifestError::Option(_))
        ));
    }
}
