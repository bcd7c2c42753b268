//! JSON report documents. Floating-point numbers are written with 17
//! significant digits so that reading a report back reproduces every value
//! bit for bit.

use crate::analysis::{CurvatureReport, IdentityResiduals, PointAnalysis};
use crate::classify::{ClassificationReport, ClassifyTolerances};
use crate::manifest::{ManifestText, Options};
use crate::qbasis::QBasisReport;
use crate::tensor::Vec3;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use std::io;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub point: Vec3,
    pub curvature: CurvatureReport,
    pub classification: ClassificationReport,
    pub residuals: IdentityResiduals,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qbasis: Option<QBasisReport>,
    pub failures: Vec<Failure>,
}

impl PointReport {
    pub fn new(a: PointAnalysis, qbasis: Option<QBasisReport>, tol: ClassifyTolerances) -> Self {
        let mut failures: Vec<Failure> = a
            .failures(tol)
            .into_iter()
            .map(|(name, residual, tol)| Failure {
                name,
                residual,
                tol,
            })
            .collect();
        if let Some(q) = &qbasis {
            if let Some(r) = q.con_r_residual {
                if !(r < tol.curv) {
                    failures.push(Failure {
                        name: "con_r".into(),
                        residual: r,
                        tol: tol.curv,
                    });
                }
            }
            if let Some(ae) = &q.almost_einstein {
                if !(ae.residual < tol.curv) {
                    failures.push(Failure {
                        name: "almost_einstein_sectional".into(),
                        residual: ae.residual,
                        tol: tol.curv,
                    });
                }
            }
        }
        PointReport {
            point: a.metric.point,
            curvature: a.curvature,
            classification: a.classification,
            residuals: a.residuals,
            qbasis,
            failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub manifest: ManifestText,
    /// Options in effect, after defaults and environment overrides.
    pub options: Options,
    pub points: Vec<PointReport>,
    pub passed: bool,
}

impl ReportDocument {
    pub fn new(manifest: ManifestText, options: Options, points: Vec<PointReport>) -> Self {
        let passed = points.iter().all(|p| p.failures.is_empty());
        ReportDocument {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            manifest,
            options,
            points,
            passed,
        }
    }
}

/// Pretty JSON with `f64` values in `{:.16e}` form.
#[derive(Default)]
pub struct PreciseFormatter {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

macro_rules! delegate {
    ($($name:ident $(($arg:ident : $ty:ty))?;)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)?) -> io::Result<()> {
                self.inner.$name(w $(, $arg)?)
            }
        )*
    };
}

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate! {
        begin_array;
        end_array;
        begin_array_value(first: bool);
        end_array_value;
        begin_object;
        end_object;
        begin_object_key(first: bool);
        end_object_key;
        begin_object_value;
        end_object_value;
    }
}

/// Serializes with [`PreciseFormatter`].
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, PreciseFormatter::default());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze_point;
    use crate::manifest::Manifest;

    #[test]
    fn number_format() {
        let s = to_json(&vec![0.1, -2.0, 1e-300, std::f64::consts::PI]).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("-2.0000000000000000e0"));
        assert!(s.contains("3.1415926535897931e0"));
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, -2.0, 1e-300, std::f64::consts::PI]);
    }

    #[test]
    fn document_round_trip() {
        let m = Manifest::from_toml(
            "points = [[1.0, 0.3, 0.7]]\n[metric]\nA = \"cosh(x1)^2\"\nB = \"x1^2\"\n",
        )
        .unwrap();
        let tol = m.tolerances();
        let a = analyze_point(&m.spec, m.points[0], tol).unwrap();
        let q = crate::qbasis::QBasisReport::from_analysis(&a, &[1.0, 1.0, 1.0]).unwrap();
        let doc = ReportDocument::new(
            m.text.clone(),
            m.options.clone(),
            vec![PointReport::new(a, Some(q), tol)],
        );
        assert!(doc.passed, "{:?}", doc.points[0].failures);
        let json = to_json(&doc).unwrap();
        let back: ReportDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
    }
}
