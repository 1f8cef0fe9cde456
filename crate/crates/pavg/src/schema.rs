//! JSON input files: Dirichlet problems and AMVP probes.

use std::fmt;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use pavg_core::operators::QuadraticProbe;
use pavg_core::solver::{Domain, Lattice, Region};
use pavg_core::{AnalyticField, SolveOptions, Sweep, SymmetricMatrix};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Exponent given as a number or as `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PValue {
    Number(f64),
    Text(PText),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PText {
    Inf,
    Infinity,
}

impl PValue {
    pub fn value(self) -> f64 {
        match self {
            PValue::Number(p) => p,
            PValue::Text(_) => f64::INFINITY,
        }
    }
}

/// Parses `--p` values: a number greater than 1 or `inf`.
pub fn parse_p(s: &str) -> std::result::Result<f64, String> {
    let p = match s.trim() {
        "inf" | "infinity" | "∞" => f64::INFINITY,
        t => t
            .parse::<f64>()
            .map_err(|_| format!("`{s}` is neither a number nor `inf`"))?,
    };
    if p.is_nan() || p <= 1.0 {
        return Err(format!("p must lie in (1, ∞], got {s}"));
    }
    Ok(p)
}

/// JSON encoding of an exponent: a number, or `"inf"`.
pub fn p_json(p: f64) -> serde_json::Value {
    if p.is_finite() {
        serde_json::json!(p)
    } else {
        serde_json::json!("inf")
    }
}

/// Named analytic field, or a table of point values (boundary data only).
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldSpec {
    Constant {
        value: f64,
    },
    Linear {
        coefficients: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
    ReZSquared,
    SinPlusSquare,
    SquaredNorm,
    Table {
        entries: Vec<TableEntry>,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub point: Vec<f64>,
    pub value: f64,
}

impl FieldSpec {
    /// Analytic field, or an error naming `field` for tables.
    pub fn analytic(&self, field: &str) -> Result<AnalyticField> {
        Ok(match self {
            FieldSpec::Constant { value } => AnalyticField::Constant(*value),
            FieldSpec::Linear {
                coefficients,
                offset,
            } => AnalyticField::Linear {
                coefficients: coefficients.clone(),
                offset: *offset,
            },
            FieldSpec::ReZSquared => AnalyticField::ReZSquared,
            FieldSpec::SinPlusSquare => AnalyticField::SinPlusSquare,
            FieldSpec::SquaredNorm => AnalyticField::SquaredNorm,
            FieldSpec::Table { .. } => {
                bail!("field `{field}`: a value table is only accepted as boundary data")
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionSpec {
    Ball { center: Vec<f64>, radius: f64 },
    Box { min: Vec<f64>, max: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepSpec {
    #[default]
    Jacobi,
    GaussSeidel,
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepSpec::Jacobi => "jacobi",
            SweepSpec::GaussSeidel => "gauss_seidel",
        })
    }
}

/// Contents of `problem.json`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dimension: usize,
    pub domain: Vec<RegionSpec>,
    pub epsilon: f64,
    #[serde(default = "default_stencil")]
    pub stencil: String,
    pub p: PValue,
    pub boundary: FieldSpec,
    #[serde(default)]
    pub reference: Option<FieldSpec>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: u64,
    #[serde(default)]
    pub sweep: SweepSpec,
}

fn default_stencil() -> String {
    "hexagon".into()
}

fn default_tol() -> f64 {
    1e-10
}

fn default_max_iters() -> u64 {
    1_000_000
}

/// Lattice family selected by the `stencil` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilKind {
    Triangular,
    D4,
}

impl StencilKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "hexagon" | "triangular" | "polygon:k=2" => Ok(Self::Triangular),
            "cell24" | "d4" => Ok(Self::D4),
            other if other.starts_with("polygon:") => {
                bail!("field `stencil`: `{other}` does not tessellate; only the hexagon (polygon:k=2) does")
            }
            other => {
                bail!("field `stencil`: unknown stencil `{other}` (expected hexagon or cell24)")
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Triangular => "hexagon",
            Self::D4 => "cell24",
        }
    }
}

impl ProblemFile {
    pub fn p(&self) -> Result<f64> {
        let p = self.p.value();
        if p.is_nan() || p <= 1.0 {
            bail!("field `p`: must lie in (1, ∞], got {p}");
        }
        Ok(p)
    }

    pub fn options(&self) -> Result<SolveOptions> {
        if !(self.tol > 0.0) {
            bail!("field `tol`: must be positive");
        }
        if self.max_iters == 0 {
            bail!("field `max_iters`: must be at least 1");
        }
        let sweep = match self.sweep {
            SweepSpec::Jacobi => Sweep::Jacobi,
            SweepSpec::GaussSeidel => Sweep::GaussSeidel,
        };
        Ok(SolveOptions {
            tol: self.tol,
            max_iters: self.max_iters,
            sweep,
        })
    }

    pub fn stencil_kind(&self) -> Result<StencilKind> {
        let kind = StencilKind::parse(&self.stencil)?;
        let needed = match kind {
            StencilKind::Triangular => 2,
            StencilKind::D4 => 4,
        };
        if self.dimension != needed {
            bail!(
                "field `dimension`: stencil `{}` needs dimension {needed}, got {}",
                self.stencil,
                self.dimension
            );
        }
        Ok(kind)
    }

    pub fn domain(&self) -> Result<Domain> {
        if self.domain.is_empty() {
            bail!("field `domain`: needs at least one region");
        }
        let mut regions = Vec::with_capacity(self.domain.len());
        for (i, r) in self.domain.iter().enumerate() {
            let (len, region) = match r {
                RegionSpec::Ball { center, radius } => (
                    center.len(),
                    Region::Ball {
                        center: center.clone(),
                        radius: *radius,
                    },
                ),
                RegionSpec::Box { min, max } => {
                    if min.len() != max.len() {
                        bail!("field `domain[{i}]`: min and max lengths differ");
                    }
                    (
                        min.len(),
                        Region::Box {
                            min: min.clone(),
                            max: max.clone(),
                        },
                    )
                }
            };
            if len != self.dimension {
                bail!(
                    "field `domain[{i}]`: expected {} coordinates, got {len}",
                    self.dimension
                );
            }
            regions.push(region);
        }
        Domain::new(regions).map_err(|e| anyhow!("field `domain`: {e}"))
    }

    pub fn lattice(&self) -> Result<Lattice> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            bail!("field `epsilon`: must be positive");
        }
        let domain = self.domain()?;
        let lattice = match self.stencil_kind()? {
            StencilKind::Triangular => Lattice::triangular(&domain, self.epsilon, 2),
            StencilKind::D4 => Lattice::d4(&domain, self.epsilon),
        };
        lattice.map_err(|e| anyhow!("field `domain`/`epsilon`: {e}"))
    }

    /// Values at every node: boundary data on the strip, the mean of the
    /// boundary data in the interior.
    pub fn initial_values(&self, lattice: &Lattice) -> Result<Vec<f64>> {
        let n = lattice.interior_count();
        let mut u = vec![0.0; lattice.len()];
        match &self.boundary {
            FieldSpec::Table { entries } => {
                for (k, e) in entries.iter().enumerate() {
                    if e.point.len() != self.dimension {
                        bail!(
                            "field `boundary.entries[{k}].point`: expected {} coordinates",
                            self.dimension
                        );
                    }
                }
                let tol = 1e-9 * lattice.spacing();
                for (i, slot) in u.iter_mut().enumerate().skip(n) {
                    let x = lattice.node(i);
                    let hit = entries.iter().find(|e| {
                        e.point
                            .iter()
                            .zip(x)
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>()
                            .sqrt()
                            <= tol
                    });
                    match hit {
                        Some(e) if e.value.is_finite() => *slot = e.value,
                        Some(_) => bail!("field `boundary.entries`: non-finite value at {x:?}"),
                        None => bail!("field `boundary.entries`: no value for strip node at {x:?}"),
                    }
                }
            }
            spec => {
                let field = spec.analytic("boundary")?;
                field
                    .check_dimension(self.dimension)
                    .map_err(|e| anyhow!("field `boundary`: {e}"))?;
                for (i, slot) in u.iter_mut().enumerate().skip(n) {
                    let v = field.value(lattice.node(i));
                    if !v.is_finite() {
                        bail!(
                            "field `boundary`: non-finite value at {:?}",
                            lattice.node(i)
                        );
                    }
                    *slot = v;
                }
            }
        }
        let mean = u[n..].iter().sum::<f64>() / (u.len() - n) as f64;
        u[..n].iter_mut().for_each(|v| *v = mean);
        Ok(u)
    }

    /// Reference field: the explicit `reference`, else an analytic boundary field.
    pub fn reference(&self) -> Result<Option<AnalyticField>> {
        match (&self.reference, &self.boundary) {
            (Some(r), _) => {
                let f = r.analytic("reference")?;
                f.check_dimension(self.dimension)
                    .map_err(|e| anyhow!("field `reference`: {e}"))?;
                Ok(Some(f))
            }
            _ => Ok(None),
        }
    }
}

/// Contents of `probe.json`: explicit Taylor data or a named field and point.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbeFile {
    Explicit(ExplicitProbe),
    Field(FieldProbe),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitProbe {
    pub base_point: Vec<f64>,
    #[serde(default)]
    pub base_value: f64,
    pub gradient: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldProbe {
    pub field: FieldSpec,
    pub point: Vec<f64>,
}

/// Deserializes JSON text; errors name the offending field path.
pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            anyhow!("{}", e.into_inner())
        } else {
            anyhow!("field `{path}`: {}", e.into_inner())
        }
    })
}

impl ProbeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let text = value.to_string();
        if value.get("field").is_some() {
            Ok(Self::Field(from_json_str(&text)?))
        } else {
            Ok(Self::Explicit(from_json_str(&text)?))
        }
    }

    pub fn point(&self) -> &[f64] {
        match self {
            Self::Explicit(e) => &e.base_point,
            Self::Field(f) => &f.point,
        }
    }

    /// The field to sample and its value, gradient and Hessian at the point.
    pub fn resolve(&self) -> Result<(AnalyticField, QuadraticProbe)> {
        match self {
            Self::Explicit(e) => {
                let hessian = SymmetricMatrix::from_rows(&e.hessian)
                    .map_err(|err| anyhow!("field `hessian`: {err}"))?;
                let probe = QuadraticProbe::new(
                    e.base_point.clone(),
                    e.base_value,
                    e.gradient.clone(),
                    hessian,
                )
                .map_err(|err| anyhow!("field `gradient`/`base_point`: {err}"))?;
                Ok((AnalyticField::Quadratic(probe.clone()), probe))
            }
            Self::Field(f) => {
                let field = f.field.analytic("field")?;
                let probe = field
                    .probe_at(&f.point)
                    .map_err(|err| anyhow!("field `point`: {err}"))?;
                Ok((field, probe))
            }
        }
    }
}

/// Reads and deserializes a JSON file, naming the file in errors.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    from_json_str(&text).with_context(|| format!("malformed {}", path.display()))
}

pub fn read_probe(path: &Path) -> Result<ProbeFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    ProbeFile::parse(&text).with_context(|| format!("malformed {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_defaults_and_p_forms() {
        let p: ProblemFile = serde_json::from_str(
            r#"{"dimension":2,"domain":[{"ball":{"center":[0,0],"radius":1}}],"epsilon":0.1,
                "p":"inf","boundary":{"type":"linear","coefficients":[1,0]}}"#,
        )
        .unwrap();
        assert_eq!(p.p().unwrap(), f64::INFINITY);
        assert_eq!(p.stencil, "hexagon");
        assert_eq!(p.options().unwrap(), SolveOptions::default());
        assert!(p.lattice().unwrap().interior_count() > 0);
    }

    #[test]
    fn diagnostics_name_fields() {
        let err = from_json_str::<ProblemFile>(r#"{"dimension":2}"#).unwrap_err();
        assert!(err.to_string().contains("domain"), "{err}");
        let err = from_json_str::<ProblemFile>(
            r#"{"dimension":2,"domain":[{"ball":{"center":[0],"radius":"r"}}]}"#,
        )
        .unwrap_err();
        assert!(
            err.to_string().contains("field `domain[0].ball.radius`"),
            "{err}"
        );
        let mut p: ProblemFile = serde_json::from_str(
            r#"{"dimension":2,"domain":[{"box":{"min":[0,0],"max":[1,1]}}],"epsilon":-1,
                "p":4,"boundary":{"type":"constant","value":1}}"#,
        )
        .unwrap();
        assert!(p.lattice().unwrap_err().to_string().contains("`epsilon`"));
        p.epsilon = 0.1;
        p.stencil = "polygon:k=3".into();
        assert!(p.lattice().unwrap_err().to_string().contains("`stencil`"));
    }

    #[test]
    fn probe_forms() {
        let e =
            ProbeFile::parse(r#"{"base_point":[0,0],"gradient":[1,0],"hessian":[[1,0],[0,1]]}"#)
                .unwrap();
        assert!(matches!(e, ProbeFile::Explicit(_)));
        let f =
            ProbeFile::parse(r#"{"field":{"type":"sin-plus-square"},"point":[0.3,0.2]}"#).unwrap();
        let (_, probe) = f.resolve().unwrap();
        assert!((probe.gradient()[0] - 0.3f64.cos()).abs() < 1e-15);
        assert!(ProbeFile::parse(
            r#"{"base_point":[0,0],"gradient":[0,0],"hessian":[[1,0],[0,1]]}"#
        )
        .unwrap()
        .resolve()
        .is_err());
    }

    #[test]
    fn p_flag_parsing() {
        assert_eq!(parse_p("inf").unwrap(), f64::INFINITY);
        assert_eq!(parse_p("4").unwrap(), 4.0);
        assert!(parse_p("1").is_err());
        assert!(parse_p("x").is_err());
    }
}
