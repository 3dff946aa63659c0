//! Spec files: TOML (or JSON) descriptions of an equation, its targets and
//! evaluation settings. Complex numbers are `[re, im]` pairs everywhere.

use std::path::Path;

use algebroid::nevanlinna::{RadiusGrid, Spacing};
use algebroid::polyalg::{BiPolynomial, Polynomial};
use algebroid::{Equation, Map, Target, C64};
use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const VERSION: u32 = 1;

pub type Pair = [f64; 2];

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub function: FunctionTable,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<MapTable>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyTable>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionTable {
    /// `coefficients[t][k]` multiplies `z^k W^t`.
    pub coefficients: Vec<Vec<Pair>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MapTable {
    pub label: String,
    /// `num[i][j]` multiplies `z^i w^j`.
    pub num: Vec<Vec<Pair>>,
    #[serde(default)]
    pub den: Option<Vec<Vec<Pair>>>,
    #[serde(default = "yes")]
    pub small: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SpacingName {
    #[default]
    Geometric,
    Linear,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridTable {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: SpacingName,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyTable {
    /// Labels of the maps `h` for the sum/product bounds (default: all maps).
    #[serde(default)]
    pub h: Option<Vec<String>>,
    /// Labels of the functions whose Wronskian is scaled.
    #[serde(default)]
    pub wronskian: Option<Vec<String>>,
    /// Label of the scaling function `g`.
    #[serde(default)]
    pub g: Option<String>,
    #[serde(default)]
    pub s: Option<usize>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub order: Option<usize>,
}

/// Parsed file plus its text, for pointing errors at lines.
pub struct Loaded {
    pub spec: SpecFile,
    text: String,
}

fn line_of(text: &str, key: &str) -> Option<usize> {
    let leaf = key.rsplit('.').next().unwrap_or(key);
    text.lines().position(|l| {
        let t = l.trim_start().trim_start_matches('"');
        t.starts_with(leaf) && t[leaf.len()..].trim_start().trim_start_matches('"').trim_start().starts_with(['=', ':'])
    })
    .map(|i| i + 1)
}

impl Loaded {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let spec: SpecFile = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| anyhow!("JSON parse error: {e}"))?
        } else {
            toml::from_str(text).map_err(|e| anyhow!("{e}"))?
        };
        let loaded = Self { spec, text: text.to_string() };
        if loaded.spec.version != VERSION {
            return Err(loaded.key_error("version", format!("unsupported version {}", loaded.spec.version)));
        }
        Ok(loaded)
    }

    pub fn key_error(&self, key: &str, msg: impl std::fmt::Display) -> anyhow::Error {
        match line_of(&self.text, key) {
            Some(line) => anyhow!("key `{key}` (line {line}): {msg}"),
            None => anyhow!("key `{key}`: {msg}"),
        }
    }

    pub fn equation(&self) -> Result<Equation> {
        let coeffs = self.spec.function.coefficients.iter().map(|c| poly(c)).collect();
        Equation::new(coeffs).map_err(|e| self.key_error("function.coefficients", e))
    }

    fn map_of(&self, key: &str, t: &MapTable) -> Result<Map> {
        let num = bipoly(&t.num);
        let den = match &t.den {
            Some(d) => bipoly(d),
            None => BiPolynomial::one(),
        };
        Map::new(num, den).map_err(|e| self.key_error(key, format!("`{}`: {e}", t.label)))
    }

    pub fn targets(&self) -> Result<Vec<Target>> {
        self.spec
            .targets
            .iter()
            .map(|t| {
                let mut target = Target::new(self.map_of("targets", t)?, t.label.clone());
                target.asserted_small = t.small;
                Ok(target)
            })
            .collect()
    }

    /// Map by label, searching the maps first and then the targets.
    pub fn map(&self, label: &str) -> Result<Map> {
        let found = self.spec.maps.iter().map(|m| ("maps", m)).chain(self.spec.targets.iter().map(|t| ("targets", t)));
        for (key, t) in found {
            if t.label == label {
                return self.map_of(key, t);
            }
        }
        bail!("no map or target labelled `{label}`")
    }

    pub fn map_labels(&self) -> Vec<String> {
        self.spec.maps.iter().map(|m| m.label.clone()).collect()
    }

    pub fn grid(&self) -> Result<RadiusGrid<f64>> {
        let g = self.spec.grid.as_ref().ok_or_else(|| anyhow!("key `grid`: missing"))?;
        let spacing = match g.spacing {
            SpacingName::Geometric => Spacing::Geometric,
            SpacingName::Linear => Spacing::Linear,
        };
        RadiusGrid::spaced(g.r_min, g.r_max, g.points, spacing).map_err(|e| self.key_error("grid.points", e))
    }

    pub fn epsilon(&self) -> Result<f64> {
        self.spec.epsilon.ok_or_else(|| anyhow!("key `epsilon`: missing"))
    }

    pub fn verify(&self) -> VerifyTable {
        self.spec.verify.clone().unwrap_or_default()
    }
}

fn c(p: &Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn poly(c_: &[Pair]) -> Polynomial<f64> {
    Polynomial::new(c_.iter().map(c).collect())
}

fn bipoly(grid: &[Vec<Pair>]) -> BiPolynomial<f64> {
    BiPolynomial::from_grid(&grid.iter().map(|row| row.iter().map(c).collect()).collect::<Vec<_>>())
}

/// Coefficient pairs with rounding noise below `1e-13` of `scale` set to zero.
pub fn pairs(p: &Polynomial<f64>, scale: f64) -> Vec<Pair> {
    if p.is_zero() {
        return Vec::new();
    }
    let clean = |x: f64| if x.abs() <= 1e-13 * scale { 0.0 } else { x };
    p.coeffs().iter().map(|z| [clean(z.re), clean(z.im)]).collect()
}

/// A minimal spec file holding only the equation.
pub fn equation_file(eq: &Equation) -> SpecFile {
    let scale = eq.coeffs().iter().map(|c| c.max_abs()).fold(0.0, f64::max);
    SpecFile {
        version: VERSION,
        epsilon: None,
        seed: None,
        function: FunctionTable {
            coefficients: eq.coeffs().iter().map(|c| pairs(c, scale)).collect(),
        },
        targets: Vec::new(),
        maps: Vec::new(),
        grid: None,
        verify: None,
    }
}
