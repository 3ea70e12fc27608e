//! Session configuration: JSON ingestion and validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use lietorus::grading::{
    character_values, eigenspace_decompose, make_diagram_aut, make_torus_aut, validate_tuple, EigenspaceDecomposition,
    FiniteOrderAut,
};
use lietorus::liealg::ChevalleyAlgebra;
use lietorus::repmod::{ModuleSpec, Quadruple};
use lietorus::CycScalar;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub source: String,
    /// JSON path of the offending field, or `line L, column C` for syntax errors.
    pub location: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConfigError: {}: {}: {}", self.source, self.location, self.message)
    }
}

/// A scalar written either as a JSON integer or as a literal such as `"1/2"` or `"z^1@4"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarLit {
    Int(i64),
    Text(String),
}

impl ScalarLit {
    fn text(&self) -> String {
        match self {
            ScalarLit::Int(v) => v.to_string(),
            ScalarLit::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    #[serde(rename = "type")]
    pub letter: String,
    pub rank: usize,
}

/// One automorphism: an optional diagram permutation followed by an optional
/// character on the simple roots (keys `alpha_1`, `alpha_2`, ...).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<BTreeMap<String, ScalarLit>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsConfig {
    /// Must be the string `"auto"`.
    Auto(String),
    Explicit(Vec<Vec<ScalarLit>>),
}

impl Default for PointsConfig {
    fn default() -> Self {
        PointsConfig::Auto("auto".into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleConfig {
    #[serde(default)]
    pub psi: Vec<i64>,
    pub c: ScalarLit,
    pub lambda: Vec<i64>,
    pub beta: Vec<ScalarLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<usize>>,
    #[serde(default)]
    pub points: PointsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<ScalarLit>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hws: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    pub conductor: u32,
    pub algebra: AlgebraConfig,
    pub automorphisms: Vec<AutConfig>,
    pub m: Vec<u32>,
    #[serde(default = "default_phi")]
    pub phi: [ScalarLit; 2],
    #[serde(default = "default_window")]
    pub window: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleConfig>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub outputs: OutputsConfig,
}

fn default_phi() -> [ScalarLit; 2] {
    [ScalarLit::Int(0), ScalarLit::Int(0)]
}

fn default_window() -> i64 {
    2
}

fn default_samples() -> usize {
    100
}

/// A validated session: the grading, scalar parameters and optional module.
pub struct Session {
    pub source: String,
    pub config: SessionConfig,
    pub dec: Arc<EigenspaceDecomposition>,
    pub phi: (CycScalar, CycScalar),
    pub module: Option<ModuleSpec>,
}

impl SessionConfig {
    pub fn from_json(text: &str, source: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError {
            source: source.into(),
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let source = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            source: source.clone(),
            location: "file".into(),
            message: e.to_string(),
        })?;
        Self::from_json(&text, &source)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

struct Validator<'a> {
    source: &'a str,
    conductor: u32,
}

impl Validator<'_> {
    fn err(&self, location: impl Into<String>, message: impl fmt::Display) -> ConfigError {
        ConfigError { source: self.source.into(), location: location.into(), message: message.to_string() }
    }

    fn scalar(&self, lit: &ScalarLit, location: &str) -> Result<CycScalar, ConfigError> {
        let v = CycScalar::parse_with(&lit.text(), self.conductor).map_err(|e| self.err(location, e))?;
        if self.conductor % v.conductor() != 0 {
            return Err(self.err(location, format!("conductor {} does not divide the session conductor {}", v.conductor(), self.conductor)));
        }
        Ok(v)
    }

    fn scalars(&self, lits: &[ScalarLit], location: &str) -> Result<Vec<CycScalar>, ConfigError> {
        lits.iter().enumerate().map(|(i, l)| self.scalar(l, &format!("{location}[{i}]"))).collect()
    }
}

impl Session {
    pub fn validate(config: SessionConfig, source: &str) -> Result<Self, ConfigError> {
        let v = Validator { source, conductor: config.conductor };
        if config.conductor == 0 {
            return Err(v.err("conductor", "must be positive"));
        }
        let letter = match config.algebra.letter.chars().collect::<Vec<_>>()[..] {
            [c] => c,
            _ => return Err(v.err("algebra.type", "expected a single letter")),
        };
        let g = Arc::new(ChevalleyAlgebra::build(letter, config.algebra.rank).map_err(|e| v.err("algebra", e))?);
        if config.automorphisms.is_empty() {
            return Err(v.err("automorphisms", "at least one automorphism is required"));
        }
        if config.automorphisms.len() != config.m.len() {
            return Err(v.err("m", format!("expected {} orders, one per automorphism", config.automorphisms.len())));
        }
        let mut sigmas = Vec::new();
        for (i, a) in config.automorphisms.iter().enumerate() {
            let loc = format!("automorphisms[{i}]");
            let mut parts = Vec::new();
            if let Some(perm) = &a.diagram {
                parts.push(make_diagram_aut(&g, perm).map_err(|e| v.err(format!("{loc}.diagram"), e))?);
            }
            if let Some(chi) = &a.character {
                let mut entries = Vec::new();
                for (key, lit) in chi {
                    let cloc = format!("{loc}.character.{key}");
                    let idx = key
                        .strip_prefix("alpha_")
                        .and_then(|s| s.parse::<usize>().ok())
                        .filter(|&j| j >= 1 && j <= g.rank())
                        .ok_or_else(|| v.err(&cloc, format!("expected alpha_1 .. alpha_{}", g.rank())))?;
                    entries.push((idx - 1, v.scalar(lit, &cloc)?));
                }
                let values = character_values(g.rank(), &entries);
                parts.push(make_torus_aut(&g, &values).map_err(|e| v.err(format!("{loc}.character"), e))?);
            }
            let sigma = if parts.is_empty() {
                FiniteOrderAut::identity(&g)
            } else {
                FiniteOrderAut::compose_left_to_right(&g, &parts).map_err(|e| v.err(&loc, e))?
            };
            sigmas.push(sigma);
        }
        let group = validate_tuple(&sigmas, &config.m).map_err(|e| v.err("automorphisms", e))?;
        let dec = Arc::new(eigenspace_decompose(g, sigmas, group).map_err(|e| v.err("automorphisms", e))?);
        if config.window < 1 {
            return Err(v.err("window", "must be at least 1"));
        }
        if config.samples == 0 {
            return Err(v.err("samples", "must be at least 1"));
        }
        let phi = (v.scalar(&config.phi[0], "phi[0]")?, v.scalar(&config.phi[1], "phi[1]")?);
        let module = match &config.module {
            None => None,
            Some(mc) => Some(Self::module_spec(&v, mc, dec.n())?),
        };
        Ok(Session { source: source.into(), config, dec, phi, module })
    }

    fn module_spec(v: &Validator, mc: &ModuleConfig, n: usize) -> Result<ModuleSpec, ConfigError> {
        let beta = v.scalars(&mc.beta, "module.beta")?;
        if beta.len() != n {
            return Err(v.err("module.beta", format!("expected {n} entries")));
        }
        if mc.psi.len() + 1 != n {
            return Err(v.err("module.psi", format!("expected {} entries", n - 1)));
        }
        let params = Quadruple { psi: mc.psi.clone(), c: v.scalar(&mc.c, "module.c")?, lambda: mc.lambda.clone(), beta };
        let mut spec = ModuleSpec::new(params);
        spec.multiplicities = mc.multiplicities.clone();
        spec.shift = mc.shift.clone();
        spec.base = match &mc.base {
            Some(b) => Some(v.scalars(b, "module.base")?),
            None => None,
        };
        spec.points = match &mc.points {
            PointsConfig::Auto(s) if s == "auto" => None,
            PointsConfig::Auto(s) => return Err(v.err("module.points", format!("expected \"auto\" or a list of points, got {s:?}"))),
            PointsConfig::Explicit(pts) => Some(
                pts.iter()
                    .enumerate()
                    .map(|(i, p)| v.scalars(p, &format!("module.points[{i}]")))
                    .collect::<Result<_, _>>()?,
            ),
        };
        Ok(spec)
    }

    pub fn module_spec_required(&self) -> Result<&ModuleSpec, ConfigError> {
        self.module.as_ref().ok_or_else(|| ConfigError {
            source: self.source.clone(),
            location: "module".into(),
            message: "this command needs a module section".into(),
        })
    }
}
