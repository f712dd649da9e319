//! Grid files: TOML documents listing parameter values and corpus labels.
//!
//! Every key is optional; missing keys take the value of the default grid.
//!
//! ```toml
//! theorems = [1, 2]
//! sides = ["central"]
//! n = [1, 2]
//! r = [0.5, 1.0]
//! s = ["r+0.5", "2r", "3"]
//! alpha = [1.5, 2.0]
//! gamma = [0.0, 1.0]
//! radius = [1.0]
//! profiles = ["indicator:a=0:b=1"]
//! commutator_profiles = ["indicator:a=0:b=1"]
//! symbols = ["osc:amp=1:phase=0"]
//!
//! [quadrature]
//! rel_tol = 1e-11
//! commutator_rel_tol = 1e-7
//! max_panels = 4000
//! ```

use std::path::Path;

use centmean_core::harness::{Grid, HarnessConfig, SRule, Theorem};
use centmean_core::Side;
use serde::{Deserialize, Serialize};

use crate::AppError;

/// An `s` entry: a number or a rule such as `"r+0.5"` or `"2r"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SEntry {
    Value(f64),
    Rule(String),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOverrides {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub commutator_rel_tol: Option<f64>,
    pub max_panels: Option<usize>,
}

impl QuadratureOverrides {
    pub fn apply(&self, mut config: HarnessConfig) -> Result<HarnessConfig, AppError> {
        if let Some(t) = self.rel_tol {
            config.spec.rel_tol = t;
        }
        if let Some(t) = self.abs_tol {
            config.spec.abs_tol = t;
            config.commutator_spec.abs_tol = t;
        }
        if let Some(t) = self.commutator_rel_tol {
            config.commutator_spec.rel_tol = t;
        }
        if let Some(m) = self.max_panels {
            config.spec.max_panels = m;
            config.commutator_spec.max_panels = m;
        }
        config.spec.validate()?;
        config.commutator_spec.validate()?;
        Ok(config)
    }
}

/// The on-disk form of a [`Grid`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub theorems: Option<Vec<u8>>,
    pub sides: Option<Vec<String>>,
    pub n: Option<Vec<u32>>,
    pub r: Option<Vec<f64>>,
    pub s: Option<Vec<SEntry>>,
    pub alpha: Option<Vec<f64>>,
    pub gamma: Option<Vec<f64>>,
    pub radius: Option<Vec<f64>>,
    pub profiles: Option<Vec<String>>,
    pub commutator_profiles: Option<Vec<String>>,
    pub symbols: Option<Vec<String>>,
    #[serde(default)]
    pub quadrature: QuadratureOverrides,
}

pub fn parse_side(text: &str) -> Result<Side, AppError> {
    match text {
        "central" => Ok(Side::Central),
        "companion" => Ok(Side::Companion),
        other => Err(AppError::Invalid(format!("unknown side '{other}' (central or companion)"))),
    }
}

pub fn parse_theorem(k: u8) -> Result<Theorem, AppError> {
    Theorem::from_number(k).ok_or_else(|| AppError::Invalid(format!("unknown theorem {k} (1 to 4)")))
}

impl GridFile {
    pub fn parse(text: &str) -> Result<Self, AppError> {
        toml::from_str(text).map_err(|e| AppError::Invalid(format!("grid file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Invalid(format!("cannot read grid file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn grid(&self) -> Result<Grid, AppError> {
        let mut g = Grid::default();
        if let Some(t) = &self.theorems {
            g.theorems = t.iter().map(|k| parse_theorem(*k)).collect::<Result<_, _>>()?;
        }
        if let Some(s) = &self.sides {
            g.sides = s.iter().map(|x| parse_side(x)).collect::<Result<_, _>>()?;
        }
        if let Some(s) = &self.s {
            g.s = s
                .iter()
                .map(|e| match e {
                    SEntry::Value(v) => Ok(SRule::Fixed(*v)),
                    SEntry::Rule(text) => SRule::parse(text).map_err(AppError::from),
                })
                .collect::<Result<_, _>>()?;
        }
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    g.$field = v.clone();
                }
            )*};
        }
        take!(n, r, alpha, gamma, radius, profiles, commutator_profiles, symbols);
        Ok(g)
    }
}

/// The grid file equivalent of `grid`.
pub fn to_file(grid: &Grid) -> GridFile {
    GridFile {
        theorems: Some(grid.theorems.iter().map(|t| t.number()).collect()),
        sides: Some(grid.sides.iter().map(|s| s.to_string()).collect()),
        n: Some(grid.n.clone()),
        r: Some(grid.r.clone()),
        s: Some(grid.s.iter().map(|s| SEntry::Rule(s.to_string())).collect()),
        alpha: Some(grid.alpha.clone()),
        gamma: Some(grid.gamma.clone()),
        radius: Some(grid.radius.clone()),
        profiles: Some(grid.profiles.clone()),
        commutator_profiles: Some(grid.commutator_profiles.clone()),
        symbols: Some(grid.symbols.clone()),
        quadrature: QuadratureOverrides::default(),
    }
}
