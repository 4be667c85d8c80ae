//! JSON configuration: Cartan datum with parameters, and `(λ,ν)` files.
//!
//! ```json
//! { "labels": ["1","2"], "bilinear": [[2,-1],[-1,2]],
//!   "params": { "t": {"1,2": "1"}, "r": {"1": "1"},
//!               "s": [{"i":"1","j":"2","p":1,"q":1,"val":"1"}] } }
//!
//! { "lambda": [{"1": 2}], "nu": ["1"], "ordered_nu": false, "cyclotomic": [] }
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{CartanDatum, CartanError, ExtendedDatum, LabelId, SKey, ScalarParams};
use crate::klr::KlrAlgebra;
use crate::rational::parse_coeff;
use crate::thick::{Multiplicity, ThickContext, ThickError};
use crate::Coeff;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Thick(#[from] ThickError),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SEntry {
    pub i: String,
    pub j: String,
    pub p: u32,
    pub q: u32,
    pub val: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default)]
    pub t: BTreeMap<String, String>,
    #[serde(default)]
    pub r: BTreeMap<String, String>,
    #[serde(default)]
    pub s: Vec<SEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumConfig {
    pub labels: Vec<String>,
    pub bilinear: Vec<Vec<i64>>,
    #[serde(default)]
    pub params: ParamsConfig,
}

/// A loaded algebra, with the extended datum when one was requested.
#[derive(Clone, Debug)]
pub struct Setup {
    pub base: CartanDatum,
    pub extended: Option<ExtendedDatum>,
    pub algebra: Arc<KlrAlgebra>,
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn rational(text: &str) -> Result<Coeff, ConfigError> {
    parse_coeff(text).ok_or_else(|| ConfigError::Invalid(format!("`{text}` is not a rational")))
}

impl DatumConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_json(&read(path)?)
    }

    pub fn datum(&self) -> Result<CartanDatum, ConfigError> {
        for l in &self.labels {
            if l.is_empty() || !l.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
                return Err(ConfigError::Invalid(format!("label `{l}` must be non-empty and alphanumeric")));
            }
        }
        Ok(CartanDatum::from_names(&self.labels, self.bilinear.clone())?)
    }

    fn pair(datum: &CartanDatum, key: &str) -> Result<(LabelId, LabelId), ConfigError> {
        let (a, b) = key
            .split_once(',')
            .ok_or_else(|| ConfigError::Invalid(format!("t key `{key}` must look like \"i,j\"")))?;
        Ok((datum.resolve(a.trim())?, datum.resolve(b.trim())?))
    }

    fn t_map(&self, datum: &CartanDatum) -> Result<BTreeMap<(LabelId, LabelId), Coeff>, ConfigError> {
        self.params.t.iter().map(|(k, v)| Ok((Self::pair(datum, k)?, rational(v)?))).collect()
    }

    /// The algebra over the datum itself, with all configured parameters.
    pub fn build(&self) -> Result<Setup, ConfigError> {
        let base = self.datum()?;
        let t = self.t_map(&base)?;
        let r = self
            .params
            .r
            .iter()
            .map(|(k, v)| Ok((base.resolve(k)?, rational(v)?)))
            .collect::<Result<BTreeMap<_, _>, ConfigError>>()?;
        let mut s = BTreeMap::new();
        for e in &self.params.s {
            let key = SKey { i: base.resolve(&e.i)?, j: base.resolve(&e.j)?, p: e.p, q: e.q };
            s.insert(key, rational(&e.val)?);
        }
        let params = ScalarParams::new(&base, &t, &r, &s)?;
        let algebra = Arc::new(KlrAlgebra::new(base.clone(), params));
        Ok(Setup { base, extended: None, algebra })
    }

    /// The algebra over the extended datum with the specialized parameters;
    /// configured `t` entries become the residual map.
    pub fn build_extended(&self) -> Result<Setup, ConfigError> {
        if !self.params.r.is_empty() || !self.params.s.is_empty() {
            return Err(ConfigError::Invalid(
                "the extended datum fixes r and s; only residual t entries may be configured".into(),
            ));
        }
        let base = self.datum()?;
        let ext = ExtendedDatum::new(&base)?;
        let residual = self.t_map(&base)?;
        let params = ext.specialized_params(&residual)?;
        let algebra = Arc::new(KlrAlgebra::new(ext.datum().clone(), params));
        Ok(Setup { base, extended: Some(ext), algebra })
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThickConfig {
    pub lambda: Vec<BTreeMap<String, u32>>,
    #[serde(default)]
    pub nu: Vec<String>,
    #[serde(default)]
    pub ordered_nu: bool,
    /// Extra ideal generators, as expressions over the thick context.
    #[serde(default)]
    pub cyclotomic: Vec<String>,
}

impl ThickConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_json(&read(path)?)
    }

    pub fn context(&self, setup: &Setup) -> Result<ThickContext, ConfigError> {
        let ext = setup
            .extended
            .as_ref()
            .ok_or_else(|| ConfigError::Invalid("thick strands need the extended datum".into()))?;
        let resolve_solid = |name: &str| -> Result<LabelId, ConfigError> {
            let id = ext.datum().resolve(name)?;
            Ok(ext.unbar(id))
        };
        let lambda = self
            .lambda
            .iter()
            .map(|m| {
                let entries = m.iter().map(|(k, &v)| Ok((resolve_solid(k)?, v))).collect::<Result<Vec<_>, ConfigError>>()?;
                Ok(Multiplicity::new(entries)?)
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        let nu = self
            .nu
            .iter()
            .map(|n| {
                let id = ext.datum().resolve(n)?;
                if ext.is_barred(id) {
                    return Err(ConfigError::Invalid(format!("ν entry `{n}` must be a solid label")));
                }
                Ok(id)
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        Ok(ThickContext::new(ext.clone(), setup.algebra.clone(), lambda, nu, self.ordered_nu)?)
    }
}
