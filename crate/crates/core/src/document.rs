//! JSON instance documents.
//!
//! ```json
//! {
//!   "points": ["a", "b"],
//!   "tnorm": "minimum",
//!   "tconorm": "maximum",
//!   "t_grid": [1],
//!   "profile": {"kind": "standard", "dist": [[0, 1], [1, 0]]},
//!   "map": {"a": "a", "b": "a"}
//! }
//! ```
//!
//! Operations are named (`minimum`, `product`, `lukasiewicz` and `maximum`,
//! `probabilistic-sum`, `lukasiewicz`) or given as
//! `{"kind": "custom-table", "step": h, "table": [[...]], "idempotent": bool}`.
//! Profiles are `constant` (`mu`, `nu`), `standard` (`dist`) or
//! `exponential` (`base`, `dist`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{MeshTable, TConorm, TConormKind, TNorm, TNormKind, UnitOperation};
use crate::error::{Error, Result};
use crate::maps::SelfMap;
use crate::space::{induced_from_metric, FiniteInstance, MetricScheme, PairProfile, SquareMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub points: Vec<String>,
    pub tnorm: OperationSpec,
    pub tconorm: OperationSpec,
    pub t_grid: Vec<f64>,
    pub profile: ProfileSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperationSpec {
    Named(String),
    Table(TableSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub kind: TableKind,
    pub step: f64,
    pub table: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableKind {
    #[serde(rename = "custom-table")]
    CustomTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileSpec {
    Constant { mu: Vec<Vec<f64>>, nu: Vec<Vec<f64>> },
    Standard { dist: Vec<Vec<f64>> },
    Exponential { base: f64, dist: Vec<Vec<f64>> },
}

/// An instance together with the map its document declares, if any.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub instance: FiniteInstance,
    pub map: Option<SelfMap>,
}

fn parse_error(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.into(),
        message: message.into(),
    }
}

/// Parses a document; errors carry the path of the offending field.
pub fn parse_document(text: &str) -> Result<InstanceDocument> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "profile" {
            if let Some(refined) = refine_profile_error(text) {
                return refined;
            }
        }
        parse_error(if path.is_empty() { ".".into() } else { path }, e.inner().to_string())
    })
}

// Tagged enums buffer their content, so errors inside a profile lose their
// path. Re-reading the payload with the concrete shape recovers it.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct ConstantPayload {
    kind: String,
    mu: Vec<Vec<f64>>,
    nu: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct StandardPayload {
    kind: String,
    dist: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct ExponentialPayload {
    kind: String,
    base: f64,
    dist: Vec<Vec<f64>>,
}

fn payload_error<T: serde::de::DeserializeOwned>(v: &serde_json::Value) -> Option<Error> {
    serde_path_to_error::deserialize::<_, T>(v).err().map(|e| {
        parse_error(format!("profile.{}", e.path()), e.inner().to_string())
    })
}

fn refine_profile_error(text: &str) -> Option<Error> {
    let doc: serde_json::Value = serde_json::from_str(text).ok()?;
    let profile = doc.get("profile")?;
    match profile.get("kind")?.as_str()? {
        "constant" => payload_error::<ConstantPayload>(profile),
        "standard" => payload_error::<StandardPayload>(profile),
        "exponential" => payload_error::<ExponentialPayload>(profile),
        _ => None,
    }
}

fn tnorm_of(spec: &OperationSpec) -> Result<TNorm> {
    match spec {
        OperationSpec::Named(name) => name.parse().map_err(|e: Error| parse_error("tnorm", e.to_string())),
        OperationSpec::Table(t) => {
            let table = MeshTable::new(t.step, t.table.clone())
                .map_err(|e| parse_error("tnorm.table", e.to_string()))?;
            TNorm::custom(table, t.idempotent).map_err(|e| parse_error("tnorm", e.to_string()))
        }
    }
}

fn tconorm_of(spec: &OperationSpec) -> Result<TConorm> {
    match spec {
        OperationSpec::Named(name) => name.parse().map_err(|e: Error| parse_error("tconorm", e.to_string())),
        OperationSpec::Table(t) => {
            let table = MeshTable::new(t.step, t.table.clone())
                .map_err(|e| parse_error("tconorm.table", e.to_string()))?;
            TConorm::custom(table, t.idempotent).map_err(|e| parse_error("tconorm", e.to_string()))
        }
    }
}

impl InstanceDocument {
    /// Builds the instance, replacing the `t` grid when `t_grid` is given.
    pub fn build(&self, t_grid: Option<Vec<f64>>) -> Result<LoadedInstance> {
        let tnorm = tnorm_of(&self.tnorm)?;
        let tconorm = tconorm_of(&self.tconorm)?;
        let t_grid = t_grid.unwrap_or_else(|| self.t_grid.clone());
        let at = |field: &str| {
            let field = field.to_string();
            move |e: Error| parse_error(field.clone(), e.to_string())
        };
        let instance = match &self.profile {
            ProfileSpec::Constant { mu, nu } => {
                let mu = SquareMatrix::from_rows(mu.clone()).map_err(at("profile.mu"))?;
                let nu = SquareMatrix::from_rows(nu.clone()).map_err(at("profile.nu"))?;
                FiniteInstance::new(
                    self.points.clone(),
                    PairProfile::Constant { mu, nu },
                    tnorm,
                    tconorm,
                    t_grid,
                )
                .map_err(at("profile"))?
            }
            ProfileSpec::Standard { dist } => induced_from_metric(
                self.points.clone(),
                dist.clone(),
                MetricScheme::Standard,
                tnorm,
                tconorm,
                t_grid,
            )
            .map_err(at("profile.dist"))?,
            ProfileSpec::Exponential { base, dist } => induced_from_metric(
                self.points.clone(),
                dist.clone(),
                MetricScheme::Exponential { base: *base },
                tnorm,
                tconorm,
                t_grid,
            )
            .map_err(at("profile"))?,
        };
        let map = match &self.map {
            None => None,
            Some(table) => {
                let pairs: Vec<(&str, &str)> =
                    table.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
                Some(
                    SelfMap::from_labels(&instance, "map", &pairs).map_err(at("map"))?,
                )
            }
        };
        Ok(LoadedInstance { instance, map })
    }

    /// The document describing `inst` (and `map`). Black-box profiles have no
    /// document form.
    pub fn from_instance(inst: &FiniteInstance, map: Option<&SelfMap>) -> Result<Self> {
        let profile = match inst.profile() {
            PairProfile::Constant { mu, nu } => ProfileSpec::Constant {
                mu: mu.rows(),
                nu: nu.rows(),
            },
            PairProfile::Standard { dist } => ProfileSpec::Standard { dist: dist.rows() },
            PairProfile::Exponential { base, dist } => ProfileSpec::Exponential {
                base: *base,
                dist: dist.rows(),
            },
            PairProfile::Blackbox(_) => {
                return Err(Error::Construction("black-box profiles cannot be serialized".into()))
            }
        };
        let tnorm = match inst.tnorm().kind() {
            TNormKind::CustomTable(t) => table_spec(t, inst.tnorm().is_idempotent()),
            _ => OperationSpec::Named(inst.tnorm().kind_name().into()),
        };
        let tconorm = match inst.tconorm().kind() {
            TConormKind::CustomTable(t) => table_spec(t, inst.tconorm().is_idempotent()),
            _ => OperationSpec::Named(inst.tconorm().kind_name().into()),
        };
        Ok(Self {
            points: inst.labels().to_vec(),
            tnorm,
            tconorm,
            t_grid: inst.t_grid().to_vec(),
            profile,
            map: map.map(|m| m.image_labels(inst).into_iter().collect()),
        })
    }
}

fn table_spec(t: &MeshTable, idempotent: bool) -> OperationSpec {
    OperationSpec::Table(TableSpec {
        kind: TableKind::CustomTable,
        step: t.step(),
        table: t.rows(),
        idempotent: Some(idempotent),
    })
}

/// Parses and builds in one step.
pub fn load_instance(text: &str, t_grid: Option<Vec<f64>>) -> Result<LoadedInstance> {
    parse_document(text)?.build(t_grid)
}
