//! Serialized report shapes. Field order here is the order on the wire.

use std::time::{SystemTime, UNIX_EPOCH};

use ifp_core::analysis::ModulusTable;
use ifp_core::maps::{ContractionKind, Counterexample};
use ifp_core::solvers::{Chain, PremiseCheck};
use ifp_core::space::AxiomReport;
use ifp_core::{ContractionCertificate, ContractionConstant, FiniteInstance, PointId, SelfMap, SolveReport};
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub status: Status,
    pub manifest: Manifest,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    pub result: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    VerdictFalse,
    HypothesisFailed,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerdictFalse | Status::HypothesisFailed => 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub input: String,
    pub options: Options,
    pub exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_path: Option<String>,
}

/// Options after defaults and overrides are resolved.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Options {
    pub tol: f64,
    pub t_grid: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_xii: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auto_k: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_grid: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enum_cap: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub generated_at_unix: u64,
}

impl Meta {
    pub fn now() -> Self {
        Self {
            tool: "ifp",
            version: env!("CARGO_PKG_VERSION"),
            generated_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

fn labels(inst: &FiniteInstance, ps: &[PointId]) -> Vec<String> {
    inst.labels_of(ps)
}

#[derive(Debug, Serialize)]
pub struct HypothesisFailure {
    pub premise: String,
    pub detail: String,
}

// check-axioms

#[derive(Debug, Serialize)]
pub struct AxiomsResult {
    pub all_pass: bool,
    pub rows: Vec<AxiomRow>,
    pub witnesses: Vec<WitnessBody>,
}

#[derive(Debug, Serialize)]
pub struct AxiomRow {
    pub axiom: &'static str,
    pub statement: &'static str,
    pub verdict: &'static str,
}

#[derive(Debug, Serialize)]
pub struct WitnessBody {
    pub axiom: &'static str,
    pub points: Vec<String>,
    pub t: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

impl AxiomsResult {
    pub fn new(inst: &FiniteInstance, report: &AxiomReport) -> Self {
        Self {
            all_pass: report.all_pass(),
            rows: report
                .verdicts
                .iter()
                .map(|(a, v)| AxiomRow {
                    axiom: a.label(),
                    statement: a.statement(),
                    verdict: v.name(),
                })
                .collect(),
            witnesses: report
                .witnesses
                .iter()
                .map(|w| WitnessBody {
                    axiom: w.axiom.label(),
                    points: labels(inst, &w.points),
                    t: w.t.clone(),
                    lhs: w.lhs,
                    rhs: w.rhs,
                })
                .collect(),
        }
    }
}

// certify

#[derive(Debug, Serialize)]
pub struct MapEntry {
    pub point: String,
    pub image: String,
}

pub fn map_entries(inst: &FiniteInstance, map: &SelfMap) -> Vec<MapEntry> {
    map.image_labels(inst)
        .into_iter()
        .map(|(point, image)| MapEntry { point, image })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct CertifyResult {
    pub kind: &'static str,
    pub map: Vec<MapEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<ConstantBody>,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleBody>,
}

#[derive(Debug, Serialize)]
pub struct ConstantBody {
    pub contractive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl ConstantBody {
    pub fn new(inst: &FiniteInstance, c: &ContractionConstant) -> Self {
        match c {
            ContractionConstant::Contractive { k_star } => Self {
                contractive: true,
                k_star: Some(*k_star),
                ratio: None,
                pairs: Vec::new(),
                reason: None,
            },
            ContractionConstant::NotContractive { ratio, pairs, reason } => Self {
                contractive: false,
                k_star: None,
                ratio: ratio.is_finite().then_some(*ratio),
                pairs: pairs
                    .iter()
                    .map(|&(x, y)| [inst.label(x).to_string(), inst.label(y).to_string()])
                    .collect(),
                reason: Some(reason.clone()),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CertificateBody {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub checked_t: Vec<f64>,
    pub witness_mode: &'static str,
}

impl CertificateBody {
    pub fn new(c: &ContractionCertificate) -> Self {
        let (k, eps, lambda) = match c.kind {
            ContractionKind::TsIf { k } => (Some(k), None, None),
            ContractionKind::Local { eps, lambda } => (None, Some(eps), Some(lambda)),
        };
        Self {
            kind: c.kind.name(),
            k,
            eps,
            lambda,
            checked_t: c.checked_t.clone(),
            witness_mode: c.witness_mode.name(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CounterexampleBody {
    pub x: String,
    pub y: String,
    pub t: f64,
    pub clause: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CounterexampleBody {
    pub fn new(inst: &FiniteInstance, c: &Counterexample) -> Self {
        Self {
            x: inst.label(c.x).to_string(),
            y: inst.label(c.y).to_string(),
            t: c.t,
            clause: c.clause.name(),
            lhs: c.lhs,
            rhs: c.rhs,
            note: c.note.clone(),
        }
    }
}

// solve

#[derive(Debug, Serialize)]
pub struct SolveResult {
    pub mode: &'static str,
    pub x0: String,
    pub converged: bool,
    pub fixed_point: Option<String>,
    pub iterations_used: usize,
    pub iterates: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateBody>,
    pub premise_checks: Vec<PremiseBody>,
    pub t_values: Vec<f64>,
    pub residual_mu: Vec<Vec<f64>>,
    pub residual_nu: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub containment: Vec<ContainmentBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<ModulusRowBody>>,
    /// Every point with `T(x) = x`, by exhaustive scan.
    pub oracle_fixed_points: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct PremiseBody {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl From<&PremiseCheck> for PremiseBody {
    fn from(p: &PremiseCheck) -> Self {
        Self {
            name: p.name.clone(),
            holds: p.holds,
            detail: p.detail.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ContainmentBody {
    pub n: usize,
    pub point: String,
    pub mu: f64,
    pub nu: f64,
    pub inside: bool,
}

#[derive(Debug, Serialize)]
pub struct ModulusRowBody {
    pub eps: f64,
    pub r: Option<f64>,
}

pub fn modulus_rows(table: &ModulusTable) -> Vec<ModulusRowBody> {
    table.rows.iter().map(|r| ModulusRowBody { eps: r.eps, r: r.r }).collect()
}

impl SolveResult {
    pub fn new(inst: &FiniteInstance, report: &SolveReport, oracle: &[PointId]) -> Self {
        Self {
            mode: report.mode.name(),
            x0: inst.label(report.iterates[0]).to_string(),
            converged: report.converged,
            fixed_point: report.fixed_point.map(|p| inst.label(p).to_string()),
            iterations_used: report.iterations_used,
            iterates: labels(inst, &report.iterates),
            cycle: report.cycle.as_ref().map(|c| labels(inst, c)),
            k: report.k,
            certificate: report.certificate.as_ref().map(CertificateBody::new),
            premise_checks: report.premise_checks.iter().map(PremiseBody::from).collect(),
            t_values: report.t_values.clone(),
            residual_mu: report.residual_mu.clone(),
            residual_nu: report.residual_nu.clone(),
            containment: report
                .containment
                .iter()
                .map(|c| ContainmentBody {
                    n: c.n,
                    point: inst.label(c.point).to_string(),
                    mu: c.mu,
                    nu: c.nu,
                    inside: c.inside,
                })
                .collect(),
            modulus: None,
            oracle_fixed_points: labels(inst, oracle),
        }
    }
}

// chain

#[derive(Debug, Serialize)]
pub struct ChainResult {
    pub from: String,
    pub to: String,
    pub eta: f64,
    pub eval: EvalBody,
    pub chainable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub links: Option<Vec<LinkBody>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalBody {
    T(f64),
    AllGrid(Vec<f64>),
}

#[derive(Debug, Serialize)]
pub struct LinkBody {
    pub from: String,
    pub to: String,
    pub mu: f64,
    pub nu: f64,
}

pub fn chain_links(inst: &FiniteInstance, chain: &Chain) -> Vec<LinkBody> {
    chain
        .links
        .iter()
        .map(|l| LinkBody {
            from: inst.label(l.from).to_string(),
            to: inst.label(l.to).to_string(),
            mu: l.mu,
            nu: l.nu,
        })
        .collect()
}

// enumerate

#[derive(Debug, Serialize)]
pub struct EnumerateResult {
    pub k: f64,
    pub cap: u64,
    pub count: usize,
    pub maps: Vec<EnumeratedMap>,
}

#[derive(Debug, Serialize)]
pub struct EnumeratedMap {
    pub images: Vec<String>,
    pub fixed_points: Vec<String>,
}
