//! Fixed-point procedures on finite instances.

mod ball;
pub mod blackbox;
mod chain;
mod picard;
mod power;

use std::collections::HashMap;

pub use ball::ball_solve;
pub use chain::{build_chain, chain_solve, is_chainable, Chain, ChainLink, Chainability, EvalAt};
pub use picard::picard_solve;
pub use power::power_solve;

use crate::error::{Error, Result};
use crate::format::g17;
use crate::maps::{ContractionCertificate, ContractionConstant, Counterexample, SelfMap};
use crate::space::{check_ifm_axioms, AxiomOptions, FiniteInstance, PointId};

/// Slack on the geometric residual bound.
pub const GEOMETRIC_BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub x0: PointId,
    pub tol: f64,
    pub max_iter: usize,
    /// Power-map order.
    pub m: usize,
    /// Require idempotent operations; `None` uses the solver's default.
    pub strict_xii: Option<bool>,
}

impl SolverConfig {
    pub fn new(x0: PointId) -> Self {
        Self {
            x0,
            tol: 1e-9,
            max_iter: 1000,
            m: 1,
            strict_xii: None,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn with_strict_xii(mut self, strict: bool) -> Self {
        self.strict_xii = Some(strict);
        self
    }

    fn validate(&self, inst: &FiniteInstance) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!("tol = {} must be positive", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Domain("max_iter must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(Error::Domain("m must be at least 1".into()));
        }
        inst.check_id(self.x0)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Picard,
    Ball,
    Power,
    Chain,
}

impl SolveMode {
    pub fn name(self) -> &'static str {
        match self {
            SolveMode::Picard => "picard",
            SolveMode::Ball => "ball",
            SolveMode::Power => "power",
            SolveMode::Chain => "chain",
        }
    }
}

/// A named hypothesis or post-condition with its verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct PremiseCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl PremiseCheck {
    fn new(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            holds,
            detail: detail.into(),
        }
    }
}

/// Ball membership of one iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct Containment {
    pub n: usize,
    pub point: PointId,
    pub mu: f64,
    pub nu: f64,
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub mode: SolveMode,
    /// `x₀, x₁ = T(x₀), ...` up to the first point with `T(x) = x`.
    pub iterates: Vec<PointId>,
    pub t_values: Vec<f64>,
    /// `residual_mu[n][j] = μ(xₙ, xₙ₊₁, t_values[j])`.
    pub residual_mu: Vec<Vec<f64>>,
    pub residual_nu: Vec<Vec<f64>>,
    pub converged: bool,
    pub fixed_point: Option<PointId>,
    /// Number of moves; equals the number of residual rows.
    pub iterations_used: usize,
    pub premise_checks: Vec<PremiseCheck>,
    /// Repeating iterates when the sequence cycles without a fixed point.
    pub cycle: Option<Vec<PointId>>,
    pub containment: Vec<Containment>,
    pub certificate: Option<ContractionCertificate>,
    /// Contraction constant used for the geometric bound.
    pub k: Option<f64>,
}

impl SolveReport {
    pub fn premise(&self, name: &str) -> Option<&PremiseCheck> {
        self.premise_checks.iter().find(|p| p.name == name)
    }

    /// CSV with header `n,point,t,mu_residual,nu_residual`.
    pub fn trace_csv(&self, inst: &FiniteInstance) -> Result<String> {
        let io = |e: csv::Error| Error::Construction(format!("csv: {e}"));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "point", "t", "mu_residual", "nu_residual"])
            .map_err(io)?;
        for (n, (mus, nus)) in self.residual_mu.iter().zip(&self.residual_nu).enumerate() {
            for ((t, mu), nu) in self.t_values.iter().zip(mus).zip(nus) {
                w.write_record([
                    n.to_string(),
                    inst.label(self.iterates[n]).to_string(),
                    g17(*t),
                    g17(*mu),
                    g17(*nu),
                ])
                .map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Construction(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

struct Iteration {
    iterates: Vec<PointId>,
    converged: bool,
    cycle: Option<Vec<PointId>>,
}

/// Applies `map` from `x0` until `T(x) = x`, a repeat, or `max_iter` moves.
fn iterate(map: &SelfMap, x0: PointId, max_iter: usize) -> Iteration {
    let mut iterates = vec![x0];
    let mut seen = HashMap::from([(x0, 0usize)]);
    let mut x = x0;
    loop {
        let next = map.apply(x);
        if next == x {
            return Iteration {
                iterates,
                converged: true,
                cycle: None,
            };
        }
        if iterates.len() > max_iter {
            break;
        }
        if let Some(&first) = seen.get(&next) {
            let cycle = iterates[first..].to_vec();
            iterates.push(next);
            return Iteration {
                iterates,
                converged: false,
                cycle: Some(cycle),
            };
        }
        seen.insert(next, iterates.len());
        iterates.push(next);
        x = next;
    }
    iterates.truncate(max_iter + 1);
    Iteration {
        iterates,
        converged: false,
        cycle: None,
    }
}

fn base_report(inst: &FiniteInstance, mode: SolveMode, run: Iteration) -> SolveReport {
    let t_values = inst.t_grid().to_vec();
    let moves = run.iterates.len() - 1;
    let pairs = || run.iterates.windows(2).map(|w| (w[0], w[1]));
    let residual_mu = pairs()
        .map(|(a, b)| t_values.iter().map(|&t| inst.mu(a, b, t)).collect())
        .collect();
    let residual_nu = pairs()
        .map(|(a, b)| t_values.iter().map(|&t| inst.nu(a, b, t)).collect())
        .collect();
    let fixed_point = run.converged.then(|| *run.iterates.last().expect("nonempty"));
    SolveReport {
        mode,
        iterates: run.iterates,
        t_values,
        residual_mu,
        residual_nu,
        converged: run.converged,
        fixed_point,
        iterations_used: moves,
        premise_checks: Vec::new(),
        cycle: run.cycle,
        containment: Vec::new(),
        certificate: None,
        k: None,
    }
}

/// Checks `μₙ ≥ min(1, μ₀/kⁿ)` and `νₙ ≤ kⁿ·ν₀` for every residual row.
pub fn geometric_bound_check(report: &SolveReport, k: f64) -> PremiseCheck {
    let (Some(mu0), Some(nu0)) = (report.residual_mu.first(), report.residual_nu.first()) else {
        return PremiseCheck::new("geometric-bound", true, "no moves");
    };
    for (n, (mus, nus)) in report.residual_mu.iter().zip(&report.residual_nu).enumerate() {
        let kn = k.powi(n as i32);
        for j in 0..report.t_values.len() {
            let mu_floor = (mu0[j] / kn).min(1.0) - GEOMETRIC_BOUND_SLACK;
            let nu_ceiling = kn * nu0[j] + GEOMETRIC_BOUND_SLACK;
            if mus[j] < mu_floor || nus[j] > nu_ceiling {
                return PremiseCheck::new(
                    "geometric-bound",
                    false,
                    format!(
                        "step {n}, t = {}: mu = {} (floor {}), nu = {} (ceiling {})",
                        report.t_values[j], mus[j], mu_floor, nus[j], nu_ceiling
                    ),
                );
            }
        }
    }
    PremiseCheck::new(
        "geometric-bound",
        true,
        format!("mu_n >= min(1, mu_0/k^n) and nu_n <= k^n nu_0 with k = {k}"),
    )
}

fn fixed_point_check(inst: &FiniteInstance, map: &SelfMap, report: &SolveReport) -> Result<PremiseCheck> {
    match report.fixed_point {
        Some(p) if map.apply(p) == p => Ok(PremiseCheck::new(
            "fixed-point",
            true,
            format!("T({0}) = {0}", inst.label(p)),
        )),
        Some(p) => Err(Error::InvariantViolation(format!(
            "reported fixed point `{}` maps to `{}`",
            inst.label(p),
            inst.label(map.apply(p))
        ))),
        None => Ok(PremiseCheck::new("fixed-point", false, "no fixed point reached")),
    }
}

fn require_xii(inst: &FiniteInstance, strict: bool) -> Result<Option<PremiseCheck>> {
    if !strict {
        return Ok(None);
    }
    use crate::algebra::UnitOperation;
    let (tn, tc) = (inst.tnorm(), inst.tconorm());
    if !tn.is_idempotent() || !tc.is_idempotent() {
        return Err(Error::hypothesis(
            "(xii) idempotent operations",
            format!("t-norm `{}` or t-conorm `{}` is not idempotent", tn.kind_name(), tc.kind_name()),
        ));
    }
    Ok(Some(PremiseCheck::new(
        "(xii) idempotent operations",
        true,
        format!("{} / {}", tn.kind_name(), tc.kind_name()),
    )))
}

fn require_axioms(inst: &FiniteInstance, tol: f64) -> Result<PremiseCheck> {
    let report = check_ifm_axioms(inst, &AxiomOptions::new(tol));
    match report.first_failure() {
        None => Ok(PremiseCheck::new("axioms", true, "(i)-(xi) hold")),
        Some(w) => Err(Error::hypothesis(
            "axioms",
            format!(
                "axiom {} fails at points {:?}",
                w.axiom.label(),
                inst.labels_of(&w.points)
            ),
        )),
    }
}

pub(crate) fn describe_counterexample(inst: &FiniteInstance, c: &Counterexample) -> String {
    let clause = c.clause.name();
    let mut s = format!(
        "{clause} clause fails at ({}, {}), t = {}: lhs {} vs rhs {}",
        inst.label(c.x),
        inst.label(c.y),
        c.t,
        c.lhs,
        c.rhs
    );
    if let Some(note) = &c.note {
        s.push_str("; ");
        s.push_str(note);
    }
    s
}

pub(crate) fn describe_not_contractive(inst: &FiniteInstance, c: &ContractionConstant) -> String {
    match c {
        ContractionConstant::NotContractive {
            ratio,
            pairs,
            reason,
        } => {
            let pairs: Vec<String> = pairs
                .iter()
                .map(|&(x, y)| format!("({}, {})", inst.label(x), inst.label(y)))
                .collect();
            format!("ratio {ratio} >= 1 at pairs {}; {reason}", pairs.join(", "))
        }
        ContractionConstant::Contractive { k_star } => format!("contractive with k* = {k_star}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_stops_at_fixed_points_and_cycles() {
        let t = SelfMap::new("t", vec![PointId(1), PointId(2), PointId(2)]);
        let run = iterate(&t, PointId(0), 10);
        assert!(run.converged);
        assert_eq!(run.iterates, vec![PointId(0), PointId(1), PointId(2)]);

        let swap = SelfMap::new("swap", vec![PointId(1), PointId(0)]);
        let run = iterate(&swap, PointId(0), 10);
        assert!(!run.converged);
        assert_eq!(run.cycle, Some(vec![PointId(0), PointId(1)]));

        let run = iterate(&t, PointId(0), 1);
        assert!(!run.converged);
        assert_eq!(run.iterates.len(), 2);
    }
}
