use super::picard::certify;
use super::{
    base_report, geometric_bound_check, iterate, require_axioms, require_xii, PremiseCheck,
    SolveMode, SolveReport, SolverConfig,
};
use crate::analysis::{standard_eps_grid, uniform_continuity_modulus};
use crate::error::{Error, Result};
use crate::maps::SelfMap;
use crate::space::FiniteInstance;

/// Finds a fixed point of `map` through a contractive power `B = T^m`.
///
/// `map` must have a complete continuity modulus over the standard `ε` grid.
/// The fixed point of `B` is then checked to be fixed by `map` itself.
pub fn power_solve(
    inst: &FiniteInstance,
    map: &SelfMap,
    config: &SolverConfig,
    k: Option<f64>,
) -> Result<SolveReport> {
    config.validate(inst)?;
    map.validate(inst)?;
    let mut premises: Vec<PremiseCheck> = Vec::new();
    premises.extend(require_xii(inst, config.strict_xii.unwrap_or(false))?);
    premises.push(require_axioms(inst, config.tol)?);

    let table = uniform_continuity_modulus(inst, map, &standard_eps_grid())?;
    if let Some(eps) = table.first_gap() {
        return Err(Error::hypothesis(
            "t-uniform continuity",
            format!("no r qualifies for eps = {eps}"),
        ));
    }
    premises.push(PremiseCheck::new(
        "t-uniform continuity",
        true,
        format!("modulus complete over {} eps values", table.rows.len()),
    ));

    let m = config.m;
    let power = map.power(m);
    let premise = format!("ts-if contraction of T^{m}");
    let (k, cert) = certify(inst, &power, k, &premise)?;
    premises.push(PremiseCheck::new(premise, true, format!("certified with k = {k}")));

    let mut report = base_report(inst, SolveMode::Power, iterate(&power, config.x0, config.max_iter));
    report.premise_checks = premises;
    report.certificate = cert.certificate().cloned();
    report.k = Some(k);
    let bound = geometric_bound_check(&report, k);
    report.premise_checks.push(bound);
    if let Some(y) = report.fixed_point {
        let ty = map.apply(y);
        if ty != y {
            return Err(Error::InvariantViolation(format!(
                "fixed point `{}` of T^{m} is mapped by T to `{}`",
                inst.label(y),
                inst.label(ty)
            )));
        }
        report.premise_checks.push(PremiseCheck::new(
            "fixed-point",
            true,
            format!("T({0}) = {0}", inst.label(y)),
        ));
    } else {
        report
            .premise_checks
            .push(PremiseCheck::new("fixed-point", false, "no fixed point reached"));
    }
    Ok(report)
}
