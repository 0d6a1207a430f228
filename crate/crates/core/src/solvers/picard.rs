use super::{
    base_report, describe_counterexample, describe_not_contractive, fixed_point_check,
    geometric_bound_check, iterate, require_axioms, require_xii, PremiseCheck, SolveMode,
    SolveReport, SolverConfig,
};
use crate::error::{Error, Result};
use crate::maps::{is_ts_if_contractive, min_contraction_constant, Certification, SelfMap};
use crate::space::FiniteInstance;

/// Certifies `map` at `k`, or at the smallest certifying constant when `k`
/// is `None`.
pub(super) fn certify(
    inst: &FiniteInstance,
    map: &SelfMap,
    k: Option<f64>,
    premise: &str,
) -> Result<(f64, Certification)> {
    let k = match k {
        Some(k) => k,
        None => {
            let c = min_contraction_constant(inst, map)?;
            c.certifying_k()
                .ok_or_else(|| Error::hypothesis(premise, describe_not_contractive(inst, &c)))?
        }
    };
    let cert = is_ts_if_contractive(inst, map, k)?;
    if let Certification::Refuted(c) = &cert {
        return Err(Error::hypothesis(premise, describe_counterexample(inst, c)));
    }
    Ok((k, cert))
}

/// Iterates a TS-IF contractive map until it reaches its fixed point.
///
/// Without `k` the smallest certifying constant is computed first. In finite
/// mode convergence means `T(xₙ) = xₙ` exactly.
pub fn picard_solve(
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
    let (k, cert) = certify(inst, map, k, "ts-if contraction")?;
    premises.push(PremiseCheck {
        name: "ts-if contraction".into(),
        holds: true,
        detail: format!("certified with k = {k}"),
    });

    let mut report = base_report(inst, SolveMode::Picard, iterate(map, config.x0, config.max_iter));
    report.premise_checks = premises;
    report.certificate = cert.certificate().cloned();
    report.k = Some(k);
    let bound = geometric_bound_check(&report, k);
    report.premise_checks.push(bound);
    let fixed = fixed_point_check(inst, map, &report)?;
    report.premise_checks.push(fixed);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::space::PointId;

    #[test]
    fn constant_map_on_u3() {
        let u3 = fixtures::u3();
        let (a, c) = (u3.point("a").unwrap(), u3.point("c").unwrap());
        let map = SelfMap::constant(&u3, a);
        let report = picard_solve(&u3, &map, &SolverConfig::new(c), Some(0.5)).unwrap();
        assert!(report.converged);
        assert_eq!(report.fixed_point, Some(a));
        assert!(report.iterations_used <= 2);
        assert!(report.premise("geometric-bound").unwrap().holds);
        assert_eq!(report.residual_mu.len(), report.iterations_used);
    }

    #[test]
    fn one_point_converges_immediately() {
        let one = fixtures::one_point();
        let report =
            picard_solve(&one, &SelfMap::identity(&one), &SolverConfig::new(PointId(0)), None)
                .unwrap();
        assert!(report.converged);
        assert_eq!(report.iterations_used, 0);
        assert_eq!(report.fixed_point, Some(PointId(0)));
    }

    #[test]
    fn uncertifiable_map_is_refused() {
        let u4 = fixtures::u4();
        let err = picard_solve(&u4, &fixtures::u4_map(), &SolverConfig::new(PointId(3)), None)
            .unwrap_err();
        match err {
            Error::Hypothesis { detail, .. } => assert!(detail.contains("(b, c)"), "{detail}"),
            other => panic!("{other:?}"),
        }
        let err = picard_solve(&u4, &fixtures::u4_map(), &SolverConfig::new(PointId(3)), Some(0.9))
            .unwrap_err();
        assert!(matches!(err, Error::Hypothesis { .. }));
    }

    #[test]
    fn strict_mode_rejects_product() {
        let e3 = fixtures::e3();
        let map = SelfMap::constant(&e3, PointId(0));
        let config = SolverConfig::new(PointId(2)).with_strict_xii(true);
        assert!(matches!(
            picard_solve(&e3, &map, &config, None),
            Err(Error::Hypothesis { .. })
        ));
        let report = picard_solve(&e3, &map, &SolverConfig::new(PointId(2)), None).unwrap();
        assert_eq!(report.fixed_point, Some(PointId(0)));
    }
}
