use super::{
    base_report, describe_counterexample, describe_not_contractive, fixed_point_check,
    geometric_bound_check, iterate, require_axioms, require_xii, Containment, PremiseCheck,
    SolveMode, SolveReport, SolverConfig,
};
use crate::error::{Error, Result};
use crate::maps::{
    is_ts_if_contractive_on, min_contraction_constant, min_contraction_constant_on, Certification,
    ContractionConstant, SelfMap,
};
use crate::space::{ball_members, Ball, FiniteInstance};

const MU_PREMISE: &str = "k·μ(x,Tx,t) > 1−r";
const NU_PREMISE: &str = "ν(x,Tx,t)/k < r";

/// Iterates from the center of a closed ball on which `map` contracts.
///
/// The premises `k·μ(x,Tx,t) > 1−r` and `ν(x,Tx,t)/k < r` are checked at the
/// center. Every iterate is re-checked for membership in the ball.
pub fn ball_solve(
    inst: &FiniteInstance,
    map: &SelfMap,
    ball: &Ball,
    k: Option<f64>,
    config: &SolverConfig,
) -> Result<SolveReport> {
    inst.check_id(ball.center)?;
    let config = SolverConfig {
        x0: ball.center,
        ..config.clone()
    };
    config.validate(inst)?;
    map.validate(inst)?;
    let mut premises: Vec<PremiseCheck> = Vec::new();
    premises.extend(require_xii(inst, config.strict_xii.unwrap_or(true))?);
    premises.push(require_axioms(inst, config.tol)?);

    let members: Vec<_> = ball_members(inst, ball)?.into_iter().collect();
    let premise = "ts-if contraction on the ball";
    let k = match k {
        Some(k) => k,
        None => {
            let mut c = min_contraction_constant(inst, map)?;
            if c.certifying_k().is_none() {
                c = min_contraction_constant_on(inst, map, &members)?;
            }
            match c {
                // No constraining pair: any k works, so take one that the
                // center premise can accept.
                ContractionConstant::Contractive { k_star } if k_star == 0.0 => 1.0 - ball.r / 2.0,
                ContractionConstant::Contractive { k_star } => k_star,
                ContractionConstant::NotContractive { .. } => {
                    return Err(Error::hypothesis(premise, describe_not_contractive(inst, &c)))
                }
            }
        }
    };
    let cert = is_ts_if_contractive_on(inst, map, k, &members)?;
    if let Certification::Refuted(c) = &cert {
        return Err(Error::hypothesis(premise, describe_counterexample(inst, c)));
    }
    premises.push(PremiseCheck::new(
        premise,
        true,
        format!("certified with k = {k} on {} members", members.len()),
    ));

    let x = ball.center;
    let tx = map.apply(x);
    let mu = inst.mu(x, tx, ball.t);
    let nu = inst.nu(x, tx, ball.t);
    let (lhs, rhs) = (k * mu, 1.0 - ball.r);
    if !(lhs > rhs) {
        return Err(Error::hypothesis(MU_PREMISE, format!("{lhs} ≯ {rhs}")));
    }
    premises.push(PremiseCheck::new(MU_PREMISE, true, format!("{lhs} > {rhs}")));
    let lhs = nu / k;
    if !(lhs < ball.r) {
        return Err(Error::hypothesis(NU_PREMISE, format!("{lhs} ≮ {}", ball.r)));
    }
    premises.push(PremiseCheck::new(NU_PREMISE, true, format!("{lhs} < {}", ball.r)));

    let mut report = base_report(inst, SolveMode::Ball, iterate(map, x, config.max_iter));
    for (n, &p) in report.iterates.iter().enumerate() {
        let (inside, mu, nu) = ball.contains(inst, p);
        if !inside {
            return Err(Error::InvariantViolation(format!(
                "iterate {n} (`{}`) leaves the ball: mu = {mu}, nu = {nu}",
                inst.label(p)
            )));
        }
        report.containment.push(Containment {
            n,
            point: p,
            mu,
            nu,
            inside,
        });
    }
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
    fn u3_ball_examples() {
        let u3 = fixtures::u3();
        let a = u3.point("a").unwrap();
        let map = SelfMap::constant(&u3, a);
        let config = SolverConfig::new(a);
        let ball = Ball::closed(a, 0.6, 1.0).unwrap();
        let report = ball_solve(&u3, &map, &ball, Some(0.5), &config).unwrap();
        assert_eq!(report.fixed_point, Some(a));
        assert!(report.containment.iter().all(|c| c.inside));

        let ball = Ball::closed(a, 0.3, 1.0).unwrap();
        let err = ball_solve(&u3, &map, &ball, Some(0.5), &config).unwrap_err();
        match err {
            Error::Hypothesis { premise, detail } => {
                assert_eq!(premise, "k·μ(x,Tx,t) > 1−r");
                assert_eq!(detail, "0.5 ≯ 0.7");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn one_point_ball() {
        let one = fixtures::one_point();
        let ball = Ball::closed(PointId(0), 0.5, 1.0).unwrap();
        let report = ball_solve(
            &one,
            &SelfMap::identity(&one),
            &ball,
            None,
            &SolverConfig::new(PointId(0)),
        )
        .unwrap();
        assert!(report.converged);
        assert_eq!(report.containment.len(), 1);
    }
}
