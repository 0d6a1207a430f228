use std::collections::VecDeque;

use super::{
    base_report, describe_counterexample, fixed_point_check, iterate, require_axioms, require_xii,
    PremiseCheck, SolveMode, SolveReport, SolverConfig,
};
use crate::error::{Error, Result};
use crate::maps::{is_locally_contractive, Certification, SelfMap};
use crate::space::{FiniteInstance, PointId};

/// Where chain links are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalAt {
    At(f64),
    /// Every value of the instance's `t` grid.
    AllGrid,
}

impl EvalAt {
    fn ts(self, inst: &FiniteInstance) -> Vec<f64> {
        match self {
            EvalAt::At(t) => vec![t],
            EvalAt::AllGrid => inst.t_grid().to_vec(),
        }
    }
}

/// One link; `mu` is the smallest and `nu` the largest value over the
/// evaluation points.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainLink {
    pub from: PointId,
    pub to: PointId,
    pub mu: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub eta: f64,
    pub eval: EvalAt,
    pub points: Vec<PointId>,
    pub links: Vec<ChainLink>,
}

fn check_params(eta: f64, eval: EvalAt) -> Result<()> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Domain(format!("eta = {eta} must lie in (0,1)")));
    }
    if let EvalAt::At(t) = eval {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Domain(format!("t = {t} must be positive")));
        }
    }
    Ok(())
}

/// `μ > η` and `ν < 1−η` in both directions at every evaluation point.
fn link(inst: &FiniteInstance, u: PointId, v: PointId, eta: f64, ts: &[f64]) -> Option<ChainLink> {
    let mut mu = f64::INFINITY;
    let mut nu = f64::NEG_INFINITY;
    for &t in ts {
        for (a, b) in [(u, v), (v, u)] {
            let (m, n) = (inst.mu(a, b, t), inst.nu(a, b, t));
            if !(m > eta && n < 1.0 - eta) {
                return None;
            }
            if a == u {
                mu = mu.min(m);
                nu = nu.max(n);
            }
        }
    }
    Some(ChainLink { from: u, to: v, mu, nu })
}

fn components(inst: &FiniteInstance, eta: f64, ts: &[f64]) -> Vec<Vec<PointId>> {
    let n = inst.len();
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![PointId(start)];
        label[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if label[v] == usize::MAX && v != u && link(inst, PointId(u), PointId(v), eta, ts).is_some() {
                    label[v] = id;
                    members.push(PointId(v));
                    queue.push_back(v);
                }
            }
        }
        members.sort();
        out.push(members);
    }
    out
}

/// Shortest chain from `a` to `b` whose links satisfy `μ > η` and `ν < 1−η`.
/// Ties are broken by visiting neighbours in index order.
pub fn build_chain(
    inst: &FiniteInstance,
    a: PointId,
    b: PointId,
    eta: f64,
    eval: EvalAt,
) -> Result<Chain> {
    check_params(eta, eval)?;
    inst.check_id(a)?;
    inst.check_id(b)?;
    let ts = eval.ts(inst);
    let n = inst.len();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[a.0] = true;
    let mut queue = VecDeque::from([a.0]);
    while let Some(u) = queue.pop_front() {
        if u == b.0 {
            break;
        }
        for v in 0..n {
            if !seen[v] && link(inst, PointId(u), PointId(v), eta, &ts).is_some() {
                seen[v] = true;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    if !seen[b.0] {
        return Err(Error::NotChainable {
            from: inst.label(a).to_string(),
            to: inst.label(b).to_string(),
            components: components(inst, eta, &ts)
                .iter()
                .map(|c| inst.labels_of(c))
                .collect(),
        });
    }
    let mut points = vec![b];
    let mut cur = b.0;
    while let Some(p) = parent[cur] {
        points.push(PointId(p));
        cur = p;
    }
    points.reverse();
    let links = points
        .windows(2)
        .map(|w| link(inst, w[0], w[1], eta, &ts).expect("BFS only follows valid links"))
        .collect();
    Ok(Chain {
        eta,
        eval,
        points,
        links,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chainability {
    pub chainable: bool,
    pub components: Vec<Vec<PointId>>,
}

/// Whether the η-graph is connected, with its components.
pub fn is_chainable(inst: &FiniteInstance, eta: f64, eval: EvalAt) -> Result<Chainability> {
    check_params(eta, eval)?;
    let components = components(inst, eta, &eval.ts(inst));
    Ok(Chainability {
        chainable: components.len() == 1,
        components,
    })
}

/// Iterates an `(ε,λ)` locally contractive map on an ε-chainable instance.
///
/// Every step after the first is asserted to satisfy
/// `μ(xₘ, xₘ₊₁, t) > ε` and `ν(xₘ, xₘ₊₁, t) < 1−ε`. Fixed points need not be
/// unique.
pub fn chain_solve(
    inst: &FiniteInstance,
    map: &SelfMap,
    eps: f64,
    lambda: f64,
    config: &SolverConfig,
    t: f64,
) -> Result<SolveReport> {
    config.validate(inst)?;
    map.validate(inst)?;
    check_params(eps, EvalAt::At(t))?;
    let mut premises: Vec<PremiseCheck> = Vec::new();
    premises.extend(require_xii(inst, config.strict_xii.unwrap_or(true))?);
    premises.push(require_axioms(inst, config.tol)?);

    let chain = is_chainable(inst, eps, EvalAt::At(t))?;
    if !chain.chainable {
        let comps: Vec<Vec<String>> = chain.components.iter().map(|c| inst.labels_of(c)).collect();
        return Err(Error::hypothesis(
            "eps-chainable",
            format!("eta-graph at t = {t} has components {comps:?}"),
        ));
    }
    premises.push(PremiseCheck::new("eps-chainable", true, format!("connected at t = {t}")));

    let cert = is_locally_contractive(inst, map, eps, lambda)?;
    if let Certification::Refuted(c) = &cert {
        return Err(Error::hypothesis("local contraction", describe_counterexample(inst, c)));
    }
    premises.push(PremiseCheck::new(
        "local contraction",
        true,
        format!("certified with eps = {eps}, lambda = {lambda}"),
    ));

    let mut report = base_report(inst, SolveMode::Chain, iterate(map, config.x0, config.max_iter));
    for (m, w) in report.iterates.windows(2).enumerate().skip(1) {
        let (mu, nu) = (inst.mu(w[0], w[1], t), inst.nu(w[0], w[1], t));
        if !(mu > eps && nu < 1.0 - eps) {
            return Err(Error::InvariantViolation(format!(
                "step {m}: mu = {mu}, nu = {nu} at t = {t} (need mu > {eps}, nu < {})",
                1.0 - eps
            )));
        }
    }
    premises.push(PremiseCheck::new(
        "step invariant",
        true,
        format!("mu > {eps} and nu < 1-eps at t = {t} for every step m >= 1"),
    ));
    report.premise_checks = premises;
    report.certificate = cert.certificate().cloned();
    let fixed = fixed_point_check(inst, map, &report)?;
    report.premise_checks.push(fixed);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn s5_chain() {
        let s5 = fixtures::s5();
        let ids = s5.resolve(&["0", "0.5", "1", "1.5", "2"]).unwrap();
        let chain = build_chain(&s5, ids[0], ids[4], 0.5, EvalAt::At(1.0)).unwrap();
        assert_eq!(chain.points, ids);
        for l in &chain.links {
            assert!((l.mu - 1.0 / 1.5).abs() < 1e-15);
        }
        let single = build_chain(&s5, ids[2], ids[2], 0.5, EvalAt::At(1.0)).unwrap();
        assert_eq!(single.points, vec![ids[2]]);
        assert!(single.links.is_empty());
    }

    #[test]
    fn split_is_not_chainable() {
        let u3 = fixtures::u3_split();
        let (a, c) = (u3.point("a").unwrap(), u3.point("c").unwrap());
        match build_chain(&u3, a, c, 0.4, EvalAt::At(1.0)).unwrap_err() {
            Error::NotChainable { from, to, components } => {
                assert_eq!((from.as_str(), to.as_str()), ("a", "c"));
                assert_eq!(components, vec![vec!["a".to_string(), "b".into()], vec!["c".into()]]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chainability() {
        let s5 = fixtures::s5();
        assert!(is_chainable(&s5, 0.5, EvalAt::At(1.0)).unwrap().chainable);
        let c = is_chainable(&s5, 0.7, EvalAt::At(1.0)).unwrap();
        assert!(!c.chainable);
        assert_eq!(c.components.len(), 5);
        let one = fixtures::one_point();
        assert!(is_chainable(&one, 0.5, EvalAt::AllGrid).unwrap().chainable);
    }

    #[test]
    fn chain_solve_examples() {
        let one = fixtures::one_point();
        let report = chain_solve(
            &one,
            &SelfMap::identity(&one),
            0.5,
            0.9,
            &SolverConfig::new(PointId(0)),
            1.0,
        )
        .unwrap();
        assert_eq!(report.fixed_point, Some(PointId(0)));

        let u3 = fixtures::u3();
        let err = chain_solve(&u3, &SelfMap::identity(&u3), 0.4, 0.9, &SolverConfig::new(PointId(0)), 1.0)
            .unwrap_err();
        match err {
            Error::Hypothesis { premise, detail } => {
                assert_eq!(premise, "local contraction");
                assert!(detail.contains("(a, b)"), "{detail}");
            }
            other => panic!("{other:?}"),
        }

        let s5 = fixtures::s5();
        let target = s5.point("1").unwrap();
        let map = SelfMap::constant(&s5, target);
        for x0 in s5.ids() {
            let r = chain_solve(&s5, &map, 0.5, 0.8, &SolverConfig::new(x0), 1.0).unwrap();
            assert_eq!(r.fixed_point, Some(target));
        }
    }
}
