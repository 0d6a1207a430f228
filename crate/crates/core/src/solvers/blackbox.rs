//! Picard iteration on spaces given only by evaluators, such as a real
//! interval. Convergence is judged by residual tolerance on the `t` grid.

use crate::error::{Error, Result};

type Degree<P> = Box<dyn Fn(&P, &P, f64) -> f64 + Send + Sync>;

/// A space known only through its `μ` and `ν` evaluators.
pub struct ContinuumSpace<P> {
    mu: Degree<P>,
    nu: Degree<P>,
    t_grid: Vec<f64>,
}

impl<P> ContinuumSpace<P> {
    pub fn new(
        mu: impl Fn(&P, &P, f64) -> f64 + Send + Sync + 'static,
        nu: impl Fn(&P, &P, f64) -> f64 + Send + Sync + 'static,
        t_grid: Vec<f64>,
    ) -> Result<Self> {
        if t_grid.is_empty() || t_grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::Construction("t grid must be nonempty and positive".into()));
        }
        Ok(Self {
            mu: Box::new(mu),
            nu: Box::new(nu),
            t_grid,
        })
    }

    pub fn mu(&self, x: &P, y: &P, t: f64) -> f64 {
        (self.mu)(x, y, t)
    }

    pub fn nu(&self, x: &P, y: &P, t: f64) -> f64 {
        (self.nu)(x, y, t)
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlackboxReport<P> {
    pub iterates: Vec<P>,
    pub residual_mu: Vec<Vec<f64>>,
    pub residual_nu: Vec<Vec<f64>>,
    pub converged: bool,
    pub iterations_used: usize,
    /// Geometric bound verdict when a contraction constant was supplied.
    pub geometric_bound: Option<bool>,
}

impl<P> BlackboxReport<P> {
    pub fn last(&self) -> &P {
        self.iterates.last().expect("at least the start point")
    }
}

/// Iterates `map` from `x0` until `1 − μ(xₙ,xₙ₊₁,t) ≤ tol` and
/// `ν(xₙ,xₙ₊₁,t) ≤ tol` on the whole grid, or `max_iter` steps.
pub fn picard_blackbox<P: Clone>(
    space: &ContinuumSpace<P>,
    map: impl Fn(&P) -> P,
    x0: P,
    tol: f64,
    max_iter: usize,
    k: Option<f64>,
) -> Result<BlackboxReport<P>> {
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::Domain("tol must be positive and max_iter at least 1".into()));
    }
    if let Some(k) = k {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Domain(format!("k = {k} must lie in (0,1)")));
        }
    }
    let mut iterates = vec![x0];
    let mut residual_mu: Vec<Vec<f64>> = Vec::new();
    let mut residual_nu: Vec<Vec<f64>> = Vec::new();
    let mut converged = false;
    while residual_mu.len() < max_iter {
        let x = iterates.last().expect("nonempty");
        let next = map(x);
        let mus: Vec<f64> = space.t_grid.iter().map(|&t| space.mu(x, &next, t)).collect();
        let nus: Vec<f64> = space.t_grid.iter().map(|&t| space.nu(x, &next, t)).collect();
        let close = mus.iter().zip(&nus).all(|(m, n)| 1.0 - m <= tol && *n <= tol);
        residual_mu.push(mus);
        residual_nu.push(nus);
        iterates.push(next);
        if close {
            converged = true;
            break;
        }
    }
    let geometric_bound = k.map(|k| {
        let (mu0, nu0) = (&residual_mu[0], &residual_nu[0]);
        residual_mu.iter().zip(&residual_nu).enumerate().all(|(n, (mus, nus))| {
            let kn = k.powi(n as i32);
            (0..mus.len()).all(|j| {
                mus[j] >= (mu0[j] / kn).min(1.0) - super::GEOMETRIC_BOUND_SLACK
                    && nus[j] <= kn * nu0[j] + super::GEOMETRIC_BOUND_SLACK
            })
        })
    });
    let iterations_used = residual_mu.len();
    Ok(BlackboxReport {
        iterates,
        residual_mu,
        residual_nu,
        converged,
        iterations_used,
        geometric_bound,
    })
}
