//! Sequence diagnostics: Cauchy and convergence checks, limit transport,
//! sequential continuity and the t-uniform continuity modulus.

use crate::error::{Error, Result};
use crate::format::g17;
use crate::maps::SelfMap;
use crate::space::{FiniteInstance, PointId};

/// A failed closeness check between two sequence terms or a term and a target.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceWitness {
    pub n: usize,
    /// Offset of the compared term; `None` when compared against a target.
    pub p: Option<usize>,
    pub t: f64,
    pub mu: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceVerdict {
    pub holds: bool,
    /// Smallest index from which every check passes.
    pub stabilization_index: usize,
    /// The failing check closest to the end of the sequence.
    pub witness: Option<SequenceWitness>,
}

fn close(mu: f64, nu: f64, tol: f64) -> bool {
    1.0 - mu <= tol && nu <= tol
}

fn validated(inst: &FiniteInstance, seq: &[PointId]) -> Result<Vec<PointId>> {
    if seq.is_empty() {
        return Err(Error::Precondition("sequence is empty".into()));
    }
    for &p in seq {
        inst.check_id(p)?;
    }
    let mut seq = seq.to_vec();
    if seq.len() == 1 {
        seq.push(seq[0]);
    }
    Ok(seq)
}

/// Scans indices from the end; `check(n)` returns the first failure at `n`.
fn stabilize(len: usize, check: impl Fn(usize) -> Option<SequenceWitness>) -> SequenceVerdict {
    let mut index = len;
    let mut witness = None;
    while index > 0 {
        match check(index - 1) {
            None => index -= 1,
            Some(w) => {
                witness = Some(w);
                break;
            }
        }
    }
    // A verdict needs at least two terms in the stable tail.
    SequenceVerdict {
        holds: index + 2 <= len,
        stabilization_index: index,
        witness,
    }
}

/// Tests `1 − μ(xₙ,xₙ₊ₚ,t) ≤ tol` and `ν(xₙ,xₙ₊ₚ,t) ≤ tol` for `p ≤ p_max`
/// and every grid `t`, beyond a detected index. A single term is padded by
/// repetition.
pub fn cauchy_check(
    inst: &FiniteInstance,
    seq: &[PointId],
    tol: f64,
    p_max: usize,
) -> Result<SequenceVerdict> {
    if p_max == 0 {
        return Err(Error::Domain("p_max must be at least 1".into()));
    }
    let seq = validated(inst, seq)?;
    let len = seq.len();
    Ok(stabilize(len, |n| {
        (1..=p_max).filter(|p| n + p < len).find_map(|p| {
            inst.t_grid().iter().find_map(|&t| {
                let mu = inst.mu(seq[n], seq[n + p], t);
                let nu = inst.nu(seq[n], seq[n + p], t);
                (!close(mu, nu, tol)).then_some(SequenceWitness {
                    n,
                    p: Some(p),
                    t,
                    mu,
                    nu,
                })
            })
        })
    }))
}

/// Tests `1 − μ(xₙ,x,t) ≤ tol` and `ν(xₙ,x,t) ≤ tol` for every grid `t`
/// beyond a detected index.
pub fn convergence_check(
    inst: &FiniteInstance,
    seq: &[PointId],
    target: PointId,
    tol: f64,
) -> Result<SequenceVerdict> {
    inst.check_id(target)?;
    let seq = validated(inst, seq)?;
    Ok(stabilize(seq.len(), |n| {
        inst.t_grid().iter().find_map(|&t| {
            let mu = inst.mu(seq[n], target, t);
            let nu = inst.nu(seq[n], target, t);
            (!close(mu, nu, tol)).then_some(SequenceWitness {
                n,
                p: None,
                t,
                mu,
                nu,
            })
        })
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportVerdict {
    pub holds: bool,
    pub tail_start: usize,
    pub max_mu_deviation: f64,
    pub max_nu_deviation: f64,
}

impl TransportVerdict {
    pub fn max_deviation(&self) -> f64 {
        self.max_mu_deviation.max(self.max_nu_deviation)
    }
}

fn require_convergence(
    inst: &FiniteInstance,
    name: &str,
    seq: &[PointId],
    target: PointId,
    tol: f64,
) -> Result<SequenceVerdict> {
    let v = convergence_check(inst, seq, target, tol)?;
    if v.holds {
        Ok(v)
    } else {
        Err(Error::Precondition(format!(
            "{name} does not converge to `{}`",
            inst.label(target)
        )))
    }
}

/// Compares `μ(xₙ,yₙ,t)` with `μ(x,y,t)` (and likewise `ν`) on the common
/// stable tail of two convergent sequences.
pub fn limit_transport_check(
    inst: &FiniteInstance,
    xs: &[PointId],
    ys: &[PointId],
    x: PointId,
    y: PointId,
    tol: f64,
) -> Result<TransportVerdict> {
    if xs.len() != ys.len() {
        return Err(Error::Precondition(format!(
            "xs and ys have different lengths ({} and {})",
            xs.len(),
            ys.len()
        )));
    }
    let vx = require_convergence(inst, "xs", xs, x, tol)?;
    let vy = require_convergence(inst, "ys", ys, y, tol)?;
    let (xs, ys) = (validated(inst, xs)?, validated(inst, ys)?);
    let tail_start = vx.stabilization_index.max(vy.stabilization_index);
    let mut dmu = 0.0_f64;
    let mut dnu = 0.0_f64;
    for n in tail_start..xs.len() {
        for &t in inst.t_grid() {
            dmu = dmu.max((inst.mu(xs[n], ys[n], t) - inst.mu(x, y, t)).abs());
            dnu = dnu.max((inst.nu(xs[n], ys[n], t) - inst.nu(x, y, t)).abs());
        }
    }
    Ok(TransportVerdict {
        holds: dmu <= tol && dnu <= tol,
        tail_start,
        max_mu_deviation: dmu,
        max_nu_deviation: dnu,
    })
}

/// Default `ε` values for continuity moduli: `0.05, 0.10, ..., 0.95`.
pub fn standard_eps_grid() -> Vec<f64> {
    (1..=19).map(|k| k as f64 / 20.0).collect()
}

/// Candidate `r` values, largest first: `0.49, 0.48, ..., 0.01`.
pub fn modulus_r_grid() -> Vec<f64> {
    (1..=49).rev().map(|k| k as f64 / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusRow {
    pub eps: f64,
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusTable {
    pub rows: Vec<ModulusRow>,
}

impl ModulusTable {
    /// True when every requested `ε` has an `r`.
    pub fn is_complete(&self) -> bool {
        self.rows.iter().all(|row| row.r.is_some())
    }

    pub fn first_gap(&self) -> Option<f64> {
        self.rows.iter().find(|row| row.r.is_none()).map(|row| row.eps)
    }
}

/// True when `μ(x,y,t) ≥ 1−r, ν(x,y,t) ≤ r` implies
/// `μ(Tx,Ty,t) ≥ 1−ε, ν(Tx,Ty,t) ≤ ε` for all pairs and grid `t`.
pub fn modulus_qualifies(inst: &FiniteInstance, map: &SelfMap, eps: f64, r: f64) -> bool {
    inst.ids().all(|x| {
        inst.ids().all(|y| {
            let (tx, ty) = (map.apply(x), map.apply(y));
            inst.t_grid().iter().all(|&t| {
                let premise = inst.mu(x, y, t) >= 1.0 - r && inst.nu(x, y, t) <= r;
                !premise || (inst.mu(tx, ty, t) >= 1.0 - eps && inst.nu(tx, ty, t) <= eps)
            })
        })
    })
}

/// For each `ε`, the largest `r` from [`modulus_r_grid`] that works for every
/// pair and every grid `t` at once.
pub fn uniform_continuity_modulus(
    inst: &FiniteInstance,
    map: &SelfMap,
    epsilons: &[f64],
) -> Result<ModulusTable> {
    map.validate(inst)?;
    if let Some(e) = epsilons.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(Error::Domain(format!("eps = {e} must lie in (0,1)")));
    }
    let grid = modulus_r_grid();
    let rows = epsilons
        .iter()
        .map(|&eps| ModulusRow {
            eps,
            r: grid.iter().copied().find(|&r| modulus_qualifies(inst, map, eps, r)),
        })
        .collect();
    Ok(ModulusTable { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityVerdict {
    pub holds: bool,
    pub image: SequenceVerdict,
}

/// Checks that `T(xₙ) → T(x)` for a convergent `xs → x`, given a complete
/// modulus table over [`standard_eps_grid`].
pub fn sequential_continuity_check(
    inst: &FiniteInstance,
    map: &SelfMap,
    xs: &[PointId],
    x: PointId,
    tol: f64,
) -> Result<ContinuityVerdict> {
    map.validate(inst)?;
    require_convergence(inst, "xs", xs, x, tol)?;
    let table = uniform_continuity_modulus(inst, map, &standard_eps_grid())?;
    if let Some(eps) = table.first_gap() {
        return Err(Error::Precondition(format!(
            "map `{}` is not t-uniformly continuous: no r for eps = {}",
            map.name(),
            g17(eps)
        )));
    }
    let images: Vec<PointId> = xs.iter().map(|&p| map.apply(p)).collect();
    let image = convergence_check(inst, &images, map.apply(x), tol)?;
    Ok(ContinuityVerdict {
        holds: image.holds,
        image,
    })
}

/// What a trace row compares each term against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceTarget {
    Point(PointId),
    /// The term `p` places later.
    Offset(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub t: f64,
    pub mu: f64,
    pub nu: f64,
}

/// Per-step `μ`/`ν` values of a sequence, one row per `(n, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceTrace {
    pub sequence: Vec<PointId>,
    pub rows: Vec<TraceRow>,
}

impl SequenceTrace {
    pub fn new(inst: &FiniteInstance, seq: &[PointId], target: TraceTarget) -> Result<Self> {
        for &p in seq {
            inst.check_id(p)?;
        }
        let mut rows = Vec::new();
        for n in 0..seq.len() {
            let other = match target {
                TraceTarget::Point(p) => inst.check_id(p)?,
                TraceTarget::Offset(p) if n + p < seq.len() => seq[n + p],
                TraceTarget::Offset(_) => break,
            };
            for &t in inst.t_grid() {
                rows.push(TraceRow {
                    n,
                    t,
                    mu: inst.mu(seq[n], other, t),
                    nu: inst.nu(seq[n], other, t),
                });
            }
        }
        Ok(Self {
            sequence: seq.to_vec(),
            rows,
        })
    }

    /// CSV with header `n,t,mu,nu`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Construction(format!("csv: {e}"));
        w.write_record(["n", "t", "mu", "nu"]).map_err(io)?;
        for row in &self.rows {
            w.write_record([row.n.to_string(), g17(row.t), g17(row.mu), g17(row.nu)])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Construction(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
