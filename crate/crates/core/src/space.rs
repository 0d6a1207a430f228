//! Finite intuitionistic fuzzy metric spaces.
//!
//! A [`FiniteInstance`] is a labelled point set with a nearness degree
//! `μ(x,y,t)` and a non-nearness degree `ν(x,y,t)`, a t-norm/t-conorm pair and
//! a grid of `t` values at which "for all t > 0" conditions are sampled.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::algebra::{TConorm, TConormKind, TNorm, TNormKind, UnitOperation};
use crate::error::{Error, Result};

/// Index of a point in its instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub usize);

impl PointId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Construction(format!(
                    "matrix row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some((j, v)) = row.iter().enumerate().find(|(_, v)| !v.is_finite()) {
                return Err(Error::Construction(format!(
                    "matrix entry [{i}][{j}] = {v} is not finite"
                )));
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let data = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }
}

type Evaluator = Arc<dyn Fn(PointId, PointId, f64) -> f64 + Send + Sync>;

/// Caller-supplied `μ` and `ν` evaluators.
#[derive(Clone)]
pub struct BlackboxProfile {
    mu: Evaluator,
    nu: Evaluator,
}

impl BlackboxProfile {
    pub fn new(
        mu: impl Fn(PointId, PointId, f64) -> f64 + Send + Sync + 'static,
        nu: impl Fn(PointId, PointId, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            mu: Arc::new(mu),
            nu: Arc::new(nu),
        }
    }
}

impl fmt::Debug for BlackboxProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BlackboxProfile { .. }")
    }
}

/// How `μ` and `ν` are defined on pairs of points.
#[derive(Debug, Clone)]
pub enum PairProfile {
    /// `t`-independent values per pair.
    Constant { mu: SquareMatrix, nu: SquareMatrix },
    /// `μ = t/(t+d)`, `ν = d/(t+d)` from a distance matrix.
    Standard { dist: SquareMatrix },
    /// `μ = base^d`, `ν = 1 − base^d` from a distance matrix, `base ∈ (0,1)`.
    Exponential { base: f64, dist: SquareMatrix },
    Blackbox(BlackboxProfile),
}

/// How a profile depends on `t`, which decides how "for all t" is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TDependence {
    /// Values do not depend on `t`; one evaluation is exact.
    Independent,
    /// Closed-form standard profile; inequalities reduce to distance inequalities.
    Standard,
    /// Opaque; conditions are sampled on the `t` grid.
    Sampled,
}

impl PairProfile {
    pub fn kind_name(&self) -> &'static str {
        match self {
            PairProfile::Constant { .. } => "constant",
            PairProfile::Standard { .. } => "standard",
            PairProfile::Exponential { .. } => "exponential",
            PairProfile::Blackbox(_) => "blackbox",
        }
    }

    pub fn t_dependence(&self) -> TDependence {
        match self {
            PairProfile::Constant { .. } | PairProfile::Exponential { .. } => {
                TDependence::Independent
            }
            PairProfile::Standard { .. } => TDependence::Standard,
            PairProfile::Blackbox(_) => TDependence::Sampled,
        }
    }

    /// Distance matrix of the standard and exponential profiles.
    pub fn distances(&self) -> Option<&SquareMatrix> {
        match self {
            PairProfile::Standard { dist } | PairProfile::Exponential { dist, .. } => Some(dist),
            _ => None,
        }
    }

    fn size(&self) -> Option<usize> {
        match self {
            PairProfile::Constant { mu, .. } => Some(mu.size()),
            PairProfile::Standard { dist } | PairProfile::Exponential { dist, .. } => {
                Some(dist.size())
            }
            PairProfile::Blackbox(_) => None,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if let Some(size) = self.size() {
            if size != n {
                return Err(Error::Construction(format!(
                    "profile matrices are {size}×{size} but there are {n} points"
                )));
            }
        }
        match self {
            PairProfile::Constant { mu, nu } => {
                if nu.size() != mu.size() {
                    return Err(Error::Construction("mu and nu matrices differ in size".into()));
                }
                for i in 0..n {
                    if mu.get(i, i) != 1.0 || nu.get(i, i) != 0.0 {
                        return Err(Error::Construction(format!(
                            "diagonal entry {i} must be exactly μ = 1, ν = 0"
                        )));
                    }
                    for j in 0..n {
                        for (name, m) in [("mu", mu), ("nu", nu)] {
                            let v = m.get(i, j);
                            if !(0.0..=1.0).contains(&v) {
                                return Err(Error::Construction(format!(
                                    "{name}[{i}][{j}] = {v} lies outside [0,1]"
                                )));
                            }
                        }
                    }
                }
            }
            PairProfile::Standard { dist } | PairProfile::Exponential { dist, .. } => {
                for i in 0..n {
                    if dist.get(i, i) != 0.0 {
                        return Err(Error::Construction(format!(
                            "dist[{i}][{i}] must be exactly 0"
                        )));
                    }
                    for j in 0..n {
                        if dist.get(i, j) < 0.0 {
                            return Err(Error::Construction(format!(
                                "dist[{i}][{j}] = {} is negative",
                                dist.get(i, j)
                            )));
                        }
                    }
                }
                if let PairProfile::Exponential { base, .. } = self {
                    if !(*base > 0.0 && *base < 1.0) {
                        return Err(Error::Construction(format!(
                            "exponential base {base} must lie in (0,1)"
                        )));
                    }
                }
            }
            PairProfile::Blackbox(_) => {}
        }
        Ok(())
    }
}

/// A finite intuitionistic fuzzy metric space.
#[derive(Debug, Clone)]
pub struct FiniteInstance {
    points: Vec<String>,
    index: HashMap<String, PointId>,
    profile: PairProfile,
    tnorm: TNorm,
    tconorm: TConorm,
    t_grid: Vec<f64>,
}

fn validate_t_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::Construction("t grid must be nonempty".into()));
    }
    if let Some(t) = t_grid.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
        return Err(Error::Construction(format!("t grid value {t} must be positive")));
    }
    if let Some(w) = t_grid.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::Construction(format!(
            "t grid must be strictly ascending ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

impl FiniteInstance {
    /// Validates the structure of an instance. Axioms are not checked; see
    /// [`FiniteInstance::new_strict`].
    pub fn new(
        points: Vec<String>,
        profile: PairProfile,
        tnorm: TNorm,
        tconorm: TConorm,
        t_grid: Vec<f64>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Construction("point set must be nonempty".into()));
        }
        let mut index = HashMap::with_capacity(points.len());
        for (i, label) in points.iter().enumerate() {
            if index.insert(label.clone(), PointId(i)).is_some() {
                return Err(Error::Construction(format!("duplicate point label `{label}`")));
            }
        }
        validate_t_grid(&t_grid)?;
        profile.validate(points.len())?;
        Ok(Self {
            points,
            index,
            profile,
            tnorm,
            tconorm,
            t_grid,
        })
    }

    /// Like [`FiniteInstance::new`], and additionally requires every checked
    /// axiom to pass.
    pub fn new_strict(
        points: Vec<String>,
        profile: PairProfile,
        tnorm: TNorm,
        tconorm: TConorm,
        t_grid: Vec<f64>,
        options: &AxiomOptions,
    ) -> Result<Self> {
        let instance = Self::new(points, profile, tnorm, tconorm, t_grid)?;
        let report = check_ifm_axioms(&instance, options);
        match report.first_failure() {
            None => Ok(instance),
            Some(w) => Err(Error::Construction(format!(
                "axiom {} fails at points {:?}",
                w.axiom.label(),
                instance.labels_of(&w.points)
            ))),
        }
    }

    /// Same space with a different `t` grid.
    pub fn with_t_grid(&self, t_grid: Vec<f64>) -> Result<Self> {
        validate_t_grid(&t_grid)?;
        Ok(Self {
            t_grid,
            ..self.clone()
        })
    }

    /// Same space with a different operation pair.
    pub fn with_operations(&self, tnorm: TNorm, tconorm: TConorm) -> Self {
        Self {
            tnorm,
            tconorm,
            ..self.clone()
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.points
    }

    pub fn label(&self, p: PointId) -> &str {
        &self.points[p.0]
    }

    pub fn labels_of(&self, ps: &[PointId]) -> Vec<String> {
        ps.iter().map(|&p| self.label(p).to_string()).collect()
    }

    pub fn ids(&self) -> impl Iterator<Item = PointId> + '_ {
        (0..self.points.len()).map(PointId)
    }

    /// Looks up a point by label.
    pub fn point(&self, label: &str) -> Result<PointId> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown point label `{label}`")))
    }

    pub fn resolve(&self, labels: &[&str]) -> Result<Vec<PointId>> {
        labels.iter().map(|l| self.point(l)).collect()
    }

    pub fn check_id(&self, p: PointId) -> Result<PointId> {
        if p.0 < self.points.len() {
            Ok(p)
        } else {
            Err(Error::Domain(format!(
                "point index {} out of range for {} points",
                p.0,
                self.points.len()
            )))
        }
    }

    pub fn profile(&self) -> &PairProfile {
        &self.profile
    }

    pub fn tnorm(&self) -> &TNorm {
        &self.tnorm
    }

    pub fn tconorm(&self) -> &TConorm {
        &self.tconorm
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    /// `t` values at which a pointwise condition must be evaluated: one
    /// representative for `t`-independent profiles, the whole grid otherwise.
    pub fn checked_t(&self) -> &[f64] {
        match self.profile.t_dependence() {
            TDependence::Independent => &self.t_grid[..1],
            _ => &self.t_grid,
        }
    }

    /// `μ(x,y,t)` for valid ids and `t > 0`.
    pub fn mu(&self, x: PointId, y: PointId, t: f64) -> f64 {
        match &self.profile {
            PairProfile::Constant { mu, .. } => mu.get(x.0, y.0),
            PairProfile::Standard { dist } => t / (t + dist.get(x.0, y.0)),
            PairProfile::Exponential { base, dist } => base.powf(dist.get(x.0, y.0)),
            PairProfile::Blackbox(b) => (b.mu)(x, y, t),
        }
    }

    /// `ν(x,y,t)` for valid ids and `t > 0`.
    pub fn nu(&self, x: PointId, y: PointId, t: f64) -> f64 {
        match &self.profile {
            PairProfile::Constant { nu, .. } => nu.get(x.0, y.0),
            PairProfile::Standard { dist } => {
                let d = dist.get(x.0, y.0);
                d / (t + d)
            }
            PairProfile::Exponential { base, dist } => 1.0 - base.powf(dist.get(x.0, y.0)),
            PairProfile::Blackbox(b) => (b.nu)(x, y, t),
        }
    }

    fn check_t(t: f64) -> Result<()> {
        if t.is_finite() && t > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!("t = {t} must be positive")))
        }
    }

    /// Checked `μ` by label.
    pub fn mu_eval(&self, x: &str, y: &str, t: f64) -> Result<f64> {
        Self::check_t(t)?;
        Ok(self.mu(self.point(x)?, self.point(y)?, t))
    }

    /// Checked `ν` by label.
    pub fn nu_eval(&self, x: &str, y: &str, t: f64) -> Result<f64> {
        Self::check_t(t)?;
        Ok(self.nu(self.point(x)?, self.point(y)?, t))
    }
}

/// Construction scheme for [`induced_from_metric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricScheme {
    Standard,
    Exponential { base: f64 },
}

/// Builds an instance from a classical metric on the labels.
pub fn induced_from_metric(
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
    scheme: MetricScheme,
    tnorm: TNorm,
    tconorm: TConorm,
    t_grid: Vec<f64>,
) -> Result<FiniteInstance> {
    let n = labels.len();
    if dist.len() != n {
        return Err(Error::Construction(format!(
            "distance matrix has {} rows for {n} labels",
            dist.len()
        )));
    }
    let dist = SquareMatrix::from_rows(dist)?;
    let name = |i: usize| labels[i].as_str();
    for i in 0..n {
        if dist.get(i, i) != 0.0 {
            return Err(Error::Construction(format!(
                "metric axiom `zero diagonal` violated: d({0}, {0}) = {1}",
                name(i),
                dist.get(i, i)
            )));
        }
        for j in 0..n {
            let d = dist.get(i, j);
            if d < 0.0 {
                return Err(Error::Construction(format!(
                    "metric axiom `non-negativity` violated: d({}, {}) = {d}",
                    name(i),
                    name(j)
                )));
            }
            if i != j && d == 0.0 {
                return Err(Error::Construction(format!(
                    "metric axiom `separation` violated: d({}, {}) = 0",
                    name(i),
                    name(j)
                )));
            }
            if d != dist.get(j, i) {
                return Err(Error::Construction(format!(
                    "metric axiom `symmetry` violated: d({0}, {1}) = {2} but d({1}, {0}) = {3}",
                    name(i),
                    name(j),
                    d,
                    dist.get(j, i)
                )));
            }
        }
    }
    if let Some((i, j, k)) = triangle_violation(&dist, METRIC_TOL) {
        return Err(Error::Construction(format!(
            "metric axiom `triangle inequality` violated: d({}, {}) = {} > d({}, {}) + d({}, {}) = {}",
            name(i),
            name(k),
            dist.get(i, k),
            name(i),
            name(j),
            name(j),
            name(k),
            dist.get(i, j) + dist.get(j, k)
        )));
    }
    let profile = match scheme {
        MetricScheme::Standard => PairProfile::Standard { dist },
        MetricScheme::Exponential { base } => PairProfile::Exponential { base, dist },
    };
    FiniteInstance::new(labels, profile, tnorm, tconorm, t_grid)
}

/// Relative slack for triangle inequalities on distance matrices.
const METRIC_TOL: f64 = 1e-9;

fn triangle_violation(dist: &SquareMatrix, tol: f64) -> Option<(usize, usize, usize)> {
    let n = dist.size();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if triangle_fails(dist, i, j, k, tol) {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

fn triangle_fails(dist: &SquareMatrix, i: usize, j: usize, k: usize, tol: f64) -> bool {
    let sum = dist.get(i, j) + dist.get(j, k);
    dist.get(i, k) > sum + tol * (1.0 + sum)
}

/// The conditions an IFM must satisfy, plus the idempotency property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// `μ + ν ≤ 1`
    I,
    /// `μ > 0`
    II,
    /// `μ = 1` iff `x = y`
    III,
    /// `μ` symmetric
    IV,
    /// `μ(x,y,s) ∗ μ(y,z,t) ≤ μ(x,z,s+t)`
    V,
    /// `μ(x,y,·)` continuous into `(0,1]`
    VI,
    /// `ν < 1`
    VIIStar,
    /// `ν = 0` iff `x = y`
    VIII,
    /// `ν` symmetric
    IX,
    /// `ν(x,y,s) ◇ ν(y,z,t) ≥ ν(x,z,s+t)`
    X,
    /// `ν(x,y,·)` continuous into `[0,1)`
    XI,
    /// `a ∗ a = a` and `a ◇ a = a`
    XII,
}

impl Axiom {
    pub const ALL: [Axiom; 12] = [
        Axiom::I,
        Axiom::II,
        Axiom::III,
        Axiom::IV,
        Axiom::V,
        Axiom::VI,
        Axiom::VIIStar,
        Axiom::VIII,
        Axiom::IX,
        Axiom::X,
        Axiom::XI,
        Axiom::XII,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Axiom::I => "(i)",
            Axiom::II => "(ii)",
            Axiom::III => "(iii)",
            Axiom::IV => "(iv)",
            Axiom::V => "(v)",
            Axiom::VI => "(vi)",
            Axiom::VIIStar => "(vii*)",
            Axiom::VIII => "(viii)",
            Axiom::IX => "(ix)",
            Axiom::X => "(x)",
            Axiom::XI => "(xi)",
            Axiom::XII => "(xii)",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Axiom::I => "mu + nu <= 1",
            Axiom::II => "mu > 0",
            Axiom::III => "mu = 1 iff x = y",
            Axiom::IV => "mu symmetric",
            Axiom::V => "mu(x,y,s) * mu(y,z,t) <= mu(x,z,s+t)",
            Axiom::VI => "mu(x,y,.) continuous into (0,1]",
            Axiom::VIIStar => "nu < 1",
            Axiom::VIII => "nu = 0 iff x = y",
            Axiom::IX => "nu symmetric",
            Axiom::X => "nu(x,y,s) <> nu(y,z,t) >= nu(x,z,s+t)",
            Axiom::XI => "nu(x,y,.) continuous into [0,1)",
            Axiom::XII => "a * a = a and a <> a = a",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Passed on every sampled `t`; not a proof.
    SampledPass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::SampledPass => "sampled-pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }
}

/// A concrete violation of an axiom.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomWitness {
    pub axiom: Axiom,
    pub points: Vec<PointId>,
    pub t: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub verdicts: Vec<(Axiom, Verdict)>,
    /// The first witness found for each failing axiom.
    pub witnesses: Vec<AxiomWitness>,
}

impl AxiomReport {
    pub fn verdict(&self, axiom: Axiom) -> Verdict {
        self.verdicts
            .iter()
            .find(|(a, _)| *a == axiom)
            .map(|(_, v)| *v)
            .expect("every axiom has a verdict")
    }

    /// True when no checked axiom failed.
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|(_, v)| *v != Verdict::Fail)
    }

    pub fn failed(&self) -> Vec<Axiom> {
        self.verdicts
            .iter()
            .filter(|(_, v)| *v == Verdict::Fail)
            .map(|(a, _)| *a)
            .collect()
    }

    pub fn witness(&self, axiom: Axiom) -> Option<&AxiomWitness> {
        self.witnesses.iter().find(|w| w.axiom == axiom)
    }

    pub fn first_failure(&self) -> Option<&AxiomWitness> {
        self.witnesses.first()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomOptions {
    pub tol: f64,
    /// Check idempotency of the operation pair; reported as skipped otherwise.
    pub check_xii: bool,
}

impl AxiomOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            check_xii: false,
        }
    }

    pub fn with_xii(mut self, check: bool) -> Self {
        self.check_xii = check;
        self
    }
}

impl Default for AxiomOptions {
    fn default() -> Self {
        Self::new(1e-9)
    }
}

struct Scan<'a> {
    inst: &'a FiniteInstance,
    tol: f64,
    witnesses: Vec<AxiomWitness>,
    verdicts: Vec<(Axiom, Verdict)>,
}

impl Scan<'_> {
    fn record(&mut self, axiom: Axiom, sampled: bool, witness: Option<AxiomWitness>) {
        let verdict = match witness {
            Some(w) => {
                self.witnesses.push(w);
                Verdict::Fail
            }
            None if sampled => Verdict::SampledPass,
            None => Verdict::Pass,
        };
        self.verdicts.push((axiom, verdict));
    }

    /// First pair/t where `holds(x, y, t)` is false; the closure returns
    /// `(holds, lhs, rhs)`.
    fn pointwise(
        &self,
        axiom: Axiom,
        holds: impl Fn(PointId, PointId, f64) -> (bool, f64, f64),
    ) -> Option<AxiomWitness> {
        let inst = self.inst;
        for x in inst.ids() {
            for y in inst.ids() {
                for &t in inst.checked_t() {
                    let (ok, lhs, rhs) = holds(x, y, t);
                    if !ok {
                        return Some(AxiomWitness {
                            axiom,
                            points: vec![x, y],
                            t: vec![t],
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
        None
    }
}

/// Evaluates the IFM conditions on an instance.
///
/// Pointwise conditions are checked over all ordered pairs at the relevant
/// `t` values. The triangle conditions `(v)` and `(x)` run over all triples:
/// once for `t`-independent profiles, by reduction to the triangle inequality
/// of the distance matrix for standard profiles with a built-in pair, and over
/// all `(s,t)` grid pairs otherwise. Continuity `(vi)`/`(xi)` holds in closed
/// form except for black-box profiles, where monotonicity and midpoint
/// consistency are sampled between consecutive grid values.
///
/// `(vii)` is checked as `ν < 1`, and `(x)` in its `ν`–`ν` form.
pub fn check_ifm_axioms(inst: &FiniteInstance, options: &AxiomOptions) -> AxiomReport {
    let tol = options.tol;
    let mut scan = Scan {
        inst,
        tol,
        witnesses: Vec::new(),
        verdicts: Vec::new(),
    };
    let dep = inst.profile.t_dependence();
    let sampled = dep == TDependence::Sampled;

    let w = scan.pointwise(Axiom::I, |x, y, t| {
        let (m, n) = (inst.mu(x, y, t), inst.nu(x, y, t));
        (m + n <= 1.0 + tol, m + n, 1.0)
    });
    scan.record(Axiom::I, sampled, w);

    let w = scan.pointwise(Axiom::II, |x, y, t| {
        let m = inst.mu(x, y, t);
        (m > 0.0, m, 0.0)
    });
    scan.record(Axiom::II, sampled, w);

    let w = scan.pointwise(Axiom::III, |x, y, t| {
        let m = inst.mu(x, y, t);
        if x == y {
            ((m - 1.0).abs() <= tol, m, 1.0)
        } else {
            (m < 1.0, m, 1.0)
        }
    });
    scan.record(Axiom::III, sampled, w);

    let w = scan.pointwise(Axiom::IV, |x, y, t| {
        let (a, b) = (inst.mu(x, y, t), inst.mu(y, x, t));
        ((a - b).abs() <= tol, a, b)
    });
    scan.record(Axiom::IV, sampled, w);

    let (w, s) = triangle_axiom(&scan, Axiom::V);
    scan.record(Axiom::V, s, w);

    let (w, s) = continuity_axiom(&scan, Axiom::VI);
    scan.record(Axiom::VI, s, w);

    let w = scan.pointwise(Axiom::VIIStar, |x, y, t| {
        let n = inst.nu(x, y, t);
        (n < 1.0, n, 1.0)
    });
    scan.record(Axiom::VIIStar, sampled, w);

    let w = scan.pointwise(Axiom::VIII, |x, y, t| {
        let n = inst.nu(x, y, t);
        if x == y {
            (n.abs() <= tol, n, 0.0)
        } else {
            (n > 0.0, n, 0.0)
        }
    });
    scan.record(Axiom::VIII, sampled, w);

    let w = scan.pointwise(Axiom::IX, |x, y, t| {
        let (a, b) = (inst.nu(x, y, t), inst.nu(y, x, t));
        ((a - b).abs() <= tol, a, b)
    });
    scan.record(Axiom::IX, sampled, w);

    let (w, s) = triangle_axiom(&scan, Axiom::X);
    scan.record(Axiom::X, s, w);

    let (w, s) = continuity_axiom(&scan, Axiom::XI);
    scan.record(Axiom::XI, s, w);

    if options.check_xii {
        let w = idempotency_witness(inst);
        scan.record(Axiom::XII, false, w);
    } else {
        scan.verdicts.push((Axiom::XII, Verdict::Skipped));
    }

    AxiomReport {
        verdicts: scan.verdicts,
        witnesses: scan.witnesses,
    }
}

fn idempotency_witness(inst: &FiniteInstance) -> Option<AxiomWitness> {
    let probe = 0.5;
    if !inst.tnorm.is_idempotent() {
        return Some(AxiomWitness {
            axiom: Axiom::XII,
            points: vec![],
            t: vec![],
            lhs: inst.tnorm.eval(probe, probe),
            rhs: probe,
        });
    }
    if !inst.tconorm.is_idempotent() {
        return Some(AxiomWitness {
            axiom: Axiom::XII,
            points: vec![],
            t: vec![],
            lhs: inst.tconorm.eval(probe, probe),
            rhs: probe,
        });
    }
    None
}

/// Evaluates one triangle condition at `(s, t)`; returns `(holds, lhs, rhs)`.
fn triangle_at(
    inst: &FiniteInstance,
    axiom: Axiom,
    (x, y, z): (PointId, PointId, PointId),
    s: f64,
    t: f64,
    tol: f64,
) -> (bool, f64, f64) {
    if axiom == Axiom::V {
        let lhs = inst.tnorm.eval(inst.mu(x, y, s), inst.mu(y, z, t));
        let rhs = inst.mu(x, z, s + t);
        (lhs <= rhs + tol, lhs, rhs)
    } else {
        let lhs = inst.tconorm.eval(inst.nu(x, y, s), inst.nu(y, z, t));
        let rhs = inst.nu(x, z, s + t);
        (lhs + tol >= rhs, lhs, rhs)
    }
}

fn triangle_axiom(scan: &Scan<'_>, axiom: Axiom) -> (Option<AxiomWitness>, bool) {
    let inst = scan.inst;
    let tol = scan.tol;
    let grid = inst.t_grid();
    let dep = inst.profile.t_dependence();
    let builtin = inst.tnorm.is_builtin() && inst.tconorm.is_builtin();
    let minmax = matches!(inst.tnorm.kind(), TNormKind::Minimum)
        && matches!(inst.tconorm.kind(), TConormKind::Maximum);
    let mut sampled = dep == TDependence::Sampled;

    for x in inst.ids() {
        for y in inst.ids() {
            for z in inst.ids() {
                let triple = (x, y, z);
                let fail = |s: f64, t: f64| {
                    let (ok, lhs, rhs) = triangle_at(inst, axiom, triple, s, t, tol);
                    (!ok).then(|| AxiomWitness {
                        axiom,
                        points: vec![x, y, z],
                        t: vec![s, t],
                        lhs,
                        rhs,
                    })
                };
                let witness = match dep {
                    TDependence::Independent => fail(grid[0], grid[0]),
                    TDependence::Standard if builtin => {
                        let dist = inst.profile.distances().expect("standard profile has distances");
                        if !triangle_fails(dist, x.0, y.0, z.0, tol) {
                            // Every built-in t-norm lies below min, and under
                            // min the condition for all s,t is exactly the
                            // triangle inequality of the distances.
                            None
                        } else {
                            let (d1, d2) = (dist.get(x.0, y.0), dist.get(y.0, z.0));
                            let critical = (d1 > 0.0 && d2 > 0.0).then(|| fail(d1, d2)).flatten();
                            let found = critical.or_else(|| grid_scan(grid, &fail));
                            if found.is_none() && !minmax {
                                sampled = true;
                            }
                            found
                        }
                    }
                    _ => {
                        sampled = true;
                        grid_scan(grid, &fail)
                    }
                };
                if witness.is_some() {
                    return (witness, sampled);
                }
            }
        }
    }
    (None, sampled)
}

fn grid_scan(
    grid: &[f64],
    fail: &impl Fn(f64, f64) -> Option<AxiomWitness>,
) -> Option<AxiomWitness> {
    grid.iter()
        .find_map(|&s| grid.iter().find_map(|&t| fail(s, t)))
}

fn continuity_axiom(scan: &Scan<'_>, axiom: Axiom) -> (Option<AxiomWitness>, bool) {
    let inst = scan.inst;
    if inst.profile.t_dependence() != TDependence::Sampled {
        return (None, false);
    }
    let tol = scan.tol;
    let is_mu = axiom == Axiom::VI;
    let value = |x, y, t| if is_mu { inst.mu(x, y, t) } else { inst.nu(x, y, t) };
    let in_codomain = |v: f64| if is_mu { v > 0.0 && v <= 1.0 } else { (0.0..1.0).contains(&v) };
    // μ must not decrease in t, ν must not increase.
    let ordered = |a: f64, b: f64| if is_mu { a <= b + tol } else { a + tol >= b };
    let grid = inst.t_grid();
    for x in inst.ids() {
        for y in inst.ids() {
            let witness = |ts: Vec<f64>, lhs, rhs| AxiomWitness {
                axiom,
                points: vec![x, y],
                t: ts,
                lhs,
                rhs,
            };
            for &t in grid {
                let v = value(x, y, t);
                if !in_codomain(v) {
                    return (Some(witness(vec![t], v, if is_mu { 0.0 } else { 1.0 })), true);
                }
            }
            for w in grid.windows(2) {
                let (t1, t2) = (w[0], w[1]);
                let mid = 0.5 * (t1 + t2);
                let (v1, vm, v2) = (value(x, y, t1), value(x, y, mid), value(x, y, t2));
                if !ordered(v1, v2) {
                    return (Some(witness(vec![t1, t2], v1, v2)), true);
                }
                if !ordered(v1, vm) {
                    return (Some(witness(vec![t1, mid], v1, vm)), true);
                }
                if !ordered(vm, v2) {
                    return (Some(witness(vec![mid, t2], vm, v2)), true);
                }
            }
        }
    }
    (None, true)
}

/// `B(x,r,t)` (open) or `S(x,r,t)` (closed): points `y` with
/// `μ(x,y,t) > 1 − r` and `ν(x,y,t) < r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: PointId,
    pub r: f64,
    pub t: f64,
    pub closed: bool,
}

impl Ball {
    pub fn new(center: PointId, r: f64, t: f64, closed: bool) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!("ball radius {r} must lie in (0,1)")));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Domain(format!("ball parameter t = {t} must be positive")));
        }
        Ok(Self {
            center,
            r,
            t,
            closed,
        })
    }

    pub fn closed(center: PointId, r: f64, t: f64) -> Result<Self> {
        Self::new(center, r, t, true)
    }

    /// Membership by the defining inequalities; returns `(inside, μ, ν)`.
    pub fn contains(&self, inst: &FiniteInstance, y: PointId) -> (bool, f64, f64) {
        let m = inst.mu(self.center, y, self.t);
        let n = inst.nu(self.center, y, self.t);
        (m > 1.0 - self.r && n < self.r, m, n)
    }
}

pub fn ball_members(inst: &FiniteInstance, ball: &Ball) -> Result<BTreeSet<PointId>> {
    inst.check_id(ball.center)?;
    Ok(inst.ids().filter(|&y| ball.contains(inst, y).0).collect())
}

/// Closedness verdict with its justification.
#[derive(Debug, Clone, PartialEq)]
pub struct Closedness {
    pub closed: bool,
    pub rationale: String,
}

/// Every subset of a finite instance is closed: off-diagonal `μ < 1`, so a
/// convergent sequence is eventually constant and its limit is a term.
pub fn is_closed_subset(inst: &FiniteInstance, subset: &[PointId]) -> Result<Closedness> {
    for &p in subset {
        inst.check_id(p)?;
    }
    Ok(Closedness {
        closed: true,
        rationale: "finite instance: convergence implies eventual constancy".into(),
    })
}

/// Both sides of the n-fold triangle inequality along a path.
#[derive(Debug, Clone, PartialEq)]
pub struct GrandTriangle {
    pub holds: bool,
    pub mu_lhs: f64,
    pub mu_rhs: f64,
    pub nu_lhs: f64,
    pub nu_rhs: f64,
}

/// Checks `μ(x₀,xₙ,t) ≥ μ(x₀,x₁,t/n) ∗ ... ∗ μ(xₙ₋₁,xₙ,t/n)` and the dual
/// inequality for `ν` along `path = [x₀, ..., xₙ]`.
pub fn grand_triangle_check(
    inst: &FiniteInstance,
    path: &[PointId],
    t: f64,
    tol: f64,
) -> Result<GrandTriangle> {
    if path.len() < 2 {
        return Err(Error::Domain("path needs at least two points".into()));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    for &p in path {
        inst.check_id(p)?;
    }
    let links = path.len() - 1;
    let step = t / links as f64;
    let mus: Vec<f64> = path.windows(2).map(|w| inst.mu(w[0], w[1], step)).collect();
    let nus: Vec<f64> = path.windows(2).map(|w| inst.nu(w[0], w[1], step)).collect();
    let (first, last) = (path[0], path[links]);
    let mu_lhs = inst.mu(first, last, t);
    let nu_lhs = inst.nu(first, last, t);
    let mu_rhs = inst.tnorm.fold(&mus)?;
    let nu_rhs = inst.tconorm.fold(&nus)?;
    Ok(GrandTriangle {
        holds: mu_lhs + tol >= mu_rhs && nu_lhs <= nu_rhs + tol,
        mu_lhs,
        mu_rhs,
        nu_lhs,
        nu_rhs,
    })
}
