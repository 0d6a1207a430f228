//! Self-maps, contraction certificates and brute-force oracles.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::space::{FiniteInstance, PairProfile, PointId, TDependence};

/// Default bound on `|X|^|X|` for [`enumerate_contractive_maps`].
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// A total self-map of a finite instance, stored as an image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SelfMap {
    name: String,
    images: Vec<PointId>,
}

impl SelfMap {
    /// A map from its image table; `images[i]` is the image of point `i`.
    pub fn new(name: impl Into<String>, images: Vec<PointId>) -> Self {
        Self {
            name: name.into(),
            images,
        }
    }

    pub fn identity(inst: &FiniteInstance) -> Self {
        Self::new("identity", inst.ids().collect())
    }

    pub fn constant(inst: &FiniteInstance, target: PointId) -> Self {
        Self::new(
            format!("constant-{}", inst.label(target)),
            vec![target; inst.len()],
        )
    }

    /// Builds a map from `(point, image)` label pairs, which must cover every
    /// point exactly once.
    pub fn from_labels(
        inst: &FiniteInstance,
        name: impl Into<String>,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let mut images: Vec<Option<PointId>> = vec![None; inst.len()];
        for (from, to) in pairs {
            let (x, y) = (inst.point(from)?, inst.point(to)?);
            if images[x.0].replace(y).is_some() {
                return Err(Error::Construction(format!("point `{from}` is mapped twice")));
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| {
                img.ok_or_else(|| {
                    Error::Construction(format!("point `{}` has no image", inst.label(PointId(i))))
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self::new(name, images))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn images(&self) -> &[PointId] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, x: PointId) -> PointId {
        self.images[x.0]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SelfMap) -> SelfMap {
        SelfMap::new(
            format!("{}∘{}", self.name, inner.name),
            inner.images.iter().map(|&p| self.apply(p)).collect(),
        )
    }

    /// `T^m`; `m = 0` gives the identity table.
    pub fn power(&self, m: usize) -> SelfMap {
        let mut images: Vec<PointId> = (0..self.len()).map(PointId).collect();
        for _ in 0..m {
            for p in images.iter_mut() {
                *p = self.apply(*p);
            }
        }
        SelfMap::new(format!("{}^{m}", self.name), images)
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Checks that the table is total on `inst` with valid images.
    pub fn validate(&self, inst: &FiniteInstance) -> Result<()> {
        if self.images.len() != inst.len() {
            return Err(Error::Construction(format!(
                "map `{}` has {} images for {} points",
                self.name,
                self.images.len(),
                inst.len()
            )));
        }
        if let Some(p) = self.images.iter().find(|p| p.0 >= inst.len()) {
            return Err(Error::Construction(format!(
                "map `{}` has out-of-range image {}",
                self.name, p.0
            )));
        }
        Ok(())
    }

    pub fn image_labels(&self, inst: &FiniteInstance) -> Vec<(String, String)> {
        inst.ids()
            .map(|x| (inst.label(x).to_string(), inst.label(self.apply(x)).to_string()))
            .collect()
    }
}

/// Which contraction hypothesis a certificate attests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContractionKind {
    TsIf { k: f64 },
    Local { eps: f64, lambda: f64 },
}

impl ContractionKind {
    pub fn name(&self) -> &'static str {
        match self {
            ContractionKind::TsIf { .. } => "ts-if",
            ContractionKind::Local { .. } => "local",
        }
    }
}

/// Whether the `t` quantifier was discharged exactly or sampled on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessMode {
    Exact,
    Grid,
}

impl WitnessMode {
    pub fn name(self) -> &'static str {
        match self {
            WitnessMode::Exact => "exact",
            WitnessMode::Grid => "grid",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionCertificate {
    pub kind: ContractionKind,
    pub checked_t: Vec<f64>,
    pub witness_mode: WitnessMode,
}

/// The half of a contraction condition that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    Mu,
    Nu,
}

impl Clause {
    pub fn name(self) -> &'static str {
        match self {
            Clause::Mu => "mu",
            Clause::Nu => "nu",
        }
    }
}

/// A pair and `t` at which a contraction inequality fails.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub x: PointId,
    pub y: PointId,
    pub t: f64,
    pub clause: Clause,
    pub lhs: f64,
    pub rhs: f64,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certification {
    Certified(ContractionCertificate),
    Refuted(Counterexample),
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }

    pub fn certificate(&self) -> Option<&ContractionCertificate> {
        match self {
            Certification::Certified(c) => Some(c),
            Certification::Refuted(_) => None,
        }
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Certification::Certified(_) => None,
            Certification::Refuted(c) => Some(c),
        }
    }
}

fn unit_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} must lie in (0,1)")))
    }
}

fn off_diagonal(inst: &FiniteInstance) -> impl Iterator<Item = (PointId, PointId)> + '_ {
    inst.ids()
        .flat_map(move |x| inst.ids().map(move |y| (x, y)))
        .filter(|(x, y)| x != y)
}

/// Ordered pairs `x ≠ y` of `subset`, row-major.
fn pairs_within(inst: &FiniteInstance, subset: &[PointId]) -> Result<Vec<(PointId, PointId)>> {
    for &p in subset {
        inst.check_id(p)?;
    }
    let members: BTreeSet<PointId> = subset.iter().copied().collect();
    Ok(off_diagonal(inst)
        .filter(|(x, y)| members.contains(x) && members.contains(y))
        .collect())
}

fn is_standard(inst: &FiniteInstance) -> bool {
    matches!(inst.profile(), PairProfile::Standard { .. })
}

/// Evaluates both TS-IF clauses at one pair and `t`; `None` when they hold.
fn ts_if_violation(
    inst: &FiniteInstance,
    map: &SelfMap,
    k: f64,
    (x, y): (PointId, PointId),
    t: f64,
) -> Option<Counterexample> {
    let (tx, ty) = (map.apply(x), map.apply(y));
    let mu = inst.mu(x, y, t);
    let mu_img = inst.mu(tx, ty, t);
    if k * mu_img < mu {
        return Some(Counterexample {
            x,
            y,
            t,
            clause: Clause::Mu,
            lhs: k * mu_img,
            rhs: mu,
            note: None,
        });
    }
    let nu = inst.nu(x, y, t);
    let nu_img = inst.nu(tx, ty, t);
    if nu_img / k > nu {
        return Some(Counterexample {
            x,
            y,
            t,
            clause: Clause::Nu,
            lhs: nu_img / k,
            rhs: nu,
            note: None,
        });
    }
    None
}

/// Checks `k·μ(Tx,Ty,t) ≥ μ(x,y,t)` and `ν(Tx,Ty,t)/k ≤ ν(x,y,t)` for all
/// `x ≠ y`.
///
/// Constant and exponential profiles do not depend on `t`, so one evaluation
/// is exact. Under the standard profile `μ → 1` as `t → ∞` off the diagonal,
/// so the μ-clause fails for every pair once `t > (k·d − d')/(1 − k)`; this is
/// reported without scanning.
pub fn is_ts_if_contractive(inst: &FiniteInstance, map: &SelfMap, k: f64) -> Result<Certification> {
    let all: Vec<PointId> = inst.ids().collect();
    is_ts_if_contractive_on(inst, map, k, &all)
}

/// [`is_ts_if_contractive`] restricted to pairs drawn from `subset`.
pub fn is_ts_if_contractive_on(
    inst: &FiniteInstance,
    map: &SelfMap,
    k: f64,
    subset: &[PointId],
) -> Result<Certification> {
    unit_open("k", k)?;
    map.validate(inst)?;
    let pairs = pairs_within(inst, subset)?;
    if is_standard(inst) {
        if let Some(&pair) = pairs.first() {
            return Ok(Certification::Refuted(standard_refutation(inst, map, k, pair)));
        }
    }
    let mode = match inst.profile().t_dependence() {
        TDependence::Sampled => WitnessMode::Grid,
        _ => WitnessMode::Exact,
    };
    for pair in pairs {
        for &t in inst.checked_t() {
            if let Some(c) = ts_if_violation(inst, map, k, pair, t) {
                return Ok(Certification::Refuted(c));
            }
        }
    }
    Ok(Certification::Certified(ContractionCertificate {
        kind: ContractionKind::TsIf { k },
        checked_t: inst.checked_t().to_vec(),
        witness_mode: mode,
    }))
}

fn standard_refutation(
    inst: &FiniteInstance,
    map: &SelfMap,
    k: f64,
    (x, y): (PointId, PointId),
) -> Counterexample {
    if let Some(c) = inst
        .t_grid()
        .iter()
        .find_map(|&t| ts_if_violation(inst, map, k, (x, y), t))
    {
        return c;
    }
    let dist = inst.profile().distances().expect("standard profile has distances");
    let d = dist.get(x.0, y.0);
    let d_img = dist.get(map.apply(x).0, map.apply(y).0);
    let t = 2.0 * ((k * d - d_img) / (1.0 - k)).max(0.0) + 1.0;
    let mut c = ts_if_violation(inst, map, k, (x, y), t)
        .expect("the mu clause fails past the analytic threshold");
    c.note = Some(format!(
        "standard profile: sup over t of mu(x,y,t) is 1 for x != y, so k*mu(Tx,Ty,t) >= mu(x,y,t) fails for t > (k*d(x,y) - d(Tx,Ty))/(1-k) = {}",
        crate::format::g17((k * d - d_img) / (1.0 - k))
    ));
    c
}

/// Outcome of [`min_contraction_constant`].
#[derive(Debug, Clone, PartialEq)]
pub enum ContractionConstant {
    /// Every `k ∈ [k_star, 1)` certifies; `k_star = 0` means any `k` does.
    Contractive { k_star: f64 },
    /// The largest ratio is at least 1; `pairs` lists every unordered pair
    /// reaching it or beyond 1, in scan order.
    NotContractive {
        ratio: f64,
        pairs: Vec<(PointId, PointId)>,
        reason: String,
    },
}

impl ContractionConstant {
    /// A constant in `(0,1)` that certifies the map, when one exists.
    pub fn certifying_k(&self) -> Option<f64> {
        match self {
            ContractionConstant::Contractive { k_star } if *k_star > 0.0 => Some(*k_star),
            ContractionConstant::Contractive { .. } => Some(0.5),
            ContractionConstant::NotContractive { .. } => None,
        }
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// The smallest `k` for which [`is_ts_if_contractive`] passes, or the pairs
/// that prevent any `k < 1`.
pub fn min_contraction_constant(inst: &FiniteInstance, map: &SelfMap) -> Result<ContractionConstant> {
    let all: Vec<PointId> = inst.ids().collect();
    min_contraction_constant_on(inst, map, &all)
}

/// [`min_contraction_constant`] restricted to pairs drawn from `subset`.
pub fn min_contraction_constant_on(
    inst: &FiniteInstance,
    map: &SelfMap,
    subset: &[PointId],
) -> Result<ContractionConstant> {
    map.validate(inst)?;
    let pairs = pairs_within(inst, subset)?;
    let mut worst = 0.0_f64;
    let mut offending: Vec<(PointId, PointId)> = Vec::new();
    let ts: &[f64] = if is_standard(inst) { inst.t_grid() } else { inst.checked_t() };
    for &(x, y) in &pairs {
        let (tx, ty) = (map.apply(x), map.apply(y));
        for &t in ts {
            let r = ratio(inst.mu(x, y, t), inst.mu(tx, ty, t))
                .max(ratio(inst.nu(tx, ty, t), inst.nu(x, y, t)));
            worst = worst.max(r);
            let key = (x.min(y), x.max(y));
            if r >= 1.0 && !offending.contains(&key) {
                offending.push(key);
            }
        }
    }
    if is_standard(inst) && !pairs.is_empty() {
        let mut all_pairs: Vec<(PointId, PointId)> =
            pairs.iter().filter(|(x, y)| x < y).copied().collect();
        all_pairs.sort();
        return Ok(ContractionConstant::NotContractive {
            ratio: worst.max(1.0),
            pairs: all_pairs,
            reason: "standard profile: sup over t of mu(x,y,t) is 1 off the diagonal, so the ratio tends to 1 for every pair".into(),
        });
    }
    if worst >= 1.0 {
        let reason = if worst.is_infinite() {
            "a pair with nu(x,y,t) = 0 has nu(Tx,Ty,t) > 0".to_string()
        } else {
            format!("largest ratio is {}", crate::format::g17(worst))
        };
        return Ok(ContractionConstant::NotContractive {
            ratio: worst,
            pairs: offending,
            reason,
        });
    }
    if worst == 0.0 {
        return Ok(ContractionConstant::Contractive { k_star: 0.0 });
    }
    // Round up until the exact inequalities accept it.
    let restricted = |k: f64| {
        pairs.iter().all(|&pair| {
            inst.checked_t()
                .iter()
                .all(|&t| ts_if_violation(inst, map, k, pair, t).is_none())
        })
    };
    let mut k = worst;
    for _ in 0..64 {
        if k >= 1.0 {
            break;
        }
        if restricted(k) {
            return Ok(ContractionConstant::Contractive { k_star: k });
        }
        k = k.next_up();
    }
    Ok(ContractionConstant::NotContractive {
        ratio: worst,
        pairs: offending,
        reason: "no representable k below 1 satisfies the inequalities".into(),
    })
}

/// Checks the `(ε,λ)` local contraction conditions over pairs `x ≠ y`:
/// `μ(x,y,t) > ε ⟹ λ·μ(Tx,Ty,t) > μ(x,y,t)` and
/// `ν(x,y,t) < 1−ε ⟹ ν(Tx,Ty,t)/λ < ν(x,y,t)`.
pub fn is_locally_contractive(
    inst: &FiniteInstance,
    map: &SelfMap,
    eps: f64,
    lambda: f64,
) -> Result<Certification> {
    unit_open("eps", eps)?;
    unit_open("lambda", lambda)?;
    map.validate(inst)?;
    let (ts, mode) = match inst.profile().t_dependence() {
        TDependence::Independent => (inst.checked_t(), WitnessMode::Exact),
        _ => (inst.t_grid(), WitnessMode::Grid),
    };
    for (x, y) in off_diagonal(inst) {
        let (tx, ty) = (map.apply(x), map.apply(y));
        for &t in ts {
            let mu = inst.mu(x, y, t);
            let mu_img = inst.mu(tx, ty, t);
            if mu > eps && lambda * mu_img <= mu {
                return Ok(Certification::Refuted(Counterexample {
                    x,
                    y,
                    t,
                    clause: Clause::Mu,
                    lhs: lambda * mu_img,
                    rhs: mu,
                    note: None,
                }));
            }
            let nu = inst.nu(x, y, t);
            let nu_img = inst.nu(tx, ty, t);
            if nu < 1.0 - eps && nu_img / lambda >= nu {
                return Ok(Certification::Refuted(Counterexample {
                    x,
                    y,
                    t,
                    clause: Clause::Nu,
                    lhs: nu_img / lambda,
                    rhs: nu,
                    note: None,
                }));
            }
        }
    }
    Ok(Certification::Certified(ContractionCertificate {
        kind: ContractionKind::Local { eps, lambda },
        checked_t: ts.to_vec(),
        witness_mode: mode,
    }))
}

/// `{x : T(x) = x}` by direct scan.
pub fn fixed_points(inst: &FiniteInstance, map: &SelfMap) -> Result<BTreeSet<PointId>> {
    map.validate(inst)?;
    Ok(inst.ids().filter(|&x| map.apply(x) == x).collect())
}

/// Every self-map certified TS-IF contractive at `k`, in lexicographic order
/// of image tuples.
pub fn enumerate_contractive_maps(inst: &FiniteInstance, k: f64, cap: u64) -> Result<Vec<SelfMap>> {
    unit_open("k", k)?;
    let n = inst.len();
    let count = (n as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::CapExceeded { count, cap });
    }
    let mut found = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        let map = SelfMap::new(
            format!("[{}]", digits.iter().map(|&d| inst.label(PointId(d))).collect::<Vec<_>>().join(",")),
            digits.iter().map(|&d| PointId(d)).collect(),
        );
        if is_ts_if_contractive(inst, &map, k)?.is_certified() {
            found.push(map);
        }
        // Odometer: the last coordinate moves fastest.
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(found);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < n {
                break;
            }
            digits[pos] = 0;
        }
    }
}

impl fmt::Display for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
