//! Continuous t-norms and t-conorms on the unit interval.
//!
//! The built-in kinds are evaluated in closed form. The formulas are arranged
//! so that the boundary law, commutativity and monotonicity hold exactly in
//! floating point, e.g. the Łukasiewicz t-norm is computed on the ordered
//! pair as `lo - (1 - hi)` so that `a ∗ 1` returns `a` bit for bit.
//! Associativity of the product-based kinds holds only up to rounding.
//!
//! Custom operations are mesh tables with bilinear interpolation between mesh
//! points.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default tolerance for law checks on custom tables.
pub const CUSTOM_TABLE_TOL: f64 = 1e-9;

/// Values of a binary operation on a uniform mesh of `[0,1]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshTable {
    step: f64,
    intervals: usize,
    values: Vec<f64>,
}

/// Number of mesh intervals when `step` divides 1 (up to rounding).
fn intervals_for(step: f64) -> Option<usize> {
    if !(step > 0.0 && step <= 1.0) {
        return None;
    }
    let n = (1.0 / step).round();
    ((n * step - 1.0).abs() <= 1e-9).then_some(n as usize)
}

impl MeshTable {
    /// Builds a table from its rows; row `i` holds `f(i·step, j·step)`.
    pub fn new(step: f64, rows: Vec<Vec<f64>>) -> Result<Self> {
        let intervals = intervals_for(step).ok_or_else(|| {
            Error::Construction(format!("table mesh step {step} must divide 1"))
        })?;
        let side = intervals + 1;
        if rows.len() != side {
            return Err(Error::Construction(format!(
                "table has {} rows, mesh step {step} needs {side}",
                rows.len()
            )));
        }
        let mut values = Vec::with_capacity(side * side);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != side {
                return Err(Error::Construction(format!(
                    "table row {i} has {} entries, expected {side} (table must be square)",
                    row.len()
                )));
            }
            for (j, v) in row.into_iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Construction(format!(
                        "table entry [{i}][{j}] = {v} lies outside [0,1]"
                    )));
                }
                values.push(v);
            }
        }
        Ok(Self {
            step,
            intervals,
            values,
        })
    }

    /// Tabulates `f` on the mesh with the given step.
    pub fn from_fn(step: f64, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let n = intervals_for(step).ok_or_else(|| {
            Error::Construction(format!("table mesh step {step} must divide 1"))
        })?;
        let rows = (0..=n)
            .map(|i| {
                (0..=n)
                    .map(|j| f(i as f64 / n as f64, j as f64 / n as f64))
                    .collect()
            })
            .collect();
        Self::new(step, rows)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values
            .chunks(self.intervals + 1)
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// Mesh coordinates `0, 1/n, ..., 1`.
    pub fn mesh_points(&self) -> Vec<f64> {
        let n = self.intervals;
        (0..=n).map(|k| k as f64 / n as f64).collect()
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.intervals + 1) + j]
    }

    fn cell(&self, x: f64) -> (usize, f64) {
        let n = self.intervals;
        let scaled = x * n as f64;
        let i = (scaled.floor() as usize).min(n - 1);
        (i, scaled - i as f64)
    }

    fn interpolate(&self, a: f64, b: f64) -> f64 {
        let (i, fa) = self.cell(a);
        let (j, fb) = self.cell(b);
        let v00 = self.at(i, j);
        let v01 = self.at(i, j + 1);
        let v10 = self.at(i + 1, j);
        let v11 = self.at(i + 1, j + 1);
        let v = v00 * (1.0 - fa) * (1.0 - fb)
            + v10 * fa * (1.0 - fb)
            + v01 * (1.0 - fa) * fb
            + v11 * fa * fb;
        v.clamp(0.0, 1.0)
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} is not in [0,1]")))
    }
}

/// A binary operation on `[0,1]` with a neutral element.
pub trait UnitOperation {
    /// Evaluates without range checks.
    fn eval(&self, a: f64, b: f64) -> f64;

    /// Neutral element: 1 for t-norms, 0 for t-conorms.
    fn identity(&self) -> f64;

    fn kind_name(&self) -> &'static str;

    fn is_builtin(&self) -> bool;

    /// Declared idempotency flag.
    fn is_idempotent(&self) -> bool;

    fn apply(&self, a: f64, b: f64) -> Result<f64> {
        check_unit("a", a)?;
        check_unit("b", b)?;
        Ok(self.eval(a, b))
    }

    /// Left fold of [`UnitOperation::apply`] over a nonempty list.
    fn fold(&self, values: &[f64]) -> Result<f64> {
        let (first, rest) = values
            .split_first()
            .ok_or_else(|| Error::Domain("cannot fold an empty list".into()))?;
        check_unit("values[0]", *first)?;
        rest.iter().enumerate().try_fold(*first, |acc, (i, &v)| {
            check_unit(&format!("values[{}]", i + 1), v)?;
            Ok(self.eval(acc, v))
        })
    }
}

/// Kinds of t-norm.
#[derive(Debug, Clone, PartialEq)]
pub enum TNormKind {
    Minimum,
    Product,
    Lukasiewicz,
    CustomTable(MeshTable),
}

/// A continuous t-norm `∗`.
#[derive(Debug, Clone, PartialEq)]
pub struct TNorm {
    kind: TNormKind,
    idempotent: bool,
}

impl TNorm {
    pub fn minimum() -> Self {
        Self {
            kind: TNormKind::Minimum,
            idempotent: true,
        }
    }

    pub fn product() -> Self {
        Self {
            kind: TNormKind::Product,
            idempotent: false,
        }
    }

    pub fn lukasiewicz() -> Self {
        Self {
            kind: TNormKind::Lukasiewicz,
            idempotent: false,
        }
    }

    /// Custom table. The idempotency flag is read off the table's own mesh;
    /// a declared flag that disagrees is rejected.
    pub fn custom(table: MeshTable, declared_idempotent: Option<bool>) -> Result<Self> {
        let idempotent = table_idempotent(&table);
        check_declaration(idempotent, declared_idempotent)?;
        Ok(Self {
            kind: TNormKind::CustomTable(table),
            idempotent,
        })
    }

    pub fn kind(&self) -> &TNormKind {
        &self.kind
    }
}

impl UnitOperation for TNorm {
    fn eval(&self, a: f64, b: f64) -> f64 {
        match &self.kind {
            TNormKind::Minimum => a.min(b),
            TNormKind::Product => a * b,
            TNormKind::Lukasiewicz => {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                (lo - (1.0 - hi)).max(0.0)
            }
            TNormKind::CustomTable(t) => t.interpolate(a, b),
        }
    }

    fn identity(&self) -> f64 {
        1.0
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            TNormKind::Minimum => "minimum",
            TNormKind::Product => "product",
            TNormKind::Lukasiewicz => "lukasiewicz",
            TNormKind::CustomTable(_) => "custom-table",
        }
    }

    fn is_builtin(&self) -> bool {
        !matches!(self.kind, TNormKind::CustomTable(_))
    }

    fn is_idempotent(&self) -> bool {
        self.idempotent
    }
}

impl FromStr for TNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimum" => Ok(Self::minimum()),
            "product" => Ok(Self::product()),
            "lukasiewicz" => Ok(Self::lukasiewicz()),
            other => Err(Error::Construction(format!(
                "unknown t-norm kind `{other}` (expected minimum, product, lukasiewicz or custom-table)"
            ))),
        }
    }
}

impl fmt::Display for TNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind_name())
    }
}

/// Kinds of t-conorm.
#[derive(Debug, Clone, PartialEq)]
pub enum TConormKind {
    Maximum,
    ProbabilisticSum,
    Lukasiewicz,
    CustomTable(MeshTable),
}

/// A continuous t-conorm `◇`.
#[derive(Debug, Clone, PartialEq)]
pub struct TConorm {
    kind: TConormKind,
    idempotent: bool,
}

impl TConorm {
    pub fn maximum() -> Self {
        Self {
            kind: TConormKind::Maximum,
            idempotent: true,
        }
    }

    pub fn probabilistic_sum() -> Self {
        Self {
            kind: TConormKind::ProbabilisticSum,
            idempotent: false,
        }
    }

    pub fn lukasiewicz() -> Self {
        Self {
            kind: TConormKind::Lukasiewicz,
            idempotent: false,
        }
    }

    pub fn custom(table: MeshTable, declared_idempotent: Option<bool>) -> Result<Self> {
        let idempotent = table_idempotent(&table);
        check_declaration(idempotent, declared_idempotent)?;
        Ok(Self {
            kind: TConormKind::CustomTable(table),
            idempotent,
        })
    }

    pub fn kind(&self) -> &TConormKind {
        &self.kind
    }
}

impl UnitOperation for TConorm {
    fn eval(&self, a: f64, b: f64) -> f64 {
        match &self.kind {
            TConormKind::Maximum => a.max(b),
            TConormKind::ProbabilisticSum => {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                (hi + lo * (1.0 - hi)).min(1.0)
            }
            TConormKind::Lukasiewicz => (a + b).min(1.0),
            TConormKind::CustomTable(t) => t.interpolate(a, b),
        }
    }

    fn identity(&self) -> f64 {
        0.0
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            TConormKind::Maximum => "maximum",
            TConormKind::ProbabilisticSum => "probabilistic-sum",
            TConormKind::Lukasiewicz => "lukasiewicz",
            TConormKind::CustomTable(_) => "custom-table",
        }
    }

    fn is_builtin(&self) -> bool {
        !matches!(self.kind, TConormKind::CustomTable(_))
    }

    fn is_idempotent(&self) -> bool {
        self.idempotent
    }
}

impl FromStr for TConorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maximum" => Ok(Self::maximum()),
            "probabilistic-sum" => Ok(Self::probabilistic_sum()),
            "lukasiewicz" => Ok(Self::lukasiewicz()),
            other => Err(Error::Construction(format!(
                "unknown t-conorm kind `{other}` (expected maximum, probabilistic-sum, lukasiewicz or custom-table)"
            ))),
        }
    }
}

impl fmt::Display for TConorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind_name())
    }
}

fn table_idempotent(table: &MeshTable) -> bool {
    table
        .mesh_points()
        .iter()
        .all(|&a| (table.interpolate(a, a) - a).abs() <= CUSTOM_TABLE_TOL)
}

fn check_declaration(actual: bool, declared: Option<bool>) -> Result<()> {
    match declared {
        Some(d) if d != actual => Err(Error::Construction(format!(
            "declared idempotent={d} but the table gives idempotent={actual}"
        ))),
        _ => Ok(()),
    }
}

/// Mesh `0, step, ..., 1` used by law checks.
fn closed_mesh(step: f64) -> Vec<f64> {
    match intervals_for(step) {
        Some(n) => (0..=n).map(|k| k as f64 / n as f64).collect(),
        None => {
            let mut pts: Vec<f64> = (0..)
                .map(|k| k as f64 * step)
                .take_while(|&v| v < 1.0 - 1e-12)
                .collect();
            pts.push(1.0);
            pts
        }
    }
}

/// Grid of the open interval `(0,1)` with the given step, ascending.
pub fn open_unit_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::Domain(format!(
            "grid step {step} must lie in (0,1)"
        )));
    }
    let pts = closed_mesh(step);
    Ok(pts[1..pts.len() - 1].to_vec())
}

/// The four laws shared by t-norms and t-conorms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    Boundary,
    Commutativity,
    Associativity,
    Monotonicity,
}

impl Law {
    pub fn name(self) -> &'static str {
        match self {
            Law::Boundary => "boundary",
            Law::Commutativity => "commutativity",
            Law::Associativity => "associativity",
            Law::Monotonicity => "monotonicity",
        }
    }
}

/// Arguments at which a law fails, with both sides of the comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct LawWitness {
    pub args: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawCheck {
    pub law: Law,
    pub passed: bool,
    pub witness: Option<LawWitness>,
}

/// Result of [`check_operation_axioms`].
#[derive(Debug, Clone, PartialEq)]
pub struct LawReport {
    pub operation: String,
    pub mesh_step: f64,
    pub tol: f64,
    pub checks: Vec<LawCheck>,
    /// Whether `a ∗ a = a` held at every mesh point.
    pub idempotent: bool,
    /// Mesh point with the largest idempotency defect, when there is one.
    pub idempotent_witness: Option<LawWitness>,
}

impl LawReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, law: Law) -> &LawCheck {
        self.checks
            .iter()
            .find(|c| c.law == law)
            .expect("every law is checked")
    }
}

fn verdict(law: Law, witness: Option<LawWitness>) -> LawCheck {
    LawCheck {
        law,
        passed: witness.is_none(),
        witness,
    }
}

/// Scans a mesh of `[0,1]` for violations of the boundary, commutativity,
/// associativity and monotonicity laws, and measures idempotency.
///
/// The boundary law is checked on both sides (`a ∗ e = e ∗ a = a`).
/// Commutativity and associativity are scanned over interior mesh points:
/// at 0 and 1 they follow from the two-sided boundary law and monotonicity.
/// Each law reports the first violation in ascending scan order.
pub fn check_operation_axioms<O: UnitOperation + ?Sized>(
    op: &O,
    mesh_step: f64,
    tol: f64,
) -> Result<LawReport> {
    if !(mesh_step > 0.0 && mesh_step <= 0.25) {
        return Err(Error::Domain(format!(
            "mesh step {mesh_step} must lie in (0, 0.25]"
        )));
    }
    if !(tol >= 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be nonnegative")));
    }
    let mesh = closed_mesh(mesh_step);
    let interior = &mesh[1..mesh.len() - 1];
    let e = op.identity();
    let f = |a, b| op.eval(a, b);

    let boundary = mesh.iter().find_map(|&a| {
        let (l, r) = (f(a, e), f(e, a));
        if (l - a).abs() > tol {
            Some(LawWitness { args: vec![a, e], lhs: l, rhs: a })
        } else if (r - a).abs() > tol {
            Some(LawWitness { args: vec![e, a], lhs: r, rhs: a })
        } else {
            None
        }
    });

    let commutativity = interior.iter().enumerate().find_map(|(i, &a)| {
        interior[i + 1..].iter().find_map(|&b| {
            let (l, r) = (f(a, b), f(b, a));
            ((l - r).abs() > tol).then(|| LawWitness { args: vec![a, b], lhs: l, rhs: r })
        })
    });

    let associativity = interior.iter().find_map(|&a| {
        interior.iter().find_map(|&b| {
            interior.iter().find_map(|&c| {
                let l = f(f(a, b), c);
                let r = f(a, f(b, c));
                ((l - r).abs() > tol)
                    .then(|| LawWitness { args: vec![a, b, c], lhs: l, rhs: r })
            })
        })
    });

    let monotonicity = mesh.iter().find_map(|&fixed| {
        mesh.windows(2).find_map(|w| {
            let (lo, hi) = (w[0], w[1]);
            if f(lo, fixed) > f(hi, fixed) + tol {
                Some(LawWitness {
                    args: vec![lo, fixed, hi, fixed],
                    lhs: f(lo, fixed),
                    rhs: f(hi, fixed),
                })
            } else if f(fixed, lo) > f(fixed, hi) + tol {
                Some(LawWitness {
                    args: vec![fixed, lo, fixed, hi],
                    lhs: f(fixed, lo),
                    rhs: f(fixed, hi),
                })
            } else {
                None
            }
        })
    });

    let mut worst: Option<(f64, f64)> = None;
    for &a in interior {
        let defect = (f(a, a) - a).abs();
        if defect > tol && worst.is_none_or(|(_, d)| defect > d) {
            worst = Some((a, defect));
        }
    }

    Ok(LawReport {
        operation: op.kind_name().to_string(),
        mesh_step,
        tol,
        checks: vec![
            verdict(Law::Boundary, boundary),
            verdict(Law::Commutativity, commutativity),
            verdict(Law::Associativity, associativity),
            verdict(Law::Monotonicity, monotonicity),
        ],
        idempotent: worst.is_none(),
        idempotent_witness: worst.map(|(a, _)| LawWitness {
            args: vec![a],
            lhs: f(a, a),
            rhs: a,
        }),
    })
}

fn open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} is not in (0,1)")))
    }
}

/// Grid witnesses for the residual property of a t-norm/t-conorm pair:
/// the smallest grid values `r3`, `r4` with `r1 ∗ r3 > r2` and `r4 ◇ r2 < r1`.
pub fn find_residual_witness(
    tnorm: &TNorm,
    tconorm: &TConorm,
    r1: f64,
    r2: f64,
    grid_step: f64,
) -> Result<(f64, f64)> {
    open_unit("r1", r1)?;
    open_unit("r2", r2)?;
    if r1 <= r2 {
        return Err(Error::Domain(format!("r1 = {r1} must exceed r2 = {r2}")));
    }
    let grid = open_unit_grid(grid_step)?;
    let r3 = grid.iter().copied().find(|&r3| tnorm.eval(r1, r3) > r2);
    let r4 = grid.iter().copied().find(|&r4| tconorm.eval(r4, r2) < r1);
    match (r3, r4) {
        (Some(r3), Some(r4)) => Ok((r3, r4)),
        (None, _) => Err(Error::WitnessNotFound(format!(
            "no grid value r3 (step {grid_step}) with {tnorm}({r1}, r3) > {r2}"
        ))),
        (_, None) => Err(Error::WitnessNotFound(format!(
            "no grid value r4 (step {grid_step}) with {tconorm}(r4, {r2}) < {r1}"
        ))),
    }
}

/// Grid witnesses for the idempotent-bound property: the smallest grid values
/// `r6`, `r7` with `r6 ∗ r6 ≥ r5` and `r7 ◇ r7 ≤ r5`.
pub fn find_idempotent_witness(
    tnorm: &TNorm,
    tconorm: &TConorm,
    r5: f64,
    grid_step: f64,
) -> Result<(f64, f64)> {
    open_unit("r5", r5)?;
    let grid = open_unit_grid(grid_step)?;
    let r6 = grid.iter().copied().find(|&r6| tnorm.eval(r6, r6) >= r5);
    let r7 = grid.iter().copied().find(|&r7| tconorm.eval(r7, r7) <= r5);
    match (r6, r7) {
        (Some(r6), Some(r7)) => Ok((r6, r7)),
        (None, _) => Err(Error::WitnessNotFound(format!(
            "no grid value r6 (step {grid_step}) with {tnorm}(r6, r6) >= {r5}"
        ))),
        (_, None) => Err(Error::WitnessNotFound(format!(
            "no grid value r7 (step {grid_step}) with {tconorm}(r7, r7) <= {r5}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tnorm_examples() {
        assert_eq!(TNorm::minimum().apply(0.3, 1.0).unwrap(), 0.3);
        assert_eq!(TNorm::product().apply(0.5, 0.5).unwrap(), 0.25);
        assert_eq!(TNorm::lukasiewicz().apply(0.7, 0.2).unwrap(), 0.0);
    }

    #[test]
    fn tconorm_examples() {
        assert_eq!(TConorm::maximum().apply(0.3, 0.0).unwrap(), 0.3);
        assert_eq!(TConorm::probabilistic_sum().apply(0.5, 0.5).unwrap(), 0.75);
        assert_eq!(TConorm::maximum().apply(0.4, 0.4).unwrap(), 0.4);
    }

    #[test]
    fn apply_rejects_out_of_range() {
        assert!(matches!(TNorm::minimum().apply(1.2, 0.5), Err(Error::Domain(_))));
        assert!(matches!(TConorm::maximum().apply(0.5, -0.1), Err(Error::Domain(_))));
        assert!(matches!(TNorm::product().apply(f64::NAN, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn folds() {
        let r = 0.3;
        assert_eq!(TNorm::minimum().fold(&[1.0 - r; 3]).unwrap(), 0.7);
        assert_eq!(TNorm::product().fold(&[0.5, 0.5, 0.5]).unwrap(), 0.125);
        assert_eq!(TConorm::maximum().fold(&[r; 3]).unwrap(), 0.3);
        assert_eq!(TConorm::probabilistic_sum().fold(&[0.5, 0.5]).unwrap(), 0.75);
        for t in [TNorm::minimum(), TNorm::product(), TNorm::lukasiewicz()] {
            assert_eq!(t.fold(&[0.42]).unwrap(), 0.42);
        }
        for s in [TConorm::maximum(), TConorm::probabilistic_sum(), TConorm::lukasiewicz()] {
            assert_eq!(s.fold(&[0.1]).unwrap(), 0.1);
        }
        assert!(matches!(TNorm::minimum().fold(&[]), Err(Error::Domain(_))));
        assert!(matches!(TConorm::maximum().fold(&[]), Err(Error::Domain(_))));
    }

    #[test]
    fn minimum_passes_all_laws() {
        let report = check_operation_axioms(&TNorm::minimum(), 0.1, 1e-12).unwrap();
        assert!(report.all_pass(), "{report:?}");
        assert!(report.idempotent);
        assert!(report.idempotent_witness.is_none());
    }

    #[test]
    fn projection_table_is_not_commutative() {
        let table = MeshTable::from_fn(0.1, |a, _| a).unwrap();
        let op = TNorm::custom(table, None).unwrap();
        let report = check_operation_axioms(&op, 0.1, CUSTOM_TABLE_TOL).unwrap();
        let comm = report.check(Law::Commutativity);
        assert!(!comm.passed);
        assert_eq!(comm.witness.as_ref().unwrap().args, vec![0.1, 0.2]);
    }

    #[test]
    fn product_is_not_idempotent() {
        let report = check_operation_axioms(&TNorm::product(), 0.1, 1e-12).unwrap();
        assert!(report.all_pass(), "{report:?}");
        assert!(!report.idempotent);
        let w = report.idempotent_witness.unwrap();
        assert_eq!(w.args, vec![0.5]);
        assert_eq!(w.lhs, 0.25);
    }

    #[test]
    fn mesh_step_range_is_enforced() {
        assert!(check_operation_axioms(&TNorm::minimum(), 0.3, 1e-12).is_err());
        assert!(check_operation_axioms(&TNorm::minimum(), 0.0, 1e-12).is_err());
    }

    #[test]
    fn custom_table_construction_errors() {
        assert!(MeshTable::new(0.5, vec![vec![0.0, 0.0], vec![0.0, 1.0]]).is_err());
        assert!(MeshTable::new(0.5, vec![vec![0.0; 3], vec![0.0; 3], vec![0.0; 2]]).is_err());
        assert!(MeshTable::new(0.5, vec![vec![0.0; 3], vec![0.0; 3], vec![1.5; 3]]).is_err());
        assert!(MeshTable::new(0.3, vec![vec![0.0; 4]; 4]).is_err());
    }

    #[test]
    fn custom_table_interpolates_builtin() {
        let table = MeshTable::from_fn(0.25, |a, b| a.min(b)).unwrap();
        let op = TNorm::custom(table, Some(true)).unwrap();
        assert!(op.is_idempotent());
        assert!((op.apply(0.3, 0.9).unwrap() - 0.3).abs() < 0.05);
        let table = MeshTable::from_fn(0.25, |a, b| a * b).unwrap();
        assert!(TNorm::custom(table, Some(true)).is_err());
    }

    #[test]
    fn residual_witness_examples() {
        let (r3, r4) =
            find_residual_witness(&TNorm::minimum(), &TConorm::maximum(), 0.8, 0.5, 0.01).unwrap();
        assert_eq!((r3, r4), (0.51, 0.01));

        let (r3, _) = find_residual_witness(
            &TNorm::product(),
            &TConorm::probabilistic_sum(),
            0.9,
            0.1,
            0.01,
        )
        .unwrap();
        // 0.9 * 0.11 = 0.099, 0.9 * 0.12 = 0.108
        assert_eq!(r3, 0.12);

        let err =
            find_residual_witness(&TNorm::minimum(), &TConorm::maximum(), 0.5001, 0.5, 0.5);
        assert!(matches!(err, Err(Error::WitnessNotFound(_))));
    }

    #[test]
    fn idempotent_witness_examples() {
        let pair = (TNorm::minimum(), TConorm::maximum());
        assert_eq!(find_idempotent_witness(&pair.0, &pair.1, 0.6, 0.01).unwrap(), (0.6, 0.01));
        let (r6, r7) = find_idempotent_witness(
            &TNorm::product(),
            &TConorm::probabilistic_sum(),
            0.25,
            0.01,
        )
        .unwrap();
        assert_eq!((r6, r7), (0.5, 0.01));
        assert!(matches!(
            find_idempotent_witness(&pair.0, &pair.1, 0.99, 0.5),
            Err(Error::WitnessNotFound(_))
        ));
    }

    #[test]
    fn witness_preconditions() {
        let (t, s) = (TNorm::minimum(), TConorm::maximum());
        assert!(matches!(find_residual_witness(&t, &s, 0.4, 0.5, 0.01), Err(Error::Domain(_))));
        assert!(matches!(find_residual_witness(&t, &s, 1.0, 0.5, 0.01), Err(Error::Domain(_))));
        assert!(matches!(find_idempotent_witness(&t, &s, 0.0, 0.01), Err(Error::Domain(_))));
    }

    #[test]
    fn open_grid_excludes_endpoints() {
        assert_eq!(open_unit_grid(0.5).unwrap(), vec![0.5]);
        assert_eq!(open_unit_grid(0.25).unwrap(), vec![0.25, 0.5, 0.75]);
        let g = open_unit_grid(0.3).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|&v| v > 0.0 && v < 1.0));
    }

    #[test]
    fn only_min_max_pair_is_idempotent() {
        let norms = [TNorm::minimum(), TNorm::product(), TNorm::lukasiewicz()];
        let conorms = [TConorm::maximum(), TConorm::probabilistic_sum(), TConorm::lukasiewicz()];
        let pairs: Vec<_> = norms
            .iter()
            .flat_map(|t| conorms.iter().map(move |s| (t, s)))
            .filter(|(t, s)| t.is_idempotent() && s.is_idempotent())
            .map(|(t, s)| (t.kind_name(), s.kind_name()))
            .collect();
        assert_eq!(pairs, vec![("minimum", "maximum")]);
    }
}
