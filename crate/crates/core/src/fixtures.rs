//! Small reference instances and a seeded instance generator.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{TConorm, TNorm};
use crate::maps::SelfMap;
use crate::space::{
    induced_from_metric, BlackboxProfile, FiniteInstance, MetricScheme, PairProfile, PointId,
    SquareMatrix,
};

/// Distance of the farthest generated pair.
pub const MAX_DISTANCE: f64 = 3.0;

/// Smallest generated distance relative to the largest.
pub const MIN_SEPARATION: f64 = 1e-3;

/// The `t` grid used by the reference fixtures.
pub const STANDARD_T_GRID: [f64; 3] = [0.25, 1.0, 4.0];

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn constant(names: &[&str], off_mu: impl Fn(usize, usize) -> f64, off_nu: impl Fn(usize, usize) -> f64) -> FiniteInstance {
    let n = names.len();
    let mu = SquareMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { off_mu(i, j) });
    let nu = SquareMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { off_nu(i, j) });
    FiniteInstance::new(
        labels(names),
        PairProfile::Constant { mu, nu },
        TNorm::minimum(),
        TConorm::maximum(),
        STANDARD_T_GRID.to_vec(),
    )
    .expect("fixture is well formed")
}

/// Three points, `μ = ν = 0.5` off the diagonal, min/max.
pub fn u3() -> FiniteInstance {
    constant(&["a", "b", "c"], |_, _| 0.5, |_, _| 0.5)
}

/// Four points, `μ = ν = 0.5` off the diagonal, min/max.
pub fn u4() -> FiniteInstance {
    constant(&["a", "b", "c", "d"], |_, _| 0.5, |_, _| 0.5)
}

/// The map `a→a, b→a, c→b, d→b` on [`u4`].
pub fn u4_map() -> SelfMap {
    SelfMap::new("u4-descent", vec![PointId(0), PointId(0), PointId(1), PointId(1)])
}

/// [`u3`] with `μ(a,b) = μ(b,a) = 0`.
pub fn u3_mu_zero() -> FiniteInstance {
    constant(
        &["a", "b", "c"],
        |i, j| if i + j == 1 { 0.0 } else { 0.5 },
        |_, _| 0.5,
    )
}

/// [`u3`] with `c` pushed away: `μ(·,c) = 0.2`, `ν(·,c) = 0.8`.
pub fn u3_split() -> FiniteInstance {
    constant(
        &["a", "b", "c"],
        |i, j| if i == 2 || j == 2 { 0.2 } else { 0.5 },
        |i, j| if i == 2 || j == 2 { 0.8 } else { 0.5 },
    )
}

/// Three points with `μ = 0.4` off the diagonal and an off-diagonal `ν` that
/// rises near `t = 1` and falls back.
pub fn u3_nu_non_monotone() -> FiniteInstance {
    let profile = BlackboxProfile::new(
        |x, y, _t| if x == y { 1.0 } else { 0.4 },
        |x, y, t| {
            if x == y {
                0.0
            } else if (t - 1.0).abs() < 0.1 {
                0.6
            } else {
                0.5
            }
        },
    );
    FiniteInstance::new(
        labels(&["a", "b", "c"]),
        PairProfile::Blackbox(profile),
        TNorm::minimum(),
        TConorm::maximum(),
        STANDARD_T_GRID.to_vec(),
    )
    .expect("fixture is well formed")
}

fn path3() -> Vec<Vec<f64>> {
    vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]
}

/// Exponential profile with base 0.5 on the path `a–b–c`, product/probabilistic sum.
pub fn e3() -> FiniteInstance {
    induced_from_metric(
        labels(&["a", "b", "c"]),
        path3(),
        MetricScheme::Exponential { base: 0.5 },
        TNorm::product(),
        TConorm::probabilistic_sum(),
        STANDARD_T_GRID.to_vec(),
    )
    .expect("fixture is well formed")
}

/// [`e3`] under min/max, which breaks the triangle conditions.
pub fn e3_min_max() -> FiniteInstance {
    e3().with_operations(TNorm::minimum(), TConorm::maximum())
}

/// The points `0, 0.5, 1, 1.5, 2` on the line, standard profile, min/max, `t` grid `{1}`.
pub fn s5() -> FiniteInstance {
    let xs = [0.0, 0.5, 1.0, 1.5, 2.0];
    let dist = xs.iter().map(|a| xs.iter().map(|b| f64::abs(a - b)).collect()).collect();
    induced_from_metric(
        labels(&["0", "0.5", "1", "1.5", "2"]),
        dist,
        MetricScheme::Standard,
        TNorm::minimum(),
        TConorm::maximum(),
        vec![1.0],
    )
    .expect("fixture is well formed")
}

/// The map on [`s5`] sending each point to the grid point nearest its half.
pub fn s5_halving_map() -> SelfMap {
    // 0→0, 0.5→0 (0.25 ties toward 0), 1→0.5, 1.5→0.5 (0.75 ties toward 0.5), 2→1
    SelfMap::new("halving", vec![PointId(0), PointId(0), PointId(1), PointId(1), PointId(2)])
}

/// A single point `p`.
pub fn one_point() -> FiniteInstance {
    constant(&["p"], |_, _| unreachable!(), |_, _| unreachable!())
}

/// Kinds of instance produced by [`InstanceGenerator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratedKind {
    /// Exponential profile on random Euclidean distances, product/probabilistic sum.
    Exponential,
    /// Constant profile built from an ultrametric, min/max.
    Ultrametric,
}

/// Deterministic generator of small instances that satisfy the IFM conditions
/// by construction.
pub struct InstanceGenerator {
    rng: ChaCha8Rng,
}

impl InstanceGenerator {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// An instance with between 1 and `max_points` points.
    pub fn instance(&mut self, max_points: usize) -> FiniteInstance {
        let n = self.rng.random_range(1..=max_points.max(1));
        let kind = if self.rng.random_bool(0.5) {
            GeneratedKind::Exponential
        } else {
            GeneratedKind::Ultrametric
        };
        self.instance_of(kind, n)
    }

    pub fn instance_of(&mut self, kind: GeneratedKind, n: usize) -> FiniteInstance {
        let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let dist = self.euclidean(n);
        let base = self.rng.random_range(0.2..0.7);
        match kind {
            GeneratedKind::Exponential => induced_from_metric(
                names,
                dist,
                MetricScheme::Exponential { base },
                TNorm::product(),
                TConorm::probabilistic_sum(),
                STANDARD_T_GRID.to_vec(),
            )
            .expect("euclidean distances form a metric"),
            GeneratedKind::Ultrametric => {
                let u = subdominant_ultrametric(&dist);
                let mu = SquareMatrix::from_fn(n, |i, j| base.powf(u[i][j]));
                let nu = SquareMatrix::from_fn(n, |i, j| 1.0 - mu.get(i, j));
                FiniteInstance::new(
                    names,
                    PairProfile::Constant { mu, nu },
                    TNorm::minimum(),
                    TConorm::maximum(),
                    STANDARD_T_GRID.to_vec(),
                )
                .expect("ultrametric profile is well formed")
            }
        }
    }

    /// Pairwise distances of `n` random points in the plane, rescaled so the
    /// farthest pair is at distance `MAX_DISTANCE`. Layouts with a pair closer
    /// than `MIN_SEPARATION` times the widest are redrawn.
    pub fn euclidean(&mut self, n: usize) -> Vec<Vec<f64>> {
        loop {
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (self.rng.random_range(0.0..4.0), self.rng.random_range(0.0..4.0)))
                .collect();
            let raw = |i: usize, j: usize| {
                let (a, b) = (pts[i], pts[j]);
                (a.0 - b.0).hypot(a.1 - b.1)
            };
            let (mut closest, mut widest) = (f64::INFINITY, 0.0f64);
            for i in 0..n {
                for j in 0..i {
                    closest = closest.min(raw(i, j));
                    widest = widest.max(raw(i, j));
                }
            }
            if n >= 2 && !(closest > MIN_SEPARATION * widest) {
                continue;
            }
            let scale = if n >= 2 { MAX_DISTANCE / widest } else { 1.0 };
            return (0..n)
                .map(|i| (0..n).map(|j| if i == j { 0.0 } else { raw(i, j) * scale }).collect())
                .collect();
        }
    }

    /// A sequence of `len` points that is constant from index `settle` on.
    pub fn eventually_constant(&mut self, inst: &FiniteInstance, len: usize) -> Vec<PointId> {
        let n = inst.len();
        let settle = self.rng.random_range(0..len.max(1));
        let limit = PointId(self.rng.random_range(0..n));
        (0..len)
            .map(|i| {
                if i >= settle {
                    limit
                } else {
                    PointId(self.rng.random_range(0..n))
                }
            })
            .collect()
    }
}

/// Largest ultrametric below `d`: minimax path lengths.
fn subdominant_ultrametric(d: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = d.len();
    let mut u = d.to_vec();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = u[i][k].max(u[k][j]);
                if via < u[i][j] {
                    u[i][j] = via;
                }
            }
        }
    }
    u
}
