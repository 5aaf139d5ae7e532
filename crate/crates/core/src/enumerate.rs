//! Exact lattice-point counting.
//!
//! For `f = [a,b,c,d,e,f]` completing squares twice gives the identities
//!
//! ```text
//!     4a·f(x,y,z) = (2ax + fy + ez)² + g(y,z)
//!     4A·g(y,z)   = (2Ay + Bz)² + 16aD·z²
//! ```
//!
//! with `g = Ay² + Byz + Cz²`, `A = 4ab − f²`, `B = 4ad − 2ef`,
//! `C = 4ac − e²` and `D` the discriminant. These give exact integer bounds
//! on `z`, then `y`, then `x` (Fincke–Pohst layering without floating point).
//! Counting a single value `n` needs only one perfect-square test per `(y,z)`.
//!
//! An independent bounded-box enumerator ([`box_counts`]) is kept as an oracle.

use thiserror::Error;

use crate::arith::{exact_sqrt, isqrt, Vec3};
use crate::forms::{minkowski_reduce, BinaryForm, TernaryForm, UnimodularMap};

/// Default cap on visited enumeration nodes.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("enumeration budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
}

/// `r(n, f)` together with the solution set when requested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepResult {
    pub n: u64,
    pub count: u64,
    pub solutions: Option<Vec<Vec3>>,
}

/// `r(0..=bound, f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaPrefix {
    pub bound: u64,
    pub counts: Vec<u64>,
}

fn div_floor(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -(-a).div_euclid(b)
}

/// Precomputed layer data for one (reduced) form.
#[derive(Debug, Clone)]
pub struct Layers {
    a: i128,
    e: i128,
    f: i128,
    big_a: i128,
    big_b: i128,
    big_c: i128,
    disc: i128,
}

impl Layers {
    pub fn new(form: &TernaryForm) -> Self {
        let [a, b, c, d, e, f] = form.coeffs().map(|v| v as i128);
        Layers {
            a,
            e,
            f,
            big_a: 4 * a * b - f * f,
            big_b: 4 * a * d - 2 * e * f,
            big_c: 4 * a * c - e * e,
            disc: form.discriminant4().value() as i128,
        }
    }

    /// Calls `visit(y, z, g(y,z))` for every `(y,z)` with `g(y,z) ≤ 4a·bound`.
    fn for_each_yz(
        &self,
        bound: i128,
        budget: &mut Budget,
        mut visit: impl FnMut(i128, i128, i128, &mut Budget) -> Result<(), EnumError>,
    ) -> Result<(), EnumError> {
        let (a, aa, bb, cc) = (self.a, self.big_a, self.big_b, self.big_c);
        let z_max = isqrt(aa * bound / self.disc);
        for z in -z_max..=z_max {
            let ry = 16 * a * aa * bound - 16 * a * self.disc * z * z;
            if ry < 0 {
                continue;
            }
            let s = isqrt(ry);
            let lo = div_ceil(-s - bb * z, 2 * aa);
            let hi = div_floor(s - bb * z, 2 * aa);
            budget.spend((hi - lo + 1).max(0) as u64 + 1)?;
            for y in lo..=hi {
                let g = aa * y * y + bb * y * z + cc * z * z;
                visit(y, z, g, budget)?;
            }
        }
        Ok(())
    }

    /// Solutions `(x,y,z)` of `f = n` for `n ≥ 1`, passed to `visit`.
    fn solve(&self, n: u64, budget: &mut Budget, mut visit: impl FnMut(i128, i128, i128)) -> Result<(), EnumError> {
        let n = n as i128;
        let two_a = 2 * self.a;
        self.for_each_yz(n, budget, |y, z, g, _| {
            let rx = 4 * self.a * n - g;
            if let Some(s) = exact_sqrt(rx) {
                let t = self.f * y + self.e * z;
                if (s - t).rem_euclid(two_a) == 0 {
                    visit((s - t) / two_a, y, z);
                }
                if s > 0 && (-s - t).rem_euclid(two_a) == 0 {
                    visit((-s - t) / two_a, y, z);
                }
            }
            Ok(())
        })
    }

    pub fn count(&self, n: u64) -> u64 {
        if n == 0 {
            return 1;
        }
        let mut count = 0u64;
        let mut budget = Budget::unlimited();
        self.solve(n, &mut budget, |_, _, _| count += 1).unwrap();
        count
    }

    /// Visits every nonzero lattice point with value ≤ `bound`.
    fn sweep(&self, bound: u64, budget: &mut Budget, mut visit: impl FnMut(i128, i128, i128, u64)) -> Result<(), EnumError> {
        let bound = bound as i128;
        let (a, two_a) = (self.a, 2 * self.a);
        self.for_each_yz(bound, budget, |y, z, g, budget| {
            let rx = 4 * a * bound - g;
            let s = isqrt(rx);
            let t = self.f * y + self.e * z;
            let lo = div_ceil(-s - t, two_a);
            let hi = div_floor(s - t, two_a);
            budget.spend((hi - lo + 1).max(0) as u64)?;
            for x in lo..=hi {
                let xx = two_a * x + t;
                let v = (xx * xx + g) / (4 * a);
                if v > 0 {
                    visit(x, y, z, v as u64);
                }
            }
            Ok(())
        })
    }
}

struct Budget {
    left: u64,
    total: u64,
}

impl Budget {
    fn new(total: u64) -> Self {
        Budget { left: total, total }
    }

    fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    fn spend(&mut self, n: u64) -> Result<(), EnumError> {
        if n > self.left {
            return Err(EnumError::BudgetExceeded(self.total));
        }
        self.left -= n;
        Ok(())
    }
}

/// Representation counter for one form; reduces once and answers many `n`.
#[derive(Debug, Clone)]
pub struct RepCounter {
    reduced: TernaryForm,
    to_original: UnimodularMap,
    layers: Layers,
}

impl RepCounter {
    pub fn new(form: &TernaryForm) -> Self {
        let (reduced, u) = minkowski_reduce(form);
        RepCounter { layers: Layers::new(&reduced), reduced, to_original: u }
    }

    pub fn reduced(&self) -> &TernaryForm {
        &self.reduced
    }

    /// `r(n, f)`.
    pub fn count(&self, n: u64) -> u64 {
        self.layers.count(n)
    }

    /// `R(n, f)` in the coordinates of the original form, sorted.
    pub fn solutions(&self, n: u64) -> Vec<Vec3> {
        if n == 0 {
            return vec![[0, 0, 0]];
        }
        let mut out = Vec::new();
        let mut budget = Budget::unlimited();
        self.layers
            .solve(n, &mut budget, |x, y, z| out.push(self.to_original.apply(&[x as i64, y as i64, z as i64])))
            .unwrap();
        out.sort_unstable();
        out
    }

    pub fn theta(&self, bound: u64, budget: u64) -> Result<ThetaPrefix, EnumError> {
        let mut counts = vec![0u64; bound as usize + 1];
        counts[0] = 1;
        let mut budget = Budget::new(budget);
        self.layers.sweep(bound, &mut budget, |_, _, _, v| counts[v as usize] += 1)?;
        Ok(ThetaPrefix { bound, counts })
    }

    pub fn short_vectors(&self, bound: u64, budget: u64) -> Result<Vec<(Vec3, u64)>, EnumError> {
        let mut out = Vec::new();
        let mut budget = Budget::new(budget);
        self.layers.sweep(bound, &mut budget, |x, y, z, v| {
            out.push((self.to_original.apply(&[x as i64, y as i64, z as i64]), v))
        })?;
        out.sort_unstable_by(|p, q| p.1.cmp(&q.1).then(p.0.cmp(&q.0)));
        Ok(out)
    }
}

/// `r(n, f)`.
pub fn rep_count(f: &TernaryForm, n: u64) -> u64 {
    RepCounter::new(f).count(n)
}

/// `r(n, f)` and optionally `R(n, f)`.
pub fn rep_result(f: &TernaryForm, n: u64, keep_solutions: bool) -> RepResult {
    let counter = RepCounter::new(f);
    if keep_solutions {
        let sols = counter.solutions(n);
        RepResult { n, count: sols.len() as u64, solutions: Some(sols) }
    } else {
        RepResult { n, count: counter.count(n), solutions: None }
    }
}

/// Number of `(x,y)` with `ax² + bxy + cy² = n`.
pub fn rep_count_binary(l: &BinaryForm, n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let (a, b, c, n) = (l.a as i128, l.b as i128, l.c as i128, n as i128);
    let delta = 4 * a * c - b * b;
    let y_max = isqrt(4 * a * n / delta);
    let mut count = 0;
    for y in -y_max..=y_max {
        if let Some(s) = exact_sqrt(4 * a * n - delta * y * y) {
            for t in if s == 0 { vec![0] } else { vec![s, -s] } {
                if (t - b * y).rem_euclid(2 * a) == 0 {
                    count += 1;
                }
            }
        }
    }
    count
}

pub fn theta_prefix(f: &TernaryForm, bound: u64) -> Result<ThetaPrefix, EnumError> {
    theta_prefix_with_budget(f, bound, DEFAULT_BUDGET)
}

pub fn theta_prefix_with_budget(f: &TernaryForm, bound: u64, budget: u64) -> Result<ThetaPrefix, EnumError> {
    RepCounter::new(f).theta(bound, budget)
}

/// All `x` with `0 < f(x) ≤ bound`, sorted by value then lexicographically.
pub fn short_vectors(f: &TernaryForm, bound: u64) -> Result<Vec<(Vec3, u64)>, EnumError> {
    RepCounter::new(f).short_vectors(bound, DEFAULT_BUDGET)
}

pub fn short_vectors_with_budget(f: &TernaryForm, bound: u64, budget: u64) -> Result<Vec<(Vec3, u64)>, EnumError> {
    RepCounter::new(f).short_vectors(bound, budget)
}

/// Coordinate bounds of the box containing the ellipsoid `f ≤ bound`:
/// `x_i² ≤ bound·(M⁻¹)_ii = 2·bound·adj(G)_ii / det(G)`.
pub fn box_radii(f: &TernaryForm, bound: u64) -> [i64; 3] {
    let g = f.gram();
    let det_g = 2 * f.discriminant4().value() as i128;
    let adj = crate::arith::adjugate(&g);
    [0, 1, 2].map(|i| isqrt(2 * bound as i128 * adj[i][i] as i128 / det_g) as i64)
}

/// Oracle: `r(0..=bound, f)` by brute force over the bounding box, no pruning.
pub fn box_counts(f: &TernaryForm, bound: u64) -> Vec<u64> {
    let r = box_radii(f, bound);
    let mut counts = vec![0u64; bound as usize + 1];
    for x in -r[0]..=r[0] {
        for y in -r[1]..=r[1] {
            for z in -r[2]..=r[2] {
                let v = f.eval(&[x, y, z]);
                if v <= bound as i64 {
                    counts[v as usize] += 1;
                }
            }
        }
    }
    counts
}
