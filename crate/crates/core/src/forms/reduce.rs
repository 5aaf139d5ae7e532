//! Minkowski reduction for rank 3.
//!
//! Greedy reduction: keep the basis sorted by norm, Lagrange-reduce the first
//! two vectors and move the third to the shortest vector of its coset modulo
//! the span of the first two. In rank ≤ 4 the fixed points of this procedure
//! are exactly the Minkowski-reduced bases.

use super::{TernaryForm, UnimodularMap};
use crate::arith::{self, Mat3};

struct Basis {
    gram: [[i128; 3]; 3],
    cols: [[i128; 3]; 3],
}

impl Basis {
    fn new(f: &TernaryForm) -> Self {
        let g = f.gram();
        Basis {
            gram: g.map(|r| r.map(|v| v as i128)),
            cols: [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        }
    }

    fn norm(&self, i: usize) -> i128 {
        self.gram[i][i]
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.gram.swap(i, j);
        for row in self.gram.iter_mut() {
            row.swap(i, j);
        }
        for row in self.cols.iter_mut() {
            row.swap(i, j);
        }
    }

    /// b_j ← b_j − q·b_i
    fn sub(&mut self, j: usize, i: usize, q: i128) {
        if q == 0 {
            return;
        }
        for row in self.cols.iter_mut() {
            row[j] -= q * row[i];
        }
        let gii = self.gram[i][i];
        let gij = self.gram[i][j];
        let gjj = self.gram[j][j];
        for k in 0..3 {
            if k != j {
                let v = self.gram[k][j] - q * self.gram[k][i];
                self.gram[k][j] = v;
                self.gram[j][k] = v;
            }
        }
        self.gram[j][j] = gjj - 2 * q * gij + q * q * gii;
    }

    fn sort(&mut self) -> bool {
        let mut moved = false;
        for i in 1..3 {
            let mut j = i;
            while j > 0 && self.norm(j) < self.norm(j - 1) {
                self.swap(j, j - 1);
                j -= 1;
                moved = true;
            }
        }
        moved
    }
}

/// Nearest integer to `t/n` (n > 0) with ties rounded toward zero.
fn round_toward_zero(t: i128, n: i128) -> i128 {
    let q = (2 * t.abs() + n - 1) / (2 * n);
    if t < 0 {
        -q
    } else {
        q
    }
}

fn reduce_basis(basis: &mut Basis) {
    loop {
        let mut changed = basis.sort();

        // Lagrange reduction of (b0, b1).
        loop {
            let q = round_toward_zero(basis.gram[0][1], basis.norm(0));
            basis.sub(1, 0, q);
            if basis.norm(1) < basis.norm(0) {
                basis.swap(0, 1);
                changed = true;
            } else {
                break;
            }
        }

        // Shortest vector in b2 + Z b0 + Z b1.
        let g = basis.gram;
        let det2 = g[0][0] * g[1][1] - g[0][1] * g[0][1];
        let t0 = (g[0][2] * g[1][1] - g[1][2] * g[0][1]).div_euclid(det2);
        let t1 = (g[1][2] * g[0][0] - g[0][2] * g[0][1]).div_euclid(det2);
        let norm_after = |k0: i128, k1: i128| {
            g[2][2] - 2 * (k0 * g[0][2] + k1 * g[1][2]) + k0 * k0 * g[0][0] + 2 * k0 * k1 * g[0][1] + k1 * k1 * g[1][1]
        };
        let mut best = (0, 0, g[2][2]);
        for k0 in t0 - 2..=t0 + 3 {
            for k1 in t1 - 2..=t1 + 3 {
                let n = norm_after(k0, k1);
                if n < best.2 {
                    best = (k0, k1, n);
                }
            }
        }
        if best.2 < g[2][2] {
            basis.sub(2, 0, best.0);
            basis.sub(2, 1, best.1);
            changed = true;
        }

        if !changed && !basis.sort() {
            break;
        }
    }
}

fn to_mat(m: &[[i128; 3]; 3]) -> Mat3 {
    m.map(|r| r.map(|v| i64::try_from(v).expect("reduction overflow")))
}

/// Minkowski-reduced representative and the basis change producing it.
///
/// The output satisfies `0 < a ≤ b ≤ c`, `|f| ≤ a`, `|e| ≤ a`, `|d| ≤ b` and
/// the coset conditions. Among the sign changes and permutations of equal
/// diagonal entries, the one with lexicographically largest `(d,e,f)` is
/// chosen, which makes `d·e·f ≥ 0` whenever that is attainable.
///
/// Reduced forms are not unique on boundary cases; compare classes with
/// [`super::is_isometric`], never by reduced coefficients.
pub fn minkowski_reduce(f: &TernaryForm) -> (TernaryForm, UnimodularMap) {
    let mut basis = Basis::new(f);
    reduce_basis(&mut basis);

    let g = to_mat(&basis.gram);
    let cols = to_mat(&basis.cols);
    let mut best: Option<(TernaryForm, Mat3)> = None;
    for perm in PERMUTATIONS {
        if (0..3).any(|i| g[perm[i]][perm[i]] != g[i][i]) {
            continue;
        }
        for signs in SIGNS {
            let mut m = [[0i64; 3]; 3];
            for i in 0..3 {
                m[perm[i]][i] = signs[i];
            }
            let cand = TernaryForm::from_gram(&arith::congruence(&g, &m)).unwrap();
            let better = match &best {
                None => true,
                Some((b, _)) => (cand.d, cand.e, cand.f) > (b.d, b.e, b.f),
            };
            if better {
                best = Some((cand, arith::mat_mul(&cols, &m)));
            }
        }
    }
    let (form, u) = best.unwrap();
    (form, UnimodularMap::new(u).expect("reduction produced a non-unimodular basis"))
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
const SIGNS: [[i64; 3]; 4] = [[1, 1, 1], [-1, 1, 1], [1, -1, 1], [1, 1, -1]];

/// Checks the Minkowski inequalities for rank 3.
pub fn is_minkowski_reduced(f: &TernaryForm) -> bool {
    let (a, b, c) = (f.a, f.b, f.c);
    if !(a <= b && b <= c && f.f.abs() <= a && f.e.abs() <= a && f.d.abs() <= b) {
        return false;
    }
    for s in [-1, 1] {
        for t in [-1, 0, 1] {
            if f.eval(&[t, s, 1]) < c {
                return false;
            }
        }
    }
    true
}
