//! Small exact-integer helpers shared by the form modules.

use num_integer::Integer;

pub type Mat3 = [[i64; 3]; 3];
pub type Vec3 = [i64; 3];

pub const IDENTITY: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: i128) -> i128 {
    assert!(n >= 0, "isqrt of negative value {n}");
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Returns `Some(s)` with `s >= 0` and `s * s == n`, if `n` is a perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let s = isqrt(n);
    (s * s == n).then_some(s)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd_all(values: &[i64]) -> i64 {
    values.iter().fold(0, |g, &v| g.gcd(&v))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: i128, p: i128) -> u32 {
    assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Inverse of `a` modulo `m` (m > 1), if it exists.
pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let ext = a.rem_euclid(m).extended_gcd(&m);
    (ext.gcd == 1).then(|| ext.x.rem_euclid(m))
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let s: i128 = (0..3).map(|k| a[i][k] as i128 * b[k][j] as i128).sum();
            c[i][j] = i64::try_from(s).expect("matrix entry overflow");
        }
    }
    c
}

pub fn mat_vec(a: &Mat3, x: &Vec3) -> Vec3 {
    let mut y = [0i64; 3];
    for i in 0..3 {
        let s: i128 = (0..3).map(|k| a[i][k] as i128 * x[k] as i128).sum();
        y[i] = i64::try_from(s).expect("vector entry overflow");
    }
    y
}

pub fn det(m: &Mat3) -> i128 {
    let m = |i: usize, j: usize| m[i][j] as i128;
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

pub fn adjugate(m: &Mat3) -> Mat3 {
    let c = |i: usize, j: usize| {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let minor = m[rows[0]][cols[0]] as i128 * m[rows[1]][cols[1]] as i128
            - m[rows[0]][cols[1]] as i128 * m[rows[1]][cols[0]] as i128;
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut adj = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            adj[j][i] = i64::try_from(c(i, j)).expect("adjugate overflow");
        }
    }
    adj
}

/// `Bᵀ G B` for a basis matrix `B` whose columns are the new basis vectors.
pub fn congruence(g: &Mat3, b: &Mat3) -> Mat3 {
    mat_mul(&transpose(b), &mat_mul(g, b))
}

/// `xᵀ G y`.
pub fn bilinear(g: &Mat3, x: &Vec3, y: &Vec3) -> i128 {
    let mut s = 0i128;
    for i in 0..3 {
        for j in 0..3 {
            s += x[i] as i128 * g[i][j] as i128 * y[j] as i128;
        }
    }
    s
}

/// Basis (as matrix columns) of the full-rank lattice in Z³ spanned by `gens`.
///
/// Row-style Hermite reduction: the output is upper triangular with positive
/// diagonal when read as rows, returned transposed so basis vectors are columns.
pub fn lattice_basis(gens: &[Vec3]) -> Mat3 {
    let mut rows: Vec<[i128; 3]> = gens.iter().map(|g| g.map(|v| v as i128)).collect();
    let mut basis: Vec<[i128; 3]> = Vec::with_capacity(3);
    for col in 0..3 {
        // Euclid on column `col` across remaining rows.
        loop {
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let pivot = *nonzero.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            let pv = rows[pivot];
            for &i in &nonzero {
                if i != pivot {
                    let q = rows[i][col].div_euclid(pv[col]);
                    for k in 0..3 {
                        rows[i][k] -= q * pv[k];
                    }
                }
            }
        }
        let idx = (0..rows.len())
            .find(|&i| rows[i][col] != 0)
            .expect("generators do not span a full-rank lattice");
        let mut row = rows.swap_remove(idx);
        if row[col] < 0 {
            row = row.map(|v| -v);
        }
        basis.push(row);
    }
    // Reduce entries above the diagonal to keep numbers small.
    for col in 1..3 {
        for r in 0..col {
            let q = basis[r][col].div_euclid(basis[col][col]);
            let pivot = basis[col];
            for k in 0..3 {
                basis[r][k] -= q * pivot[k];
            }
        }
    }
    let mut out = [[0i64; 3]; 3];
    for (j, row) in basis.iter().enumerate() {
        for i in 0..3 {
            out[i][j] = i64::try_from(row[i]).expect("basis entry overflow");
        }
    }
    out
}

/// Odd primes in ascending order starting from 3, or all primes from 2.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start.max(2)..).filter(|&n| is_prime(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_matches_floor() {
        for n in 0..2000i128 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        let big = 999_999_999_999i128 * 999_999_999_999;
        assert_eq!(isqrt(big), 999_999_999_999);
        assert_eq!(isqrt(big - 1), 999_999_999_998);
    }

    #[test]
    fn factorization_roundtrip() {
        for n in 1..500u64 {
            let prod: u64 = factorize(n).iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
        }
        assert_eq!(factorize(4800), vec![(2, 6), (3, 1), (5, 2)]);
    }

    #[test]
    fn lattice_basis_index() {
        // 3Z³ plus (1,1,0) has index 9.
        let b = lattice_basis(&[[3, 0, 0], [0, 3, 0], [0, 0, 3], [1, 1, 0]]);
        assert_eq!(det(&b).abs(), 9);
        let b = lattice_basis(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(det(&b).abs(), 1);
    }

    #[test]
    fn adjugate_inverts() {
        let m = [[2, 1, 0], [1, 3, 1], [0, 1, 4]];
        let a = adjugate(&m);
        let p = mat_mul(&m, &a);
        let d = det(&m) as i64;
        assert_eq!(p, [[d, 0, 0], [0, d, 0], [0, 0, d]]);
    }
}
