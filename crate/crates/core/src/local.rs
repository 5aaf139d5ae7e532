//! Local data at odd primes: Jacobi symbols, the Hecke weight `h_p`,
//! the conductor split `n = n₁n₂`, and odd-p Jordan decompositions.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::{is_prime, mod_inverse, valuation};
use crate::forms::{Discriminant4, TernaryForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("invalid prime {p}: must be an odd prime not dividing 2D = {two_d}")]
    InvalidPrime { p: u64, two_d: u64 },
}

/// Jacobi symbol `(a/m)` for odd positive `m`.
pub fn jacobi(a: i64, m: u64) -> i8 {
    assert!(m % 2 == 1, "jacobi symbol needs an odd modulus, got {m}");
    let mut a = (a as i128).rem_euclid(m as i128) as u64;
    let mut m = m;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            sign = -sign;
        }
        a %= m;
    }
    if m == 1 {
        sign
    } else {
        0
    }
}

/// `χ_p = (−df/p) = (−D/p)`.
pub fn local_character(d: Discriminant4, p: u64) -> i8 {
    jacobi(-(d.value() as i64), p)
}

/// `h_p(df, λ) = (p^{λ+1} − 1)/(p − 1) − χ·(p^λ − 1)/(p − 1)`.
pub fn hecke_weight(d: Discriminant4, p: u64, lambda: u32) -> Result<u128, LocalError> {
    if p == 2 || !is_prime(p) || d.value() % p == 0 {
        return Err(LocalError::InvalidPrime { p, two_d: 2 * d.value() });
    }
    let chi = local_character(d, p) as i128;
    let p = p as i128;
    let geometric = |k: u32| (p.pow(k) - 1) / (p - 1);
    let h = geometric(lambda + 1) - chi * geometric(lambda);
    Ok(u128::try_from(h).expect("hecke weight is positive"))
}

/// `n = n₁·n₂` with `n₁` supported on primes of `2D` and `n₂` coprime to `2D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareFactorization {
    pub n: u64,
    pub n1: u64,
    pub n2: u64,
    /// `λ_p = ord_p(n)` for each prime `p | n₂`.
    pub exponents: BTreeMap<u64, u32>,
}

pub fn split_by_conductor(n: u64, d: Discriminant4) -> SquareFactorization {
    assert!(n >= 1);
    let two_d = 2 * d.value();
    let mut exponents = BTreeMap::new();
    let mut n1 = 1;
    let mut n2 = 1;
    for (p, e) in crate::arith::factorize(n) {
        if two_d % p == 0 {
            n1 *= p.pow(e);
        } else {
            n2 *= p.pow(e);
            exponents.insert(p, e);
        }
    }
    SquareFactorization { n, n1, n2, exponents }
}

/// One diagonal entry `p^valuation · u` of a Jordan splitting, with the
/// square class of the unit `u` (+1 square, −1 non-square).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JordanComponent {
    pub valuation: u32,
    pub unit_class: i8,
    pub dimension: u32,
}

/// Diagonalized form of `L ⊗ ℤ_p` for odd `p`.
///
/// Components are one-dimensional and sorted by valuation; within each
/// valuation block all unit classes are +1 except the last, which carries the
/// determinant class of the block. This makes the list an isometry invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanOdd {
    pub p: u64,
    pub components: Vec<JordanComponent>,
}

impl JordanOdd {
    /// Jordan blocks `(valuation, determinant class, dimension)`.
    pub fn blocks(&self) -> Vec<JordanComponent> {
        let mut out: Vec<JordanComponent> = Vec::new();
        for c in &self.components {
            match out.last_mut() {
                Some(last) if last.valuation == c.valuation => {
                    last.unit_class *= c.unit_class;
                    last.dimension += c.dimension;
                }
                _ => out.push(*c),
            }
        }
        out
    }

    pub fn block(&self, valuation: u32) -> Option<JordanComponent> {
        self.blocks().into_iter().find(|b| b.valuation == valuation)
    }

    pub fn valuations(&self) -> Vec<u32> {
        self.components.iter().map(|c| c.valuation).collect()
    }
}

fn legendre_class(u: i128, p: u64) -> i8 {
    let s = jacobi((u.rem_euclid(p as i128)) as i64, p);
    assert!(s != 0, "unit expected");
    s
}

/// Jordan splitting of `f` at the odd prime `p`, with the default precision
/// `p^(ord_p(D)+3)`.
pub fn jordan_odd(f: &TernaryForm, p: u64) -> JordanOdd {
    let k = valuation(f.discriminant4().value() as i128, p as i128) + 3;
    jordan_odd_with_precision(f, p, k)
}

/// Jordan splitting computed modulo `p^k`; needs `k > ord_p(D)`.
///
/// Pivots on an entry of minimal valuation of the doubled Gram matrix. When
/// only an off-diagonal entry attains it, `e_i ← e_i + e_j` moves it to the
/// diagonal. Quotients `G_ki / G_ii` are formed as `(G_ki / p^v)·u⁻¹`, which
/// is exact modulo `p^(k−v)` and so keeps every update exact modulo `p^k`.
pub fn jordan_odd_with_precision(f: &TernaryForm, p: u64, k: u32) -> JordanOdd {
    assert!(p % 2 == 1 && is_prime(p), "odd prime required");
    let pk = p as i128;
    assert!(k > valuation(f.discriminant4().value() as i128, pk), "insufficient p-adic precision");
    let modulus = pk.checked_pow(k).expect("p-adic precision too large");
    let val = |x: i128| if x == 0 { k } else { valuation(x, pk).min(k) };

    let mut g: Vec<Vec<i128>> = f.gram().iter().map(|r| r.iter().map(|&v| (v as i128).rem_euclid(modulus)).collect()).collect();
    let mut active: Vec<usize> = vec![0, 1, 2];
    let mut diag: Vec<(u32, i128)> = Vec::new();

    while !active.is_empty() {
        let mut best: Option<(u32, usize, usize)> = None;
        for &i in &active {
            for &j in &active {
                let v = val(g[i][j]);
                let better = match best {
                    None => true,
                    Some((bv, bi, bj)) => v < bv || (v == bv && i == j && bi != bj),
                };
                if better {
                    best = Some((v, i, j));
                }
            }
        }
        let (v, i, j) = best.unwrap();
        assert!(v < k, "precision exhausted in Jordan splitting");
        if i != j {
            for c in 0..3 {
                g[i][c] = (g[i][c] + g[j][c]).rem_euclid(modulus);
            }
            for r in 0..3 {
                g[r][i] = (g[r][i] + g[r][j]).rem_euclid(modulus);
            }
        }
        let pv = pk.pow(v);
        let pivot = g[i][i];
        let unit = pivot / pv;
        let unit_inv = mod_inverse(unit, pk.pow(k - v)).expect("pivot unit invertible");
        let rest: Vec<usize> = active.iter().copied().filter(|&r| r != i).collect();
        let quotients: Vec<i128> = rest
            .iter()
            .map(|&r| ((g[r][i] / pv) % pk.pow(k - v) * unit_inv).rem_euclid(pk.pow(k - v)))
            .collect();
        for (qi, &r) in quotients.iter().zip(&rest) {
            for &c in &rest {
                g[r][c] = (g[r][c] - qi * g[i][c]).rem_euclid(modulus);
            }
        }
        for &r in &rest {
            g[r][i] = 0;
            g[i][r] = 0;
        }
        diag.push((v, unit));
        active.retain(|&r| r != i);
    }

    // Entries of M = G/2: the class of 1/2 equals the class of 2.
    let two = jacobi(2, p);
    let mut raw: Vec<(u32, i8)> = diag.iter().map(|&(v, u)| (v, legendre_class(u, p) * two)).collect();
    raw.sort_by_key(|&(v, _)| v);

    let mut components = Vec::with_capacity(3);
    let mut idx = 0;
    while idx < raw.len() {
        let v = raw[idx].0;
        let block: Vec<i8> = raw[idx..].iter().take_while(|c| c.0 == v).map(|c| c.1).collect();
        let det_class: i8 = block.iter().product();
        for t in 0..block.len() {
            let class = if t + 1 == block.len() { det_class } else { 1 };
            components.push(JordanComponent { valuation: v, unit_class: class, dimension: 1 });
        }
        idx += block.len();
    }
    JordanOdd { p, components }
}

/// Whether the unimodular Jordan component of `L_p` is anisotropic.
pub fn unimodular_part_anisotropic(f: &TernaryForm, p: u64) -> bool {
    match jordan_odd(f, p).block(0) {
        None => true,
        Some(b) => match b.dimension {
            1 => true,
            2 => jacobi(-1, p) * b.unit_class == -1,
            _ => false,
        },
    }
}

/// `L_p ≅ ⟨Δ_p, p, −p⟩` with `Δ_p` a non-square unit.
pub fn terminal_condition_at(f: &TernaryForm, p: u64) -> bool {
    let j = jordan_odd(f, p);
    if j.valuations() != [0, 1, 1] {
        return false;
    }
    let blocks = j.blocks();
    // ⟨pε₁, pε₂⟩ ≅ ⟨p, −p⟩ iff ε₁ε₂ lies in the class of −1
    blocks[0].unit_class == -1 && blocks[1].unit_class == jacobi(-1, p)
}
