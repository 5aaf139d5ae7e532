//! Watson transformations `Λ_p`, `λ_p`, `λ_N` and the pair `Γ_{p,1}, Γ_{p,2}`.

use num_rational::Ratio;
use thiserror::Error;

use crate::arith::{self, is_prime, lattice_basis, mod_inverse, Mat3, Vec3};
use crate::forms::{minkowski_reduce, TernaryForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WatsonError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("expected exactly two index-{p} sublattices with norm in {p}Z, found {count}")]
    HypothesisFailed { p: u64, count: usize },
}

/// A sublattice given by a basis (columns, in the coordinates of its parent).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    pub basis: Mat3,
    pub form: TernaryForm,
    pub index: u64,
}

impl Sublattice {
    fn new(parent: &TernaryForm, basis: Mat3) -> Self {
        Sublattice {
            form: parent.sublattice(&basis),
            index: arith::det(&basis).unsigned_abs() as u64,
            basis,
        }
    }
}

/// One application of `λ_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WatsonStep {
    pub p: u64,
    pub input: TernaryForm,
    /// `Λ_p(input)` before scaling.
    pub sublattice: Sublattice,
    /// The norm ideal of `Λ_p(input)` is `scale_divisor·ℤ`.
    pub scale_divisor: i64,
    /// `λ_p(input)`, Minkowski reduced.
    pub output: TernaryForm,
}

impl WatsonStep {
    pub fn scale_factor(&self) -> Ratio<i64> {
        Ratio::new(1, self.scale_divisor)
    }

    pub fn index(&self) -> u64 {
        self.sublattice.index
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WatsonChain {
    pub input: TernaryForm,
    pub steps: Vec<WatsonStep>,
    pub n: u64,
}

impl WatsonChain {
    pub fn output(&self) -> TernaryForm {
        self.steps.last().map_or(self.input, |s| s.output)
    }
}

/// Null space of `G` modulo an odd prime `p`, as integer vectors.
fn kernel_mod_p(g: &Mat3, p: i64) -> Vec<Vec3> {
    let mut m: Vec<Vec<i64>> = g.iter().map(|r| r.iter().map(|v| v.rem_euclid(p)).collect()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..3 {
        let Some(r) = (row..3).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, r);
        let inv = mod_inverse(m[row][col] as i128, p as i128).unwrap() as i64;
        for c in 0..3 {
            m[row][c] = m[row][c] * inv % p;
        }
        for r2 in 0..3 {
            if r2 != row && m[r2][col] != 0 {
                let factor = m[r2][col];
                for c in 0..3 {
                    m[r2][c] = (m[r2][c] - factor * m[row][c]).rem_euclid(p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..3)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = [0i64; 3];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (-m[r][free]).rem_euclid(p);
            }
            v
        })
        .collect()
}

/// `Λ_p(L) = {x ∈ L : Q(x+z) ≡ Q(z) mod p for all z ∈ L}`, unscaled.
///
/// The condition is `Q(x) ≡ 0` together with `xᵀGz ≡ 0` for all `z`. For odd
/// `p` the linear condition `Gx ≡ 0 (mod p)` already forces `Q(x) = xᵀGx/2 ≡ 0`.
/// For `p = 2` membership only depends on `x mod 2`, so the eight cosets of
/// `2L` are filtered directly.
pub fn big_lambda(f: &TernaryForm, p: u64) -> Result<Sublattice, WatsonError> {
    if !is_prime(p) {
        return Err(WatsonError::NotPrime(p));
    }
    let p = p as i64;
    let g = f.gram();
    let mut gens: Vec<Vec3> = vec![[p, 0, 0], [0, p, 0], [0, 0, p]];
    if p == 2 {
        for bits in 1..8i64 {
            let x = [bits & 1, (bits >> 1) & 1, (bits >> 2) & 1];
            let gx = arith::mat_vec(&g, &x);
            if gx.iter().all(|v| v % 2 == 0) && f.eval(&x) % 2 == 0 {
                gens.push(x);
            }
        }
    } else {
        gens.extend(kernel_mod_p(&g, p));
    }
    Ok(Sublattice::new(f, lattice_basis(&gens)))
}

/// `λ_p(L)`: `Λ_p(L)` rescaled to norm ideal ℤ.
pub fn watson_lambda(f: &TernaryForm, p: u64) -> Result<WatsonStep, WatsonError> {
    let sub = big_lambda(f, p)?;
    let g = sub.form.content();
    let (output, _) = minkowski_reduce(&sub.form.divide(g));
    Ok(WatsonStep { p, input: *f, sublattice: sub, scale_divisor: g, output })
}

/// `λ_N(L)`, applying `λ_p` once per prime factor of `N` (with multiplicity, ascending).
pub fn watson_chain(f: &TernaryForm, n: u64) -> Result<WatsonChain, WatsonError> {
    assert!(n >= 1);
    let primes: Vec<u64> = arith::factorize(n).into_iter().flat_map(|(p, e)| std::iter::repeat(p).take(e as usize)).collect();
    watson_sequence(f, &primes)
}

/// Applies `λ_p` for each prime of `primes` in the given order.
pub fn watson_sequence(f: &TernaryForm, primes: &[u64]) -> Result<WatsonChain, WatsonError> {
    let mut steps: Vec<WatsonStep> = Vec::with_capacity(primes.len());
    let mut current = *f;
    for &p in primes {
        let step = watson_lambda(&current, p)?;
        current = step.output;
        steps.push(step);
    }
    Ok(WatsonChain { input: *f, steps, n: primes.iter().product() })
}

/// The two index-`p` sublattices with norm in `pℤ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaPair {
    pub p: u64,
    pub gamma1: Sublattice,
    pub gamma2: Sublattice,
}

/// Every index-`p` sublattice of ℤ³: kernels of the `p² + p + 1` lines of `𝔽_p³`.
pub fn index_p_sublattices(p: u64) -> Vec<Mat3> {
    let p = p as i64;
    let mut out = Vec::with_capacity((p * p + p + 1) as usize);
    // Normalized functionals: first nonzero coordinate is 1.
    for lead in 0..3 {
        let free = 2 - lead;
        for t in 0..p.pow(free as u32) {
            let mut u = [0i64; 3];
            u[lead] = 1;
            let mut rest = t;
            for k in lead + 1..3 {
                u[k] = rest % p;
                rest /= p;
            }
            // kernel of x ↦ u·x: p·e_lead and e_k − u_k·e_lead
            let mut gens: Vec<Vec3> = Vec::with_capacity(3);
            let mut v = [0i64; 3];
            v[lead] = p;
            gens.push(v);
            for k in (0..3).filter(|&k| k != lead) {
                let mut w = [0i64; 3];
                w[k] = 1;
                w[lead] = -u[k];
                gens.push(w);
            }
            out.push(lattice_basis(&gens));
        }
    }
    out
}

/// `{Γ_{p,1}(L), Γ_{p,2}(L)}`, found by testing every index-`p` sublattice.
/// The pair is ordered by the coefficients of the reduced forms.
pub fn gamma_pair(f: &TernaryForm, p: u64) -> Result<GammaPair, WatsonError> {
    if !is_prime(p) {
        return Err(WatsonError::NotPrime(p));
    }
    let mut hits: Vec<Sublattice> = index_p_sublattices(p)
        .into_iter()
        .map(|b| Sublattice::new(f, b))
        .filter(|s| s.form.content() % p as i64 == 0)
        .collect();
    if hits.len() != 2 {
        return Err(WatsonError::HypothesisFailed { p, count: hits.len() });
    }
    hits.sort_by_key(|s| minkowski_reduce(&s.form).0);
    let gamma2 = hits.pop().unwrap();
    let gamma1 = hits.pop().unwrap();
    Ok(GammaPair { p, gamma1, gamma2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::is_isometric;

    fn form(s: &str) -> TernaryForm {
        s.parse().unwrap()
    }

    /// Brute-force membership in Λ_p over residues mod p.
    fn brute_lambda_index(f: &TernaryForm, p: i64) -> u64 {
        let mut members = 0;
        for x in 0..p {
            for y in 0..p {
                for z in 0..p {
                    let v = [x, y, z];
                    let ok = f.eval(&v) % p == 0
                        && (0..p).all(|a| (0..p).all(|b| (0..p).all(|c| (f.eval(&[x + a, y + b, z + c]) - f.eval(&[a, b, c])) % p == 0)));
                    if ok {
                        members += 1;
                    }
                }
            }
        }
        (p * p * p) as u64 / members
    }

    #[test]
    fn big_lambda_examples() {
        let f = TernaryForm::diagonal(2, 5, 5).unwrap();
        let s = big_lambda(&f, 5).unwrap();
        assert_eq!(s.index, 5);
        assert!(is_isometric(&s.form, &TernaryForm::lattice(50, 5, 5, 0, 0, 0).unwrap()).is_some());

        let f = TernaryForm::diagonal(1, 1, 1).unwrap();
        let s = big_lambda(&f, 3).unwrap();
        assert_eq!(s.index, 27);
        assert_eq!(s.form, TernaryForm::lattice(9, 9, 9, 0, 0, 0).unwrap());

        for (f, p) in [("[1,4,25,4,0,0]", 3), ("[1,2,4,2,1,0]", 2), ("[1,2,4,2,1,0]", 13), ("[1,1,1,1,1,1]", 2), ("[3,3,4,3,0,3]", 3)] {
            let f = form(f);
            assert_eq!(big_lambda(&f, p as u64).unwrap().index, brute_lambda_index(&f, p), "{f} at {p}");
        }
    }

    #[test]
    fn watson_lambda_examples() {
        let l5 = TernaryForm::diagonal(2, 5, 5).unwrap();
        let step = watson_lambda(&l5, 5).unwrap();
        assert!(is_isometric(&step.output, &TernaryForm::diagonal(1, 1, 10).unwrap()).is_some());
        assert_eq!(step.scale_factor(), Ratio::new(1, 5));

        let cube = TernaryForm::diagonal(1, 1, 1).unwrap();
        assert_eq!(watson_lambda(&cube, 3).unwrap().output, cube);

        // λ₃²(L₁) ≅ ℓ₁
        let chain = watson_chain(&form("[1,3,7,0,1,0]"), 9).unwrap();
        assert_eq!(chain.steps.len(), 2);
        assert!(is_isometric(&chain.output(), &form("[1,1,3,0,0,1]")).is_some());
    }

    #[test]
    fn chain_order_is_irrelevant() {
        assert_eq!(watson_chain(&form("[1,2,4,2,1,0]"), 1).unwrap().output(), form("[1,2,4,2,1,0]"));
        for f in ["[1,2,4,2,1,0]", "[1,3,7,0,1,0]", "[2,3,6,0,0,0]", "[1,4,9,4,0,0]"] {
            let f = form(f);
            let a = watson_sequence(&f, &[2, 3]).unwrap().output();
            let b = watson_sequence(&f, &[3, 2]).unwrap().output();
            assert!(is_isometric(&a, &b).is_some(), "{f}: {a} vs {b}");
        }
    }

    #[test]
    fn index_p_sublattice_count() {
        for p in [2u64, 3, 5] {
            let subs = index_p_sublattices(p);
            assert_eq!(subs.len() as u64, p * p + p + 1);
            assert!(subs.iter().all(|b| arith::det(b).unsigned_abs() as u64 == p));
        }
    }

    #[test]
    fn gamma_pair_examples() {
        let pair = gamma_pair(&form("[1,2,4,2,1,0]"), 2).unwrap();
        assert_eq!(pair.gamma1.index, 2);
        let d = form("[1,2,4,2,1,0]").discriminant4().value();
        assert_eq!(pair.gamma1.form.discriminant4().value(), 4 * d);
        assert_eq!(pair.gamma2.form.discriminant4().value(), 4 * d);
        assert!(matches!(
            gamma_pair(&TernaryForm::diagonal(1, 1, 1).unwrap(), 3),
            Err(WatsonError::HypothesisFailed { p: 3, .. })
        ));
    }
}
