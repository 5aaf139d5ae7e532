//! Genus enumeration by Kneser p-neighbours, masses and genus averages.
//!
//! Neighbours are built on the doubled Gram matrix `G`, which is an even
//! lattice with `Q(x) = xᵀGx/2 = f(x)`. For `p ∤ det G = 2D` an isotropic
//! vector `v` (lifted so that `f(v) ≡ 0 mod p²`) gives the neighbour
//! `L_v + ℤ·v/p` with `L_v = {x : xᵀGv ≡ 0 mod p}`; it is again even with the
//! same determinant, so half-integral forms need no separate rescaling.

use num_rational::Ratio;
use thiserror::Error;

use crate::arith::{self, is_prime, lattice_basis, mod_inverse, Vec3};
use crate::enumerate::RepCounter;
use crate::forms::{automorphism_order, is_isometric, minkowski_reduce, TernaryForm};

pub const DEFAULT_CLASS_CAP: usize = 64;
pub const DEFAULT_NEIGHBOR_PRIMES: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenusError {
    #[error("invalid neighbour prime {p}: must be a prime not dividing 2D = {two_d}")]
    InvalidPrime { p: u64, two_d: u64 },
    #[error("genus exceeds the class cap of {0}")]
    ClassCapExceeded(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusClass {
    pub form: TernaryForm,
    pub automorphisms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusData {
    pub base: TernaryForm,
    pub classes: Vec<GenusClass>,
    pub mass: Ratio<i64>,
    pub neighbor_primes: Vec<u64>,
}

impl GenusData {
    pub fn class_number(&self) -> usize {
        self.classes.len()
    }

    /// Index of the class containing `f`, if `f` lies in this genus.
    pub fn class_of(&self, f: &TernaryForm) -> Option<usize> {
        self.classes.iter().position(|c| is_isometric(&c.form, f).is_some())
    }
}

/// Representative of an isotropic vector mod `p` lifted to `f(v) ≡ 0 mod p²`.
fn lift_isotropic(f: &TernaryForm, v: Vec3, p: i64) -> Vec3 {
    let gv = arith::mat_vec(&f.gram(), &v);
    let fv = f.eval(&v);
    debug_assert_eq!(fv % p, 0);
    let j = (0..3).find(|&j| gv[j] % p != 0).expect("G v ≢ 0 mod p for p ∤ det G");
    // f(v + p t e_j) ≡ f(v) + p t (Gv)_j  (mod p²)
    let inv = mod_inverse(gv[j] as i128, p as i128).unwrap() as i64;
    let t = (-(fv / p) % p * inv).rem_euclid(p);
    let mut w = v;
    w[j] += p * t;
    w
}

/// All `p+1` neighbours of `f` at a prime `p ∤ 2D`, Minkowski reduced, in
/// the order of the isotropic lines (not deduplicated).
pub fn p_neighbors(f: &TernaryForm, p: u64) -> Result<Vec<TernaryForm>, GenusError> {
    let two_d = 2 * f.discriminant4().value();
    if !is_prime(p) || two_d % p == 0 {
        return Err(GenusError::InvalidPrime { p, two_d });
    }
    let p = p as i64;
    let g = f.gram();
    let mut out = Vec::new();
    for lead in 0..3usize {
        let free = 2 - lead;
        for t in 0..p.pow(free as u32) {
            let mut v = [0i64; 3];
            v[lead] = 1;
            let mut rest = t;
            for k in lead + 1..3 {
                v[k] = rest % p;
                rest /= p;
            }
            if f.eval(&v) % p != 0 {
                continue;
            }
            let v = lift_isotropic(f, v, p);
            let gv = arith::mat_vec(&g, &v);
            let j = (0..3).find(|&j| gv[j] % p != 0).unwrap();
            let inv = mod_inverse(gv[j] as i128, p as i128).unwrap() as i64;
            // p·(L_v + ℤ v/p) is spanned by p·(basis of L_v) and v.
            let mut gens: Vec<Vec3> = Vec::with_capacity(4);
            let mut pj = [0i64; 3];
            pj[j] = p * p;
            gens.push(pj);
            for k in (0..3).filter(|&k| k != j) {
                let mut w = [0i64; 3];
                w[k] = p;
                w[j] = -p * ((gv[k] * inv).rem_euclid(p));
                gens.push(w);
            }
            gens.push(v);
            let basis = lattice_basis(&gens);
            let scaled = arith::congruence(&g, &basis);
            assert!(scaled.iter().flatten().all(|x| x % (p * p) == 0));
            let gram = scaled.map(|r| r.map(|x| x / (p * p)));
            let nb = TernaryForm::from_gram(&gram).expect("neighbour is definite");
            out.push(minkowski_reduce(&nb).0);
        }
    }
    Ok(out)
}

/// The smallest `count` primes not dividing `2D`.
pub fn default_neighbor_primes(f: &TernaryForm, count: usize) -> Vec<u64> {
    let two_d = 2 * f.discriminant4().value();
    arith::primes_from(3).filter(|p| two_d % p != 0).take(count).collect()
}

/// Cheap isometry invariant used to bucket candidate classes.
fn fingerprint(f: &TernaryForm) -> (i64, i64, i64, Vec<u64>) {
    let counter = RepCounter::new(f);
    let r = counter.reduced();
    let theta = counter.theta(12, u64::MAX).unwrap().counts;
    (r.a(), r.b(), r.c(), theta)
}

pub fn enumerate_genus(f: &TernaryForm) -> Result<GenusData, GenusError> {
    enumerate_genus_with(f, &default_neighbor_primes(f, DEFAULT_NEIGHBOR_PRIMES), DEFAULT_CLASS_CAP)
}

/// Breadth-first closure of `f` under neighbours at the given primes,
/// deduplicated by isometry.
pub fn enumerate_genus_with(f: &TernaryForm, primes: &[u64], class_cap: usize) -> Result<GenusData, GenusError> {
    let base = minkowski_reduce(f).0;
    let mut classes: Vec<(TernaryForm, (i64, i64, i64, Vec<u64>))> = vec![(base, fingerprint(&base))];
    let mut frontier = 0;
    while frontier < classes.len() {
        let current = classes[frontier].0;
        frontier += 1;
        for &p in primes {
            for nb in p_neighbors(&current, p)? {
                let fp = fingerprint(&nb);
                let known = classes.iter().any(|(c, cfp)| *cfp == fp && is_isometric(c, &nb).is_some());
                if !known {
                    if classes.len() == class_cap {
                        return Err(GenusError::ClassCapExceeded(class_cap));
                    }
                    classes.push((nb, fp));
                }
            }
        }
    }
    let classes: Vec<GenusClass> = classes
        .into_iter()
        .map(|(form, _)| GenusClass { automorphisms: automorphism_order(&form), form })
        .collect();
    let mass = classes.iter().map(|c| Ratio::new(1, c.automorphisms as i64)).sum();
    Ok(GenusData { base: *f, classes, mass, neighbor_primes: primes.to_vec() })
}

/// `r(n, gen(f)) = (1/w) Σ r(n, g)/o(g)`.
pub fn genus_average_rep(g: &GenusData, n: u64) -> Ratio<i128> {
    let total: Ratio<i128> = g
        .classes
        .iter()
        .map(|c| Ratio::new(RepCounter::new(&c.form).count(n) as i128, c.automorphisms as i128))
        .sum();
    let mass = Ratio::new(*g.mass.numer() as i128, *g.mass.denom() as i128);
    total / mass
}

/// Which `n` the square check runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareCheckMode {
    /// Every `n ≤ B`.
    All,
    /// Only `n ≤ B` whose prime factors all divide `2D`; by the Hecke
    /// relations agreement there already implies agreement for all `n`.
    ConductorSupported,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareWitness {
    pub n: u64,
    pub class_i: usize,
    pub class_j: usize,
    pub r_i: u64,
    pub r_j: u64,
}

/// Whether all classes agree on `r(n², ·)` for the `n ≤ bound` selected by `mode`.
pub fn indistinguishable_by_squares(g: &GenusData, bound: u64, mode: SquareCheckMode) -> Result<(), SquareWitness> {
    let counters: Vec<RepCounter> = g.classes.iter().map(|c| RepCounter::new(&c.form)).collect();
    let two_d = 2 * g.base.discriminant4().value();
    for n in 1..=bound {
        if mode == SquareCheckMode::ConductorSupported && arith::prime_divisors(n).iter().any(|p| two_d % p != 0) {
            continue;
        }
        let r0 = counters[0].count(n * n);
        for (j, c) in counters.iter().enumerate().skip(1) {
            let rj = c.count(n * n);
            if rj != r0 {
                return Err(SquareWitness { n, class_i: 0, class_j: j, r_i: r0, r_j: rj });
            }
        }
    }
    Ok(())
}
