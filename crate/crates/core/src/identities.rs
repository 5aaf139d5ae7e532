//! Representation-number identities behind the class-number-two and -three
//! cases, checked exactly on a finite range.

use serde::Serialize;

use crate::catalog::{self, big_k, big_l, big_m, big_n, ell, k1, k2, k3, l_of, p1, p2, p3, q, s, s14, t, t14};
use crate::enumerate::RepCounter;
use crate::forms::TernaryForm;
use crate::local::unimodular_part_anisotropic;
use crate::watson::{big_lambda, gamma_pair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub n: u64,
    pub lhs: i128,
    pub rhs: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub suite: &'static str,
    pub name: String,
    pub checked: usize,
    pub failure: Option<IdentityFailure>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// `n ↦ r(n, f)`.
fn r(f: &TernaryForm) -> impl Fn(u64) -> i128 {
    let c = RepCounter::new(f);
    move |n| c.count(n) as i128
}

fn check(
    suite: &'static str,
    name: impl Into<String>,
    ns: impl IntoIterator<Item = u64>,
    lhs: impl Fn(u64) -> i128,
    rhs: impl Fn(u64) -> i128,
) -> IdentityCheck {
    let mut checked = 0;
    let mut failure = None;
    for n in ns {
        checked += 1;
        let (l, r) = (lhs(n), rhs(n));
        if l != r {
            failure = Some(IdentityFailure { n, lhs: l, rhs: r });
            break;
        }
    }
    IdentityCheck { suite, name: name.into(), checked, failure }
}

/// `r(q²n², ⟨2,q,q⟩) = r(qn², λ_q) = 2r(n², ⟨1,1,2⟩) − r(n², ⟨2,q,q⟩)`.
pub fn l_of_q(n_max: u64) -> Vec<IdentityCheck> {
    let base = r(&TernaryForm::diagonal(1, 1, 2).unwrap());
    let mut out = Vec::new();
    for qq in [5i64, 13, 29] {
        let lq = r(&l_of(qq));
        let lam = r(&TernaryForm::diagonal(1, 1, 2 * qq).unwrap());
        let qu = qq as u64;
        out.push(check("L(q)", format!("q={qq}"), 1..=n_max, |n| lq(qu * qu * n * n), |n| 2 * base(n * n) - lq(n * n)));
        out.push(check("L(q)", format!("q={qq} via lambda"), 1..=n_max, |n| lq(qu * qu * n * n), |n| lam(qu * n * n)));
    }
    out
}

/// Odd primes `p | D` of `f`.
fn odd_conductor_primes(f: &TernaryForm) -> Vec<u64> {
    f.discriminant4().conductor_primes().into_iter().filter(|&p| p != 2).collect()
}

/// `r(pn, L) = r(pn, Λ_p(L))` whenever the unimodular Jordan component at an
/// odd `p` is anisotropic; checked on every catalog lattice and such `p`.
pub fn anisotropic_descent(n_max: u64) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for (name, f) in catalog::all() {
        for p in odd_conductor_primes(&f) {
            if !unimodular_part_anisotropic(&f, p) {
                continue;
            }
            let lam = big_lambda(&f, p).unwrap();
            let (rf, rl) = (r(&f), r(&lam.form));
            out.push(check("descent", format!("{name} p={p}"), 1..=n_max, |n| rf(p * n), |n| rl(p * n)));
        }
    }
    out
}

/// `r(pn, L) = r(pn, Γ_{p,1}) + r(pn, Γ_{p,2}) − r(pn, Λ_p)` on every catalog
/// lattice and prime `p | 2D` with exactly two index-`p` sublattices of norm `pℤ`.
pub fn gamma_identity(n_max: u64) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for (name, f) in catalog::all() {
        let mut primes = odd_conductor_primes(&f);
        primes.insert(0, 2);
        for p in primes {
            let Ok(pair) = gamma_pair(&f, p) else { continue };
            let lam = big_lambda(&f, p).unwrap();
            let (rf, g1, g2, rl) = (r(&f), r(&pair.gamma1.form), r(&pair.gamma2.form), r(&lam.form));
            out.push(check("gamma", format!("{name} p={p}"), 1..=n_max, |n| rf(p * n), |n| {
                g1(p * n) + g2(p * n) - rl(p * n)
            }));
        }
    }
    out
}

/// The square identities for the representative class-number-two genera
/// `i ∈ {1,3,13,14,15}`.
pub fn class_number_two(n_max: u64) -> Vec<IdentityCheck> {
    const SUITE: &str = "class number two";
    let sq = |n: u64| n * n;
    let mut out = Vec::new();

    let rp1 = r(&p1());
    for (label, f) in [("S1", s(1)), ("T1", t(1))] {
        let rf = r(&f);
        out.push(check(SUITE, format!("{label}: r(13²n²) = r(n²)"), 1..=n_max, |n| rf(169 * sq(n)), |n| rf(sq(n))));
        out.push(check(SUITE, format!("{label}: r(4n²) = 2r(4n², P1) − r(n²)"), 1..=n_max, |n| rf(4 * sq(n)), |n| {
            2 * rp1(4 * sq(n)) - rf(sq(n))
        }));
    }

    let rp2 = r(&p2());
    for (label, f) in [("S3", s(3)), ("T3", t(3))] {
        let rf = r(&f);
        out.push(check(SUITE, format!("{label}: r(47²n²) = 2r(47²n², P2) − r(n²)"), 1..=n_max, |n| rf(2209 * sq(n)), |n| {
            2 * rp2(2209 * sq(n)) - rf(sq(n))
        }));
        out.push(check(SUITE, format!("{label}: r(4n²) = r(n²)"), 1..=n_max, |n| rf(4 * sq(n)), |n| rf(sq(n))));
    }

    let rp3 = r(&p3());
    for (label, f) in [("S13", s(13)), ("T13", t(13))] {
        let rf = r(&f);
        out.push(check(SUITE, format!("{label}: r(9n²) = r(n², P3)"), 1..=n_max, |n| rf(9 * sq(n)), |n| rp3(sq(n))));
        out.push(check(SUITE, format!("{label}: r(25n²) = r(n²)"), 1..=n_max, |n| rf(25 * sq(n)), |n| rf(sq(n))));
        out.push(check(SUITE, format!("{label}: r(4n²) = r(n²)"), 1..=n_max, |n| rf(4 * sq(n)), |n| rf(sq(n))));
    }

    let rq = r(&q());
    for (label, f, f1, f2, f3) in [("S14", s(14), s14(1), s14(2), s14(3)), ("T14", t(14), t14(1), t14(2), t14(3))] {
        let (rf, r1, r2, r3) = (r(&f), r(&f1), r(&f2), r(&f3));
        for p in [3u64, 5, 7] {
            out.push(check(SUITE, format!("{label}: r({p}²n²) = r(n²)"), 1..=n_max, |n| rf(p * p * sq(n)), |n| rf(sq(n))));
        }
        out.push(check(SUITE, format!("{label}: r(4n²) = r(4n², Q) + r(4n², {label},1) − r(n²)"), 1..=n_max, |n| rf(4 * sq(n)), |n| {
            rq(4 * sq(n)) + r1(4 * sq(n)) - rf(sq(n))
        }));
        out.push(check(SUITE, format!("{label},1: r(4n²) = 2r(4n², {label},2) − r(n², {label})"), 1..=n_max, |n| r1(4 * sq(n)), |n| {
            2 * r2(4 * sq(n)) - rf(sq(n))
        }));
        out.push(check(SUITE, format!("{label},3: r(4n²) = r(4n², {label},2)"), 1..=n_max, |n| r3(4 * sq(n)), |n| r2(4 * sq(n))));
        out.push(check(SUITE, format!("{label},2: r(4n²) = 2r(n², {label}) − r(n², {label},3)"), 1..=n_max, |n| r2(4 * sq(n)), |n| {
            2 * rf(sq(n)) - r3(sq(n))
        }));
        out.push(check(SUITE, format!("{label}: r(4n²) = r(4n², Q) + 2r(n²) − 2r(n², {label},3)"), 1..=n_max, |n| rf(4 * sq(n)), |n| {
            rq(4 * sq(n)) + 2 * rf(sq(n)) - 2 * r3(sq(n))
        }));
    }
    let (rs, rt) = (r(&s(14)), r(&t(14)));
    out.push(check(SUITE, "S14: r(1) = 2", [1], |n| rs(n), |_| 2));
    out.push(check(SUITE, "T14: r(1) = 2", [1], |n| rt(n), |_| 2));
    let (rs3, rt3) = (r(&s14(3)), r(&t14(3)));
    out.push(check(SUITE, "S14,3 and T14,3 agree on squares", 1..=n_max, |n| rs3(sq(n)), |n| rt3(sq(n))));

    let rs14 = r(&s(14));
    let rt14 = r(&t(14));
    for (label, f, partner) in [("S15", s(15), &rs14), ("T15", t(15), &rt14)] {
        let rf = r(&f);
        for p in [3u64, 5, 7] {
            out.push(check(SUITE, format!("{label}: r({p}²n²) = r(n²)"), 1..=n_max, |n| rf(p * p * sq(n)), |n| rf(sq(n))));
        }
        let other = if label == "S15" { "S14" } else { "T14" };
        out.push(check(SUITE, format!("{label}: r(4n²) = r(n², {other})"), 1..=n_max, |n| rf(4 * sq(n)), |n| partner(sq(n))));
    }
    out
}

/// `2r(n², K_{1,t}) = r(n², K_{2,t}) + r(n², K_{3,t})` and
/// `r(4n², K_{i,t}) = r(n², ⟨1,1,8·3ᵗ⟩)`.
pub fn k_family(t_max: u32, n_max: u64) -> Vec<IdentityCheck> {
    const SUITE: &str = "K family";
    let mut out = Vec::new();
    for tt in 0..=t_max {
        let (r1, r2, r3) = (r(&k1(tt)), r(&k2(tt)), r(&k3(tt)));
        out.push(check(SUITE, format!("t={tt}: 2r(n², K1) = r(n², K2) + r(n², K3)"), 1..=n_max, |n| 2 * r1(n * n), |n| {
            r2(n * n) + r3(n * n)
        }));
        let small = r(&TernaryForm::diagonal(1, 1, 8 * 3i64.pow(tt)).unwrap());
        for (i, ri) in [(1, &r1), (2, &r2), (3, &r3)] {
            out.push(check(SUITE, format!("t={tt}: r(4n², K{i}) = r(n², <1,1,8·3^t>)"), 1..=n_max, |n| ri(4 * n * n), |n| {
                small(n * n)
            }));
        }
    }
    out
}

/// `r(3n+1, ℓ_t) = 3r(3n+1, L_t) = 3r(3n+1, M_t) = 2r(3n+1, N_t) + r(3n+1, K_t)`.
pub fn ell_family(t_max: i64, value_max: u64) -> Vec<IdentityCheck> {
    const SUITE: &str = "l family";
    let mut out = Vec::new();
    let values = || (0..).map(|n| 3 * n + 1).take_while(move |&v| v <= value_max);
    for tt in 1..=t_max {
        let (rl, rbl, rm, rn, rk) = (r(&ell(tt)), r(&big_l(tt)), r(&big_m(tt)), r(&big_n(tt)), r(&big_k(tt)));
        out.push(check(SUITE, format!("t={tt}: r(l) = 3r(L)"), values(), |v| rl(v), |v| 3 * rbl(v)));
        out.push(check(SUITE, format!("t={tt}: r(l) = 3r(M)"), values(), |v| rl(v), |v| 3 * rm(v)));
        out.push(check(SUITE, format!("t={tt}: r(l) = 2r(N) + r(K)"), values(), |v| rl(v), |v| 2 * rn(v) + rk(v)));
    }
    out
}

/// `r(9n, L_t) = r(9n, N_t) = r(9n, K_t) = r(n, ℓ_t)` for `t ∈ {1,4,10}`, and
/// the same with `M_6` in place of `L_6`.
pub fn nine_n_family(n_max: u64) -> Vec<IdentityCheck> {
    const SUITE: &str = "9n family";
    let mut out = Vec::new();
    for (tt, first, label) in [(1, big_l(1), "L1"), (4, big_l(4), "L4"), (10, big_l(10), "L10"), (6, big_m(6), "M6")] {
        let (rf, rn, rk, rl) = (r(&first), r(&big_n(tt)), r(&big_k(tt)), r(&ell(tt)));
        out.push(check(SUITE, format!("r(9n, {label}) = r(n, l{tt})"), 1..=n_max, |n| rf(9 * n), |n| rl(n)));
        out.push(check(SUITE, format!("r(9n, N{tt}) = r(n, l{tt})"), 1..=n_max, |n| rn(9 * n), |n| rl(n)));
        out.push(check(SUITE, format!("r(9n, K{tt}) = r(n, l{tt})"), 1..=n_max, |n| rk(9 * n), |n| rl(n)));
    }
    out
}

/// Every suite at the bounds used by the acceptance run.
pub fn all_suites() -> Vec<IdentityCheck> {
    let mut out = l_of_q(20);
    out.extend(anisotropic_descent(30));
    out.extend(gamma_identity(30));
    out.extend(class_number_two(20));
    out.extend(k_family(3, 30));
    out.extend(ell_family(6, 100));
    out.extend(nine_n_family(30));
    out
}
