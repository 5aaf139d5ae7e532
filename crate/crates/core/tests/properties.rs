use proptest::prelude::*;

use tsl_core::arith::{self, Mat3};
use tsl_core::enumerate::{box_counts, rep_count, RepCounter};
use tsl_core::forms::{automorphism_order, is_isometric, is_minkowski_reduced, minkowski_reduce, TernaryForm, UnimodularMap};
use tsl_core::local::{jacobi, jordan_odd, jordan_odd_with_precision, split_by_conductor};
use tsl_core::watson::{big_lambda, gamma_pair, watson_sequence};
use tsl_core::{catalog, Discriminant4};

fn any_form(max_disc: u64) -> impl Strategy<Value = TernaryForm> {
    (1i64..12, 1i64..12, 1i64..12, -8i64..9, -8i64..9, -8i64..9).prop_filter_map("definite, small D", move |(a, b, c, d, e, f)| {
        TernaryForm::new(a, b, c, d, e, f).ok().filter(|g| g.discriminant4().value() <= max_disc)
    })
}

/// Products of elementary matrices, so always unimodular.
fn any_unimodular() -> impl Strategy<Value = UnimodularMap> {
    prop::collection::vec((0usize..3, 0usize..3, -2i64..3, any::<bool>()), 0..6).prop_map(|ops| {
        let mut m: Mat3 = arith::IDENTITY;
        for (i, j, k, flip) in ops {
            let mut e = arith::IDENTITY;
            if i != j {
                e[i][j] = k;
            } else if flip {
                e[i][i] = -1;
            }
            m = arith::mat_mul(&m, &e);
        }
        UnimodularMap::new(m).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transforms_keep_discriminant_and_counts(f in any_form(400), u in any_unimodular()) {
        let g = f.transform(&u);
        prop_assert_eq!(g.discriminant4(), f.discriminant4());
        let (cf, cg) = (RepCounter::new(&f), RepCounter::new(&g));
        for n in 0..=30 {
            prop_assert_eq!(cf.count(n), cg.count(n));
        }
        let w = is_isometric(&f, &g).expect("transformed form is isometric");
        prop_assert!(w.witnesses(&f, &g));
    }

    #[test]
    fn reduction_is_idempotent(f in any_form(2000), u in any_unimodular()) {
        let (r, map) = minkowski_reduce(&f.transform(&u));
        prop_assert!(is_minkowski_reduced(&r));
        prop_assert!(map.witnesses(&f.transform(&u), &r));
        prop_assert_eq!(minkowski_reduce(&r).0, r);
    }

    #[test]
    fn automorphism_order_is_even_and_invariant(f in any_form(300), u in any_unimodular()) {
        let o = automorphism_order(&f);
        prop_assert!(o >= 2 && o % 2 == 0);
        prop_assert_eq!(automorphism_order(&f.transform(&u)), o);
    }

    #[test]
    fn pruned_counts_match_box(f in any_form(500)) {
        let theta = RepCounter::new(&f).theta(40, u64::MAX).unwrap().counts;
        prop_assert_eq!(&theta, &box_counts(&f, 40));
        for (n, &r) in theta.iter().enumerate().skip(1) {
            prop_assert_eq!(r % 2, 0);
            prop_assert_eq!(rep_count(&f, n as u64), r);
        }
    }

    #[test]
    fn sublattice_counts_are_smaller(f in any_form(300), diag in (1i64..4, 1i64..4, 1i64..3), upper in (-3i64..4, -3i64..4, -3i64..4)) {
        let basis: Mat3 = [[diag.0, upper.0, upper.1], [0, diag.1, upper.2], [0, 0, diag.2]];
        let sub = f.sublattice(&basis);
        let (cl, cm) = (RepCounter::new(&f), RepCounter::new(&sub));
        for n in 1..=25 {
            prop_assert!(cm.count(n) <= cl.count(n));
            let parent: Vec<_> = cl.solutions(n);
            for x in cm.solutions(n) {
                prop_assert!(parent.binary_search(&arith::mat_vec(&basis, &x)).is_ok());
            }
        }
    }

    #[test]
    fn split_recombines(n in 1u64..1000, d in 1u64..5000) {
        let s = split_by_conductor(n, Discriminant4(d));
        prop_assert_eq!(s.n1 * s.n2, n);
        prop_assert_eq!(arith::gcd(s.n2 as i64, 2 * d as i64), 1);
        for &p in s.exponents.keys() {
            prop_assert_eq!((2 * d) % p == 0, false);
        }
    }

    #[test]
    fn jordan_is_stable_under_precision(f in any_form(3000), p in prop::sample::select(vec![3u64, 5, 7, 11, 13])) {
        let base = jordan_odd(&f, p);
        let k = arith::valuation(f.discriminant4().value() as i128, p as i128) + 5;
        prop_assert_eq!(jordan_odd_with_precision(&f, p, k), base);
    }

    #[test]
    fn lambda_discriminant_bookkeeping(f in any_form(3000), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let sub = big_lambda(&f, p).unwrap();
        let idx = sub.index as u128;
        prop_assert_eq!(sub.form.discriminant4().value() as u128, idx * idx * f.discriminant4().value() as u128);
    }
}

#[test]
fn jordan_determinant_consistency() {
    for (name, f) in catalog::all() {
        let d = f.discriminant4().value();
        for p in [3u64, 5, 7, 11, 13, 47] {
            let j = jordan_odd(&f, p);
            let total: u32 = j.components.iter().map(|c| c.valuation * c.dimension).sum();
            let v = arith::valuation(d as i128, p as i128);
            assert_eq!(total, v, "{name} p={p}");
            let unit = (d / p.pow(v)) % p;
            let class: i8 = j.components.iter().map(|c| c.unit_class).product();
            assert_eq!(class, jacobi(unit as i64, p), "{name} p={p}");
        }
    }
}

#[test]
fn isometry_is_an_equivalence_on_catalog_orbits() {
    let moves = [
        UnimodularMap::new([[1, 1, 0], [0, 1, 0], [0, 0, 1]]).unwrap(),
        UnimodularMap::new([[0, 1, 0], [1, 0, 0], [0, -1, 1]]).unwrap(),
        UnimodularMap::new([[1, 0, 2], [0, -1, 1], [0, 0, 1]]).unwrap(),
    ];
    for (name, f) in catalog::all().into_iter().step_by(3) {
        let g = f.transform(&moves[0]);
        let h = g.transform(&moves[1]).transform(&moves[2]);
        let fg = is_isometric(&f, &g).unwrap();
        let gh = is_isometric(&g, &h).unwrap();
        assert!(is_isometric(&f, &f).unwrap().witnesses(&f, &f), "{name}");
        assert!(fg.inverse().witnesses(&g, &f), "{name}");
        assert!(fg.compose(&gh).witnesses(&f, &h), "{name}");
    }
}

#[test]
fn isometry_invariance_of_counts() {
    let l1 = catalog::big_l(1);
    let table_l1: TernaryForm = "[1,3,7,0,1,0]".parse().unwrap();
    assert!(is_isometric(&l1, &table_l1).is_some());
    let (a, b) = (RepCounter::new(&l1), RepCounter::new(&table_l1));
    for n in 0..=50 {
        assert_eq!(a.count(n), b.count(n));
    }
}

#[test]
fn gamma_discriminants() {
    for (name, f) in catalog::all() {
        for p in [2u64, 3, 5, 7] {
            if let Ok(pair) = gamma_pair(&f, p) {
                for g in [&pair.gamma1, &pair.gamma2] {
                    assert_eq!(g.index, p);
                    assert_eq!(g.form.discriminant4().value(), p * p * f.discriminant4().value(), "{name}");
                    assert_eq!(g.form.content() % p as i64, 0, "{name}");
                }
            }
        }
    }
}

#[test]
fn lambda_commutes_across_primes() {
    for f in [catalog::s(13), catalog::big_l(4), catalog::l_of(13), catalog::s(14)] {
        let pq = watson_sequence(&f, &[3, 5]).unwrap().output();
        let qp = watson_sequence(&f, &[5, 3]).unwrap().output();
        assert!(is_isometric(&pq, &qp).is_some(), "{f}");
    }
}
