use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use tsl_core::catalog;
use tsl_core::dataset::load_embedded;
use tsl_core::enumerate::RepCounter;
use tsl_core::forms::{is_isometric, TernaryForm};
use tsl_core::genus::{
    default_neighbor_primes, enumerate_genus, enumerate_genus_with, genus_average_rep, indistinguishable_by_squares, p_neighbors,
    SquareCheckMode, DEFAULT_CLASS_CAP,
};
use tsl_core::local::{hecke_weight, split_by_conductor};
use tsl_core::ssr::{check_ssr, min_square, reduce_to_terminal, verify_square_genus, DEFAULT_MS_CAP};

fn primitive_catalog() -> Vec<(String, TernaryForm)> {
    catalog::all().into_iter().filter(|(_, f)| f.is_primitive()).collect()
}

#[test]
fn neighbor_relation_is_symmetric() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut forms = primitive_catalog();
    forms.shuffle(&mut rng);
    for (name, f) in forms.into_iter().take(20) {
        let p = default_neighbor_primes(&f, 1)[0];
        let nbs = p_neighbors(&f, p).unwrap();
        let g = *nbs.choose(&mut rng).unwrap();
        assert_eq!(g.discriminant4(), f.discriminant4());
        let back = p_neighbors(&g, p).unwrap();
        assert!(back.iter().any(|h| is_isometric(h, &f).is_some()), "{name} p={p}");
    }
}

#[test]
fn mass_is_stable_with_a_third_prime() {
    for i in 1..=15 {
        let s = catalog::s(i);
        let g2 = enumerate_genus(&s).unwrap();
        let g3 = enumerate_genus_with(&s, &default_neighbor_primes(&s, 3), DEFAULT_CLASS_CAP).unwrap();
        assert_eq!(g2.mass, g3.mass, "S{i}");
        assert_eq!(g2.class_number(), 2, "S{i}");
        assert!(g2.class_of(&catalog::t(i)).is_some(), "S{i}");
        assert!(indistinguishable_by_squares(&g2, 40, SquareCheckMode::ConductorSupported).is_ok(), "S{i}");
    }
}

fn weight(d: tsl_core::Discriminant4, n: u64) -> (u64, Ratio<i128>) {
    let s = split_by_conductor(n, d);
    let w: u128 = s.exponents.iter().map(|(&p, &e)| hecke_weight(d, p, e).unwrap()).product();
    (s.n1, Ratio::from_integer(w as i128))
}

#[test]
fn genus_average_is_multiplicative() {
    let s1 = catalog::s(1);
    let g = enumerate_genus(&s1).unwrap();
    let d = s1.discriminant4();
    for n in 1..=40u64 {
        let (n1, w) = weight(d, n);
        assert_eq!(genus_average_rep(&g, n * n), genus_average_rep(&g, n1 * n1) * w, "n={n}");
    }
}

#[test]
fn k_and_l_genera() {
    for (t, f) in [(0, catalog::k1(0)), (1, catalog::k1(1))] {
        let g = enumerate_genus(&f).unwrap();
        let mut orders: Vec<u64> = g.classes.iter().map(|c| c.automorphisms).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![8, 16, 16], "t={t}");
        assert_eq!(g.mass, Ratio::new(1, 4));
        for k in [catalog::k2(t), catalog::k3(t)] {
            assert!(g.class_of(&k).is_some());
            assert!(!check_ssr(&k, 40).passed);
        }
        let r = RepCounter::new(&f);
        for n in 1..=20 {
            assert_eq!(genus_average_rep(&g, n * n), Ratio::from_integer(r.count(n * n) as i128));
        }
    }
    for t in [1, 4, 10] {
        let g = enumerate_genus(&catalog::big_l(t)).unwrap();
        assert_eq!(g.class_number(), 3);
        assert!(g.class_of(&catalog::big_n(t)).is_some() && g.class_of(&catalog::big_k(t)).is_some());
        assert_eq!(g.mass, Ratio::new(1, 8) + Ratio::new(1, 12) + Ratio::new(1, 24));
        let r = RepCounter::new(&catalog::big_l(t));
        for n in 1..=20 {
            assert_eq!(genus_average_rep(&g, n * n), Ratio::from_integer(r.count(n * n) as i128), "t={t} n={n}");
        }
    }
    let g = enumerate_genus(&catalog::big_m(6)).unwrap();
    assert_eq!(g.class_number(), 3);
    assert_eq!(g.mass, Ratio::new(1, 4) + Ratio::new(1, 12) + Ratio::new(1, 24));
    assert!(g.class_of(&catalog::big_n(6)).is_some() && g.class_of(&catalog::big_k(6)).is_some());
}

#[test]
fn ssr_agrees_with_genus_average_on_table_forms() {
    for e in load_embedded() {
        let f = e.form;
        let g = enumerate_genus(&f).unwrap();
        let r = RepCounter::new(&f);
        let matches = (1..=40u64).all(|n| genus_average_rep(&g, n * n) == Ratio::from_integer(r.count(n * n) as i128));
        assert_eq!(check_ssr(&f, 40).passed, matches, "{f}");
        assert!(matches, "{f}");
        assert!(verify_square_genus(&f, &g, 40).is_ok(), "{f}");
    }
}

#[test]
fn represented_squares_are_multiples_of_ms() {
    for (name, f) in primitive_catalog() {
        if !check_ssr(&f, 40).passed {
            continue;
        }
        let ms = min_square(&f, DEFAULT_MS_CAP).unwrap();
        let r = RepCounter::new(&f);
        for n in 1..=40 {
            if r.count(n * n) > 0 {
                assert_eq!(n % ms, 0, "{name} n={n}");
            }
        }
    }
}

#[test]
fn class_number_one_forms_pass_to_100() {
    let entries = load_embedded();
    for e in entries.iter().filter(|e| e.class_number == 1).step_by(9) {
        assert!(check_ssr(&e.form, 100).passed, "{}", e.form);
    }
}

#[test]
fn descent_bookkeeping() {
    for q in [5, 13, 29] {
        // ⟨2,q³,q³⟩ descends to ⟨2,q,q⟩ with m_s dropping from q² to q
        let f = TernaryForm::diagonal(2, q * q * q, q * q * q).unwrap();
        let t = reduce_to_terminal(&f, DEFAULT_MS_CAP * 10).unwrap();
        assert!(is_isometric(&t.terminal_form, &catalog::l_of(q)).is_some(), "q={q}");
        assert_eq!(t.m_s, vec![(q * q) as u64, q as u64]);
        for (i, s) in t.chain.steps.iter().enumerate() {
            assert_eq!(t.m_s[i], s.p * t.m_s[i + 1], "q={q}");
        }
    }
}
