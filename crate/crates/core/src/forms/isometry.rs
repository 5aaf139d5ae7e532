//! Isometry testing and automorphism groups by backtracking over short vectors.

use super::{minkowski_reduce, TernaryForm, UnimodularMap};
use crate::arith::{self, Mat3, Vec3};
use crate::enumerate::RepCounter;

/// Candidate images, grouped by the target norm of each basis vector.
fn candidates(source: &TernaryForm, target_norms: [i64; 3]) -> [Vec<Vec3>; 3] {
    let max = *target_norms.iter().max().unwrap() as u64;
    let vecs = RepCounter::new(source)
        .short_vectors(max, u64::MAX)
        .expect("unlimited budget");
    target_norms.map(|n| vecs.iter().filter(|(_, v)| *v as i64 == n).map(|(x, _)| *x).collect())
}

/// Visits every `U` with `Uᵀ G_source U = G_target`; stops when `visit` returns false.
fn search(source: &TernaryForm, target: &TernaryForm, mut visit: impl FnMut(&Mat3) -> bool) {
    let gs = source.gram();
    let gt = target.gram();
    let [s0, s1, s2] = candidates(source, [target.a(), target.b(), target.c()]);
    for u0 in &s0 {
        for u1 in &s1 {
            if arith::bilinear(&gs, u0, u1) != gt[0][1] as i128 {
                continue;
            }
            for u2 in &s2 {
                if arith::bilinear(&gs, u0, u2) != gt[0][2] as i128 || arith::bilinear(&gs, u1, u2) != gt[1][2] as i128 {
                    continue;
                }
                let m = [[u0[0], u1[0], u2[0]], [u0[1], u1[1], u2[1]], [u0[2], u1[2], u2[2]]];
                if !visit(&m) {
                    return;
                }
            }
        }
    }
}

/// Returns `U` with `Uᵀ M_f U = M_g` when `f` and `g` are isometric.
pub fn is_isometric(f: &TernaryForm, g: &TernaryForm) -> Option<UnimodularMap> {
    if f.discriminant4() != g.discriminant4() || f.content() != g.content() {
        return None;
    }
    let (fr, rf) = minkowski_reduce(f);
    let (gr, rg) = minkowski_reduce(g);
    // Reduced diagonals are the successive minima.
    if (fr.a(), fr.b(), fr.c()) != (gr.a(), gr.b(), gr.c()) {
        return None;
    }
    let mut found = None;
    search(&fr, &gr, |m| {
        found = Some(*m);
        false
    });
    let w = UnimodularMap::new(found?).expect("gram-preserving map is unimodular");
    // G_g = (Rf·W·Rg⁻¹)ᵀ G_f (Rf·W·Rg⁻¹)
    let u = rf.compose(&w).compose(&rg.inverse());
    debug_assert!(u.witnesses(f, g));
    Some(u)
}

/// The isometry group `O(f)`, in the coordinates of `f`.
pub fn automorphisms(f: &TernaryForm) -> Vec<UnimodularMap> {
    let (fr, rf) = minkowski_reduce(f);
    let rf_inv = rf.inverse();
    let mut out = Vec::new();
    search(&fr, &fr, |m| {
        let w = UnimodularMap::new(*m).expect("gram-preserving map is unimodular");
        out.push(rf.compose(&w).compose(&rf_inv));
        true
    });
    out
}

/// `o(f) = |O(f)|`.
pub fn automorphism_order(f: &TernaryForm) -> u64 {
    let (fr, _) = minkowski_reduce(f);
    let mut n = 0;
    search(&fr, &fr, |_| {
        n += 1;
        true
    });
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str) -> TernaryForm {
        s.parse().unwrap()
    }

    #[test]
    fn cube_has_48_automorphisms() {
        let f = TernaryForm::diagonal(1, 1, 1).unwrap();
        assert_eq!(automorphism_order(&f), 48);
        let auts = automorphisms(&f);
        assert_eq!(auts.len(), 48);
        assert!(auts.iter().all(|u| u.witnesses(&f, &f)));
    }

    #[test]
    fn self_isometry() {
        let f = form("[1,2,4,2,1,0]");
        let u = is_isometric(&f, &f).unwrap();
        assert!(u.witnesses(&f, &f));
    }

    #[test]
    fn transformed_forms_are_isometric() {
        let f = form("[1,3,7,0,1,0]");
        let u = UnimodularMap::new([[1, -2, 3], [0, 1, 1], [0, 0, 1]]).unwrap();
        let g = f.transform(&u);
        let w = is_isometric(&f, &g).unwrap();
        assert!(w.witnesses(&f, &g));
        let back = is_isometric(&g, &f).unwrap();
        assert!(back.witnesses(&g, &f));
    }

    #[test]
    fn genus_mates_are_not_isometric() {
        assert!(is_isometric(&form("[1,2,4,2,1,0]"), &form("[1,2,4,1,1,1]")).is_none());
        assert!(is_isometric(&form("[1,1,32,0,0,0]"), &form("[2,2,9,2,2,0]")).is_none());
    }
}
