//! Named lattices from the classification and its verification identities.

use crate::forms::TernaryForm;

fn lat(c: [i64; 6]) -> TernaryForm {
    TernaryForm::lattice(c[0], c[1], c[2], c[3], c[4], c[5]).expect("catalog lattice is positive definite")
}

pub fn p1() -> TernaryForm {
    lat([2, 4, 4, 2, 2, 0])
}

pub fn p2() -> TernaryForm {
    lat([47, 47, 47, 0, 47, 47])
}

pub fn p3() -> TernaryForm {
    lat([1, 1, 10, 0, 0, 1])
}

pub fn q() -> TernaryForm {
    lat([4, 8, 16, 2, 4, 4])
}

/// `S_{14,j}` for `j ∈ {1,2,3}`.
pub fn s14(j: usize) -> TernaryForm {
    lat([[1, 2, 60, 0, 0, 1], [2, 4, 60, 0, 0, 2], [2, 4, 15, 0, 0, 2]][j - 1])
}

/// `T_{14,j}` for `j ∈ {1,2,3}`.
pub fn t14(j: usize) -> TernaryForm {
    lat([[1, 4, 28, 0, 0, 1], [4, 4, 28, 0, 0, 2], [4, 4, 7, 0, 0, 2]][j - 1])
}

const S_FORMS: [[i64; 6]; 15] = [
    [1, 2, 4, 2, 1, 0],
    [1, 2, 23, 0, 1, 0],
    [1, 3, 9, 2, 1, 1],
    [1, 3, 10, 0, 0, 1],
    [1, 5, 19, 5, 1, 0],
    [1, 5, 49, 5, 1, 0],
    [1, 2, 7, 0, 1, 0],
    [1, 2, 9, 2, 1, 0],
    [1, 2, 10, 1, 0, 1],
    [1, 5, 13, 5, 1, 1],
    [1, 5, 15, 3, 0, 1],
    [1, 6, 25, 0, 1, 0],
    [1, 7, 10, 0, 0, 1],
    [1, 2, 15, 0, 0, 1],
    [1, 7, 17, 7, 1, 0],
];

const T_FORMS: [[i64; 6]; 15] = [
    [1, 2, 4, 1, 1, 1],
    [1, 3, 17, 2, 1, 1],
    [1, 5, 5, 1, 1, 0],
    [1, 5, 6, 2, 0, 1],
    [1, 9, 10, 0, 0, 1],
    [1, 9, 29, 8, 1, 1],
    [1, 3, 5, 1, 0, 1],
    [1, 3, 6, 0, 0, 1],
    [1, 4, 5, 2, 1, 1],
    [1, 6, 11, 6, 1, 0],
    [1, 7, 11, 5, 1, 0],
    [1, 13, 13, 8, 1, 1],
    [1, 7, 11, 5, 1, 1],
    [1, 4, 7, 0, 0, 1],
    [1, 11, 11, 7, 1, 1],
];

/// `S_i`, `1 ≤ i ≤ 15`: the class-number-two forms of the half-scale table.
pub fn s(i: usize) -> TernaryForm {
    lat(S_FORMS[i - 1])
}

/// `T_i`, the other class in the genus of `S_i`.
pub fn t(i: usize) -> TernaryForm {
    lat(T_FORMS[i - 1])
}

/// `K_{1,t} = ⟨1⟩ ⊥ [[4,2],[2,8·3ᵗ+1]]`.
pub fn k1(t: u32) -> TernaryForm {
    lat([1, 4, 8 * 3i64.pow(t) + 1, 4, 0, 0])
}

/// `K_{2,t} = ⟨1,1,32·3ᵗ⟩`.
pub fn k2(t: u32) -> TernaryForm {
    lat([1, 1, 32 * 3i64.pow(t), 0, 0, 0])
}

/// `K_{3,t}`, Gram `[[2,0,1],[0,2,1],[1,1,8·3ᵗ+1]]`.
pub fn k3(t: u32) -> TernaryForm {
    lat([2, 2, 8 * 3i64.pow(t) + 1, 2, 2, 0])
}

/// `ℓ_t = [[1,½],[½,1]] ⊥ ⟨3t⟩`.
pub fn ell(t: i64) -> TernaryForm {
    lat([1, 1, 3 * t, 0, 0, 1])
}

/// `L_t = [[1,½],[½,7]] ⊥ ⟨3t⟩`.
pub fn big_l(t: i64) -> TernaryForm {
    lat([1, 7, 3 * t, 0, 0, 1])
}

pub fn big_m(t: i64) -> TernaryForm {
    lat([1, 7, 3 * t + 1, 5, 1, 1])
}

pub fn big_n(t: i64) -> TernaryForm {
    lat([3, 3, 3 * t + 1, 3, 0, 3])
}

/// `K_t = [[1,½],[½,1]] ⊥ ⟨27t⟩`.
pub fn big_k(t: i64) -> TernaryForm {
    lat([1, 1, 27 * t, 0, 0, 1])
}

/// `L(q) = ⟨2,q,q⟩`.
pub fn l_of(q: i64) -> TernaryForm {
    lat([2, q, q, 0, 0, 0])
}

/// Every named lattice with a display name.
pub fn all() -> Vec<(String, TernaryForm)> {
    let mut out = vec![
        ("P1".to_string(), p1()),
        ("P2".to_string(), p2()),
        ("P3".to_string(), p3()),
        ("Q".to_string(), q()),
    ];
    for j in 1..=3 {
        out.push((format!("S14,{j}"), s14(j)));
        out.push((format!("T14,{j}"), t14(j)));
    }
    for i in 1..=15 {
        out.push((format!("S{i}"), s(i)));
        out.push((format!("T{i}"), t(i)));
    }
    for t in 0..=3 {
        out.push((format!("K1,{t}"), k1(t)));
        out.push((format!("K2,{t}"), k2(t)));
        out.push((format!("K3,{t}"), k3(t)));
    }
    for t in (1..=6).chain([10]) {
        out.push((format!("l{t}"), ell(t)));
        out.push((format!("L{t}"), big_l(t)));
        out.push((format!("M{t}"), big_m(t)));
        out.push((format!("N{t}"), big_n(t)));
        out.push((format!("K{t}"), big_k(t)));
    }
    for q in [5, 13, 29] {
        out.push((format!("L({q})"), l_of(q)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{automorphism_order, is_isometric};

    #[test]
    fn discriminants() {
        // d(K_{i,t}) = 2⁵·3ᵗ, so D = 4d
        for t in 0..=3 {
            for k in [k1(t), k2(t), k3(t)] {
                assert_eq!(k.discriminant4().value(), 128 * 3u64.pow(t));
            }
        }
        // d(S₁₄) = 3·5·7/4, d(S₃) = 47/2, d(S₁₃) = 3³·5/2
        assert_eq!(s(14).discriminant4().value(), 105);
        assert_eq!(s(3).discriminant4().value(), 94);
        assert_eq!(s(13).discriminant4().value(), 270);
        for i in 1..=15 {
            assert_eq!(s(i).discriminant4(), t(i).discriminant4(), "S{i}");
            assert!(is_isometric(&s(i), &t(i)).is_none(), "S{i}");
        }
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(automorphism_order(&k1(0)), 8);
        assert_eq!(automorphism_order(&k2(0)), 16);
        assert_eq!(automorphism_order(&k3(0)), 16);
        for t in [1, 4, 10] {
            assert_eq!(automorphism_order(&big_l(t)), 8);
            assert_eq!(automorphism_order(&big_n(t)), 12);
            assert_eq!(automorphism_order(&big_k(t)), 24);
        }
        assert_eq!(automorphism_order(&big_m(6)), 4);
    }

    #[test]
    fn table_shapes_agree() {
        // L₁ is listed as [1,3,7,0,1,0]
        assert!(is_isometric(&big_l(1), &lat([1, 3, 7, 0, 1, 0])).is_some());
        assert!(is_isometric(&big_l(4), &lat([1, 7, 12, 0, 0, 1])).is_some());
        assert!(is_isometric(&big_l(10), &lat([1, 7, 30, 0, 0, 1])).is_some());
        assert!(is_isometric(&big_m(6), &lat([1, 7, 19, 5, 1, 1])).is_some());
    }
}
