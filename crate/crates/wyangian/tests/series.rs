mod common;

use common::gl;
use wyangian::format::{matrix_json, melement_json};
use wyangian::pyramid::{HalfInt, ScalarMatrix};
use wyangian::rational::Q;
use wyangian::series::{
    quasideterminant, quasideterminant_submatrix, yangian_identity_check, Opposite, SeriesMatrix, UeaRing,
};
use wyangian::walgebra::capelli::{entry_selectors, inverse_commutator_witness, quasideterminant_paths_agree};
use wyangian::walgebra::{build_l, build_shifted_matrix, main_lemma_lhs, z_plus_e, MainLemmaMethod};

fn ones(n: usize) -> String {
    vec!["1"; n].join(",")
}

fn scalar(rows: &[&[i64]]) -> ScalarMatrix {
    let mut m = ScalarMatrix::zeros(rows.len(), rows[0].len());
    for (i, r) in rows.iter().enumerate() {
        for (j, &v) in r.iter().enumerate() {
            m.set(i, j, Q::int(v));
        }
    }
    m
}

/// Selector onto the first `k` of `n` indices, as `(I, J)`.
fn leading_block(n: usize, k: usize) -> (ScalarMatrix, ScalarMatrix) {
    let mut i1 = ScalarMatrix::zeros(n, k);
    let mut j1 = ScalarMatrix::zeros(k, n);
    for t in 0..k {
        i1.set(t, t, Q::ONE);
        j1.set(t, t, Q::ONE);
    }
    (i1, j1)
}

#[test]
fn z_plus_e_is_of_yangian_type() {
    for n in 1..=3 {
        let g = gl(&ones(n));
        let a = z_plus_e(&g);
        assert!(yangian_identity_check(&UeaRing(&g), &a, HalfInt::int(-3)).pass, "N={n}");
    }
}

#[test]
fn sandwiches_stay_of_yangian_type() {
    let g = gl(&ones(3));
    let ring = UeaRing(&g);
    let a = z_plus_e(&g);
    let j = scalar(&[&[1, 2, 0], &[0, 1, -1]]);
    let i = scalar(&[&[1, 0], &[3, 1], &[0, -2]]);
    let s = a.scalar_left(&ring, &j).scalar_right(&ring, &i);
    assert!(yangian_identity_check(&ring, &s, HalfInt::int(-3)).pass);
    let g2 = gl(&ones(2));
    let ring2 = UeaRing(&g2);
    let row = scalar(&[&[2, -1]]);
    let col = scalar(&[&[1], &[1]]);
    let s = z_plus_e(&g2).scalar_left(&ring2, &row).scalar_right(&ring2, &col);
    assert!(yangian_identity_check(&ring2, &s, HalfInt::int(-3)).pass);
}

#[test]
fn inverse_is_of_yangian_type_for_the_opposite_product() {
    let floor = HalfInt::int(-6);
    for n in 2..=3 {
        let g = gl(&ones(n));
        let ring = UeaRing(&g);
        let inv = z_plus_e(&g).inverse(&ring, floor).unwrap();
        assert!(yangian_identity_check(&Opposite(ring), &inv, floor).pass, "N={n}");
        assert!(!yangian_identity_check(&ring, &inv, floor).pass, "N={n} control");
    }
}

#[test]
fn quasideterminants_are_of_yangian_type() {
    let floor = HalfInt::int(-6);
    let g = gl(&ones(3));
    let ring = UeaRing(&g);
    let a = z_plus_e(&g);
    for k in 1..=2 {
        let (i1, j1) = leading_block(3, k);
        let q = quasideterminant_submatrix(&ring, &a, &i1, &j1, floor).unwrap();
        assert!(yangian_identity_check(&ring, &q, floor).pass, "block {k}");
    }
    let (i1, j1) = entry_selectors(3, 2, 2);
    let q = quasideterminant(&ring, &a, &i1, &j1, floor).unwrap();
    assert!(yangian_identity_check(&ring, &q, floor).pass);
}

#[test]
fn inverse_commutator_identity() {
    for n in 2..=3 {
        assert_eq!(inverse_commutator_witness(n, HalfInt::int(-6)).unwrap(), None, "N={n}");
    }
}

#[test]
fn quasideterminant_paths_agree_on_computed_cases() {
    let floor = HalfInt::int(-6);
    for n in 2..=3 {
        let g = gl(&ones(n));
        let a = z_plus_e(&g);
        for k in 0..n {
            let (i1, j1) = entry_selectors(n, k, k);
            assert!(quasideterminant_paths_agree(&g, &a, &i1, &j1, floor).unwrap());
        }
        let (i1, j1) = leading_block(n, n - 1);
        assert!(quasideterminant_paths_agree(&g, &a, &i1, &j1, floor).unwrap());
    }
    for p in ["2", "1,1", "2,1", "3"] {
        let g = gl(p);
        let sm = g.partition().structure_matrices();
        let a = build_shifted_matrix(&g);
        assert!(quasideterminant_paths_agree(&g, &a, &sm.i1, &sm.j1, HalfInt::int(-4)).unwrap(), "{p}");
    }
}

fn stable<E: Clone + PartialEq + std::fmt::Debug>(
    coarse: &SeriesMatrix<E>,
    fine: &SeriesMatrix<E>,
    floor: HalfInt,
    show: impl Fn(&E) -> serde_json::Value,
) -> bool {
    let a = matrix_json(&coarse.truncate(floor), &show).to_string();
    let b = matrix_json(&fine.truncate(floor), &show).to_string();
    a == b
}

#[test]
fn truncation_is_stable() {
    for (p, k) in [("2", 8), ("2,1", 8), ("3,1", 8), ("2,2", 8), ("2,1,1", 6)] {
        let g = gl(p);
        let floor = HalfInt::int(-k);
        let coarse = build_l(&g, floor).unwrap();
        let fine = build_l(&g, floor - HalfInt::int(2)).unwrap();
        assert!(stable(coarse.reduced(), fine.reduced(), floor, |c| melement_json(&g, c)), "L for {p}");
    }
    let g = gl("2,1");
    let floor = HalfInt::int(-6);
    let coarse = main_lemma_lhs(&g, floor, MainLemmaMethod::Corrected).unwrap();
    let fine = main_lemma_lhs(&g, floor - HalfInt::int(2), MainLemmaMethod::Corrected).unwrap();
    assert!(stable(&coarse, &fine, floor, |c| melement_json(&g, c)));
    let g = gl(&ones(3));
    let ring = UeaRing(&g);
    let a = z_plus_e(&g);
    let coarse = a.inverse(&ring, floor).unwrap();
    let fine = a.inverse(&ring, floor - HalfInt::int(2)).unwrap();
    assert!(stable(&coarse, &fine, floor, |c| wyangian::format::element_json(&g, c)));
}
