mod common;

use common::gl;
use wyangian::pyramid::{BoxIndex, GradeClass, HalfInt, Partition};
use wyangian::quotient::MElement;
use wyangian::rational::Q;
use wyangian::series::{yangian_identity_check, LiftRing, Series};
use wyangian::uea::{Letter, UeaElement};
use wyangian::walgebra::families::{
    check_relations, conjecture_witness, family_generators, generator_membership_witness, l1_minimal,
    minimal_relations, premet_witness, Family,
};
use wyangian::walgebra::{
    build_l, default_floor, main_lemma_lhs, main_lemma_witness, membership_witness, yangian_check_l, MainLemmaMethod,
    Product,
};

#[test]
fn shift_matrices() {
    let d = |s: &str| -> Vec<Q> { s.parse::<Partition>().unwrap().shift_matrix().diagonal() };
    let want = |v: &[i64]| -> Vec<Q> { v.iter().map(|&x| Q::int(x)).collect() };
    assert_eq!(d("3,2,1"), want(&[0, -1, -4, 0, -2, -1]));
    assert_eq!(d("2"), want(&[0, -1]));
    assert!("3,2,1".parse::<Partition>().unwrap().shift_matrix().is_diagonal());
}

#[test]
fn main_lemma_for_two_matches_the_closed_form() {
    let g = gl("2");
    let floor = HalfInt::int(-6);
    let b = BoxIndex::new;
    let e11 = g.e(b(1, 1), b(1, 1));
    let e22 = g.e(b(1, 2), b(1, 2));
    let f = g.e(b(1, 2), b(1, 1));
    // z^{-2} f - (1 + z^{-1} e11)(1 + z^{-1}(e22 - 1))
    let one = UeaElement::one();
    let terms = [
        (HalfInt::ZERO, one.neg()),
        (HalfInt::int(-1), e11.plus(&e22).minus(&one).neg()),
        (HalfInt::int(-2), f.minus(&g.mul(&e11, &e22.minus(&one)))),
    ];
    let ring = LiftRing(&g);
    let want = Series::from_terms(&ring, None, terms.into_iter().map(|(n, c)| (n, g.reduce_mod_i(&c))));
    let l = build_l(&g, floor + HalfInt::int(2)).unwrap();
    for method in [MainLemmaMethod::Direct, MainLemmaMethod::Corrected] {
        let lhs = main_lemma_lhs(&g, floor, method).unwrap();
        assert!(lhs.get(0, 0).agrees_with(&want, floor), "{method:?}");
        assert!(lhs.get(0, 0).agrees_with(&l.entry(0, 0).shift(HalfInt::int(-2)), floor));
    }
}

#[test]
fn main_lemma_for_small_partitions() {
    for p in ["1,1", "2,1", "3,1", "2,2", "2,1,1", "3"] {
        let g = gl(p);
        assert_eq!(main_lemma_witness(&g, HalfInt::int(-6), MainLemmaMethod::Corrected).unwrap(), None, "{p}");
    }
    let g = gl("2,1");
    assert_eq!(main_lemma_witness(&g, HalfInt::int(-5), MainLemmaMethod::Direct).unwrap(), None);
}

#[test]
fn l_coefficients_lie_in_w() {
    for p in ["2", "3", "2,1", "3,1", "2,2", "2,1,1", "3,2"] {
        let g = gl(p);
        let l = build_l(&g, HalfInt::int(-6)).unwrap();
        assert!(l.has_expected_leading_term(), "{p}");
        assert_eq!(membership_witness(&g, &l), None, "{p}");
    }
}

#[test]
fn membership_detects_a_non_invariant_coefficient() {
    let g = gl("2,1");
    let l = build_l(&g, HalfInt::int(-4)).unwrap();
    let half: Letter = (0..g.num_letters() as Letter)
        .find(|&l| g.info(l).class == GradeClass::Half)
        .expect("(2,1) has a degree 1/2 part");
    let c = l.entry(0, 0).coeff(HalfInt::ZERO).unwrap();
    let spoiled = c.plus(&g.reduce_mod_i(&UeaElement::from_monomial(smallvec_of(half), Q::ONE)));
    assert!(g.ad_invariance_witness_reduced(c).is_none());
    assert!(g.ad_invariance_witness_reduced(&spoiled).is_some());
}

fn smallvec_of(l: Letter) -> wyangian::uea::Monomial {
    std::iter::once(l).collect()
}

#[test]
fn yangian_identity_for_small_partitions() {
    for p in ["2,1", "3,1", "2,2", "1,1"] {
        let g = gl(p);
        let r = yangian_check_l(&g, HalfInt::int(-6), Product::Lift).unwrap();
        assert!(r.pass, "{p}: {:?}", r.witness);
    }
    let g = gl("2,1");
    assert!(yangian_check_l(&g, HalfInt::int(-4), Product::Circ).unwrap().pass);
}

#[test]
fn principal_l_commutes_with_itself() {
    for n in 1..=3 {
        let g = gl(&n.to_string());
        let l = build_l(&g, HalfInt::int(-1)).unwrap();
        assert!(l.is_exact());
        let coeffs: Vec<&MElement> = l.coefficients().map(|(_, _, c)| c).collect();
        for a in &coeffs {
            for b in &coeffs {
                assert_eq!(g.lift_mul(a, b), g.lift_mul(b, a));
            }
        }
        let r = yangian_identity_check(&LiftRing(&g), l.reduced(), HalfInt::int(-4));
        assert!(r.pass);
    }
}

#[test]
fn principal_family() {
    for n in 2..=4 {
        let g = gl(&n.to_string());
        let w = family_generators(&g, Family::Principal).unwrap();
        assert_eq!(w.len(), n);
        let mut trace = UeaElement::scalar(Q::int(-((n * (n - 1) / 2) as i64)));
        for i in 0..n {
            trace.add_assign(&g.e_at(i, i));
        }
        assert_eq!(w.get((1, 1, n - 1)).unwrap(), &g.reduce_mod_i(&trace));
        assert_eq!(premet_witness(&g, &w), None);
    }
}

#[test]
fn minimal_family_formulas() {
    for p in ["2,1", "2,1,1"] {
        let g = gl(p);
        let w = family_generators(&g, Family::Minimal).unwrap();
        assert_eq!(generator_membership_witness(&g, &w), None, "{p}");
        let floor = default_floor(g.partition());
        let l = build_l(&g, floor).unwrap();
        for product in [Product::Lift, Product::Circ] {
            let l1 = l1_minimal(&g, &w, floor, product).unwrap();
            assert!(l1.agrees_with(l.entry(0, 0), floor), "{p} {product:?}");
            let rels = minimal_relations(g.partition(), true);
            assert!(check_relations(&g, &w, &rels, product).unwrap().pass(), "{p} {product:?}");
        }
        assert_eq!(premet_witness(&g, &w), None);
    }
}

#[test]
fn conjectural_form_of_l() {
    for (p, family) in [("2,2", Family::Rectangular), ("2,1", Family::Minimal), ("3", Family::Principal)] {
        let g = gl(p);
        let w = family_generators(&g, family).unwrap();
        assert_eq!(conjecture_witness(&g, &w, HalfInt::int(-6)).unwrap(), None, "{p}");
    }
}
