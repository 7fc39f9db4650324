//! Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{element, gl, seeded_runner, words, SEEDS};
use proptest::prelude::*;
use wyangian::format::{matrix_json, melement_json};
use wyangian::pyramid::{BoxIndex, HalfInt, Partition, ScalarMatrix};
use wyangian::rational::Q;
use wyangian::series::{
    quasideterminant, quasideterminant_submatrix, yangian_identity_check, LiftRing, Opposite, Series, UeaRing,
};
use wyangian::uea::UeaElement;
use wyangian::walgebra::capelli::{
    capelli_suite, det_identities, entry_selectors, inverse_commutator_witness, quasideterminant_paths_agree,
};
use wyangian::walgebra::families::{
    check_relations, family_generators, generator_membership_witness, l1_minimal, minimal_relations,
    rectangular_relations, Family,
};
use wyangian::walgebra::presentation::minimal_yangian;
use wyangian::walgebra::{
    build_l, build_shifted_matrix, default_floor, main_lemma_lhs, main_lemma_witness, membership_witness,
    yangian_check_l, z_plus_e, MainLemmaMethod, Product,
};

/// Truncation floor used by the main checks.
const FLOOR: i64 = -8;
/// Floor for the closed-form and quasideterminant checks.
const SMALL_FLOOR: i64 = -6;
const CAPELLI_LIMIT: Duration = Duration::from_secs(600);
const MAIN_LEMMA_LIMIT: Duration = Duration::from_secs(300);
const PROPERTY_CASES: u32 = 1000;
const PARTITIONS: [&str; 4] = ["2,1", "3,1", "2,2", "2,1,1"];

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ones(n: usize) -> String {
    vec!["1"; n].join(",")
}

fn capelli() -> Outcome {
    for n in 2..=4 {
        let start = Instant::now();
        let r = capelli_suite(n).map_err(err)?;
        let took = start.elapsed();
        ensure(r.pass(), || format!("N={n}: monic={} central={:?}", r.monic, r.central))?;
        ensure(took <= CAPELLI_LIMIT, || format!("N={n} took {took:?}"))?;
        eprintln!("  capelli N={n}: {took:.2?}");
    }
    Ok(())
}

fn shift_matrices() -> Outcome {
    let d = |s: &str| -> Vec<Q> { s.parse::<Partition>().unwrap().shift_matrix().diagonal() };
    let want = |v: &[i64]| -> Vec<Q> { v.iter().map(|&x| Q::int(x)).collect() };
    ensure(d("3,2,1") == want(&[0, -1, -4, 0, -2, -1]), || format!("(3,2,1): {:?}", d("3,2,1")))?;
    ensure(d("2") == want(&[0, -1]), || format!("(2): {:?}", d("2")))
}

fn main_lemma_two() -> Outcome {
    let g = gl("2");
    let floor = HalfInt::int(SMALL_FLOOR);
    let b = BoxIndex::new;
    let e11 = g.e(b(1, 1), b(1, 1));
    let e22 = g.e(b(1, 2), b(1, 2));
    let f = g.e(b(1, 2), b(1, 1));
    let one = UeaElement::one();
    // z^{-2} f - (1 + z^{-1} e11)(1 + z^{-1}(e22 - 1))
    let terms = [
        (HalfInt::ZERO, one.neg()),
        (HalfInt::int(-1), e11.plus(&e22).minus(&one).neg()),
        (HalfInt::int(-2), f.minus(&g.mul(&e11, &e22.minus(&one)))),
    ];
    let ring = LiftRing(&g);
    let want = Series::from_terms(&ring, None, terms.into_iter().map(|(n, c)| (n, g.reduce_mod_i(&c))));
    let l = build_l(&g, floor + HalfInt::int(2)).map_err(err)?;
    let lhs = main_lemma_lhs(&g, floor, MainLemmaMethod::Corrected).map_err(err)?;
    ensure(lhs.get(0, 0).agrees_with(&want, floor), || "differs from the closed form".into())?;
    ensure(lhs.get(0, 0).agrees_with(&l.entry(0, 0).shift(HalfInt::int(-2)), floor), || "differs from z^-2 L".into())
}

fn main_lemma() -> Outcome {
    for p in PARTITIONS {
        let g = gl(p);
        let start = Instant::now();
        let w = main_lemma_witness(&g, HalfInt::int(FLOOR), MainLemmaMethod::Corrected).map_err(err)?;
        let took = start.elapsed();
        ensure(w.is_none(), || format!("{p}: {w:?}"))?;
        ensure(took <= MAIN_LEMMA_LIMIT, || format!("{p} took {took:?}"))?;
        eprintln!("  main lemma {p}: {took:.2?}");
    }
    Ok(())
}

fn ad_invariance() -> Outcome {
    for p in PARTITIONS {
        let g = gl(p);
        let l = build_l(&g, HalfInt::int(FLOOR)).map_err(err)?;
        ensure(l.has_expected_leading_term(), || format!("{p}: leading term"))?;
        let w = membership_witness(&g, &l);
        ensure(w.is_none(), || format!("{p}: {w:?}"))?;
    }
    Ok(())
}

fn yangian() -> Outcome {
    let floor = HalfInt::int(FLOOR);
    for p in PARTITIONS {
        let g = gl(p);
        let start = Instant::now();
        let (pass, detail) = if p == "2,1,1" {
            let w = family_generators(&g, Family::Minimal).map_err(err)?;
            let r = minimal_yangian(&g, &w, floor).map_err(err)?;
            (r.pass(), format!("{r:?}"))
        } else {
            let r = yangian_check_l(&g, floor, Product::Lift).map_err(err)?;
            (r.pass, format!("{r:?}"))
        };
        ensure(pass, || format!("{p}: {detail}"))?;
        eprintln!("  yangian {p}: {:.2?}", start.elapsed());
    }
    for n in 1..=3 {
        let g = gl(&n.to_string());
        let l = build_l(&g, HalfInt::int(-1)).map_err(err)?;
        ensure(l.is_exact(), || format!("({n}): L is not a polynomial"))?;
        let coeffs: Vec<_> = l.coefficients().map(|(_, _, c)| c).collect();
        for a in &coeffs {
            for b in &coeffs {
                ensure(g.lift_mul(a, b) == g.lift_mul(b, a), || format!("({n}): [L(z),L(w)] != 0"))?;
            }
        }
    }
    Ok(())
}

fn principal() -> Outcome {
    for n in 2..=4 {
        let g = gl(&n.to_string());
        let w = family_generators(&g, Family::Principal).map_err(err)?;
        ensure(w.len() == n, || format!("N={n}: {} generators", w.len()))?;
        let mut trace = UeaElement::scalar(Q::int(-((n * (n - 1) / 2) as i64)));
        for i in 0..n {
            trace.add_assign(&g.e_at(i, i));
        }
        ensure(w.get((1, 1, n - 1)).map_err(err)? == &g.reduce_mod_i(&trace), || format!("N={n}: w_(N-1)"))?;
        let keys: Vec<_> = w.iter().map(|(_, v)| v).collect();
        for a in &keys {
            for b in &keys {
                ensure(g.lift_mul(a, b) == g.lift_mul(b, a), || format!("N={n}: generators do not commute"))?;
            }
        }
    }
    Ok(())
}

fn rectangular() -> Outcome {
    // The bracket uses w_{ad} w_{cb}; the index pattern with w_{bc} does not hold.
    let g = gl("2,2");
    let w = family_generators(&g, Family::Rectangular).map_err(err)?;
    let rels = rectangular_relations(g.partition());
    ensure(rels.len() == 64, || format!("{} relations", rels.len()))?;
    for product in [Product::Lift, Product::Circ] {
        let r = check_relations(&g, &w, &rels, product).map_err(err)?;
        ensure(r.pass(), || format!("{product:?}: {:?}", r.failures))?;
    }
    Ok(())
}

fn minimal() -> Outcome {
    for p in ["2,1", "2,1,1"] {
        let g = gl(p);
        let w = family_generators(&g, Family::Minimal).map_err(err)?;
        let m = generator_membership_witness(&g, &w);
        ensure(m.is_none(), || format!("{p}: {m:?}"))?;
        let floor = default_floor(g.partition());
        let l = build_l(&g, floor).map_err(err)?;
        let l1 = l1_minimal(&g, &w, floor, Product::Lift).map_err(err)?;
        ensure(l1.agrees_with(l.entry(0, 0), floor), || format!("{p}: L1 differs"))?;
        let r = check_relations(&g, &w, &minimal_relations(g.partition(), true), Product::Lift).map_err(err)?;
        ensure(r.pass(), || format!("{p}: {:?}", r.failures))?;
    }
    Ok(())
}

fn quasideterminants() -> Outcome {
    let floor = HalfInt::int(SMALL_FLOOR);
    for n in 2..=3 {
        let g = gl(&ones(n));
        let a = z_plus_e(&g);
        for k in 0..n {
            let (i1, j1) = entry_selectors(n, k, k);
            ensure(quasideterminant_paths_agree(&g, &a, &i1, &j1, floor).map_err(err)?, || format!("z+E N={n} k={k}"))?;
        }
    }
    for p in ["2", "2,1", "3"] {
        let g = gl(p);
        let sm = g.partition().structure_matrices();
        let ok = quasideterminant_paths_agree(&g, &build_shifted_matrix(&g), &sm.i1, &sm.j1, HalfInt::int(-4));
        ensure(ok.map_err(err)?, || format!("shifted matrix {p}"))?;
    }
    let d = det_identities(3).map_err(err)?;
    ensure(d.row_equals_column && d.quasideterminant_sign == Some(1), || format!("N=3: {d:?}"))?;
    for n in 2..=3 {
        let w = inverse_commutator_witness(n, floor).map_err(err)?;
        ensure(w.is_none(), || format!("inverse commutator N={n}: {w:?}"))?;
    }
    Ok(())
}

fn yangian_closure() -> Outcome {
    let floor = HalfInt::int(SMALL_FLOOR);
    for n in 1..=3 {
        let g = gl(&ones(n));
        let ring = UeaRing(&g);
        let a = z_plus_e(&g);
        ensure(yangian_identity_check(&ring, &a, floor).pass, || format!("z+E N={n}"))?;
        let mut j = ScalarMatrix::zeros(1, n);
        let mut i = ScalarMatrix::zeros(n, 1);
        for t in 0..n {
            j.set(0, t, Q::int(t as i64 + 1));
            i.set(t, 0, Q::int(1 - t as i64));
        }
        let s = a.scalar_left(&ring, &j).scalar_right(&ring, &i);
        ensure(yangian_identity_check(&ring, &s, floor).pass, || format!("sandwich N={n}"))?;
        let inv = a.inverse(&ring, floor).map_err(err)?;
        ensure(yangian_identity_check(&Opposite(ring), &inv, floor).pass, || format!("inverse N={n}"))?;
        for k in 0..n {
            let (i1, j1) = entry_selectors(n, k, k);
            let q = quasideterminant(&ring, &a, &i1, &j1, floor).map_err(err)?;
            ensure(yangian_identity_check(&ring, &q, floor).pass, || format!("quasideterminant N={n} k={k}"))?;
        }
        if n > 1 {
            let mut i2 = ScalarMatrix::zeros(n, n - 1);
            let mut j2 = ScalarMatrix::zeros(n - 1, n);
            for t in 0..n - 1 {
                i2.set(t, t, Q::ONE);
                j2.set(t, t, Q::ONE);
            }
            let q = quasideterminant_submatrix(&ring, &a, &i2, &j2, floor).map_err(err)?;
            ensure(yangian_identity_check(&ring, &q, floor).pass, || format!("block quasideterminant N={n}"))?;
        }
    }
    Ok(())
}

fn pbw_and_jacobi() -> Outcome {
    let g = gl("2,1");
    for seed in SEEDS {
        let strategy = (words(g.num_letters(), 3), words(g.num_letters(), 3), words(g.num_letters(), 3));
        seeded_runner(seed, PROPERTY_CASES)
            .run(&strategy, |(a, b, c)| {
                let (x, y, z) = (g.normal_form_sum(&a), g.normal_form_sum(&b), g.normal_form_sum(&c));
                prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
                let jacobi = g
                    .commutator(&x, &g.commutator(&y, &z))
                    .plus(&g.commutator(&y, &g.commutator(&z, &x)))
                    .plus(&g.commutator(&z, &g.commutator(&x, &y)));
                prop_assert!(jacobi.is_zero());
                Ok(())
            })
            .map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(())
}

fn kazhdan() -> Outcome {
    for p in ["2,1", "3,1", "2,2"] {
        let g = gl(p);
        for seed in SEEDS {
            seeded_runner(seed, PROPERTY_CASES)
                .run(&(element(&g, 3), element(&g, 3)), |(x, y)| {
                    if let (Some(dx), Some(dy)) = (g.kazhdan_degree(&x), g.kazhdan_degree(&y)) {
                        if let Some(d) = g.kazhdan_degree(&g.mul(&x, &y)) {
                            prop_assert!(d <= dx + dy);
                        }
                        if let Some(d) = g.kazhdan_degree(&g.commutator(&x, &y)) {
                            prop_assert!(d <= dx + dy - HalfInt::int(1));
                        }
                    }
                    Ok(())
                })
                .map_err(|e| format!("{p} seed {seed}: {e}"))?;
        }
    }
    Ok(())
}

fn truncation_stability() -> Outcome {
    let k = HalfInt::int(FLOOR);
    for p in ["2", "2,1", "3,1", "2,2", "2,1,1"] {
        let g = gl(p);
        let coarse = build_l(&g, k).map_err(err)?;
        let fine = build_l(&g, k - HalfInt::int(2)).map_err(err)?;
        let show = |c: &_| melement_json(&g, c);
        let a = matrix_json(&coarse.reduced().truncate(k), show).to_string();
        let b = matrix_json(&fine.reduced().truncate(k), show).to_string();
        ensure(a == b, || format!("L for {p}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("1 capelli determinant for N=2,3,4", capelli),
        ("2 shift matrices", shift_matrices),
        ("3 main lemma for (2) at -6", main_lemma_two),
        ("4 main lemma at -8", main_lemma),
        ("5 ad-invariance of L coefficients", ad_invariance),
        ("6 yangian identity at -8 and commuting L for (N)", yangian),
        ("7 principal family", principal),
        ("8 rectangular (2,2) bracket table", rectangular),
        ("9 minimal family (2,1) and (2,1,1)", minimal),
        ("10 quasideterminant identities", quasideterminants),
        ("11a yangian closure under sandwich, inverse, quasideterminant", yangian_closure),
        ("11b PBW confluence and Jacobi", pbw_and_jacobi),
        ("11c kazhdan filtration", kazhdan),
        ("11d truncation stability", truncation_stability),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(()) => println!("PASS {name} ({:.2?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
