#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use wyangian::rational::Q;
use wyangian::uea::{Gl, Letter, UeaElement};

pub fn gl(p: &str) -> Gl {
    Gl::new(&p.parse().unwrap())
}

/// Random words of length at most `max_len` with small rational coefficients.
pub fn words(num_letters: usize, max_len: usize) -> impl Strategy<Value = Vec<(Vec<Letter>, Q)>> {
    let word = prop::collection::vec(0..num_letters as Letter, 0..=max_len);
    let coeff = (-5i64..=5, 1i64..=3).prop_map(|(n, d)| Q::new(n, d));
    prop::collection::vec((word, coeff), 1..=3)
}

pub fn element(gl: &Gl, max_len: usize) -> impl Strategy<Value = UeaElement> + '_ {
    words(gl.num_letters(), max_len).prop_map(move |w| gl.normal_form_sum(&w))
}

/// A runner with a fixed seed, so every run sees the same cases.
pub fn seeded_runner(seed: u8, cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

pub const SEEDS: [u8; 3] = [1, 2, 3];
