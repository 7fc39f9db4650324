//! The module `M = U(g)/I`, its canonical representatives and the products
//! on the W-algebra.
//!
//! A representative is a PBW polynomial whose letters lie in `g_{<=1/2}`;
//! the block order guarantees every monomial reads (`g_{<=0}` part)(`g_{1/2}`
//! part).  The left `U(g)`-action on `M` is computed letter by letter and
//! cached, which is far cheaper than forming products in `U(g)` and
//! reducing afterwards.

use std::rc::Rc;

use rustc_hash::FxHashMap;

use crate::pyramid::{GradeClass, HalfInt};
use crate::rational::Q;
use crate::uea::{add_into, Gl, Letter, Monomial, UeaElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuotientError {
    #[error("letter e_{{{0}}} is not in g_{{>=1}}")]
    NotInPositivePart(String),
    #[error("element has Kazhdan degree {0} > 0")]
    PositiveDegree(HalfInt),
}

/// Canonical representative of a coset in `M = U(g)/I`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MElement(UeaElement);

impl MElement {
    pub fn zero() -> MElement {
        MElement(UeaElement::zero())
    }

    /// The cyclic vector `1̄`.
    pub fn one() -> MElement {
        MElement(UeaElement::one())
    }

    pub fn scalar(c: Q) -> MElement {
        MElement(UeaElement::scalar(c))
    }

    /// Wraps an element already known to be reduced.
    pub(crate) fn from_reduced(e: UeaElement) -> MElement {
        MElement(e)
    }

    pub fn as_uea(&self) -> &UeaElement {
        &self.0
    }

    pub fn into_uea(self) -> UeaElement {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn plus(&self, o: &MElement) -> MElement {
        MElement(self.0.plus(&o.0))
    }

    pub fn minus(&self, o: &MElement) -> MElement {
        MElement(self.0.minus(&o.0))
    }

    pub fn scaled(&self, c: &Q) -> MElement {
        MElement(self.0.scaled(c))
    }

    pub fn add_assign(&mut self, o: &MElement) {
        self.0.add_assign(&o.0);
    }

    pub fn add_scaled(&mut self, o: &MElement, c: &Q) {
        self.0.add_scaled(&o.0, c);
    }

    pub fn as_scalar(&self) -> Option<Q> {
        self.0.as_scalar()
    }
}

impl Gl {
    /// `χ(e) = (f | e)` for a letter of `g_{>=1}`.
    pub fn chi(&self, l: Letter) -> Result<Q, QuotientError> {
        let info = self.info(l);
        if info.class != GradeClass::AtLeastOne {
            return Err(QuotientError::NotInPositivePart(format!("{},{}", info.gen.a, info.gen.b)));
        }
        Ok(info.chi.clone())
    }

    /// Image of `x·1̄` in `M`.
    pub fn reduce_mod_i(&self, x: &UeaElement) -> MElement {
        let mut acc: FxHashMap<Monomial, Q> = FxHashMap::default();
        for (m, c) in x.iter() {
            let cut = m.iter().position(|&l| self.info(l).class == GradeClass::AtLeastOne).unwrap_or(m.len());
            let mut coeff = c.clone();
            for &l in &m[cut..] {
                let v = &self.info(l).chi;
                if v.is_zero() {
                    coeff = Q::ZERO;
                    break;
                }
                coeff *= v;
            }
            if !coeff.is_zero() {
                add_into(&mut acc, &Monomial::from_slice(&m[..cut]), &coeff);
            }
        }
        MElement(UeaElement::from_terms(acc))
    }

    /// `ε_0(x)`: substitute `(f|a)` for every letter `a`.  Defined on `F_0 U(g)`.
    pub fn epsilon0(&self, x: &UeaElement) -> Result<Q, QuotientError> {
        if let Some(d) = self.kazhdan_degree(x) {
            if d > HalfInt::ZERO {
                return Err(QuotientError::PositiveDegree(d));
            }
        }
        let mut acc = Q::ZERO;
        for (m, c) in x.iter() {
            let mut t = c.clone();
            for &l in m.iter() {
                t *= &self.info(l).chi;
            }
            acc += &t;
        }
        Ok(acc)
    }

    fn act_terms(&self, x: Letter, m: &[Letter]) -> Rc<Vec<(Monomial, Q)>> {
        let class = self.info(x).class;
        if class != GradeClass::AtLeastOne && (m.is_empty() || x <= m[0]) {
            let mut out = Monomial::with_capacity(m.len() + 1);
            out.push(x);
            out.extend_from_slice(m);
            return Rc::new(vec![(out, Q::ONE)]);
        }
        if m.is_empty() {
            let c = self.info(x).chi.clone();
            return Rc::new(if c.is_zero() { vec![] } else { vec![(Monomial::new(), c)] });
        }
        let key = (x, Monomial::from_slice(m));
        if let Some(t) = self.act_cache.borrow().get(&key) {
            return t.clone();
        }
        // x y m' = y (x m') + [x, y] m', everything taken in M
        let y = m[0];
        let rest = &m[1..];
        let mut acc: FxHashMap<Monomial, Q> = FxHashMap::default();
        for (mono, c) in self.act_terms(x, rest).iter() {
            for (mono2, c2) in self.act_terms(y, mono).iter() {
                add_into(&mut acc, mono2, &(c * c2));
            }
        }
        for &(z, s) in self.bracket_letters(x, y) {
            let s = Q::int(s as i64);
            for (mono2, c2) in self.act_terms(z, rest).iter() {
                add_into(&mut acc, mono2, &(&s * c2));
            }
        }
        let terms = Rc::new(acc.into_iter().collect::<Vec<_>>());
        let mut cache = self.act_cache.borrow_mut();
        if cache.len() > (1 << 21) {
            cache.clear();
        }
        cache.insert(key, terms.clone());
        terms
    }

    /// Left action of a generator on `M`.
    pub fn act(&self, x: Letter, v: &MElement) -> MElement {
        let mut acc: FxHashMap<Monomial, Q> = FxHashMap::default();
        for (m, c) in v.0.iter() {
            for (m2, c2) in self.act_terms(x, m).iter() {
                add_into(&mut acc, m2, &(c * c2));
            }
        }
        MElement(UeaElement::from_terms(acc))
    }

    /// Left action of an arbitrary `u ∈ U(g)` on `M`: `u·v`.
    ///
    /// Monomials of `u` sharing a suffix share the work of applying it.
    pub fn act_elem(&self, u: &UeaElement, v: &MElement) -> MElement {
        if let Some(c) = u.as_scalar() {
            return v.scaled(&c);
        }
        let words: Vec<(&[Letter], Q)> = u.iter().map(|(m, c)| (&m[..], c.clone())).collect();
        let mut acc = MElement::zero();
        self.act_words(words, v, &mut acc);
        acc
    }

    fn act_words(&self, words: Vec<(&[Letter], Q)>, v: &MElement, acc: &mut MElement) {
        let mut groups: FxHashMap<Letter, Vec<(&[Letter], Q)>> = FxHashMap::default();
        for (w, c) in words {
            match w.split_last() {
                None => acc.add_scaled(v, &c),
                Some((&last, init)) => groups.entry(last).or_default().push((init, c)),
            }
        }
        let mut keys: Vec<Letter> = groups.keys().copied().collect();
        keys.sort_unstable();
        for k in keys {
            let next = self.act(k, v);
            if next.is_zero() {
                continue;
            }
            let ws = groups.remove(&k).unwrap();
            self.act_words(ws, &next, acc);
        }
    }

    /// W-algebra product through lifts: `reduce(w̃_1 w̃_2)`.
    ///
    /// A canonical representative is itself a lift of its coset, so the
    /// product is the action of `x` (read in `U(g)`) on `y`.
    pub fn lift_mul(&self, x: &MElement, y: &MElement) -> MElement {
        self.act_elem(&x.0, y)
    }

    /// Product in `U(g_{<=0}) ⊗ F^op(g_{1/2})`: `A_1 A_2 q_2 q_1` reduced.
    pub fn ucirc_mul(&self, x: &MElement, y: &MElement) -> MElement {
        let split = |m: &Monomial| -> usize {
            m.iter().position(|&l| self.info(l).class != GradeClass::NonPositive).unwrap_or(m.len())
        };
        // group x by its Weyl factor q_1 and y by q_2
        let mut acc = MElement::zero();
        for (my, cy) in y.0.iter() {
            let sy = split(my);
            let a2 = &my[..sy];
            let q2 = &my[sy..];
            for (mx, cx) in x.0.iter() {
                let sx = split(mx);
                let a1 = &mx[..sx];
                let q1 = &mx[sx..];
                let mut cur = MElement(UeaElement::from_monomial(Monomial::from_slice(q1), Q::ONE));
                for &l in q2.iter().rev().chain(a2.iter().rev()).chain(a1.iter().rev()) {
                    cur = self.act(l, &cur);
                }
                acc.add_scaled(&cur, &(cx * cy));
            }
        }
        acc
    }

    /// Right multiplication of a coset by a letter of `g_{>=1/2}`, well
    /// defined because `I·g_{>=1/2} ⊂ I`.
    pub fn right_act(&self, v: &MElement, a: Letter) -> MElement {
        let rep = MElement::from_reduced(UeaElement::from_monomial(smallvec::smallvec![a], Q::ONE));
        let a_bar =
            if self.info(a).class == GradeClass::AtLeastOne { MElement::scalar(self.info(a).chi.clone()) } else { rep };
        self.act_elem(&v.0, &a_bar)
    }

    /// The letters spanning `g_{>=1/2}`.
    pub fn positive_letters(&self) -> Vec<Letter> {
        (0..self.num_letters() as Letter).filter(|&l| self.info(l).class != GradeClass::NonPositive).collect()
    }

    /// First letter `a ∈ g_{>=1/2}` with `[a, lift]·1̄ ≠ 0`, computed from the lift.
    pub fn ad_invariance_witness(&self, lift: &UeaElement) -> Option<Letter> {
        self.positive_letters().into_iter().find(|&a| {
            let ea = UeaElement::from_monomial(smallvec::smallvec![a], Q::ONE);
            !self.reduce_mod_i(&self.commutator(&ea, lift)).is_zero()
        })
    }

    /// True iff `[a, lift]·1̄ = 0` for every `a ∈ g_{>=1/2}`.
    pub fn ad_invariant(&self, lift: &UeaElement) -> bool {
        self.ad_invariance_witness(lift).is_none()
    }

    /// Same test on the coset `w = w̃·1̄`: `a·w - w·a = 0` in `M`.
    pub fn ad_invariance_witness_reduced(&self, w: &MElement) -> Option<Letter> {
        self.positive_letters().into_iter().find(|&a| {
            let left = self.act(a, w);
            let right = self.right_act(w, a);
            left != right
        })
    }

    pub fn ad_invariant_reduced(&self, w: &MElement) -> bool {
        self.ad_invariance_witness_reduced(w).is_none()
    }
}
