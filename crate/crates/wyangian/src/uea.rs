//! The universal enveloping algebra `U(gl_N)` in PBW normal form.
//!
//! Generators `e_{a,b}` are indexed by pairs of pyramid boxes and totally
//! ordered by grading block (`g_{<=0}`, then `g_{1/2}`, then `g_{>=1}`),
//! ties broken lexicographically.  A [`Monomial`] is a weakly increasing
//! word in that order and a [`UeaElement`] is a finite sum of monomials.

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::pyramid::{BoxIndex, GradeClass, HalfInt, Partition};
use crate::rational::Q;

/// Rank of a generator in the fixed total order.
pub type Letter = u8;

/// Weakly increasing sequence of letters.
pub type Monomial = SmallVec<[Letter; 16]>;

/// Terms of a letter-times-monomial product, cached.
type Terms = Rc<Vec<(Monomial, Q)>>;

/// Caches are dropped wholesale past this many entries.
const CACHE_LIMIT: usize = 1 << 21;

/// The generator `e_{a,b}` as a pair of boxes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenIndex {
    pub a: BoxIndex,
    pub b: BoxIndex,
}

/// Static data attached to one letter.
#[derive(Clone, Debug)]
pub struct LetterInfo {
    pub gen: GenIndex,
    /// positions of `a` and `b` in box order
    pub pos: (usize, usize),
    pub degree: HalfInt,
    pub class: GradeClass,
    /// conformal weight `1 - degree`
    pub kazhdan: HalfInt,
    /// `(f | e_{a,b})`
    pub chi: Q,
}

/// A finite linear combination of PBW monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UeaElement {
    terms: FxHashMap<Monomial, Q>,
}

impl UeaElement {
    pub fn zero() -> UeaElement {
        UeaElement::default()
    }

    pub fn one() -> UeaElement {
        UeaElement::scalar(Q::ONE)
    }

    pub fn scalar(c: Q) -> UeaElement {
        let mut e = UeaElement::zero();
        e.add_term(Monomial::new(), c);
        e
    }

    pub fn from_monomial(m: Monomial, c: Q) -> UeaElement {
        let mut e = UeaElement::zero();
        e.add_term(m, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                let v = o.get() + &c;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &UeaElement, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), if c.is_one() { v.clone() } else { v * c });
        }
    }

    pub fn add_assign(&mut self, other: &UeaElement) {
        self.add_scaled(other, &Q::ONE);
    }

    pub fn sub_assign(&mut self, other: &UeaElement) {
        self.add_scaled(other, &Q::int(-1));
    }

    pub fn plus(&self, other: &UeaElement) -> UeaElement {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn minus(&self, other: &UeaElement) -> UeaElement {
        let mut r = self.clone();
        r.sub_assign(other);
        r
    }

    pub fn scaled(&self, c: &Q) -> UeaElement {
        let mut r = UeaElement::zero();
        r.add_scaled(self, c);
        r
    }

    pub fn neg(&self) -> UeaElement {
        self.scaled(&Q::int(-1))
    }

    pub fn coeff(&self, m: &[Letter]) -> Q {
        self.terms.get(m).cloned().unwrap_or(Q::ZERO)
    }

    /// The constant term.
    pub fn constant(&self) -> Q {
        self.coeff(&[])
    }

    /// `Some(c)` if the element is the scalar `c`.
    pub fn as_scalar(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::ZERO),
            1 => self.terms.get(&Monomial::new()).cloned(),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    /// Terms sorted by (length, letters) for reproducible output.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|x, y| x.0.len().cmp(&y.0.len()).then_with(|| x.0.cmp(y.0)));
        v
    }

    pub fn max_length(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    pub(crate) fn from_terms(terms: FxHashMap<Monomial, Q>) -> UeaElement {
        UeaElement { terms }
    }
}

impl FromIterator<(Monomial, Q)> for UeaElement {
    fn from_iter<T: IntoIterator<Item = (Monomial, Q)>>(iter: T) -> Self {
        let mut e = UeaElement::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }
}

/// `gl_N` attached to a partition: generator tables, structure constants and
/// the product caches.
pub struct Gl {
    partition: Partition,
    boxes: Vec<BoxIndex>,
    letters: Vec<LetterInfo>,
    /// letter of `e_{a,b}` at index `a * N + b` (box positions)
    rank_of: Vec<Letter>,
    /// `[x, y]` as a list of `(letter, ±1)`, at index `x * N^2 + y`
    brackets: Vec<SmallVec<[(Letter, i8); 2]>>,
    lmul_cache: RefCell<FxHashMap<(Letter, Monomial), Terms>>,
    pub(crate) act_cache: RefCell<FxHashMap<(Letter, Monomial), Terms>>,
}

impl fmt::Debug for Gl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gl({})", self.partition)
    }
}

impl Gl {
    pub fn new(partition: &Partition) -> Gl {
        let boxes = partition.boxes();
        let n = boxes.len();
        let xs: Vec<HalfInt> = boxes.iter().map(|&b| partition.x_coord(b).unwrap()).collect();
        let mut gens: Vec<(GradeClass, usize, usize)> = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                gens.push((GradeClass::of(xs[a] - xs[b]), a, b));
            }
        }
        gens.sort();
        let mut rank_of = vec![0; n * n];
        let letters: Vec<LetterInfo> = gens
            .iter()
            .enumerate()
            .map(|(r, &(class, a, b))| {
                rank_of[a * n + b] = r as Letter;
                let degree = xs[a] - xs[b];
                let (ba, bb) = (boxes[a], boxes[b]);
                let chi = if ba.i == bb.i && bb.h == ba.h + 1 { Q::ONE } else { Q::ZERO };
                LetterInfo {
                    gen: GenIndex { a: ba, b: bb },
                    pos: (a, b),
                    degree,
                    class,
                    kazhdan: HalfInt::int(1) - degree,
                    chi,
                }
            })
            .collect();
        let nn = n * n;
        let mut brackets = vec![SmallVec::new(); nn * nn];
        for x in 0..nn {
            for y in 0..nn {
                let (a, b) = letters[x].pos;
                let (c, d) = letters[y].pos;
                let mut v: SmallVec<[(Letter, i8); 2]> = SmallVec::new();
                if b == c {
                    v.push((rank_of[a * n + d], 1));
                }
                if d == a {
                    v.push((rank_of[c * n + b], -1));
                }
                if v.len() == 2 && v[0].0 == v[1].0 {
                    v.clear();
                }
                brackets[x * nn + y] = v;
            }
        }
        Gl {
            partition: partition.clone(),
            boxes,
            letters,
            rank_of,
            brackets,
            lmul_cache: RefCell::new(FxHashMap::default()),
            act_cache: RefCell::new(FxHashMap::default()),
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn n(&self) -> usize {
        self.boxes.len()
    }

    pub fn boxes(&self) -> &[BoxIndex] {
        &self.boxes
    }

    pub fn letters(&self) -> &[LetterInfo] {
        &self.letters
    }

    pub fn info(&self, l: Letter) -> &LetterInfo {
        &self.letters[l as usize]
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    /// Letter of `e_{a,b}` from box positions.
    pub fn letter_at(&self, a: usize, b: usize) -> Letter {
        self.rank_of[a * self.n() + b]
    }

    /// Letter of `e_{a,b}`; panics if a box is outside the pyramid.
    pub fn letter(&self, a: BoxIndex, b: BoxIndex) -> Letter {
        let pa = self.partition.position(a).expect("box outside pyramid");
        let pb = self.partition.position(b).expect("box outside pyramid");
        self.letter_at(pa, pb)
    }

    /// `e_{a,b}` as an element, from box positions.
    pub fn e_at(&self, a: usize, b: usize) -> UeaElement {
        UeaElement::from_monomial(smallvec::smallvec![self.letter_at(a, b)], Q::ONE)
    }

    /// `e_{a,b}` as an element.
    pub fn e(&self, a: BoxIndex, b: BoxIndex) -> UeaElement {
        UeaElement::from_monomial(smallvec::smallvec![self.letter(a, b)], Q::ONE)
    }

    pub fn bracket_letters(&self, x: Letter, y: Letter) -> &[(Letter, i8)] {
        let nn = self.letters.len();
        &self.brackets[x as usize * nn + y as usize]
    }

    /// `x * m` in normal form, for a letter `x` and a PBW monomial `m`.
    pub(crate) fn lmul(&self, x: Letter, m: &[Letter]) -> Terms {
        if m.is_empty() || x <= m[0] {
            let mut out = Monomial::with_capacity(m.len() + 1);
            out.push(x);
            out.extend_from_slice(m);
            return Rc::new(vec![(out, Q::ONE)]);
        }
        let key = (x, Monomial::from_slice(m));
        if let Some(t) = self.lmul_cache.borrow().get(&key) {
            return t.clone();
        }
        // x y m' = y (x m') + [x, y] m'
        let y = m[0];
        let rest = &m[1..];
        let mut acc: FxHashMap<Monomial, Q> = FxHashMap::default();
        for (mono, c) in self.lmul(x, rest).iter() {
            for (mono2, c2) in self.lmul(y, mono).iter() {
                add_into(&mut acc, mono2, &(c * c2));
            }
        }
        for &(z, s) in self.bracket_letters(x, y) {
            let s = Q::int(s as i64);
            for (mono2, c2) in self.lmul(z, rest).iter() {
                add_into(&mut acc, mono2, &(&s * c2));
            }
        }
        let terms: Terms = Rc::new(acc.into_iter().collect());
        let mut cache = self.lmul_cache.borrow_mut();
        if cache.len() > CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, terms.clone());
        terms
    }

    /// `x * e` for a letter `x`.
    pub fn letter_mul(&self, x: Letter, e: &UeaElement) -> UeaElement {
        let mut acc: FxHashMap<Monomial, Q> = FxHashMap::default();
        for (m, c) in e.iter() {
            for (m2, c2) in self.lmul(x, m).iter() {
                add_into(&mut acc, m2, &(c * c2));
            }
        }
        UeaElement::from_terms(acc)
    }

    /// Normal form of a product of letters.
    pub fn normal_form(&self, word: &[Letter]) -> UeaElement {
        let mut cur = UeaElement::one();
        for &x in word.iter().rev() {
            cur = self.letter_mul(x, &cur);
        }
        cur
    }

    /// Normal form of a formal combination of words.
    pub fn normal_form_sum(&self, words: &[(Vec<Letter>, Q)]) -> UeaElement {
        let mut acc = UeaElement::zero();
        for (w, c) in words {
            acc.add_scaled(&self.normal_form(w), c);
        }
        acc
    }

    pub fn mul(&self, x: &UeaElement, y: &UeaElement) -> UeaElement {
        if let Some(c) = x.as_scalar() {
            return y.scaled(&c);
        }
        if let Some(c) = y.as_scalar() {
            return x.scaled(&c);
        }
        let mut acc = UeaElement::zero();
        for (m, c) in x.iter() {
            let mut cur = y.clone();
            for &l in m.iter().rev() {
                cur = self.letter_mul(l, &cur);
            }
            acc.add_scaled(&cur, c);
        }
        acc
    }

    pub fn commutator(&self, x: &UeaElement, y: &UeaElement) -> UeaElement {
        self.mul(x, y).minus(&self.mul(y, x))
    }

    /// Conformal weight of a monomial.
    pub fn monomial_kazhdan(&self, m: &[Letter]) -> HalfInt {
        m.iter().fold(HalfInt::ZERO, |acc, &l| acc + self.info(l).kazhdan)
    }

    /// Smallest `Δ` with `x ∈ F_Δ U(g)`; `None` stands for `-∞` (x = 0).
    pub fn kazhdan_degree(&self, x: &UeaElement) -> Option<HalfInt> {
        x.iter().map(|(m, _)| self.monomial_kazhdan(m)).max()
    }

    /// True iff `x` commutes with every generator.
    pub fn is_central(&self, x: &UeaElement) -> bool {
        (0..self.num_letters()).all(|l| {
            let e = UeaElement::from_monomial(smallvec::smallvec![l as Letter], Q::ONE);
            self.commutator(&e, x).is_zero()
        })
    }

    /// The generators `e_{a,b}` of `gl_N`, one per letter.
    pub fn generators(&self) -> Vec<UeaElement> {
        (0..self.num_letters()).map(|l| UeaElement::from_monomial(smallvec::smallvec![l as Letter], Q::ONE)).collect()
    }

    /// `f_{ij;k}` as elements of `U(g)`, in the order of [`Partition::gf_basis`].
    pub fn gf_basis_elements(&self) -> Vec<((usize, usize, usize), UeaElement)> {
        self.partition
            .gf_basis()
            .into_iter()
            .map(|g| {
                let mut e = UeaElement::zero();
                for (a, b) in &g.terms {
                    e.add_assign(&self.e(*a, *b));
                }
                ((g.i, g.j, g.k), e)
            })
            .collect()
    }

    /// `f = Σ e_{(i,h+1),(i,h)}` as an element.
    pub fn f_element(&self) -> UeaElement {
        let mut e = UeaElement::zero();
        for b in &self.boxes {
            if b.h < self.partition.part(b.i) {
                e.add_assign(&self.e(BoxIndex::new(b.i, b.h + 1), *b));
            }
        }
        e
    }

    /// Drops the product caches.
    pub fn clear_caches(&self) {
        self.lmul_cache.borrow_mut().clear();
        self.act_cache.borrow_mut().clear();
    }
}

pub(crate) fn add_into(acc: &mut FxHashMap<Monomial, Q>, m: &Monomial, c: &Q) {
    if c.is_zero() {
        return;
    }
    use std::collections::hash_map::Entry;
    match acc.entry(m.clone()) {
        Entry::Occupied(mut o) => {
            let v = o.get() + c;
            if v.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = v;
            }
        }
        Entry::Vacant(v) => {
            v.insert(c.clone());
        }
    }
}
