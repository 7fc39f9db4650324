//! Truncated Laurent series in `z^{-1/2}` over a noncommutative ring,
//! matrices of them, inversion, noncommutative determinants,
//! quasideterminants and the Yangian identity.
//!
//! Exponents are [`HalfInt`]-valued and stored doubled.  Every series
//! carries its truncation floor: coefficients at exponents `>= floor` are
//! exact, nothing is known below.  `floor == None` marks an exact
//! (finitely supported) series.

use std::collections::BTreeMap;
use std::fmt::Debug;

use rustc_hash::FxHashMap;

use crate::pyramid::{HalfInt, ScalarMatrix};
use crate::quotient::MElement;
use crate::rational::Q;
use crate::uea::{Gl, UeaElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("requested precision z^{requested} is below the available precision z^{available}")]
    Precision { requested: HalfInt, available: HalfInt },
}

/// Coefficient ring for series.
pub trait Ring {
    type E: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::E;
    fn scalar(&self, q: Q) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn scale(&self, a: &Self::E, q: &Q) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn as_scalar(&self, a: &Self::E) -> Option<Q>;

    fn one(&self) -> Self::E {
        self.scalar(Q::ONE)
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        self.scale(a, &Q::int(-1))
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }
    fn commutator(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.sub(&self.mul(a, b), &self.mul(b, a))
    }
}

/// The rationals, for scalar tests.
#[derive(Clone, Copy, Debug, Default)]
pub struct QRing;

impl Ring for QRing {
    type E = Q;
    fn zero(&self) -> Q {
        Q::ZERO
    }
    fn scalar(&self, q: Q) -> Q {
        q
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn scale(&self, a: &Q, q: &Q) -> Q {
        a * q
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
    fn as_scalar(&self, a: &Q) -> Option<Q> {
        Some(a.clone())
    }
}

/// `U(gl_N)` with its PBW product.
#[derive(Clone, Copy, Debug)]
pub struct UeaRing<'g>(pub &'g Gl);

impl Ring for UeaRing<'_> {
    type E = UeaElement;
    fn zero(&self) -> UeaElement {
        UeaElement::zero()
    }
    fn scalar(&self, q: Q) -> UeaElement {
        UeaElement::scalar(q)
    }
    fn add(&self, a: &UeaElement, b: &UeaElement) -> UeaElement {
        a.plus(b)
    }
    fn scale(&self, a: &UeaElement, q: &Q) -> UeaElement {
        a.scaled(q)
    }
    fn mul(&self, a: &UeaElement, b: &UeaElement) -> UeaElement {
        self.0.mul(a, b)
    }
    fn is_zero(&self, a: &UeaElement) -> bool {
        a.is_zero()
    }
    fn as_scalar(&self, a: &UeaElement) -> Option<Q> {
        a.as_scalar()
    }
}

/// The W-algebra on canonical representatives, product through lifts.
#[derive(Clone, Copy, Debug)]
pub struct LiftRing<'g>(pub &'g Gl);

/// The W-algebra on canonical representatives, product of
/// `U(g_{<=0}) ⊗ F^op(g_{1/2})`.
#[derive(Clone, Copy, Debug)]
pub struct CircRing<'g>(pub &'g Gl);

macro_rules! m_ring {
    ($t:ident, $mul:ident) => {
        impl Ring for $t<'_> {
            type E = MElement;
            fn zero(&self) -> MElement {
                MElement::zero()
            }
            fn scalar(&self, q: Q) -> MElement {
                MElement::scalar(q)
            }
            fn add(&self, a: &MElement, b: &MElement) -> MElement {
                a.plus(b)
            }
            fn scale(&self, a: &MElement, q: &Q) -> MElement {
                a.scaled(q)
            }
            fn mul(&self, a: &MElement, b: &MElement) -> MElement {
                self.0.$mul(a, b)
            }
            fn is_zero(&self, a: &MElement) -> bool {
                a.is_zero()
            }
            fn as_scalar(&self, a: &MElement) -> Option<Q> {
                a.as_scalar()
            }
        }
    };
}
m_ring!(LiftRing, lift_mul);
m_ring!(CircRing, ucirc_mul);

/// A ring with the opposite product.
#[derive(Clone, Copy, Debug)]
pub struct Opposite<R>(pub R);

impl<R: Ring> Ring for Opposite<R> {
    type E = R::E;
    fn zero(&self) -> R::E {
        self.0.zero()
    }
    fn scalar(&self, q: Q) -> R::E {
        self.0.scalar(q)
    }
    fn add(&self, a: &R::E, b: &R::E) -> R::E {
        self.0.add(a, b)
    }
    fn scale(&self, a: &R::E, q: &Q) -> R::E {
        self.0.scale(a, q)
    }
    fn mul(&self, a: &R::E, b: &R::E) -> R::E {
        self.0.mul(b, a)
    }
    fn is_zero(&self, a: &R::E) -> bool {
        self.0.is_zero(a)
    }
    fn as_scalar(&self, a: &R::E) -> Option<Q> {
        self.0.as_scalar(a)
    }
}

/// A truncated Laurent series `Σ c_n z^n` with `n ∈ (1/2)Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<E> {
    /// doubled exponent of the lowest exact coefficient; `None` if exact
    floor: Option<i64>,
    /// doubled exponent -> nonzero coefficient
    terms: BTreeMap<i64, E>,
}

impl<E: Clone + PartialEq + Debug> Series<E> {
    pub fn zero_exact() -> Series<E> {
        Series { floor: None, terms: BTreeMap::new() }
    }

    /// The zero series known down to `floor`.
    pub fn zero_to(floor: HalfInt) -> Series<E> {
        Series { floor: Some(floor.doubled), terms: BTreeMap::new() }
    }

    /// `c z^n`, exact.
    pub fn monomial<R: Ring<E = E>>(ring: &R, c: E, n: HalfInt) -> Series<E> {
        let mut s = Series::zero_exact();
        if !ring.is_zero(&c) {
            s.terms.insert(n.doubled, c);
        }
        s
    }

    /// `c` as a constant series.
    pub fn constant<R: Ring<E = E>>(ring: &R, c: E) -> Series<E> {
        Series::monomial(ring, c, HalfInt::ZERO)
    }

    pub fn from_terms<R: Ring<E = E>>(
        ring: &R,
        floor: Option<HalfInt>,
        terms: impl IntoIterator<Item = (HalfInt, E)>,
    ) -> Series<E> {
        let floor = floor.map(|f| f.doubled);
        let mut s = Series { floor, terms: BTreeMap::new() };
        for (n, c) in terms {
            if floor.is_some_and(|f| n.doubled < f) || ring.is_zero(&c) {
                continue;
            }
            s.add_coeff(ring, n.doubled, &c);
        }
        s
    }

    pub fn floor(&self) -> Option<HalfInt> {
        self.floor.map(HalfInt::from_doubled)
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn top(&self) -> Option<HalfInt> {
        self.terms.keys().next_back().map(|&d| HalfInt::from_doubled(d))
    }

    /// Lowest stored exponent.
    pub fn bottom(&self) -> Option<HalfInt> {
        self.terms.keys().next().map(|&d| HalfInt::from_doubled(d))
    }

    pub fn coeff(&self, n: HalfInt) -> Option<&E> {
        self.terms.get(&n.doubled)
    }

    /// Coefficient at `n`, zero if absent; panics below the floor.
    pub fn coeff_or<R: Ring<E = E>>(&self, ring: &R, n: HalfInt) -> E {
        if let Some(f) = self.floor {
            assert!(n.doubled >= f, "coefficient z^{n} requested below the floor");
        }
        self.terms.get(&n.doubled).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (HalfInt, &E)> {
        self.terms.iter().map(|(&d, c)| (HalfInt::from_doubled(d), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_coeff<R: Ring<E = E>>(&mut self, ring: &R, d: i64, c: &E) {
        if let Some(f) = self.floor {
            if d < f {
                return;
            }
        }
        match self.terms.get_mut(&d) {
            Some(v) => {
                let s = ring.add(v, c);
                if ring.is_zero(&s) {
                    self.terms.remove(&d);
                } else {
                    *v = s;
                }
            }
            None => {
                if !ring.is_zero(c) {
                    self.terms.insert(d, c.clone());
                }
            }
        }
    }

    /// Drops everything below `floor` and records the loss of precision.
    pub fn truncate(&self, floor: HalfInt) -> Series<E> {
        let f = match self.floor {
            Some(g) => g.max(floor.doubled),
            None => floor.doubled,
        };
        Series { floor: Some(f), terms: self.terms.range(f..).map(|(&k, v)| (k, v.clone())).collect() }
    }

    /// Same series with the floor forgotten; only for finitely supported data.
    pub fn assume_exact(mut self) -> Series<E> {
        self.floor = None;
        self
    }

    pub fn add<R: Ring<E = E>>(&self, ring: &R, o: &Series<E>) -> Series<E> {
        let floor = max_floor(self.floor, o.floor);
        let mut out = Series { floor, terms: BTreeMap::new() };
        for (&d, c) in self.terms.iter().chain(o.terms.iter()) {
            out.add_coeff(ring, d, c);
        }
        out
    }

    pub fn sub<R: Ring<E = E>>(&self, ring: &R, o: &Series<E>) -> Series<E> {
        self.add(ring, &o.neg(ring))
    }

    pub fn neg<R: Ring<E = E>>(&self, ring: &R) -> Series<E> {
        self.scale(ring, &Q::int(-1))
    }

    pub fn scale<R: Ring<E = E>>(&self, ring: &R, q: &Q) -> Series<E> {
        if q.is_zero() {
            return Series { floor: self.floor, terms: BTreeMap::new() };
        }
        Series { floor: self.floor, terms: self.terms.iter().map(|(&d, c)| (d, ring.scale(c, q))).collect() }
    }

    /// Multiplies by `z^n`.
    pub fn shift(&self, n: HalfInt) -> Series<E> {
        Series {
            floor: self.floor.map(|f| f + n.doubled),
            terms: self.terms.iter().map(|(&d, c)| (d + n.doubled, c.clone())).collect(),
        }
    }

    /// Applies `g` to every coefficient.
    pub fn map<F: Clone + PartialEq + Debug, R2: Ring<E = F>>(&self, ring: &R2, g: impl Fn(&E) -> F) -> Series<F> {
        let mut out = Series { floor: self.floor, terms: BTreeMap::new() };
        for (&d, c) in &self.terms {
            let v = g(c);
            if !ring.is_zero(&v) {
                out.terms.insert(d, v);
            }
        }
        out
    }

    /// Highest exponent that may carry a nonzero (possibly unknown)
    /// coefficient, doubled.
    fn reach(&self) -> Option<i64> {
        match (self.terms.keys().next_back(), self.floor) {
            (Some(&t), _) => Some(t),
            (None, Some(f)) => Some(f - 1),
            (None, None) => None,
        }
    }

    /// Floor of a product, doubled; `None` if exact.
    fn product_floor(&self, o: &Series<E>) -> Option<i64> {
        let a = match (self.floor, o.reach()) {
            (Some(f), Some(t)) => Some(f + t),
            _ => None,
        };
        let b = match (o.floor, self.reach()) {
            (Some(f), Some(t)) => Some(f + t),
            _ => None,
        };
        match (a, b) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    /// Product, computing only exponents `>= limit` (when given).
    pub fn mul_to<R: Ring<E = E>>(&self, ring: &R, o: &Series<E>, limit: Option<HalfInt>) -> Series<E> {
        let floor = max_floor(self.product_floor(o), limit.map(|l| l.doubled));
        let mut out = Series { floor, terms: BTreeMap::new() };
        if self.terms.is_empty() || o.terms.is_empty() {
            return out;
        }
        let lo = floor.unwrap_or(i64::MIN);
        let o_top = *o.terms.keys().next_back().unwrap();
        for (&a, x) in &self.terms {
            if a + o_top < lo {
                continue;
            }
            for (&b, y) in o.terms.range(lo.saturating_sub(a)..) {
                let p = ring.mul(x, y);
                out.add_coeff(ring, a + b, &p);
            }
        }
        out
    }

    pub fn mul<R: Ring<E = E>>(&self, ring: &R, o: &Series<E>) -> Series<E> {
        self.mul_to(ring, o, None)
    }

    /// Inverse of a series whose leading coefficient is an invertible scalar,
    /// computed down to `floor` (or the best available precision above it).
    pub fn inverse<R: Ring<E = E>>(&self, ring: &R, floor: HalfInt) -> Result<Series<E>, SeriesError> {
        let m = SeriesMatrix::from_rows(vec![vec![self.clone()]]);
        Ok(m.inverse(ring, floor)?.get(0, 0).clone())
    }

    /// True iff both agree at every exponent `>= floor` where both are known.
    /// True iff both series are known down to `floor` and agree there.
    pub fn agrees_with(&self, o: &Series<E>, floor: HalfInt) -> bool {
        let known = |f: Option<i64>| f.is_none_or(|f| f <= floor.doubled);
        known(self.floor) && known(o.floor) && self.first_difference(o, floor).is_none()
    }

    /// Largest exponent `>= floor` where the two series differ.
    pub fn first_difference(&self, o: &Series<E>, floor: HalfInt) -> Option<HalfInt> {
        let lo = [Some(floor.doubled), self.floor, o.floor].into_iter().flatten().max().unwrap();
        let keys: std::collections::BTreeSet<i64> =
            self.terms.range(lo..).chain(o.terms.range(lo..)).map(|(&k, _)| k).collect();
        keys.into_iter().rev().find(|k| self.terms.get(k) != o.terms.get(k)).map(HalfInt::from_doubled)
    }
}

fn max_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Matrix of series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<Series<E>>,
}

/// Which noncommutative determinant to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetMode {
    /// factors ordered by row index
    Row,
    /// factors ordered by column index
    Column,
}

impl<E: Clone + PartialEq + Debug> SeriesMatrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> SeriesMatrix<E> {
        SeriesMatrix { rows, cols, entries: vec![Series::zero_exact(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Series<E>>>) -> SeriesMatrix<E> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        SeriesMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn identity<R: Ring<E = E>>(ring: &R, n: usize) -> SeriesMatrix<E> {
        let mut m = SeriesMatrix::zeros(n, n);
        for k in 0..n {
            m.set(k, k, Series::constant(ring, ring.one()));
        }
        m
    }

    /// A scalar matrix viewed as a constant series matrix.
    pub fn from_scalar<R: Ring<E = E>>(ring: &R, s: &ScalarMatrix) -> SeriesMatrix<E> {
        let mut m = SeriesMatrix::zeros(s.rows(), s.cols());
        for r in 0..s.rows() {
            for c in 0..s.cols() {
                m.set(r, c, Series::constant(ring, ring.scalar(s.get(r, c).clone())));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Series<E> {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Series<E>) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Series<E>] {
        &self.entries
    }

    pub fn map_entries<F: Clone + PartialEq + Debug>(&self, g: impl Fn(&Series<E>) -> Series<F>) -> SeriesMatrix<F> {
        SeriesMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(g).collect() }
    }

    pub fn truncate(&self, floor: HalfInt) -> SeriesMatrix<E> {
        self.map_entries(|s| s.truncate(floor))
    }

    /// Lowest floor among the entries (`None` if all exact).
    pub fn floor(&self) -> Option<HalfInt> {
        self.entries.iter().filter_map(|s| s.floor()).max()
    }

    pub fn top(&self) -> Option<HalfInt> {
        self.entries.iter().filter_map(|s| s.top()).max()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SeriesMatrix<E> {
        let mut m = SeriesMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn add<R: Ring<E = E>>(&self, ring: &R, o: &SeriesMatrix<E>) -> SeriesMatrix<E> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(ring, b)).collect(),
        }
    }

    pub fn sub<R: Ring<E = E>>(&self, ring: &R, o: &SeriesMatrix<E>) -> SeriesMatrix<E> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.sub(ring, b)).collect(),
        }
    }

    pub fn mul_to<R: Ring<E = E>>(&self, ring: &R, o: &SeriesMatrix<E>, limit: Option<HalfInt>) -> SeriesMatrix<E> {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = SeriesMatrix::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for c in 0..o.cols {
                let mut acc: Option<Series<E>> = None;
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    let b = o.get(k, c);
                    if (a.is_zero() && a.is_exact()) || (b.is_zero() && b.is_exact()) {
                        continue;
                    }
                    let p = a.mul_to(ring, b, limit);
                    acc = Some(match acc {
                        None => p,
                        Some(x) => x.add(ring, &p),
                    });
                }
                let v = acc.unwrap_or_else(Series::zero_exact);
                out.set(r, c, v);
            }
        }
        out
    }

    pub fn mul<R: Ring<E = E>>(&self, ring: &R, o: &SeriesMatrix<E>) -> SeriesMatrix<E> {
        self.mul_to(ring, o, None)
    }

    /// Left multiplication by a scalar matrix.
    pub fn scalar_left<R: Ring<E = E>>(&self, ring: &R, s: &ScalarMatrix) -> SeriesMatrix<E> {
        SeriesMatrix::from_scalar(ring, s).mul(ring, self)
    }

    /// Right multiplication by a scalar matrix.
    pub fn scalar_right<R: Ring<E = E>>(&self, ring: &R, s: &ScalarMatrix) -> SeriesMatrix<E> {
        self.mul(ring, &SeriesMatrix::from_scalar(ring, s))
    }

    /// Inverse down to `floor`.
    ///
    /// If the leading form is `z^d C` with `C` an invertible scalar matrix,
    /// uses the geometric series `z^{-d} Σ_l (-C^{-1} R)^l C^{-1}`, with the
    /// number of terms fixed by the exponent drop of `R`.  Otherwise falls
    /// back to Gauss-Jordan elimination with scalar-leading pivots.
    pub fn inverse<R: Ring<E = E>>(&self, ring: &R, floor: HalfInt) -> Result<SeriesMatrix<E>, SeriesError> {
        if self.rows != self.cols {
            return Err(SeriesError::Dimension(format!("{}x{} matrix", self.rows, self.cols)));
        }
        match self.leading_scalar_form(ring) {
            Some((d, c)) => match c.inverse() {
                Some(cinv) => Ok(self.geometric_inverse(ring, floor, d, &cinv)),
                None => self.gauss_jordan_inverse(ring, floor),
            },
            None => self.gauss_jordan_inverse(ring, floor),
        }
    }

    /// `(d, C)` if the top-degree part of every entry is a scalar multiple of `z^d`.
    pub fn leading_scalar_form<R: Ring<E = E>>(&self, ring: &R) -> Option<(HalfInt, ScalarMatrix)> {
        let d = self.top()?;
        let mut c = ScalarMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if let Some(v) = self.get(r, k).coeff(d) {
                    c.set(r, k, ring.as_scalar(v)?);
                }
            }
        }
        Some((d, c))
    }

    fn geometric_inverse<R: Ring<E = E>>(
        &self,
        ring: &R,
        floor: HalfInt,
        d: HalfInt,
        cinv: &ScalarMatrix,
    ) -> SeriesMatrix<E> {
        let n = self.rows;
        // A = z^d (C + R) with R of degree <= -1/2; work with B = C^{-1} R
        let ci = SeriesMatrix::from_scalar(ring, cinv);
        let mut rest = self.shift_all(-d);
        for r in 0..n {
            for k in 0..n {
                let s = rest.get(r, k);
                let mut s2 = s.clone();
                s2.terms.remove(&0);
                rest.set(r, k, s2);
            }
        }
        // precision of A^{-1} is limited by that of A: error terms sit below floor(A) - 2d
        let natural = self.floor().map(|f| f - d - d);
        let target = match natural {
            Some(nf) if nf > floor => nf,
            _ => floor,
        };
        let inner = target + d; // exponent floor for Σ (-B)^l C^{-1}
        let b = ci.mul_to(ring, &rest, Some(inner)).map_entries(|s| s.neg(ring));
        let mut term = ci.truncate(inner);
        let mut acc = term.clone();
        loop {
            term = b.mul_to(ring, &term, Some(inner));
            if term.entries.iter().all(|s| s.is_zero()) {
                break;
            }
            acc = acc.add(ring, &term);
        }
        acc.shift_all(-d).map_entries(|s| s.truncate(target))
    }

    fn gauss_jordan_inverse<R: Ring<E = E>>(&self, ring: &R, floor: HalfInt) -> Result<SeriesMatrix<E>, SeriesError> {
        let n = self.rows;
        // the working floor is lowered until the result reaches `floor`
        let spread = {
            let top = self.top().unwrap_or(HalfInt::ZERO);
            let bottom = self.entries.iter().filter_map(|s| s.top()).min().unwrap_or(HalfInt::ZERO);
            (top - bottom).doubled.max(0) + 2
        };
        let mut extra = spread * n as i64;
        for _ in 0..6 {
            let work = HalfInt::from_doubled(floor.doubled - extra);
            let out = self.gauss_jordan_at(ring, work)?;
            let reached = out.floor();
            match reached {
                Some(f) if f > floor => {
                    if self.floor().is_some() && extra > spread * n as i64 * 8 {
                        return Err(SeriesError::Precision { requested: floor, available: f });
                    }
                    extra *= 2;
                }
                _ => return Ok(out.truncate(floor)),
            }
        }
        Err(SeriesError::NotInvertible("precision did not converge".into()))
    }

    fn gauss_jordan_at<R: Ring<E = E>>(&self, ring: &R, work: HalfInt) -> Result<SeriesMatrix<E>, SeriesError> {
        let n = self.rows;
        let mut a: Vec<Vec<Series<E>>> =
            (0..n).map(|r| (0..n).map(|c| self.get(r, c).truncate(work)).collect()).collect();
        let mut inv: Vec<Vec<Series<E>>> =
            (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| {
                            if r == c {
                                Series::constant(ring, ring.one()).truncate(work)
                            } else {
                                Series::zero_to(work)
                            }
                        })
                        .collect()
                })
                .collect();
        for col in 0..n {
            // pivot: scalar leading coefficient, highest top exponent
            let mut best: Option<(usize, HalfInt)> = None;
            for r in col..n {
                let s = &a[r][col];
                if let Some(t) = s.top() {
                    if ring.as_scalar(s.coeff(t).unwrap()).is_some() && best.is_none_or(|(_, bt)| t > bt) {
                        best = Some((r, t));
                    }
                }
            }
            let (p, _) = best.ok_or_else(|| {
                SeriesError::NotInvertible(format!("no pivot with scalar leading coefficient in column {col}"))
            })?;
            a.swap(p, col);
            inv.swap(p, col);
            let pinv = a[col][col].inverse_scalar_leading(ring, work)?;
            for k in 0..n {
                a[col][k] = pinv.mul_to(ring, &a[col][k], Some(work));
                inv[col][k] = pinv.mul_to(ring, &inv[col][k], Some(work));
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for k in 0..n {
                    let t = factor.mul_to(ring, &a[col][k], Some(work));
                    a[r][k] = a[r][k].sub(ring, &t);
                    let t = factor.mul_to(ring, &inv[col][k], Some(work));
                    inv[r][k] = inv[r][k].sub(ring, &t);
                }
            }
        }
        Ok(SeriesMatrix::from_rows(inv))
    }

    /// Multiplies every entry by `z^n`.
    pub fn shift_all(&self, n: HalfInt) -> SeriesMatrix<E> {
        self.map_entries(|s| s.shift(n))
    }

    /// Exact inverse of a matrix `𝟙 - N` with `N` strictly upper triangular:
    /// `Σ_{t<n} N^t`.
    pub fn unitriangular_inverse<R: Ring<E = E>>(&self, ring: &R) -> Result<SeriesMatrix<E>, SeriesError> {
        let n = self.rows;
        if n != self.cols {
            return Err(SeriesError::Dimension(format!("{}x{} matrix", self.rows, self.cols)));
        }
        let one = Series::constant(ring, ring.one());
        for r in 0..n {
            for c in 0..=r {
                let e = self.get(r, c);
                let ok = if r == c { e == &one } else { e.is_zero() && e.is_exact() };
                if !ok {
                    return Err(SeriesError::NotInvertible("not unit upper triangular".into()));
                }
            }
        }
        let nil = SeriesMatrix::identity(ring, n).sub(ring, self);
        let mut acc = SeriesMatrix::identity(ring, n);
        let mut pow = SeriesMatrix::identity(ring, n);
        for _ in 1..n {
            pow = pow.mul(ring, &nil);
            acc = acc.add(ring, &pow);
        }
        Ok(acc)
    }

    /// `rdet` or `cdet` by permutation expansion.
    pub fn noncomm_det<R: Ring<E = E>>(&self, ring: &R, mode: DetMode) -> Result<Series<E>, SeriesError> {
        if self.rows != self.cols {
            return Err(SeriesError::Dimension(format!("{}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut acc: Series<E> = Series::zero_exact();
        for (perm, sign) in permutations(n) {
            let mut prod = Series::constant(ring, ring.one());
            for k in 0..n {
                let entry = match mode {
                    DetMode::Row => self.get(k, perm[k]),
                    DetMode::Column => self.get(perm[k], k),
                };
                prod = prod.mul(ring, entry);
                if prod.is_zero() && prod.is_exact() {
                    break;
                }
            }
            acc = acc.add(ring, &prod.scale(ring, &Q::int(sign)));
        }
        Ok(acc)
    }
}

impl<E: Clone + PartialEq + Debug> Series<E> {
    fn inverse_scalar_leading<R: Ring<E = E>>(&self, ring: &R, work: HalfInt) -> Result<Series<E>, SeriesError> {
        let t = self.top().ok_or_else(|| SeriesError::NotInvertible("zero series".into()))?;
        let c = ring
            .as_scalar(self.coeff(t).unwrap())
            .ok_or_else(|| SeriesError::NotInvertible("leading coefficient is not a scalar".into()))?;
        let cinv = c.recip().unwrap();
        let mut cm = ScalarMatrix::zeros(1, 1);
        cm.set(0, 0, cinv);
        let m = SeriesMatrix::from_rows(vec![vec![self.clone()]]);
        Ok(m.geometric_inverse(ring, work, t, &cm).get(0, 0).clone())
    }
}

/// All permutations of `0..n` with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        let n = used.len();
        if cur.len() == n {
            out.push((cur.clone(), sign));
            return;
        }
        for v in 0..n {
            if !used[v] {
                // parity: count already placed elements greater than v
                let inv = cur.iter().filter(|&&u| u > v).count() as i64;
                used[v] = true;
                cur.push(v);
                rec(cur, used, if inv % 2 == 0 { sign } else { -sign }, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], 1, &mut out);
    out
}

/// Row/column index sets selected by `I_1` (`N×m`, columns) and `J_1` (`m×N`, rows).
fn selector_sets(i1: &ScalarMatrix, j1: &ScalarMatrix) -> Result<(Vec<usize>, Vec<usize>), SeriesError> {
    let pick = |m: &ScalarMatrix, by_rows: bool| -> Option<Vec<usize>> {
        let (outer, inner) = if by_rows { (m.cols(), m.rows()) } else { (m.rows(), m.cols()) };
        (0..outer)
            .map(|o| {
                let hits: Vec<usize> = (0..inner)
                    .filter(|&k| {
                        let v = if by_rows { m.get(k, o) } else { m.get(o, k) };
                        !v.is_zero()
                    })
                    .collect();
                match hits.as_slice() {
                    [k] if (if by_rows { m.get(*k, o) } else { m.get(o, *k) }).is_one() => Some(*k),
                    _ => None,
                }
            })
            .collect()
    };
    let rows = pick(i1, true).ok_or_else(|| SeriesError::Dimension("I_1 is not a selector".into()))?;
    let cols = pick(j1, false).ok_or_else(|| SeriesError::Dimension("J_1 is not a selector".into()))?;
    Ok((rows, cols))
}

/// `|A|_{I_1 J_1} = (J_1 A^{-1} I_1)^{-1}`, from the definition.
///
/// The inner inverse is taken deep enough that the outer inversion, whose
/// precision loss is twice the (negative) top degree of `J_1 A^{-1} I_1`,
/// still reaches `floor`.
pub fn quasideterminant<R: Ring>(
    ring: &R,
    a: &SeriesMatrix<R::E>,
    i1: &ScalarMatrix,
    j1: &ScalarMatrix,
    floor: HalfInt,
) -> Result<SeriesMatrix<R::E>, SeriesError> {
    // find the top degree of J A^{-1} I, lowering the probe floor as needed
    let mut probe_floor = floor;
    let (b, t) = loop {
        let b = a.inverse(ring, probe_floor)?.scalar_left(ring, j1).scalar_right(ring, i1);
        if let Some(t) = b.top() {
            break (b, t);
        }
        if probe_floor.doubled < floor.doubled - 4 * (a.rows() as i64 + 2) {
            return Err(SeriesError::NotInvertible("J A^{-1} I vanishes to the floor".into()));
        }
        probe_floor = probe_floor - HalfInt::int(1);
    };
    let inner = if t.doubled < 0 { floor + t + t } else { floor };
    let b = if inner < probe_floor { a.inverse(ring, inner)?.scalar_left(ring, j1).scalar_right(ring, i1) } else { b };
    Ok(b.inverse(ring, floor)?.truncate(floor))
}

/// `|A|_{I_1 J_1} = A_{IJ} - A_{IJ^c} (A_{I^cJ^c})^{-1} A_{I^cJ}` where `I`
/// (rows) and `J` (columns) are the index sets picked by `I_1` and `J_1`.
pub fn quasideterminant_submatrix<R: Ring>(
    ring: &R,
    a: &SeriesMatrix<R::E>,
    i1: &ScalarMatrix,
    j1: &ScalarMatrix,
    floor: HalfInt,
) -> Result<SeriesMatrix<R::E>, SeriesError> {
    let (rows, cols) = selector_sets(i1, j1)?;
    let n = a.rows();
    let rows_c: Vec<usize> = (0..n).filter(|k| !rows.contains(k)).collect();
    let cols_c: Vec<usize> = (0..n).filter(|k| !cols.contains(k)).collect();
    let a_ij = a.submatrix(&rows, &cols);
    if rows_c.is_empty() {
        return Ok(a_ij.truncate(floor));
    }
    let a_ijc = a.submatrix(&rows, &cols_c);
    let a_icj = a.submatrix(&rows_c, &cols);
    let inner = a.submatrix(&rows_c, &cols_c);
    // the outer factors have degree <= top(A); lower the inner floor accordingly
    let top = a.top().unwrap_or(HalfInt::ZERO).doubled.max(0);
    let inner_floor = HalfInt::from_doubled(floor.doubled - 2 * top);
    let inv = inner.inverse(ring, inner_floor)?;
    let corr =
        a_ijc.mul_to(ring, &inv, Some(HalfInt::from_doubled(floor.doubled - top))).mul_to(ring, &a_icj, Some(floor));
    Ok(a_ij.sub(ring, &corr).truncate(floor))
}

/// Coefficients of a series in two variables `z`, `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<E> {
    pub floor_z: HalfInt,
    pub floor_w: HalfInt,
    /// (doubled z exponent, doubled w exponent) -> coefficient
    pub terms: BTreeMap<(i64, i64), E>,
}

/// Where the Yangian identity fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YangianWitness {
    /// 0-based `(i, j, h, k)`
    pub indices: (usize, usize, usize, usize),
    pub zpow: HalfInt,
    pub wpow: HalfInt,
}

/// Outcome of a Yangian identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YangianReport {
    pub pass: bool,
    /// number of (quadruple, z-power, w-power) coefficients compared
    pub checked: usize,
    pub witness: Option<YangianWitness>,
    /// exponents `>= window` in both variables were compared
    pub window: HalfInt,
}

/// Memoized products of series coefficients.
struct ProductTable<'a, R: Ring> {
    ring: &'a R,
    a: &'a SeriesMatrix<R::E>,
    cache: FxHashMap<(usize, i64, usize, i64), R::E>,
}

impl<'a, R: Ring> ProductTable<'a, R> {
    /// `A_{e1,x} · A_{e2,y}` (entry indices flattened, doubled exponents).
    fn get(&mut self, e1: usize, x: i64, e2: usize, y: i64) -> R::E {
        let key = (e1, x, e2, y);
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let u = self.a.entries[e1].terms.get(&x);
        let v = self.a.entries[e2].terms.get(&y);
        let p = match (u, v) {
            (Some(u), Some(v)) => self.ring.mul(u, v),
            _ => self.ring.zero(),
        };
        self.cache.insert(key, p.clone());
        p
    }
}

/// Checks `(z-w)[A_ij(z), A_hk(w)] = A_hj(w)A_ik(z) - A_hj(z)A_ik(w)`
/// coefficientwise, for all index quadruples and all exponent pairs whose
/// inputs are known, i.e. both exponents at least `floor(A) + 1`.
///
/// The comparison stops at the first failure.
pub fn yangian_identity_check<R: Ring>(ring: &R, a: &SeriesMatrix<R::E>, floor: HalfInt) -> YangianReport {
    let base = a.floor().map_or(floor, |f| f.max(floor));
    let window = base + HalfInt::int(1);
    let top = a.top().unwrap_or(HalfInt::ZERO) + HalfInt::int(1);
    // exponents on the half-integer grid actually used by A
    let step = if a.entries.iter().all(|s| s.terms.keys().all(|k| k % 2 == 0)) && window.is_integer() { 2 } else { 1 };
    let exps: Vec<i64> = (window.doubled..=top.doubled).rev().filter(|e| (e - window.doubled) % step == 0).collect();
    let (m, n) = (a.rows(), a.cols());
    let idx = |r: usize, c: usize| r * n + c;
    let mut table = ProductTable { ring, a, cache: FxHashMap::default() };
    let mut checked = 0;
    for i in 0..m {
        for j in 0..n {
            for h in 0..m {
                for k in 0..n {
                    for &x in &exps {
                        for &y in &exps {
                            // (z-w)C: coefficient of z^x w^y is C_{x-1,y} - C_{x,y-1}
                            let c1 = ring.sub(
                                &table.get(idx(i, j), x - 2, idx(h, k), y),
                                &table.get(idx(h, k), y, idx(i, j), x - 2),
                            );
                            let c2 = ring.sub(
                                &table.get(idx(i, j), x, idx(h, k), y - 2),
                                &table.get(idx(h, k), y - 2, idx(i, j), x),
                            );
                            let lhs = ring.sub(&c1, &c2);
                            let rhs = ring
                                .sub(&table.get(idx(h, j), y, idx(i, k), x), &table.get(idx(h, j), x, idx(i, k), y));
                            checked += 1;
                            if lhs != rhs && !ring.is_zero(&ring.sub(&lhs, &rhs)) {
                                return YangianReport {
                                    pass: false,
                                    checked,
                                    witness: Some(YangianWitness {
                                        indices: (i, j, h, k),
                                        zpow: HalfInt::from_doubled(x),
                                        wpow: HalfInt::from_doubled(y),
                                    }),
                                    window,
                                };
                            }
                        }
                    }
                }
            }
        }
    }
    YangianReport { pass: true, checked, witness: None, window }
}

/// Bivariate form of `(z-w)[A_ij(z), A_hk(w)]`, for reporting.
pub fn yangian_lhs<R: Ring>(
    ring: &R,
    a: &SeriesMatrix<R::E>,
    (i, j, h, k): (usize, usize, usize, usize),
    floor: HalfInt,
) -> BiSeries<R::E> {
    let x_ser = a.get(i, j);
    let y_ser = a.get(h, k);
    let mut terms: BTreeMap<(i64, i64), R::E> = BTreeMap::new();
    let mut add = |key: (i64, i64), v: R::E| {
        let e = terms.entry(key).or_insert_with(|| ring.zero());
        *e = ring.add(e, &v);
    };
    for (x, u) in x_ser.terms() {
        for (y, v) in y_ser.terms() {
            let c = ring.commutator(u, v);
            if ring.is_zero(&c) {
                continue;
            }
            add((x.doubled + 2, y.doubled), c.clone());
            add((x.doubled, y.doubled + 2), ring.neg(&c));
        }
    }
    let lo = floor.doubled + 2;
    terms.retain(|&(x, y), v| x >= lo && y >= lo && !ring.is_zero(v));
    let f = HalfInt::from_doubled(lo);
    BiSeries { floor_z: f, floor_w: f, terms }
}

/// Checks `(z-w)[A_ij(z), (A^{-1})_hk(w)] = -δ_hj Σ_t A_it(z)(A^{-1})_tk(w)
/// + δ_ik Σ_t (A^{-1})_ht(w) A_tj(z)` for every quadruple, with `A` exact
/// and `A^{-1}` known down to `floor`.  Returns the first failing quadruple.
pub fn inverse_commutator_check<R: Ring>(
    ring: &R,
    a: &SeriesMatrix<R::E>,
    ainv: &SeriesMatrix<R::E>,
    floor: HalfInt,
) -> Option<(usize, usize, usize, usize)> {
    let n = a.rows();
    // compare in a window where every product is exact: w >= floor + 1,
    // z up to the top of A
    let lo_w = floor.doubled + 2;
    let check_floor_z = a.entries.iter().filter_map(|s| s.bottom()).min().unwrap_or(HalfInt::ZERO).doubled;
    for i in 0..n {
        for j in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let mut lhs: BTreeMap<(i64, i64), R::E> = BTreeMap::new();
                    let mut rhs: BTreeMap<(i64, i64), R::E> = BTreeMap::new();
                    let push = |m: &mut BTreeMap<(i64, i64), R::E>, key: (i64, i64), v: R::E| {
                        let e = m.entry(key).or_insert_with(|| ring.zero());
                        *e = ring.add(e, &v);
                    };
                    for (x, u) in a.get(i, j).terms() {
                        for (y, v) in ainv.get(h, k).terms() {
                            let c = ring.commutator(u, v);
                            push(&mut lhs, (x.doubled + 2, y.doubled), c.clone());
                            push(&mut lhs, (x.doubled, y.doubled + 2), ring.neg(&c));
                        }
                    }
                    for t in 0..n {
                        if h == j {
                            for (x, u) in a.get(i, t).terms() {
                                for (y, v) in ainv.get(t, k).terms() {
                                    push(&mut rhs, (x.doubled, y.doubled), ring.neg(&ring.mul(u, v)));
                                }
                            }
                        }
                        if i == k {
                            for (y, v) in ainv.get(h, t).terms() {
                                for (x, u) in a.get(t, j).terms() {
                                    push(&mut rhs, (x.doubled, y.doubled), ring.mul(v, u));
                                }
                            }
                        }
                    }
                    let keys: std::collections::BTreeSet<(i64, i64)> = lhs
                        .keys()
                        .chain(rhs.keys())
                        .copied()
                        .filter(|&(x, y)| y >= lo_w && x >= check_floor_z)
                        .collect();
                    for key in keys {
                        let l = lhs.get(&key).cloned().unwrap_or_else(|| ring.zero());
                        let r = rhs.get(&key).cloned().unwrap_or_else(|| ring.zero());
                        if !ring.is_zero(&ring.sub(&l, &r)) {
                            return Some((i, j, h, k));
                        }
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: i64) -> HalfInt {
        HalfInt::int(n)
    }

    fn poly(coeffs: &[(i64, i64)]) -> Series<Q> {
        Series::from_terms(&QRing, None, coeffs.iter().map(|&(e, c)| (h(e), Q::int(c))))
    }

    #[test]
    fn product_and_inverse_of_scalars() {
        let z = poly(&[(1, 1)]);
        let zinv = z.inverse(&QRing, h(-10)).unwrap();
        assert_eq!(zinv, Series::from_terms(&QRing, Some(h(-10)), [(h(-1), Q::ONE)]));
        let one = z.mul(&QRing, &zinv);
        assert_eq!(one.coeff(h(0)), Some(&Q::ONE));
        assert_eq!(one.num_terms(), 1);
    }

    #[test]
    fn geometric_inverse_of_z_minus_one() {
        let s = poly(&[(1, 1), (0, -1)]);
        let inv = s.inverse(&QRing, h(-6)).unwrap();
        for e in -6..=-1 {
            assert_eq!(inv.coeff(h(e)), Some(&Q::ONE));
        }
        assert_eq!(inv.floor(), Some(h(-6)));
    }

    #[test]
    fn precision_bookkeeping() {
        let x = poly(&[(0, 1), (-1, 2)]).truncate(h(-3));
        let y = poly(&[(2, 1)]);
        let p = x.mul(&QRing, &y);
        assert_eq!(p.floor(), Some(h(-1)));
        assert_eq!(p.coeff(h(2)), Some(&Q::ONE));
    }

    #[test]
    fn permutation_signs() {
        let ps = permutations(3);
        assert_eq!(ps.len(), 6);
        let total: i64 = ps.iter().map(|p| p.1).sum();
        assert_eq!(total, 0);
        assert!(ps.contains(&(vec![1, 2, 0], 1)));
        assert!(ps.contains(&(vec![1, 0, 2], -1)));
    }

    #[test]
    fn commutative_two_by_two_quasideterminant() {
        // A = [[a, b], [c, d]] with I selecting row 0, J column 1:
        // |A| = b - a c^{-1} d
        let m = SeriesMatrix::from_rows(vec![
            vec![poly(&[(0, 2)]), poly(&[(0, 3)])],
            vec![poly(&[(0, 5)]), poly(&[(1, 1)])],
        ]);
        let mut i1 = ScalarMatrix::zeros(2, 1);
        i1.set(0, 0, Q::ONE);
        let mut j1 = ScalarMatrix::zeros(1, 2);
        j1.set(0, 1, Q::ONE);
        let q = quasideterminant(&QRing, &m, &i1, &j1, h(-4)).unwrap();
        let s = quasideterminant_submatrix(&QRing, &m, &i1, &j1, h(-4)).unwrap();
        // b - a c^{-1} d = 3 - (2/5) z
        let want = Series::from_terms(&QRing, None, [(h(0), Q::int(3)), (h(1), Q::new(-2, 5))]);
        assert!(q.get(0, 0).agrees_with(&want, h(-4)));
        assert!(s.get(0, 0).agrees_with(&want, h(-4)));
    }

    #[test]
    fn diagonal_determinants() {
        let m = SeriesMatrix::from_rows(vec![vec![poly(&[(1, 1)]), poly(&[])], vec![poly(&[]), poly(&[(0, 3)])]]);
        let r = m.noncomm_det(&QRing, DetMode::Row).unwrap();
        let c = m.noncomm_det(&QRing, DetMode::Column).unwrap();
        assert_eq!(r, poly(&[(1, 3)]));
        assert_eq!(r, c);
    }

    #[test]
    fn scalar_yangian_is_trivial() {
        let m = SeriesMatrix::from_rows(vec![vec![poly(&[(1, 1), (0, 4)])]]);
        assert!(yangian_identity_check(&QRing, &m, h(-3)).pass);
    }
}
