//! Partitions of N, their pyramids and the constant matrices attached to them.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PyramidError {
    #[error("invalid partition `{0}`: {1}")]
    InvalidPartition(String, &'static str),
    #[error("box ({0},{1}) is not in the pyramid")]
    BoxOutOfRange(usize, usize),
}

/// A number in `(1/2)Z`, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    pub doubled: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };

    pub const fn from_doubled(doubled: i64) -> HalfInt {
        HalfInt { doubled }
    }

    pub const fn int(n: i64) -> HalfInt {
        HalfInt { doubled: 2 * n }
    }

    pub fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    /// The value as an exact rational.
    pub fn to_q(self) -> Q {
        Q::new(self.doubled, 2)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt::from_doubled(self.doubled + o.doubled)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt::from_doubled(self.doubled - o.doubled)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_doubled(-self.doubled)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl FromStr for HalfInt {
    type Err = PyramidError;

    /// Accepts `n`, `n/2` or `n.5`.
    fn from_str(s: &str) -> Result<HalfInt, PyramidError> {
        let s = s.trim();
        let bad = || PyramidError::InvalidPartition(s.to_string(), "not a half-integer");
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            return match d.trim() {
                "1" => Ok(HalfInt::int(n)),
                "2" => Ok(HalfInt::from_doubled(n)),
                _ => Err(bad()),
            };
        }
        if let Some(stripped) = s.strip_suffix(".5") {
            let n: i64 = stripped.parse().map_err(|_| bad())?;
            let neg = stripped.starts_with('-');
            return Ok(HalfInt::from_doubled(2 * n + if neg { -1 } else { 1 }));
        }
        s.parse::<i64>().map(HalfInt::int).map_err(|_| bad())
    }
}

/// A box `(i,h)` of the pyramid, 1-based: row `i`, column `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoxIndex {
    pub i: usize,
    pub h: usize,
}

impl BoxIndex {
    pub const fn new(i: usize, h: usize) -> BoxIndex {
        BoxIndex { i, h }
    }
}

impl fmt::Display for BoxIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.h)
    }
}

/// Where an element `e_{a,b}` sits in the Dynkin grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GradeClass {
    /// degree `<= 0`
    NonPositive,
    /// degree `1/2`
    Half,
    /// degree `>= 1`
    AtLeastOne,
}

impl GradeClass {
    pub fn of(degree: HalfInt) -> GradeClass {
        match degree.doubled {
            d if d <= 0 => GradeClass::NonPositive,
            1 => GradeClass::Half,
            _ => GradeClass::AtLeastOne,
        }
    }
}

/// A partition `p_1 >= ... >= p_r > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Validates `parts`; unsorted input is rejected rather than sorted.
    pub fn new(parts: Vec<usize>) -> Result<Partition, PyramidError> {
        let shown = parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        if parts.is_empty() {
            return Err(PyramidError::InvalidPartition(shown, "no parts"));
        }
        if parts.contains(&0) {
            return Err(PyramidError::InvalidPartition(shown, "parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PyramidError::InvalidPartition(shown, "parts must be weakly decreasing"));
        }
        if parts.iter().sum::<usize>() > 16 {
            return Err(PyramidError::InvalidPartition(shown, "N > 16 is not supported"));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `N`, the sum of the parts.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn p1(&self) -> usize {
        self.parts[0]
    }

    /// Multiplicity of the largest part.
    pub fn r1(&self) -> usize {
        self.parts.iter().take_while(|&&p| p == self.parts[0]).count()
    }

    pub fn part(&self, i: usize) -> usize {
        self.parts[i - 1]
    }

    pub fn contains(&self, b: BoxIndex) -> bool {
        b.i >= 1 && b.i <= self.r() && b.h >= 1 && b.h <= self.part(b.i)
    }

    /// All boxes in lexicographic order.
    pub fn boxes(&self) -> Vec<BoxIndex> {
        let mut out = Vec::with_capacity(self.n());
        for (i, &p) in self.parts.iter().enumerate() {
            for h in 1..=p {
                out.push(BoxIndex::new(i + 1, h));
            }
        }
        out
    }

    /// Position of `b` in [`Partition::boxes`].
    pub fn position(&self, b: BoxIndex) -> Result<usize, PyramidError> {
        if !self.contains(b) {
            return Err(PyramidError::BoxOutOfRange(b.i, b.h));
        }
        Ok(self.parts[..b.i - 1].iter().sum::<usize>() + b.h - 1)
    }

    pub fn x_coord(&self, b: BoxIndex) -> Result<HalfInt, PyramidError> {
        if !self.contains(b) {
            return Err(PyramidError::BoxOutOfRange(b.i, b.h));
        }
        Ok(HalfInt::from_doubled(self.part(b.i) as i64 + 1 - 2 * b.h as i64))
    }

    /// `ad x` eigenvalue of `e_{a,b}`.
    pub fn grading_degree(&self, a: BoxIndex, b: BoxIndex) -> Result<HalfInt, PyramidError> {
        Ok(self.x_coord(a)? - self.x_coord(b)?)
    }

    /// Diagonal of the shift matrix `D` in box order.
    pub fn shift_entries(&self) -> Vec<i64> {
        let boxes = self.boxes();
        let xs: Vec<i64> = boxes.iter().map(|&b| self.x_coord(b).unwrap().doubled).collect();
        xs.iter().map(|&x| -(xs.iter().filter(|&&y| y - x >= 2).count() as i64)).collect()
    }

    pub fn shift_matrix(&self) -> ScalarMatrix {
        let n = self.n();
        let mut m = ScalarMatrix::zeros(n, n);
        for (k, d) in self.shift_entries().into_iter().enumerate() {
            m.set(k, k, Q::int(d));
        }
        m
    }

    pub fn structure_matrices(&self) -> StructureMatrices {
        let n = self.n();
        let r1 = self.r1();
        let p1 = self.p1();
        let mut f = ScalarMatrix::zeros(n, n);
        for b in self.boxes() {
            if b.h < self.part(b.i) {
                let row = self.position(BoxIndex::new(b.i, b.h + 1)).unwrap();
                let col = self.position(b).unwrap();
                f.set(row, col, Q::ONE);
            }
        }
        let mut i1 = ScalarMatrix::zeros(n, r1);
        let mut j1 = ScalarMatrix::zeros(r1, n);
        for i in 1..=r1 {
            i1.set(self.position(BoxIndex::new(i, 1)).unwrap(), i - 1, Q::ONE);
            j1.set(i - 1, self.position(BoxIndex::new(i, p1)).unwrap(), Q::ONE);
        }
        let s1 = i1.mul(&j1);
        StructureMatrices { f, i1, j1, s1 }
    }

    /// The basis `f_{ij;k}` of the centralizer of `f`.
    pub fn gf_basis(&self) -> Vec<GfBasisElement> {
        let mut out = Vec::new();
        for i in 1..=self.r() {
            for j in 1..=self.r() {
                let pi = self.part(i);
                let pj = self.part(j);
                for k in 0..pi.min(pj) {
                    let terms = (0..=k).map(|h| (BoxIndex::new(i, pi + h - k), BoxIndex::new(j, h + 1))).collect();
                    out.push(GfBasisElement { i, j, k, terms });
                }
            }
        }
        out
    }

    /// True for `(N)`.
    pub fn is_principal(&self) -> bool {
        self.r() == 1
    }

    /// True when all parts are equal.
    pub fn is_rectangular(&self) -> bool {
        self.r1() == self.r()
    }

    /// True for `(2,1,...,1)`.
    pub fn is_minimal(&self) -> bool {
        self.p1() == 2 && self.r1() == 1
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = PyramidError;

    /// Comma separated positive integers, e.g. `3,2,1`.
    fn from_str(s: &str) -> Result<Partition, PyramidError> {
        let parts: Result<Vec<usize>, _> =
            s.trim().trim_matches(|c| c == '(' || c == ')').split(',').map(|t| t.trim().parse::<usize>()).collect();
        match parts {
            Ok(p) => Partition::new(p),
            Err(_) => Err(PyramidError::InvalidPartition(s.to_string(), "not a list of integers")),
        }
    }
}

/// `f_{ij;k}` as a sum of elementary matrices `e_{a,b}` with coefficient one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfBasisElement {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub terms: Vec<(BoxIndex, BoxIndex)>,
}

/// `F`, `I_1`, `J_1` and `S_1 = I_1 J_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureMatrices {
    pub f: ScalarMatrix,
    pub i1: ScalarMatrix,
    pub j1: ScalarMatrix,
    pub s1: ScalarMatrix,
}

/// Dense matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Q>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize) -> ScalarMatrix {
        ScalarMatrix { rows, cols, entries: vec![Q::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> ScalarMatrix {
        let mut m = ScalarMatrix::zeros(n, n);
        for k in 0..n {
            m.set(k, k, Q::ONE);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mul(&self, o: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = ScalarMatrix::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let v = out.get(r, c) + &(a * o.get(k, c));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn diagonal(&self) -> Vec<Q> {
        (0..self.rows.min(self.cols)).map(|k| self.get(k, k).clone()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    /// Rank over the rationals (Gaussian elimination).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| !m.get(r, c).is_zero()) else { continue };
            for k in 0..m.cols {
                let tmp = m.get(p, k).clone();
                let other = m.get(rank, k).clone();
                m.set(p, k, other);
                m.set(rank, k, tmp);
            }
            let piv = m.get(rank, c).clone();
            for r in 0..m.rows {
                if r != rank && !m.get(r, c).is_zero() {
                    let factor = m.get(r, c) / &piv;
                    for k in 0..m.cols {
                        let v = m.get(r, k) - &(&factor * m.get(rank, k));
                        m.set(r, k, v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse, or `None` if singular.
    pub fn inverse(&self) -> Option<ScalarMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = ScalarMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero())?;
            for k in 0..n {
                let (x, y) = (a.get(p, k).clone(), a.get(c, k).clone());
                a.set(p, k, y);
                a.set(c, k, x);
                let (x, y) = (inv.get(p, k).clone(), inv.get(c, k).clone());
                inv.set(p, k, y);
                inv.set(c, k, x);
            }
            let piv = a.get(c, c).recip().unwrap();
            for k in 0..n {
                let v = a.get(c, k) * &piv;
                a.set(c, k, v);
                let v = inv.get(c, k) * &piv;
                inv.set(c, k, v);
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let factor = a.get(r, c).clone();
                for k in 0..n {
                    let v = a.get(r, k) - &(&factor * a.get(c, k));
                    a.set(r, k, v);
                    let v = inv.get(r, k) - &(&factor * inv.get(c, k));
                    inv.set(r, k, v);
                }
            }
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn boxes_are_lexicographic() {
        let b = p("3,2,1").boxes();
        let want = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)];
        assert_eq!(b, want.iter().map(|&(i, h)| BoxIndex::new(i, h)).collect::<Vec<_>>());
        assert_eq!(p("1,1").boxes(), vec![BoxIndex::new(1, 1), BoxIndex::new(2, 1)]);
    }

    #[test]
    fn x_coordinates() {
        let two = p("2");
        assert_eq!(two.x_coord(BoxIndex::new(1, 1)).unwrap(), HalfInt::from_doubled(1));
        assert_eq!(two.x_coord(BoxIndex::new(1, 2)).unwrap(), HalfInt::from_doubled(-1));
        assert_eq!(p("3,2,1").x_coord(BoxIndex::new(1, 3)).unwrap(), HalfInt::int(-1));
        assert!(two.x_coord(BoxIndex::new(2, 1)).is_err());
    }

    #[test]
    fn grading_degrees() {
        let two = p("2");
        let d = two.grading_degree(BoxIndex::new(1, 1), BoxIndex::new(1, 2)).unwrap();
        assert_eq!(d, HalfInt::int(1));
        let d = p("2,1").grading_degree(BoxIndex::new(2, 1), BoxIndex::new(1, 2)).unwrap();
        assert_eq!(d, HalfInt::from_doubled(1));
    }

    #[test]
    fn shift_matrix_examples() {
        assert_eq!(p("3,2,1").shift_entries(), vec![0, -1, -4, 0, -2, -1]);
        assert_eq!(p("2").shift_entries(), vec![0, -1]);
        assert_eq!(p("1,1,1").shift_entries(), vec![0, 0, 0]);
        assert!(p("3,2,1").shift_matrix().is_diagonal());
    }

    #[test]
    fn unsorted_rejected() {
        assert!("1,2".parse::<Partition>().is_err());
        assert!("".parse::<Partition>().is_err());
        assert!("2,0".parse::<Partition>().is_err());
    }

    #[test]
    fn structure_matrices_for_two() {
        let s = p("2").structure_matrices();
        assert_eq!(s.f.get(1, 0), &Q::ONE);
        assert_eq!(s.f.get(0, 1), &Q::ZERO);
        assert_eq!(s.i1.get(0, 0), &Q::ONE);
        assert_eq!(s.j1.get(0, 1), &Q::ONE);
        assert_eq!(s.s1.rank(), 1);
        assert_eq!(p("3,3,1").structure_matrices().s1.rank(), 2);
    }

    #[test]
    fn gf_basis_counts() {
        assert_eq!(p("2,1").gf_basis().len(), 5);
        let two = p("2").gf_basis();
        assert_eq!(two[0].terms, vec![(BoxIndex::new(1, 2), BoxIndex::new(1, 1))]);
        assert_eq!(
            two[1].terms,
            vec![(BoxIndex::new(1, 1), BoxIndex::new(1, 1)), (BoxIndex::new(1, 2), BoxIndex::new(1, 2))]
        );
    }

    #[test]
    fn half_int_parsing() {
        assert_eq!("-8".parse::<HalfInt>().unwrap(), HalfInt::int(-8));
        assert_eq!("-17/2".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(-17));
        assert_eq!("-8.5".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(-17));
        assert_eq!(HalfInt::from_doubled(-3).to_string(), "-3/2");
    }
}
