//! The operator `L(z)` of a nilpotent of `gl_N` and the checks built on it.
//!
//! `L(z) = |z + F + π_{<=1/2}E + D|_{I_1 J_1} 1̄` is computed directly in the
//! module `M`: writing `X = F + π_{<=1/2}E + D`, the series
//! `J_1 (z+X)^{-1} I_1 = Σ_l (-1)^l z^{-l-1} J_1 X^l I_1` starts with
//! `(-1)^{p_1-1} z^{-p_1}`, and `B(z) L(z) 1̄ = 1̄` is solved top-down.  With
//! `U_{p_1-1} = I_1 L_{p_1}` and `U_{n-1} = I_1 L_n - X U_n` one gets
//! `L_n = J_1 X^{p_1} U_n`, so each new coefficient costs `p_1 + 1`
//! applications of `X` to a vector of cosets.

use std::collections::BTreeMap;

use crate::pyramid::{BoxIndex, HalfInt, Partition};
use crate::quotient::MElement;
use crate::rational::Q;
use crate::series::{
    yangian_identity_check, CircRing, LiftRing, Series, SeriesError, SeriesMatrix, UeaRing, YangianReport,
};
use crate::uea::{Gl, Letter, UeaElement};

pub mod capelli;
pub mod families;
pub mod presentation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WError {
    #[error("floor {0} must be at most {1}")]
    Floor(HalfInt, HalfInt),
    #[error("partition {partition} is not of {family} type")]
    FamilyMismatch { partition: String, family: &'static str },
    #[error("missing generator w[{0},{1};{2}]")]
    MissingGenerator(usize, usize, usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("iteration did not terminate within {0} rounds")]
    NoConvergence(usize),
    #[error("invalid input: {0}")]
    Input(String),
}

/// One entry of a constant matrix over `U(g)`: `letter + scalar`.
#[derive(Clone, Debug)]
struct Entry {
    col: usize,
    letter: Option<Letter>,
    scalar: Q,
}

/// Sparse constant matrix whose entries are a letter plus a scalar.
#[derive(Clone, Debug)]
struct LetterMatrix {
    rows: Vec<Vec<Entry>>,
}

impl LetterMatrix {
    /// `X = F + π_{<=1/2}E + D`.
    fn shifted(gl: &Gl) -> LetterMatrix {
        let p = gl.partition();
        let n = gl.n();
        let f = p.structure_matrices().f;
        let d = p.shift_entries();
        let rows = (0..n)
            .map(|a| {
                (0..n)
                    .filter_map(|b| {
                        let l = gl.letter_at(b, a);
                        let keep = gl.info(l).degree <= HalfInt::from_doubled(1);
                        let mut scalar = f.get(a, b).clone();
                        if a == b {
                            scalar += &Q::int(d[a]);
                        }
                        if !keep && scalar.is_zero() {
                            return None;
                        }
                        Some(Entry { col: b, letter: keep.then_some(l), scalar })
                    })
                    .collect()
            })
            .collect();
        LetterMatrix { rows }
    }

    /// `X v` for a vector of cosets.
    fn apply(&self, gl: &Gl, v: &[MElement]) -> Vec<MElement> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = MElement::zero();
                for e in row {
                    let x = &v[e.col];
                    if x.is_zero() {
                        continue;
                    }
                    if let Some(l) = e.letter {
                        acc.add_assign(&gl.act(l, x));
                    }
                    if !e.scalar.is_zero() {
                        acc.add_scaled(x, &e.scalar);
                    }
                }
                acc
            })
            .collect()
    }
}

fn sign(k: usize) -> Q {
    if k.is_multiple_of(2) {
        Q::ONE
    } else {
        Q::int(-1)
    }
}

/// `z𝟙_N + F + π_{<=1/2}E + D` over `U(g)`, entry `(a,b)` built from `e_{b,a}`.
pub fn build_shifted_matrix(gl: &Gl) -> SeriesMatrix<UeaElement> {
    let ring = UeaRing(gl);
    let x = LetterMatrix::shifted(gl);
    let n = gl.n();
    let mut m = SeriesMatrix::zeros(n, n);
    for (a, row) in x.rows.iter().enumerate() {
        for e in row {
            let mut c = UeaElement::scalar(e.scalar.clone());
            if let Some(l) = e.letter {
                c.add_assign(&UeaElement::from_monomial(smallvec::smallvec![l], Q::ONE));
            }
            m.set(a, e.col, Series::constant(&ring, c));
        }
    }
    for a in 0..n {
        let s = m.get(a, a).add(&ring, &Series::monomial(&ring, UeaElement::one(), HalfInt::int(1)));
        m.set(a, a, s);
    }
    m
}

/// `z𝟙_N + E` over `U(gl_N)`, entry `(a,b)` equal to `e_{b,a}` plus `δ_ab z`.
pub fn z_plus_e(gl: &Gl) -> SeriesMatrix<UeaElement> {
    let ring = UeaRing(gl);
    let n = gl.n();
    let mut m = SeriesMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut s = Series::constant(&ring, gl.e_at(b, a));
            if a == b {
                s = s.add(&ring, &Series::monomial(&ring, UeaElement::one(), HalfInt::int(1)));
            }
            m.set(a, b, s);
        }
    }
    m
}

/// `L(z)` with coefficients in `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct LOperator {
    partition: Partition,
    floor: HalfInt,
    /// every coefficient below the floor is known to vanish
    exact: bool,
    reduced: SeriesMatrix<MElement>,
}

impl LOperator {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Coefficients at exponents `>= floor` are exact.
    pub fn floor(&self) -> HalfInt {
        self.floor
    }

    /// True if `L(z)` was found to be a polynomial in `z`.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn reduced(&self) -> &SeriesMatrix<MElement> {
        &self.reduced
    }

    pub fn entry(&self, i: usize, j: usize) -> &Series<MElement> {
        self.reduced.get(i, j)
    }

    /// All coefficients, entry by entry.
    pub fn coefficients(&self) -> impl Iterator<Item = ((usize, usize), HalfInt, &MElement)> {
        let r = self.reduced.rows();
        (0..r).flat_map(move |i| {
            (0..r).flat_map(move |j| self.reduced.get(i, j).terms().map(move |(n, c)| ((i, j), n, c)))
        })
    }

    /// True iff the top coefficient is `-(-1)^{p_1} 𝟙`.
    pub fn has_expected_leading_term(&self) -> bool {
        let p1 = self.partition.p1();
        let top = HalfInt::int(p1 as i64);
        let want = sign(p1 - 1);
        let r = self.reduced.rows();
        (0..r).all(|i| {
            (0..r).all(|j| {
                let s = self.reduced.get(i, j);
                let lead_ok = match s.coeff(top) {
                    Some(c) => i == j && c.as_scalar() == Some(want.clone()),
                    None => i != j,
                };
                lead_ok && s.top().is_none_or(|t| t <= top)
            })
        })
    }
}

/// Default truncation floor `-(2p_1 + 4)`.
pub fn default_floor(p: &Partition) -> HalfInt {
    HalfInt::int(-(2 * p.p1() as i64 + 4))
}

/// Builds `L(z)` down to `floor` by the triangular solve in `M`.
pub fn build_l(gl: &Gl, floor: HalfInt) -> Result<LOperator, WError> {
    if floor > HalfInt::ZERO {
        return Err(WError::Floor(floor, HalfInt::ZERO));
    }
    let p = gl.partition().clone();
    let (p1, r1, n) = (p.p1(), p.r1(), gl.n());
    let x = LetterMatrix::shifted(gl);
    let first: Vec<usize> = (1..=r1).map(|i| p.position(BoxIndex::new(i, 1)).unwrap()).collect();
    let last: Vec<usize> = (1..=r1).map(|i| p.position(BoxIndex::new(i, p1)).unwrap()).collect();
    let lowest = floor.doubled.div_euclid(2) + i64::from(floor.doubled.rem_euclid(2) != 0);
    let mut cols: Vec<BTreeMap<i64, Vec<MElement>>> = Vec::with_capacity(r1);
    let mut exact = true;
    for j in 0..r1 {
        let mut coeffs: BTreeMap<i64, Vec<MElement>> = BTreeMap::new();
        let mut top = vec![MElement::zero(); r1];
        top[j] = MElement::scalar(sign(p1 - 1));
        let mut u = vec![MElement::zero(); n];
        for (i, &pos) in first.iter().enumerate() {
            u[pos] = top[i].clone();
        }
        coeffs.insert(p1 as i64, top);
        let mut finished = false;
        for exp in (lowest..p1 as i64).rev() {
            if u.iter().all(MElement::is_zero) {
                finished = true;
                break;
            }
            let xu = x.apply(gl, &u);
            let mut t = xu.clone();
            for _ in 1..p1 {
                t = x.apply(gl, &t);
            }
            let col: Vec<MElement> = last.iter().map(|&pos| t[pos].clone()).collect();
            let mut next: Vec<MElement> = xu.iter().map(|e| e.scaled(&Q::int(-1))).collect();
            for (i, &pos) in first.iter().enumerate() {
                next[pos].add_assign(&col[i]);
            }
            u = next;
            coeffs.insert(exp, col);
        }
        exact &= finished || u.iter().all(MElement::is_zero);
        cols.push(coeffs);
    }
    let mut reduced = SeriesMatrix::zeros(r1, r1);
    let ring = LiftRing(gl);
    let series_floor = (!exact).then_some(floor);
    for (j, coeffs) in cols.into_iter().enumerate() {
        for i in 0..r1 {
            let terms = coeffs.iter().map(|(&e, v)| (HalfInt::int(e), v[i].clone()));
            reduced.set(i, j, Series::from_terms(&ring, series_floor, terms));
        }
    }
    Ok(LOperator { partition: p, floor, exact, reduced })
}

/// `|z + F + π_{<=1/2}E + D|_{I_1 J_1}` computed literally over `U(g)`
/// (definition path), then reduced.  Exponential in the floor; meant for
/// cross-checking [`build_l`] on small cases.
pub fn build_l_literal(gl: &Gl, floor: HalfInt) -> Result<SeriesMatrix<UeaElement>, WError> {
    let a = build_shifted_matrix(gl);
    let sm = gl.partition().structure_matrices();
    Ok(crate::series::quasideterminant(&UeaRing(gl), &a, &sm.i1, &sm.j1, floor)?)
}

/// Entrywise reduction of a matrix over `U(g)`.
pub fn reduce_matrix(gl: &Gl, m: &SeriesMatrix<UeaElement>) -> SeriesMatrix<MElement> {
    let ring = LiftRing(gl);
    m.map_entries(|s| s.map(&ring, |c| gl.reduce_mod_i(c)))
}

/// Residual `𝟙·1̄ - J_1(z+E)^{-1}I_1 · L(z)1̄`, exact at every power `>= floor(L) - 1`.
///
/// With `V_m = Σ_{n>m} (-E)^{n-m-1} I_1 L_n` the coefficient of `z^m` in
/// `J_1(z+E)^{-1}I_1 L(z)` is `J_1 V_m`, and `V_{m-1} = I_1 L_m - E V_m`.
pub fn main_lemma_residual(gl: &Gl, l: &LOperator) -> Result<SeriesMatrix<MElement>, WError> {
    let p = gl.partition().clone();
    let (p1, r1, n) = (p.p1(), p.r1(), gl.n());
    let first: Vec<usize> = (1..=r1).map(|i| p.position(BoxIndex::new(i, 1)).unwrap()).collect();
    let last: Vec<usize> = (1..=r1).map(|i| p.position(BoxIndex::new(i, p1)).unwrap()).collect();
    let lf = l.floor();
    if !lf.is_integer() {
        return Err(WError::Floor(lf, HalfInt::ZERO));
    }
    let lowest = lf.doubled / 2 - 1;
    let ring = LiftRing(gl);
    let mut out = SeriesMatrix::zeros(r1, r1);
    for j in 0..r1 {
        let mut v = vec![MElement::zero(); n];
        let mut res: Vec<Vec<(HalfInt, MElement)>> = vec![Vec::new(); r1];
        for m in (lowest..p1 as i64).rev() {
            // v holds V_{m+1}; form V_m = I_1 L_{m+1} - E V_{m+1}
            let mut next: Vec<MElement> = (0..n)
                .map(|a| {
                    let mut acc = MElement::zero();
                    for (b, vb) in v.iter().enumerate() {
                        if !vb.is_zero() {
                            acc.add_assign(&gl.act(gl.letter_at(b, a), vb));
                        }
                    }
                    acc.scaled(&Q::int(-1))
                })
                .collect();
            for (i, &pos) in first.iter().enumerate() {
                if let Some(c) = l.entry(i, j).coeff(HalfInt::int(m + 1)) {
                    next[pos].add_assign(c);
                }
            }
            v = next;
            for i in 0..r1 {
                let mut r = v[last[i]].scaled(&Q::int(-1));
                if m == 0 && i == j {
                    r.add_assign(&MElement::one());
                }
                res[i].push((HalfInt::int(m), r));
            }
        }
        for i in 0..r1 {
            out.set(i, j, Series::from_terms(&ring, Some(HalfInt::int(lowest)), res[i].drain(..)));
        }
    }
    Ok(out)
}

/// Term of the Neumann iteration: power (doubled) and a vector of cosets.
type VecSeries = BTreeMap<i64, Vec<MElement>>;

/// Bookkeeping for the pruned Neumann iteration of the Main Lemma.
struct Pruner<'g> {
    gl: &'g Gl,
    /// comparison floor `-K` (doubled)
    k2: i64,
    p1: i64,
}

impl Pruner<'_> {
    /// Doubled defect `-k - Δ(m)`.
    fn defect(&self, power: i64, m: &[Letter]) -> i64 {
        -power - self.gl.monomial_kazhdan(m).doubled
    }

    /// Whether a term of final power at most `reach` and defect `d` can
    /// still influence coefficients `>= -K`.
    fn alive(&self, reach: i64, d: i64) -> bool {
        if d > self.k2 {
            return false;
        }
        if reach >= -self.k2 {
            return true;
        }
        if self.p1 <= 2 {
            return false;
        }
        // every raise of the power by at most p_1 - 2 costs one unit of defect
        let gap = -self.k2 - reach;
        let step = 2 * (self.p1 - 2);
        let need = 2 * ((gap + step - 1) / step);
        d + need <= self.k2
    }

    fn prune(&self, power: i64, slack: i64, v: MElement) -> MElement {
        let keep: UeaElement = v
            .as_uea()
            .iter()
            .filter(|(m, _)| self.alive(power + slack, self.defect(power, m)))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        MElement::from_reduced(keep)
    }
}

/// How the left side of the Main Lemma is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MainLemmaMethod {
    /// Neumann series started from `c^{-1} 1̄`.
    Direct,
    /// Neumann series for the correction `P^{-1}(1̄ - P Y_0)` of the guess
    /// `Y_0 = z^{-p_1}L(z)`; the residual is exact and usually vanishes, so
    /// this is fast, and its result does not depend on the guess.
    Corrected,
}

/// Left side of the Main Lemma, `|𝟙_N + z^{-Δ}E|_{I_1 J_1} 1̄`, down to `floor`.
///
/// With `P(z) = J_1(𝟙 + z^{-Δ}E)^{-1} I_1 = z^{p_1} J_1(z+E)^{-1} I_1` acting
/// on `M`, the solution of `P Y = 𝟙 1̄` is found by the Neumann series
/// `Y = Y_0 + Σ_t (-c^{-1}(P - c))^t c^{-1} (1̄ - P Y_0)`, where
/// `c = ε(P_0) = (-1)^{p_1-1}`.  Every step strictly raises
/// `(p_1-1)·defect - power`, where the defect of `z^k m` is
/// `-k - Δ(m) >= 0`; terms that can no longer reach a power `>= floor` with
/// defect `<= -floor` are dropped, so the iteration is finite.
pub fn main_lemma_lhs(gl: &Gl, floor: HalfInt, method: MainLemmaMethod) -> Result<SeriesMatrix<MElement>, WError> {
    match method {
        MainLemmaMethod::Direct => lhs_neumann(gl, floor, None),
        MainLemmaMethod::Corrected => {
            if !floor.is_integer() {
                return Err(WError::Floor(floor, HalfInt::int(floor.doubled.div_euclid(2))));
            }
            let l = build_l(gl, guess_floor(gl.partition(), floor))?;
            lhs_neumann(gl, floor, Some(&l))
        }
    }
}

/// Floor to which the guess must be known so that the residual is exact
/// wherever it can still matter.
pub fn guess_floor(p: &Partition, floor: HalfInt) -> HalfInt {
    let k = -floor.doubled / 2;
    HalfInt::int(-k - k * (p.p1() as i64 - 2).max(0) + 1)
}

/// Same as [`MainLemmaMethod::Corrected`] with a caller-supplied guess
/// `Y_0 = z^{-p_1} guess(z)`, which must be known down to [`guess_floor`].
pub fn main_lemma_lhs_from_guess(gl: &Gl, floor: HalfInt, guess: &LOperator) -> Result<SeriesMatrix<MElement>, WError> {
    let need = guess_floor(gl.partition(), floor);
    if guess.floor() > need {
        return Err(WError::Floor(guess.floor(), need));
    }
    lhs_neumann(gl, floor, Some(guess))
}

fn lhs_neumann(gl: &Gl, floor: HalfInt, guess: Option<&LOperator>) -> Result<SeriesMatrix<MElement>, WError> {
    let p = gl.partition().clone();
    let (p1, r1, n) = (p.p1(), p.r1(), gl.n());
    let max_floor = -HalfInt::int(p1 as i64);
    if floor > max_floor {
        return Err(WError::Floor(floor, max_floor));
    }
    let pr = Pruner { gl, k2: -floor.doubled, p1: p1 as i64 };
    let first: Vec<usize> = (1..=r1).map(|i| p.position(BoxIndex::new(i, 1)).unwrap()).collect();
    let last: Vec<usize> = (1..=r1).map(|i| p.position(BoxIndex::new(i, p1)).unwrap()).collect();
    // (z^{-Δ}E)_{ab} = z^{-Δ(e_{ba})} e_{ba}
    let letters: Vec<Vec<(usize, Letter, i64)>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let l = gl.letter_at(b, a);
                    (b, l, -gl.info(l).kazhdan.doubled)
                })
                .collect()
        })
        .collect();
    let c = sign(p1 - 1);
    let cinv = c.recip().unwrap();
    // a chain term at box a may still rise by x(a) - x(i,p_1) before leaving
    let x_last = p.x_coord(BoxIndex::new(1, p1)).unwrap().doubled;
    let slack: Vec<i64> = gl.boxes().iter().map(|&b| p.x_coord(b).unwrap().doubled - x_last).collect();
    let apply_p = |t: &VecSeries| -> VecSeries {
        let mut out: VecSeries = BTreeMap::new();
        let mut chain: Vec<VecSeries> = vec![BTreeMap::new(); n];
        for (&k, v) in t {
            for (i, &pos) in first.iter().enumerate() {
                if !v[i].is_zero() {
                    chain[pos].insert(k, vec![v[i].clone()]);
                }
            }
        }
        let mut l = 0usize;
        loop {
            let s = sign(l);
            for (i, &pos) in last.iter().enumerate() {
                for (&k, v) in &chain[pos] {
                    let slot = out.entry(k).or_insert_with(|| vec![MElement::zero(); r1]);
                    slot[i].add_scaled(&v[0], &s);
                }
            }
            let mut next: Vec<VecSeries> = vec![BTreeMap::new(); n];
            for a in 0..n {
                for &(b, letter, shift) in &letters[a] {
                    for (&k, v) in &chain[b] {
                        let k2 = k + shift;
                        let w = pr.prune(k2, slack[a], gl.act(letter, &v[0]));
                        if w.is_zero() {
                            continue;
                        }
                        let slot = next[a].entry(k2).or_insert_with(|| vec![MElement::zero()]);
                        slot[0].add_assign(&w);
                    }
                }
            }
            next.iter_mut().for_each(|m| m.retain(|_, v| !v[0].is_zero()));
            if next.iter().all(|m| m.is_empty()) {
                break;
            }
            chain = next;
            l += 1;
        }
        out
    };
    let ring = LiftRing(gl);
    let guess = match guess {
        None => None,
        Some(l) => Some((l, main_lemma_residual(gl, l)?)),
    };
    let mut result = SeriesMatrix::zeros(r1, r1);
    for j in 0..r1 {
        let mut acc: VecSeries = BTreeMap::new();
        let mut term: VecSeries = BTreeMap::new();
        match &guess {
            None => {
                let mut start = vec![MElement::zero(); r1];
                start[j] = MElement::scalar(cinv.clone());
                term.insert(0, start);
            }
            Some((l, r)) => {
                let shift = 2 * p1 as i64;
                for i in 0..r1 {
                    for (k, c) in l.entry(i, j).terms() {
                        let slot = acc.entry(k.doubled - shift).or_insert_with(|| vec![MElement::zero(); r1]);
                        slot[i] = c.clone();
                    }
                    for (k, c) in r.get(i, j).terms() {
                        let e = pr.prune(k.doubled, 0, c.scaled(&cinv));
                        if !e.is_zero() {
                            let slot = term.entry(k.doubled).or_insert_with(|| vec![MElement::zero(); r1]);
                            slot[i] = e;
                        }
                    }
                }
            }
        }
        let mut rounds = 0usize;
        while !term.is_empty() {
            rounds += 1;
            if rounds > 10_000 {
                return Err(WError::NoConvergence(rounds));
            }
            for (&k, v) in &term {
                let slot = acc.entry(k).or_insert_with(|| vec![MElement::zero(); r1]);
                for i in 0..r1 {
                    slot[i].add_assign(&v[i]);
                }
            }
            let pt = apply_p(&term);
            let mut next: VecSeries = BTreeMap::new();
            for (k, mut v) in pt {
                if let Some(tv) = term.get(&k) {
                    for i in 0..r1 {
                        v[i].add_scaled(&tv[i], &-c.clone());
                    }
                }
                let v: Vec<MElement> = v.into_iter().map(|e| pr.prune(k, 0, e.scaled(&-cinv.clone()))).collect();
                if v.iter().any(|e| !e.is_zero()) {
                    next.insert(k, v);
                }
            }
            term = next;
        }
        for i in 0..r1 {
            let terms = acc.iter().map(|(&k, v)| (HalfInt::from_doubled(k), v[i].clone()));
            result.set(i, j, Series::from_terms(&ring, Some(floor), terms));
        }
    }
    Ok(result)
}

/// Where the two sides of the Main Lemma first differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainLemmaWitness {
    /// 0-based entry
    pub entry: (usize, usize),
    pub zpow: HalfInt,
}

/// Compares `|𝟙_N + z^{-Δ}E|_{I_1 J_1} 1̄` with `z^{-p_1} L(z) 1̄` down to `floor`.
pub fn main_lemma_witness(
    gl: &Gl,
    floor: HalfInt,
    method: MainLemmaMethod,
) -> Result<Option<MainLemmaWitness>, WError> {
    let p1 = HalfInt::int(gl.partition().p1() as i64);
    let lhs = main_lemma_lhs(gl, floor, method)?;
    let l = build_l(gl, floor + p1)?;
    for i in 0..lhs.rows() {
        for j in 0..lhs.cols() {
            let rhs = l.entry(i, j).shift(-p1);
            if !lhs.get(i, j).agrees_with(&rhs, floor) {
                let zpow = lhs.get(i, j).first_difference(&rhs, floor).unwrap_or(floor);
                return Ok(Some(MainLemmaWitness { entry: (i, j), zpow }));
            }
        }
    }
    Ok(None)
}

/// Where an `L(z)` coefficient fails ad-invariance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipWitness {
    /// 0-based entry
    pub entry: (usize, usize),
    pub zpow: HalfInt,
    /// the `g_{>=1/2}` generator that acts differently on both sides
    pub letter: Letter,
}

/// First coefficient of `L(z)` that is not `ad g_{>=1/2}`-invariant.
pub fn membership_witness(gl: &Gl, l: &LOperator) -> Option<MembershipWitness> {
    l.coefficients().find_map(|(entry, zpow, c)| {
        gl.ad_invariance_witness_reduced(c).map(|letter| MembershipWitness { entry, zpow, letter })
    })
}

/// Which W-algebra product a check uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Product {
    /// `reduce(w̃_1 w̃_2)`
    Lift,
    /// the product of `U(g_{<=0}) ⊗ F^op(g_{1/2})`
    Circ,
}

/// The Yangian identity for `L(z)` over `W(g,f)`, compared at every pair of
/// exponents `>= floor`; `L` is built one step deeper so that those
/// coefficients are exact.
pub fn yangian_check_l(gl: &Gl, floor: HalfInt, product: Product) -> Result<YangianReport, WError> {
    let l = build_l(gl, floor - HalfInt::int(1))?;
    Ok(match product {
        Product::Lift => yangian_identity_check(&LiftRing(gl), l.reduced(), l.floor()),
        Product::Circ => yangian_identity_check(&CircRing(gl), l.reduced(), l.floor()),
    })
}
