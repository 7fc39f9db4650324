//! Generators `w_{ij;k}` of `W(gl_N, f)` for the principal, rectangular and
//! minimal nilpotents, their commutation relations, the conjectural
//! quasideterminant form of `L(z)` and Premet's leading-term conditions.
//!
//! Generator keys are 1-based triples `(i, j, k)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::pyramid::{BoxIndex, HalfInt, Partition, ScalarMatrix};
use crate::quotient::MElement;
use crate::rational::Q;
use crate::series::{quasideterminant_submatrix, LiftRing, Series, SeriesMatrix};
use crate::uea::{Gl, Letter, UeaElement};

use super::{build_l, sign, Product, WError};

/// `(i, j, k)` of `w_{ij;k}`, 1-based in `i` and `j`.
pub type GenKey = (usize, usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Principal,
    Rectangular,
    Minimal,
    /// a table supplied by the caller
    Candidates,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Principal => "principal",
            Family::Rectangular => "rectangular",
            Family::Minimal => "minimal",
            Family::Candidates => "candidates",
        }
    }

    /// Whether the closed-form family applies to `p`.
    pub fn matches(self, p: &Partition) -> bool {
        match self {
            Family::Principal => p.is_principal(),
            Family::Rectangular => p.is_rectangular(),
            Family::Minimal => p.is_minimal(),
            Family::Candidates => true,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = WError;
    fn from_str(s: &str) -> Result<Family, WError> {
        match s.trim() {
            "principal" => Ok(Family::Principal),
            "rectangular" => Ok(Family::Rectangular),
            "minimal" => Ok(Family::Minimal),
            "candidates" => Ok(Family::Candidates),
            other => Err(WError::Input(format!("unknown family `{other}`"))),
        }
    }
}

/// The index set `1 <= i,j <= r`, `0 <= k < min(p_i, p_j)`.
pub fn generator_keys(p: &Partition) -> Vec<GenKey> {
    let r = p.r();
    let mut keys = Vec::new();
    for i in 1..=r {
        for j in 1..=r {
            for k in 0..p.part(i).min(p.part(j)) {
                keys.push((i, j, k));
            }
        }
    }
    keys
}

/// A table of generators `w_{ij;k}` with their canonical representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct WGenerators {
    partition: Partition,
    family: Family,
    table: BTreeMap<GenKey, MElement>,
}

impl WGenerators {
    /// Checks that `table` covers exactly [`generator_keys`].
    pub fn new(partition: Partition, family: Family, table: BTreeMap<GenKey, MElement>) -> Result<WGenerators, WError> {
        let keys = generator_keys(&partition);
        if let Some(&(i, j, k)) = keys.iter().find(|key| !table.contains_key(key)) {
            return Err(WError::MissingGenerator(i, j, k));
        }
        if let Some(&(i, j, k)) = table.keys().find(|key| !keys.contains(key)) {
            return Err(WError::Input(format!("w[{i},{j};{k}] is outside the index range")));
        }
        Ok(WGenerators { partition, family, table })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, key: GenKey) -> Result<&MElement, WError> {
        self.table.get(&key).ok_or(WError::MissingGenerator(key.0, key.1, key.2))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GenKey, &MElement)> {
        self.table.iter()
    }

    /// `W(z)`: entry `(a,b)` is `W_{ba}(z) = Σ_k w_{ba;k}(-z)^k`.
    pub fn w_matrix(&self, gl: &Gl) -> SeriesMatrix<MElement> {
        let ring = LiftRing(gl);
        let r = self.partition.r();
        let mut m = SeriesMatrix::zeros(r, r);
        for a in 1..=r {
            for b in 1..=r {
                let terms = (0..self.partition.part(a).min(self.partition.part(b))).map(|k| {
                    let c = self.table[&(b, a, k)].scaled(&sign(k));
                    (HalfInt::int(k as i64), c)
                });
                m.set(a - 1, b - 1, Series::from_terms(&ring, None, terms));
            }
        }
        m
    }
}

/// Generators of the principal or rectangular family, read off the
/// polynomial `L(z) = -𝟙(-z)^{p_1} + Σ_k W_k (-z)^k`, `(W_k)_{ij} = w_{ji;k}`.
fn generators_from_polynomial(gl: &Gl, family: Family) -> Result<WGenerators, WError> {
    let p = gl.partition().clone();
    let l = build_l(gl, HalfInt::int(-1))?;
    if !l.is_exact() {
        return Err(WError::Input(format!("L(z) of {p} is not a polynomial")));
    }
    let r = p.r();
    let mut table = BTreeMap::new();
    for a in 1..=r {
        for b in 1..=r {
            for k in 0..p.p1() {
                let c = l.entry(b - 1, a - 1).coeff(HalfInt::int(k as i64)).cloned().unwrap_or_default();
                table.insert((a, b, k), c.scaled(&sign(k)));
            }
        }
    }
    WGenerators::new(p, family, table)
}

/// Letters and products used by the minimal-family formulas.
struct MinimalPieces<'g> {
    gl: &'g Gl,
    r: usize,
}

impl MinimalPieces<'_> {
    fn e(&self, a: (usize, usize), b: (usize, usize)) -> UeaElement {
        self.gl.e(BoxIndex::new(a.0, a.1), BoxIndex::new(b.0, b.1))
    }

    /// `(e_{+(1k)})_j = e_{(j1),(1k)}`, `j = 2..r`
    fn plus_row(&self, k: usize, j: usize) -> UeaElement {
        self.e((j, 1), (1, k))
    }

    /// `(e_{(1k)+})_i = e_{(1k),(i1)}`, `i = 2..r`
    fn plus_col(&self, k: usize, i: usize) -> UeaElement {
        self.e((1, k), (i, 1))
    }

    /// `(W_{++})_{ij} = e_{(j1),(i1)} - e_{(11),(i1)} e_{(j1),(12)}`
    fn w_pp(&self, i: usize, j: usize) -> UeaElement {
        self.e((j, 1), (i, 1)).minus(&self.gl.mul(&self.plus_col(1, i), &self.plus_row(2, j)))
    }

    fn e11(&self) -> UeaElement {
        self.e((1, 1), (1, 1))
    }

    fn e22_shifted(&self) -> UeaElement {
        self.e((1, 2), (1, 2)).minus(&UeaElement::one())
    }

    /// `(w_{+1})_j = e_{(j1),(11)} - e_{(11),(11)} e_{(j1),(12)} + Σ_i e_{(i1),(12)} (W_{++})_{ij}`
    fn w_plus_one(&self, j: usize) -> UeaElement {
        let gl = self.gl;
        let mut w = self.plus_row(1, j).minus(&gl.mul(&self.e11(), &self.plus_row(2, j)));
        for i in 2..=self.r {
            w.add_assign(&gl.mul(&self.plus_row(2, i), &self.w_pp(i, j)));
        }
        w
    }

    /// `(w_{1+})_i = e_{(12),(i1)} - e_{(11),(i1)}(e_{(12),(12)} - 1) + Σ_j (W_{++})_{ij} e_{(11),(j1)}`
    fn w_one_plus(&self, i: usize) -> UeaElement {
        let gl = self.gl;
        let mut w = self.plus_col(2, i).minus(&gl.mul(&self.plus_col(1, i), &self.e22_shifted()));
        for j in 2..=self.r {
            w.add_assign(&gl.mul(&self.w_pp(i, j), &self.plus_col(1, j)));
        }
        w
    }

    /// `w_{11;1} = e_{(11),(11)} + e_{(12),(12)} + e_{+(12)} e_{(11)+} - 1`
    fn w_one(&self) -> UeaElement {
        let mut w = self.e11().plus(&self.e22_shifted());
        for i in 2..=self.r {
            w.add_assign(&self.gl.mul(&self.plus_row(2, i), &self.plus_col(1, i)));
        }
        w
    }

    /// `w_{11;0} = e_{(12),(11)} - e_{(11),(11)}(e_{(12),(12)} - 1) + e_{+(12)} w_{1+}
    /// + w_{+1} e_{(11)+} - e_{+(12)} W_{++} e_{(11)+}`
    fn w_zero(&self) -> UeaElement {
        let gl = self.gl;
        let mut w = self.e((1, 2), (1, 1)).minus(&gl.mul(&self.e11(), &self.e22_shifted()));
        for i in 2..=self.r {
            w.add_assign(&gl.mul(&self.plus_row(2, i), &self.w_one_plus(i)));
            w.add_assign(&gl.mul(&self.w_plus_one(i), &self.plus_col(1, i)));
            for j in 2..=self.r {
                let t = gl.mul(&gl.mul(&self.plus_row(2, i), &self.w_pp(i, j)), &self.plus_col(1, j));
                w.sub_assign(&t);
            }
        }
        w
    }
}

/// The closed formulas of the minimal family as a generator table:
/// `w_{11;1}`, `w_{11;0}`, `w_{j1;0} = (w_{+1})_j`, `w_{1i;0} = (w_{1+})_i`
/// and `w_{ji;0} = (W_{++})_{ij}`.
fn minimal_generators(gl: &Gl) -> Result<WGenerators, WError> {
    let p = gl.partition().clone();
    let r = p.r();
    let pieces = MinimalPieces { gl, r };
    let red = |u: UeaElement| gl.reduce_mod_i(&u);
    let mut table = BTreeMap::new();
    table.insert((1, 1, 1), red(pieces.w_one()));
    table.insert((1, 1, 0), red(pieces.w_zero()));
    for a in 2..=r {
        table.insert((a, 1, 0), red(pieces.w_plus_one(a)));
        table.insert((1, a, 0), red(pieces.w_one_plus(a)));
        for b in 2..=r {
            table.insert((b, a, 0), red(pieces.w_pp(a, b)));
        }
    }
    WGenerators::new(p, Family::Minimal, table)
}

/// Generator table of a closed-form family.
pub fn family_generators(gl: &Gl, family: Family) -> Result<WGenerators, WError> {
    let p = gl.partition();
    if family == Family::Candidates || !family.matches(p) {
        return Err(WError::FamilyMismatch { partition: p.to_string(), family: family.name() });
    }
    match family {
        Family::Principal | Family::Rectangular => generators_from_polynomial(gl, family),
        Family::Minimal => minimal_generators(gl),
        Family::Candidates => unreachable!(),
    }
}

/// `[w_left, w_right] = Σ c · (product of generators)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub label: String,
    pub left: GenKey,
    pub right: GenKey,
    pub rhs: Vec<(Q, Vec<GenKey>)>,
}

fn rel(label: String, left: GenKey, right: GenKey, rhs: Vec<(Q, Vec<GenKey>)>) -> Relation {
    Relation { label, left, right, rhs }
}

/// Principal family: all generators commute.
pub fn principal_relations(p: &Partition) -> Vec<Relation> {
    let n = p.p1();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.push(rel(format!("[w{a},w{b}]=0"), (1, 1, a), (1, 1, b), Vec::new()));
        }
    }
    out
}

/// Rectangular family: for `0 <= h,k < p_1`,
/// `[w_{ab;h}, w_{cd;k}] = Σ_{n=0}^{min(p_1-1-h,k)} (w_{ad;h+n+1} w_{cb;k-n} - w_{ad;k-n} w_{cb;h+n+1})`
/// with `w_{ji;p_1} = -δ_ij`.
///
/// This is the coefficient form of the Yangian identity for
/// `L(z) = -𝟙(-z)^{p_1} + Σ_k W_k(-z)^k`, `(W_k)_{ij} = w_{ji;k}`.
pub fn rectangular_relations(p: &Partition) -> Vec<Relation> {
    rectangular_table(p, true)
}

/// The same table with `w_{bc}` in place of `w_{cb}`; it agrees with
/// [`rectangular_relations`] only when `r_1 = 1`.
pub fn rectangular_relations_bc(p: &Partition) -> Vec<Relation> {
    rectangular_table(p, false)
}

fn rectangular_table(p: &Partition, swap: bool) -> Vec<Relation> {
    let (p1, r) = (p.p1(), p.r());
    // a generator or the boundary scalar -δ_ij
    let factor = |i: usize, j: usize, k: usize| -> Option<Result<GenKey, Q>> {
        if k < p1 {
            Some(Ok((i, j, k)))
        } else if i == j {
            Some(Err(Q::int(-1)))
        } else {
            None
        }
    };
    let product = |c: Q, x: Option<Result<GenKey, Q>>, y: Option<Result<GenKey, Q>>| -> Option<(Q, Vec<GenKey>)> {
        let (mut c, mut word) = (c, Vec::new());
        for f in [x?, y?] {
            match f {
                Ok(key) => word.push(key),
                Err(s) => c = &c * &s,
            }
        }
        Some((c, word))
    };
    let mut out = Vec::new();
    for a in 1..=r {
        for b in 1..=r {
            for c in 1..=r {
                for d in 1..=r {
                    for h in 0..p1 {
                        for k in 0..p1 {
                            let mut rhs = Vec::new();
                            let (b2, c2) = if swap { (c, b) } else { (b, c) };
                            for n in 0..=(p1 - 1 - h).min(k) {
                                rhs.extend(product(Q::ONE, factor(a, d, h + n + 1), factor(b2, c2, k - n)));
                                rhs.extend(product(Q::int(-1), factor(a, d, k - n), factor(b2, c2, h + n + 1)));
                            }
                            let label = format!("[w{a}{b};{h},w{c}{d};{k}]");
                            out.push(rel(label, (a, b, h), (c, d, k), rhs));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Minimal family `(2,1^{r-1})`: the displayed nonzero commutators, in
/// matrix form with `W_{ij} = (W_{++})_{ij} = w_{ji;0}`, `u_j = w_{j1;0}`,
/// `v_i = w_{1i;0}`, `A = w_{11;1}`, `B = w_{11;0}` (indices `2..r`), and,
/// when `with_vanishing`, every remaining pair with commutator zero.
pub fn minimal_relations(p: &Partition, with_vanishing: bool) -> Vec<Relation> {
    let r = p.r();
    let a: GenKey = (1, 1, 1);
    let b: GenKey = (1, 1, 0);
    let u = |j: usize| -> GenKey { (j, 1, 0) };
    let v = |i: usize| -> GenKey { (1, i, 0) };
    let w = |i: usize, j: usize| -> GenKey { (j, i, 0) };
    let one = Q::ONE;
    let neg = Q::int(-1);
    let idx: Vec<usize> = (2..=r).collect();
    let mut out = Vec::new();
    for &k in &idx {
        out.push(rel(format!("[A,u{k}]=-u{k}"), a, u(k), vec![(neg.clone(), vec![u(k)])]));
        out.push(rel(format!("[A,v{k}]=v{k}"), a, v(k), vec![(one.clone(), vec![v(k)])]));
    }
    for &j in &idx {
        let mut rhs: Vec<(Q, Vec<GenKey>)> = idx.iter().map(|&i| (neg.clone(), vec![u(i), w(i, j)])).collect();
        rhs.push((one.clone(), vec![u(j), a]));
        out.push(rel(format!("[B,u{j}]=-(uW)_{j}+u{j}A"), b, u(j), rhs));
    }
    for &i in &idx {
        let mut rhs: Vec<(Q, Vec<GenKey>)> = idx.iter().map(|&j| (one.clone(), vec![w(i, j), v(j)])).collect();
        rhs.push((neg.clone(), vec![a, v(i)]));
        out.push(rel(format!("[B,v{i}]=(Wv)_{i}-Av{i}"), b, v(i), rhs));
    }
    for &i in &idx {
        for &j in &idx {
            let mut rhs: Vec<(Q, Vec<GenKey>)> = idx.iter().map(|&k| (neg.clone(), vec![w(i, k), w(k, j)])).collect();
            rhs.push((one.clone(), vec![a, w(i, j)]));
            if i == j {
                rhs.push((one.clone(), vec![b]));
            }
            out.push(rel(format!("[v{i},u{j}]=-(W^2)_{i}{j}+AW_{i}{j}+δB"), v(i), u(j), rhs));
        }
    }
    for &i in &idx {
        for &j in &idx {
            for &k in &idx {
                let rhs = if i == k { vec![(one.clone(), vec![u(j)])] } else { Vec::new() };
                out.push(rel(format!("[W{i}{j},u{k}]"), w(i, j), u(k), rhs));
                let rhs = if j == k { vec![(neg.clone(), vec![v(i)])] } else { Vec::new() };
                out.push(rel(format!("[W{i}{j},v{k}]"), w(i, j), v(k), rhs));
            }
        }
    }
    for &i in &idx {
        for &j in &idx {
            for &h in &idx {
                for &k in &idx {
                    let mut rhs = Vec::new();
                    if i == k {
                        rhs.push((one.clone(), vec![w(h, j)]));
                    }
                    if j == h {
                        rhs.push((neg.clone(), vec![w(i, k)]));
                    }
                    out.push(rel(format!("[W{i}{j},W{h}{k}]"), w(i, j), w(h, k), rhs));
                }
            }
        }
    }
    if with_vanishing {
        let mut zero = |label: String, x: GenKey, y: GenKey| out.push(rel(label, x, y, Vec::new()));
        zero("[A,B]=0".into(), a, b);
        for &i in &idx {
            for &j in &idx {
                zero(format!("[A,W{i}{j}]=0"), a, w(i, j));
                zero(format!("[B,W{i}{j}]=0"), b, w(i, j));
                if i < j {
                    zero(format!("[u{i},u{j}]=0"), u(i), u(j));
                    zero(format!("[v{i},v{j}]=0"), v(i), v(j));
                }
            }
        }
    }
    out
}

/// The relation table of a closed-form family.
pub fn family_relations(p: &Partition, family: Family) -> Result<Vec<Relation>, WError> {
    if family == Family::Candidates || !family.matches(p) {
        return Err(WError::FamilyMismatch { partition: p.to_string(), family: family.name() });
    }
    Ok(match family {
        Family::Principal => principal_relations(p),
        Family::Rectangular => rectangular_relations(p),
        _ => minimal_relations(p, false),
    })
}

/// W-algebra product of two cosets.
pub fn w_mul(gl: &Gl, product: Product, x: &MElement, y: &MElement) -> MElement {
    match product {
        Product::Lift => gl.lift_mul(x, y),
        Product::Circ => gl.ucirc_mul(x, y),
    }
}

/// `w_{k_1} w_{k_2} ... w_{k_n}` evaluated right to left.
pub fn eval_word(gl: &Gl, g: &WGenerators, product: Product, word: &[GenKey]) -> Result<MElement, WError> {
    let mut acc = MElement::one();
    for key in word.iter().rev() {
        acc = w_mul(gl, product, g.get(*key)?, &acc);
    }
    Ok(acc)
}

/// `Σ c · word`, evaluated in `M`.
pub fn eval_poly(gl: &Gl, g: &WGenerators, product: Product, poly: &[(Q, Vec<GenKey>)]) -> Result<MElement, WError> {
    let mut acc = MElement::zero();
    for (c, word) in poly {
        acc.add_scaled(&eval_word(gl, g, product, word)?, c);
    }
    Ok(acc)
}

/// Outcome of a relation table check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub checked: usize,
    /// labels of the relations that fail
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every relation exactly in `M`, with commutators and products
/// computed by `product`.
pub fn check_relations(
    gl: &Gl,
    g: &WGenerators,
    relations: &[Relation],
    product: Product,
) -> Result<RelationReport, WError> {
    let mut failures = Vec::new();
    for r in relations {
        let x = g.get(r.left)?;
        let y = g.get(r.right)?;
        let lhs = w_mul(gl, product, x, y).minus(&w_mul(gl, product, y, x));
        if lhs != eval_poly(gl, g, product, &r.rhs)? {
            failures.push(r.label.clone());
        }
    }
    Ok(RelationReport { checked: relations.len(), failures })
}

/// The first generator that is not `ad g_{>=1/2}`-invariant.
pub fn generator_membership_witness(gl: &Gl, g: &WGenerators) -> Option<(GenKey, Letter)> {
    g.iter().find_map(|(key, w)| gl.ad_invariance_witness_reduced(w).map(|l| (*key, l)))
}

/// `L(z) = -z^2 - w_{11;1}z + w_{11;0} - w_{+1}(z𝟙 + W_{++})^{-1}w_{1+}`
/// down to `floor`, for the minimal family.
///
/// The geometric series is applied to the column: `c_0 = w_{1+}`,
/// `c_{t+1} = W_{++} c_t`, and the coefficient of `z^{-t-1}` is
/// `-(-1)^t w_{+1} c_t`, so every product has a generator on the left.
pub fn l1_minimal(gl: &Gl, g: &WGenerators, floor: HalfInt, product: Product) -> Result<Series<MElement>, WError> {
    let p = g.partition();
    if !p.is_minimal() {
        return Err(WError::FamilyMismatch { partition: p.to_string(), family: Family::Minimal.name() });
    }
    let r = p.r();
    let ring = LiftRing(gl);
    let mut terms: Vec<(HalfInt, MElement)> = vec![
        (HalfInt::int(2), MElement::scalar(Q::int(-1))),
        (HalfInt::int(1), g.get((1, 1, 1))?.scaled(&Q::int(-1))),
        (HalfInt::ZERO, g.get((1, 1, 0))?.clone()),
    ];
    let mut col: Vec<MElement> = (2..=r).map(|i| g.get((1, i, 0)).cloned()).collect::<Result<_, _>>()?;
    let mut t = 0usize;
    while HalfInt::int(-(t as i64) - 1) >= floor && r > 1 {
        let mut c = MElement::zero();
        for (idx, j) in (2..=r).enumerate() {
            c.add_assign(&w_mul(gl, product, g.get((j, 1, 0))?, &col[idx]));
        }
        terms.push((HalfInt::int(-(t as i64) - 1), c.scaled(&(-sign(t)))));
        let mut next = Vec::with_capacity(r - 1);
        for i in 2..=r {
            let mut acc = MElement::zero();
            for (idx, j) in (2..=r).enumerate() {
                acc.add_assign(&w_mul(gl, product, g.get((j, i, 0))?, &col[idx]));
            }
            next.push(acc);
        }
        col = next;
        t += 1;
    }
    Ok(Series::from_terms(&ring, Some(floor), terms))
}

/// `|-(-z)^p + W(z)|_{I_{r r_1} J_{r_1 r}}` over `W(g,f)` with lift
/// products, down to `floor`.
pub fn conjectural_l(gl: &Gl, g: &WGenerators, floor: HalfInt) -> Result<SeriesMatrix<MElement>, WError> {
    let p = g.partition();
    let (r, r1) = (p.r(), p.r1());
    let ring = LiftRing(gl);
    let mut m = g.w_matrix(gl);
    for i in 0..r {
        let pi = p.part(i + 1);
        let lead = Series::monomial(&ring, MElement::scalar(-sign(pi)), HalfInt::int(pi as i64));
        let s = m.get(i, i).add(&ring, &lead);
        m.set(i, i, s);
    }
    let mut i1 = ScalarMatrix::zeros(r, r1);
    let mut j1 = ScalarMatrix::zeros(r1, r);
    for k in 0..r1 {
        i1.set(k, k, Q::ONE);
        j1.set(k, k, Q::ONE);
    }
    Ok(quasideterminant_submatrix(&ring, &m, &i1, &j1, floor)?)
}

/// Where the conjectural form and `L(z)` first differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureWitness {
    pub entry: (usize, usize),
    pub zpow: HalfInt,
}

/// Compares [`conjectural_l`] with `L(z)` down to `floor`.
pub fn conjecture_witness(gl: &Gl, g: &WGenerators, floor: HalfInt) -> Result<Option<ConjectureWitness>, WError> {
    let lhs = build_l(gl, floor)?;
    let rhs = conjectural_l(gl, g, floor)?;
    let r1 = gl.partition().r1();
    for i in 0..r1 {
        for j in 0..r1 {
            let (a, b) = (lhs.entry(i, j), rhs.get(i, j));
            if !a.agrees_with(b, floor) {
                let zpow = a.first_difference(b, floor).unwrap_or(floor);
                return Ok(Some(ConjectureWitness { entry: (i, j), zpow }));
            }
        }
    }
    Ok(None)
}

/// Why a generator fails Premet's conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PremetFailure {
    /// the Kazhdan degree exceeds `Δ = (p_i + p_j)/2 - k`
    Degree { degree: HalfInt, bound: HalfInt },
    /// `π_{g^f}(gr_Δ w) ≠ f_{ij;k}`
    Symbol,
}

/// A monomial of `S(g^f)`: sorted generator keys.
type SymbolMonomial = Vec<GenKey>;

/// `π_{g^f}` on a letter of `g_{<=1/2}`: `e_{(i,p_i-k),(j,1)} ↦ f_{ij;k}`,
/// every other letter spans part of `U^⊥` and maps to zero.
fn project_letter(gl: &Gl, l: Letter) -> Option<GenKey> {
    let p = gl.partition();
    let gen = gl.info(l).gen;
    let (a, b) = (gen.a, gen.b);
    if b.h != 1 {
        return None;
    }
    let k = p.part(a.i).checked_sub(a.h)?;
    (k < p.part(a.i).min(p.part(b.i))).then_some((a.i, b.i, k))
}

/// `π_{g^f}(gr_Δ w)` as a polynomial on `g^f`.
pub fn premet_symbol(gl: &Gl, w: &MElement, delta: HalfInt) -> BTreeMap<SymbolMonomial, Q> {
    let mut out: BTreeMap<SymbolMonomial, Q> = BTreeMap::new();
    for (m, c) in w.as_uea().iter() {
        if gl.monomial_kazhdan(m) != delta {
            continue;
        }
        let image: Option<SymbolMonomial> = m.iter().map(|&l| project_letter(gl, l)).collect();
        if let Some(mut keys) = image {
            keys.sort_unstable();
            let v = out.remove(&keys).map_or(c.clone(), |v| &v + c);
            if !v.is_zero() {
                out.insert(keys, v);
            }
        }
    }
    out
}

/// First generator violating Premet's conditions:
/// `w_{ij;k} ∈ F_Δ` and `π_{g^f}(gr_Δ w_{ij;k}) = f_{ij;k}`.
pub fn premet_witness(gl: &Gl, g: &WGenerators) -> Option<(GenKey, PremetFailure)> {
    let p = g.partition();
    for (&(i, j, k), w) in g.iter() {
        let bound = HalfInt::from_doubled((p.part(i) + p.part(j)) as i64 - 2 * k as i64);
        let degree = gl.kazhdan_degree(w.as_uea());
        if let Some(d) = degree.filter(|&d| d > bound) {
            return Some(((i, j, k), PremetFailure::Degree { degree: d, bound }));
        }
        let symbol = premet_symbol(gl, w, bound);
        let want: BTreeMap<SymbolMonomial, Q> = [(vec![(i, j, k)], Q::ONE)].into_iter().collect();
        if symbol != want {
            return Some(((i, j, k), PremetFailure::Symbol));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl(s: &str) -> Gl {
        Gl::new(&s.parse().unwrap())
    }

    #[test]
    fn principal_top_generator_is_the_shifted_trace() {
        for n in 2..=4 {
            let g = gl(&n.to_string());
            let w = family_generators(&g, Family::Principal).unwrap();
            assert_eq!(w.len(), n);
            let mut want = UeaElement::scalar(Q::int(-((n * (n - 1) / 2) as i64)));
            for i in 0..n {
                want.add_assign(&g.e_at(i, i));
            }
            assert_eq!(w.get((1, 1, n - 1)).unwrap(), &g.reduce_mod_i(&want));
            let rels = family_relations(g.partition(), Family::Principal).unwrap();
            assert!(check_relations(&g, &w, &rels, Product::Lift).unwrap().pass());
            assert_eq!(generator_membership_witness(&g, &w), None);
            assert_eq!(premet_witness(&g, &w), None);
        }
    }

    #[test]
    fn rectangular_table_for_two_two() {
        let g = gl("2,2");
        let w = family_generators(&g, Family::Rectangular).unwrap();
        assert_eq!(w.len(), 8);
        let rels = rectangular_relations(g.partition());
        assert_eq!(rels.len(), 64);
        let lift = check_relations(&g, &w, &rels, Product::Lift).unwrap();
        assert!(lift.pass(), "{:?}", lift.failures);
        assert!(check_relations(&g, &w, &rels, Product::Circ).unwrap().pass());
        assert_eq!(premet_witness(&g, &w), None);
        let bc = check_relations(&g, &w, &rectangular_relations_bc(g.partition()), Product::Lift).unwrap();
        assert_eq!(bc.failures.len(), 20);
    }

    #[test]
    fn minimal_family_for_two_one() {
        let g = gl("2,1");
        let w = family_generators(&g, Family::Minimal).unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(generator_membership_witness(&g, &w), None);
        let rels = minimal_relations(g.partition(), true);
        let r = check_relations(&g, &w, &rels, Product::Lift).unwrap();
        assert!(r.pass(), "{:?}", r.failures);
        let floor = HalfInt::int(-8);
        let l = build_l(&g, floor).unwrap();
        let l1 = l1_minimal(&g, &w, floor, Product::Lift).unwrap();
        assert!(l1.agrees_with(l.entry(0, 0), floor));
        assert_eq!(conjecture_witness(&g, &w, floor).unwrap(), None);
        assert_eq!(premet_witness(&g, &w), None);
    }

    #[test]
    fn family_mismatch_is_reported() {
        let g = gl("2,1");
        assert!(matches!(family_generators(&g, Family::Principal), Err(WError::FamilyMismatch { .. })));
        assert!(matches!(family_relations(g.partition(), Family::Rectangular), Err(WError::FamilyMismatch { .. })));
    }

    #[test]
    fn perturbed_generator_fails_premet() {
        let g = gl("2");
        let w = family_generators(&g, Family::Principal).unwrap();
        let mut table: BTreeMap<GenKey, MElement> = w.iter().map(|(k, v)| (*k, v.clone())).collect();
        let bad = table[&(1, 1, 1)].scaled(&Q::int(2));
        table.insert((1, 1, 1), bad);
        let w = WGenerators::new(g.partition().clone(), Family::Candidates, table).unwrap();
        assert_eq!(premet_witness(&g, &w), Some(((1, 1, 1), PremetFailure::Symbol)));
    }
}
