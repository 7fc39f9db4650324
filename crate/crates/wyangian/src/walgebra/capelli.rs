//! The Capelli identity and the determinant identities of the principal
//! nilpotent in `gl_N`.
//!
//! `gl_N` is realised on the pyramid `(N)`: `e_{ij}` is `e_{(1,i),(1,j)}`,
//! so that `ρ` (reduction modulo `I`) is the map onto `U(b_-)`.

use crate::pyramid::{HalfInt, Partition, ScalarMatrix};
use crate::quotient::MElement;
use crate::rational::Q;
use crate::series::{
    inverse_commutator_check, quasideterminant, quasideterminant_submatrix, DetMode, Series, SeriesMatrix, UeaRing,
};
use crate::uea::{Gl, UeaElement};

use super::{build_shifted_matrix, z_plus_e, WError};

/// `gl_N` with the principal grading.
pub fn principal_gl(n: usize) -> Result<Gl, WError> {
    let p = Partition::new(vec![n]).map_err(|e| WError::Input(e.to_string()))?;
    Ok(Gl::new(&p))
}

/// `z𝟙 + E + D` with `D = diag(0,-1,...,-N+1)`; entry `(i,j)` is
/// `e_{ji} + δ_ij(z - (i-1))`.
pub fn capelli_matrix(gl: &Gl) -> SeriesMatrix<UeaElement> {
    let ring = UeaRing(gl);
    let n = gl.n();
    let mut m = z_plus_e(gl);
    for i in 0..n {
        let s = m.get(i, i).add(&ring, &Series::constant(&ring, UeaElement::scalar(Q::int(-(i as i64)))));
        m.set(i, i, s);
    }
    m
}

/// Coefficients `z_1..z_N` of `rdet(z𝟙+E+D) = z^N + z_1 z^{N-1} + ... + z_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CapelliResult {
    pub n: usize,
    /// `z^N` has coefficient one and no other power above `N-1` occurs
    pub monic: bool,
    pub coefficients: Vec<UeaElement>,
    /// `central[k]` is true iff `z_{k+1}` commutes with every `e_{ab}`
    pub central: Vec<bool>,
}

impl CapelliResult {
    pub fn pass(&self) -> bool {
        self.monic && self.central.iter().all(|&c| c)
    }
}

pub fn capelli_suite(n: usize) -> Result<CapelliResult, WError> {
    let gl = principal_gl(n)?;
    let ring = UeaRing(&gl);
    let det = capelli_matrix(&gl).noncomm_det(&ring, DetMode::Row)?;
    let top = HalfInt::int(n as i64);
    let monic = det.coeff(top) == Some(&UeaElement::one()) && det.top() == Some(top);
    let coefficients: Vec<UeaElement> = (1..=n).map(|k| det.coeff_or(&ring, HalfInt::int((n - k) as i64))).collect();
    let central = coefficients.iter().map(|c| gl.is_central(c)).collect();
    Ok(CapelliResult { n, monic, coefficients, central })
}

/// Outcome of the determinant identities for `gl_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DetIdentities {
    pub n: usize,
    /// `ρ(rdet(E+D)) = rdet(π_-E+F+D)` for `D = 0`
    pub rho_row_unshifted: bool,
    /// the same for `D = diag(0,-1,...,-N+1)`
    pub rho_row_shifted: bool,
    /// `ρ(cdet E) - ρ(rdet E)`
    pub cdet_correction: MElement,
    /// `rdet A = cdet A` for `A = z𝟙+F+π_-E+D`
    pub row_equals_column: bool,
    /// `s` with `rdet A = s |A|_{1N}`, if it is `±1`
    pub quasideterminant_sign: Option<i64>,
}

impl DetIdentities {
    /// For `N = 2`: `ρ(cdet E) - ρ(rdet E) = ρ([e_21, e_12]) = e_22 - e_11`
    /// with `E_ij = e_ji`.
    pub fn expected_correction(gl: &Gl) -> Option<MElement> {
        (gl.n() == 2).then(|| gl.reduce_mod_i(&gl.e_at(1, 1).minus(&gl.e_at(0, 0))))
    }
}

/// `E + D`, entry `(i,j)` equal to `e_{ji} + D_{ij}`.
fn e_plus_d(gl: &Gl, d: &[i64]) -> SeriesMatrix<UeaElement> {
    let ring = UeaRing(gl);
    let n = gl.n();
    let mut m = SeriesMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut c = gl.e_at(j, i);
            if i == j {
                c.add_assign(&UeaElement::scalar(Q::int(d[i])));
            }
            m.set(i, j, Series::constant(&ring, c));
        }
    }
    m
}

/// `π_-E + F + D`: entry `(i,j)` is `e_{ji}` for `j >= i`, `1` for `i = j+1`.
fn rho_of_e_plus_d(gl: &Gl, d: &[i64]) -> SeriesMatrix<UeaElement> {
    let ring = UeaRing(gl);
    let n = gl.n();
    let mut m = SeriesMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut c = if j >= i { gl.e_at(j, i) } else { UeaElement::zero() };
            if i == j + 1 {
                c.add_assign(&UeaElement::one());
            }
            if i == j {
                c.add_assign(&UeaElement::scalar(Q::int(d[i])));
            }
            m.set(i, j, Series::constant(&ring, c));
        }
    }
    m
}

fn reduced_constant(gl: &Gl, s: &Series<UeaElement>) -> MElement {
    gl.reduce_mod_i(&s.coeff(HalfInt::ZERO).cloned().unwrap_or_default())
}

/// `|A|_{1N} = a_{1N} - (a_{11} ... a_{1,N-1}) U^{-1} (a_{2N} ... a_{NN})^T`
/// for a matrix with unit subdiagonal and zeros below it; `U^{-1}` is a
/// finite sum, so the result is exact.
pub fn hessenberg_quasideterminant(gl: &Gl, a: &SeriesMatrix<UeaElement>) -> Result<Series<UeaElement>, WError> {
    let ring = UeaRing(gl);
    let n = a.rows();
    if n == 1 {
        return Ok(a.get(0, 0).clone());
    }
    let head: Vec<usize> = (0..n - 1).collect();
    let tail: Vec<usize> = (1..n).collect();
    let row = a.submatrix(&[0], &head);
    let col = a.submatrix(&tail, &[n - 1]);
    let u = a.submatrix(&tail, &head);
    let corr = row.mul(&ring, &u.unitriangular_inverse(&ring)?).mul(&ring, &col);
    Ok(a.get(0, n - 1).sub(&ring, corr.get(0, 0)))
}

pub fn det_identities(n: usize) -> Result<DetIdentities, WError> {
    let gl = principal_gl(n)?;
    let ring = UeaRing(&gl);
    let shift = gl.partition().shift_entries();
    let rho_row = |d: &[i64]| -> Result<bool, WError> {
        let lhs = e_plus_d(&gl, d).noncomm_det(&ring, DetMode::Row)?;
        let rhs = rho_of_e_plus_d(&gl, d).noncomm_det(&ring, DetMode::Row)?;
        Ok(reduced_constant(&gl, &lhs) == reduced_constant(&gl, &rhs))
    };
    let rho_row_unshifted = rho_row(&vec![0; n])?;
    let rho_row_shifted = rho_row(&shift)?;
    let e = e_plus_d(&gl, &vec![0; n]);
    let cdet = reduced_constant(&gl, &e.noncomm_det(&ring, DetMode::Column)?);
    let rdet = reduced_constant(&gl, &e.noncomm_det(&ring, DetMode::Row)?);
    let cdet_correction = cdet.minus(&rdet);
    let a = build_shifted_matrix(&gl);
    let row = a.noncomm_det(&ring, DetMode::Row)?;
    let column = a.noncomm_det(&ring, DetMode::Column)?;
    let quasi = hessenberg_quasideterminant(&gl, &a)?;
    let quasideterminant_sign = if row == quasi {
        Some(1)
    } else if row == quasi.neg(&ring) {
        Some(-1)
    } else {
        None
    };
    Ok(DetIdentities {
        n,
        rho_row_unshifted,
        rho_row_shifted,
        cdet_correction,
        row_equals_column: row == column,
        quasideterminant_sign,
    })
}

/// Single-entry selectors `I` (`N×1`, row `i`) and `J` (`1×N`, column `j`).
pub fn entry_selectors(n: usize, i: usize, j: usize) -> (ScalarMatrix, ScalarMatrix) {
    let mut i1 = ScalarMatrix::zeros(n, 1);
    i1.set(i, 0, Q::ONE);
    let mut j1 = ScalarMatrix::zeros(1, n);
    j1.set(0, j, Q::ONE);
    (i1, j1)
}

/// Whether the definition path `(J A^{-1} I)^{-1}` and the submatrix path
/// give the same quasideterminant down to `floor`.
pub fn quasideterminant_paths_agree(
    gl: &Gl,
    a: &SeriesMatrix<UeaElement>,
    i1: &ScalarMatrix,
    j1: &ScalarMatrix,
    floor: HalfInt,
) -> Result<bool, WError> {
    let ring = UeaRing(gl);
    let def = quasideterminant(&ring, a, i1, j1, floor)?;
    let sub = quasideterminant_submatrix(&ring, a, i1, j1, floor)?;
    Ok((0..def.rows()).all(|r| (0..def.cols()).all(|c| def.get(r, c).agrees_with(sub.get(r, c), floor))))
}

/// The inverse-commutator identity for `A = z𝟙+E` over `U(gl_N)`, with the
/// inverse known down to `floor`; returns the first failing quadruple.
pub fn inverse_commutator_witness(n: usize, floor: HalfInt) -> Result<Option<(usize, usize, usize, usize)>, WError> {
    let p = Partition::new(vec![1; n]).map_err(|e| WError::Input(e.to_string()))?;
    let gl = Gl::new(&p);
    let ring = UeaRing(&gl);
    let a = z_plus_e(&gl);
    let inv = a.inverse(&ring, floor)?;
    Ok(inverse_commutator_check(&ring, &a, &inv, floor))
}
