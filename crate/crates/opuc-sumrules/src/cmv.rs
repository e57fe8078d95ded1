//! Finite CMV matrices (and the banded container shared with block GGT
//! matrices), assembly from Verblunsky coefficients, and spectral measures
//! of the pair (C, e_1).

use crate::coeffs::{CoefficientKind, CoefficientSequence};
use crate::error::{OpucError, Result};
use crate::measure::{Atom, CircleMeasure};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitaryForm {
    /// Five-diagonal CMV shape (scalar bandwidth 2).
    Cmv,
    /// Block upper-Hessenberg GGT shape with block size p.
    Ggt { p: usize },
}

/// Unitary matrix held in LAPACK-style band storage. CMV matrices have
/// lower/upper bandwidth 2; block GGT matrices keep one block subdiagonal
/// and a full upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedUnitary {
    n: usize,
    kl: usize,
    ku: usize,
    /// bands[(ku + i - j) + (kl + ku + 1) * j] = entry (i, j)
    bands: Vec<Complex64>,
    form: UnitaryForm,
}

impl BandedUnitary {
    pub fn from_dense(m: &DMatrix<Complex64>, kl: usize, ku: usize, form: UnitaryForm) -> Self {
        let n = m.nrows();
        let rows = kl + ku + 1;
        let mut bands = vec![Complex64::default(); rows * n];
        for j in 0..n {
            for i in j.saturating_sub(ku)..(j + kl + 1).min(n) {
                bands[(ku + i - j) + rows * j] = m[(i, j)];
            }
        }
        BandedUnitary {
            n,
            kl,
            ku,
            bands,
            form,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn form(&self) -> UnitaryForm {
        self.form
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i >= self.n || j >= self.n || j > i + self.ku || i > j + self.kl {
            return Complex64::default();
        }
        self.bands[(self.ku + i - j) + (self.kl + self.ku + 1) * j]
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius deviation of U†U from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let u = self.to_dense();
        let p = u.adjoint() * &u;
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let d = p[(i, j)]
                    - if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::default()
                    };
                s += d.norm_sqr();
            }
        }
        s.sqrt()
    }
}

/// Finite CMV matrix from alpha_0..alpha_{n-1} with |alpha_{n-1}| = 1,
/// via the Theta-block LM factorization matching the five-diagonal display.
pub fn cmv_assemble(alphas: &CoefficientSequence, n: usize) -> Result<BandedUnitary> {
    alphas.expect_kind(CoefficientKind::Plain)?;
    if n == 0 {
        return Err(OpucError::Domain("CMV dimension must be positive".into()));
    }
    let mut a = Vec::with_capacity(n);
    for k in 0..n {
        a.push(alphas.get(k).ok_or_else(|| {
            OpucError::Domain(format!("coefficient alpha_{k} unavailable (tail none)"))
        })?);
    }
    let last_norm = a[n - 1].norm();
    if (last_norm - 1.0).abs() > 1e-10 {
        return Err(OpucError::InvalidFinalCoefficient(last_norm));
    }
    for x in a.iter().take(n - 1) {
        if x.norm() >= 1.0 {
            return Err(OpucError::CoefficientOutsideDisk(x.norm()));
        }
    }
    let m = cmv_dense(&a);
    Ok(BandedUnitary::from_dense(&m, 2, 2, UnitaryForm::Cmv))
}

/// Dense CMV from a full coefficient vector (|last| = 1 assumed checked).
pub fn cmv_dense(a: &[Complex64]) -> DMatrix<Complex64> {
    let n = a.len();
    let rho = |k: usize| (1.0 - a[k].norm_sqr()).max(0.0).sqrt();
    let theta = |k: usize| -> DMatrix<Complex64> {
        DMatrix::from_row_slice(
            2,
            2,
            &[
                a[k].conj(),
                Complex64::new(rho(k), 0.0),
                Complex64::new(rho(k), 0.0),
                -a[k],
            ],
        )
    };
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    // L = Theta_0 ⊕ Theta_2 ⊕ ... ; M = [1] ⊕ Theta_1 ⊕ Theta_3 ⊕ ...
    // with the trailing 2x2 replaced by the scalar conj(alpha_{n-1}).
    let mut i = 0;
    while i < n {
        if i + 1 < n {
            l.view_mut((i, i), (2, 2)).copy_from(&theta(i));
            i += 2;
        } else {
            l[(i, i)] = a[i].conj();
            i += 1;
        }
    }
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    let mut i = 1;
    while i < n {
        if i + 1 < n {
            m.view_mut((i, i), (2, 2)).copy_from(&theta(i));
            i += 2;
        } else {
            m[(i, i)] = a[i].conj();
            i += 1;
        }
    }
    l * m
}

fn cayley_hermitian(u: &DMatrix<Complex64>, phi: f64) -> Option<DMatrix<Complex64>> {
    let n = u.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let w = Complex64::from_polar(1.0, -phi);
    let us = u.map(|x| w * x);
    let a = &id - &us;
    let ainv = a.try_inverse()?;
    // conditioning guard: ||(I-U)^-1|| large means an eigenvalue near 1
    let norm = ainv.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm > 1e9 {
        return None;
    }
    let m = (&id + &us) * &ainv * Complex64::new(0.0, 1.0);
    // clean to exactly Hermitian before the symmetric solver
    Some((&m + &m.adjoint()).map(|x| 0.5 * x))
}

fn angle_from_cayley(x: f64, phi: f64) -> f64 {
    // x = -cot(theta/2)  =>  theta = pi + 2 atan(x), in (0, 2pi)
    let mut t = PI + 2.0 * x.atan() + phi;
    while t < 0.0 {
        t += 2.0 * PI;
    }
    while t >= 2.0 * PI {
        t -= 2.0 * PI;
    }
    t
}

const CAYLEY_SHIFTS: [f64; 5] = [0.0, 0.9127362517462636, 2.0717385, 3.9079318, 5.1240091];

/// Eigen-angles (in [0, 2pi)) and orthonormal eigenvectors of a unitary
/// matrix, through the Cayley transform to a Hermitian eigenproblem.
pub fn unitary_eigen(u: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    for &phi in &CAYLEY_SHIFTS {
        let Some(mh) = cayley_hermitian(u, phi) else {
            continue;
        };
        let se = nalgebra::SymmetricEigen::new(mh);
        let angles = se
            .eigenvalues
            .iter()
            .map(|&x| angle_from_cayley(x, phi))
            .collect();
        return Ok((angles, se.eigenvectors));
    }
    Err(OpucError::Linalg(
        "unitary eigenproblem: all Cayley shifts failed".into(),
    ))
}

/// Eigen-angles only (no eigenvectors); markedly cheaper for atom location
/// and spectral statistics.
pub fn unitary_eigen_angles(u: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    for &phi in &CAYLEY_SHIFTS {
        let Some(mh) = cayley_hermitian(u, phi) else {
            continue;
        };
        let ev = mh.symmetric_eigenvalues();
        return Ok(ev.iter().map(|&x| angle_from_cayley(x, phi)).collect());
    }
    Err(OpucError::Linalg(
        "unitary eigenproblem: all Cayley shifts failed".into(),
    ))
}

/// Spectral measure of (C, e_1): atoms at the eigen-angles with weights
/// |<psi_k, e_1>|^2.
pub fn spectral_measure_finite(cmv: &BandedUnitary) -> Result<CircleMeasure> {
    let u = cmv.to_dense();
    let defect = cmv.unitarity_defect();
    if defect > 1e-10 {
        return Err(OpucError::Linalg(format!(
            "matrix is not unitary (defect {defect:.2e})"
        )));
    }
    let (angles, vecs) = unitary_eigen(&u)?;
    let mut atoms: Vec<Atom> = Vec::with_capacity(angles.len());
    for (k, theta) in angles.iter().enumerate() {
        let w = vecs[(0, k)].norm_sqr();
        if w <= 1e-15 {
            continue;
        }
        // merge near-coincident eigen-angles (multiplicity from truncation)
        if let Some(prev) = atoms.iter_mut().find(|a| (a.theta - theta).abs() < 1e-11) {
            prev.weight += w;
        } else {
            atoms.push(Atom {
                theta: *theta,
                weight: w,
            });
        }
    }
    let total: f64 = atoms.iter().map(|a| a.weight).sum();
    for a in &mut atoms {
        a.weight /= total;
    }
    atoms.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    CircleMeasure::from_atoms(atoms)
}

/// Re tr U expressed in the Verblunsky coefficients:
/// Re(alpha_0 - sum_{k>=1} alpha_k conj(alpha_{k-1})).
///
/// The k = 0 term of the corresponding trace identity is dropped
/// (alpha_{-1} := 0); this is the convention pinned by the numeric trace
/// test against the assembled CMV matrix.
pub fn trace_functional(alphas: &[Complex64]) -> f64 {
    if alphas.is_empty() {
        return 0.0;
    }
    let mut s = alphas[0];
    for k in 1..alphas.len() {
        s -= alphas[k] * alphas[k - 1].conj();
    }
    s.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Tail;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn seq(head: Vec<Complex64>) -> CoefficientSequence {
        CoefficientSequence::plain(head, Tail::None).unwrap()
    }

    #[test]
    fn one_by_one() {
        let s = seq(vec![Complex64::from_polar(1.0, 0.7)]);
        let u = cmv_assemble(&s, 1).unwrap();
        assert!((u.get(0, 0) - Complex64::from_polar(1.0, -0.7)).norm() < 1e-15);
    }

    #[test]
    fn two_by_two_flip() {
        let s = seq(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let u = cmv_assemble(&s, 2).unwrap();
        let d = u.to_dense();
        assert!((d[(0, 0)]).norm() < 1e-15);
        assert!((d[(0, 1)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((d[(1, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((d[(1, 1)]).norm() < 1e-15);
        // spectral measure: (delta_1 + delta_{-1})/2
        let mu = spectral_measure_finite(&u).unwrap();
        let atoms = mu.atoms();
        assert_eq!(atoms.len(), 2);
        assert!(atoms[0].theta.abs() < 1e-8 && (atoms[0].weight - 0.5).abs() < 1e-10);
        assert!((atoms[1].theta - PI).abs() < 1e-8 && (atoms[1].weight - 0.5).abs() < 1e-10);
    }

    #[test]
    fn five_diagonal_pattern_and_unitarity() {
        let head = vec![
            c(0.3, 0.1),
            c(-0.2, 0.4),
            c(0.5, -0.3),
            c(0.1, 0.6),
            c(-0.4, -0.2),
        ];
        let mut a = head.clone();
        a.push(Complex64::from_polar(1.0, 1.234));
        let s = CoefficientSequence::plain(a, Tail::None).unwrap();
        let u = cmv_assemble(&s, 6).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
        let d = u.to_dense();
        for i in 0..6 {
            for j in 0..6 {
                if j + 2 < i || i + 2 < j {
                    assert!(
                        d[(i, j)].norm() < 1e-15,
                        "entry ({i},{j}) outside the 5 diagonals"
                    );
                }
            }
        }
    }

    #[test]
    fn first_rows_match_display() {
        let a = vec![
            c(0.3, 0.1),
            c(-0.2, 0.4),
            c(0.5, -0.3),
            Complex64::from_polar(1.0, 0.4),
        ];
        let rho: Vec<f64> = a
            .iter()
            .map(|x| (1.0 - x.norm_sqr()).max(0.0).sqrt())
            .collect();
        let s = CoefficientSequence::plain(a.clone(), Tail::None).unwrap();
        let d = cmv_assemble(&s, 4).unwrap().to_dense();
        assert!((d[(0, 0)] - a[0].conj()).norm() < 1e-15);
        assert!((d[(0, 1)] - a[1].conj() * rho[0]).norm() < 1e-15);
        assert!((d[(0, 2)] - Complex64::new(rho[1] * rho[0], 0.0)).norm() < 1e-15);
        assert!((d[(1, 0)] - Complex64::new(rho[0], 0.0)).norm() < 1e-15);
        assert!((d[(1, 1)] + a[1].conj() * a[0]).norm() < 1e-15);
        assert!((d[(2, 1)] - a[2].conj() * rho[1]).norm() < 1e-15);
        assert!((d[(2, 2)] + a[2].conj() * a[1]).norm() < 1e-15);
    }

    #[test]
    fn trace_formula_matches_assembled_matrix() {
        let a = vec![
            c(0.3, 0.1),
            c(-0.2, 0.4),
            c(0.5, -0.3),
            c(0.1, 0.6),
            Complex64::from_polar(1.0, 2.1),
        ];
        let s = CoefficientSequence::plain(a.clone(), Tail::None).unwrap();
        let u = cmv_assemble(&s, 5).unwrap();
        assert!((u.trace().re - trace_functional(&a)).abs() < 1e-13);
    }

    #[test]
    fn spectral_moments_match_matrix_powers() {
        let a = vec![
            c(0.3, 0.1),
            c(-0.2, 0.4),
            c(0.5, -0.3),
            Complex64::from_polar(1.0, 0.4),
        ];
        let s = CoefficientSequence::plain(a, Tail::None).unwrap();
        let u = cmv_assemble(&s, 4).unwrap();
        let mu = spectral_measure_finite(&u).unwrap();
        let d = u.to_dense();
        let mut p = DMatrix::<Complex64>::identity(4, 4);
        for k in 1..=6i64 {
            p = &p * &d;
            let mk = mu.moment(k);
            assert!(
                (mk - p[(0, 0)]).norm() < 1e-10,
                "moment {k}: {mk} vs {}",
                p[(0, 0)]
            );
        }
    }
}
