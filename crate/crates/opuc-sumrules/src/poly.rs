//! Complex polynomials in the monomial basis, sized for the Szegő recursion.

use crate::error::{OpucError, Result};
use num_complex::Complex64;

pub const DEGREE_CAP: usize = 4096;

/// Coefficient vector, index = power of z. Kept trimmed so that the leading
/// coefficient is nonzero (except for the zero polynomial).
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn one() -> Self {
        Polynomial {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// z * p(z)
    pub fn mul_z(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(Complex64::default());
        c.extend_from_slice(&self.coeffs);
        Polynomial { coeffs: c }
    }

    /// Reversed polynomial p*(z) = z^deg · conj(p(1/conj(z))): conjugate and
    /// reverse the coefficient vector at the given degree.
    pub fn reversed(&self, degree: usize) -> Self {
        let mut c = vec![Complex64::default(); degree + 1];
        for (k, v) in self.coeffs.iter().enumerate() {
            c[degree - k] = v.conj();
        }
        Polynomial::new(c)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().map(|c| c.norm() == 0.0).unwrap_or(false)
        {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(Complex64::default());
        }
    }
}

/// One step of the Szegő recursion on monic orthogonal polynomials:
/// phi_{k+1} = z·phi_k − conj(alpha)·phi_k*,  phi*_{k+1} = phi_k* − alpha·z·phi_k.
pub fn szego_step(
    phi: &Polynomial,
    phi_star: &Polynomial,
    alpha: Complex64,
) -> Result<(Polynomial, Polynomial)> {
    if alpha.norm() > 1.0 + 1e-14 {
        return Err(OpucError::CoefficientOutsideDisk(alpha.norm()));
    }
    let k = phi.degree();
    if k + 1 > DEGREE_CAP {
        return Err(OpucError::DegreeCap(k + 1, DEGREE_CAP));
    }
    let zphi = phi.mul_z();
    let ac = alpha.conj();
    let mut next = vec![Complex64::default(); k + 2];
    let mut next_star = vec![Complex64::default(); k + 2];
    for j in 0..=k + 1 {
        next[j] = zphi.coeff(j) - ac * phi_star.coeff(j);
        next_star[j] = phi_star.coeff(j) - alpha * zphi.coeff(j);
    }
    Ok((Polynomial::new(next), Polynomial::new(next_star)))
}

/// Monic orthogonal polynomial of the given degree for a coefficient head,
/// along with its reversed companion.
pub fn szego_iterate(alphas: &[Complex64]) -> Result<(Polynomial, Polynomial)> {
    let mut phi = Polynomial::one();
    let mut star = Polynomial::one();
    for &a in alphas {
        let (p, s) = szego_step(&phi, &star, a)?;
        phi = p;
        star = s;
    }
    Ok((phi, star))
}
