//! Coefficient sequences: plain Verblunsky coefficients, their deformed
//! counterparts, transforms between the two, and recovery from moments.

use crate::error::{OpucError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientKind {
    Plain,
    Deformed,
}

/// Tail behaviour past the stored head.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Tail {
    Zero,
    Constant { value: (f64, f64) },
    None,
}

impl Tail {
    pub fn constant(c: Complex64) -> Self {
        Tail::Constant {
            value: (c.re, c.im),
        }
    }

    pub fn value(&self) -> Option<Complex64> {
        match self {
            Tail::Zero => Some(Complex64::default()),
            Tail::Constant { value } => Some(Complex64::new(value.0, value.1)),
            Tail::None => None,
        }
    }
}

/// Finite head of a coefficient sequence plus a tail descriptor. All head
/// values lie in the closed unit disk; a unimodular value is only legal in
/// the last slot (it encodes a finitely supported measure).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    kind: CoefficientKind,
    head: Vec<Complex64>,
    tail: Tail,
}

const UNIT_TOL: f64 = 1e-12;

impl CoefficientSequence {
    pub fn new(kind: CoefficientKind, head: Vec<Complex64>, tail: Tail) -> Result<Self> {
        for (k, a) in head.iter().enumerate() {
            let n = a.norm();
            if n > 1.0 + UNIT_TOL {
                return Err(OpucError::CoefficientOutsideDisk(n));
            }
            let is_last = k + 1 == head.len();
            if n >= 1.0 - UNIT_TOL && !(is_last && tail == Tail::None) {
                return Err(OpucError::InteriorUnimodular);
            }
        }
        if let Tail::Constant { value } = tail {
            let n = Complex64::new(value.0, value.1).norm();
            if n >= 1.0 - UNIT_TOL {
                return Err(OpucError::CoefficientOutsideDisk(n));
            }
        }
        Ok(CoefficientSequence { kind, head, tail })
    }

    pub fn plain(head: Vec<Complex64>, tail: Tail) -> Result<Self> {
        Self::new(CoefficientKind::Plain, head, tail)
    }

    pub fn deformed(head: Vec<Complex64>, tail: Tail) -> Result<Self> {
        Self::new(CoefficientKind::Deformed, head, tail)
    }

    pub fn kind(&self) -> CoefficientKind {
        self.kind
    }

    pub fn head(&self) -> &[Complex64] {
        &self.head
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Coefficient at index k, extending by the tail value.
    pub fn get(&self, k: usize) -> Option<Complex64> {
        if k < self.head.len() {
            Some(self.head[k])
        } else {
            self.tail.value()
        }
    }

    /// Finitely supported measure: the last head value is unimodular.
    pub fn is_trivial(&self) -> bool {
        self.tail == Tail::None
            && self
                .head
                .last()
                .map(|a| a.norm() >= 1.0 - UNIT_TOL)
                .unwrap_or(false)
    }

    pub fn expect_kind(&self, kind: CoefficientKind) -> Result<()> {
        if self.kind != kind {
            let name = |k| match k {
                CoefficientKind::Plain => "plain",
                CoefficientKind::Deformed => "deformed",
            };
            return Err(OpucError::KindMismatch {
                expected: name(kind),
                found: name(self.kind),
            });
        }
        Ok(())
    }
}

/// Unimodular phase product prod_{j<k} (1-conj g_j)/(1-g_j) driving the
/// deformed/plain correspondence. Errors когда some g_j = 1.
fn phase_product_step(prod: Complex64, g: Complex64) -> Result<Complex64> {
    let denom = Complex64::new(1.0, 0.0) - g;
    if denom.norm() < 1e-14 {
        return Err(OpucError::SingularInput);
    }
    Ok(prod * denom.conj() / denom)
}

/// gamma_0 = conj(alpha_0); gamma_k = conj(alpha_k)·prod_{j<k}(1-conj g_j)/(1-g_j).
pub fn deformed_from_alphas(alphas: &CoefficientSequence) -> Result<CoefficientSequence> {
    alphas.expect_kind(CoefficientKind::Plain)?;
    let mut prod = Complex64::new(1.0, 0.0);
    let mut gammas = Vec::with_capacity(alphas.head().len());
    for &a in alphas.head() {
        let g = a.conj() * prod;
        gammas.push(g);
        prod = phase_product_step(prod, g)?;
    }
    let tail = match alphas.tail() {
        Tail::Zero => Tail::Zero,
        Tail::None => Tail::None,
        Tail::Constant { value } => {
            // a real constant plain tail maps to itself only when the phase
            // product has stabilised; for general input the deformed tail is
            // constant iff the product is fixed, i.e. the tail gamma is real.
            let c = Complex64::new(value.0, value.1);
            let g = c.conj() * prod;
            if g.im.abs() > 1e-13 {
                return Err(OpucError::Domain(
                    "plain constant tail does not map to a constant deformed tail".into(),
                ));
            }
            Tail::constant(g)
        }
    };
    CoefficientSequence::deformed(gammas, tail)
}

/// Exact inverse of [`deformed_from_alphas`].
pub fn alphas_from_deformed(gammas: &CoefficientSequence) -> Result<CoefficientSequence> {
    gammas.expect_kind(CoefficientKind::Deformed)?;
    let mut prod = Complex64::new(1.0, 0.0);
    let mut alphas = Vec::with_capacity(gammas.head().len());
    for &g in gammas.head() {
        alphas.push((g / prod).conj());
        prod = phase_product_step(prod, g)?;
    }
    let tail = match gammas.tail() {
        Tail::Zero => Tail::Zero,
        Tail::None => Tail::None,
        Tail::Constant { value } => {
            let g = Complex64::new(value.0, value.1);
            if g.im.abs() > 1e-13 {
                return Err(OpucError::Domain(
                    "constant deformed tail with nonreal value has no constant plain tail".into(),
                ));
            }
            Tail::constant((g / prod).conj())
        }
    };
    CoefficientSequence::plain(alphas, tail)
}

/// Verblunsky coefficients from trigonometric moments m_1..m_count
/// (m_0 = 1) via the Szegő recursion driven by the moment functional.
///
/// The orthogonality condition <1, phi_{k+1}> = 0 determines
/// conj(alpha_k) = <1, z phi_k> / <1, phi_k*> where <1, q> = int q dmu is a
/// plain moment sum. The positive-definiteness of the Toeplitz moment matrix
/// is tracked through |alpha_k| < 1.
pub fn verblunsky_from_moments(moments: &[Complex64], count: usize) -> Result<CoefficientSequence> {
    if moments.len() < count + 1 {
        return Err(OpucError::Domain(format!(
            "need moments m_0..m_{count}, got {} values",
            moments.len()
        )));
    }
    let m = |j: usize| moments[j];
    let mut phi = vec![Complex64::new(1.0, 0.0)];
    let mut alphas = Vec::with_capacity(count);
    for k in 0..count {
        // z*phi_k has coefficients shifted up by one
        let mut num = Complex64::default();
        for (j, c) in phi.iter().enumerate() {
            num += c * m(j + 1);
        }
        // phi_k* coefficients: conj reversed
        let mut den = Complex64::default();
        for (j, c) in phi.iter().enumerate() {
            den += c.conj() * m(k - j);
        }
        if den.norm() < 1e-300 {
            return Err(OpucError::MomentsNotPositiveDefinite(k));
        }
        let a_conj = num / den;
        let alpha = a_conj.conj();
        if alpha.norm() >= 1.0 - 1e-13 {
            return Err(OpucError::MomentsNotPositiveDefinite(k));
        }
        alphas.push(alpha);
        // phi_{k+1} = z phi_k - conj(alpha) phi_k*
        let mut next = vec![Complex64::default(); k + 2];
        for (j, c) in phi.iter().enumerate() {
            next[j + 1] += c;
        }
        for j in 0..=k {
            next[j] -= a_conj * phi[k - j].conj();
        }
        phi = next;
    }
    CoefficientSequence::plain(alphas, Tail::None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_alphas_fixed_by_deformation() {
        let a =
            CoefficientSequence::plain(vec![c(0.3, 0.0), c(-0.5, 0.0), c(0.7, 0.0)], Tail::Zero)
                .unwrap();
        let g = deformed_from_alphas(&a).unwrap();
        for (x, y) in a.head().iter().zip(g.head()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn two_step_hand_value() {
        // alpha_0 = 0.5i, alpha_1 = 0.3 -> gamma_0 = -0.5i, gamma_1 = 0.18 - 0.24i
        let a = CoefficientSequence::plain(vec![c(0.0, 0.5), c(0.3, 0.0)], Tail::Zero).unwrap();
        let g = deformed_from_alphas(&a).unwrap();
        assert!((g.head()[0] - c(0.0, -0.5)).norm() < 1e-15);
        assert!(
            (g.head()[1] - c(0.18, -0.24)).norm() < 1e-15,
            "{}",
            g.head()[1]
        );
    }

    #[test]
    fn round_trip() {
        let a = CoefficientSequence::plain(
            vec![c(0.3, -0.41), c(-0.22, 0.6), c(0.11, 0.17), c(-0.05, -0.71)],
            Tail::Zero,
        )
        .unwrap();
        let g = deformed_from_alphas(&a).unwrap();
        let back = alphas_from_deformed(&g).unwrap();
        for (x, y) in a.head().iter().zip(back.head()) {
            assert!((x - y).norm() < 1e-14);
        }
        // |gamma_k| = |alpha_k|
        for (x, y) in a.head().iter().zip(g.head()) {
            assert!((x.norm() - y.norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn inverse_of_worked_example() {
        let g =
            CoefficientSequence::deformed(vec![c(0.0, -0.5), c(0.18, -0.24)], Tail::Zero).unwrap();
        let a = alphas_from_deformed(&g).unwrap();
        assert!((a.head()[0] - c(0.0, 0.5)).norm() < 1e-14);
        assert!((a.head()[1] - c(0.3, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn constant_real_tail_is_fixed_point() {
        let g = CoefficientSequence::deformed(vec![c(-0.5, 0.0)], Tail::constant(c(-0.5, 0.0)))
            .unwrap();
        let a = alphas_from_deformed(&g).unwrap();
        assert_eq!(a.tail().value().unwrap(), c(-0.5, 0.0));
    }

    #[test]
    fn uniform_moments_give_zero_alphas() {
        let m = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let a = verblunsky_from_moments(&m, 3).unwrap();
        for x in a.head() {
            assert_eq!(*x, c(0.0, 0.0));
        }
    }

    #[test]
    fn gw_first_moment() {
        // GW_g equilibrium, g = 0.5: m_1 = g/2, alpha_0 = 0.25
        let g = 0.5;
        let m = vec![c(1.0, 0.0), c(g / 2.0, 0.0), c(0.0, 0.0)];
        let a = verblunsky_from_moments(&m, 1).unwrap();
        assert!((a.head()[0] - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn interior_unimodular_rejected() {
        let r = CoefficientSequence::plain(vec![c(1.0, 0.0), c(0.3, 0.0)], Tail::Zero);
        assert!(r.is_err());
        // but legal as the final coefficient of a trivial sequence
        let ok = CoefficientSequence::plain(vec![c(0.3, 0.0), c(1.0, 0.0)], Tail::None);
        assert!(ok.is_ok());
    }
}
