//! Schur functions with closed-form tails, Carathéodory evaluation, and the
//! radial-limit machinery for densities and atom masses.

use crate::coeffs::{CoefficientKind, CoefficientSequence, Tail};
use crate::error::{OpucError, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchurTail {
    /// All remaining coefficients vanish; the tail Schur function is 0.
    Zero,
    /// Constant coefficient c with |c| < 1 (Geronimus); the tail Schur
    /// function is the fixed point of f = T_{-c}(z f).
    Geronimus(Complex64),
}

/// Schur function presented by a finite coefficient head and a closed-form
/// tail. Evaluation runs the Schur algorithm backwards: f_j = T_{-a_j}(z f_{j+1}).
#[derive(Debug, Clone, PartialEq)]
pub struct SchurFunction {
    head: Vec<Complex64>,
    tail: SchurTail,
}

impl SchurFunction {
    pub fn new(head: Vec<Complex64>, tail: SchurTail) -> Result<Self> {
        for a in &head {
            if a.norm() >= 1.0 {
                return Err(OpucError::CoefficientOutsideDisk(a.norm()));
            }
        }
        if let SchurTail::Geronimus(c) = tail {
            if c.norm() >= 1.0 {
                return Err(OpucError::CoefficientOutsideDisk(c.norm()));
            }
        }
        Ok(SchurFunction { head, tail })
    }

    /// Build from a plain coefficient sequence with zero or constant tail.
    pub fn from_coefficients(seq: &CoefficientSequence) -> Result<Self> {
        seq.expect_kind(CoefficientKind::Plain)?;
        let tail = match seq.tail() {
            Tail::Zero => SchurTail::Zero,
            Tail::Constant { value } => {
                let c = Complex64::new(value.0, value.1);
                if c.norm() == 0.0 {
                    SchurTail::Zero
                } else {
                    SchurTail::Geronimus(c)
                }
            }
            Tail::None => {
                return Err(OpucError::Domain(
                    "Schur evaluation needs a zero or constant tail".into(),
                ))
            }
        };
        SchurFunction::new(seq.head().to_vec(), tail)
    }

    pub fn head(&self) -> &[Complex64] {
        &self.head
    }

    pub fn tail(&self) -> SchurTail {
        self.tail
    }

    /// sin(theta_c/2) for the Geronimus tail: the essential support is the
    /// arc [theta_c, 2pi - theta_c].
    pub fn tail_arc_half_sine(&self) -> f64 {
        match self.tail {
            SchurTail::Zero => 0.0,
            SchurTail::Geronimus(c) => c.norm(),
        }
    }

    fn tail_value(&self, z: Complex64) -> Complex64 {
        match self.tail {
            SchurTail::Zero => Complex64::default(),
            SchurTail::Geronimus(c) => geronimus_fixed_point(z, c),
        }
    }

    fn backward(&self, z: Complex64, mut f: Complex64) -> Complex64 {
        for &a in self.head.iter().rev() {
            let zf = z * f;
            f = (zf + a) / (Complex64::new(1.0, 0.0) + a.conj() * zf);
        }
        f
    }

    /// Schur function value at |z| < 1.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(OpucError::OutsideDisk(z.norm()));
        }
        Ok(self.backward(z, self.tail_value(z)))
    }

    /// Carathéodory function F = (1 + z f)/(1 - z f) at |z| < 1.
    pub fn caratheodory(&self, z: Complex64) -> Result<Complex64> {
        let f = self.eval(z)?;
        let zf = z * f;
        Ok((Complex64::new(1.0, 0.0) + zf) / (Complex64::new(1.0, 0.0) - zf))
    }

    /// Boundary Carathéodory value at z = e^{i theta}, valid where the tail
    /// branch is unambiguous (inside the essential-support arc, or any theta
    /// for a zero tail). The minimal-modulus root of the tail quadratic is
    /// the Schur branch there.
    pub(crate) fn caratheodory_boundary(&self, theta: f64) -> Option<Complex64> {
        let z = Complex64::from_polar(1.0, theta);
        let tail = match self.tail {
            SchurTail::Zero => Complex64::default(),
            SchurTail::Geronimus(c) => {
                // inside the arc iff sin^2(theta/2) > |c|^2
                let s = (theta / 2.0).sin();
                if s * s <= c.norm_sqr() {
                    return None;
                }
                geronimus_fixed_point(z, c)
            }
        };
        let f = self.backward(z, tail);
        let zf = z * f;
        let denom = Complex64::new(1.0, 0.0) - zf;
        if denom.norm() < 1e-150 {
            return None;
        }
        Some((Complex64::new(1.0, 0.0) + zf) / denom)
    }
}

/// |f| <= 1 root of conj(c)·z·f² + (1−z)·f − c = 0. For |z| < 1 exactly one
/// root lies in the closed disk; on the support arc it is the
/// smaller-modulus root as well.
fn geronimus_fixed_point(z: Complex64, c: Complex64) -> Complex64 {
    if z.norm() < 1e-14 {
        return c;
    }
    let one = Complex64::new(1.0, 0.0);
    let disc = (one - z) * (one - z) + 4.0 * c.norm_sqr() * z;
    let sq = disc.sqrt();
    let den = 2.0 * c.conj() * z;
    let r1 = (-(one - z) + sq) / den;
    let r2 = (-(one - z) - sq) / den;
    if r1.norm() <= r2.norm() {
        r1
    } else {
        r2
    }
}

/// Spectral density w.r.t. dtheta/2pi, as the radial limit of Re F.
///
/// Inside the essential-support arc the boundary value is evaluated
/// directly (the limit exists and the branch is pinned by |f| < 1); outside
/// it the a.c. part vanishes identically for this closed-tail family.
pub fn caratheodory_density(f: &SchurFunction, theta: f64) -> f64 {
    match f.caratheodory_boundary(theta) {
        Some(cf) => cf.re.max(0.0),
        None => 0.0,
    }
}

/// Radial atom-mass estimate lim_{r->1} (1-r)/2 · F(r e^{i theta}) via the
/// sequence r_j = 1 - 2^{-j}, j = 8..20, with Richardson extrapolation.
pub fn atom_mass(f: &SchurFunction, theta: f64) -> Result<f64> {
    let mut prev = f64::NAN;
    let mut prev2 = f64::NAN;
    let mut best = 0.0;
    for j in 8..=20u32 {
        let r = 1.0 - 2f64.powi(-(j as i32));
        let z = Complex64::from_polar(r, theta);
        let cf = f.caratheodory(z)?;
        let m = (1.0 - r) / 2.0 * cf.re;
        if j >= 10 {
            // m(h) = w + c1 h + c2 h^2, h = 2^-j: two-point Richardson
            best = 2.0 * m - prev;
        }
        prev2 = prev;
        prev = m;
    }
    let _ = prev2;
    if !best.is_finite() {
        return Err(OpucError::RadialLimit(format!(
            "atom mass extrapolation at theta = {theta} is not finite"
        )));
    }
    Ok(best.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_coefficients_zero_function() {
        let f = SchurFunction::new(vec![], SchurTail::Zero).unwrap();
        assert_eq!(f.eval(c(0.3, 0.2)).unwrap(), c(0.0, 0.0));
        assert!((caratheodory_density(&f, 1.1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_alpha_constant_function() {
        let f = SchurFunction::new(vec![c(0.37, -0.11)], SchurTail::Zero).unwrap();
        for z in [c(0.0, 0.0), c(0.5, 0.1), c(-0.2, -0.7)] {
            assert!((f.eval(z).unwrap() - c(0.37, -0.11)).norm() < 1e-15);
        }
    }

    #[test]
    fn bernstein_szego_density() {
        // alpha_0 = 0.6: density = (1 - 0.36)/|1 - 0.6 e^{i theta}|^2
        let f = SchurFunction::new(vec![c(0.6, 0.0)], SchurTail::Zero).unwrap();
        for theta in [0.1, 1.0, 2.5, PI, 5.0] {
            let z = Complex64::from_polar(1.0, theta);
            let expect = (1.0 - 0.36) / (c(1.0, 0.0) - 0.6 * z).norm_sqr();
            assert!((caratheodory_density(&f, theta) - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn geronimus_tail_value_at_zero() {
        // constant gamma_d tail, d = 1: f(0) = c = -1/2
        let f = SchurFunction::new(vec![], SchurTail::Geronimus(c(-0.5, 0.0))).unwrap();
        assert!((f.eval(c(0.0, 0.0)).unwrap() - c(-0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn geronimus_density_matches_hp_equilibrium() {
        // d = 1: support [pi/3, 5pi/3], density (1+d) sqrt(sin^2(t/2) - 1/4)/sin(t/2)
        let d = 1.0;
        let f = SchurFunction::new(vec![], SchurTail::Geronimus(c(-0.5, 0.0))).unwrap();
        let td = PI / 3.0;
        for theta in [td + 0.2, PI, 2.0 * PI - td - 0.2] {
            let s2 = (theta / 2.0).sin().powi(2) - (td / 2.0).sin().powi(2);
            let expect = (1.0 + d) * s2.sqrt() / (theta / 2.0).sin();
            let got = caratheodory_density(&f, theta);
            assert!(
                (got - expect).abs() < 1e-10,
                "theta={theta}: {got} vs {expect}"
            );
        }
        // outside the arc the density vanishes
        assert_eq!(caratheodory_density(&f, td / 2.0), 0.0);
    }

    #[test]
    fn positivity_of_caratheodory() {
        let f = SchurFunction::new(
            vec![c(0.4, 0.3), c(-0.2, 0.5)],
            SchurTail::Geronimus(c(-0.3, 0.1)),
        )
        .unwrap();
        for &r in &[0.1, 0.5, 0.9, 0.99] {
            for k in 0..12 {
                let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / 12.0);
                assert!(f.caratheodory(z).unwrap().re > 0.0);
            }
        }
    }

    #[test]
    fn boundary_domain_error() {
        let f = SchurFunction::new(vec![c(0.1, 0.0)], SchurTail::Zero).unwrap();
        assert!(f.eval(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn pure_atom_mass() {
        // single coefficient of modulus ~1 is outlawed in SchurFunction; a
        // Dirac at angle t0 has F with a pole there. Emulate with the
        // Bernstein-Szego family pushed near the boundary instead: the mass
        // of a genuine atom is exercised end-to-end in the reconstruct tests.
        let f = SchurFunction::new(vec![], SchurTail::Zero).unwrap();
        assert!(atom_mass(&f, 1.0).unwrap() < 1e-12);
    }
}
