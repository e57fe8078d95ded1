//! Measures on the unit circle: an absolutely continuous density on an arc
//! (w.r.t. dtheta/2pi) plus finitely many atoms.

use crate::error::{OpucError, Result};
use crate::quad::{self, sin_sq_diff};
use crate::schur::{caratheodory_density, SchurFunction};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub theta: f64,
    pub weight: f64,
}

/// Density evaluators, all w.r.t. dtheta/(2 pi) on the arc.
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    Zero,
    Uniform,
    /// Gross-Witten equilibrium density for any coupling g.
    GrossWitten {
        g: f64,
    },
    /// Hua-Pickrell equilibrium density, parameter d >= 0.
    HuaPickrell {
        d: f64,
    },
    /// Reconstruction from a Schur function (boundary Carathéodory values).
    Schur(SchurFunction),
    /// Piecewise-linear interpolation of tabulated values.
    Grid {
        thetas: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Density {
    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            Density::Zero => 0.0,
            Density::Uniform => 1.0,
            Density::GrossWitten { g } => gw_density(*g, theta),
            Density::HuaPickrell { d } => hp_density(*d, theta),
            Density::Schur(f) => caratheodory_density(f, theta),
            Density::Grid { thetas, values } => grid_interp(thetas, values, theta),
        }
    }
}

/// Gross-Witten equilibrium density w.r.t. dtheta/2pi; theta in [0, 2pi).
pub fn gw_density(g: f64, theta: f64) -> f64 {
    if g.abs() <= 1.0 {
        return 1.0 + g * theta.cos();
    }
    let half_sine = 1.0 / g.abs().sqrt(); // sin(theta_g / 2)
    let tg = 2.0 * half_sine.asin();
    if g > 1.0 {
        // support [-theta_g, theta_g], here parametrized over [0,2pi)
        let t = if theta > PI { theta - TWO_PI } else { theta };
        if t.abs() >= tg {
            return 0.0;
        }
        let s2 = sin_sq_diff(tg / 2.0, t / 2.0);
        2.0 * g * (t / 2.0).cos() * s2.max(0.0).sqrt()
    } else {
        // g < -1: support [pi - theta_g, pi + theta_g]
        if (theta - PI).abs() >= tg {
            return 0.0;
        }
        // sin^2(t/2) - cos^2(tg/2) = sin^2(t/2) - sin^2((pi-tg)/2)
        let s2 = sin_sq_diff(theta / 2.0, (PI - tg) / 2.0);
        2.0 * g.abs() * (theta / 2.0).sin() * s2.max(0.0).sqrt()
    }
}

/// Hua-Pickrell equilibrium density w.r.t. dtheta/2pi on (theta_d, 2pi - theta_d).
pub fn hp_density(d: f64, theta: f64) -> f64 {
    if d == 0.0 {
        return 1.0;
    }
    let td = hp_edge_angle(d);
    if theta <= td || theta >= TWO_PI - td {
        return 0.0;
    }
    let s2 = sin_sq_diff(theta / 2.0, td / 2.0);
    (1.0 + d) * s2.max(0.0).sqrt() / (theta / 2.0).sin()
}

/// Edge angle theta_d with sin(theta_d/2) = d/(1+d).
pub fn hp_edge_angle(d: f64) -> f64 {
    2.0 * (d / (1.0 + d)).asin()
}

/// Edge angle theta_g with sin^2(theta_g/2) = 1/|g| (gapped regime |g| > 1).
pub fn gw_edge_angle(g: f64) -> f64 {
    2.0 * (1.0 / g.abs().sqrt()).asin()
}

fn grid_interp(thetas: &[f64], values: &[f64], t: f64) -> f64 {
    if thetas.is_empty() {
        return 0.0;
    }
    if t <= thetas[0] {
        return values[0];
    }
    if t >= *thetas.last().unwrap() {
        return *values.last().unwrap();
    }
    let i = thetas.partition_point(|&x| x <= t).saturating_sub(1);
    let (t0, t1) = (thetas[i], thetas[i + 1]);
    let w = (t - t0) / (t1 - t0);
    values[i] * (1.0 - w) + values[i + 1] * w
}

/// Probability (or sub-probability) measure on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleMeasure {
    arc_lo: f64,
    arc_hi: f64,
    density: Density,
    atoms: Vec<Atom>,
    total_mass: f64,
    /// sqrt-vanishing hints at (arc_lo, arc_hi) for quadrature.
    edges: (bool, bool),
}

impl CircleMeasure {
    /// The arc lives in a chart [arc_lo, arc_hi] with arc_lo allowed in
    /// [-pi, 2pi) so that supports wrapping through angle 0 (gapped
    /// Gross-Witten with g > 1) stay contiguous; angles are folded into
    /// [arc_lo, arc_lo + 2pi) on evaluation.
    pub fn new(
        arc_lo: f64,
        arc_hi: f64,
        density: Density,
        atoms: Vec<Atom>,
        total_mass: f64,
        edges: (bool, bool),
    ) -> Result<Self> {
        if arc_lo < -PI - 1e-12
            || arc_hi > TWO_PI + 1e-12
            || arc_lo > arc_hi
            || arc_hi - arc_lo > TWO_PI + 1e-9
        {
            return Err(OpucError::Domain(format!("bad arc [{arc_lo}, {arc_hi}]")));
        }
        let mut seen = atoms.clone();
        seen.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        for w in seen.windows(2) {
            if (w[0].theta - w[1].theta).abs() < 1e-12 {
                return Err(OpucError::Domain(
                    "atom angles must be pairwise distinct".into(),
                ));
            }
        }
        if atoms.iter().any(|a| a.weight <= 0.0) {
            return Err(OpucError::Domain(
                "atom weights must be strictly positive".into(),
            ));
        }
        if !(total_mass > 0.0 && total_mass <= 1.0 + 1e-9) {
            return Err(OpucError::Domain(format!(
                "total mass {total_mass} outside (0, 1]"
            )));
        }
        Ok(CircleMeasure {
            arc_lo,
            arc_hi,
            density,
            atoms,
            total_mass,
            edges,
        })
    }

    pub fn uniform() -> Self {
        CircleMeasure {
            arc_lo: 0.0,
            arc_hi: TWO_PI,
            density: Density::Uniform,
            atoms: vec![],
            total_mass: 1.0,
            edges: (false, false),
        }
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Result<Self> {
        let mass: f64 = atoms.iter().map(|a| a.weight).sum();
        CircleMeasure::new(0.0, TWO_PI, Density::Zero, atoms, mass, (false, false))
    }

    pub fn arc(&self) -> (f64, f64) {
        (self.arc_lo, self.arc_hi)
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    /// Fold an angle into the measure's chart [arc_lo, arc_lo + 2pi).
    pub fn fold(&self, theta: f64) -> f64 {
        let mut t = theta;
        while t < self.arc_lo {
            t += TWO_PI;
        }
        while t >= self.arc_lo + TWO_PI {
            t -= TWO_PI;
        }
        t
    }

    pub fn density_at(&self, theta: f64) -> f64 {
        let t = self.fold(theta);
        if t < self.arc_lo || t > self.arc_hi {
            return 0.0;
        }
        self.density.eval(t)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn edges(&self) -> (bool, bool) {
        self.edges
    }

    /// Mass of the absolutely continuous part, by quadrature.
    pub fn ac_mass(&self, tol: f64) -> f64 {
        if matches!(self.density, Density::Zero) {
            return 0.0;
        }
        quad::integrate_sqrt_edges(
            |t| self.density.eval(t) / TWO_PI,
            self.arc_lo,
            self.arc_hi,
            self.edges.0,
            self.edges.1,
            tol,
        )
        .value
    }

    /// k-th trigonometric moment int z^k dmu. m_0 is the stored total mass.
    pub fn moment(&self, k: i64) -> Complex64 {
        if k == 0 {
            return Complex64::new(self.total_mass, 0.0);
        }
        let kf = k as f64;
        let re = quad::integrate_sqrt_edges(
            |t| (kf * t).cos() * self.density.eval(t) / TWO_PI,
            self.arc_lo,
            self.arc_hi,
            self.edges.0,
            self.edges.1,
            1e-10,
        )
        .value;
        let im = quad::integrate_sqrt_edges(
            |t| (kf * t).sin() * self.density.eval(t) / TWO_PI,
            self.arc_lo,
            self.arc_hi,
            self.edges.0,
            self.edges.1,
            1e-10,
        )
        .value;
        let mut m = Complex64::new(re, im);
        for a in &self.atoms {
            m += a.weight * Complex64::from_polar(1.0, kf * a.theta);
        }
        m
    }

    /// Verify the mass bookkeeping: ac integral + atom weights = total mass.
    pub fn validate_mass(&self, tol: f64) -> Result<()> {
        let ac = self.ac_mass(tol.min(1e-8));
        let atom_sum: f64 = self.atoms.iter().map(|a| a.weight).sum();
        let err = (ac + atom_sum - self.total_mass).abs();
        if err > tol {
            return Err(OpucError::Domain(format!(
                "mass mismatch: ac {ac} + atoms {atom_sum} vs declared {}",
                self.total_mass
            )));
        }
        Ok(())
    }

    /// Membership test for S_1(arc): a.c. support inside [lo, hi], atoms
    /// strictly outside the open arc, on either side.
    pub fn is_in_s1t(&self, lo: f64, hi: f64) -> bool {
        for a in &self.atoms {
            if a.theta > lo && a.theta < hi {
                return false;
            }
        }
        if matches!(self.density, Density::Zero) {
            return true;
        }
        // sample the density outside the arc
        let probe = |from: f64, to: f64| -> bool {
            if to - from < 1e-9 {
                return true;
            }
            (0..24).all(|j| {
                let t = from + (to - from) * (j as f64 + 0.5) / 24.0;
                self.density_at(t) < 1e-9
            })
        };
        probe(self.arc_lo.max(0.0), lo.min(self.arc_hi).max(self.arc_lo))
            && probe(
                hi.max(self.arc_lo).min(self.arc_hi),
                self.arc_hi.min(TWO_PI),
            )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_moments() {
        let u = CircleMeasure::uniform();
        assert_eq!(u.moment(0), Complex64::new(1.0, 0.0));
        assert!(u.moment(1).norm() < 1e-12);
        assert!(u.moment(5).norm() < 1e-12);
    }

    #[test]
    fn gw_ungapped_moments() {
        // (1 + g cos t)/2pi: m_1 = g/2, m_2 = 0
        let g = 0.5;
        let mu = CircleMeasure::new(
            0.0,
            TWO_PI,
            Density::GrossWitten { g },
            vec![],
            1.0,
            (false, false),
        )
        .unwrap();
        assert!((mu.moment(1) - Complex64::new(g / 2.0, 0.0)).norm() < 1e-10);
        assert!(mu.moment(2).norm() < 1e-10);
    }

    #[test]
    fn atom_moments() {
        // (delta_1 + delta_{-1})/2: m_1 = 0, m_2 = 1
        let mu = CircleMeasure::from_atoms(vec![
            Atom {
                theta: 0.0,
                weight: 0.5,
            },
            Atom {
                theta: PI,
                weight: 0.5,
            },
        ])
        .unwrap();
        assert!(mu.moment(1).norm() < 1e-15);
        assert!((mu.moment(2) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hp_mass_is_one() {
        let d = 1.0;
        let td = hp_edge_angle(d);
        let mu = CircleMeasure::new(
            td,
            TWO_PI - td,
            Density::HuaPickrell { d },
            vec![],
            1.0,
            (true, true),
        )
        .unwrap();
        mu.validate_mass(1e-9).unwrap();
    }

    #[test]
    fn s1t_membership() {
        let td = hp_edge_angle(1.0);
        let mu = CircleMeasure::new(
            td,
            TWO_PI - td,
            Density::HuaPickrell { d: 1.0 },
            vec![Atom {
                theta: 0.3,
                weight: 0.1,
            }],
            1.1,
            (true, true),
        );
        // mass > 1 rejected
        assert!(mu.is_err());
        let mu = CircleMeasure::new(
            td,
            TWO_PI - td,
            Density::HuaPickrell { d: 1.0 },
            vec![Atom {
                theta: 0.3,
                weight: 0.000001,
            }],
            1.0,
            (true, true),
        )
        .unwrap();
        assert!(mu.is_in_s1t(td, TWO_PI - td));
        assert!(!mu.is_in_s1t(0.2, TWO_PI - td));
    }
}
