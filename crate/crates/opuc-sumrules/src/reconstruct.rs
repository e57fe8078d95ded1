//! Measure reconstruction from a coefficient sequence: boundary density via
//! the Schur function, atom detection via a truncated CMV matrix, and atom
//! mass refinement via radial Carathéodory limits.

use crate::cmv::{cmv_dense, unitary_eigen_angles};
use crate::coeffs::{alphas_from_deformed, CoefficientKind, CoefficientSequence};
use crate::error::{OpucError, Result};
use crate::measure::{Atom, CircleMeasure, Density, TWO_PI};
use crate::schur::{atom_mass, SchurFunction};
use num_complex::Complex64;

/// Default truncation size for atom location.
pub const DEFAULT_TRUNCATION: usize = 512;

#[derive(Debug, Clone)]
pub struct ReconstructConfig {
    pub truncation: usize,
    /// Keep candidates whose refined mass exceeds this.
    pub mass_threshold: f64,
}

impl Default for ReconstructConfig {
    fn default() -> Self {
        ReconstructConfig {
            truncation: DEFAULT_TRUNCATION,
            mass_threshold: 1e-9,
        }
    }
}

/// Reconstruct the spectral measure of a plain coefficient sequence with
/// zero or constant tail: a.c. density on the essential-support arc plus
/// atoms located by a truncated CMV matrix and quantified by radial limits.
pub fn reconstruct_measure(
    alphas: &CoefficientSequence,
    cfg: &ReconstructConfig,
) -> Result<CircleMeasure> {
    alphas.expect_kind(CoefficientKind::Plain)?;
    let schur = SchurFunction::from_coefficients(alphas)?;
    let half_sine = schur.tail_arc_half_sine();
    let (arc_lo, arc_hi, edges) = if half_sine == 0.0 {
        (0.0, TWO_PI, (false, false))
    } else {
        let tc = 2.0 * half_sine.asin();
        (tc, TWO_PI - tc, (true, true))
    };
    let mut atoms = Vec::new();
    if half_sine > 0.0 {
        for (theta, _) in locate_atom_candidates(alphas, arc_lo, arc_hi, cfg.truncation)? {
            let refined = refine_atom(&schur, theta, arc_lo);
            let w = atom_mass(&schur, refined)?;
            if w > cfg.mass_threshold {
                atoms.push(Atom {
                    theta: refined,
                    weight: w,
                });
            }
        }
        atoms.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        atoms.dedup_by(|a, b| {
            if (a.theta - b.theta).abs() < 1e-8 {
                b.weight = b.weight.max(a.weight);
                true
            } else {
                false
            }
        });
    }
    CircleMeasure::new(arc_lo, arc_hi, Density::Schur(schur), atoms, 1.0, edges)
}

/// Eigen-angles of the truncated CMV lying outside the closed arc by more
/// than the detection margin. The margin is pi/N (half the eigenvalue
/// spacing heuristic): candidates are cheap, spurious ones are dropped by
/// the mass refinement.
pub fn locate_atom_candidates(
    alphas: &CoefficientSequence,
    arc_lo: f64,
    arc_hi: f64,
    truncation: usize,
) -> Result<Vec<(f64, f64)>> {
    let n = truncation;
    let mut a = Vec::with_capacity(n);
    for k in 0..n - 1 {
        a.push(alphas.get(k).ok_or_else(|| {
            OpucError::Domain("atom location needs a zero or constant tail".into())
        })?);
    }
    a.push(Complex64::new(1.0, 0.0)); // unimodular closing coefficient
    let u = cmv_dense(&a);
    let angles = unitary_eigen_angles(&u)?;
    let margin = std::f64::consts::PI / n as f64;
    let mut out = Vec::new();
    for t in angles {
        let dist = if t < arc_lo {
            arc_lo - t
        } else if t > arc_hi {
            t - arc_hi
        } else {
            continue;
        };
        if dist > margin {
            out.push((t, dist));
        }
    }
    Ok(out)
}

/// Sharpen an atom location by maximizing Re F(r e^{i t}) at r close to 1
/// (ternary search around the truncation eigenvalue).
fn refine_atom(schur: &SchurFunction, theta0: f64, arc_lo: f64) -> f64 {
    let r = 1.0 - 2f64.powi(-16);
    let peak = |t: f64| {
        schur
            .caratheodory(Complex64::from_polar(r, t))
            .map(|f| f.re)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let w = 0.01f64.min(0.45 * (arc_lo - theta0).abs().max(1e-3));
    let (mut lo, mut hi) = (theta0 - w, theta0 + w);
    for _ in 0..70 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if peak(m1) < peak(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    0.5 * (lo + hi)
}

/// Plain coefficients corresponding to a deformed sequence with constant
/// tail: the head converts by the exact inverse recursion and the tail
/// stays constant with the stabilized phase.
pub fn plain_from_deformed_tail(gammas: &CoefficientSequence) -> Result<CoefficientSequence> {
    alphas_from_deformed(gammas)
}

/// Full reconstruction from deformed coefficients.
pub fn reconstruct_from_deformed(
    gammas: &CoefficientSequence,
    cfg: &ReconstructConfig,
) -> Result<CircleMeasure> {
    let alphas = plain_from_deformed_tail(gammas)?;
    reconstruct_measure(&alphas, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{verblunsky_from_moments, Tail as T};
    use crate::ensembles::hp_gamma;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pure_geronimus_has_no_atoms() {
        let gd = hp_gamma(1.0);
        let seq = CoefficientSequence::plain(vec![], T::constant(c(gd, 0.0))).unwrap();
        let mu = reconstruct_measure(
            &seq,
            &ReconstructConfig {
                truncation: 256,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(mu.atoms().is_empty());
        let (lo, hi) = mu.arc();
        assert!((lo - PI / 3.0).abs() < 1e-12 && (hi - (TWO_PI - PI / 3.0)).abs() < 1e-12);
        assert!((mu.ac_mass(1e-10) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn symmetric_pair_of_atoms() {
        // gamma_0 = +1/2 with gamma_d tail (d = 1) binds a symmetric pair
        let gd = hp_gamma(1.0);
        let gam =
            CoefficientSequence::deformed(vec![c(0.5, 0.0)], T::constant(c(gd, 0.0))).unwrap();
        let mu = reconstruct_from_deformed(
            &gam,
            &ReconstructConfig {
                truncation: 400,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(mu.atoms().len(), 2, "atoms: {:?}", mu.atoms());
        let a = &mu.atoms()[0];
        let b = &mu.atoms()[1];
        assert!((a.theta + b.theta - TWO_PI).abs() < 1e-7);
        assert!((a.weight - b.weight).abs() < 1e-7);
        assert!((a.weight - 0.4).abs() < 1e-5, "mass {}", a.weight);
        // ac mass + atoms = 1
        assert!((mu.ac_mass(1e-9) + a.weight + b.weight - 1.0).abs() < 1e-5);
    }

    #[test]
    fn round_trip_through_moments() {
        // coefficients -> measure -> moments -> coefficients
        let head = vec![c(0.4, 0.1), c(-0.2, 0.3), c(0.1, -0.5)];
        let seq = CoefficientSequence::plain(head.clone(), T::Zero).unwrap();
        let mu = reconstruct_measure(&seq, &ReconstructConfig::default()).unwrap();
        let moments: Vec<Complex64> = (0..=4).map(|k| mu.moment(k)).collect();
        let back = verblunsky_from_moments(&moments, 3).unwrap();
        for (x, y) in head.iter().zip(back.head()) {
            assert!((x - y).norm() < 1e-8, "{x} vs {y}");
        }
    }
}
