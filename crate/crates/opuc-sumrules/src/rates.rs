//! Rate functionals: logarithmic energy, effective potentials, reversed
//! Kullback-Leibler divergence, outlier rates, and coefficient rates.

use crate::cmv::trace_functional;
use crate::coeffs::{CoefficientKind, CoefficientSequence, Tail};
use crate::ensembles::{hp_gamma, EnsembleSpec, Family};
use crate::error::{OpucError, Result};
use crate::measure::{gw_edge_angle, hp_edge_angle, CircleMeasure, Density, TWO_PI};
use crate::quad::{self, sin_sq_diff};
use num_complex::Complex64;
use std::cell::Cell;
use std::f64::consts::PI;

/// log|e^{i a} - e^{i b}| = log(2 |sin((a-b)/2)|)
#[inline]
pub fn log_chord(a: f64, b: f64) -> f64 {
    (2.0 * ((a - b) / 2.0).sin().abs()).ln()
}

/// Logarithmic potential U(theta) = int log|e^{i theta} - zeta| dmu(zeta).
pub fn log_potential(mu: &CircleMeasure, theta: f64, tol: f64) -> f64 {
    let (lo, hi) = mu.arc();
    let t = mu.fold(theta);
    let (e_lo, e_hi) = mu.edges();
    let ac = if matches!(mu.density(), Density::Zero) {
        0.0
    } else if t > lo && t < hi {
        quad::integrate_interior_log(
            &|p| log_chord(t, p) * mu.density_at(p) / TWO_PI,
            lo,
            hi,
            t,
            e_lo,
            e_hi,
            tol,
        )
        .value
    } else {
        quad::integrate_sqrt_edges(
            |p| log_chord(t, p) * mu.density_at(p) / TWO_PI,
            lo,
            hi,
            e_lo,
            e_hi,
            tol,
        )
        .value
    };
    let atoms: f64 = mu
        .atoms()
        .iter()
        .map(|a| a.weight * log_chord(t, a.theta))
        .sum();
    ac + atoms
}

/// Weighted logarithmic energy E(mu) = int V dmu - iint log|z - w| dmu dmu.
/// Atomic input carries infinite self-energy and returns +inf directly.
pub fn energy_functional<V: Fn(f64) -> f64>(mu: &CircleMeasure, potential: V, tol: f64) -> f64 {
    if !mu.atoms().is_empty() {
        return f64::INFINITY;
    }
    let (lo, hi) = mu.arc();
    let (e_lo, e_hi) = mu.edges();
    let pot = quad::integrate_sqrt_edges(
        |t| potential(t) * mu.density_at(t) / TWO_PI,
        lo,
        hi,
        e_lo,
        e_hi,
        tol,
    )
    .value;
    let inner_tol = (tol * 0.1).max(1e-12);
    let log_energy = quad::integrate_sqrt_edges(
        |t| log_potential(mu, t, inner_tol) * mu.density_at(t) / TWO_PI,
        lo,
        hi,
        e_lo,
        e_hi,
        tol,
    )
    .value;
    pot - log_energy
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffPotMethod {
    DirectDoubleIntegral,
    ClosedFormS,
}

/// Effective potential J(e^{i theta}) = V - 2 U against the ensemble's
/// equilibrium measure. The closed form evaluates 2 xi plus the outlier
/// rate (zero on the support); both methods agree on one-cut ensembles.
pub fn effective_potential(theta: f64, ens: &EnsembleSpec, method: EffPotMethod) -> Result<f64> {
    match method {
        EffPotMethod::DirectDoubleIntegral => {
            let mu = ens.equilibrium();
            Ok(ens.potential(theta) - 2.0 * log_potential(&mu, theta, 1e-11))
        }
        EffPotMethod::ClosedFormS => {
            if ens.full_support() {
                return Err(OpucError::Domain(
                    "closed-form effective potential needs an arc-supported ensemble".into(),
                ));
            }
            Ok(2.0 * ens.robin + gap_rate(theta, ens))
        }
    }
}

/// J - 2 xi at any angle: zero on the closed support arc, the outlier rate
/// on the complement.
pub fn gap_rate(theta: f64, ens: &EnsembleSpec) -> f64 {
    match ens.family {
        Family::Hp => {
            let d = ens.param;
            if d == 0.0 {
                return 0.0;
            }
            let td = ens.edge;
            let t = theta.rem_euclid(TWO_PI);
            if t <= 0.0 {
                f64::INFINITY
            } else if t < td {
                hp_outlier_integral(t, d)
            } else if t > TWO_PI - td {
                hp_outlier_integral(TWO_PI - t, d)
            } else {
                0.0
            }
        }
        Family::Gw => {
            let g = ens.param;
            if g.abs() <= 1.0 {
                return 0.0;
            }
            let tg = ens.edge;
            if g < -1.0 {
                let t = theta.rem_euclid(TWO_PI);
                if t < PI - tg {
                    gw_minus_closed(t, g)
                } else if t > PI + tg {
                    gw_minus_closed(TWO_PI - t, g)
                } else {
                    0.0
                }
            } else {
                // support [-tg, tg]; the gap is the arc through pi
                let mut t = theta.rem_euclid(TWO_PI);
                if t > PI {
                    t = TWO_PI - t;
                }
                if t <= tg {
                    0.0
                } else {
                    // 4 int_1^{sqrt(g) sin(t/2)} sqrt(u^2-1) du
                    sqrt_rate_primitive(g.sqrt() * (t / 2.0).sin())
                }
            }
        }
    }
}

/// 4 int_1^X sqrt(u^2 - 1) du = 2 [X sqrt(X^2-1) - log(X + sqrt(X^2-1))].
pub fn sqrt_rate_primitive(x: f64) -> f64 {
    if x <= 1.0 {
        return 0.0;
    }
    let s = (x * x - 1.0).sqrt();
    2.0 * (x * s - (x + s).ln())
}

fn hp_outlier_integral(theta: f64, d: f64) -> f64 {
    let td = hp_edge_angle(d);
    debug_assert!(theta > 0.0 && theta <= td);
    // (1+d) int_theta^{theta_d} sqrt(sin^2(td/2) - sin^2(p/2)) / sin(p/2) dp,
    // sqrt-vanishing at the upper limit
    quad::integrate_sqrt_edges(
        |p| (1.0 + d) * sin_sq_diff(td / 2.0, p / 2.0).max(0.0).sqrt() / (p / 2.0).sin(),
        theta,
        td,
        false,
        true,
        1e-12,
    )
    .value
}

fn gw_minus_closed(theta: f64, g: f64) -> f64 {
    // theta in (0, pi - theta_g]; X = sqrt|g| cos(theta/2)
    sqrt_rate_primitive(g.abs().sqrt() * (theta / 2.0).cos())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Hua-Pickrell outlier rate F±. The minus side lives on (0, theta_d], the
/// plus side on [2pi - theta_d, 2pi); elsewhere the rate is infinite.
pub fn outlier_rate_hp(theta: f64, d: f64, side: Side) -> f64 {
    if d <= 0.0 {
        return f64::INFINITY;
    }
    let td = hp_edge_angle(d);
    let t = theta.rem_euclid(TWO_PI);
    match side {
        Side::Minus => {
            // theta = 0 carries the potential singularity; beyond theta_d
            // the minus-side rate is infinite by definition
            if t == 0.0 || t > td + 1e-14 {
                f64::INFINITY
            } else if (t - td).abs() <= 1e-14 {
                0.0
            } else {
                hp_outlier_integral(t, d)
            }
        }
        Side::Plus => outlier_rate_hp(TWO_PI - t, d, Side::Minus),
    }
}

/// Gross-Witten outlier rate on the circle, gapped attractive phase g < -1.
pub fn outlier_rate_gw(theta: f64, g: f64, side: Side) -> Result<f64> {
    if g >= -1.0 {
        return Err(OpucError::Domain(format!(
            "no outlier regime on the circle for g = {g} (needs g < -1)"
        )));
    }
    let tg = gw_edge_angle(g);
    let t = theta.rem_euclid(TWO_PI);
    Ok(match side {
        Side::Minus => {
            if t > PI - tg + 1e-14 {
                f64::INFINITY
            } else {
                gw_minus_closed(t, g)
            }
        }
        Side::Plus => {
            if t < PI + tg - 1e-14 {
                f64::INFINITY
            } else {
                gw_minus_closed(TWO_PI - t, g)
            }
        }
    })
}

/// Direct quadrature form of the circle GW rate (cross-check companion of
/// the closed form).
pub fn outlier_rate_gw_direct(theta: f64, g: f64) -> Result<f64> {
    if g >= -1.0 {
        return Err(OpucError::Domain("needs g < -1".into()));
    }
    let tg = gw_edge_angle(g);
    let t = theta.rem_euclid(TWO_PI);
    if t > PI - tg {
        return Err(OpucError::Domain(
            "theta must sit below the support arc".into(),
        ));
    }
    // int_t^{pi-tg} 2|g| sin(p/2) sqrt(cos^2(tg/2) - sin^2(p/2)) dp
    Ok(quad::integrate_sqrt_edges(
        |p| 2.0 * g.abs() * (p / 2.0).sin() * sin_sq_diff((PI - tg) / 2.0, p / 2.0).max(0.0).sqrt(),
        t,
        PI - tg,
        false,
        true,
        1e-12,
    )
    .value)
}

/// Real-line Gross-Witten outlier rate, gapped phase g > 1, support [-m, m].
pub fn outlier_rate_gw_real(x: f64, g: f64, side: Side) -> Result<f64> {
    if g <= 1.0 {
        return Err(OpucError::Domain(format!(
            "no outlier regime on the real line for g = {g} (needs g > 1)"
        )));
    }
    let m = (1.0 / (g - 1.0)).sqrt();
    Ok(match side {
        Side::Plus => {
            if x < m - 1e-14 {
                f64::INFINITY
            } else {
                sqrt_rate_primitive(g.sqrt() * x / (1.0 + x * x).sqrt())
            }
        }
        Side::Minus => {
            if x > -m + 1e-14 {
                f64::INFINITY
            } else {
                sqrt_rate_primitive(g.sqrt() * (-x) / (1.0 + x * x).sqrt())
            }
        }
    })
}

/// Direct quadrature form of the real-line GW rate.
pub fn outlier_rate_gw_real_direct(x: f64, g: f64) -> Result<f64> {
    if g <= 1.0 {
        return Err(OpucError::Domain("needs g > 1".into()));
    }
    let m2 = 1.0 / (g - 1.0);
    let m = m2.sqrt();
    if x < m {
        return Err(OpucError::Domain(
            "x must exceed the support endpoint".into(),
        ));
    }
    Ok(quad::integrate_sqrt_edges(
        |u| 4.0 * (1.0 + m2).sqrt() / m2 * ((u * u - m2).max(0.0)).sqrt() / (1.0 + u * u).powi(2),
        m,
        x,
        true,
        false,
        1e-12,
    )
    .value)
}

// ---------------------------------------------------------------------------
// Coefficient rates
// ---------------------------------------------------------------------------

/// H_d(0) = (1+2d) log(1+2d) - 2(1+d) log(1+d).
pub fn h_d_zero(d: f64) -> f64 {
    if d == 0.0 {
        return 0.0;
    }
    (1.0 + 2.0 * d) * (1.0 + 2.0 * d).ln() - 2.0 * (1.0 + d) * (1.0 + d).ln()
}

/// Coefficient rate H_d(gamma) = -log(1-|gamma|^2) - 2d log|1-gamma| + H_d(0);
/// nonnegative, zero only at gamma_d = -d/(1+d), infinite on |gamma| = 1.
pub fn h_d(gamma: Complex64, d: f64) -> Result<f64> {
    let n = gamma.norm();
    if n > 1.0 + 1e-14 {
        return Err(OpucError::CoefficientOutsideDisk(n));
    }
    if n >= 1.0 - 1e-15 {
        return Ok(f64::INFINITY);
    }
    let one_minus = (Complex64::new(1.0, 0.0) - gamma).norm();
    Ok(-(1.0 - n * n).ln() - 2.0 * d * one_minus.ln() + h_d_zero(d))
}

/// H(g) = 1 - sqrt(1-g^2) + log((1 + sqrt(1-g^2))/2) for |g| <= 1.
pub fn h_gw(g: f64) -> Result<f64> {
    if g.abs() > 1.0 {
        return Err(OpucError::Domain(format!("H(g) needs |g| <= 1, got {g}")));
    }
    let s = (1.0 - g * g).sqrt();
    Ok(1.0 - s + ((1.0 + s) / 2.0).ln())
}

/// Real part of the continuation of H past |g| = 1: 1 + log(|g|/2).
/// Convention used only by the gapped-conjecture probe.
pub fn h_gw_continued(g: f64) -> f64 {
    if g.abs() <= 1.0 {
        h_gw(g).unwrap()
    } else {
        1.0 + (g.abs() / 2.0).ln()
    }
}

/// h(alpha) = -log(1-|alpha|^2) - |alpha|^2 (strong-coupling summand).
pub fn h_simon(alpha: Complex64) -> Result<f64> {
    let n2 = alpha.norm_sqr();
    if n2 >= 1.0 {
        return Err(OpucError::CoefficientOutsideDisk(n2.sqrt()));
    }
    Ok(-(1.0 - n2).ln() - n2)
}

/// Quadratic envelope coefficients around gamma_d:
/// lower (1+d)^3/(1+2d)^2 and upper (1+d)^3/(1+2d).
pub fn h_d_envelope(d: f64) -> (f64, f64) {
    let c = (1.0 + d).powi(3);
    (c / (1.0 + 2.0 * d).powi(2), c / (1.0 + 2.0 * d))
}

#[derive(Debug, Clone)]
pub struct CoefficientRate {
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub tail_bound: f64,
    pub total: f64,
}

/// Coefficient side of the Hua-Pickrell sum rule: partial sums of
/// sum_k H_d(gamma_k) with an explicit truncation bound.
pub fn coefficient_rate_hp(gammas: &CoefficientSequence, d: f64) -> Result<CoefficientRate> {
    gammas.expect_kind(CoefficientKind::Deformed)?;
    let gd = hp_gamma(d);
    let mut terms = Vec::with_capacity(gammas.head().len());
    let mut partial = Vec::with_capacity(gammas.head().len());
    let mut acc = 0.0;
    for &g in gammas.head() {
        let t = h_d(g, d)?;
        acc += t;
        terms.push(t);
        partial.push(acc);
    }
    let (tail_bound, total) = match gammas.tail() {
        Tail::Constant { value } => {
            let c = Complex64::new(value.0, value.1);
            if (c - Complex64::new(gd, 0.0)).norm() < 1e-13 {
                (0.0, acc)
            } else {
                // constant tail off the minimizer diverges
                (f64::INFINITY, f64::INFINITY)
            }
        }
        Tail::Zero => {
            if d == 0.0 {
                (0.0, acc)
            } else {
                (f64::INFINITY, f64::INFINITY)
            }
        }
        Tail::None => {
            if gammas.is_trivial() {
                (0.0, f64::INFINITY)
            } else {
                // unknown tail: quadratic-envelope proxy from the measured
                // deviation over the last 20 head terms (nominal window)
                let (_, up) = h_d_envelope(d);
                let dev = gammas
                    .head()
                    .iter()
                    .rev()
                    .take(20)
                    .map(|g| (g - Complex64::new(gd, 0.0)).norm())
                    .fold(0.0f64, f64::max);
                (up * dev * dev * 20.0, acc)
            }
        }
    };
    Ok(CoefficientRate {
        terms,
        partial_sums: partial,
        tail_bound,
        total,
    })
}

/// Conjectured Gross-Witten coefficient rate
/// J = H(g) - g Re(alpha_0 - sum_{k>=1} alpha_k conj(alpha_{k-1}))
///     - sum_k log(1 - |alpha_k|^2).
/// Probe only; a non-summable tail sends the value to +inf.
pub fn coefficient_rate_gw_probe(alphas: &CoefficientSequence, g: f64) -> Result<f64> {
    alphas.expect_kind(CoefficientKind::Plain)?;
    match alphas.tail() {
        Tail::Constant { value } if (value.0, value.1) != (0.0, 0.0) => {
            return Ok(f64::INFINITY);
        }
        _ => {}
    }
    let head = alphas.head();
    if head.iter().any(|a| a.norm() >= 1.0 - 1e-15) {
        return Ok(f64::INFINITY);
    }
    let tr = trace_functional(head);
    let logs: f64 = head.iter().map(|a| (1.0 - a.norm_sqr()).ln()).sum();
    let h = if g.abs() <= 1.0 {
        h_gw(g)?
    } else {
        h_gw_continued(g)
    };
    Ok(h - g * tr - logs)
}

// ---------------------------------------------------------------------------
// Spectral side
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct KlConfig {
    pub quad_tol: f64,
    /// density below this value at an interior node flags K = +inf
    pub zero_threshold: f64,
}

impl Default for KlConfig {
    fn default() -> Self {
        KlConfig {
            quad_tol: 1e-10,
            zero_threshold: 1e-300,
        }
    }
}

/// Reversed Kullback-Leibler divergence K(ref | mu) = int log(d ref / d mu) d ref,
/// integrated over ref's support arc. Atoms of mu do not contribute; a
/// vanishing mu-density on a positive part of ref's support gives +inf.
pub fn kl_divergence(reference: &CircleMeasure, mu: &CircleMeasure, cfg: &KlConfig) -> Result<f64> {
    let (lo, hi) = reference.arc();
    let (e_lo, e_hi) = reference.edges();
    // validity scan of mu's density on ref's support
    let vanished = Cell::new(false);
    let negative = Cell::new(false);
    let integrand = |t: f64| -> f64 {
        let r = reference.density_at(t);
        if r <= 0.0 {
            return 0.0;
        }
        let m = mu.density_at(t);
        if m < 0.0 {
            negative.set(true);
            return 0.0;
        }
        if m < cfg.zero_threshold {
            vanished.set(true);
            return 0.0;
        }
        r * (r / m).ln() / TWO_PI
    };
    let v = quad::integrate_sqrt_edges(integrand, lo, hi, e_lo, e_hi, cfg.quad_tol).value;
    if negative.get() {
        return Err(OpucError::Domain(
            "mu has negative density on ref's support".into(),
        ));
    }
    if vanished.get() {
        return Ok(f64::INFINITY);
    }
    Ok(v)
}

#[derive(Debug, Clone)]
pub struct SpectralSide {
    pub kl: f64,
    pub outlier_plus: Vec<(f64, f64)>,
    pub outlier_minus: Vec<(f64, f64)>,
    pub total: f64,
    pub in_s1t: bool,
}

/// Spectral-side rate I(mu) = K(mu_V | mu) + sum F+ + sum F- against the
/// ensemble's equilibrium measure; +inf outside S_1(arc).
pub fn spectral_rate(
    mu: &CircleMeasure,
    ens: &EnsembleSpec,
    cfg: &KlConfig,
) -> Result<SpectralSide> {
    let reference = ens.equilibrium();
    if ens.full_support() {
        // no outlier region: the rate is the plain reversed KL
        let kl = kl_divergence(&reference, mu, cfg)?;
        return Ok(SpectralSide {
            kl,
            outlier_plus: vec![],
            outlier_minus: vec![],
            total: kl,
            in_s1t: true,
        });
    }
    if ens.family == Family::Gw && ens.param > 1.0 {
        return Err(OpucError::Domain(
            "spectral rate with outliers is provided for the g < -1 chart; rotate by pi".into(),
        ));
    }
    let (lo, hi) = (ens.arc_lo, ens.arc_hi);
    if !mu.is_in_s1t(lo, hi) {
        return Ok(SpectralSide {
            kl: f64::INFINITY,
            outlier_plus: vec![],
            outlier_minus: vec![],
            total: f64::INFINITY,
            in_s1t: false,
        });
    }
    let kl = kl_divergence(&reference, mu, cfg)?;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for a in mu.atoms() {
        let t = a.theta.rem_euclid(TWO_PI);
        let below = t <= lo;
        match ens.family {
            Family::Hp => {
                if below {
                    minus.push((t, outlier_rate_hp(t, ens.param, Side::Minus)));
                } else {
                    plus.push((t, outlier_rate_hp(t, ens.param, Side::Plus)));
                }
            }
            Family::Gw => {
                if below {
                    minus.push((t, outlier_rate_gw(t, ens.param, Side::Minus)?));
                } else {
                    plus.push((t, outlier_rate_gw(t, ens.param, Side::Plus)?));
                }
            }
        }
    }
    let total = kl + plus.iter().map(|x| x.1).sum::<f64>() + minus.iter().map(|x| x.1).sum::<f64>();
    Ok(SpectralSide {
        kl,
        outlier_plus: plus,
        outlier_minus: minus,
        total,
        in_s1t: true,
    })
}

/// Mass-defect contribution kappa · 1{mass < 1} of the real-line rate:
/// kappa = J(1) - min J, finite only when the circle potential is finite at
/// the point 1. For Hua-Pickrell the potential is singular there and the
/// convention kappa = +inf is adopted (flagged, not a paper claim).
pub fn mass_defect_rate(total_mass: f64, ens: &EnsembleSpec) -> f64 {
    if total_mass >= 1.0 - 1e-14 {
        return 0.0;
    }
    match ens.family {
        Family::Hp => {
            if ens.param == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        }
        Family::Gw => {
            let g = ens.param;
            if g < -1.0 {
                sqrt_rate_primitive(g.abs().sqrt())
            } else {
                0.0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{gw_equilibrium, hp_equilibrium};
    use crate::schur::{SchurFunction, SchurTail};

    #[test]
    fn uniform_log_energy_zero() {
        let u = CircleMeasure::uniform();
        let e = energy_functional(&u, |_| 0.0, 1e-9);
        assert!(e.abs() < 1e-9, "E = {e}");
    }

    #[test]
    fn hp_energy_matches_free_energy() {
        let d = 1.0;
        let mu = hp_equilibrium(d).unwrap();
        let ens = EnsembleSpec::hp(d).unwrap();
        let e = energy_functional(&mu, |t| ens.potential(t), 1e-8);
        assert!(
            (e - ens.free_energy).abs() < 1e-6,
            "E = {e}, F = {}",
            ens.free_energy
        );
    }

    #[test]
    fn gw_energy_matches_free_energy() {
        let g = 2.0;
        let mu = gw_equilibrium(g);
        let ens = EnsembleSpec::gw(g);
        let e = energy_functional(&mu, |t| ens.potential(t), 1e-8);
        assert!(
            (e - ens.free_energy).abs() < 1e-6,
            "E = {e}, F = {}",
            ens.free_energy
        );
    }

    #[test]
    fn flatness_on_support() {
        for ens in [
            EnsembleSpec::hp(1.0).unwrap(),
            EnsembleSpec::gw(2.0),
            EnsembleSpec::gw(-2.0),
        ] {
            let (lo, hi) = (ens.arc_lo, ens.arc_hi);
            for j in 1..5 {
                let t = lo + (hi - lo) * j as f64 / 5.0;
                let j_dir =
                    effective_potential(t, &ens, EffPotMethod::DirectDoubleIntegral).unwrap();
                assert!(
                    (j_dir - 2.0 * ens.robin).abs() < 1e-7,
                    "{:?} {} at {t}: {j_dir} vs {}",
                    ens.family,
                    ens.param,
                    2.0 * ens.robin
                );
            }
        }
    }

    #[test]
    fn dual_method_agreement_off_support() {
        let ens = EnsembleSpec::hp(1.0).unwrap();
        let td = ens.edge;
        for t in [td / 4.0, td / 2.0, 0.9 * td] {
            let a = effective_potential(t, &ens, EffPotMethod::DirectDoubleIntegral).unwrap();
            let b = effective_potential(t, &ens, EffPotMethod::ClosedFormS).unwrap();
            assert!((a - b).abs() < 1e-7, "hp at {t}: {a} vs {b}");
        }
        let ens = EnsembleSpec::gw(-2.0);
        for t in [0.4, PI / 4.0, PI / 2.0 - 0.2] {
            let a = effective_potential(t, &ens, EffPotMethod::DirectDoubleIntegral).unwrap();
            let b = effective_potential(t, &ens, EffPotMethod::ClosedFormS).unwrap();
            assert!((a - b).abs() < 1e-7, "gw at {t}: {a} vs {b}");
        }
        let ens = EnsembleSpec::gw(2.0);
        for t in [PI / 2.0 + 0.3, PI, 4.0] {
            let a = effective_potential(t, &ens, EffPotMethod::DirectDoubleIntegral).unwrap();
            let b = effective_potential(t, &ens, EffPotMethod::ClosedFormS).unwrap();
            assert!((a - b).abs() < 1e-7, "gw+ at {t}: {a} vs {b}");
        }
    }

    #[test]
    fn outlier_rate_edges_and_symmetry() {
        let d = 1.0;
        let td = hp_edge_angle(d);
        assert_eq!(outlier_rate_hp(td, d, Side::Minus), 0.0);
        let a = outlier_rate_hp(td / 2.0, d, Side::Minus);
        let b = outlier_rate_hp(TWO_PI - td / 2.0, d, Side::Plus);
        assert!(a > 0.0);
        assert!((a - b).abs() < 1e-12);
        assert_eq!(outlier_rate_hp(0.0, d, Side::Minus), f64::INFINITY);
    }

    #[test]
    fn gw_outlier_closed_vs_direct() {
        let g = -2.0;
        let tg = gw_edge_angle(g);
        assert!(outlier_rate_gw(PI - tg, g, Side::Minus).unwrap().abs() < 1e-12);
        for t in [0.3, PI / 4.0, PI / 2.0 - 0.05] {
            let c = outlier_rate_gw(t, g, Side::Minus).unwrap();
            let q = outlier_rate_gw_direct(t, g).unwrap();
            assert!((c - q).abs() < 1e-9, "at {t}: {c} vs {q}");
        }
        // real line: zero at the endpoint, dual forms agree beyond it
        let g = 2.0;
        assert!(outlier_rate_gw_real(1.0, g, Side::Plus).unwrap().abs() < 1e-12);
        for x in [1.3, 2.0, 5.0] {
            let c = outlier_rate_gw_real(x, g, Side::Plus).unwrap();
            let q = outlier_rate_gw_real_direct(x, g).unwrap();
            assert!((c - q).abs() < 1e-9, "at {x}: {c} vs {q}");
        }
    }

    #[test]
    fn h_d_values() {
        let d = 1.0;
        let gd = Complex64::new(hp_gamma(d), 0.0);
        assert!(h_d(gd, d).unwrap().abs() < 1e-15);
        // H_1(0) = 3 log 3 - 4 log 2
        let h0 = h_d(Complex64::default(), 1.0).unwrap();
        assert!((h0 - (3.0 * 3f64.ln() - 4.0 * 2f64.ln())).abs() < 1e-14);
        // d = 0 reduction
        let z = Complex64::new(0.3, 0.4);
        assert!((h_d(z, 0.0).unwrap() + (1.0 - 0.25f64).ln()).abs() < 1e-14);
        // boundary
        assert_eq!(h_d(Complex64::new(0.0, 1.0), 1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn h_gw_and_h_simon_values() {
        assert!(h_gw(0.0).unwrap().abs() < 1e-15);
        assert!((h_gw(1.0).unwrap() - (1.0 - 2f64.ln())).abs() < 1e-15);
        let h = h_simon(Complex64::new(0.5, 0.0)).unwrap();
        assert!((h - (-(0.75f64).ln() - 0.25)).abs() < 1e-15);
        assert!(h_gw(1.5).is_err());
    }

    #[test]
    fn kl_reference_to_itself() {
        let mu = hp_equilibrium(1.0).unwrap();
        let k = kl_divergence(&mu, &mu, &KlConfig::default()).unwrap();
        assert!(k.abs() < 1e-12);
    }

    #[test]
    fn kl_uniform_to_bernstein_szego() {
        let f = SchurFunction::new(vec![Complex64::new(0.6, 0.0)], SchurTail::Zero).unwrap();
        let mu = CircleMeasure::new(0.0, TWO_PI, Density::Schur(f), vec![], 1.0, (false, false))
            .unwrap();
        let k = kl_divergence(&CircleMeasure::uniform(), &mu, &KlConfig::default()).unwrap();
        assert!((k + (1.0 - 0.36f64).ln()).abs() < 1e-9, "K = {k}");
    }

    #[test]
    fn kl_ignores_atoms_outside_support() {
        let d = 1.0;
        let refm = hp_equilibrium(d).unwrap();
        let td = hp_edge_angle(d);
        let base = CircleMeasure::new(
            td,
            TWO_PI - td,
            Density::HuaPickrell { d },
            vec![],
            1.0,
            (true, true),
        )
        .unwrap();
        let with_atom = CircleMeasure::new(
            td,
            TWO_PI - td,
            Density::HuaPickrell { d },
            vec![crate::measure::Atom {
                theta: 0.2,
                weight: 0.1,
            }],
            1.0,
            (true, true),
        )
        .unwrap();
        let cfg = KlConfig::default();
        let k0 = kl_divergence(&refm, &base, &cfg).unwrap();
        let k1 = kl_divergence(&refm, &with_atom, &cfg).unwrap();
        assert!((k0 - k1).abs() < 1e-14);
    }

    #[test]
    fn envelope_brackets_h_d() {
        for d in [0.5, 1.0, 2.0] {
            let (lo_c, hi_c) = h_d_envelope(d);
            let gd = hp_gamma(d);
            for k in 0..16 {
                let phase = TWO_PI * k as f64 / 16.0;
                let h = 0.01 * Complex64::from_polar(1.0, phase);
                let v = h_d(Complex64::new(gd, 0.0) + h, d).unwrap();
                let hh = h.norm_sqr();
                assert!(
                    v >= lo_c * hh * 0.9,
                    "d={d} phase={phase}: {v} < {}",
                    lo_c * hh
                );
                assert!(
                    v <= hi_c * hh * 1.1,
                    "d={d} phase={phase}: {v} > {}",
                    hi_c * hh
                );
            }
        }
    }

    #[test]
    fn mass_defect() {
        let gw = EnsembleSpec::gw(-2.0);
        assert_eq!(mass_defect_rate(1.0, &gw), 0.0);
        let k = mass_defect_rate(0.9, &gw);
        assert!((k - sqrt_rate_primitive(2f64.sqrt())).abs() < 1e-14 && k > 0.0);
        let hp = EnsembleSpec::hp(1.0).unwrap();
        assert_eq!(mass_defect_rate(0.9, &hp), f64::INFINITY);
    }
}
