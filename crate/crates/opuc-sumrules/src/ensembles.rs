//! Closed-form equilibrium data for the Gross-Witten and Hua-Pickrell
//! ensembles on the circle, their Cayley pushforwards on the real line,
//! and the potential transfer between the two.

use crate::error::{OpucError, Result};
use crate::measure::{self, Atom, CircleMeasure, Density, TWO_PI};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gw,
    Hp,
}

/// Circle ensemble descriptor with derived arc data and constants.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnsembleSpec {
    pub family: Family,
    pub param: f64,
    /// Edge angle: theta_d for HP, theta_g for gapped GW, 0 when the
    /// support is the whole circle.
    pub edge: f64,
    /// Support arc [lo, hi] in [0, 2pi].
    pub arc_lo: f64,
    pub arc_hi: f64,
    /// Free energy of the equilibrium measure as displayed for the family.
    pub free_energy: f64,
    /// Modified Robin constant as displayed for the family.
    pub robin: f64,
}

impl EnsembleSpec {
    pub fn gw(g: f64) -> Self {
        let (f, xi) = gw_constants(g);
        let (lo, hi, edge) = if g.abs() <= 1.0 {
            (0.0, TWO_PI, 0.0)
        } else {
            let tg = measure::gw_edge_angle(g);
            if g > 1.0 {
                // support [-theta_g, theta_g]; stored as the symmetric arc
                // around 0 in the [0,2pi) chart it wraps, so keep signed lo
                (-tg, tg, tg)
            } else {
                (PI - tg, PI + tg, tg)
            }
        };
        EnsembleSpec {
            family: Family::Gw,
            param: g,
            edge,
            arc_lo: lo,
            arc_hi: hi,
            free_energy: f,
            robin: xi,
        }
    }

    pub fn hp(d: f64) -> Result<Self> {
        if d < 0.0 {
            return Err(OpucError::Domain(format!(
                "Hua-Pickrell parameter d = {d} must be >= 0"
            )));
        }
        let (f, xi) = hp_constants(d);
        let td = measure::hp_edge_angle(d);
        Ok(EnsembleSpec {
            family: Family::Hp,
            param: d,
            edge: td,
            arc_lo: td,
            arc_hi: TWO_PI - td,
            free_energy: f,
            robin: xi,
        })
    }

    /// Equilibrium measure of the ensemble.
    pub fn equilibrium(&self) -> CircleMeasure {
        match self.family {
            Family::Gw => gw_equilibrium(self.param),
            Family::Hp => hp_equilibrium(self.param).expect("validated parameter"),
        }
    }

    /// Potential evaluated at e^{i theta}.
    pub fn potential(&self, theta: f64) -> f64 {
        match self.family {
            Family::Gw => -self.param * theta.cos(),
            Family::Hp => {
                let s = 2.0 * (theta / 2.0).sin().abs();
                if s == 0.0 {
                    f64::INFINITY
                } else {
                    -2.0 * self.param * s.ln()
                }
            }
        }
    }

    /// Equilibrium density w.r.t. dtheta/2pi.
    pub fn density(&self, theta: f64) -> f64 {
        match self.family {
            Family::Gw => measure::gw_density(self.param, theta),
            Family::Hp => measure::hp_density(self.param, theta),
        }
    }

    /// Whole circle (no outlier region)?
    pub fn full_support(&self) -> bool {
        match self.family {
            Family::Gw => self.param.abs() <= 1.0,
            Family::Hp => self.param == 0.0,
        }
    }
}

/// Gross-Witten equilibrium measure for any real coupling.
pub fn gw_equilibrium(g: f64) -> CircleMeasure {
    if g == 0.0 {
        return CircleMeasure::uniform();
    }
    if g.abs() <= 1.0 {
        CircleMeasure::new(
            0.0,
            TWO_PI,
            Density::GrossWitten { g },
            vec![],
            1.0,
            (false, false),
        )
        .expect("full-circle density")
    } else if g > 1.0 {
        let tg = measure::gw_edge_angle(g);
        // support [-theta_g, theta_g] in the signed chart
        CircleMeasure::new(
            -tg,
            tg,
            Density::GrossWitten { g },
            vec![],
            1.0,
            (true, true),
        )
        .expect("gapped density")
    } else {
        let tg = measure::gw_edge_angle(g);
        CircleMeasure::new(
            PI - tg,
            PI + tg,
            Density::GrossWitten { g },
            vec![],
            1.0,
            (true, true),
        )
        .expect("gapped density")
    }
}

/// Free energy and modified Robin constant for Gross-Witten, as displayed
/// per phase. The two phases' formulas are distinct functionals and only
/// the equilibrium measure itself is continuous at |g| = 1.
pub fn gw_constants(g: f64) -> (f64, f64) {
    let a = g.abs();
    if a <= 1.0 {
        (g * g / 2.0, g * g / 4.0)
    } else {
        (-a + 0.5 * a.ln() + 0.75, 0.5 * (a.ln() - a + 1.0))
    }
}

/// Hua-Pickrell equilibrium measure on the arc [theta_d, 2pi - theta_d].
pub fn hp_equilibrium(d: f64) -> Result<CircleMeasure> {
    if d < 0.0 {
        return Err(OpucError::Domain(format!("d = {d} must be >= 0")));
    }
    if d == 0.0 {
        return Ok(CircleMeasure::uniform());
    }
    let td = measure::hp_edge_angle(d);
    CircleMeasure::new(
        td,
        TWO_PI - td,
        Density::HuaPickrell { d },
        vec![],
        1.0,
        (true, true),
    )
}

/// Free energy and modified Robin constant for Hua-Pickrell.
pub fn hp_constants(d: f64) -> (f64, f64) {
    if d == 0.0 {
        return (0.0, 0.0);
    }
    let f = (1.0 + d).powi(2) * (1.0 + d).ln() + d * d * d.ln()
        - 0.5 * (1.0 + 2.0 * d).powi(2) * (1.0 + 2.0 * d).ln()
        + 2.0 * d * d * 2f64.ln();
    let xi = (1.0 + d) * (1.0 + d).ln() - 0.5 * (1.0 + 2.0 * d) * (1.0 + 2.0 * d).ln();
    (f, xi)
}

/// Verblunsky coefficient gamma_d = -d/(1+d) of the Hua-Pickrell
/// equilibrium measure (Geronimus polynomials).
pub fn hp_gamma(d: f64) -> f64 {
    -d / (1.0 + d)
}

/// Verblunsky coefficients of the Gross-Witten equilibrium measure in the
/// ungapped phase |g| <= 1.
///
/// For |g| < 1 these are -(x+ - x-)/(x+^{k+2} - x-^{k+2}) with x± the roots
/// of x + 1/x = -2/g. The |g| = 1 value is taken as the g -> ±1 limit of
/// that branch, (-1)^k g^{k+1}/(k+2); the opposite overall sign fails the
/// first-moment identity alpha_0 = g/2 and makes the g = 1 sum rule miss at
/// the equilibrium measure, which is the deciding test.
pub fn gw_equilibrium_alphas(g: f64, k: usize) -> Result<Complex64> {
    if g.abs() > 1.0 {
        return Err(OpucError::Domain(format!(
            "no closed-form equilibrium coefficients in the gapped phase g = {g}"
        )));
    }
    if g == 0.0 {
        return Ok(Complex64::default());
    }
    if g.abs() == 1.0 {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let val = sign * g.powi(k as i32 + 1) / (k as f64 + 2.0);
        return Ok(Complex64::new(val, 0.0));
    }
    // |x-| < 1 < |x+| ordering is not guaranteed; compute stably via powers
    let s = (1.0 / (g * g) - 1.0).sqrt();
    let xp = -1.0 / g + s;
    let xm = -1.0 / g - s;
    let num = xp - xm;
    let den = xp.powi(k as i32 + 2) - xm.powi(k as i32 + 2);
    Ok(Complex64::new(-num / den, 0.0))
}

// ---------------------------------------------------------------------------
// Cayley transform
// ---------------------------------------------------------------------------

/// A point of the compactified real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

/// tau(e^{i theta}) = i(1+z)/(1-z) = -cot(theta/2); the angle 0 maps to the
/// point at infinity, kept symbolic.
pub fn cayley_point(theta: f64) -> ExtendedReal {
    let t = theta.rem_euclid(TWO_PI);
    if t == 0.0 {
        ExtendedReal::Infinity
    } else {
        ExtendedReal::Finite(-1.0 / (t / 2.0).tan())
    }
}

/// Inverse transform: the angle in (0, 2pi) with tau(e^{i theta}) = x.
pub fn cayley_point_inv(x: ExtendedReal) -> f64 {
    match x {
        ExtendedReal::Infinity => 0.0,
        ExtendedReal::Finite(x) => PI + 2.0 * x.atan(),
    }
}

/// Real-line densities arising from the two families and from pushforwards.
#[derive(Debug, Clone, PartialEq)]
pub enum RealDensity {
    Zero,
    Cauchy,
    /// d(Re tau#(mu))/dx for a circle measure: rho(theta(x)) / (pi (1+x^2)).
    Pushforward(Box<CircleMeasure>),
    /// GW real-line equilibrium, coupling g >= 0.
    GwReal {
        g: f64,
    },
    /// HP real-line equilibrium (modified Cauchy), d > 0.
    HpReal {
        d: f64,
    },
}

impl RealDensity {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            RealDensity::Zero => 0.0,
            RealDensity::Cauchy => 1.0 / (PI * (1.0 + x * x)),
            RealDensity::Pushforward(mu) => {
                let theta = PI + 2.0 * x.atan();
                mu.density_at(theta) / (PI * (1.0 + x * x))
            }
            RealDensity::GwReal { g } => {
                if *g <= 1.0 {
                    ((1.0 - g) * x * x + 1.0 + g) / (PI * (1.0 + x * x).powi(2))
                } else {
                    let m2 = 1.0 / (g - 1.0);
                    if x * x >= m2 {
                        0.0
                    } else {
                        2.0 * (1.0 + m2).sqrt() / (PI * m2) * (m2 - x * x).sqrt()
                            / (1.0 + x * x).powi(2)
                    }
                }
            }
            RealDensity::HpReal { d } => {
                let p2 = (1.0 + 2.0 * d) / (d * d);
                if x * x >= p2 {
                    0.0
                } else {
                    d * (p2 - x * x).sqrt() / (PI * (1.0 + x * x))
                }
            }
        }
    }
}

/// Sub-probability on the real line (atom at angle 0, if any, is dropped by
/// the pushforward).
#[derive(Debug, Clone, PartialEq)]
pub struct RealMeasure {
    pub support_lo: f64,
    pub support_hi: f64,
    pub density: RealDensity,
    pub atoms: Vec<Atom>,
    pub total_mass: f64,
}

/// Pushforward of a circle measure by the Cayley transform. Any atom at
/// angle 0 is dropped, producing a sub-probability.
pub fn cayley_pushforward(mu: &CircleMeasure) -> RealMeasure {
    let (lo, hi) = mu.arc();
    let (slo, shi) = if lo <= 0.0 && hi >= TWO_PI {
        (f64::NEG_INFINITY, f64::INFINITY)
    } else {
        let xlo = match cayley_point(lo) {
            ExtendedReal::Finite(x) => x,
            ExtendedReal::Infinity => f64::NEG_INFINITY,
        };
        let xhi = match cayley_point(hi) {
            ExtendedReal::Finite(x) => x,
            ExtendedReal::Infinity => f64::INFINITY,
        };
        (xlo, xhi)
    };
    let mut mass = mu.total_mass();
    let mut atoms = Vec::new();
    for a in mu.atoms() {
        match cayley_point(a.theta) {
            ExtendedReal::Infinity => mass -= a.weight,
            ExtendedReal::Finite(x) => atoms.push(Atom {
                theta: x,
                weight: a.weight,
            }),
        }
    }
    RealMeasure {
        support_lo: slo,
        support_hi: shi,
        density: RealDensity::Pushforward(Box::new(mu.clone())),
        atoms,
        total_mass: mass,
    }
}

// ---------------------------------------------------------------------------
// Real-line ensembles
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RealFamily {
    GwReal,
    HpReal,
}

/// Real-line ensemble descriptor (Cayley image of the circle family).
#[derive(Debug, Clone, Serialize)]
pub struct RealEnsembleSpec {
    pub family: RealFamily,
    pub param: f64,
    /// Support endpoint: m for gapped GW-real, p for HP-real; infinite
    /// support is encoded as f64::INFINITY.
    pub endpoint: f64,
    /// Displayed constants, when the family has them (HP only).
    pub free_energy: Option<f64>,
    pub robin: Option<f64>,
    /// Jacobi coefficients (a_1, a_k, b_1, b_k) of the tridiagonal
    /// representation (HP only).
    pub jacobi: Option<(f64, f64, f64, f64)>,
}

pub fn real_ensemble_gw(g: f64) -> Result<RealEnsembleSpec> {
    if g < 0.0 {
        return Err(OpucError::Domain("GW real-line branch needs g >= 0".into()));
    }
    let endpoint = if g > 1.0 {
        (1.0 / (g - 1.0)).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(RealEnsembleSpec {
        family: RealFamily::GwReal,
        param: g,
        endpoint,
        free_energy: None,
        robin: None,
        jacobi: None,
    })
}

pub fn real_ensemble_hp(d: f64) -> Result<RealEnsembleSpec> {
    if d <= 0.0 {
        return Err(OpucError::Domain("HP real-line spec needs d > 0".into()));
    }
    let p = (1.0 + 2.0 * d).sqrt() / d;
    let f = (1.0 + d).powi(2) * (1.0 + d).ln() + d * d * d.ln()
        - 0.5 * (1.0 + 2.0 * d).powi(2) * (1.0 + 2.0 * d).ln()
        + (2.0 * d * d - 1.0) * 2f64.ln();
    let xi = (d + 0.5) * (1.0 + 2.0 * d).ln() - d * d.ln() - (1.0 + 2.0 * d) * 2f64.ln();
    let a1 = (2.0 * (1.0 + 2.0 * d) / (1.0 + d).powi(3)).sqrt();
    let ak = (1.0 + 2.0 * d) / (1.0 + d).powi(2);
    let b1 = -2.0 * d / (1.0 + d);
    let bk = -2.0 * d * d / (1.0 + d).powi(2);
    Ok(RealEnsembleSpec {
        family: RealFamily::HpReal,
        param: d,
        endpoint: p,
        free_energy: Some(f),
        robin: Some(xi),
        jacobi: Some((a1, ak, b1, bk)),
    })
}

impl RealEnsembleSpec {
    pub fn potential(&self, x: f64) -> f64 {
        match self.family {
            RealFamily::GwReal => {
                // V_{-g}(x) = g (x^2-1)/(x^2+1) + log(1+x^2)
                self.param * (x * x - 1.0) / (x * x + 1.0) + (1.0 + x * x).ln()
            }
            RealFamily::HpReal => (1.0 + self.param) * (1.0 + x * x).ln(),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match self.family {
            RealFamily::GwReal => RealDensity::GwReal { g: self.param }.eval(x),
            RealFamily::HpReal => RealDensity::HpReal { d: self.param }.eval(x),
        }
    }
}

// ---------------------------------------------------------------------------
// Potential transfer
// ---------------------------------------------------------------------------

/// Circle potentials with exact transfer formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CirclePotential {
    Zero,
    /// -g · Re z
    GrossWitten {
        g: f64,
    },
    /// -2 d · log|1 - z|
    HuaPickrell {
        d: f64,
    },
}

impl CirclePotential {
    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            CirclePotential::Zero => 0.0,
            CirclePotential::GrossWitten { g } => -g * theta.cos(),
            CirclePotential::HuaPickrell { d } => {
                let s = 2.0 * (theta / 2.0).sin().abs();
                if s == 0.0 {
                    f64::INFINITY
                } else {
                    -2.0 * d * s.ln()
                }
            }
        }
    }
}

/// Real potential V(x) = circle(tau^{-1}(x)) + log(1 + x^2), stored with the
/// additive constant that separates it from the family's displayed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferredPotential {
    pub base: CirclePotential,
    /// V(x) = displayed_form(x) + offset
    pub offset: f64,
}

pub fn potential_transfer(v: CirclePotential) -> TransferredPotential {
    let offset = match v {
        CirclePotential::Zero | CirclePotential::GrossWitten { .. } => 0.0,
        // |1 - tau^{-1}(x)| = 2/sqrt(1+x^2) turns -2d log|1-z| + log(1+x^2)
        // into (1+d) log(1+x^2) - 2d log 2
        CirclePotential::HuaPickrell { d } => -2.0 * d * 2f64.ln(),
    };
    TransferredPotential { base: v, offset }
}

impl TransferredPotential {
    /// V(x) = circle(tau^{-1}(x)) + log(1+x^2), exact closed form per family.
    pub fn eval(&self, x: f64) -> f64 {
        let lx = (1.0 + x * x).ln();
        match self.base {
            CirclePotential::Zero => lx,
            CirclePotential::GrossWitten { g } => {
                // Re tau^{-1}(x) = (x^2-1)/(x^2+1)
                -g * (x * x - 1.0) / (x * x + 1.0) + lx
            }
            CirclePotential::HuaPickrell { d } => (1.0 + d) * lx + self.offset,
        }
    }

    /// Displayed-form value (without the recorded additive constant).
    pub fn displayed(&self, x: f64) -> f64 {
        self.eval(x) - self.offset
    }

    /// Inverse transfer back to the circle: circle(theta) = V(tau(theta)) -
    /// log(1 + tau(theta)^2).
    pub fn inverse_at(&self, theta: f64) -> f64 {
        match cayley_point(theta) {
            ExtendedReal::Infinity => match self.base {
                CirclePotential::HuaPickrell { .. } => f64::INFINITY,
                CirclePotential::Zero => 0.0,
                CirclePotential::GrossWitten { g } => -g,
            },
            ExtendedReal::Finite(x) => self.eval(x) - (1.0 + x * x).ln(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gw_edges_and_masses() {
        // g = 2: theta_g = pi/2
        assert!((measure::gw_edge_angle(2.0) - PI / 2.0).abs() < 1e-14);
        for g in [0.0, 0.5, 2.0, -2.0] {
            let mu = gw_equilibrium(g);
            let mass = mu.ac_mass(1e-12);
            assert!((mass - 1.0).abs() < 1e-10, "g={g}: mass {mass}");
        }
    }

    #[test]
    fn hp_edge_and_mass() {
        assert!((measure::hp_edge_angle(1.0) - PI / 3.0).abs() < 1e-14);
        for d in [0.5, 1.0, 2.0] {
            let mu = hp_equilibrium(d).unwrap();
            assert!((mu.ac_mass(1e-12) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn constants_values() {
        let (f0, x0) = gw_constants(0.0);
        assert_eq!((f0, x0), (0.0, 0.0));
        let (f2, _) = gw_constants(2.0);
        assert!((f2 - (-2.0 + 0.5 * 2f64.ln() + 0.75)).abs() < 1e-15);
        let (fh, xh) = hp_constants(1.0);
        assert!((fh - (6.0 * 2f64.ln() - 4.5 * 3f64.ln())).abs() < 1e-13);
        assert!((xh - (2.0 * 2f64.ln() - 1.5 * 3f64.ln())).abs() < 1e-13);
        let (f0h, x0h) = hp_constants(0.0);
        assert_eq!((f0h, x0h), (0.0, 0.0));
    }

    #[test]
    fn gw_alpha_closed_form() {
        // g = 0.5, k = 0: alpha_0 = g/2
        let a0 = gw_equilibrium_alphas(0.5, 0).unwrap();
        assert!((a0.re - 0.25).abs() < 1e-14);
        // |g| = 1 sign convention: alpha_0(g=1) = 1/2, alpha_0(g=-1) = -1/2
        assert!((gw_equilibrium_alphas(1.0, 0).unwrap().re - 0.5).abs() < 1e-15);
        assert!((gw_equilibrium_alphas(-1.0, 0).unwrap().re + 0.5).abs() < 1e-15);
        // continuity across |g| = 1
        for k in 0..6 {
            let inner = gw_equilibrium_alphas(0.999999, k).unwrap();
            let edge = gw_equilibrium_alphas(1.0, k).unwrap();
            assert!((inner - edge).norm() < 1e-4, "k={k}: {inner} vs {edge}");
        }
    }

    #[test]
    fn cayley_basics() {
        match cayley_point(PI) {
            ExtendedReal::Finite(x) => assert!(x.abs() < 1e-15),
            _ => panic!("tau(e^{{i pi}}) must be finite"),
        }
        assert_eq!(cayley_point(0.0), ExtendedReal::Infinity);
        // tau^{-1}(0) = -1 corresponds to angle pi
        assert!((cayley_point_inv(ExtendedReal::Finite(0.0)) - PI).abs() < 1e-15);
        // round trip
        for t in [0.3, 1.0, PI, 4.0, 6.1] {
            let x = cayley_point(t);
            assert!((cayley_point_inv(x) - t).abs() < 1e-12);
        }
    }

    #[test]
    fn pushforward_of_uniform_is_cauchy() {
        let mu = CircleMeasure::uniform();
        let nu = cayley_pushforward(&mu);
        for x in [-3.0, -1.0, 0.0, 0.5, 2.0] {
            let expect = 1.0 / (PI * (1.0 + x * x));
            assert!((nu.density.eval(x) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn pushforward_of_hp_matches_real_density() {
        let d = 1.0;
        let mu = hp_equilibrium(d).unwrap();
        let nu = cayley_pushforward(&mu);
        let real = RealDensity::HpReal { d };
        for x in [-1.5, -0.5, 0.0, 0.7, 1.6] {
            assert!(
                (nu.density.eval(x) - real.eval(x)).abs() < 1e-10,
                "x={x}: {} vs {}",
                nu.density.eval(x),
                real.eval(x)
            );
        }
        // p = sqrt(3) for d = 1
        let spec = real_ensemble_hp(1.0).unwrap();
        assert!((spec.endpoint - 3f64.sqrt()).abs() < 1e-14);
        let (a1, ak, b1, bk) = spec.jacobi.unwrap();
        assert!((a1 - (3.0f64 / 4.0).sqrt()).abs() < 1e-14);
        assert!((ak - 0.75).abs() < 1e-15);
        assert!((b1 + 1.0).abs() < 1e-15);
        assert!((bk + 0.5).abs() < 1e-15);
    }

    #[test]
    fn gw_real_endpoint() {
        let spec = real_ensemble_gw(2.0).unwrap();
        assert!((spec.endpoint - 1.0).abs() < 1e-14);
    }

    #[test]
    fn potential_transfer_round_trip() {
        for v in [
            CirclePotential::Zero,
            CirclePotential::GrossWitten { g: 0.7 },
            CirclePotential::HuaPickrell { d: 1.3 },
        ] {
            let tv = potential_transfer(v);
            for theta in [0.4, 1.2, PI, 5.0] {
                let direct = v.eval(theta);
                let back = tv.inverse_at(theta);
                assert!(
                    (direct - back).abs() < 1e-12,
                    "{v:?} at {theta}: {direct} vs {back}"
                );
            }
        }
        // zero potential transfers to log(1+x^2)
        let tv = potential_transfer(CirclePotential::Zero);
        assert!((tv.eval(2.0) - 5f64.ln()).abs() < 1e-15);
        // HP offset: displayed form is (1+d) log(1+x^2)
        let d = 1.0;
        let tv = potential_transfer(CirclePotential::HuaPickrell { d });
        assert!((tv.offset + 2.0 * d * 2f64.ln()).abs() < 1e-15);
        assert!((tv.displayed(1.5) - (1.0 + d) * (1.0 + 2.25f64).ln()).abs() < 1e-12);
        // and agrees with the generic route through the circle potential
        let x: f64 = 1.5;
        let theta = PI + 2.0 * x.atan();
        let generic = CirclePotential::HuaPickrell { d }.eval(theta) + (1.0 + x * x).ln();
        assert!((tv.eval(x) - generic).abs() < 1e-12);
    }

    #[test]
    fn gw_real_potential_matches_transfer() {
        let g = 2.0;
        // transfer of the circle potential -(-g) Re z = V_{-g} display
        let tv = potential_transfer(CirclePotential::GrossWitten { g: -g });
        let spec = real_ensemble_gw(g).unwrap();
        for x in [-2.0, -0.3, 0.0, 1.2] {
            assert!((tv.eval(x) - spec.potential(x)).abs() < 1e-13);
        }
    }
}
