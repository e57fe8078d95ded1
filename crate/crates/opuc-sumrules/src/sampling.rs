//! Seeded samplers for the coefficient ensembles (CUE / Hua-Pickrell /
//! Gross-Witten) and Monte Carlo checks of the spectral predictions.

use crate::cmv::{cmv_dense, trace_functional, unitary_eigen_angles};
use crate::coeffs::{alphas_from_deformed, CoefficientSequence, Tail};
use crate::error::{OpucError, Result};
use crate::measure::TWO_PI;
use crate::quad;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

pub const RNG_ALGORITHM: &str = "chacha12";

/// Deterministic stream: identical (seed, stream_id) reproduce identical
/// draws; distinct stream ids give independent streams by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha12Rng {
        let mut r = ChaCha12Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream_id);
        r
    }
}

fn uniform_phase(rng: &mut ChaCha12Rng) -> f64 {
    rng.gen::<f64>() * TWO_PI
}

/// Killip-Nenciu draw for the Haar ensemble: |alpha_k|^2 ~ Beta(1, n-k-1)
/// with uniform phase, and a final unimodular coefficient.
pub fn sample_cue_alphas(n: usize, rng: &mut ChaCha12Rng) -> CoefficientSequence {
    let mut head = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(1) {
        let b = (n - k - 1) as f64;
        let u: f64 = rng.gen();
        let r2 = 1.0 - u.powf(1.0 / b);
        head.push(Complex64::from_polar(
            r2.sqrt().min(1.0 - 1e-15),
            uniform_phase(rng),
        ));
    }
    head.push(Complex64::from_polar(1.0, uniform_phase(rng)));
    CoefficientSequence::plain(head, Tail::None).expect("coefficients in the disk")
}

/// Uniform point on the simplex (Dirichlet(1,...,1)) via normalized
/// exponentials.
pub fn sample_weights(n: usize, rng: &mut ChaCha12Rng) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| -(rng.gen::<f64>().max(1e-300)).ln())
        .collect();
    let s: f64 = w.iter().sum();
    for x in &mut w {
        *x /= s;
    }
    w
}

#[derive(Debug, Clone, Default)]
pub struct ChainDiagnostics {
    pub acceptance: f64,
    pub autocorrelation_time: f64,
    pub thin: usize,
    pub warnings: Vec<String>,
}

/// Random-walk Metropolis chain on the unit disk for a log-density
/// m log(1-|z|^2) + 2 delta log|1-z|.
struct DiskChain {
    m: f64,
    delta: f64,
    z: Complex64,
    step: f64,
    thin: usize,
}

impl DiskChain {
    fn log_density(&self, z: Complex64) -> f64 {
        let r2 = z.norm_sqr();
        if r2 >= 1.0 {
            return f64::NEG_INFINITY;
        }
        self.m * (1.0 - r2).ln() + 2.0 * self.delta * (Complex64::new(1.0, 0.0) - z).norm().ln()
    }

    fn new(m: f64, delta: f64) -> Self {
        // mode of the radial profile: x = -delta/(m + delta)
        let x0 = if m + delta > 0.0 {
            -delta / (m + delta)
        } else {
            0.0
        };
        let step = 1.0 / (1.0 + (m + delta).sqrt());
        DiskChain {
            m,
            delta,
            z: Complex64::new(x0, 0.0),
            step,
            thin: 1,
        }
    }

    fn metropolis_step(&mut self, rng: &mut ChaCha12Rng) -> bool {
        let dx: f64 = rng.sample(StandardNormal);
        let dy: f64 = rng.sample(StandardNormal);
        let z_new = self.z + self.step * Complex64::new(dx, dy);
        let dl = self.log_density(z_new) - self.log_density(self.z);
        if dl >= 0.0 || rng.gen::<f64>() < dl.exp() {
            self.z = z_new;
            true
        } else {
            false
        }
    }

    /// Tune the step to 25-35% acceptance over a 5000-step burn-in and
    /// measure the integrated autocorrelation time of Re z.
    fn burn_in(&mut self, rng: &mut ChaCha12Rng) -> ChainDiagnostics {
        let mut accepted = 0usize;
        let mut window = 0usize;
        let mut trace = Vec::with_capacity(2500);
        for i in 0..5000 {
            if self.metropolis_step(rng) {
                accepted += 1;
            }
            window += 1;
            if window == 100 {
                let acc = accepted as f64 / 100.0;
                if !(0.25..=0.35).contains(&acc) {
                    self.step *= (0.5 * (acc - 0.30)).exp().clamp(0.5, 2.0);
                }
                accepted = 0;
                window = 0;
            }
            if i >= 2500 {
                trace.push(self.z.re);
            }
        }
        let tau = integrated_autocorrelation(&trace);
        self.thin = tau.ceil().clamp(1.0, 50.0) as usize;
        let mut acc_meas = 0usize;
        for _ in 0..400 {
            if self.metropolis_step(rng) {
                acc_meas += 1;
            }
        }
        ChainDiagnostics {
            acceptance: acc_meas as f64 / 400.0,
            autocorrelation_time: tau,
            thin: self.thin,
            warnings: vec![],
        }
    }

    fn draw(&mut self, rng: &mut ChaCha12Rng) -> Complex64 {
        for _ in 0..self.thin {
            self.metropolis_step(rng);
        }
        self.z
    }
}

fn integrated_autocorrelation(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 16 {
        return 1.0;
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let var: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    if var <= 0.0 {
        return 1.0;
    }
    let mut tau = 1.0;
    for lag in 1..(n / 4) {
        let mut c = 0.0;
        for i in 0..n - lag {
            c += (x[i] - mean) * (x[i + lag] - mean);
        }
        let rho = c / ((n - lag) as f64 * var);
        if rho < 0.05 {
            break;
        }
        tau += 2.0 * rho;
    }
    tau
}

/// Independent deformed-coefficient sampler for the Hua-Pickrell ensemble
/// with delta = n d: each gamma_k (k <= n-2) has density proportional to
/// (1-|z|^2)^{n-k-2} |1-z|^{2 delta} on the disk, and gamma_{n-1} lies on
/// the circle with density proportional to |1-zeta|^{2 delta}.
pub struct HpGammaSampler {
    n: usize,
    rejection: bool,
    delta: f64,
    chains: Vec<DiskChain>,
    /// inverse-CDF table for the boundary coefficient
    boundary_cdf: Vec<f64>,
    boundary_grid: Vec<f64>,
    pub diagnostics: Vec<ChainDiagnostics>,
}

impl HpGammaSampler {
    pub fn new(n: usize, d: f64, rng: &mut ChaCha12Rng) -> Result<Self> {
        if d < 0.0 {
            return Err(OpucError::Domain(format!("d = {d} must be >= 0")));
        }
        if n == 0 {
            return Err(OpucError::Domain("n must be positive".into()));
        }
        let delta = n as f64 * d;
        // rejection from the Haar envelope has acceptance ~ 2^{-2 delta}
        let rejection = 0.5f64.powf(2.0 * delta) >= 1e-4;
        let mut chains = Vec::new();
        let mut diagnostics = Vec::new();
        if !rejection {
            for k in 0..n - 1 {
                let mut ch = DiskChain::new((n - k - 2) as f64, delta);
                diagnostics.push(ch.burn_in(rng));
                chains.push(ch);
            }
        }
        // boundary density (sin(theta/2))^{2 delta} tabulated for inversion
        let grid_n = 4096;
        let mut grid = Vec::with_capacity(grid_n + 1);
        let mut cdf = Vec::with_capacity(grid_n + 1);
        let mut acc = 0.0;
        let logmax = 0.0; // max of 2 delta log sin(t/2) at t = pi
        for i in 0..=grid_n {
            let t = TWO_PI * i as f64 / grid_n as f64;
            grid.push(t);
            let s = (t / 2.0).sin().max(0.0);
            let v = if s > 0.0 {
                (2.0 * delta * (s.ln()) - logmax).exp()
            } else {
                0.0
            };
            if i > 0 {
                acc += v * TWO_PI / grid_n as f64;
            }
            cdf.push(acc);
        }
        for c in &mut cdf {
            *c /= acc;
        }
        Ok(HpGammaSampler {
            n,
            rejection,
            delta,
            chains,
            boundary_cdf: cdf,
            boundary_grid: grid,
            diagnostics,
        })
    }

    fn draw_boundary(&self, rng: &mut ChaCha12Rng) -> Complex64 {
        let u: f64 = rng.gen();
        let idx = self
            .boundary_cdf
            .partition_point(|&c| c < u)
            .min(self.boundary_grid.len() - 1);
        let (c0, c1) = (self.boundary_cdf[idx - 1], self.boundary_cdf[idx]);
        let (t0, t1) = (self.boundary_grid[idx - 1], self.boundary_grid[idx]);
        let w = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        Complex64::from_polar(1.0, t0 + w * (t1 - t0))
    }

    pub fn draw(&mut self, rng: &mut ChaCha12Rng) -> CoefficientSequence {
        let mut head = Vec::with_capacity(self.n);
        if self.rejection {
            for k in 0..self.n - 1 {
                let b = (self.n - k - 1) as f64;
                loop {
                    let u: f64 = rng.gen();
                    let r2 = 1.0 - u.powf(1.0 / b);
                    let z = Complex64::from_polar(r2.sqrt(), uniform_phase(rng));
                    let log_acc =
                        2.0 * self.delta * (((Complex64::new(1.0, 0.0) - z).norm() / 2.0).ln());
                    if rng.gen::<f64>().ln() < log_acc {
                        head.push(z);
                        break;
                    }
                }
            }
        } else {
            for ch in &mut self.chains {
                head.push(ch.draw(rng));
            }
        }
        head.push(self.draw_boundary(rng));
        CoefficientSequence::deformed(head, Tail::None).expect("draws in the disk")
    }
}

/// One-shot convenience draw.
pub fn sample_hp_gammas(n: usize, d: f64, rng: &mut ChaCha12Rng) -> Result<CoefficientSequence> {
    let mut s = HpGammaSampler::new(n, d, rng)?;
    Ok(s.draw(rng))
}

/// Joint Metropolis sampler for the Gross-Witten coefficient law:
/// density proportional to exp[n g Re(alpha_0 - sum_{k>=1} alpha_k
/// conj(alpha_{k-1}))] against the Killip-Nenciu reference.
pub struct GwAlphaSampler {
    n: usize,
    g: f64,
    state: Vec<Complex64>,
    steps: Vec<f64>,
    thin: usize,
    pub diagnostics: ChainDiagnostics,
}

impl GwAlphaSampler {
    pub fn new(n: usize, g: f64, rng: &mut ChaCha12Rng) -> Result<Self> {
        if n < 2 {
            return Err(OpucError::Domain("need n >= 2".into()));
        }
        let mut state: Vec<Complex64> = Vec::with_capacity(n);
        for k in 0..n - 1 {
            let m = (n - k - 2) as f64;
            // start near the tilted mode of the local radial profile
            let x0 = (n as f64 * g / 2.0) / (m + n as f64 * g.abs() + 1.0);
            state.push(Complex64::new(x0.clamp(-0.9, 0.9), 0.0));
        }
        state.push(Complex64::from_polar(1.0, uniform_phase(rng)));
        let steps: Vec<f64> = (0..n)
            .map(|k| {
                let m = n.saturating_sub(k + 2) as f64;
                1.0 / (1.0 + (m + n as f64 * g.abs()).sqrt())
            })
            .collect();
        let mut s = GwAlphaSampler {
            n,
            g,
            state,
            steps,
            thin: 1,
            diagnostics: ChainDiagnostics::default(),
        };
        s.burn_in(rng);
        Ok(s)
    }

    fn local_log_density(&self, k: usize, z: Complex64) -> f64 {
        let n = self.n;
        let ng = self.n as f64 * self.g;
        let mut l = 0.0;
        if k < n - 1 {
            let r2 = z.norm_sqr();
            if r2 >= 1.0 {
                return f64::NEG_INFINITY;
            }
            l += (n - k - 2) as f64 * (1.0 - r2).ln();
        }
        // coupling terms of the trace functional that involve site k
        if k == 0 {
            l += ng * z.re;
        }
        if k > 0 {
            l -= ng * (z * self.state[k - 1].conj()).re;
        }
        if k + 1 < n {
            l -= ng * (self.state[k + 1] * z.conj()).re;
        }
        l
    }

    fn site_step(&mut self, k: usize, rng: &mut ChaCha12Rng) -> bool {
        let z_old = self.state[k];
        let z_new = if k == self.n - 1 {
            let dphi: f64 = rng.sample::<f64, _>(StandardNormal) * self.steps[k];
            Complex64::from_polar(1.0, z_old.arg() + dphi)
        } else {
            let dx: f64 = rng.sample(StandardNormal);
            let dy: f64 = rng.sample(StandardNormal);
            z_old + self.steps[k] * Complex64::new(dx, dy)
        };
        let dl = self.local_log_density(k, z_new) - self.local_log_density(k, z_old);
        if dl >= 0.0 || rng.gen::<f64>() < dl.exp() {
            self.state[k] = z_new;
            true
        } else {
            false
        }
    }

    fn sweep(&mut self, rng: &mut ChaCha12Rng) -> f64 {
        let mut acc = 0usize;
        for k in 0..self.n {
            if self.site_step(k, rng) {
                acc += 1;
            }
        }
        acc as f64 / self.n as f64
    }

    fn burn_in(&mut self, rng: &mut ChaCha12Rng) {
        let mut trace = Vec::with_capacity(2500);
        let mut acc_win = 0.0;
        let mut wins = 0;
        for i in 0..5000 {
            let acc = self.sweep(rng);
            acc_win += acc;
            wins += 1;
            if wins == 100 {
                let a = acc_win / 100.0;
                if !(0.25..=0.35).contains(&a) {
                    let f = (0.5 * (a - 0.30)).exp().clamp(0.5, 2.0);
                    for s in &mut self.steps {
                        *s *= f;
                    }
                }
                acc_win = 0.0;
                wins = 0;
            }
            if i >= 2500 {
                trace.push(trace_functional(&self.state));
            }
        }
        let tau = integrated_autocorrelation(&trace);
        self.thin = tau.ceil().clamp(1.0, 100.0) as usize;
        let mut acc = 0.0;
        for _ in 0..100 {
            acc += self.sweep(rng);
        }
        self.diagnostics = ChainDiagnostics {
            acceptance: acc / 100.0,
            autocorrelation_time: tau,
            thin: self.thin,
            warnings: if tau > 80.0 {
                vec![format!("slow mixing: tau = {tau:.1}")]
            } else {
                vec![]
            },
        };
    }

    pub fn draw(&mut self, rng: &mut ChaCha12Rng) -> CoefficientSequence {
        for _ in 0..self.thin {
            self.sweep(rng);
        }
        CoefficientSequence::plain(self.state.clone(), Tail::None).expect("state in the disk")
    }
}

/// One-shot convenience draw; g = 0 takes the exact Killip-Nenciu path.
pub fn sample_gw_alphas(n: usize, g: f64, rng: &mut ChaCha12Rng) -> Result<CoefficientSequence> {
    if g == 0.0 {
        return Ok(sample_cue_alphas(n, rng));
    }
    let mut s = GwAlphaSampler::new(n, g, rng)?;
    Ok(s.draw(rng))
}

// ---------------------------------------------------------------------------
// Monte Carlo spectral checks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EsdEnsemble {
    Cue,
    Hp { d: f64 },
    Gw { g: f64 },
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct EsdCheck {
    pub ks_distance: f64,
    pub support_violation_rate: f64,
    pub samples: usize,
}

/// Pooled empirical spectral distribution over `reps` draws of the n-point
/// ensemble, compared in Kolmogorov distance against the equilibrium CDF.
pub fn empirical_esd_check(
    ens: EsdEnsemble,
    n: usize,
    reps: usize,
    stream: RngStream,
) -> Result<EsdCheck> {
    let mut rng = stream.rng();
    let mut angles: Vec<f64> = Vec::with_capacity(n * reps);
    match ens {
        EsdEnsemble::Cue => {
            for _ in 0..reps {
                let seq = sample_cue_alphas(n, &mut rng);
                collect_eigenangles(&seq, &mut angles)?;
            }
        }
        EsdEnsemble::Hp { d } => {
            let mut sampler = HpGammaSampler::new(n, d, &mut rng)?;
            for _ in 0..reps {
                let gam = sampler.draw(&mut rng);
                let seq = alphas_from_deformed(&gam)?;
                collect_eigenangles(&seq, &mut angles)?;
            }
        }
        EsdEnsemble::Gw { g } => {
            if g == 0.0 {
                return empirical_esd_check(EsdEnsemble::Cue, n, reps, stream);
            }
            let mut sampler = GwAlphaSampler::new(n, g, &mut rng)?;
            for _ in 0..reps {
                let seq = sampler.draw(&mut rng);
                collect_eigenangles(&seq, &mut angles)?;
            }
        }
    }
    // equilibrium chart and CDF
    type DensityFn = Box<dyn Fn(f64) -> f64>;
    let (lo, hi, edges, density): (f64, f64, (bool, bool), DensityFn) = match ens {
        EsdEnsemble::Cue => (0.0, TWO_PI, (false, false), Box::new(|_| 1.0 / TWO_PI)),
        EsdEnsemble::Hp { d } => {
            let mu = crate::ensembles::hp_equilibrium(d)?;
            let (lo, hi) = mu.arc();
            (
                lo,
                hi,
                mu.edges(),
                Box::new(move |t| mu.density_at(t) / TWO_PI),
            )
        }
        EsdEnsemble::Gw { g } => {
            let mu = crate::ensembles::gw_equilibrium(g);
            let (lo, hi) = mu.arc();
            (
                lo,
                hi,
                mu.edges(),
                Box::new(move |t| mu.density_at(t) / TWO_PI),
            )
        }
    };
    // fold sample angles into the chart [lo, lo + 2pi)
    for a in &mut angles {
        while *a < lo {
            *a += TWO_PI;
        }
        while *a >= lo + TWO_PI {
            *a -= TWO_PI;
        }
    }
    angles.sort_by(f64::total_cmp);
    let violations = angles
        .iter()
        .filter(|&&a| a < lo - 1e-9 || a > hi + 1e-9)
        .count();
    // cumulative equilibrium CDF on a grid
    let grid_n = 4096;
    let mut cdf = vec![0.0f64; grid_n + 1];
    for i in 1..=grid_n {
        let a = lo + (hi - lo) * (i - 1) as f64 / grid_n as f64;
        let b = lo + (hi - lo) * i as f64 / grid_n as f64;
        let (el, eh) = (edges.0 && i == 1, edges.1 && i == grid_n);
        cdf[i] = cdf[i - 1] + quad::integrate_sqrt_edges(&density, a, b, el, eh, 1e-11).value;
    }
    let total = cdf[grid_n];
    let eval_cdf = |t: f64| -> f64 {
        if t <= lo {
            return 0.0;
        }
        if t >= hi {
            return 1.0;
        }
        let x = (t - lo) / (hi - lo) * grid_n as f64;
        let i = (x.floor() as usize).min(grid_n - 1);
        let w = x - i as f64;
        (cdf[i] * (1.0 - w) + cdf[i + 1] * w) / total
    };
    let m = angles.len() as f64;
    let mut ks = 0.0f64;
    for (i, &a) in angles.iter().enumerate() {
        let f = eval_cdf(a);
        ks = ks
            .max((f - i as f64 / m).abs())
            .max(((i + 1) as f64 / m - f).abs());
    }
    Ok(EsdCheck {
        ks_distance: ks,
        support_violation_rate: violations as f64 / m,
        samples: angles.len(),
    })
}

fn collect_eigenangles(seq: &CoefficientSequence, out: &mut Vec<f64>) -> Result<()> {
    let head: Vec<Complex64> = seq.head().to_vec();
    let angles = unitary_eigen_angles(&cmv_dense(&head))?;
    out.extend(angles);
    Ok(())
}

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut xa: Vec<f64> = a.to_vec();
    let mut xb: Vec<f64> = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    let lambda = (ne + 0.12 + 0.11 / ne) * d;
    (d, kolmogorov_q(lambda))
}

fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut q = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let term = sign * (-2.0 * (j as f64) * (j as f64) * lambda * lambda).exp();
        q += term;
        sign = -sign;
        if term.abs() < 1e-12 {
            break;
        }
    }
    (2.0 * q).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::hp_gamma;

    #[test]
    fn determinism() {
        let s = RngStream::new(7, 0);
        let a = sample_cue_alphas(5, &mut s.rng());
        let b = sample_cue_alphas(5, &mut s.rng());
        assert_eq!(a.head(), b.head());
        let other = sample_cue_alphas(5, &mut RngStream::new(7, 1).rng());
        assert_ne!(a.head(), other.head());
    }

    #[test]
    fn cue_beta_mean() {
        // n = 50: E|alpha_0|^2 = 1/50
        let mut rng = RngStream::new(11, 0).rng();
        let reps = 2000;
        let n = 50;
        let mut mean = 0.0;
        for _ in 0..reps {
            let seq = sample_cue_alphas(n, &mut rng);
            mean += seq.head()[0].norm_sqr();
        }
        mean /= reps as f64;
        // Var of Beta(1, n-1) is about 1/n^2; SE = 1/(n sqrt reps)
        let se = 1.0 / (n as f64 * (reps as f64).sqrt());
        assert!((mean - 1.0 / n as f64).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn weights_sum_and_mean() {
        let mut rng = RngStream::new(3, 0).rng();
        let w = sample_weights(1, &mut rng);
        assert_eq!(w, vec![1.0]);
        let reps = 5000;
        let mut mean1 = 0.0;
        for _ in 0..reps {
            let w = sample_weights(10, &mut rng);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            mean1 += w[0];
        }
        mean1 /= reps as f64;
        assert!((mean1 - 0.1).abs() < 0.005, "mean {mean1}");
    }

    #[test]
    fn hp_sampler_concentrates_at_gamma_d() {
        let (n, d) = (100usize, 1.0);
        let mut rng = RngStream::new(2024, 0).rng();
        let mut sampler = HpGammaSampler::new(n, d, &mut rng).unwrap();
        let reps = 400;
        let mut sum = Complex64::default();
        let mut sq = 0.0;
        for _ in 0..reps {
            let g = sampler.draw(&mut rng);
            sum += g.head()[0];
            sq += g.head()[0].re * g.head()[0].re;
        }
        let mean = sum / reps as f64;
        let var = (sq / reps as f64 - mean.re * mean.re).max(0.0);
        let se = (var / reps as f64).sqrt().max(1e-4);
        let gd = hp_gamma(d);
        assert!(
            (mean.re - gd).abs() < 3.0 * se + 2.0 / n as f64,
            "mean {} vs gamma_d {gd} (se {se})",
            mean.re
        );
        assert!(mean.im.abs() < 3.0 * se + 2.0 / n as f64);
    }

    #[test]
    fn hp_d0_matches_cue_distribution() {
        // two-sample KS on |gamma_0| at d = 0 versus the Haar draw
        let n = 12;
        let mut rng = RngStream::new(5, 0).rng();
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut sampler = HpGammaSampler::new(n, 0.0, &mut rng).unwrap();
        for _ in 0..5000 {
            a.push(sampler.draw(&mut rng).head()[0].norm());
            b.push(sample_cue_alphas(n, &mut rng).head()[0].norm());
        }
        let (d, p) = ks_two_sample(&a, &b);
        assert!(p > 0.01, "KS D = {d}, p = {p}");
    }

    #[test]
    fn gw_zero_coupling_is_exact_cue() {
        let mut r1 = RngStream::new(9, 0).rng();
        let mut r2 = RngStream::new(9, 0).rng();
        let a = sample_gw_alphas(6, 0.0, &mut r1).unwrap();
        let b = sample_cue_alphas(6, &mut r2);
        assert_eq!(a.head(), b.head());
    }

    #[test]
    fn gw_first_moment_consistency() {
        // E[Re tr U / n] -> g/2 under GW_g
        let (n, g) = (60usize, 0.5);
        let mut rng = RngStream::new(41, 0).rng();
        let mut sampler = GwAlphaSampler::new(n, g, &mut rng).unwrap();
        let reps = 300;
        let mut vals = Vec::with_capacity(reps);
        for _ in 0..reps {
            let seq = sampler.draw(&mut rng);
            vals.push(trace_functional(seq.head()) / n as f64);
        }
        let mean: f64 = vals.iter().sum::<f64>() / reps as f64;
        let var: f64 =
            vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (reps - 1) as f64;
        let se = (var / reps as f64).sqrt();
        assert!(
            (mean - g / 2.0).abs() < 3.0 * se + 2.0 / n as f64,
            "mean {mean} vs {} (se {se}, tau {})",
            g / 2.0,
            sampler.diagnostics.autocorrelation_time
        );
    }

    #[test]
    fn esd_cue_small() {
        let check = empirical_esd_check(EsdEnsemble::Cue, 40, 30, RngStream::new(17, 0)).unwrap();
        assert!(check.ks_distance < 0.05, "D = {}", check.ks_distance);
        assert_eq!(check.support_violation_rate, 0.0);
    }
}
