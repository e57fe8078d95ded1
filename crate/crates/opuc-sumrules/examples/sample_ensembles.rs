//! Seeded sampling of the three coefficient ensembles and their spectral
//! statistics: Killip-Nenciu draws for the Haar measure, independent
//! deformed coefficients for Hua-Pickrell, and the Metropolis chain for
//! Gross-Witten, each compared against its equilibrium law.
//!
//!     cargo run --release --example sample_ensembles

use opuc_sumrules::cmv::trace_functional;
use opuc_sumrules::ensembles::hp_gamma;
use opuc_sumrules::sampling::{
    empirical_esd_check, sample_cue_alphas, EsdEnsemble, GwAlphaSampler, HpGammaSampler, RngStream,
};

fn main() {
    let stream = RngStream::new(42, 0);
    let mut rng = stream.rng();

    // CUE: |alpha_k|^2 ~ Beta(1, n-k-1)
    let n = 50;
    let seq = sample_cue_alphas(n, &mut rng);
    println!(
        "CUE n = {n}: |alpha_0| = {:.4}, |alpha_{}| = {:.4} (last is unimodular)",
        seq.head()[0].norm(),
        n - 1,
        seq.head()[n - 1].norm()
    );

    // HP deformed coefficients concentrate at gamma_d
    let (n, d) = (100, 1.0);
    let mut sampler = HpGammaSampler::new(n, d, &mut rng).unwrap();
    let reps = 200;
    let mut mean = num_complex::Complex64::default();
    for _ in 0..reps {
        mean += sampler.draw(&mut rng).head()[0];
    }
    mean /= reps as f64;
    println!(
        "HP n = {n}, d = {d}: mean gamma_0 over {reps} draws = {:.4} {:+.4}i (gamma_d = {})",
        mean.re,
        mean.im,
        hp_gamma(d)
    );
    let diag = &sampler.diagnostics[0];
    println!(
        "  chain diagnostics (k = 0): acceptance {:.2}, tau = {:.1}, thin = {}",
        diag.acceptance, diag.autocorrelation_time, diag.thin
    );

    // GW chain: first-moment consistency E[Re tr U / n] -> g/2
    let (n, g) = (60, 0.5);
    let mut sampler = GwAlphaSampler::new(n, g, &mut rng).unwrap();
    let mut mean = 0.0;
    let reps = 200;
    for _ in 0..reps {
        mean += trace_functional(sampler.draw(&mut rng).head()) / n as f64;
    }
    mean /= reps as f64;
    println!(
        "GW n = {n}, g = {g}: mean Re tr U / n = {mean:.4} (g/2 = {}); acceptance {:.2}, tau {:.1}",
        g / 2.0,
        sampler.diagnostics.acceptance,
        sampler.diagnostics.autocorrelation_time
    );

    // pooled empirical spectral distributions vs the equilibrium laws
    println!("\npooled ESD Kolmogorov distances (n = 120, 20 reps):");
    for (name, ens) in [
        ("CUE        ", EsdEnsemble::Cue),
        ("HP  d = 1.0", EsdEnsemble::Hp { d: 1.0 }),
        ("GW  g = 2.0", EsdEnsemble::Gw { g: 2.0 }),
    ] {
        let check = empirical_esd_check(ens, 120, 20, RngStream::new(42, 7)).unwrap();
        println!(
            "  {name}: KS = {:.4}, outside-support fraction = {:.4}",
            check.ks_distance, check.support_violation_rate
        );
    }
}
