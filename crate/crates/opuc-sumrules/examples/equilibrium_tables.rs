//! Equilibrium data for the two circle ensembles: densities, support arcs,
//! free energies, Robin constants, and coefficient closed forms.
//!
//!     cargo run --release --example equilibrium_tables

use opuc_sumrules::ensembles::{gw_equilibrium_alphas, EnsembleSpec};
use opuc_sumrules::measure::TWO_PI;

fn main() {
    println!("== Hua-Pickrell ==");
    for d in [0.0, 0.5, 1.0, 2.0] {
        let ens = EnsembleSpec::hp(d).unwrap();
        println!(
            "d = {d:<4} edge = {:<8.5} arc = [{:.5}, {:.5}]  F = {:<12.8} xi = {:<12.8}",
            ens.edge, ens.arc_lo, ens.arc_hi, ens.free_energy, ens.robin
        );
    }
    println!("   equilibrium Verblunsky coefficient gamma_d = -d/(1+d), constant in k");

    println!("\n== Gross-Witten ==");
    for g in [0.0, 0.5, 1.0, 2.0, -2.0] {
        let ens = EnsembleSpec::gw(g);
        println!(
            "g = {g:<4} edge = {:<8.5} arc = [{:.5}, {:.5}]  F = {:<12.8} xi = {:<12.8}",
            ens.edge, ens.arc_lo, ens.arc_hi, ens.free_energy, ens.robin
        );
    }

    println!("\nGW equilibrium coefficients (ungapped phase):");
    for g in [0.3, 0.7, 1.0] {
        let row: Vec<String> = (0..6)
            .map(|k| format!("{:+.6}", gw_equilibrium_alphas(g, k).unwrap().re))
            .collect();
        println!("g = {g}: alpha_0..alpha_5 = {}", row.join(", "));
    }

    println!("\nHP density sampled over its arc (d = 1):");
    let ens = EnsembleSpec::hp(1.0).unwrap();
    for j in 0..=8 {
        let t = ens.arc_lo + (ens.arc_hi - ens.arc_lo) * j as f64 / 8.0;
        println!(
            "  theta = {:<8.5} ({}·2pi)  rho = {:.6}",
            t,
            t / TWO_PI,
            ens.density(t)
        );
    }
}
