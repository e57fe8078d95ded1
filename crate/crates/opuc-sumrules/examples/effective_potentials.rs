//! Effective potentials and outlier rates: Euler-Lagrange flatness on the
//! support, the dual evaluation methods off the support, the kappa
//! mass-defect constant, and the 3/2-power edge behaviour.
//!
//!     cargo run --release --example effective_potentials

use opuc_sumrules::ensembles::EnsembleSpec;
use opuc_sumrules::measure::hp_edge_angle;
use opuc_sumrules::rates::{
    effective_potential, mass_defect_rate, outlier_rate_hp, EffPotMethod, Side,
};
use std::f64::consts::PI;

fn main() {
    for ens in [EnsembleSpec::hp(1.0).unwrap(), EnsembleSpec::gw(-2.0)] {
        println!(
            "== {:?} param {} : support [{:.5}, {:.5}], 2 xi = {:.9} ==",
            ens.family,
            ens.param,
            ens.arc_lo,
            ens.arc_hi,
            2.0 * ens.robin
        );
        println!("on the support, J(theta) sits at 2 xi:");
        for j in 1..4 {
            let t = ens.arc_lo + (ens.arc_hi - ens.arc_lo) * j as f64 / 4.0;
            let direct = effective_potential(t, &ens, EffPotMethod::DirectDoubleIntegral).unwrap();
            println!(
                "  theta = {t:<8.5} J = {direct:<14.10} J - 2xi = {:+.2e}",
                direct - 2.0 * ens.robin
            );
        }
        println!("off the support, the two methods agree:");
        for j in 1..4 {
            let t = ens.arc_lo * j as f64 / 4.0;
            if t <= 0.0 {
                continue;
            }
            let direct = effective_potential(t, &ens, EffPotMethod::DirectDoubleIntegral).unwrap();
            let closed = effective_potential(t, &ens, EffPotMethod::ClosedFormS).unwrap();
            println!(
                "  theta = {t:<8.5} direct = {direct:<14.10} closed = {closed:<14.10} gap = {:.2e}",
                (direct - closed).abs()
            );
        }
        println!();
    }

    // mass defect: finite for the attractive GW phase, infinite for HP
    let gw = EnsembleSpec::gw(-2.0);
    println!("kappa (GW g = -2)  = {:.9}", mass_defect_rate(0.9, &gw));
    let hp = EnsembleSpec::hp(1.0).unwrap();
    println!("kappa (HP d = 1)   = {}", mass_defect_rate(0.9, &hp));

    // edge behaviour of F^-: c (theta_d - theta)^{3/2}
    let d = 1.0;
    let td = hp_edge_angle(d);
    println!("\nF^- near the edge theta_d = pi/3 = {:.6}:", PI / 3.0);
    for k in 1..=4 {
        let dt = 10f64.powi(-k);
        let f = outlier_rate_hp(td - dt, d, Side::Minus);
        println!(
            "  theta_d - theta = 1e-{k}: F^- = {f:.3e}, F^- / dt^1.5 = {:.6}",
            f / dt.powf(1.5)
        );
    }
}
