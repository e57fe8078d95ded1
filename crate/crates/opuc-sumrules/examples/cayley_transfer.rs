//! Travel between the circle and the real line: the Cayley transform on
//! points and measures, the potential transfer with its explicit additive
//! constant, real-line equilibrium data, and the dual closed forms of the
//! real-line outlier rate.
//!
//!     cargo run --release --example cayley_transfer

use opuc_sumrules::ensembles::{
    cayley_point, cayley_pushforward, hp_equilibrium, potential_transfer, real_ensemble_gw,
    real_ensemble_hp, CirclePotential, ExtendedReal,
};
use opuc_sumrules::measure::CircleMeasure;
use opuc_sumrules::rates::{outlier_rate_gw_real, outlier_rate_gw_real_direct, Side};
use std::f64::consts::PI;

fn main() {
    // points: tau(e^{i pi}) = 0, tau(1) = infinity (kept symbolic)
    println!("tau(e^(i pi)) = {:?}", cayley_point(PI));
    println!("tau(1)        = {:?}", cayley_point(0.0));

    // uniform measure pushes to the Cauchy distribution
    let cauchy = cayley_pushforward(&CircleMeasure::uniform());
    println!(
        "\npushforward of UNIF at x = 0: {:.9} (Cauchy 1/pi = {:.9})",
        cauchy.density.eval(0.0),
        1.0 / PI
    );

    // HP equilibrium pushes to the modified Cauchy law on [-p, p]
    let d = 1.0;
    let hp_real = real_ensemble_hp(d).unwrap();
    let push = cayley_pushforward(&hp_equilibrium(d).unwrap());
    println!(
        "\nHP d = {d}: p = {:.9} (sqrt 3 = {:.9})",
        hp_real.endpoint,
        3f64.sqrt()
    );
    for x in [-1.5, -0.5, 0.0, 1.0] {
        println!(
            "  x = {x:<5} pushforward = {:.9}  closed form = {:.9}",
            push.density.eval(x),
            hp_real.density(x)
        );
    }
    let (a1, ak, b1, bk) = hp_real.jacobi.unwrap();
    println!("  Jacobi coefficients: a_1 = {a1:.6}, a_k = {ak:.6}, b_1 = {b1:.6}, b_k = {bk:.6}");
    println!(
        "  real-line constants: F~ = {:.8}, xi~ = {:.8}",
        hp_real.free_energy.unwrap(),
        hp_real.robin.unwrap()
    );

    // potential transfer with the explicit additive constant
    let tv = potential_transfer(CirclePotential::HuaPickrell { d });
    println!(
        "\ntransferred HP potential: V(x) = (1+d) log(1+x^2) {:+.6}; at x = 1: {:.9}",
        tv.offset,
        tv.eval(1.0)
    );
    let x = match cayley_point(2.0) {
        ExtendedReal::Finite(v) => v,
        _ => unreachable!(),
    };
    println!(
        "  round trip at theta = 2: circle potential {:.9} vs inverse transfer {:.9}",
        CirclePotential::HuaPickrell { d }.eval(2.0),
        tv.eval(x) - (1.0 + x * x).ln()
    );

    // gapped GW on the line: support endpoint and outlier rate in two forms
    let g = 2.0;
    let gw_real = real_ensemble_gw(g).unwrap();
    println!("\nGW real line, g = {g}: m = {:.6}", gw_real.endpoint);
    for x in [1.2, 2.0, 4.0] {
        let closed = outlier_rate_gw_real(x, g, Side::Plus).unwrap();
        let direct = outlier_rate_gw_real_direct(x, g).unwrap();
        println!(
            "  F+({x:<4}) closed = {closed:.10}  direct integral = {direct:.10}  gap = {:.2e}",
            (closed - direct).abs()
        );
    }
}
