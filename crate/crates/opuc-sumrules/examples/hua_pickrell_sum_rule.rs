//! The Hua-Pickrell sum rule: reversed KL divergence against the arc
//! equilibrium measure plus outlier rates, equal to the series of
//! H_d over the deformed coefficients. Includes a constructed
//! single-outlier case whose atom is located by CMV truncation and
//! quantified by radial Carathéodory limits.
//!
//!     cargo run --release --example hua_pickrell_sum_rule

use num_complex::Complex64;
use opuc_sumrules::coeffs::{CoefficientSequence, Tail};
use opuc_sumrules::ensembles::hp_gamma;
use opuc_sumrules::sumrules::{construct_single_outlier, MeasureSource, Rule, SumRuleCase};

fn main() {
    let d = 1.0;
    let gd = hp_gamma(d);
    println!("d = {d}: gamma_d = {gd}, support arc [pi/3, 5pi/3]\n");

    // equilibrium: both sides vanish
    let eq = CoefficientSequence::deformed(
        vec![Complex64::new(gd, 0.0)],
        Tail::constant(Complex64::new(gd, 0.0)),
    )
    .unwrap();
    let rep = SumRuleCase::new(Rule::Hp { d }, MeasureSource::Coefficients(eq))
        .unwrap()
        .run()
        .unwrap();
    println!(
        "equilibrium:       LHS = {:.3e}  RHS = {:.3e}",
        rep.lhs_total, rep.rhs_total
    );

    // smooth perturbation: KL only on the left, one H_d term on the right
    let seq = CoefficientSequence::deformed(
        vec![Complex64::new(gd + 0.03, 0.0)],
        Tail::constant(Complex64::new(gd, 0.0)),
    )
    .unwrap();
    let rep = SumRuleCase::new(Rule::Hp { d }, MeasureSource::Coefficients(seq))
        .unwrap()
        .with_tolerance(1e-4)
        .run()
        .unwrap();
    println!(
        "perturbed (no atom): KL = {:.9}  RHS = {:.9}  residual = {:.2e}",
        rep.kl_term, rep.rhs_total, rep.residual
    );

    // single outlier constructed by bisection on the perturbation size
    let outlier = construct_single_outlier(d, 512).unwrap();
    println!(
        "\nsingle-outlier coefficient: gamma_0 = {}",
        outlier.head()[0]
    );
    let rep = SumRuleCase::new(Rule::Hp { d }, MeasureSource::Coefficients(outlier))
        .unwrap()
        .with_tolerance(1e-3)
        .run()
        .unwrap();
    for (t, w) in &rep.atoms {
        println!("  detected atom: theta = {t:.9}, mass = {w:.6}");
    }
    for (t, f) in rep.outlier_minus.iter().chain(&rep.outlier_plus) {
        println!("  outlier rate F(theta = {t:.6}) = {f:.9}");
    }
    println!(
        "  KL = {:.9}\n  LHS = {:.9}  RHS = {:.9}  residual = {:.2e}  [{:?}]",
        rep.kl_term, rep.lhs_total, rep.rhs_total, rep.residual, rep.status
    );
}
