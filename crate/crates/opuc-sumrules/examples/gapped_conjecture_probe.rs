//! Numeric probe of the conjectured gapped Gross-Witten sum rule (g < -1):
//! both sides are computed and reported, nothing is asserted. The implied
//! additive constant is printed next to the continued H(g) convention.
//!
//!     cargo run --release --example gapped_conjecture_probe

use opuc_sumrules::coeffs::{CoefficientSequence, Tail};
use opuc_sumrules::ensembles::gw_equilibrium;
use opuc_sumrules::measure::{CircleMeasure, Density};
use opuc_sumrules::sumrules::{coefficients_from_measure, MeasureSource, Rule, SumRuleCase};

fn main() {
    let g = -2.0;

    // at the equilibrium measure the spectral side vanishes by construction
    let eq = gw_equilibrium(g);
    let case = SumRuleCase::new(
        Rule::GwGappedConjecture { g },
        MeasureSource::DensitySpec(eq.clone()),
    )
    .unwrap();
    let rep = case.run().unwrap();
    println!("[{}]", rep.label.clone().unwrap());
    println!("g = {g}, mu = equilibrium:");
    println!("  LHS (KL + outliers) = {:.6e}", rep.lhs_total);
    println!(
        "  RHS partial sum     = {:.9} over {} terms",
        rep.rhs_total,
        rep.rhs_terms.len()
    );
    for n in &rep.notes {
        println!("  note: {n}");
    }

    // recovered equilibrium coefficients (through moments) for inspection
    let alphas = coefficients_from_measure(&eq, 24).unwrap();
    let mods: Vec<String> = alphas
        .head()
        .iter()
        .take(8)
        .map(|a| format!("{:.4}", a.norm()))
        .collect();
    println!(
        "\n|alpha_k| of the gapped equilibrium (first 8): {}",
        mods.join(", ")
    );

    // a tilted density inside the same arc
    let (lo, hi) = eq.arc();
    let thetas: Vec<f64> = (0..=1024)
        .map(|i| lo + (hi - lo) * i as f64 / 1024.0)
        .collect();
    let base_mass: f64 = 1.0;
    let values: Vec<f64> = thetas
        .iter()
        .map(|&t| eq.density_at(t) * (1.0 + 0.05 * (t - std::f64::consts::PI).cos()))
        .collect();
    let mass: f64 = {
        // renormalize the tilt to keep a probability measure
        let mut acc = 0.0;
        for w in values.windows(2) {
            acc += 0.5 * (w[0] + w[1]);
        }
        acc * (thetas[1] - thetas[0]) / (2.0 * std::f64::consts::PI)
    };
    let values: Vec<f64> = values.iter().map(|v| v * base_mass / mass).collect();
    let tilted = CircleMeasure::new(
        lo,
        hi,
        Density::Grid { thetas, values },
        vec![],
        1.0,
        (true, true),
    )
    .unwrap();
    let rep = SumRuleCase::new(
        Rule::GwGappedConjecture { g },
        MeasureSource::DensitySpec(tilted),
    )
    .unwrap()
    .run()
    .unwrap();
    println!("\ng = {g}, tilted density:");
    println!(
        "  LHS = {:.9}  RHS = {:.9}  gap = {:+.3e}",
        rep.lhs_total,
        rep.rhs_total,
        rep.lhs_total - rep.rhs_total
    );
    for n in &rep.notes {
        println!("  note: {n}");
    }

    // a trivial check that tail-divergent coefficient input reports +inf
    let bad = CoefficientSequence::plain(
        vec![num_complex::Complex64::new(0.2, 0.0)],
        Tail::constant(num_complex::Complex64::new(0.3, 0.0)),
    )
    .unwrap();
    let rep = SumRuleCase::new(
        Rule::GwGappedConjecture { g },
        MeasureSource::Coefficients(bad),
    )
    .unwrap()
    .run()
    .unwrap();
    println!(
        "\nnon-member coefficients: RHS = {} (conjecture predicts +inf)",
        rep.rhs_total
    );
}
