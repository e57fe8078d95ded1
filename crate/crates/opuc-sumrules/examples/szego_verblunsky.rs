//! The Szegő-Verblunsky identity checked numerically: the entropy integral
//! of a Bernstein-Szegő measure against the series over its coefficients.
//!
//!     cargo run --release --example szego_verblunsky

use num_complex::Complex64;
use opuc_sumrules::coeffs::{CoefficientSequence, Tail};
use opuc_sumrules::measure::TWO_PI;
use opuc_sumrules::sampling::RngStream;
use opuc_sumrules::sumrules::{MeasureSource, Rule, SumRuleCase};
use rand::Rng;

fn main() {
    let mut rng = RngStream::new(7, 0).rng();
    println!("rule: K(UNIF | mu) = -sum_k log(1 - |alpha_k|^2)\n");
    for case_id in 0..8 {
        let len = 1 + rng.gen_range(0..6);
        let head: Vec<Complex64> = (0..len)
            .map(|_| Complex64::from_polar(0.8 * rng.gen::<f64>(), rng.gen::<f64>() * TWO_PI))
            .collect();
        let seq = CoefficientSequence::plain(head, Tail::Zero).unwrap();
        let case = SumRuleCase::new(Rule::SzegoVerblunsky, MeasureSource::Coefficients(seq))
            .unwrap()
            .with_tolerance(1e-6);
        let rep = case.run().unwrap();
        println!(
            "case {case_id}: {len} coefficients  LHS = {:<12.9} RHS = {:<12.9} residual = {:.2e}  [{:?}]",
            rep.lhs_total, rep.rhs_total, rep.residual, rep.status
        );
    }

    // a trivial (finitely supported) measure sends both sides to infinity
    let trivial = CoefficientSequence::plain(
        vec![Complex64::new(0.4, 0.0), Complex64::new(1.0, 0.0)],
        Tail::None,
    )
    .unwrap();
    let rep = SumRuleCase::new(Rule::SzegoVerblunsky, MeasureSource::Coefficients(trivial))
        .unwrap()
        .run()
        .unwrap();
    println!(
        "\nfinitely supported measure: status {:?} ({})",
        rep.status, rep.notes[0]
    );
}
