//! Finiteness "gems" for the Hua-Pickrell rate: membership in S_1(arc),
//! the 3/2-power edge sums, the weighted entropy integral, and the
//! coefficient-side sum, checked for consistency on example measures.
//!
//!     cargo run --release --example gems_catalog

use num_complex::Complex64;
use opuc_sumrules::coeffs::{CoefficientSequence, Tail};
use opuc_sumrules::ensembles::{hp_equilibrium, hp_gamma};
use opuc_sumrules::measure::{hp_edge_angle, Atom, CircleMeasure, Density, TWO_PI};
use opuc_sumrules::sumrules::{gems_check_hp, GemsInput};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn show(name: &str, rep: &opuc_sumrules::sumrules::GemsReport) {
    println!("{name}:");
    println!("  in S_1(arc):          {}", rep.in_s1t);
    println!(
        "  edge sum (3/2 power): {:.6} finite: {:?}",
        rep.edge_sum, rep.edge_sum_finite
    );
    println!(
        "  entropy integral:     {:.6} finite: {}",
        rep.szego_integral, rep.szego_integral_finite
    );
    println!("  sum |gamma - gamma_d|^2: {:?}", rep.coefficient_sum);
    println!(
        "  conditions <=> coefficient sum finite: {:?}\n",
        rep.consistent
    );
}

fn main() {
    let d = 1.0;
    let gd = hp_gamma(d);
    let td = hp_edge_angle(d);

    // the equilibrium measure: everything finite, coefficient sum zero
    let eq = hp_equilibrium(d).unwrap();
    let gam = CoefficientSequence::deformed(vec![c(gd, 0.0)], Tail::constant(c(gd, 0.0))).unwrap();
    let rep = gems_check_hp(
        &GemsInput {
            measure: &eq,
            atom_tail_exponent: None,
            gammas: Some(&gam),
        },
        d,
    )
    .unwrap();
    show("equilibrium", &rep);

    // atoms accumulating at the edge like theta_d - 1/j: the edge sum is a
    // convergent 3/2-power series
    let atoms: Vec<Atom> = (3..40)
        .map(|j| Atom {
            theta: td - 1.0 / j as f64,
            weight: 1e-4,
        })
        .collect();
    let total: f64 = 1.0;
    let accum = CircleMeasure::new(
        td,
        TWO_PI - td,
        Density::HuaPickrell { d },
        atoms,
        total,
        (true, true),
    )
    .unwrap();
    let rep = gems_check_hp(
        &GemsInput {
            measure: &accum,
            atom_tail_exponent: Some(1.0),
            gammas: None,
        },
        d,
    )
    .unwrap();
    show("atoms accumulating like theta_d - 1/j", &rep);

    // an atom exactly at the point 1 violates the edge condition
    let with_atom_at_one = CircleMeasure::new(
        td,
        TWO_PI - td,
        Density::HuaPickrell { d },
        vec![Atom {
            theta: 0.0,
            weight: 0.05,
        }],
        1.0,
        (true, true),
    )
    .unwrap();
    let rep = gems_check_hp(
        &GemsInput {
            measure: &with_atom_at_one,
            atom_tail_exponent: None,
            gammas: None,
        },
        d,
    )
    .unwrap();
    show("atom at the point 1", &rep);

    // a divergent coefficient tail (constant off the minimizer)
    let bad =
        CoefficientSequence::deformed(vec![c(gd, 0.0)], Tail::constant(c(gd + 0.2, 0.0))).unwrap();
    let rep = gems_check_hp(
        &GemsInput {
            measure: &eq,
            atom_tail_exponent: None,
            gammas: Some(&bad),
        },
        d,
    )
    .unwrap();
    println!(
        "coefficient tail off the minimizer: sum = {:?} (diverges while the measure-side \
         conditions hold, so the pair is inconsistent: {:?})",
        rep.coefficient_sum, rep.consistent
    );
}
