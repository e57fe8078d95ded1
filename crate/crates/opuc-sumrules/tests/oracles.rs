//! Independent-oracle tests: values asserted against brute-force
//! computations that share no code with the implementation paths they
//! check (Gram-Schmidt on the moment Gram matrix, dense determinants,
//! quadrature refinement).

use nalgebra::DMatrix;
use num_complex::Complex64;
use opuc_sumrules::cmv::cmv_assemble;
use opuc_sumrules::coeffs::{
    deformed_from_alphas, verblunsky_from_moments, CoefficientSequence, Tail,
};
use opuc_sumrules::ensembles::{gw_equilibrium, hp_equilibrium};
use opuc_sumrules::measure::{CircleMeasure, TWO_PI};
use opuc_sumrules::poly::szego_iterate;
use opuc_sumrules::sampling::RngStream;
use opuc_sumrules::sumrules::{MeasureSource, Rule, SumRuleCase};
use rand::Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Gram-Schmidt orthogonalization of the monomials under the moment inner
/// product <z^i, z^j> = m_{j-i}; returns the Verblunsky coefficients
/// alpha_k = -conj(phi_{k+1}(0)). Completely independent of the Levinson
/// recursion in the library.
fn gram_schmidt_oracle(moments: &[Complex64], count: usize) -> Vec<Complex64> {
    let m = |j: i64| -> Complex64 {
        if j >= 0 {
            moments[j as usize]
        } else {
            moments[(-j) as usize].conj()
        }
    };
    // phi_k as coefficient vectors over monomials
    let mut phis: Vec<Vec<Complex64>> = vec![vec![c(1.0, 0.0)]];
    let inner = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        // <a, b> = sum_ij conj(a_i) b_j m_{j-i}
        let mut s = Complex64::default();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                s += ai.conj() * bj * m(j as i64 - i as i64);
            }
        }
        s
    };
    let mut alphas = Vec::new();
    for k in 1..=count {
        // start from z^k and subtract projections onto phi_0..phi_{k-1}
        let mut v = vec![Complex64::default(); k + 1];
        v[k] = c(1.0, 0.0);
        for phi in &phis {
            let coef = inner(phi, &v) / inner(phi, phi);
            for (i, p) in phi.iter().enumerate() {
                v[i] -= coef * p;
            }
        }
        alphas.push(-v[0].conj());
        phis.push(v);
    }
    alphas
}

#[test]
fn levinson_matches_gram_schmidt_oracle() {
    // moments of an explicit Bernstein-Szegő-type measure via quadrature
    let seq =
        CoefficientSequence::plain(vec![c(0.45, -0.2), c(-0.3, 0.35), c(0.15, 0.1)], Tail::Zero)
            .unwrap();
    let mu = opuc_sumrules::reconstruct::reconstruct_measure(
        &seq,
        &opuc_sumrules::reconstruct::ReconstructConfig::default(),
    )
    .unwrap();
    let moments: Vec<Complex64> = (0..=6).map(|k| mu.moment(k)).collect();
    let lev = verblunsky_from_moments(&moments, 5).unwrap();
    let gs = gram_schmidt_oracle(&moments, 5);
    for (a, b) in lev.head().iter().zip(&gs) {
        assert!((a - b).norm() < 1e-10, "levinson {a} vs gram-schmidt {b}");
    }
    // and both recover the inputs
    for (a, b) in lev.head().iter().take(3).zip(seq.head()) {
        assert!((a - b).norm() < 1e-8);
    }
}

#[test]
fn gram_schmidt_oracle_on_hp_equilibrium() {
    let d = 1.0;
    let mu = hp_equilibrium(d).unwrap();
    let moments: Vec<Complex64> = (0..=6).map(|k| mu.moment(k)).collect();
    let gs = gram_schmidt_oracle(&moments, 5);
    for a in &gs {
        assert!((a - c(-0.5, 0.0)).norm() < 1e-7, "oracle alpha {a}");
    }
}

#[test]
fn szego_iterate_matches_gram_schmidt_polynomials() {
    // two Szegő steps with the HP d = 1 constant coefficient against
    // Gram-Schmidt on the equilibrium moments
    let d = 1.0;
    let mu = hp_equilibrium(d).unwrap();
    let moments: Vec<Complex64> = (0..=4).map(|k| mu.moment(k)).collect();
    let m = |j: i64| -> Complex64 {
        if j >= 0 {
            moments[j as usize]
        } else {
            moments[(-j) as usize].conj()
        }
    };
    // monic phi_2 via the recursion with alpha = gamma_d = -1/2
    let (phi2, _) = szego_iterate(&[c(-0.5, 0.0), c(-0.5, 0.0)]).unwrap();
    // check orthogonality of phi_2 against 1 and z under the moment product
    for j in 0..2i64 {
        let mut s = Complex64::default();
        for (i, coef) in phi2.coeffs().iter().enumerate() {
            s += coef * m(i as i64 - j);
        }
        assert!(s.norm() < 1e-8, "phi_2 not orthogonal to z^{j}: {s}");
    }
}

#[test]
fn unimodular_inverse_schur_iterates() {
    // b_k = phi_k(1)/phi_k*(1) has modulus 1 for every k
    let mut rng = RngStream::new(12, 0).rng();
    for _ in 0..20 {
        let head: Vec<Complex64> = (0..6)
            .map(|_| Complex64::from_polar(0.9 * rng.gen::<f64>(), rng.gen::<f64>() * TWO_PI))
            .collect();
        let mut phi = opuc_sumrules::poly::Polynomial::one();
        let mut star = opuc_sumrules::poly::Polynomial::one();
        for &a in &head {
            let one = c(1.0, 0.0);
            let b = phi.eval(one) / star.eval(one);
            assert!((b.norm() - 1.0).abs() < 1e-12, "b_k modulus {}", b.norm());
            let (p, s) = opuc_sumrules::poly::szego_step(&phi, &star, a).unwrap();
            phi = p;
            star = s;
        }
    }
}

#[test]
fn determinant_identity_brute_force() {
    let mut rng = RngStream::new(13, 0).rng();
    for _ in 0..100 {
        let n = 2 + rng.gen_range(0..9usize);
        let mut head: Vec<Complex64> = (0..n - 1)
            .map(|_| Complex64::from_polar(0.9 * rng.gen::<f64>(), rng.gen::<f64>() * TWO_PI))
            .collect();
        head.push(Complex64::from_polar(1.0, rng.gen::<f64>() * TWO_PI));
        let seq = CoefficientSequence::plain(head, Tail::None).unwrap();
        let gammas = deformed_from_alphas(&seq).unwrap();
        let u = cmv_assemble(&seq, n).unwrap().to_dense();
        // brute-force determinant by LU on the dense matrix
        let det = (DMatrix::<Complex64>::identity(n, n) - u).determinant();
        let mut prod = c(1.0, 0.0);
        for g in gammas.head() {
            prod *= c(1.0, 0.0) - g;
        }
        assert!((det - prod).norm() < 1e-11, "n={n}: {det} vs {prod}");
    }
}

#[test]
fn gw_moments_known_values() {
    // only the first moments of the ungapped equilibrium are nonzero
    let mu = gw_equilibrium(0.5);
    assert!((mu.moment(1) - c(0.25, 0.0)).norm() < 1e-10);
    assert!(mu.moment(2).norm() < 1e-10);
    assert!(mu.moment(3).norm() < 1e-10);
}

#[test]
fn residual_scales_with_quadrature_tolerance() {
    // halving the quadrature tolerance never worsens the residual on the
    // standard Bernstein-Szegő set (up to roundoff slack)
    let mut rng = RngStream::new(14, 0).rng();
    for _ in 0..6 {
        let len = 1 + rng.gen_range(0..5);
        let head: Vec<Complex64> = (0..len)
            .map(|_| Complex64::from_polar(0.75 * rng.gen::<f64>(), rng.gen::<f64>() * TWO_PI))
            .collect();
        let seq = CoefficientSequence::plain(head, Tail::Zero).unwrap();
        let mut residuals = Vec::new();
        for tol in [1e-4, 5e-5, 2.5e-5] {
            let case = SumRuleCase::new(
                Rule::SzegoVerblunsky,
                MeasureSource::Coefficients(seq.clone()),
            )
            .unwrap()
            .with_quad_tol(tol);
            residuals.push(case.run().unwrap().residual);
        }
        for w in residuals.windows(2) {
            assert!(
                w[1] <= w[0] + 1e-12,
                "residuals not monotone: {residuals:?}"
            );
        }
    }
}

#[test]
fn spectral_measure_round_trip_to_coefficients() {
    // coefficients -> finite CMV -> spectral measure -> moments ->
    // coefficients, identity to 1e-8 for n <= 10 and |alpha| <= 0.9
    let mut rng = RngStream::new(15, 0).rng();
    for _ in 0..10 {
        let n = 4 + rng.gen_range(0..7usize);
        let mut head: Vec<Complex64> = (0..n - 1)
            .map(|_| Complex64::from_polar(0.9 * rng.gen::<f64>(), rng.gen::<f64>() * TWO_PI))
            .collect();
        head.push(Complex64::from_polar(1.0, rng.gen::<f64>() * TWO_PI));
        let seq = CoefficientSequence::plain(head.clone(), Tail::None).unwrap();
        let u = cmv_assemble(&seq, n).unwrap();
        let mu = opuc_sumrules::cmv::spectral_measure_finite(&u).unwrap();
        let moments: Vec<Complex64> = (0..n as i64).map(|k| mu.moment(k)).collect();
        let back = verblunsky_from_moments(&moments, n - 1).unwrap();
        for (a, b) in back.head().iter().zip(&head) {
            assert!((a - b).norm() < 1e-8, "{a} vs {b}");
        }
    }
}

#[test]
fn density_spec_source_verifies() {
    // the Szegő-Verblunsky rule run from an explicit density description
    let mu = CircleMeasure::uniform();
    let case = SumRuleCase::new(Rule::SzegoVerblunsky, MeasureSource::DensitySpec(mu))
        .unwrap()
        .with_tolerance(1e-8);
    let rep = case.run().unwrap();
    assert!(rep.lhs_total.abs() < 1e-10 && rep.rhs_total.abs() < 1e-10);

    // and the Hua-Pickrell rule from its own equilibrium density; the
    // moment route amplifies quadrature noise in the high coefficients, so
    // the recovered head is kept short
    let d = 1.0;
    let mut case = SumRuleCase::new(
        Rule::Hp { d },
        MeasureSource::DensitySpec(hp_equilibrium(d).unwrap()),
    )
    .unwrap()
    .with_tolerance(1e-4);
    case.moment_count = 16;
    let rep = case.run().unwrap();
    assert!(rep.residual < 1e-4, "residual {}", rep.residual);
}
