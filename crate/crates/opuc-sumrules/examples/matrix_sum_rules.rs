//! Matrix-measure machinery: deformed matrix coefficients via Möbius
//! iterates, the Neretin determinant identity on the block GGT matrix, the
//! matrix rate H_{d,p}, and the block-diagonal matrix sum-rule verifiers
//! with their scalar reductions.
//!
//!     cargo run --release --example matrix_sum_rules

use num_complex::Complex64;
use opuc_sumrules::ensembles::hp_gamma;
use opuc_sumrules::mopuc::{
    deformed_matrix_gammas, ggt_assemble, h_dp, neretin_coeffs, sample_haar_unitary,
    verify_matrix_hp, verify_matrix_szego, CMatrix, MatrixBallElement, MatrixCoefficientSequence,
    MatrixTail,
};
use opuc_sumrules::sampling::RngStream;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    let mut rng = RngStream::new(5, 0).rng();
    let p = 2;
    let n = 3;

    // random finite family: strict ball coefficients closed by a unitary
    let mut head = vec![
        MatrixBallElement::new(CMatrix::from_row_slice(
            p,
            p,
            &[c(0.25, 0.10), c(-0.15, 0.05), c(0.05, -0.20), c(0.30, 0.00)],
        ))
        .unwrap(),
        MatrixBallElement::new(CMatrix::from_row_slice(
            p,
            p,
            &[
                c(-0.10, 0.20),
                c(0.05, 0.05),
                c(0.10, 0.00),
                c(-0.25, -0.10),
            ],
        ))
        .unwrap(),
    ];
    head.push(MatrixBallElement::new(sample_haar_unitary(p, &mut rng)).unwrap());
    let seq = MatrixCoefficientSequence::plain(head, MatrixTail::Zero, p).unwrap();

    let ggt = ggt_assemble(&seq, n).unwrap();
    println!(
        "block GGT ({n} blocks of size {p}): unitarity defect {:.2e}",
        ggt.unitarity_defect()
    );

    let dense = ggt.to_dense();
    let cs = neretin_coeffs(&dense, p).unwrap();
    let gammas = deformed_matrix_gammas(&seq).unwrap();
    let det = (CMatrix::identity(n * p, n * p) - &dense).determinant();
    let mut prod = c(1.0, 0.0);
    for ck in &cs {
        prod *= (CMatrix::identity(p, p) - ck).determinant();
    }
    println!("det(1 - U) = {det:.12}");
    println!(
        "prod det(1 - c_r) = {prod:.12}   gap = {:.2e}",
        (det - prod).norm()
    );
    let ident_gap: f64 = cs
        .iter()
        .zip(&gammas)
        .map(|(ck, gk)| {
            (ck - gk.matrix())
                .iter()
                .map(|x| x.norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
        .max(0.0);
    println!("Neretin coefficients vs deformed gammas: max gap = {ident_gap:.2e}");

    // matrix rate at and away from its minimizer
    let d = 1.0;
    let gd = hp_gamma(d);
    let at_min = MatrixBallElement::diagonal(&[c(gd, 0.0), c(gd, 0.0)]).unwrap();
    let off = MatrixBallElement::diagonal(&[c(gd, 0.0), c(0.0, 0.0)]).unwrap();
    println!(
        "\nH_(d,p) at gamma_d·1 = {:.2e}; at diag(gamma_d, 0) = {:.6} (= H_1(0))",
        h_dp(&at_min, d),
        h_dp(&off, d)
    );

    // matrix Szegő rule on a single non-normal coefficient
    let a0 = MatrixBallElement::new(CMatrix::from_row_slice(
        p,
        p,
        &[c(0.35, 0.0), c(0.25, 0.1), c(0.0, 0.0), c(0.20, -0.05)],
    ))
    .unwrap();
    let bs = MatrixCoefficientSequence::plain(vec![a0], MatrixTail::Zero, p).unwrap();
    let rep = verify_matrix_szego(&bs, 1e-4).unwrap();
    println!(
        "\nmatrix Szegő (single non-normal coefficient): LHS = {:.9} RHS = {:.9} residual = {:.2e}",
        rep.lhs_total, rep.rhs_total, rep.residual
    );

    // block-diagonal matrix HP rule decomposes into scalar cases
    let heads: Vec<MatrixBallElement> = vec![
        MatrixBallElement::diagonal(&[c(gd + 0.03, 0.0), c(gd - 0.02, 0.01)]).unwrap(),
        MatrixBallElement::diagonal(&[c(gd, 0.01), c(gd + 0.01, 0.0)]).unwrap(),
    ];
    let mseq =
        MatrixCoefficientSequence::deformed(heads, MatrixTail::Constant(c(gd, 0.0)), p).unwrap();
    let rep = verify_matrix_hp(&mseq, d, 1e-4).unwrap();
    println!(
        "matrix HP (block-diagonal, d = {d}): LHS = {:.9} RHS = {:.9} residual = {:.2e} [{:?}]",
        rep.lhs_total, rep.rhs_total, rep.residual, rep.status
    );
}
