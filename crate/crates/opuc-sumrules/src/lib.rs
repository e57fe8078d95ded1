//! Numerical verification of sum rules for orthogonal polynomials on the
//! unit circle.
//!
//! A sum rule equates a spectral-side functional of a measure on the circle
//! (a reversed relative entropy against a reference equilibrium measure,
//! plus rate contributions of outlying point masses) with a series over the
//! measure's recursion coefficients. This crate computes both sides
//! independently and reports the residual:
//!
//! - [`coeffs`], [`poly`], [`schur`], [`cmv`]: the scalar OPUC toolbox —
//!   Szegő recursion, plain and deformed Verblunsky coefficients, Schur /
//!   Carathéodory evaluation, finite CMV matrices and spectral measures.
//! - [`ensembles`]: closed-form Gross-Witten and Hua-Pickrell equilibrium
//!   data on the circle and, through the Cayley transform, on the real line.
//! - [`rates`]: energy functionals, effective potentials, reversed
//!   Kullback-Leibler divergence, outlier rates, and coefficient rates.
//! - [`sumrules`]: the verification engine (Szegő-Verblunsky, Hua-Pickrell,
//!   strong-coupling Gross-Witten, and the gapped Gross-Witten conjecture
//!   probe), plus the finiteness "gems" checker.
//! - [`sampling`]: seeded random-matrix samplers (CUE, Hua-Pickrell,
//!   Gross-Witten) and Monte Carlo spectral checks.
//! - [`mopuc`]: matrix-valued extension — matrix Szegő recursion, deformed
//!   matrix coefficients via Möbius/Schur iterates, Neretin contractions
//!   with the determinant identity, matrix rates and verifiers.
//!
//! The `examples/` directory demonstrates each capability end to end; the
//! thin `opuc-sumrules` binary exposes the same entry points as subcommands.

pub mod cli;
pub mod cmv;
pub mod coeffs;
pub mod ensembles;
pub mod error;
pub mod measure;
pub mod mopuc;
pub mod poly;
pub mod quad;
pub mod rates;
pub mod reconstruct;
pub mod report;
pub mod sampling;
pub mod schur;
pub mod spec_io;
pub mod sumrules;

pub use error::{OpucError, Result};
