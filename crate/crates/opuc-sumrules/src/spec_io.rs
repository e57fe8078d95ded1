//! JSON measure-spec files: coefficient heads with tail descriptors, or an
//! explicit atom list plus a named/grid density.

use crate::coeffs::{CoefficientKind, CoefficientSequence, Tail};
use crate::error::{OpucError, Result};
use crate::measure::{Atom, CircleMeasure, Density, TWO_PI};
use crate::mopuc::{CMatrix, MatrixBallElement, MatrixCoefficientSequence, MatrixTail};
use crate::sumrules::MeasureSource;
use num_complex::Complex64;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpecFile {
    pub verblunsky: Option<VerblunskySpec>,
    pub matrix_verblunsky: Option<MatrixVerblunskySpec>,
    pub atoms: Option<Vec<AtomSpec>>,
    pub density: Option<DensitySpec>,
}

#[derive(Debug, Deserialize)]
pub struct VerblunskySpec {
    pub kind: CoefficientKind,
    pub head: Vec<(f64, f64)>,
    pub tail: Tail,
}

#[derive(Debug, Deserialize)]
pub struct MatrixVerblunskySpec {
    pub kind: CoefficientKind,
    pub p: usize,
    /// head[k][i][j] = [re, im] of entry (i, j) of the k-th coefficient
    pub head: Vec<Vec<Vec<(f64, f64)>>>,
    pub tail: Tail,
}

#[derive(Debug, Deserialize)]
pub struct AtomSpec {
    pub theta: f64,
    pub w: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DensitySpec {
    Named { name: String, param: f64 },
    Grid { thetas: Vec<f64>, values: Vec<f64> },
}

pub fn parse_measure_spec(text: &str) -> Result<MeasureSpecFile> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_measure_spec(path: &std::path::Path) -> Result<MeasureSpecFile> {
    parse_measure_spec(&std::fs::read_to_string(path)?)
}

impl MeasureSpecFile {
    /// Scalar measure source for the verification engine.
    pub fn to_source(&self) -> Result<MeasureSource> {
        if let Some(v) = &self.verblunsky {
            let head: Vec<Complex64> = v
                .head
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect();
            let seq = CoefficientSequence::new(v.kind, head, v.tail)?;
            return Ok(MeasureSource::Coefficients(seq));
        }
        if self.density.is_some() || self.atoms.is_some() {
            return Ok(MeasureSource::DensitySpec(self.to_measure()?));
        }
        Err(OpucError::InvalidSpec(
            "expected a verblunsky block or an atoms/density description".into(),
        ))
    }

    /// Explicit measure from an atoms + density description. The named
    /// densities are equilibrium evaluators with unit mass; when atoms are
    /// present the a.c. part is scaled by (1 - sum of atom weights) so the
    /// total stays a probability measure.
    pub fn to_measure(&self) -> Result<CircleMeasure> {
        let atoms: Vec<Atom> = self
            .atoms
            .iter()
            .flatten()
            .map(|a| Atom {
                theta: a.theta,
                weight: a.w,
            })
            .collect();
        let atom_mass: f64 = atoms.iter().map(|a| a.weight).sum();
        if atom_mass > 1.0 + 1e-12 {
            return Err(OpucError::InvalidSpec(
                "atom weights exceed total mass 1".into(),
            ));
        }
        let scale = 1.0 - atom_mass;
        match &self.density {
            None => CircleMeasure::from_atoms(atoms),
            Some(DensitySpec::Named { name, param }) => {
                let base = match name.as_str() {
                    "hp" => crate::ensembles::hp_equilibrium(*param)?,
                    "gw" => crate::ensembles::gw_equilibrium(*param),
                    "uniform" => CircleMeasure::uniform(),
                    other => {
                        return Err(OpucError::InvalidSpec(format!("unknown density '{other}'")))
                    }
                };
                let (lo, hi) = base.arc();
                let edges = base.edges();
                let density = if scale == 1.0 {
                    base.density().clone()
                } else {
                    // tabulate the scaled density
                    let n = 2048;
                    let thetas: Vec<f64> = (0..=n)
                        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
                        .collect();
                    let values: Vec<f64> =
                        thetas.iter().map(|&t| scale * base.density_at(t)).collect();
                    Density::Grid { thetas, values }
                };
                CircleMeasure::new(lo, hi, density, atoms, 1.0f64.min(scale + atom_mass), edges)
            }
            Some(DensitySpec::Grid { thetas, values }) => {
                if thetas.len() != values.len() || thetas.len() < 2 {
                    return Err(OpucError::InvalidSpec(
                        "grid arrays must match, length >= 2".into(),
                    ));
                }
                let lo = thetas[0];
                let hi = *thetas.last().unwrap();
                if !(0.0..TWO_PI + 1e-9).contains(&lo) || hi > TWO_PI + 1e-9 {
                    return Err(OpucError::InvalidSpec(
                        "grid angles must lie in [0, 2pi]".into(),
                    ));
                }
                let density = Density::Grid {
                    thetas: thetas.clone(),
                    values: values.clone(),
                };
                let mut mu = CircleMeasure::new(lo, hi, density, atoms, 1.0, (false, false))?;
                // trust the declared data; recompute the mass bookkeeping
                let ac = mu.ac_mass(1e-9);
                mu = CircleMeasure::new(
                    lo,
                    hi,
                    mu.density().clone(),
                    mu.atoms().to_vec(),
                    (ac + atom_mass).min(1.0),
                    (false, false),
                )?;
                Ok(mu)
            }
        }
    }

    /// Matrix coefficient sequence for `matrix-verify`.
    pub fn to_matrix_sequence(&self) -> Result<MatrixCoefficientSequence> {
        let spec = self
            .matrix_verblunsky
            .as_ref()
            .ok_or_else(|| OpucError::InvalidSpec("expected a matrix_verblunsky block".into()))?;
        let p = spec.p;
        let mut head = Vec::with_capacity(spec.head.len());
        for coeff in &spec.head {
            if coeff.len() != p || coeff.iter().any(|row| row.len() != p) {
                return Err(OpucError::InvalidSpec(format!(
                    "coefficient is not {p}x{p}"
                )));
            }
            let m = CMatrix::from_fn(p, p, |i, j| {
                let (re, im) = coeff[i][j];
                Complex64::new(re, im)
            });
            head.push(MatrixBallElement::new(m)?);
        }
        let tail = match spec.tail {
            Tail::Zero => MatrixTail::Zero,
            Tail::Constant { value } => MatrixTail::Constant(Complex64::new(value.0, value.1)),
            Tail::None => {
                return Err(OpucError::InvalidSpec(
                    "matrix coefficient tail must be zero or constant".into(),
                ))
            }
        };
        match spec.kind {
            CoefficientKind::Plain => MatrixCoefficientSequence::plain(head, tail, p),
            CoefficientKind::Deformed => MatrixCoefficientSequence::deformed(head, tail, p),
        }
    }
}
