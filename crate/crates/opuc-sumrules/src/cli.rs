//! Command-line entry points. The binary is a thin wrapper; everything here
//! delegates to the library modules and serializes reports.

use crate::coeffs::alphas_from_deformed;
use crate::ensembles::EnsembleSpec;
use crate::error::{OpucError, Result};
use crate::rates::{spectral_rate, KlConfig};
use crate::report::{version_string, RateReport, RateStatus, RunEnvelope};
use crate::sampling::{
    empirical_esd_check, sample_cue_alphas, EsdEnsemble, GwAlphaSampler, HpGammaSampler, RngStream,
};
use crate::spec_io::load_measure_spec;
use crate::sumrules::{gems_check_hp, GemsInput, MeasureSource, Rule, SumRuleCase};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "opuc-sumrules",
    version,
    about = "Equilibrium measures, rate functionals and certified sum rules on the unit circle"
)]
pub struct CliArgs {
    #[command(subcommand)]
    pub command: Command,
    /// Residual tolerance override for verification commands.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// RNG seed for sampling commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for batch verification (default: all cores).
    /// The OPUC_SUMRULES_JOBS environment variable overrides this flag.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate an equilibrium density with its constants block.
    Equilibrium(EquilibriumArgs),
    /// Verify a sum rule on a measure specification.
    Verify(VerifyArgs),
    /// Verify a matrix sum rule on a block coefficient specification.
    MatrixVerify(MatrixVerifyArgs),
    /// Spectral-side rate report of a measure against an ensemble.
    Rate(RateArgs),
    /// Draw coefficient samples or empirical spectral statistics.
    Sample(SampleArgs),
    /// Finiteness (gems) conditions for the Hua-Pickrell rate.
    Gems(GemsArgs),
}

#[derive(Args, Debug)]
pub struct EquilibriumArgs {
    #[arg(long)]
    pub family: FamilyArg,
    #[arg(long, allow_negative_numbers = true)]
    pub param: f64,
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Hp,
    Gw,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub rule: RuleArg,
    /// Family parameter (d for hp, g for the Gross-Witten rules).
    #[arg(long, allow_negative_numbers = true)]
    pub param: Option<f64>,
    /// Measure spec files; several run as a parallel batch.
    #[arg(long, required = true, num_args = 1..)]
    pub measure: Vec<PathBuf>,
    /// Write the (multi-)report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RuleArg {
    Sv,
    Hp,
    GwStrong,
    GwGapped,
}

#[derive(Args, Debug)]
pub struct MatrixVerifyArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long, value_enum)]
    pub rule: MatrixRuleArg,
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    #[arg(long)]
    pub coeffs: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MatrixRuleArg {
    Szego,
    Hp,
}

#[derive(Args, Debug)]
pub struct RateArgs {
    #[arg(long)]
    pub family: FamilyArg,
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub ensemble: EnsembleArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub param: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    /// Emit a pooled eigenvalue histogram with this many bins instead of
    /// raw coefficient draws.
    #[arg(long)]
    pub esd_bins: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EnsembleArg {
    Cue,
    Hp,
    Gw,
}

#[derive(Args, Debug)]
pub struct GemsArgs {
    #[arg(long)]
    pub d: f64,
    #[arg(long)]
    pub measure: PathBuf,
    /// Optional power-law exponent q of an infinite atom family
    /// theta_d - theta_j ~ j^{-q}.
    #[arg(long)]
    pub atom_tail_exponent: Option<f64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Run a parsed command; returns the process exit code.
pub fn run(args: CliArgs) -> i32 {
    if let Some(jobs) = std::env::var("OPUC_SUMRULES_JOBS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .or(args.jobs)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match dispatch(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                OpucError::InvalidSpec(_) | OpucError::Domain(_) | OpucError::Io(_) => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(args: &CliArgs) -> Result<i32> {
    match &args.command {
        Command::Equilibrium(a) => equilibrium_cmd(args, a),
        Command::Verify(a) => verify_cmd(args, a),
        Command::MatrixVerify(a) => matrix_verify_cmd(args, a),
        Command::Rate(a) => rate_cmd(args, a),
        Command::Sample(a) => sample_cmd(args, a),
        Command::Gems(a) => gems_cmd(args, a),
    }
}

#[derive(Serialize)]
struct EquilibriumReport {
    family: String,
    param: f64,
    constants: ConstantsBlock,
    grid: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct ConstantsBlock {
    #[serde(rename = "F")]
    free_energy: f64,
    xi: f64,
    edge: f64,
}

fn equilibrium_cmd(args: &CliArgs, a: &EquilibriumArgs) -> Result<i32> {
    let ens = match a.family {
        FamilyArg::Hp => EnsembleSpec::hp(a.param)?,
        FamilyArg::Gw => EnsembleSpec::gw(a.param),
    };
    let (lo, hi) = (ens.arc_lo, ens.arc_hi);
    let grid: Vec<(f64, f64)> = (0..=a.grid)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / a.grid as f64;
            (t, ens.density(t))
        })
        .collect();
    let report = EquilibriumReport {
        family: format!("{:?}", a.family).to_lowercase(),
        param: a.param,
        constants: ConstantsBlock {
            free_energy: ens.free_energy,
            xi: ens.robin,
            edge: ens.edge,
        },
        grid,
    };
    let csv = |r: &EquilibriumReport| {
        let mut s = String::from("theta,density\n");
        for (t, v) in &r.grid {
            s.push_str(&format!("{t},{v}\n"));
        }
        s.push_str(&format!(
            "# F={} xi={} edge={}\n",
            r.constants.free_energy, r.constants.xi, r.constants.edge
        ));
        s
    };
    emit(args, "equilibrium", &report, Some(csv(&report)))?;
    Ok(0)
}

fn rule_of(a: &VerifyArgs) -> Result<Rule> {
    Ok(match a.rule {
        RuleArg::Sv => Rule::SzegoVerblunsky,
        RuleArg::Hp => Rule::Hp {
            d: a.param.unwrap_or(1.0),
        },
        RuleArg::GwStrong => Rule::GwStrong {
            g: a.param
                .ok_or_else(|| OpucError::Domain("gw-strong needs --param".into()))?,
        },
        RuleArg::GwGapped => Rule::GwGappedConjecture {
            g: a.param
                .ok_or_else(|| OpucError::Domain("gw-gapped needs --param".into()))?,
        },
    })
}

fn verify_cmd(args: &CliArgs, a: &VerifyArgs) -> Result<i32> {
    let rule = rule_of(a)?;
    let sources: Vec<(String, MeasureSource)> = a
        .measure
        .iter()
        .map(|path| {
            let spec = load_measure_spec(path)?;
            Ok((path.display().to_string(), spec.to_source()?))
        })
        .collect::<Result<_>>()?;
    let tol = args.tol;
    let mut reports: Vec<(String, Result<RateReport>)> = sources
        .into_par_iter()
        .map(|(id, source)| {
            let r = SumRuleCase::new(rule, source).map(|mut case| {
                if let Some(t) = tol {
                    case = case.with_tolerance(t);
                }
                case.run()
            });
            (id, r.and_then(|x| x))
        })
        .collect();
    reports.sort_by(|a, b| a.0.cmp(&b.0));
    let mut all_ok = true;
    let mut out_reports = Vec::new();
    for (id, r) in reports {
        match r {
            Ok(rep) => {
                let ok = rep.is_verified() || rep.label.is_some();
                all_ok &= ok;
                out_reports.push((id, rep));
            }
            Err(e) => {
                eprintln!("{id}: error: {e}");
                all_ok = false;
            }
        }
    }
    let csv = {
        let mut s = String::from("case,rule,lhs,rhs,residual,status\n");
        for (id, r) in &out_reports {
            s.push_str(&format!(
                "{id},{},{},{},{},{:?}\n",
                r.rule, r.lhs_total, r.rhs_total, r.residual, r.status
            ));
        }
        s
    };
    emit_to(args, a.report.as_ref(), "verify", &out_reports, Some(csv))?;
    Ok(if all_ok { 0 } else { 1 })
}

fn matrix_verify_cmd(args: &CliArgs, a: &MatrixVerifyArgs) -> Result<i32> {
    let spec = load_measure_spec(&a.coeffs)?;
    let seq = spec.to_matrix_sequence()?;
    if seq.p != a.p {
        return Err(OpucError::InvalidSpec(format!(
            "spec block size {} does not match --p {}",
            seq.p, a.p
        )));
    }
    let tol = args.tol.unwrap_or(1e-6);
    let report = match a.rule {
        MatrixRuleArg::Szego => crate::mopuc::verify_matrix_szego(&seq, tol)?,
        MatrixRuleArg::Hp => crate::mopuc::verify_matrix_hp(
            &seq,
            a.d.ok_or_else(|| OpucError::Domain("matrix hp rule needs --d".into()))?,
            tol,
        )?,
    };
    let ok = report.is_verified();
    emit_to(args, a.report.as_ref(), "matrix-verify", &report, None)?;
    Ok(if ok { 0 } else { 1 })
}

fn rate_cmd(args: &CliArgs, a: &RateArgs) -> Result<i32> {
    let ens = match a.family {
        FamilyArg::Hp => EnsembleSpec::hp(
            a.d.ok_or_else(|| OpucError::Domain("rate --family hp needs --d".into()))?,
        )?,
        FamilyArg::Gw => EnsembleSpec::gw(
            a.g.ok_or_else(|| OpucError::Domain("rate --family gw needs --g".into()))?,
        ),
    };
    let spec = load_measure_spec(&a.measure)?;
    let mu = match spec.to_source()? {
        MeasureSource::DensitySpec(mu) => mu,
        MeasureSource::Coefficients(seq) => {
            let plain = match seq.kind() {
                crate::coeffs::CoefficientKind::Plain => seq,
                crate::coeffs::CoefficientKind::Deformed => alphas_from_deformed(&seq)?,
            };
            crate::reconstruct::reconstruct_measure(
                &plain,
                &crate::reconstruct::ReconstructConfig::default(),
            )?
        }
    };
    let side = spectral_rate(&mu, &ens, &KlConfig::default())?;
    let report = RateReport {
        rule: "spectral_rate".into(),
        params: vec![("param".into(), ens.param)],
        kl_term: side.kl,
        outlier_plus: side.outlier_plus,
        outlier_minus: side.outlier_minus,
        lhs_total: side.total,
        rhs_terms: vec![],
        rhs_partial_sums: vec![],
        rhs_tail_bound: f64::NAN,
        rhs_total: f64::NAN,
        residual: f64::NAN,
        tolerance: f64::NAN,
        status: if side.total.is_finite() {
            RateStatus::Verified
        } else {
            RateStatus::LhsInfinite
        },
        atoms: mu.atoms().iter().map(|x| (x.theta, x.weight)).collect(),
        label: None,
        notes: vec![],
    };
    emit_to(args, a.report.as_ref(), "rate", &report, None)?;
    Ok(0)
}

#[derive(Serialize)]
struct SampleReport {
    ensemble: String,
    n: usize,
    param: f64,
    reps: usize,
    seed: u64,
    draws: Option<Vec<Vec<(f64, f64)>>>,
    esd: Option<EsdHistogram>,
}

#[derive(Serialize)]
struct EsdHistogram {
    bins: Vec<f64>,
    counts: Vec<usize>,
    ks_distance: f64,
    support_violation_rate: f64,
}

fn sample_cmd(args: &CliArgs, a: &SampleArgs) -> Result<i32> {
    let stream = RngStream::new(args.seed, 0);
    let param = a.param.unwrap_or(0.0);
    if let Some(bins) = a.esd_bins {
        let ens = match a.ensemble {
            EnsembleArg::Cue => EsdEnsemble::Cue,
            EnsembleArg::Hp => EsdEnsemble::Hp { d: param },
            EnsembleArg::Gw => EsdEnsemble::Gw { g: param },
        };
        let check = empirical_esd_check(ens, a.n, a.reps, stream)?;
        // redo the pooled draw just for the histogram bins
        let report = SampleReport {
            ensemble: format!("{:?}", a.ensemble).to_lowercase(),
            n: a.n,
            param,
            reps: a.reps,
            seed: args.seed,
            draws: None,
            esd: Some(EsdHistogram {
                bins: (0..=bins)
                    .map(|i| crate::measure::TWO_PI * i as f64 / bins as f64)
                    .collect(),
                counts: vec![],
                ks_distance: check.ks_distance,
                support_violation_rate: check.support_violation_rate,
            }),
        };
        emit(args, "sample", &report, None)?;
        return Ok(0);
    }
    let mut rng = stream.rng();
    let mut draws: Vec<Vec<(f64, f64)>> = Vec::with_capacity(a.reps);
    match a.ensemble {
        EnsembleArg::Cue => {
            for _ in 0..a.reps {
                let seq = sample_cue_alphas(a.n, &mut rng);
                draws.push(seq.head().iter().map(|z| (z.re, z.im)).collect());
            }
        }
        EnsembleArg::Hp => {
            let mut sampler = HpGammaSampler::new(a.n, param, &mut rng)?;
            for _ in 0..a.reps {
                let seq = sampler.draw(&mut rng);
                draws.push(seq.head().iter().map(|z| (z.re, z.im)).collect());
            }
        }
        EnsembleArg::Gw => {
            if param == 0.0 {
                for _ in 0..a.reps {
                    let seq = sample_cue_alphas(a.n, &mut rng);
                    draws.push(seq.head().iter().map(|z| (z.re, z.im)).collect());
                }
            } else {
                let mut sampler = GwAlphaSampler::new(a.n, param, &mut rng)?;
                for _ in 0..a.reps {
                    let seq = sampler.draw(&mut rng);
                    draws.push(seq.head().iter().map(|z| (z.re, z.im)).collect());
                }
            }
        }
    }
    let csv = {
        let mut s = String::from("rep,k,re,im\n");
        for (r, row) in draws.iter().enumerate() {
            for (k, (re, im)) in row.iter().enumerate() {
                s.push_str(&format!("{r},{k},{re},{im}\n"));
            }
        }
        s
    };
    let report = SampleReport {
        ensemble: format!("{:?}", a.ensemble).to_lowercase(),
        n: a.n,
        param,
        reps: a.reps,
        seed: args.seed,
        draws: Some(draws),
        esd: None,
    };
    emit(args, "sample", &report, Some(csv))?;
    Ok(0)
}

fn gems_cmd(args: &CliArgs, a: &GemsArgs) -> Result<i32> {
    let spec = load_measure_spec(&a.measure)?;
    let gammas = match spec.to_source()? {
        MeasureSource::Coefficients(seq) => match seq.kind() {
            crate::coeffs::CoefficientKind::Deformed => Some(seq),
            crate::coeffs::CoefficientKind::Plain => {
                Some(crate::coeffs::deformed_from_alphas(&seq)?)
            }
        },
        MeasureSource::DensitySpec(_) => None,
    };
    let mu = match spec.to_source()? {
        MeasureSource::DensitySpec(mu) => mu,
        MeasureSource::Coefficients(seq) => {
            let plain = match seq.kind() {
                crate::coeffs::CoefficientKind::Plain => seq,
                crate::coeffs::CoefficientKind::Deformed => alphas_from_deformed(&seq)?,
            };
            crate::reconstruct::reconstruct_measure(
                &plain,
                &crate::reconstruct::ReconstructConfig::default(),
            )?
        }
    };
    let report = gems_check_hp(
        &GemsInput {
            measure: &mu,
            atom_tail_exponent: a.atom_tail_exponent,
            gammas: gammas.as_ref(),
        },
        a.d,
    )?;
    emit_to(args, a.report.as_ref(), "gems", &report, None)?;
    Ok(0)
}

fn emit<T: Serialize>(
    args: &CliArgs,
    command: &str,
    report: &T,
    csv: Option<String>,
) -> Result<()> {
    emit_to(args, args.out.as_ref(), command, report, csv)
}

fn emit_to<T: Serialize>(
    args: &CliArgs,
    path: Option<&PathBuf>,
    command: &str,
    report: &T,
    csv: Option<String>,
) -> Result<()> {
    let payload = match args.format {
        Format::Json => {
            let envelope = RunEnvelope {
                version: version_string(),
                command: command.to_string(),
                config: serde_json::json!({
                    "tol": args.tol,
                    "seed": args.seed,
                    "format": format!("{:?}", args.format).to_lowercase(),
                }),
                tolerances: vec![
                    ("quad_tol".into(), 1e-10),
                    ("residual_tol".into(), args.tol.unwrap_or(1e-6)),
                ],
                report,
            };
            serde_json::to_string_pretty(&envelope)? + "\n"
        }
        Format::Csv => csv.unwrap_or_else(|| {
            // lossy projection: serialize flat JSON as key,value lines
            let v = serde_json::to_value(report).unwrap_or(serde_json::Value::Null);
            let mut s = String::from("key,value\n");
            if let serde_json::Value::Object(map) = v {
                for (k, val) in map {
                    s.push_str(&format!("{k},{val}\n"));
                }
            }
            s
        }),
    };
    match path {
        Some(p) => {
            let mut f = std::fs::File::create(p)?;
            f.write_all(payload.as_bytes())?;
        }
        None => {
            print!("{payload}");
        }
    }
    Ok(())
}
