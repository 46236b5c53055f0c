//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::demo::DEFAULT_WIDTHS;
use crate::analysis::fit::{fit_exponent, FitOutcome, ModelChoice};
use crate::analysis::verify::{
    default_transfer_grid, kernel_bracket, verify_cor12, verify_cor15, verify_thm11, verify_thm13,
    verify_thm14, VerificationReport,
};
use crate::analysis::{demo_d1_counterexample, demo_gamma2_failure, DecayProfile, DyadicGrid};
use crate::corpus::{make_from_uri, CorpusObject};
use crate::differences::{DifferenceOrder, Signal};
use crate::error::{domain, Error, Result};
use crate::field::{dft, read_descriptor, read_raw_values, RadialSpectrum, SampledField};
use crate::moduli::{default_order, omega_profile, sphere_rule, ProfileOptions};
use crate::tails::{g_alpha, tail_profile, TailKind, TailVariant, TailSource};

#[derive(Debug, Parser)]
#[command(name = "fourier-moduli", version, about = "Moduli of continuity and Fourier tails")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the kernel G_alpha with its two-sided power bounds.
    Gfn(GfnArgs),
    /// Modulus of continuity profile over a step grid.
    Mc(McArgs),
    /// Tail profile of a spectrum over a t grid.
    Tail(TailArgs),
    /// Fit a decay law to a profile CSV.
    Fit(FitArgs),
    /// Run a verification harness.
    Verify(VerifyArgs),
    /// Run a worked counterexample.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
pub struct GfnArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long = "v-max")]
    pub v_max: f64,
    #[arg(long = "v-samples")]
    pub v_samples: usize,
    /// Divide by 2^alpha.
    #[arg(long = "caption-normalization")]
    pub caption_normalization: bool,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// `corpus:` or `file:` URI of a gridded field.
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub m: f64,
    /// Averaging exponent, or `inf` for the supremum.
    #[arg(long, value_parser = parse_exponent)]
    pub q: f64,
    /// Step grid in (0, 1], e.g. `dyadic:2^-6..1:7`.
    #[arg(long)]
    pub h: DyadicGrid,
    #[arg(long = "rule-order")]
    pub rule_order: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailMode {
    True,
    Modified,
    Bessel,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    /// Radial spectrum, or a gridded field whose transform is used.
    #[arg(long)]
    pub spectrum: String,
    #[arg(long, value_parser = parse_exponent)]
    pub pprime: f64,
    #[arg(long, value_enum)]
    pub mode: TailMode,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long)]
    pub t: DyadicGrid,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long, default_value = "auto", value_parser = parse_model)]
    pub model: ModelChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    Thm11,
    Cor12,
    Thm13,
    Thm14,
    Cor15,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub case: Case,
    #[arg(long, conflicts_with = "spectrum", required_unless_present = "spectrum")]
    pub field: Option<String>,
    #[arg(long)]
    pub spectrum: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 2.0, value_parser = parse_exponent)]
    pub pprime: f64,
    /// Lebesgue exponent of the modulus (thm11).
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// t grid; each case has its own default.
    #[arg(long)]
    pub t: Option<DyadicGrid>,
    /// Modulus-side grid of t = 1/eps values (cor15).
    #[arg(long)]
    pub eps: Option<DyadicGrid>,
    /// Output JSON; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoCase {
    D1Counterexample,
    Gamma2Failure,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, value_enum)]
    pub case: DemoCase,
    /// Decreasing widths for d1-counterexample.
    #[arg(long, value_delimiter = ',')]
    pub widths: Option<Vec<f64>>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn parse_exponent(s: &str) -> std::result::Result<f64, String> {
    match s {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => s.parse::<f64>().map_err(|e| format!("{s:?}: {e}")),
    }
}

fn parse_model(s: &str) -> std::result::Result<ModelChoice, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn emit(target: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match target {
        Some(path) => write_atomic(path, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Resolves a field URI: `corpus:...`, or `file:<descriptor.json>`.
pub fn load_field(uri: &str) -> Result<SampledField> {
    if let Some(path) = uri.strip_prefix("file:") {
        let path = Path::new(path);
        let desc = read_descriptor(path)?;
        let grid = desc.grid()?;
        if let Some(raw) = desc.source.strip_prefix("file:") {
            let base = path.parent().unwrap_or(Path::new("."));
            return read_raw_values(&base.join(raw), grid);
        }
        return make_from_uri(&desc.source, Some(grid))?.into_field();
    }
    make_from_uri(uri, None)?.into_field()
}

enum SpectrumSource {
    Radial(RadialSpectrum),
    Grid(crate::field::Spectrum),
}

impl SpectrumSource {
    fn as_source(&self) -> TailSource<'_> {
        match self {
            SpectrumSource::Radial(s) => TailSource::Radial(s),
            SpectrumSource::Grid(s) => TailSource::Grid(s),
        }
    }
}

fn load_spectrum(uri: &str) -> Result<SpectrumSource> {
    if uri.starts_with("corpus:") {
        if let CorpusObject::Spectrum(s) = make_from_uri(uri, None)? {
            return Ok(SpectrumSource::Radial(s));
        }
    }
    Ok(SpectrumSource::Grid(dft(&load_field(uri)?)?))
}

fn profile_csv(profile: &DecayProfile) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    profile.write_csv(&mut buf)?;
    Ok(buf)
}

fn run_gfn(a: &GfnArgs) -> Result<()> {
    if a.v_samples < 2 {
        return Err(domain("--v-samples must be at least 2"));
    }
    if !(a.v_max > 0.0 && a.v_max.is_finite()) {
        return Err(domain(format!("--v-max must be positive, got {}", a.v_max)));
    }
    let scale = if a.caption_normalization { 2f64.powf(a.alpha) } else { 1.0 };
    let (lo, hi) = if a.caption_normalization && a.dim == 3 && a.alpha == 1.0 {
        (std::f64::consts::PI / 3.0, 6.0 * std::f64::consts::PI)
    } else {
        let (c1, c2) = kernel_bracket(a.dim, a.alpha)?;
        (c1 / scale, c2 / scale)
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["v", "value", "lower_bound", "upper_bound"])?;
    for k in 0..a.v_samples {
        let v = a.v_max * k as f64 / (a.v_samples - 1) as f64;
        let g = g_alpha(a.dim, a.alpha, v)? / scale;
        let mm = v.min(1.0).powf(2.0 * a.alpha);
        w.write_record([v, g, lo * mm, hi * mm].map(|x| format!("{x:.16e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    emit(a.out.as_deref(), &bytes)
}

fn run_mc(a: &McArgs) -> Result<()> {
    let signal = Signal::from_field(load_field(&a.field)?)?;
    let d = signal.grid().dim();
    let rule = sphere_rule(d, a.rule_order.unwrap_or(default_order(d)))?;
    let profile = omega_profile(
        &signal,
        a.p,
        DifferenceOrder::new(a.m)?,
        a.q,
        &a.h,
        &rule,
        ProfileOptions::default(),
    )?;
    emit(a.out.as_deref(), &profile_csv(&profile)?)
}

fn run_tail(a: &TailArgs) -> Result<()> {
    let source = load_spectrum(&a.spectrum)?;
    let variant = match a.mode {
        TailMode::True => TailVariant::True,
        TailMode::Modified => TailVariant::Modified,
        TailMode::Bessel => TailVariant::Bessel,
    };
    let kind = TailKind::new(variant, a.pprime, a.m)?;
    let profile = tail_profile(source.as_source(), &kind, &a.t)?;
    emit(a.out.as_deref(), &profile_csv(&profile)?)
}

fn run_fit(a: &FitArgs) -> Result<()> {
    let file = std::fs::File::open(&a.profile)?;
    let profile = DecayProfile::read_csv(file)?;
    let line = match fit_exponent(&profile, a.model)? {
        FitOutcome::Law(f) => format!(
            "gamma={} log_power={} amplitude={} max_rel_residual={:e} model={:?} t_min={} t_max={} points={} trimmed={}",
            f.gamma, f.log_power, f.amplitude, f.max_rel_residual, f.model, f.t_min, f.t_max, f.points_used, f.trimmed
        ),
        FitOutcome::ZeroTail(z) => format!("zero_tail t0={} exact={}", z.t0, z.exact),
    };
    println!("{line}");
    Ok(())
}

fn need_field(a: &VerifyArgs) -> Result<Signal> {
    let uri = a
        .field
        .as_deref()
        .ok_or_else(|| Error::Parse(format!("--case {:?} needs --field", a.case).to_lowercase()))?;
    Signal::from_field(load_field(uri)?)
}

fn run_verify(a: &VerifyArgs) -> Result<VerificationReport> {
    let grid = |default: DyadicGrid| a.t.unwrap_or(default);
    match a.case {
        Case::Thm11 => verify_thm11(&need_field(a)?, a.p, a.m, &grid(DyadicGrid::octaves(1, 6)?)),
        Case::Cor12 => verify_cor12(&need_field(a)?, a.m, &grid(DyadicGrid::octaves(1, 6)?)),
        Case::Thm13 => {
            let uri = a.spectrum.as_deref().or(a.field.as_deref()).expect("clap requires one");
            let source = load_spectrum(uri)?;
            verify_thm13(source.as_source(), a.pprime, a.m, &grid(DyadicGrid::octaves(0, 8)?))
        }
        Case::Thm14 => {
            let uri = a
                .spectrum
                .as_deref()
                .ok_or_else(|| Error::Parse("--case thm14 needs --spectrum".into()))?;
            let spec = make_from_uri(uri, None)?.into_spectrum()?;
            verify_thm14(&spec, a.pprime, a.m, a.alpha, &grid(default_transfer_grid()))
        }
        Case::Cor15 => {
            let gamma = a
                .gamma
                .ok_or_else(|| Error::Parse("--case cor15 needs --gamma".into()))?;
            verify_cor15(&need_field(a)?, gamma, a.eps.as_ref(), a.t.as_ref())
        }
    }
}

fn run_demo(a: &DemoArgs) -> Result<VerificationReport> {
    match a.case {
        DemoCase::D1Counterexample => {
            demo_d1_counterexample(a.widths.as_deref().unwrap_or(&DEFAULT_WIDTHS))
        }
        DemoCase::Gamma2Failure => demo_gamma2_failure(),
    }
}

fn finish_report(report: &VerificationReport, target: Option<&Path>) -> Result<bool> {
    let mut json = report.to_json()?;
    json.push('\n');
    emit(target, json.as_bytes())?;
    eprintln!(
        "{}: {}",
        report.case_name,
        if report.passed { "passed" } else { "FAILED" }
    );
    Ok(report.passed)
}

fn execute(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Gfn(a) => run_gfn(a).map(|_| true),
        Command::Mc(a) => run_mc(a).map(|_| true),
        Command::Tail(a) => run_tail(a).map(|_| true),
        Command::Fit(a) => run_fit(a).map(|_| true),
        Command::Verify(a) => finish_report(&run_verify(a)?, a.report.as_deref()),
        Command::Demo(a) => finish_report(&run_demo(a)?, a.report.as_deref()),
    }
}

/// Exit status: 0 on success or a passed check, 1 on a failed, refused or
/// inapplicable check, 2 on usage and numerical errors.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::Refused(_) | Error::NoPowerLaw(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
