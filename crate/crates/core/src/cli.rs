//! The `geoft` command line.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{GeoftError, Result};
use crate::fields::{GaussianFunction, GridMode, GridSpec, SampledField};
use crate::forms::{GeometricPair, Side};
use crate::fraclap::{self, FracParams, FracPath};
use crate::identities;
use crate::io::{self, FieldFile, Input};
use crate::lattice::{self, PoissonForm, Radii};
use crate::linalg;
use crate::spectral::{self, FrequencyLattice, Spectrum};

#[derive(Debug, Parser)]
#[command(name = "geoft", version, about = "Fourier transforms attached to nondegenerate bilinear forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print B, det b, the classification and a condition estimate of a structure.
    Pair { structure: PathBuf },
    /// Forward or inverse left/right transform of a field, spectrum or Gaussian.
    Transform(TransformArgs),
    /// Fractional power of -Δ_b on a periodic field.
    Frac(FracArgs),
    /// Both sides of a Poisson summation formula for a Gaussian.
    Poisson(PoissonArgs),
    /// Run the identity catalog.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Direct,
    Fft,
}

#[derive(Debug, clap::Args)]
struct TransformArgs {
    /// Field, spectrum or Gaussian file.
    input: PathBuf,
    structure: PathBuf,
    #[arg(long, value_enum, default_value = "left")]
    side: SideArg,
    #[arg(long)]
    inverse: bool,
    #[arg(long, value_enum, default_value = "fft")]
    method: MethodArg,
    /// `auto` for the sheared FFT lattice (or the source grid when inverting),
    /// otherwise a file of evaluation points.
    #[arg(long, default_value = "auto")]
    freqs: String,
    /// Points per axis when sampling a Gaussian.
    #[arg(long)]
    points: Option<usize>,
    /// Half-width of the box when sampling a Gaussian.
    #[arg(long, default_value_t = 8.0)]
    half: f64,
    /// Log the residual of transforming back (forward FFT only).
    #[arg(long)]
    roundtrip: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct FracArgs {
    field: PathBuf,
    structure: Option<PathBuf>,
    #[arg(long)]
    s: Option<f64>,
    /// left, right, classical or all.
    #[arg(long)]
    path: Option<String>,
    /// Parameter file {"s", "structure", "path"}; flags take precedence.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct PoissonArgs {
    gaussian: PathBuf,
    lattice: PathBuf,
    /// Comma-separated shift; zero when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<f64>>,
    /// A form name or `all`.
    #[arg(long, default_value = "classical")]
    form: String,
    #[arg(long, default_value_t = lattice::DEFAULT_TAIL_TOL)]
    tol: f64,
    #[arg(long)]
    space_radius: Option<f64>,
    #[arg(long)]
    freq_radius: Option<f64>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    /// Comma-separated id prefixes; all checks when omitted.
    #[arg(long, value_delimiter = ',')]
    filter: Vec<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Record wall-clock time per check (makes the report nondeterministic).
    #[arg(long)]
    timings: bool,
    /// Print the catalog instead of running it.
    #[arg(long)]
    list: bool,
}

/// Process exit status for an error.
pub fn exit_code(e: &GeoftError) -> i32 {
    match e {
        GeoftError::Parse(_) | GeoftError::Io(_) | GeoftError::InvalidInput(_) => 2,
        GeoftError::Degenerate { .. } => 3,
        GeoftError::NotPositiveDefinite => 4,
        GeoftError::ParamOutOfRange(_) => 5,
        GeoftError::TailBoundViolated { .. } => 6,
        GeoftError::PreconditionFailed { source, .. } => exit_code(source),
        _ => 1,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match configure_threads().and_then(|_| dispatch(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("GEOFT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| GeoftError::InvalidInput(format!("GEOFT_THREADS={v} is not a thread count")))?;
    if n > 0 {
        // fails only if a pool already exists, as when called twice in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn dispatch(c: Command) -> Result<i32> {
    match c {
        Command::Pair { structure } => cmd_pair(&structure),
        Command::Transform(a) => cmd_transform(&a),
        Command::Frac(a) => cmd_frac(&a),
        Command::Poisson(a) => cmd_poisson(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_pair(structure: &Path) -> Result<i32> {
    let pair = GeometricPair::new(io::load_structure(structure)?)?;
    let report = json!({
        "B": linalg::to_rows(pair.b()),
        "det_b": pair.det_b(),
        "classification": pair.classify(),
        "condition_estimate": pair.condition_estimate(),
    });
    emit(None, &io::to_json(&report)?)?;
    Ok(0)
}

fn sample_gaussian(g: &GaussianFunction, points: Option<usize>, half: f64) -> Result<SampledField> {
    let n = g.dim();
    let per_axis = points.unwrap_or(match n {
        1 => 256,
        2 => 128,
        _ => 32,
    });
    g.sample(&GridSpec::centered(n, per_axis, half, GridMode::Truncated)?)
}

fn write_outputs(a: &TransformArgs, file: &FieldFile) -> Result<()> {
    if let Some(csv) = &a.csv {
        io::write_csv(csv, &file.values())?;
    }
    emit(a.out.as_deref(), &io::to_json(file)?)
}

fn cmd_transform(a: &TransformArgs) -> Result<i32> {
    let pair = GeometricPair::new(io::load_structure(&a.structure)?)?;
    let side: Side = a.side.into();
    let input = io::load_input(&a.input)?;
    let explicit = (a.freqs != "auto").then(|| io::load_points(Path::new(&a.freqs))).transpose()?;
    let file = if a.inverse {
        inverse_transform(a, &pair, side, input, explicit)?
    } else {
        forward_transform(a, &pair, side, input, explicit)?
    };
    write_outputs(a, &file)?;
    Ok(0)
}

fn forward_transform(
    a: &TransformArgs,
    pair: &GeometricPair,
    side: Side,
    input: Input,
    explicit: Option<Vec<Vec<f64>>>,
) -> Result<FieldFile> {
    let f = match input {
        Input::Field(f) => f,
        Input::Gaussian(g) => sample_gaussian(&g, a.points, a.half)?,
        _ => {
            return Err(GeoftError::InvalidInput(
                "a forward transform needs a field or a Gaussian".into(),
            ))
        }
    };
    if let Some(points) = explicit {
        if a.method == MethodArg::Fft {
            return Err(GeoftError::InvalidInput(
                "the fft method evaluates on its own lattice; use --freqs auto".into(),
            ));
        }
        let values = spectral::geometric_ft(&f, pair, side, &points)?;
        return Ok(FieldFile::from_points("frequency", points, &values));
    }
    let spec = match a.method {
        MethodArg::Fft => spectral::geometric_ft_fft(&f, pair, side.into())?,
        MethodArg::Direct => {
            let lattice = FrequencyLattice::for_grid(&f.grid, pair, side.into());
            let values = spectral::geometric_ft(&f, pair, side, &lattice.points())?;
            Spectrum::new(lattice, values, Some(f.grid.clone()))?
        }
    };
    if a.roundtrip {
        let back = spectral::inverse_geometric_ft_fft(&spec, pair, side.into(), &f.grid)?;
        eprintln!("round-trip residual: {:e}", linalg::rel_gap(&back.values, &f.values));
    }
    Ok(FieldFile::from_spectrum(&spec))
}

fn inverse_transform(
    a: &TransformArgs,
    pair: &GeometricPair,
    side: Side,
    input: Input,
    explicit: Option<Vec<Vec<f64>>>,
) -> Result<FieldFile> {
    eprintln!("inverse includes the factor |det b| = {:e}", pair.abs_det_b());
    match input {
        Input::Spectrum(s) => {
            if let Some(points) = explicit {
                let values = spectral::inverse_geometric_ft_spectrum(&s, pair, side, &points)?;
                return Ok(FieldFile::from_points("space", points, &values));
            }
            let grid = s
                .source
                .clone()
                .ok_or_else(|| GeoftError::InvalidInput("spectrum records no source grid; pass --freqs".into()))?;
            let f = match a.method {
                MethodArg::Fft => spectral::inverse_geometric_ft_fft(&s, pair, side.into(), &grid)?,
                MethodArg::Direct => {
                    let values = spectral::inverse_geometric_ft_spectrum(&s, pair, side, &grid.points())?;
                    SampledField::new(grid, values)?
                }
            };
            Ok(FieldFile::from_field(&f))
        }
        // samples on a grid read as frequency space
        Input::Field(_) | Input::Gaussian(_) => {
            if a.method == MethodArg::Fft {
                return Err(GeoftError::UnsupportedMode(
                    "the fft inverse needs a spectrum on a sheared lattice; use --method direct".into(),
                ));
            }
            let f = match input {
                Input::Field(f) => f,
                Input::Gaussian(g) => sample_gaussian(&g, a.points, a.half)?,
                _ => unreachable!(),
            };
            match explicit {
                Some(points) => {
                    let values = spectral::inverse_geometric_ft_field(&f, pair, side, &points)?;
                    Ok(FieldFile::from_points("space", points, &values))
                }
                None => {
                    let values = spectral::inverse_geometric_ft_field(&f, pair, side, &f.grid.points())?;
                    Ok(FieldFile::from_field(&SampledField::new(f.grid.clone(), values)?))
                }
            }
        }
        Input::Points { .. } => Err(GeoftError::InvalidInput(
            "scattered values carry no quadrature weights; invert a spectrum or a grid field".into(),
        )),
    }
}

fn cmd_frac(a: &FracArgs) -> Result<i32> {
    let params_file = a.params.as_deref().map(io::load_frac_params).transpose()?;
    let structure = match (&a.structure, &params_file) {
        (Some(p), _) => io::load_structure(p)?,
        (None, Some(pf)) => pf.structure.clone().into_structure()?,
        (None, None) => return Err(GeoftError::InvalidInput("a structure file or --params is required".into())),
    };
    let s = a
        .s
        .or(params_file.as_ref().map(|p| p.s))
        .ok_or_else(|| GeoftError::InvalidInput("--s or --params is required".into()))?;
    let path = a
        .path
        .clone()
        .or(params_file.map(|p| p.path))
        .unwrap_or_else(|| "classical".into());
    let f = io::load_field(&a.field)?;
    if f.grid.mode != GridMode::Periodic {
        return Err(GeoftError::NotPeriodic);
    }
    let params = FracParams::new(s, GeometricPair::new(structure)?)?;
    let out = if path == "all" {
        let report = fraclap::path_agreement(&f, &params)?;
        eprintln!("path agreement residual: {:e}", report.residual);
        fraclap::frac_laplacian(&f, &params, FracPath::Classical)?
    } else {
        fraclap::frac_laplacian(&f, &params, io::parse_frac_path(&path)?)?
    };
    if let Some(csv) = &a.csv {
        io::write_csv(csv, &out.values)?;
    }
    emit(a.out.as_deref(), &io::to_json(&FieldFile::from_field(&out))?)?;
    Ok(0)
}

/// Kebab-case names and the short names used in the catalog.
fn parse_form(s: &str) -> Result<PoissonForm> {
    let alias = match s {
        "PoiL" => "left-b",
        "PoiR" => "right-opposite",
        "PL" => "lattice-left",
        "PR" => "lattice-right",
        other => other,
    };
    PoissonForm::parse(alias)
}

fn cmd_poisson(a: &PoissonArgs) -> Result<i32> {
    let g = io::load_gaussian(&a.gaussian)?;
    let l = io::load_lattice(&a.lattice)?;
    let x = a.x.clone().unwrap_or_else(|| vec![0.0; l.dim()]);
    let radii = Radii {
        space: a.space_radius,
        frequency: a.freq_radius,
    };
    let forms: Vec<PoissonForm> = if a.form == "all" {
        PoissonForm::ALL.to_vec()
    } else {
        vec![parse_form(&a.form)?]
    };
    let reports = forms
        .iter()
        .map(|&form| lattice::poisson_check(&g, &l, &x, form, radii, a.tol))
        .collect::<Result<Vec<_>>>()?;
    let text = if reports.len() == 1 {
        io::to_json(&reports[0])?
    } else {
        io::to_json(&reports)?
    };
    emit(a.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    if a.list {
        emit(a.out.as_deref(), &io::to_json(&identities::catalog())?)?;
        return Ok(0);
    }
    let report = identities::run_suite(&a.filter, a.seed, a.timings);
    for r in &report.reports {
        eprintln!(
            "{} {:<24} residual {:.3e} (tolerance {:.1e})",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.residual,
            r.tolerance
        );
    }
    eprintln!(
        "{} passed, {} failed of {}",
        report.summary.passed, report.summary.failed, report.summary.total
    );
    emit(a.out.as_deref(), &io::to_json(&report)?)?;
    Ok(if report.all_passed() { 0 } else { 1 })
}
