use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use randgroups::experiments::{
    self, audit_csv, audit_form, census_report, check_sc_report, critical_density_report, fill_report, load_form,
    load_presentation, run_sweep, ExperimentError, ScChecks, SweepSpec, Target,
};
use randgroups::complex::AbstractLabeling;
use randgroups::filling::{SearchLimits, DEFAULT_NODE_BUDGET};
use randgroups::forms::parse_rational;
use randgroups::sampler::{sample_presentation, Model, ModelConfig};
use randgroups::text::ComplexDocument;

#[derive(Parser)]
#[command(name = "randgroups", version, about = "Random groups at density: sampling, small cancellation, fillings and sweeps")]
struct Cli {
    /// Master seed for sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Bernoulli,
    Fixed,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Bernoulli => Model::Bernoulli,
            ModelArg::Fixed => Model::FixedCount,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a presentation at density d.
    Sample {
        #[arg(long, default_value_t = 2)]
        m: u8,
        #[arg(long)]
        ell: usize,
        #[arg(long, value_parser = rational)]
        d: Rational64,
        #[arg(long, value_enum, default_value_t = ModelArg::Bernoulli)]
        model: ModelArg,
        /// Draw from words of length exactly ell.
        #[arg(long)]
        exact_length: bool,
    },
    /// Check small cancellation conditions of a presentation.
    CheckSc {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long, value_parser = rational)]
        cprime: Option<Rational64>,
        #[arg(long)]
        cp: Option<usize>,
        #[arg(long)]
        b2p: Option<usize>,
        /// Cyclically reduce relators instead of rejecting them.
        #[arg(long)]
        reduce: bool,
    },
    /// Search for a filling of a subdivided form by a presentation.
    Fill {
        #[arg(long)]
        form: String,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        require_reduced: bool,
        /// Also report the census of fillings by the whole universe.
        #[arg(long)]
        census: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
        /// Wall-clock cap in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        reduce: bool,
    },
    /// Density, critical density and transition density of a form.
    CriticalDensity {
        /// `builtin:name(params)` or a form file.
        spec: Option<String>,
        #[arg(long = "form", conflicts_with = "spec")]
        form: Option<String>,
    },
    /// Isoperimetric audit of subdivided forms or labeled complex files.
    Audit {
        /// Forms to subdivide at --ell and audit, one row each.
        #[arg(long = "form")]
        forms: Vec<String>,
        /// Labeled complex files to audit as they are.
        #[arg(long = "complex")]
        complexes: Vec<PathBuf>,
        #[arg(long, default_value_t = 30)]
        ell: usize,
        #[arg(long, value_parser = rational)]
        d: Rational64,
        #[arg(long, value_parser = rational, default_value = "0")]
        eps: Rational64,
        /// Flag complexes of complexity at most K.
        #[arg(long = "k")]
        k: Option<usize>,
        /// Treat inputs as planar diagrams and also audit the boundary length.
        #[arg(long)]
        planar: bool,
        /// Audit the filling by this presentation instead of the abstract labeling.
        #[arg(long)]
        presentation: Option<PathBuf>,
    },
    /// Monte Carlo sweep over lengths and densities.
    PhaseSweep {
        #[arg(long, default_value_t = 2)]
        m: u8,
        #[arg(long, value_delimiter = ',', required = true)]
        ells: Vec<usize>,
        #[arg(long, value_delimiter = ',', value_parser = rational, required = true)]
        grid: Vec<Rational64>,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        /// cprime(λ), cp(p), b2p(p) or fillable(<form>).
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value_t = ModelArg::Bernoulli)]
        model: ModelArg,
        #[arg(long)]
        exact_length: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
        /// Wall-clock cap per fill search in seconds; output then depends on timing.
        #[arg(long)]
        trial_timeout: Option<f64>,
        /// Fill the seconds column with wall time.
        #[arg(long)]
        timing: bool,
    },
    /// Count fillings of a subdivided form by the whole universe.
    Census {
        #[arg(long)]
        form: String,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 2)]
        m: u8,
    },
}

fn rational(s: &str) -> Result<Rational64, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn seconds(s: f64) -> Result<Duration, ExperimentError> {
    Duration::try_from_secs_f64(s).map_err(ExperimentError::invalid)
}

fn run(cli: Cli) -> Result<String, ExperimentError> {
    let Format::Csv = cli.format;
    match cli.command {
        Command::Sample { m, ell, d, model, exact_length } => {
            let mut cfg = ModelConfig::new(m, ell, d, model.into(), cli.seed);
            cfg.exact_length = exact_length;
            Ok(sample_presentation(&cfg).map_err(ExperimentError::invalid)?.to_string())
        }
        Command::CheckSc { presentation, cprime, cp, b2p, reduce } => {
            let p = load_presentation(&presentation, reduce)?;
            let checks = if cprime.is_none() && cp.is_none() && b2p.is_none() {
                ScChecks { cprime: Some(Rational64::new(1, 6)), ..ScChecks::default() }
            } else {
                ScChecks { cprime, cp, b2p }
            };
            check_sc_report(&p, &checks)
        }
        Command::Fill { form, ell, presentation, require_reduced, census, node_budget, timeout, reduce } => {
            let (_, form) = load_form(&form)?;
            let p = load_presentation(&presentation, reduce)?;
            let deadline = timeout.map(seconds).transpose()?.map(|t| Instant::now() + t);
            let (_, mut line) = fill_report(&form, ell, &p, require_reduced, &SearchLimits { node_budget, deadline })?;
            line.push('\n');
            if census {
                line.push_str(&census_report(&form, ell, p.m)?);
                line.push('\n');
            }
            Ok(line)
        }
        Command::CriticalDensity { spec, form } => {
            let spec = spec.or(form).ok_or_else(|| ExperimentError::invalid("give a form as an argument or with --form"))?;
            let (_, form) = load_form(&spec)?;
            Ok(critical_density_report(&form)? + "\n")
        }
        Command::Audit { forms, complexes, ell, d, eps, k, planar, presentation } => {
            if forms.is_empty() && complexes.is_empty() {
                return Err(ExperimentError::invalid("nothing to audit: give --form or --complex"));
            }
            let p = presentation.as_deref().map(|p| load_presentation(p, false)).transpose()?;
            let mut rows = Vec::new();
            for spec in &forms {
                let (name, form) = load_form(spec)?;
                rows.push(audit_form(&name, &form, ell, d, eps, planar, k, p.as_ref())?);
            }
            for path in &complexes {
                rows.push(audit_complex_file(path, d, eps, planar, k)?);
            }
            let passed = rows.iter().filter(|r| r.report.passes).count();
            eprintln!("audited={} passed={} failed={}", rows.len(), passed, rows.len() - passed);
            Ok(audit_csv(&rows))
        }
        Command::PhaseSweep { m, ells, grid, trials, target, model, exact_length, node_budget, trial_timeout, timing } => {
            let target: Target = target.parse()?;
            let mut spec = SweepSpec::new(m, ells, grid, trials, cli.seed, target);
            spec.model = model.into();
            spec.exact_length = exact_length;
            spec.node_budget = node_budget;
            spec.trial_timeout = trial_timeout.map(seconds).transpose()?;
            spec.timing = timing;
            let result = run_sweep(&spec, cli.jobs)?;
            Ok(experiments::csv_string(&result.rows))
        }
        Command::Census { form, ell, m } => {
            let (_, form) = load_form(&form)?;
            Ok(census_report(&form, ell, m)? + "\n")
        }
    }
}

/// A labeled complex file is audited at ℓ = its longest face.
fn audit_complex_file(
    path: &Path,
    d: Rational64,
    eps: Rational64,
    planar: bool,
    k: Option<usize>,
) -> Result<experiments::AuditRow, ExperimentError> {
    let doc: ComplexDocument = experiments::read_file(path)?.parse().map_err(ExperimentError::invalid)?;
    let c = &doc.complex;
    let lab = doc.labeling().map_err(ExperimentError::invalid)?.unwrap_or_else(|| AbstractLabeling::distinct(c));
    let ell = c.faces().iter().map(|f| f.boundary.len()).max().unwrap_or(0);
    Ok(experiments::AuditRow {
        name: path.display().to_string(),
        complexity: c.complexity(),
        within_k: k.map(|k| c.satisfies_complexity(k)),
        report: randgroups::filling::isoperimetric_audit(c, &lab, d, eps, ell, planar),
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), ExperimentError> {
    let io_err = |path: &str, source: io::Error| ExperimentError::Io { path: path.to_string(), source };
    match out {
        Some(path) => {
            let name = path.display().to_string();
            let mut f = File::create(path).map_err(|e| io_err(&name, e))?;
            f.write_all(text.as_bytes()).map_err(|e| io_err(&name, e))
        }
        None => io::stdout().lock().write_all(text.as_bytes()).map_err(|e| io_err("stdout", e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli).and_then(|text| emit(out.as_deref(), &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
