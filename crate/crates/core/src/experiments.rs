//! Seeded sweeps and the reports behind the command-line tool.
//!
//! Trial `t` at grid point `i` (points enumerated `ℓ`-major) samples its
//! presentation from stream `(i << 32) | t` of the master seed, so results do
//! not depend on how trials are spread over threads.

use std::fmt::{self, Write as _};
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::complex::AbstractLabeling;
use crate::filling::{self, find_filling, FillingReport, SearchLimits, VanKampenComplex, DEFAULT_NODE_BUDGET};
use crate::forms::{parse_rational, Builtin, GeometricForm, SubdivisionMode};
use crate::sampler::{sample_presentation_stream, Model, ModelConfig, Presentation};
use crate::smallcancel::{check_b2p_table, check_cp_table, check_cprime_table, PieceTable};
use crate::text::ComplexDocument;
use crate::words::Word;

pub const CSV_HEADER: &str = "ell,d_num,d_den,trials,successes,fraction,mean_relators,timeouts,seconds";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl ExperimentError {
    pub fn invalid(e: impl fmt::Display) -> ExperimentError {
        ExperimentError::InvalidSpec(e.to_string())
    }

    /// 2 for an invalid spec, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::InvalidSpec(_) => 2,
            ExperimentError::Io { .. } => 3,
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, ExperimentError> {
    std::fs::read_to_string(path).map_err(|source| ExperimentError::Io { path: path.display().to_string(), source })
}

/// A built-in name such as `builtin:wheel(3)` or `cprime(1/2)`, else a
/// path to a form file.
pub fn load_form(spec: &str) -> Result<(String, GeometricForm), ExperimentError> {
    let builtin = spec.strip_prefix("builtin:");
    let parsed = spec.parse::<Builtin>();
    match (builtin, parsed) {
        (_, Ok(b)) => Ok((b.to_string(), b.build().map_err(ExperimentError::invalid)?)),
        (Some(_), Err(e)) => Err(ExperimentError::invalid(e)),
        (None, Err(_)) => {
            let text = read_file(Path::new(spec))?;
            let doc: ComplexDocument = text.parse().map_err(ExperimentError::invalid)?;
            Ok((spec.to_string(), doc.form().map_err(ExperimentError::invalid)?))
        }
    }
}

pub fn load_presentation(path: &Path, reduce: bool) -> Result<Presentation, ExperimentError> {
    Presentation::parse(&read_file(path)?, reduce).map_err(ExperimentError::invalid)
}

/// What a sweep counts as a success in each trial.
#[derive(Clone, Debug)]
pub enum Target {
    /// The presentation violates `C′(λ)`.
    CPrime(Rational64),
    /// The presentation violates `C(p)`.
    Cp(usize),
    /// The presentation violates `B(2p)`.
    B2p(usize),
    /// `Y_ℓ` has a reduced filling by the presentation.
    Fillable { name: String, form: GeometricForm },
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::CPrime(l) => write!(f, "cprime({l})"),
            Target::Cp(p) => write!(f, "cp({p})"),
            Target::B2p(p) => write!(f, "b2p({p})"),
            Target::Fillable { name, .. } => write!(f, "fillable({name})"),
        }
    }
}

impl FromStr for Target {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Target, ExperimentError> {
        let s = s.trim();
        let (name, arg) = s
            .split_once('(')
            .and_then(|(n, rest)| rest.strip_suffix(')').map(|a| (n, a)))
            .ok_or_else(|| ExperimentError::invalid(format!("target {s:?} should look like cprime(1/2), cp(3), b2p(2) or fillable(<form>)")))?;
        let int = |a: &str| a.trim().parse::<usize>().map_err(|_| ExperimentError::invalid(format!("{a:?} is not an integer")));
        match name {
            "cprime" => {
                let l = parse_rational(arg).map_err(ExperimentError::invalid)?;
                if l <= Rational64::new(0, 1) || l >= Rational64::one() {
                    return Err(ExperimentError::invalid("cprime needs 0 < λ < 1"));
                }
                Ok(Target::CPrime(l))
            }
            "cp" => Ok(Target::Cp(int(arg)?)),
            "b2p" => Ok(Target::B2p(int(arg)?)),
            "fillable" => {
                let (name, form) = load_form(arg.trim())?;
                Ok(Target::Fillable { name, form })
            }
            _ => Err(ExperimentError::invalid(format!("unknown target {name:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub m: u8,
    pub ells: Vec<usize>,
    pub grid: Vec<Rational64>,
    pub trials: u32,
    pub seed: u64,
    pub target: Target,
    pub model: Model,
    pub exact_length: bool,
    /// Per-trial node budget for fill searches; exhausting it is a timeout.
    pub node_budget: u64,
    /// Optional wall-clock cap per fill search. Output then depends on timing.
    pub trial_timeout: Option<Duration>,
    /// Record wall time in the `seconds` column instead of 0.
    pub timing: bool,
}

impl SweepSpec {
    pub fn new(m: u8, ells: Vec<usize>, grid: Vec<Rational64>, trials: u32, seed: u64, target: Target) -> SweepSpec {
        SweepSpec {
            m,
            ells,
            grid,
            trials,
            seed,
            target,
            model: Model::Bernoulli,
            exact_length: false,
            node_budget: DEFAULT_NODE_BUDGET,
            trial_timeout: None,
            timing: false,
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.ells.is_empty() || self.grid.is_empty() {
            return Err(ExperimentError::invalid("ell list and density grid must be nonempty"));
        }
        if self.trials == 0 {
            return Err(ExperimentError::invalid("trials must be at least 1"));
        }
        match self.target {
            Target::Cp(p) if p < 2 => Err(ExperimentError::invalid("cp needs p >= 2")),
            Target::B2p(p) if p < 1 => Err(ExperimentError::invalid("b2p needs p >= 1")),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct SweepRow {
    pub ell: usize,
    pub d: Rational64,
    pub trials: u32,
    pub successes: u32,
    pub mean_relators: f64,
    pub timeouts: u32,
    pub seconds: f64,
}

impl SweepRow {
    pub fn fraction(&self) -> f64 {
        f64::from(self.successes) / f64::from(self.trials)
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.3},{},{:.3}",
            self.ell,
            self.d.numer(),
            self.d.denom(),
            self.trials,
            self.successes,
            self.fraction(),
            self.mean_relators,
            self.timeouts,
            self.seconds
        )
    }
}

/// One trial of a sweep.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub success: bool,
    pub relators: usize,
    pub timed_out: bool,
    /// The reduced filling found, for fillability targets.
    pub filling: Option<Vec<Word>>,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Per grid point, the outcome of every trial in trial order.
    pub trials: Vec<Vec<TrialOutcome>>,
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}

pub fn csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII")
}

/// Runs every `(ℓ, d)` point of the spec; `jobs` sets the worker count.
pub fn run_sweep(spec: &SweepSpec, jobs: Option<usize>) -> Result<SweepResult, ExperimentError> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(ExperimentError::invalid)?;
    let mut rows = Vec::new();
    let mut all = Vec::new();
    let mut point = 0u64;
    for &ell in &spec.ells {
        let subdivided = match &spec.target {
            Target::Fillable { form, .. } => {
                let s = form.subdivide(ell, SubdivisionMode::Strict).map_err(ExperimentError::invalid)?;
                let lab = AbstractLabeling::distinct(&s.complex);
                Some((s.complex, lab))
            }
            _ => None,
        };
        for &d in &spec.grid {
            let start = Instant::now();
            let mut cfg = ModelConfig::new(spec.m, ell, d, spec.model, spec.seed);
            cfg.exact_length = spec.exact_length;
            let outcomes: Vec<Result<TrialOutcome, ExperimentError>> = pool.install(|| {
                (0..spec.trials)
                    .into_par_iter()
                    .map(|t| {
                        let p = sample_presentation_stream(&cfg, (point << 32) | u64::from(t)).map_err(ExperimentError::invalid)?;
                        Ok(evaluate(spec, &p, subdivided.as_ref()))
                    })
                    .collect()
            });
            let outcomes = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
            let relators: usize = outcomes.iter().map(|o| o.relators).sum();
            rows.push(SweepRow {
                ell,
                d,
                trials: spec.trials,
                successes: outcomes.iter().filter(|o| o.success).count() as u32,
                mean_relators: relators as f64 / f64::from(spec.trials),
                timeouts: outcomes.iter().filter(|o| o.timed_out).count() as u32,
                seconds: if spec.timing { start.elapsed().as_secs_f64() } else { 0.0 },
            });
            all.push(outcomes);
            point += 1;
        }
    }
    Ok(SweepResult { rows, trials: all })
}

fn evaluate(
    spec: &SweepSpec,
    p: &Presentation,
    subdivided: Option<&(crate::complex::Complex2, AbstractLabeling)>,
) -> TrialOutcome {
    let relators = p.relators.len();
    let violated = |holds: bool| TrialOutcome { success: !holds, relators, timed_out: false, filling: None };
    match &spec.target {
        Target::CPrime(l) => violated(check_cprime_table(&PieceTable::new(&p.relators), *l).holds),
        Target::Cp(k) => violated(check_cp_table(&PieceTable::new(&p.relators), *k).holds),
        Target::B2p(k) => violated(check_b2p_table(&PieceTable::new(&p.relators), *k).holds),
        Target::Fillable { .. } => {
            let (c, lab) = subdivided.expect("subdivided for fillability targets");
            let limits = SearchLimits {
                node_budget: spec.node_budget,
                deadline: spec.trial_timeout.map(|t| Instant::now() + t),
            };
            let report = find_filling(c, lab, &p.relators, true, &limits).expect("sampled relators are valid");
            TrialOutcome { success: report.found, relators, timed_out: report.timed_out, filling: report.relators }
        }
    }
}

/// `dens=… dens_c=… witness=… transition_d=…` with 1-based face ids.
pub fn critical_density_report(form: &GeometricForm) -> Result<String, ExperimentError> {
    let c = form.critical_density().map_err(ExperimentError::invalid)?;
    let witness: Vec<String> = c.witness.iter().map(|f| (f + 1).to_string()).collect();
    Ok(format!(
        "dens={} dens_c={} witness={} transition_d={}",
        form.density(),
        c.value,
        witness.join(","),
        Rational64::one() - c.value
    ))
}

/// `found=… relators=… nodes=…` for a fill search on `Y_ℓ`.
pub fn fill_report(form: &GeometricForm, ell: usize, p: &Presentation, require_reduced: bool, limits: &SearchLimits) -> Result<(FillingReport, String), ExperimentError> {
    let s = form.subdivide(ell, SubdivisionMode::Strict).map_err(ExperimentError::invalid)?;
    let lab = AbstractLabeling::distinct(&s.complex);
    let report = find_filling(&s.complex, &lab, &p.relators, require_reduced, limits).map_err(ExperimentError::invalid)?;
    let relators = report
        .relators
        .as_ref()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        .unwrap_or_else(|| "-".into());
    let mut line = format!("found={} relators={} nodes={}", report.found, relators, report.nodes_explored);
    if report.timed_out {
        line.push_str(" timed_out=true");
    }
    Ok((report, line))
}

/// Census summary line for `Y_ℓ` filled by the whole universe.
pub fn census_report(form: &GeometricForm, ell: usize, m: u8) -> Result<String, ExperimentError> {
    let c = filling::form_census(form, ell, m, SubdivisionMode::Strict).map_err(ExperimentError::invalid)?;
    let s: Vec<String> = c.self_intersections.iter().map(ToString::to_string).collect();
    Ok(format!(
        "k={} ell={} m={} fillings={} reduced={} exponent={:.6} dens={} self_intersections={}",
        c.k,
        ell,
        m,
        c.fillings,
        c.reduced,
        c.exponent,
        form.density(),
        s.join(",")
    ))
}

/// Which small cancellation conditions `check_sc_report` evaluates.
#[derive(Clone, Debug, Default)]
pub struct ScChecks {
    pub cprime: Option<Rational64>,
    pub cp: Option<usize>,
    pub b2p: Option<usize>,
}

/// One `<name> <true|false> witness=<…>` line per requested condition.
pub fn check_sc_report(p: &Presentation, checks: &ScChecks) -> Result<String, ExperimentError> {
    let table = PieceTable::new(&p.relators);
    let mut out = String::new();
    if let Some(l) = checks.cprime {
        if l <= Rational64::new(0, 1) {
            return Err(ExperimentError::invalid("cprime needs λ > 0"));
        }
        let c = check_cprime_table(&table, l);
        let w = c.witness.map_or_else(|| "-".to_string(), |w| format!("{}@{},{}", w.piece, w.site, w.other));
        writeln!(out, "cprime({l}) {} witness={w}", c.holds).expect("string");
    }
    let factor = |w: Option<crate::smallcancel::FactorWitness>| {
        w.map_or_else(
            || "-".to_string(),
            |w| format!("{}@{}", w.pieces.iter().map(ToString::to_string).collect::<Vec<_>>().join("."), w.origin),
        )
    };
    if let Some(k) = checks.cp {
        if k < 2 {
            return Err(ExperimentError::invalid("cp needs p >= 2"));
        }
        let c = check_cp_table(&table, k);
        writeln!(out, "cp({k}) {} witness={}", c.holds, factor(c.witness)).expect("string");
    }
    if let Some(k) = checks.b2p {
        if k < 1 {
            return Err(ExperimentError::invalid("b2p needs p >= 1"));
        }
        let c = check_b2p_table(&table, k);
        writeln!(out, "b2p({k}) {} witness={}", c.holds, factor(c.witness)).expect("string");
    }
    Ok(out)
}

pub const AUDIT_HEADER: &str = "name,faces,edges,red,ell,complexity,within_k,lhs,rhs,passes,boundary,boundary_rhs,boundary_passes";

/// One audited complex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AuditRow {
    pub name: String,
    pub complexity: usize,
    pub within_k: Option<bool>,
    pub report: filling::AuditReport,
}

impl AuditRow {
    pub fn csv_line(&self) -> String {
        let r = &self.report;
        let (b, brhs, bpass) = match r.boundary {
            Some(b) => (b.length.to_string(), b.rhs.to_string(), b.passes.to_string()),
            None => ("-".into(), "-".into(), "-".into()),
        };
        let within = self.within_k.map_or_else(|| "-".to_string(), |w| w.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.name, r.faces, r.edges, r.red, r.ell, self.complexity, within, r.lhs, r.rhs, r.passes, b, brhs, bpass
        )
    }
}

/// Audits `Y_ℓ` with one abstract relator per face, or the filled complex
/// when a presentation fills it.
pub fn audit_form(
    name: &str,
    form: &GeometricForm,
    ell: usize,
    d: Rational64,
    eps: Rational64,
    planar: bool,
    k: Option<usize>,
    presentation: Option<&Presentation>,
) -> Result<AuditRow, ExperimentError> {
    let s = form.subdivide(ell, SubdivisionMode::Strict).map_err(ExperimentError::invalid)?;
    let lab = AbstractLabeling::distinct(&s.complex);
    let complexity = s.complex.complexity();
    let report = match presentation {
        Some(p) => {
            let found = find_filling(&s.complex, &lab, &p.relators, false, &SearchLimits::default()).map_err(ExperimentError::invalid)?;
            let relators = found
                .relators
                .ok_or_else(|| ExperimentError::invalid(format!("{name} at ell={ell} has no filling by the presentation")))?;
            let v = VanKampenComplex::new(s.complex.clone(), lab, relators).map_err(ExperimentError::invalid)?;
            let mut r = v.audit(d, eps, planar);
            r.ell = ell;
            r.rhs = (Rational64::one() - d - eps) * Rational64::from_integer((r.faces * ell) as i64);
            r.passes = Rational64::from_integer(r.lhs) >= r.rhs;
            r
        }
        None => filling::isoperimetric_audit(&s.complex, &lab, d, eps, ell, planar),
    };
    Ok(AuditRow {
        name: name.to_string(),
        complexity,
        within_k: k.map(|k| s.complex.satisfies_complexity(k)),
        report,
    })
}

pub fn audit_csv(rows: &[AuditRow]) -> String {
    let mut s = String::new();
    writeln!(s, "{AUDIT_HEADER}").expect("string");
    for r in rows {
        writeln!(s, "{}", r.csv_line()).expect("string");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_density_lines() {
        let (_, f) = load_form("builtin:wheel(3)").unwrap();
        assert_eq!(critical_density_report(&f).unwrap(), "dens=3/4 dens_c=3/4 witness=1,2,3,4 transition_d=1/4");
        let (_, f) = load_form("cprime(1/3)").unwrap();
        assert!(critical_density_report(&f).unwrap().contains("dens_c=5/6 witness=1,2 transition_d=1/6"));
        let (_, f) = load_form("builtin:halfwheel(2)").unwrap();
        assert!(critical_density_report(&f).unwrap().contains("dens_c=5/6"));
    }

    #[test]
    fn check_sc_lines() {
        let p = Presentation::parse("abab\nabba\n", false).unwrap();
        let checks = ScChecks { cprime: Some(Rational64::new(1, 2)), cp: Some(3), b2p: None };
        let out = check_sc_report(&p, &checks).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("cprime(1/2) false witness="));
        assert!(lines[1].starts_with("cp(3) false witness="));
    }

    #[test]
    fn bad_specs_are_invalid() {
        assert_eq!(load_form("builtin:nope").unwrap_err().exit_code(), 2);
        assert_eq!(load_form("/no/such/file").unwrap_err().exit_code(), 3);
        assert!("cprime(2)".parse::<Target>().is_err());
        assert!("whatever".parse::<Target>().is_err());
        assert!(matches!("fillable(builtin:wheel(2))".parse::<Target>().unwrap(), Target::Fillable { .. }));
    }

    #[test]
    fn sweep_is_reproducible_across_jobs() {
        let spec = SweepSpec::new(
            2,
            vec![8],
            vec![Rational64::new(1, 10), Rational64::new(2, 5)],
            20,
            7,
            "cprime(1/2)".parse().unwrap(),
        );
        let a = csv_string(&run_sweep(&spec, Some(1)).unwrap().rows);
        let b = csv_string(&run_sweep(&spec, Some(4)).unwrap().rows);
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
        assert_eq!(a.lines().count(), 3);
    }

    #[test]
    fn single_point_single_trial() {
        let spec = SweepSpec::new(2, vec![6], vec![Rational64::new(1, 2)], 1, 3, "fillable(cprime(1/2))".parse().unwrap());
        let r = run_sweep(&spec, None).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows, run_sweep(&spec, None).unwrap().rows);
    }

    #[test]
    fn counterexample_audit_rows() {
        let (_, f) = load_form("counterexample").unwrap();
        let d = Rational64::new(2, 5);
        let zero = Rational64::new(0, 1);
        let full = audit_form("D", &f, 30, d, zero, true, Some(6), None).unwrap();
        assert!(full.report.passes);
        let inner = f.restrict(&[1, 2]).unwrap();
        let row = audit_form("D'", &inner, 30, d, zero, true, None, None).unwrap();
        assert!(!row.report.passes);
        assert!(row.csv_line().starts_with("D',2,33,0,30,"));
    }
}
