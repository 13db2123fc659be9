//! The `glab` command line: argument parsing, orchestration and reports.
//!
//! Every command except `examples` produces a [`Report`]. Exit codes: 0 when
//! every check passes, 2 for a failed hypothesis on the input, 3 for a
//! failed randomized check, 4 for unusable input.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::artinian::{ChowRing, Monomial};
use crate::certificate::{Certificate, DegreeBounds, Specialization, TrialConfig};
use crate::complex::{is_palindromic, SimplicialComplex, TopologyReport};
use crate::corpus;
use crate::error::{Error, Result};
use crate::frame::GenericFrame;
use crate::io::{self, InputSource};
use crate::lefschetz::{
    certify_anisotropy, check_main_identity, main_identity_sides, middle_degree, random_nonzero_class,
    strong_lefschetz_check, weak_lefschetz_check, ElementChoice, Split,
};
use crate::scalar::{Field, FieldSpec, Gf2kField, ScalarError, Var};
use crate::volume::{degree_bound, random_point, VolumeFunctional};

#[derive(Debug, Parser)]
#[command(
    name = "glab",
    version,
    about = "Face rings of simplicial spheres in characteristic 2"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Complex as JSON `{"facets": [...]}` or one facet per line.
    #[arg(long, global = true, conflicts_with = "builtin")]
    pub input: Option<PathBuf>,
    /// Builtin complex, e.g. `cycle:5` or `join:cycle:3,cycle:3`.
    #[arg(long, global = true)]
    pub builtin: Option<String>,
    /// `gf2k:K` for K in 8, 16, 32, 64, 128, or `exact`.
    #[arg(long, global = true, default_value = "gf2k:64")]
    pub field: String,
    #[arg(long, global = true, env = "GLAB_SEED")]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 3)]
    pub trials: usize,
    /// Write the report here instead of printing it.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ElementArg {
    Random,
    Suspension,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Topology, f- and h-vectors and graded dimensions.
    Analyze,
    /// Volume of a degree-d monomial, written `1,3:2` for x1*x3^2.
    Volume {
        #[arg(long)]
        monomial: String,
    },
    /// The derivative identity on facet splits.
    Identity {
        #[arg(long, requires_all = ["gamma", "tau"])]
        facet: Option<String>,
        #[arg(long, requires = "facet")]
        gamma: Option<String>,
        #[arg(long, requires = "facet")]
        tau: Option<String>,
        /// Splits sampled when none is given.
        #[arg(long, default_value_t = 12)]
        max_splits: usize,
    },
    /// Anisotropy certificates for middle-degree classes.
    Anisotropy {
        /// Class as `0xC@MONO + MONO`; random classes when absent.
        #[arg(long)]
        class: Option<String>,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Weak or strong Lefschetz rank checks.
    Lefschetz {
        #[arg(long, conflicts_with = "strong")]
        weak: bool,
        #[arg(long)]
        strong: bool,
        #[arg(long, value_enum, default_value_t = ElementArg::Random)]
        element: ElementArg,
    },
    /// The builtin corpus.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum ExamplesAction {
    List,
    Emit {
        name: String,
        #[arg(long, value_enum, default_value_t = EmitFormat::Text)]
        format: EmitFormat,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmitFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    HypothesisFailure,
    CheckFailure,
    InputError,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::HypothesisFailure => 2,
            Outcome::CheckFailure => 3,
            Outcome::InputError => 4,
        }
    }

    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::NotPure | Error::NotNormalPseudomanifold(_) | Error::Hypothesis(_) | Error::NoWitnessFace => {
                Outcome::HypothesisFailure
            }
            Error::Scalar(
                ScalarError::BadFieldSpec(_) | ScalarError::UnsupportedDegree(_) | ScalarError::ReducibleModulus(_),
            ) => Outcome::InputError,
            e if e.is_resamplable() => Outcome::CheckFailure,
            Error::ResampleExhausted(_) | Error::Scalar(_) => Outcome::CheckFailure,
            _ => Outcome::InputError,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub input: Option<String>,
    pub field: String,
    pub seed: u64,
    pub trials: usize,
    pub topology: Option<TopologyReport>,
    pub f_vector: Option<Vec<u64>>,
    pub h_vector: Option<Vec<i64>>,
    pub checks: Vec<Certificate>,
    pub details: Value,
    pub timing_ms: u128,
    pub outcome: Outcome,
    pub passed: bool,
    pub message: Option<String>,
}

impl Report {
    fn new(command: &str, common: &Common, seed: u64) -> Self {
        Self {
            command: command.into(),
            input: None,
            field: common.field.clone(),
            seed,
            trials: common.trials,
            topology: None,
            f_vector: None,
            h_vector: None,
            checks: Vec::new(),
            details: Value::Null,
            timing_ms: 0,
            outcome: Outcome::Pass,
            passed: false,
            message: None,
        }
    }

    /// Pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn fail(&mut self, outcome: Outcome, message: impl Into<String>) {
        self.outcome = outcome;
        self.passed = false;
        self.message = Some(message.into());
    }

    fn finish_checks(&mut self) {
        self.passed = self.checks.iter().all(|c| c.passed);
        if !self.passed {
            self.outcome = Outcome::CheckFailure;
        }
    }
}

fn source(common: &Common) -> Result<InputSource> {
    match (&common.input, &common.builtin) {
        (Some(p), None) => Ok(InputSource::File(p.clone())),
        (None, Some(n)) => Ok(InputSource::Builtin(n.clone())),
        _ => Err(Error::InvalidArgument(
            "exactly one of --input or --builtin is required".into(),
        )),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze => "analyze",
        Command::Volume { .. } => "volume",
        Command::Identity { .. } => "identity",
        Command::Anisotropy { .. } => "anisotropy",
        Command::Lefschetz { .. } => "lefschetz",
        Command::Examples { .. } => "examples",
    }
}

/// Runs a report-producing command. Errors are folded into the report.
pub fn run(cli: &Cli) -> Report {
    execute(cli, |report| {
        let src = source(&cli.common)?;
        report.input = Some(src.to_string());
        io::load(&src)
    })
}

/// As [`run`] on an already loaded complex; `--input` and `--builtin` are
/// ignored and `label` is echoed as the input.
pub fn run_on(cli: &Cli, k: &SimplicialComplex, label: &str) -> Report {
    execute(cli, |report| {
        report.input = Some(label.to_string());
        Ok(k.clone())
    })
}

fn execute(cli: &Cli, load: impl FnOnce(&mut Report) -> Result<SimplicialComplex>) -> Report {
    let seed = cli.common.seed.unwrap_or_else(rand::random);
    let mut report = Report::new(command_name(&cli.command), &cli.common, seed);
    let start = Instant::now();
    if let Err(e) = load(&mut report).and_then(|k| dispatch(cli, &k, seed, &mut report)) {
        report.fail(Outcome::of_error(&e), e.to_string());
    }
    report.timing_ms = start.elapsed().as_millis();
    report
}

fn dispatch(cli: &Cli, k: &SimplicialComplex, seed: u64, report: &mut Report) -> Result<()> {
    let common = &cli.common;
    let field: FieldSpec = common.field.parse()?;
    if common.trials == 0 {
        return Err(Error::InvalidArgument("--trials must be positive".into()));
    }
    let topo = k.topology_report();
    report.topology = Some(topo.clone());
    report.f_vector = Some(k.f_vector());
    if !topo.is_pure {
        return Err(Error::NotPure);
    }
    report.h_vector = Some(k.h_vector()?);
    let exact_ok = matches!(cli.command, Command::Volume { .. } | Command::Identity { .. });
    let gf = match field {
        FieldSpec::Gf2k(f) => f,
        FieldSpec::Exact if exact_ok => Gf2kField::new(64)?,
        FieldSpec::Exact => {
            return Err(Error::InvalidArgument(format!(
                "`{}` supports only gf2k fields",
                report.command
            )))
        }
    };
    let cfg = TrialConfig::new(seed, common.trials).with_field(gf);
    let exact = field == FieldSpec::Exact;
    match &cli.command {
        Command::Analyze => analyze(k, &cfg, report),
        Command::Volume { monomial } => volume(k, &io::parse_monomial(monomial)?, &cfg, exact, report),
        Command::Identity {
            facet,
            gamma,
            tau,
            max_splits,
        } => {
            let split = match (facet, gamma, tau) {
                (Some(f), Some(g), Some(t)) => Some(Split::new(
                    k,
                    io::parse_face(f)?,
                    io::parse_face(g)?,
                    io::parse_face(t)?,
                )?),
                _ => None,
            };
            identity(k, split, *max_splits, &cfg, exact, report)
        }
        Command::Anisotropy { class, count } => {
            let class = class.as_deref().map(|c| io::parse_class(c, gf)).transpose()?;
            anisotropy(k, class, *count, &cfg, report)
        }
        Command::Lefschetz { strong, element, .. } => lefschetz(k, *strong, *element, &cfg, report),
        Command::Examples { .. } => Err(Error::InvalidArgument("examples does not produce a report".into())),
    }
}

fn require_sphere(k: &SimplicialComplex) -> Result<()> {
    if k.is_homology_sphere_f2() {
        Ok(())
    } else {
        Err(Error::Hypothesis("input is not a homology sphere over GF(2)".into()))
    }
}

fn require_pseudomanifold(k: &SimplicialComplex) -> Result<()> {
    if k.is_pseudomanifold() {
        Ok(())
    } else {
        Err(Error::NotNormalPseudomanifold("input is not a pseudomanifold".into()))
    }
}

fn analyze(k: &SimplicialComplex, cfg: &TrialConfig, report: &mut Report) -> Result<()> {
    let h = k.h_vector()?;
    let sphere = k.is_homology_sphere_f2();
    let mut dims = Vec::new();
    let mut cert = Certificate::new("graded-dimensions", DegreeBounds::one_sided(cfg.field.k()));
    for t in 0..cfg.trials {
        let (seed, d) = cfg.run(t, |seed| {
            let s = Specialization::for_complex(k, cfg.field, seed)?;
            Ok(ChowRing::new(k, &s.frame)?.dims())
        })?;
        cert.seeds.push(seed);
        dims.push(d);
    }
    let matches_h = dims.iter().all(|d| d.iter().map(|&x| x as i64).eq(h.iter().copied()));
    cert.passed = !sphere || matches_h;
    report.details = json!({
        "palindromic": is_palindromic(&h),
        "homology_sphere": sphere,
        "graded_dims": dims,
        "dims_match_h": matches_h,
    });
    report.checks.push(cert);
    report.finish_checks();
    Ok(())
}

fn volume(k: &SimplicialComplex, z: &Monomial, cfg: &TrialConfig, exact: bool, report: &mut Report) -> Result<()> {
    require_pseudomanifold(k)?;
    let d = k.pure_rank()?;
    if z.degree() != d {
        return Err(Error::DegreeMismatch {
            expected: d,
            got: z.degree(),
        });
    }
    if exact {
        let frame = GenericFrame::exact(k.vertices().iter().copied(), d)?;
        let vol = VolumeFunctional::new(k, &frame, frame.aux_point())?;
        let value = vol.vol_monomial(z)?;
        let point_free = (0..d as u32).all(|j| value.partial(Var::aux(j)).is_zero_rf());
        report.details = json!({ "monomial": z.to_string(), "volume": format!("{value:?}"), "point_free": point_free });
        report.passed = point_free;
        if !point_free {
            report.fail(Outcome::CheckFailure, "volume depends on the auxiliary point");
        }
        return Ok(());
    }
    let facets = k.facets().len();
    let bound = 2 * degree_bound(facets, d, z.degree(), 0);
    let mut cert = Certificate::new("volume", DegreeBounds::new(bound, cfg.field.k(), cfg.trials));
    cert.faces.insert("support".into(), z.support().vertices().to_vec());
    for t in 0..cfg.trials {
        let (seed, (a, b)) = cfg.run(t, |seed| {
            let s = Specialization::for_complex(k, cfg.field, seed)?;
            let other = random_point(cfg.field, d, seed.rotate_left(17) ^ 0x5eed);
            let a = VolumeFunctional::new(k, &s.frame, s.point.clone())?.vol_monomial(z)?;
            let b = VolumeFunctional::new(k, &s.frame, other)?.vol_monomial(z)?;
            Ok((a, b))
        })?;
        cert.seeds.push(seed);
        cert.value("volume", &a);
        cert.value("volume_second_point", &b);
    }
    cert.passed = cert.values_hex["volume"] == cert.values_hex["volume_second_point"];
    report.details = json!({ "monomial": z.to_string() });
    report.checks.push(cert);
    report.finish_checks();
    Ok(())
}

fn spread<T: Clone>(items: &[T], n: usize) -> Vec<T> {
    if items.len() <= n {
        return items.to_vec();
    }
    (0..n).map(|i| items[i * items.len() / n].clone()).collect()
}

fn identity(
    k: &SimplicialComplex,
    split: Option<Split>,
    max_splits: usize,
    cfg: &TrialConfig,
    exact: bool,
    report: &mut Report,
) -> Result<()> {
    require_pseudomanifold(k)?;
    let splits = match split {
        Some(s) => vec![s],
        None => spread(&Split::all(k)?, max_splits.max(1)),
    };
    if exact {
        let d = k.pure_rank()?;
        let frame = GenericFrame::exact(k.vertices().iter().copied(), d)?;
        let y = frame.aux_point();
        let s = &splits[0];
        let (lhs, rhs) = main_identity_sides(k, &frame, &y, s)?;
        let holds = lhs.add(&rhs).is_zero_rf();
        report.details = json!({ "split": s, "lhs": format!("{lhs:?}"), "rhs": format!("{rhs:?}"), "holds": holds });
        report.passed = holds;
        if !holds {
            report.fail(Outcome::CheckFailure, "identity fails symbolically");
        }
        return Ok(());
    }
    let mut details = Vec::new();
    for s in &splits {
        let check = check_main_identity(k, s, cfg)?;
        report.checks.push(check.certificate());
        details.push(json!({ "kind": check.kind, "split": check.split, "passed": check.passed }));
    }
    report.details = Value::Array(details);
    report.finish_checks();
    Ok(())
}

fn anisotropy(
    k: &SimplicialComplex,
    class: Option<crate::artinian::ChowClass<crate::scalar::Gf2k>>,
    count: usize,
    cfg: &TrialConfig,
    report: &mut Report,
) -> Result<()> {
    require_sphere(k)?;
    let e = middle_degree(k)?;
    let classes = match class {
        Some(u) => vec![u],
        None => {
            let s = Specialization::for_complex(k, cfg.field, cfg.seed)?;
            (0..count as u64)
                .map(|i| random_nonzero_class(k, &s.frame, e, cfg.seed.wrapping_add(i << 8)))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let mut details = Vec::new();
    for u in &classes {
        let c = certify_anisotropy(k, u, cfg)?;
        report.checks.push(c.certificate());
        details.push(
            json!({ "class": c.u, "split": c.split, "derivative_value": c.derivative_value, "passed": c.passed }),
        );
    }
    report.details = Value::Array(details);
    report.finish_checks();
    Ok(())
}

fn lefschetz(
    k: &SimplicialComplex,
    strong: bool,
    element: ElementArg,
    cfg: &TrialConfig,
    report: &mut Report,
) -> Result<()> {
    require_sphere(k)?;
    let choice = match element {
        ElementArg::Random => ElementChoice::Random,
        ElementArg::Suspension => ElementChoice::Suspension,
    };
    let r = if strong {
        strong_lefschetz_check(k, &choice, cfg)?
    } else {
        weak_lefschetz_check(k, &choice, cfg)?
    };
    let kind = if strong { "strong-lefschetz" } else { "weak-lefschetz" };
    let mut cert = Certificate::new(kind, DegreeBounds::one_sided(cfg.field.k()));
    cert.seeds = r.seeds();
    for t in &r.trials {
        for x in t.element.terms().map(|(_, c)| c) {
            cert.value("element", x);
        }
    }
    cert.passed = r.passed;
    report.details = serde_json::to_value(&r).map_err(|e| Error::Io(e.to_string()))?;
    report.checks.push(cert);
    report.finish_checks();
    Ok(())
}

/// Text output of `glab examples`.
pub fn examples(action: &ExamplesAction) -> Result<String> {
    match action {
        ExamplesAction::List => {
            let mut out = String::new();
            for name in corpus::EXAMPLE_NAMES {
                let k = corpus::builtin(name)?;
                let h = k.h_vector()?;
                out.push_str(&format!("{name}\tf={:?}\th={h:?}\n", k.f_vector()));
            }
            Ok(out)
        }
        ExamplesAction::Emit { name, format } => {
            let k = corpus::builtin(name)?;
            Ok(match format {
                EmitFormat::Json => io::to_json(&k) + "\n",
                EmitFormat::Text => io::to_text(&k),
            })
        }
    }
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with(cli: Cli, out: &mut impl std::io::Write, err: &mut impl std::io::Write) -> i32 {
    if let Command::Examples { action } = &cli.command {
        return match examples(action) {
            Ok(text) => {
                let _ = write!(out, "{text}");
                0
            }
            Err(e) => {
                let _ = writeln!(err, "glab: {e}");
                Outcome::of_error(&e).exit_code()
            }
        };
    }
    let report = run(&cli);
    let text = report.to_json();
    match &cli.common.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                let _ = writeln!(err, "glab: cannot write {}: {e}", path.display());
                return Outcome::InputError.exit_code();
            }
            let _ = writeln!(
                out,
                "{} {}: {} check(s), seed {}",
                report.command,
                if report.passed { "PASS" } else { "FAIL" },
                report.checks.len(),
                report.seed
            );
        }
        None => {
            let _ = writeln!(out, "{text}");
        }
    }
    if let Some(m) = &report.message {
        let _ = writeln!(err, "glab: {m}");
    }
    report.outcome.exit_code()
}
