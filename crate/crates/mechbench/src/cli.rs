//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation error, 3 enumeration
//! cap exceeded, 4 counterexample found.

use std::fs;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mechbench_core::energy::{
    check_energy_condition, designer_preference, energy_matrix, simplified_matrix, EnergyParams,
};
use mechbench_core::equilibrium::{
    enumerate_bne, implements, search_space_size, DEFAULT_PROFILE_CAP,
};
use mechbench_core::game::StrategyFormat;
use mechbench_core::rational::parse_rational;
use mechbench_core::revelation::{is_truthful_bne, verify_revelation_principle, DirectMechanism};
use mechbench_core::{CoreError, Rational};
use serde_json::{json, Value};

use crate::document::{parse_instance, DocumentError, InstanceDocument};
use crate::fuzz::{direct_document, run_fuzz, FuzzConfig};
use crate::generate::{generate_instance, GeneratorConfig, PriorMode};
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_COUNTEREXAMPLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "mechbench",
    version,
    about = "Bayesian implementation and direct revelation workbench"
)]
struct Cli {
    /// Instance document to read (`-` or absent reads standard input).
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Report file; a directory for `direct` and `fuzz`.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, global = true, value_name = "N")]
    count: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Largest number of strategy profiles enumerated before giving up.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_PROFILE_CAP)]
    max_profiles: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Parse and validate an instance.
    Validate,
    /// Enumerate pure-strategy Bayesian Nash equilibria.
    Bne,
    /// Decide whether the mechanism implements the document's social choice function.
    Implements,
    /// Build the direct mechanism of every equilibrium and emit it as a document.
    Direct,
    /// Check that truth-telling is an equilibrium of a direct mechanism.
    Truthful,
    /// Enumerate equilibria, build direct mechanisms and check each is truthful.
    #[command(name = "verify-rp")]
    VerifyRp,
    /// Energy matrices, feasibility verdicts and designer preferences.
    Energy(EnergyArgs),
    /// Run seeded random instances through `verify-rp`.
    Fuzz(FuzzArgs),
    /// Emit one random instance.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
struct EnergyArgs {
    #[arg(long, value_name = "N")]
    agents: Option<usize>,
    /// Action energy E_a.
    #[arg(long, value_parser = rational_arg)]
    ea: Option<Rational>,
    /// Message energy E_m.
    #[arg(long, value_parser = rational_arg)]
    em: Option<Rational>,
    /// Sending energy E_send.
    #[arg(long, value_parser = rational_arg)]
    esend: Option<Rational>,
    /// Outcome-function evaluation energy E_g.
    #[arg(long, value_parser = rational_arg)]
    eg: Option<Rational>,
    /// Designer energy budget E_D.
    #[arg(long, value_parser = rational_arg)]
    budget: Option<Rational>,
    /// Restrict verdicts and preferences to one strategy format.
    #[arg(long, value_name = "oral|laborious", value_parser = format_arg)]
    strategy_format: Option<StrategyFormat>,
}

#[derive(Debug, Args)]
struct GeneratorArgs {
    #[arg(long, value_parser = prior_arg, default_value = "random-joint")]
    prior: PriorMode,
    /// Agent count range, `N` or `LO..HI` (inclusive).
    #[arg(long, value_parser = count_range, default_value = "1..3")]
    agents: RangeInclusive<usize>,
    #[arg(long, value_parser = count_range, default_value = "1..3")]
    types: RangeInclusive<usize>,
    #[arg(long, value_parser = count_range, default_value = "1..3")]
    strategies: RangeInclusive<usize>,
    #[arg(long, value_parser = count_range, default_value = "1..4")]
    outcomes: RangeInclusive<usize>,
    #[arg(long, value_parser = value_range, default_value = "-4..4", allow_hyphen_values = true)]
    utilities: RangeInclusive<i64>,
}

impl GeneratorArgs {
    fn config(&self, seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            seed,
            agents: self.agents.clone(),
            types: self.types.clone(),
            strategies: self.strategies.clone(),
            outcomes: self.outcomes.clone(),
            utilities: self.utilities.clone(),
            prior: self.prior,
        }
    }
}

#[derive(Debug, Args)]
struct FuzzArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn format_arg(s: &str) -> Result<StrategyFormat, String> {
    StrategyFormat::from_str(s).map_err(|e| e.to_string())
}

fn prior_arg(s: &str) -> Result<PriorMode, String> {
    PriorMode::from_str(s)
}

fn range<T: FromStr + PartialOrd + Copy>(s: &str) -> Result<RangeInclusive<T>, String> {
    let bad = || format!("`{s}` is not `N` or `LO..HI`");
    // the separator is searched after the first character so `-3..2` parses
    let (lo, hi) = match s.get(1..).and_then(|rest| rest.find("..")) {
        Some(at) => (&s[..at + 1], &s[at + 3..]),
        None => (s, s),
    };
    let lo: T = lo.parse().map_err(|_| bad())?;
    let hi: T = hi.parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(format!("range `{s}` is empty"));
    }
    Ok(lo..=hi)
}

fn count_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let r = range::<usize>(s)?;
    if *r.start() == 0 {
        return Err("counts start at 1".into());
    }
    Ok(r)
}

fn value_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    range(s)
}

/// A failed command: the exit code and a diagnostic for standard error.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn io(context: &str, e: io::Error) -> Self {
        Failure::new(EXIT_USAGE, format!("{context}: {e}"))
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

/// What a command produced: a report and its exit code.
struct Outcome {
    report: Value,
    code: i32,
    /// Instance documents are written as JSON whatever `--format` says.
    document: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome {
            report,
            code: EXIT_OK,
            document: false,
        }
    }

    fn failing(report: Value, code: i32) -> Self {
        Outcome {
            report,
            code,
            document: false,
        }
    }

    fn document(report: Value) -> Self {
        Outcome {
            document: true,
            ..Outcome::ok(report)
        }
    }
}

struct Context {
    cli: Cli,
}

impl Context {
    fn read_input(&self) -> Result<String, Failure> {
        match &self.cli.input {
            Some(p) if p.as_os_str() != "-" => fs::read_to_string(p)
                .map_err(|e| Failure::io(&format!("cannot read {}", p.display()), e)),
            _ => {
                let mut s = String::new();
                io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Failure::io("cannot read standard input", e))?;
                Ok(s)
            }
        }
    }

    fn load(&self) -> Result<InstanceDocument, Failure> {
        let text = self.read_input()?;
        parse_instance(&text).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))
    }

    fn cap(&self) -> u128 {
        self.cli.max_profiles
    }
}

/// Parses `args` (program name first) and runs the command. Reports go to
/// `out` unless `--output` names a file; diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let format = cli.format;
    let ctx = Context { cli };
    let result = match &ctx.cli.command {
        Command::Validate => validate(&ctx),
        Command::Bne => bne(&ctx),
        Command::Implements => implements_cmd(&ctx),
        Command::Direct => direct(&ctx),
        Command::Truthful => truthful(&ctx),
        Command::VerifyRp => verify_rp(&ctx),
        Command::Energy(a) => energy(&ctx, a),
        Command::Fuzz(a) => fuzz(&ctx, a),
        Command::Gen(a) => gen(&ctx, a),
    };
    match result {
        Ok(outcome) => {
            let rendered = match (format, outcome.document) {
                (OutputFormat::Json, _) | (_, true) => {
                    let mut s =
                        serde_json::to_string_pretty(&outcome.report).expect("report serializes");
                    s.push('\n');
                    s
                }
                (OutputFormat::Text, false) => report::to_text(&outcome.report),
            };
            match emit(&ctx, &rendered, out) {
                Ok(()) => outcome.code,
                Err(f) => {
                    let _ = writeln!(err, "mechbench: {}", f.message);
                    f.code
                }
            }
        }
        Err(f) => {
            let _ = writeln!(err, "mechbench: {}", f.message);
            f.code
        }
    }
}

/// Writes a report to the `--output` file, or to `out`. Commands that treat
/// `--output` as a directory print their report to `out`.
fn emit(ctx: &Context, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    let to_file = !matches!(ctx.cli.command, Command::Direct | Command::Fuzz(_));
    match &ctx.cli.output {
        Some(path) if to_file => fs::write(path, text)
            .map_err(|e| Failure::io(&format!("cannot write {}", path.display()), e)),
        _ => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::io("cannot write report", e)),
    }
}

type CommandResult = Result<Outcome, Failure>;

fn validate(ctx: &Context) -> CommandResult {
    let text = ctx.read_input()?;
    match parse_instance(&text) {
        Ok(doc) => {
            let env = &doc.environment;
            Ok(Outcome::ok(json!({
                "valid": true,
                "agents": env.agent_count(),
                "type_profiles": env.type_profiles().size(),
                "strategy_profiles": doc.mechanism.strategy_profiles().size(),
                "strategy_format": doc.mechanism.format().as_str(),
                "search_space": search_space_size(env, &doc.mechanism).to_string(),
                "has_scf": doc.scf.is_some(),
                "has_energy": doc.energy.is_some(),
            })))
        }
        Err(DocumentError::Invalid(v)) => {
            Ok(Outcome::failing(report::violations(&v), EXIT_INVALID))
        }
        Err(e) => Err(Failure::new(EXIT_INVALID, e.to_string())),
    }
}

fn bne(ctx: &Context) -> CommandResult {
    let doc = ctx.load()?;
    let (env, mech) = (&doc.environment, &doc.mechanism);
    let certs = enumerate_bne(env, mech, ctx.cap())?;
    Ok(Outcome::ok(json!({
        "search_space": search_space_size(env, mech).to_string(),
        "equilibrium_count": certs.len(),
        "equilibria": certs.iter().map(|c| report::certificate(env, mech, c)).collect::<Vec<_>>(),
    })))
}

fn implements_cmd(ctx: &Context) -> CommandResult {
    let doc = ctx.load()?;
    let (env, mech) = (&doc.environment, &doc.mechanism);
    let f = doc
        .scf
        .as_ref()
        .ok_or_else(|| Failure::new(EXIT_INVALID, "instance has no scf section"))?;
    let w = implements(env, mech, f, ctx.cap())?;
    Ok(Outcome::ok(json!({
        "implements": w.implements(),
        "social_choice_function": report::scf(env, f),
        "equilibria": w.certificates.iter().map(|c| report::certificate(env, mech, c)).collect::<Vec<_>>(),
    })))
}

fn direct(ctx: &Context) -> CommandResult {
    let doc = ctx.load()?;
    let reports = verify_revelation_principle(&doc.environment, &doc.mechanism, ctx.cap())?;
    let docs: Vec<InstanceDocument> = reports
        .iter()
        .map(|r| direct_document(&doc, r.direct.mechanism().clone(), r.scf.clone()))
        .collect();
    match &ctx.cli.output {
        Some(dir) => {
            let paths = write_directs(dir, &docs)?;
            Ok(Outcome::ok(json!({
                "direct_mechanisms": paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            })))
        }
        None => Ok(Outcome::document(json!({
            "direct_mechanisms": docs.iter().map(InstanceDocument::to_value).collect::<Vec<_>>(),
        }))),
    }
}

fn write_directs(dir: &Path, docs: &[InstanceDocument]) -> Result<Vec<PathBuf>, Failure> {
    let ctx = |e| Failure::io(&format!("cannot write to {}", dir.display()), e);
    fs::create_dir_all(dir).map_err(ctx)?;
    let mut paths = Vec::new();
    for (k, d) in docs.iter().enumerate() {
        let path = dir.join(format!("direct-{k}.json"));
        fs::write(&path, d.to_json()).map_err(ctx)?;
        paths.push(path);
    }
    Ok(paths)
}

fn truthful(ctx: &Context) -> CommandResult {
    let doc = ctx.load()?;
    let env = &doc.environment;
    let dm = DirectMechanism::from_mechanism(env, doc.mechanism.clone())?;
    Ok(match is_truthful_bne(env, &dm) {
        Ok(cert) => Outcome::ok(json!({
            "truthful": true,
            "certificate": report::certificate(env, dm.mechanism(), &cert),
        })),
        Err(m) => Outcome::failing(
            json!({ "truthful": false, "misreport": report::misreport(env, &m) }),
            EXIT_COUNTEREXAMPLE,
        ),
    })
}

fn verify_rp(ctx: &Context) -> CommandResult {
    let doc = ctx.load()?;
    let (env, mech) = (&doc.environment, &doc.mechanism);
    let reports = verify_revelation_principle(env, mech, ctx.cap())?;
    let holds = reports.iter().all(|r| r.holds());
    Ok(Outcome::failing(
        json!({
            "equilibrium_count": reports.len(),
            "holds": holds,
            "reports": reports.iter().map(|r| report::revelation(env, mech, r)).collect::<Vec<_>>(),
        }),
        if holds { EXIT_OK } else { EXIT_COUNTEREXAMPLE },
    ))
}

fn energy(ctx: &Context, a: &EnergyArgs) -> CommandResult {
    let doc = match &ctx.cli.input {
        Some(_) => Some(ctx.load()?),
        None => None,
    };
    let from_doc = doc.as_ref().and_then(|d| d.energy.clone());
    let pick =
        |flag: &Option<Rational>, stored: Option<&Rational>| flag.clone().or(stored.cloned());
    let action = pick(&a.ea, from_doc.as_ref().map(|p| &p.action))
        .ok_or_else(|| Failure::new(EXIT_USAGE, "--ea is required without an energy section"))?;
    let zero = Rational::from_integer(0.into());
    let params = EnergyParams::new(
        action,
        pick(&a.em, from_doc.as_ref().map(|p| &p.message)).unwrap_or_else(|| zero.clone()),
        pick(&a.esend, from_doc.as_ref().map(|p| &p.send)).unwrap_or_else(|| zero.clone()),
        pick(&a.eg, from_doc.as_ref().map(|p| &p.outcome_fn)).unwrap_or(zero),
    )?;
    let agents = a
        .agents
        .or(doc.as_ref().map(|d| d.environment.agent_count()))
        .ok_or_else(|| Failure::new(EXIT_USAGE, "--agents is required without --input"))?;
    let budget = pick(
        &a.budget,
        doc.as_ref().and_then(|d| d.designer_budget.as_ref()),
    );
    let formats: Vec<StrategyFormat> = match a.strategy_format {
        Some(f) => vec![f],
        None => StrategyFormat::ALL.to_vec(),
    };

    let mut feasibility = Vec::new();
    let mut preferences = Vec::new();
    for &f in &formats {
        if let Some(b) = &budget {
            feasibility.push(report::feasibility(&check_energy_condition(
                agents, &params, f, b,
            )?));
        }
        preferences.push(report::preference(&designer_preference(
            agents, &params, f,
        )?));
    }
    Ok(Outcome::ok(json!({
        "unit": report::ENERGY_UNIT,
        "parameters": report::energy_params(&params),
        "matrix": report::energy_matrix(&energy_matrix(agents, &params)?),
        "simplified_matrix": report::energy_matrix(&simplified_matrix(agents, &params.action)?),
        "feasibility": feasibility,
        "preferences": preferences,
    })))
}

fn fuzz(ctx: &Context, a: &FuzzArgs) -> CommandResult {
    let cfg = FuzzConfig {
        generator: a.generator.config(ctx.cli.seed.unwrap_or(0)),
        count: ctx.cli.count.unwrap_or(100),
        cap: ctx.cap(),
        failure_dir: ctx.cli.output.clone(),
    };
    let summary = run_fuzz(&cfg).map_err(|e| Failure::io("cannot persist failing instance", e))?;
    let failures: Vec<Value> = summary
        .failing()
        .map(|r| {
            json!({
                "iteration": r.iteration,
                "seed": r.seed,
                "problems": r.failures.iter().map(|f| f.describe()).collect::<Vec<_>>(),
                "file": r.persisted.as_ref().map(|p| p.display().to_string()),
            })
        })
        .collect();
    let capped: Vec<u64> = summary
        .results
        .iter()
        .filter(|r| r.cap_exceeded)
        .map(|r| r.seed)
        .collect();
    let code = if !summary.holds() {
        EXIT_COUNTEREXAMPLE
    } else if !capped.is_empty() {
        EXIT_CAP
    } else {
        EXIT_OK
    };
    Ok(Outcome::failing(
        json!({
            "base_seed": summary.base_seed,
            "instances": summary.instances(),
            "equilibria": summary.equilibria(),
            "prior": a.generator.prior.to_string(),
            "cap_exceeded_seeds": capped,
            "failures": failures,
            "holds": summary.holds(),
        }),
        code,
    ))
}

fn gen(ctx: &Context, a: &GenArgs) -> CommandResult {
    let cfg = a.generator.config(ctx.cli.seed.unwrap_or(0));
    cfg.check().map_err(|e| Failure::new(EXIT_USAGE, e))?;
    Ok(Outcome::document(generate_instance(&cfg).to_value()))
}
