//! Command dispatch for the `ptc` binary. [`run`] takes the full argument
//! list and returns the rendered output with an exit code, so it can be
//! driven from tests without spawning a process.

pub mod report;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use poincare_ptc::clifford::build_basis;
use poincare_ptc::expr::Sample;
use poincare_ptc::poincare::{
    build_generators, canonical_transform, charge_check, check_algebra, diagonalization_residual,
    exponential_form_residual, fs_transform, unitarity_residual, RepId,
};
use poincare_ptc::rep_calculus::{format_labels, helicity_check, massless_decompose, pair_count, parse_labels, ptc_complete};
use poincare_ptc::samples::{massive, massless, DEFAULT_SEED};
use poincare_ptc::symmetry::{classify, full_table, paper_expectation, DiscreteOpSpec, Verdict};
use serde::Serialize;

use report::*;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "ptc", version, about = "Discrete-symmetry checks for Poincaré-invariant wave equations")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Sample seed, decimal or 0x-hex.
    #[arg(long, global = true, env = "PTC_SEED", value_parser = parse_seed, default_value = "0x5eed")]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Relative singular-value threshold for nullspace rank decisions.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub rank_tol: f64,
    #[arg(long, global = true)]
    pub json: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, samples: 20, tol: 1e-9, rank_tol: 1e-8, json: false }
    }
}

impl RunConfig {
    fn echo(&self) -> ConfigEcho {
        ConfigEcho { seed: self.seed, samples: self.samples as usize, tol: self.tol, rank_tol: self.rank_tol }
    }

    fn samples(&self) -> Vec<Sample> {
        massive(self.seed, self.samples as usize)
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
    .map_err(|e| format!("invalid seed '{s}': {e}"))
}

#[derive(Debug, Clone)]
pub enum RepSelector {
    One(RepId),
    All,
}

fn parse_rep_selector(s: &str) -> Result<RepSelector, String> {
    if s.eq_ignore_ascii_case("all") {
        Ok(RepSelector::All)
    } else {
        s.parse().map(RepSelector::One)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clifford invariants, transform unitarity, diagonalization and the charge check.
    Selftest,
    /// Poincaré bracket closure for a generator set.
    Algebra {
        #[arg(long, value_parser = parse_rep_selector)]
        rep: RepSelector,
    },
    /// Invariance of one generator set under one discrete operator.
    Classify {
        #[arg(long, value_parser = |s: &str| s.parse::<RepId>())]
        rep: RepId,
        #[arg(long, value_parser = |s: &str| DiscreteOpSpec::by_name(s).ok_or(format!("unknown operator '{s}'")))]
        op: DiscreteOpSpec,
    },
    /// Invariance table over P1, P2, T1, T2, C, M, Mt, Mx, P1T2.
    Table {
        #[arg(long, value_parser = parse_rep_selector)]
        rep: RepSelector,
    },
    /// Helicity operators and label split at zero mass.
    Massless,
    /// PTC-completeness of a label sum such as "D+(1/2,0)+D-(0,1/2)".
    Ptc {
        #[arg(long)]
        labels: String,
    },
}

/// Rendered output and process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.config, &cli.command),
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            Outcome { output: e.render().to_string(), code }
        }
    }
}

fn emit<T: Serialize>(config: &RunConfig, command: &str, body: T, text: fn(&Envelope<T>) -> String, code: i32) -> Outcome {
    let envelope = Envelope { schema: SCHEMA, command: command.into(), config: config.echo(), body };
    let output = if config.json {
        serde_json::to_string_pretty(&envelope).expect("report types serialize") + "\n"
    } else {
        text(&envelope)
    };
    Outcome { output, code }
}

fn pass_code(passed: bool) -> i32 {
    if passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub fn execute(config: &RunConfig, command: &Command) -> Outcome {
    match command {
        Command::Selftest => selftest(config),
        Command::Algebra { rep } => algebra(config, rep),
        Command::Classify { rep, op } => classify_one(config, *rep, op),
        Command::Table { rep } => table(config, rep),
        Command::Massless => massless_cmd(config),
        Command::Ptc { labels } => ptc(config, labels),
    }
}

fn selftest(config: &RunConfig) -> Outcome {
    let samples = config.samples();
    let mut checks = Vec::new();
    let mut push = |name: &str, residual: f64| {
        checks.push(Check { name: name.into(), residual, passed: residual < config.tol });
    };
    for dim in [4, 8] {
        let ok = build_basis(dim).and_then(|b| b.validate()).is_ok();
        push(&format!("clifford dim {dim}"), if ok { 0.0 } else { f64::INFINITY });
    }
    push("U unitary", unitarity_residual(&canonical_transform(), &samples));
    push("U H U† = Γ₀E", diagonalization_residual(&samples));
    push("U exponential form", exponential_form_residual(&samples));
    push("U₁ unitary", unitarity_residual(&fs_transform(), &samples));
    push("[γ₀, rep3 generators]", charge_check(&build_generators(RepId::rep3(1)), &samples, config.tol).max_residual);
    let passed = checks.iter().all(|c| c.passed);
    emit(config, "selftest", SelftestBody { checks, passed }, render_selftest, pass_code(passed))
}

fn reps(selector: &RepSelector, all: &[RepId]) -> Vec<RepId> {
    match selector {
        RepSelector::One(r) => vec![*r],
        RepSelector::All => all.to_vec(),
    }
}

fn algebra(config: &RunConfig, selector: &RepSelector) -> Outcome {
    let samples = config.samples();
    let entries: Ordered<AlgebraEntry> = reps(selector, &RepId::all_positive())
        .into_iter()
        .map(|rep| {
            let r = check_algebra(&build_generators(rep), &samples, config.tol);
            let brackets = r.brackets.iter().map(|b| (format!("[{},{}]", b.left, b.right), b.residual)).collect();
            (rep.to_string(), AlgebraEntry { max_residual: r.max_residual, passed: r.passed, brackets })
        })
        .collect();
    let passed = entries.0.iter().all(|(_, e)| e.passed);
    emit(config, "algebra", AlgebraBody { reps: entries, passed }, render_algebra, pass_code(passed))
}

fn verdict_code<'a>(entries: impl IntoIterator<Item = &'a EntryJson>) -> i32 {
    let entries: Vec<_> = entries.into_iter().collect();
    if entries.iter().any(|e| e.verdict == Verdict::Indeterminate) {
        EXIT_INDETERMINATE
    } else {
        pass_code(entries.iter().all(|e| e.agrees() != Some(false)))
    }
}

fn classify_one(config: &RunConfig, rep: RepId, op: &DiscreteOpSpec) -> Outcome {
    let result = classify(&build_generators(rep), op, &config.samples(), config.rank_tol);
    let entry = EntryJson::new(&result, paper_expectation(rep, &op.name));
    let code = verdict_code([&entry]);
    let body = ClassifyBody { rep: rep.to_string(), op: op.name.clone(), result: entry };
    emit(config, "classify", body, render_classify, code)
}

fn table(config: &RunConfig, selector: &RepSelector) -> Outcome {
    let samples = config.samples();
    let all = [RepId::rep1(1), RepId::rep2(1), RepId::rep3(1), RepId::canonical8()];
    let tables: Ordered<Ordered<EntryJson>> = reps(selector, &all)
        .into_iter()
        .map(|rep| {
            let t = full_table(rep, &samples, config.rank_tol);
            (rep.to_string(), t.entries.iter().map(|e| (e.result.op.clone(), EntryJson::from_entry(e))).collect())
        })
        .collect();
    let code = verdict_code(tables.0.iter().flat_map(|(_, t)| t.0.iter().map(|(_, e)| e)));
    let matches_paper = code == EXIT_PASS;
    emit(config, "table", TableBody { tables, matches_paper }, render_table, code)
}

fn massless_cmd(config: &RunConfig) -> Outcome {
    let report = helicity_check(&massless(config.seed, config.samples as usize), config.tol);
    let labels: Vec<String> = massless_decompose().iter().map(|l| l.to_string()).collect();
    let pairs = pair_count(labels.len());
    let passed = report.passed && labels.len() == 8 && pairs == 28;
    let body = MasslessBody {
        commutators: report.commutators.iter().map(|(n, s, t)| (n.clone(), [*s, *t])).collect(),
        max_residual: report.max_residual,
        s_helicities: report.s_helicities,
        t_helicities: report.t_helicities,
        labels,
        pair_count: pairs,
        passed,
    };
    emit(config, "massless", body, render_massless, pass_code(passed))
}

fn ptc(config: &RunConfig, input: &str) -> Outcome {
    match parse_labels(input) {
        Ok(labels) => {
            let complete = ptc_complete(&labels);
            let body = PtcBody { labels: format_labels(&labels), complete };
            emit(config, "ptc", body, render_ptc, pass_code(complete))
        }
        Err(e) => {
            let caret = format!("{}^", " ".repeat(input[..e.position.min(input.len())].chars().count()));
            Outcome { output: format!("error: {e}\n  {input}\n  {caret}\n"), code: EXIT_USAGE }
        }
    }
}
