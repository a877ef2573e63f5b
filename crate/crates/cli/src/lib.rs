//! Library side of the `lacunary` binary: argument parsing, configuration,
//! the five subcommands, and the certificate document format.

pub mod config;

use std::fmt::Write as _;
use std::fs;

use clap::{Parser, Subcommand};
use lacunary_core::measure::{self, BracketOutcome, TargetVerdict};
use lacunary_core::schedule::{validate_growth, GrowthWindow};
use lacunary_core::witness::Order;
use lacunary_core::{AlgebraicTarget, BigInt, Op, Rational, RationalInterval, WitnessCertificate};
use serde::{Deserialize, Serialize};

pub use config::{Overrides, RatioArg, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Decimal places of the root enclosure built from `--poly`.
const TARGET_WIDTH_DIGITS: u32 = 30;

#[derive(Parser, Debug)]
#[command(name = "lacunary", version, about = "Exact checks for lacunary series and their composites")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Decimal expansions of both series and all four composites
    Digits,
    /// Convergents p_n/q_n of both series and the selected composite
    Convergents,
    /// Witness certificate for the selected composite, as canonical JSON
    Witness,
    /// Approximation-measure bound and n1 bracketing
    Measure,
    /// Growth-window report for the exponent schedule
    Validate,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] lacunary_core::Error),
    #[error("cannot write output: {0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use lacunary_core::Error as E;
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Core(e) if e.is_budget() => EXIT_BUDGET,
            CliError::Core(E::InvalidArgument(_) | E::NonIntegralExponent { .. } | E::NoSignChange) => EXIT_CONFIG,
            CliError::Core(_) | CliError::Io(_) | CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

/// The `witness` output: a certificate plus the configuration that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: RunConfig,
    pub certificate: WitnessCertificate,
}

impl CertificateDocument {
    pub fn new(config: RunConfig, certificate: WitnessCertificate) -> Self {
        CertificateDocument {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            certificate,
        }
    }

    /// Compact JSON with keys in declaration order and a trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("certificate documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad certificate document: {e}")))
    }
}

/// Runs a parsed command line; the output goes to `--out` when given,
/// otherwise it is returned for the caller to print.
pub fn run(cli: &Cli) -> Result<Option<String>, CliError> {
    let config = cli.overrides.resolve()?;
    let text = execute(cli.command, &config)?;
    match &cli.overrides.out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

pub fn execute(command: Command, config: &RunConfig) -> Result<String, CliError> {
    match command {
        Command::Digits => cmd_digits(config),
        Command::Convergents => cmd_convergents(config),
        Command::Witness => Ok(cmd_witness(config)?.to_canonical_json()),
        Command::Measure => cmd_measure(config),
        Command::Validate => cmd_validate(config),
    }
}

pub fn cmd_digits(config: &RunConfig) -> Result<String, CliError> {
    if config.digits == 0 {
        return Err(CliError::Config("digits must be positive".into()));
    }
    let schedule = config.schedule()?;
    let c = config.composite_with(Op::Sum, &schedule)?;
    let mut out = String::new();
    for (name, s) in [("theta1", c.s1()), ("theta2", c.s2())] {
        writeln!(out, "{name} (g={}): {}", s.base(), s.decimal_digits(config.digits)?).unwrap();
    }
    for op in Op::ALL {
        let c = config.composite_with(op, &schedule)?;
        writeln!(out, "{op}: {}", c.decimal_digits(config.digits)?).unwrap();
    }
    Ok(out)
}

pub fn cmd_convergents(config: &RunConfig) -> Result<String, CliError> {
    let c = config.composite()?;
    let mut out = String::new();
    for n in config.n_from.max(1)..=config.n_to {
        writeln!(out, "n={n} a_n={}", c.schedule().exponent(n)?).unwrap();
        let p1 = c.s1().partial_sum(n)?;
        let p2 = c.s2().partial_sum(n)?;
        let pc = c.convergent(n)?;
        writeln!(out, "  theta1 = {}/{}", p1.p, p1.q).unwrap();
        writeln!(out, "  theta2 = {}/{}", p2.p, p2.q).unwrap();
        writeln!(out, "  {} = {}/{}", c.op(), pc.p, pc.q).unwrap();
    }
    Ok(out)
}

pub fn cmd_witness(config: &RunConfig) -> Result<CertificateDocument, CliError> {
    let c = config.composite()?;
    let cert = c.certify(config.d.0, config.n_from..=config.n_to)?;
    Ok(CertificateDocument::new(config.clone(), cert))
}

fn symbol(o: Order) -> &'static str {
    match o {
        Order::Less => "<",
        Order::Equal => "=",
        Order::Greater => ">",
    }
}

fn degree(config: &RunConfig) -> Result<u32, CliError> {
    let d = config.d.0;
    if !d.is_integer() || *d.numer() < 2 || *d.numer() > u64::from(u32::MAX) {
        return Err(CliError::Config(format!("measure needs an integer degree d >= 2, got {}", config.d)));
    }
    Ok(*d.numer() as u32)
}

pub fn cmd_measure(config: &RunConfig) -> Result<String, CliError> {
    let target = AlgebraicTarget::new(degree(config)?, config.height)?;
    let c = config.composite()?;
    let mut bound = measure::approximation_measure(&target);
    let bracketing = measure::scan_n1(&c, &target, config.n_to)?;
    if let BracketOutcome::Found { n1 } = bracketing.outcome {
        bound = bound.with_n1(n1);
    }
    let mut out = String::new();
    for line in &bound.trace {
        writeln!(out, "{line}").unwrap();
    }
    writeln!(out, "bound = {}", bound.instantiated).unwrap();
    writeln!(out, "denominator = {}", bound.bound.denom()).unwrap();

    let pair = c.s1().base() * c.s2().base();
    let square = &bracketing.scale * &bracketing.scale;
    writeln!(out, "bracketing (g1g2)^(a_n/2) < 2Hd^2 < (g1g2)^(a_(n+1)/2), squared:").unwrap();
    for row in &bracketing.rows {
        let an = c.schedule().exponent(row.n)?;
        let next = c.schedule().exponent(row.n + 1)?;
        writeln!(
            out,
            "  n={}: {pair}^{an} {} {square}; {square} {} {pair}^{next}",
            row.n,
            symbol(row.left),
            symbol(row.right)
        )
        .unwrap();
    }
    match &bracketing.outcome {
        BracketOutcome::Found { n1 } => {
            writeln!(out, "n1 = {n1}").unwrap();
            if let Some(cons) = &bracketing.consequences {
                writeln!(out, "  (g1g2)^(a_(n1+1)) > 2Hd^2 (g1g2)^(d a_n1): {}", cons.gap_exceeds_scaled_power)
                    .unwrap();
                writeln!(out, "  (g1g2)^(a_(n1+1)/2) > (g1g2)^(d a_n1): {}", cons.half_power_dominates).unwrap();
            }
        }
        BracketOutcome::Tie { n, side } => {
            let e = lacunary_core::Error::TieEncountered { n: *n, side: *side };
            writeln!(out, "warning: {e}; no n1 reported").unwrap();
        }
        BracketOutcome::NotFound => writeln!(out, "n1: none for n <= {}", config.n_to).unwrap(),
    }

    if let Some(coeffs) = &config.poly {
        let (lo, hi) = config.bracket.ok_or_else(|| CliError::Config("--poly needs --bracket lo,hi".into()))?;
        let bracket = RationalInterval::new(Rational::from(lo.0), Rational::from(hi.0))?;
        let width = Rational::unit_fraction(lacunary_core::BigUint::from(10u32).pow(TARGET_WIDTH_DIGITS));
        let coeffs: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        let t = AlgebraicTarget::from_polynomial(&coeffs, &bracket, &width)?;
        let check = measure::check_against_target(&c, &t, config.depth)?;
        let xi = check.xi.lo().to_decimal_trunc(12);
        writeln!(out, "target: degree {}, height {}, xi ~ {xi}", t.degree(), t.height()).unwrap();
        let verdict = match check.verdict {
            TargetVerdict::Pass => "pass",
            TargetVerdict::BelowBound => "below bound",
            TargetVerdict::Indeterminate => "indeterminate (enclosures overlap)",
        };
        match &check.distance_lower {
            Some(d) => {
                writeln!(out, "  |{} - xi| >= {} at depth {}", c.op().symbol(), d.to_decimal_trunc(12), check.depth)
            }
            None => writeln!(out, "  |{} - xi|: no separation at depth {}", c.op().symbol(), check.depth),
        }
        .unwrap();
        writeln!(out, "  check: {verdict}").unwrap();
    }
    Ok(out)
}

pub fn cmd_validate(config: &RunConfig) -> Result<String, CliError> {
    let window = GrowthWindow::new(config.alpha.0, config.k.0)?;
    let schedule = config.schedule()?;
    let report = validate_growth(&schedule, &window, config.n_to)?;
    let mut out = String::new();
    writeln!(out, "window a_n^({}) <= a_(n+1) < a_n^({} * {})", config.alpha, config.k, config.alpha).unwrap();
    let mark = |holds: bool, tight: bool| match (holds, tight) {
        (true, true) => "ok (equal)",
        (true, false) => "ok",
        (false, _) => "FAIL",
    };
    for row in &report.rows {
        writeln!(
            out,
            "n={}: lower {}, upper {}",
            row.n,
            mark(row.lower.holds, row.lower.tight),
            mark(row.upper.holds, row.upper.tight)
        )
        .unwrap();
    }
    let failing = report.failing();
    if failing.is_empty() {
        writeln!(out, "all pass").unwrap();
    } else {
        let list: Vec<String> = failing.iter().map(usize::to_string).collect();
        writeln!(out, "failing: {}", list.join(", ")).unwrap();
    }
    Ok(out)
}
