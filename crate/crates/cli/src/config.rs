use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use clap::Args;
use lacunary_core::{CompositeNumber, Op, PowerSchedule, Ratio};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// A positive rational written `u` or `u/v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RatioArg(pub Ratio<u64>);

impl FromStr for RatioArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (u, v) = match s.split_once('/') {
            Some((u, v)) => (u.trim(), v.trim()),
            None => (s, "1"),
        };
        let u: u64 = u.parse().map_err(|_| format!("bad rational {s:?}"))?;
        let v: u64 = v.parse().map_err(|_| format!("bad rational {s:?}"))?;
        if u == 0 || v == 0 {
            return Err(format!("rational {s:?} must be positive"));
        }
        Ok(RatioArg(Ratio::new(u, v)))
    }
}

impl fmt::Display for RatioArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for RatioArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RatioArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn ratio(n: u64) -> RatioArg {
    RatioArg(Ratio::from_integer(n))
}

/// Everything a run depends on. Defaults reproduce the worked example:
/// bases 2 and 3, `a_1 = 2`, `beta = 1`, `d = 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub g1: u64,
    pub g2: u64,
    pub a1: u64,
    pub beta: RatioArg,
    pub op: Op,
    pub d: RatioArg,
    pub n_from: usize,
    pub n_to: usize,
    pub digits: usize,
    pub alpha: RatioArg,
    pub k: RatioArg,
    pub height: u64,
    pub budget_bits: u32,
    /// Polynomial for a concrete measure target, constant term first.
    pub poly: Option<Vec<i64>>,
    pub bracket: Option<(RatioArg, RatioArg)>,
    pub depth: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            g1: 2,
            g2: 3,
            a1: 2,
            beta: ratio(1),
            op: Op::Sum,
            d: ratio(3),
            n_from: 1,
            n_to: 4,
            digits: 10,
            alpha: ratio(4),
            k: ratio(2),
            height: 1,
            budget_bits: lacunary_core::schedule::DEFAULT_BUDGET_BITS,
            poly: None,
            bracket: None,
            depth: 3,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn schedule(&self) -> Result<Arc<PowerSchedule>, CliError> {
        Ok(Arc::new(PowerSchedule::with_budget(self.a1, self.beta.0, self.budget_bits)?))
    }

    pub fn composite(&self) -> Result<CompositeNumber, CliError> {
        Ok(CompositeNumber::new(self.op, self.g1, self.g2, self.schedule()?)?)
    }

    pub fn composite_with(&self, op: Op, schedule: &Arc<PowerSchedule>) -> Result<CompositeNumber, CliError> {
        Ok(CompositeNumber::new(op, self.g1, self.g2, schedule.clone())?)
    }
}

/// Command-line overrides; any flag given wins over the config file.
#[derive(Args, Clone, Debug, Default)]
pub struct Overrides {
    /// JSON config file; missing keys take the built-in defaults
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<std::path::PathBuf>,
    #[arg(long, global = true)]
    pub g1: Option<u64>,
    #[arg(long, global = true)]
    pub g2: Option<u64>,
    #[arg(long, global = true)]
    pub a1: Option<u64>,
    /// Growth rate, `u` or `u/v`
    #[arg(long, global = true)]
    pub beta: Option<RatioArg>,
    /// sum, difference, product or quotient
    #[arg(long, global = true)]
    pub op: Option<Op>,
    /// Approximation exponent (witness) or algebraic degree (measure)
    #[arg(long, global = true)]
    pub d: Option<RatioArg>,
    #[arg(long, global = true)]
    pub n_from: Option<usize>,
    #[arg(long, global = true)]
    pub n_to: Option<usize>,
    #[arg(long, global = true)]
    pub digits: Option<usize>,
    #[arg(long, global = true)]
    pub alpha: Option<RatioArg>,
    #[arg(long, global = true)]
    pub k: Option<RatioArg>,
    #[arg(long, global = true)]
    pub height: Option<u64>,
    #[arg(long, global = true)]
    pub budget_bits: Option<u32>,
    /// Target polynomial coefficients, constant term first, comma separated
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub poly: Option<Vec<i64>>,
    /// Root bracket `lo,hi` for --poly
    #[arg(long, global = true, value_delimiter = ',')]
    pub bracket: Option<Vec<RatioArg>>,
    /// Enclosure depth for the target check
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Write the output here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,
}

impl Overrides {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { c.$f = v; } )* };
        }
        take!(g1, g2, a1, beta, op, d, n_from, n_to, digits, alpha, k, height, budget_bits, depth);
        if let Some(p) = &self.poly {
            c.poly = Some(p.clone());
        }
        if let Some(b) = &self.bracket {
            match b[..] {
                [lo, hi] => c.bracket = Some((lo, hi)),
                _ => return Err(CliError::Config("--bracket takes exactly two values lo,hi".into())),
            }
        }
        Ok(c)
    }
}
