use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Tradeoff,
    Simulate,
    Verify,
    Bounds,
    Compare,
    FieldTable,
    Figures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    SameCache,
    SameAccess,
}

/// A number or a list of numbers; `r` takes either form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

impl OneOrMany {
    pub fn to_vec(&self) -> Vec<usize> {
        match self {
            OneOrMany::One(x) => vec![*x],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// `t` as a number or `"all"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TSelect {
    One(usize),
    Keyword(String),
}

/// Everything that determines a run. Loaded from `--config` and then
/// overridden field by field with explicit flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    #[serde(rename = "C")]
    pub c: Option<usize>,
    pub r: Option<OneOrMany>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub t: Option<TSelect>,
    pub variant: Option<String>,
    pub s: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub mode: Option<Mode>,
    pub demands: Option<Vec<usize>>,
    pub grid: Option<Vec<String>>,
    pub samples: Option<usize>,
    pub fault: Option<String>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl RunConfig {
    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: RunConfig) -> RunConfig {
        overlay!(
            self, top, command, c, r, n, t, variant, s, seed, trials, out, format, mode, demands, grid, samples, fault
        );
        self
    }

    pub fn command(&self) -> Result<Command> {
        self.command.context("no command given (pass one as the first argument or in --config)")
    }

    pub fn caches(&self) -> Result<usize> {
        self.c.context("missing --C")
    }

    pub fn files(&self) -> Result<usize> {
        self.n.context("missing --N")
    }

    pub fn access(&self) -> Result<usize> {
        match self.r.as_ref().map(OneOrMany::to_vec).as_deref() {
            None => bail!("missing --r"),
            Some([r]) => Ok(*r),
            Some(_) => bail!("this command takes a single --r value"),
        }
    }

    pub fn access_list(&self) -> Option<Vec<usize>> {
        self.r.as_ref().map(OneOrMany::to_vec)
    }

    /// `None` means every `t`.
    pub fn t(&self) -> Result<Option<usize>> {
        match &self.t {
            None => Ok(None),
            Some(TSelect::One(t)) => Ok(Some(*t)),
            Some(TSelect::Keyword(k)) if k == "all" => Ok(None),
            Some(TSelect::Keyword(k)) => bail!("--t must be a number or \"all\", got {k:?}"),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

/// A comma-separated flag value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct List<T>(pub Vec<T>);

fn parse_list(s: &str) -> std::result::Result<List<usize>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(List)
}

fn parse_t(s: &str) -> std::result::Result<TSelect, String> {
    if s == "all" {
        return Ok(TSelect::Keyword(s.into()));
    }
    s.parse().map(TSelect::One).map_err(|e| format!("{s:?}: {e}"))
}

fn parse_strings(s: &str) -> std::result::Result<List<String>, String> {
    Ok(List(s.split(',').map(|x| x.trim().to_string()).collect()))
}

/// Secretive and demand-private coded caching over the multi-access
/// combinatorial topology.
#[derive(Debug, Parser)]
#[command(name = "seccache", version)]
pub struct Cli {
    /// Subcommand; may instead come from `--config`.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON RunConfig used as the base; explicit flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of caches.
    #[arg(long = "C")]
    pub c: Option<usize>,
    /// Caches per user, or a comma-separated list for `compare`.
    #[arg(long = "r", value_parser = parse_list)]
    pub r: Option<List<usize>>,
    /// Number of files.
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Scheme parameter `t`, or `all`.
    #[arg(long = "t", value_parser = parse_t)]
    pub t: Option<TSelect>,
    /// secrecy_privacy (sp), secrecy_only (s), rpkp, both or all.
    #[arg(long)]
    pub variant: Option<String>,
    /// Symbols per subfile.
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Output file, or directory for `simulate` and `figures`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Comma-separated demand vector, one file per user in lexicographic order.
    #[arg(long, value_parser = parse_list)]
    pub demands: Option<List<usize>>,
    /// Extra memory values for `bounds`, e.g. `13,27/2,20.5`.
    #[arg(long, value_parser = parse_strings)]
    pub grid: Option<List<String>>,
    /// Memory-shared envelope samples per `tradeoff` curve.
    #[arg(long)]
    pub samples: Option<usize>,
    /// none, zero-v, reuse-split or rank-deficient.
    #[arg(long)]
    pub fault: Option<String>,
}

impl Cli {
    /// The effective configuration: the `--config` file overlaid with flags.
    pub fn resolve(self) -> Result<RunConfig> {
        let base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            command: self.command,
            c: self.c,
            r: self.r.map(|l| OneOrMany::Many(l.0)),
            n: self.n,
            t: self.t,
            variant: self.variant,
            s: self.s,
            seed: self.seed,
            trials: self.trials,
            out: self.out,
            format: self.format,
            mode: self.mode,
            demands: self.demands.map(|l| l.0),
            grid: self.grid.map(|l| l.0),
            samples: self.samples,
            fault: self.fault,
        };
        Ok(base.overlay(flags))
    }
}
