//! Command-line parsing into a validated [`RunConfig`].

use std::ffi::OsString;

use clap::{Parser, ValueEnum};

use crate::arith::{check_exponent, PrimeBase, MAX_LIMIT};
use crate::error::{Error, Result};
use crate::report::Format;

pub const THREADS_ENV: &str = "SMOOTH_WORLD_THREADS";
pub const BUDGET_NODES_ENV: &str = "SMOOTH_WORLD_BUDGET_NODES";
pub const BUDGET_SECONDS_ENV: &str = "SMOOTH_WORLD_BUDGET_SECONDS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Subcommand {
    Color,
    Smooth,
    SchurSearch,
    SchurNumber,
    SchurCount,
    RamseyReduce,
    K2,
    Flt,
    Dm,
    Ap,
    Gaps,
    Density,
    Folkman,
    Theorem1,
    Theorem3,
    Theorem5,
    Theorem8,
    Suite,
}

impl Subcommand {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    fn default_limit(self) -> u64 {
        use Subcommand::*;
        match self {
            Color => 72,
            Smooth | Flt | Dm | Ap => 100,
            SchurCount => 100,
            RamseyReduce => 16,
            K2 => 0, // resolved from t and w
            Gaps => 10_000,
            Density => 1_000_000,
            Folkman => 10_000,
            SchurSearch | Theorem1 | Theorem3 | Theorem5 | Theorem8 | SchurNumber | Suite => 100_000,
        }
    }

    fn default_colors(self) -> u32 {
        match self {
            Subcommand::SchurNumber => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "smooth-world", version, about = "Monochromatic structure searches over a finite prime base")]
struct Cli {
    #[arg(value_enum)]
    command: Subcommand,
    /// Prime base, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    primes: Option<Vec<u64>>,
    /// Exponent n of the coloring and the power equations.
    #[arg(long)]
    exponent: Option<u32>,
    /// Search bound N (or B, Z depending on the subcommand).
    #[arg(long)]
    limit: Option<u64>,
    /// Palette size t.
    #[arg(long)]
    colors: Option<u32>,
    /// Folkman set size s.
    #[arg(long = "set-size")]
    set_size: Option<usize>,
    /// Number of K2 partners w.
    #[arg(long)]
    width: Option<usize>,
    /// Progression length L.
    #[arg(long)]
    length: Option<usize>,
    /// Integer to decompose (color subcommand).
    #[arg(long)]
    value: Option<u64>,
    /// Fixed difference d (gaps subcommand).
    #[arg(long)]
    difference: Option<u64>,
    /// Random colorings for the sweep subcommands.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long = "budget-nodes", env = BUDGET_NODES_ENV)]
    budget_nodes: Option<u64>,
    #[arg(long = "budget-seconds", env = BUDGET_SECONDS_ENV)]
    budget_seconds: Option<u64>,
    /// Record wall time in reports (makes output run-dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Subcommand,
    pub base: PrimeBase,
    pub n: u32,
    pub limit: u64,
    pub colors: u32,
    pub s: usize,
    pub w: usize,
    pub length: usize,
    pub value: Option<u64>,
    pub difference: Option<u64>,
    pub trials: u64,
    pub format: Format,
    pub threads: usize,
    pub seed: u64,
    pub budget_nodes: Option<u64>,
    pub budget_seconds: Option<u64>,
    pub timing: bool,
}

fn usage(e: Error) -> Error {
    match e {
        Error::Usage(_) => e,
        other => Error::Usage(other.to_string()),
    }
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<Self> {
        let command = cli.command;
        let base = PrimeBase::new(cli.primes.unwrap_or_else(|| vec![2, 3, 5])).map_err(usage)?;
        let n = cli.exponent.unwrap_or(3);
        check_exponent(n).map_err(usage)?;
        let colors = cli.colors.unwrap_or(command.default_colors());
        if colors == 0 {
            return Err(Error::Usage("--colors must be at least 1".into()));
        }
        let s = cli.set_size.unwrap_or(2);
        let w = cli.width.unwrap_or(4);
        if w == 0 {
            return Err(Error::Usage("--width must be at least 1".into()));
        }
        let limit = match cli.limit {
            Some(l) => l,
            None if command == Subcommand::K2 => {
                let g = crate::ramsey::guaranteed_universe_size(colors, w as u64).map_err(usage)?;
                u64::try_from(g).unwrap_or(u64::MAX)
            }
            None => command.default_limit(),
        };
        if limit == 0 {
            return Err(Error::Usage("--limit must be at least 1".into()));
        }
        if limit > MAX_LIMIT {
            return Err(Error::Usage(format!("--limit {limit} exceeds the cap 2^40")));
        }
        let threads = cli.threads.unwrap_or(1);
        if threads == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        Ok(RunConfig {
            command,
            base,
            n,
            limit,
            colors,
            s,
            w,
            length: cli.length.unwrap_or(3),
            value: cli.value,
            difference: cli.difference,
            trials: cli.trials.unwrap_or(100),
            format: cli.format,
            threads,
            seed: cli.seed,
            budget_nodes: cli.budget_nodes,
            budget_seconds: cli.budget_seconds,
            timing: cli.timing,
        })
    }

    /// Arguments (without the program name) that parse back to `self`.
    pub fn render(&self) -> Vec<String> {
        let primes: Vec<String> = self.base.primes().iter().map(u64::to_string).collect();
        let mut args = vec![
            self.command.name(),
            "--primes".into(),
            primes.join(","),
            "--exponent".into(),
            self.n.to_string(),
            "--limit".into(),
            self.limit.to_string(),
            "--colors".into(),
            self.colors.to_string(),
            "--set-size".into(),
            self.s.to_string(),
            "--width".into(),
            self.w.to_string(),
            "--length".into(),
            self.length.to_string(),
            "--trials".into(),
            self.trials.to_string(),
            "--format".into(),
            self.format.as_str().into(),
            "--threads".into(),
            self.threads.to_string(),
            "--seed".into(),
            self.seed.to_string(),
        ];
        let optional = [
            ("--value", self.value),
            ("--difference", self.difference),
            ("--budget-nodes", self.budget_nodes),
            ("--budget-seconds", self.budget_seconds),
        ];
        for (flag, v) in optional {
            if let Some(v) = v {
                args.push(flag.into());
                args.push(v.to_string());
            }
        }
        if self.timing {
            args.push("--timing".into());
        }
        args
    }
}

/// What the binary should do with a command line.
#[derive(Debug)]
pub enum Parsed {
    Run(RunConfig),
    /// `--help` / `--version` text, printed with exit status 0.
    Info(String),
}

/// Parses arguments (excluding the program name). Every failure is a
/// [`Error::Usage`].
pub fn parse_args<I, T>(args: I) -> Result<Parsed>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("smooth-world")).chain(args.into_iter().map(Into::into));
    match Cli::try_parse_from(argv) {
        Ok(cli) => RunConfig::from_cli(cli).map(Parsed::Run),
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                Ok(Parsed::Info(e.to_string()))
            }
            _ => Err(Error::Usage(e.to_string())),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<RunConfig> {
        match parse_args(args.iter().copied())? {
            Parsed::Run(c) => Ok(c),
            Parsed::Info(_) => panic!("unexpected info"),
        }
    }

    #[test]
    fn schur_number_defaults() {
        let c = run(&["schur-number", "--colors", "3"]).unwrap();
        assert_eq!((c.command, c.colors), (Subcommand::SchurNumber, 3));
    }

    #[test]
    fn theorem1_config() {
        let c = run(&["theorem1", "--primes", "2,3,5", "--exponent", "3", "--limit", "100000"]).unwrap();
        assert_eq!(c.command, Subcommand::Theorem1);
        assert_eq!(c.base.primes(), &[2, 3, 5]);
        assert_eq!((c.n, c.limit), (3, 100_000));
    }

    #[test]
    fn usage_errors() {
        for bad in [
            &["theorem1", "--primes", "2,9"][..],
            &["theorem1", "--exponent", "17"],
            &["theorem1", "--exponent", "0"],
            &["theorem1", "--limit", "1099511627777"],
            &["theorem1", "--bogus"],
            &["not-a-command"],
            &["theorem1", "--threads", "0"],
            &["theorem1", "--primes", "2,3,5,7,11,13,17,19,23,29,31,37,41,43,47,53,59"],
        ] {
            assert!(matches!(run(bad), Err(Error::Usage(_))), "{bad:?}");
        }
    }

    #[test]
    fn k2_limit_defaults_to_guarantee() {
        let c = run(&["k2", "--colors", "2", "--width", "2"]).unwrap();
        assert_eq!(c.limit, 12);
    }

    #[test]
    fn help_is_info() {
        assert!(matches!(parse_args(["--help"]), Ok(Parsed::Info(_))));
    }
}
