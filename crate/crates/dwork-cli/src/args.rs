//! Flags and their validation into a [`RunConfig`].

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use dwork_core::CMode;
use num_traits::Zero;
use symcore::Rat;

/// Largest n whose chart fits the t-variable namespace.
pub const MAX_N: usize = 8;
/// Largest h accepted by `cy3`.
pub const MAX_H: usize = 10;

#[derive(Parser, Debug)]
#[command(name = "dwork", version, about = "Modular vector fields of the Dwork family")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// dimension of the Calabi-Yau fibres
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// h = h^{21} for the `cy3` block construction
    #[arg(long, global = true)]
    pub h: Option<usize>,

    /// value of c_n: `matched`, `symbolic` or an exact rational such as -1/64
    #[arg(long = "cn", global = true, default_value = "matched")]
    pub cn: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// suite selection for `verify`
    #[arg(long, global = true, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,

    /// fixture directory (falls back to $DWORK_FIXTURES, then the shipped fixtures)
    #[arg(long, global = true)]
    pub fixtures: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// chart: slot map, dependent entries, relation, Omega
    Build,
    /// the modular vector field R and its Yukawa couplings
    Ra,
    /// the fields R_{g_ab}
    Basis,
    /// the sl2 triple (R, F, Hf)
    Sl2,
    /// weights and the quasi-homogeneity report
    Weights,
    /// bracket table report
    Brackets,
    /// symbolic group action t . g
    Action,
    /// decomposition of the truncated modular field
    Decompose,
    /// constant-matrix construction for threefolds with parameter h
    Cy3,
    /// run verification suites
    Verify,
    /// compare the fixture for n against computation
    Fixtures {
        /// print a fixture computed from scratch instead of comparing
        #[arg(long)]
        emit: bool,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    All,
    Sl2,
    Theorem2,
    Flatness,
    Action,
    Omega,
    Weights,
    Membership,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Omega, Suite::Theorem2, Suite::Sl2, Suite::Flatness, Suite::Action, Suite::Weights, Suite::Membership];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Sl2 => "sl2",
            Suite::Theorem2 => "theorem2",
            Suite::Flatness => "flatness",
            Suite::Action => "action",
            Suite::Omega => "omega",
            Suite::Weights => "weights",
            Suite::Membership => "membership",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    N(usize),
    H(usize),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub target: Target,
    pub c_mode: CMode,
    pub format: Format,
    pub suite: Suite,
    pub fixtures: Option<PathBuf>,
}

impl RunConfig {
    pub fn n(&self) -> Option<usize> {
        match self.target {
            Target::N(n) => Some(n),
            Target::H(_) => None,
        }
    }
}

pub fn parse_c(s: &str) -> Result<CMode, String> {
    match s {
        "matched" => Ok(CMode::Matched),
        "symbolic" => Ok(CMode::Symbolic),
        _ => {
            let r = Rat::from_str(s.trim()).map_err(|_| format!("--cn: `{}` is not matched, symbolic or a rational", s))?;
            if r.is_zero() {
                return Err("--cn: c must be nonzero".into());
            }
            Ok(CMode::Explicit(r))
        }
    }
}

impl TryFrom<Cli> for RunConfig {
    type Error = String;

    fn try_from(cli: Cli) -> Result<RunConfig, String> {
        let target = match (&cli.command, cli.n, cli.h) {
            (Command::Cy3, None, Some(h)) if (1..=MAX_H).contains(&h) => Target::H(h),
            (Command::Cy3, None, Some(h)) => return Err(format!("--h must lie in 1..={}, got {}", MAX_H, h)),
            (Command::Cy3, _, _) => return Err("cy3 takes --h and no --n".into()),
            (_, Some(n), None) if (1..=MAX_N).contains(&n) => Target::N(n),
            (_, Some(n), None) => return Err(format!("--n must lie in 1..={}, got {}", MAX_N, n)),
            _ => return Err("this command takes --n and no --h".into()),
        };
        Ok(RunConfig {
            command: cli.command,
            target,
            c_mode: parse_c(&cli.cn)?,
            format: cli.format,
            suite: cli.suite,
            fixtures: cli.fixtures,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> Result<RunConfig, String> {
        let cli = Cli::try_parse_from(std::iter::once("dwork").chain(args.iter().copied())).map_err(|e| e.to_string())?;
        RunConfig::try_from(cli)
    }

    #[test]
    fn targets() {
        assert_eq!(cfg(&["ra", "--n", "3"]).unwrap().target, Target::N(3));
        assert_eq!(cfg(&["cy3", "--h", "2"]).unwrap().target, Target::H(2));
        assert!(cfg(&["ra", "--n", "0"]).is_err());
        assert!(cfg(&["ra", "--n", "9"]).is_err());
        assert!(cfg(&["ra"]).is_err());
        assert!(cfg(&["ra", "--n", "2", "--h", "1"]).is_err());
        assert!(cfg(&["cy3", "--n", "3"]).is_err());
        assert!(cfg(&["cy3", "--h", "11"]).is_err());
    }

    #[test]
    fn c_modes() {
        assert_eq!(parse_c("matched").unwrap(), CMode::Matched);
        assert_eq!(parse_c("symbolic").unwrap(), CMode::Symbolic);
        assert_eq!(parse_c("-1/64").unwrap(), CMode::Explicit(symcore::rat(-1, 64)));
        assert!(parse_c("0").is_err());
        assert!(parse_c("1/x").is_err());
    }

    #[test]
    fn flags_after_subcommand() {
        let c = cfg(&["verify", "--n", "2", "--suite", "sl2", "--format", "json", "--cn", "symbolic"]).unwrap();
        assert_eq!(c.suite, Suite::Sl2);
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.c_mode, CMode::Symbolic);
    }
}
