use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::table::Format;

#[derive(Debug, Parser)]
#[command(name = "quadclass", version, about = "Class numbers of imaginary quadratic fields and family verification sweeps")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write records here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, value_name = "N", value_parser = parse_positive_usize)]
    pub workers: Option<usize>,
    /// Largest |D| for which reduced forms are enumerated.
    #[arg(long, global = true, value_name = "B", value_parser = parse_count::<u128>)]
    pub enum_bound: Option<u128>,
    /// Largest class number for which group structure and witnesses are computed.
    #[arg(long, global = true, value_name = "B", value_parser = parse_count::<u64>)]
    pub struct_bound: Option<u64>,
    /// Pollard rho iteration budget per factorization.
    #[arg(long, global = true, value_name = "E", value_parser = parse_count::<u64>)]
    pub effort: Option<u64>,
    /// Largest exponent y examined by the Diophantine solvers.
    #[arg(long, global = true, value_name = "Y", value_parser = parse_count::<u32>)]
    pub ymax: Option<u32>,
    /// Use only the local cache for database cross-checks.
    #[arg(long, global = true)]
    pub offline: bool,
    /// Suppress progress messages on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
}

/// A field given by its squarefree radicand or a form discriminant.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct FieldArg {
    /// Squarefree d < 0; the field is Q(sqrt(d)).
    #[arg(short = 'd', long = "field", allow_negative_numbers = true)]
    pub field: Option<i128>,
    /// Negative discriminant D = 0, 1 (mod 4).
    #[arg(short = 'D', long = "disc", allow_negative_numbers = true)]
    pub disc: Option<i128>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Comma-separated odd primes; `a..b` expands to the primes in range.
    #[arg(long = "p", default_value = "3,5,7")]
    pub p: String,
    #[arg(long = "q", default_value = "3,5,7,11,13")]
    pub q: String,
    #[arg(long = "r-max", default_value_t = 2)]
    pub r_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum FibVariant {
    /// `(F_{j-2e}, L_{j+e}, F_j)`.
    #[default]
    Set,
    /// `(F_{j-e}, L_{j+e}, F_j)`.
    Lemma,
}

#[derive(Debug, Clone, Args)]
pub struct EquationArgs {
    /// lambda^2, one of 1, 2, 4.
    #[arg(long = "lambda2")]
    pub lambda2: u64,
    #[arg(long)]
    pub d1: u64,
    #[arg(long)]
    pub d2: u64,
    #[arg(long)]
    pub k: u64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Class number by reduced-form enumeration.
    Classnum {
        #[command(flatten)]
        field: FieldArg,
        /// Also list the reduced forms.
        #[arg(long)]
        forms: bool,
    },
    /// Elementary divisors and generators of the form class group.
    Classgroup {
        #[command(flatten)]
        field: FieldArg,
    },
    /// p | h(Q(sqrt(1 - 2m^p))) for m = q^r, with order-p witness and pth-power check.
    #[command(name = "verify-thm1")]
    VerifyThm1 {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Both class numbers of Q(sqrt(d)), Q(sqrt(d + 1)) with d = 4(1 - 2m^p)^p.
    #[command(name = "verify-pairs")]
    VerifyPairs {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// k | h(Q(sqrt(1 - 4U^k))).
    Louboutin {
        /// Range `a..b` (inclusive) or list of U.
        #[arg(long = "u", default_value = "2..10")]
        u: String,
        /// Comma-separated odd k.
        #[arg(long = "k", default_value = "3,5")]
        k: String,
    },
    /// Solutions of D1 x^2 + D2 = lambda^2 k^y with y <= --ymax.
    Dioph {
        #[command(flatten)]
        eq: EquationArgs,
        #[arg(long, value_enum, default_value_t = FibVariant::Set)]
        fib_variant: FibVariant,
    },
    /// Scan D x^2 + 1 = 2 q^y for instances with two or more solutions.
    Lemma23 {
        /// Range `a..b` (inclusive) of D, each D > 3.
        #[arg(long = "d", default_value = "4..2000")]
        d: String,
        #[arg(long = "q", default_value = "3..97")]
        q: String,
    },
    /// Exceptional-list and family membership of (lambda^2, D1, D2, k).
    Families {
        #[command(flatten)]
        eq: EquationArgs,
        #[arg(long, value_enum, default_value_t = FibVariant::Set)]
        fib_variant: FibVariant,
    },
    /// Prime powers m = q^r with p | h(Q(sqrt(1 - 2m^p))).
    #[command(name = "scan-s")]
    ScanS {
        #[arg(long = "p", default_value_t = 3)]
        p: u32,
        #[arg(long = "q-max", default_value_t = 13)]
        q_max: u64,
        #[arg(long = "r-max", default_value_t = 2)]
        r_max: u32,
    },
    /// Integer points on y^2 = (1 - 2x^p) / d0.
    Siegel {
        #[arg(long = "d0", allow_negative_numbers = true)]
        d0: i64,
        #[arg(long = "p", default_value_t = 3)]
        p: u32,
        #[arg(long = "x-max", default_value_t = 1000)]
        x_max: u64,
    },
    /// Compare local class numbers with the remote database.
    Crosscheck {
        /// Squarefree d < 0 (repeatable).
        #[arg(short = 'd', long = "field", allow_negative_numbers = true)]
        field: Vec<i128>,
        /// Fundamental discriminant (repeatable).
        #[arg(short = 'D', long = "disc", allow_negative_numbers = true)]
        disc: Vec<i128>,
    },
}

/// Accepts plain integers, `_` separators and `AeB` shorthand such as `1e15`.
pub fn parse_count<T: TryFrom<u128>>(s: &str) -> Result<T, String> {
    let s = s.replace('_', "");
    let value = match s.split_once(['e', 'E']) {
        Some((mant, exp)) => {
            let mant: u128 = mant.parse().map_err(|_| format!("invalid number {s:?}"))?;
            let exp: u32 = exp.parse().map_err(|_| format!("invalid exponent in {s:?}"))?;
            10u128
                .checked_pow(exp)
                .and_then(|p| p.checked_mul(mant))
                .ok_or_else(|| format!("{s} overflows"))?
        }
        None => s.parse().map_err(|_| format!("invalid number {s:?}"))?,
    };
    if value == 0 {
        return Err("must be positive".into());
    }
    T::try_from(value).map_err(|_| format!("{s} is out of range"))
}

fn parse_positive_usize(s: &str) -> Result<usize, String> {
    parse_count::<usize>(s)
}

/// Inclusive range `a..b` (also `a..=b`) or a single value.
pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let s = s.trim();
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: u64 = lo.trim().parse().map_err(|_| format!("invalid range {s:?}"))?;
    let hi: u64 = hi.trim().parse().map_err(|_| format!("invalid range {s:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

/// Comma-separated values; an item `a..b` expands to every integer in range,
/// or to the primes in range when `primes_only`.
pub fn parse_list(s: &str, primes_only: bool) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        if item.contains("..") {
            let (lo, hi) = parse_range(item)?;
            out.extend((lo..=hi).filter(|&n| !primes_only || quadclass_core::arith::is_prime_u64(n)));
        } else {
            out.push(item.parse().map_err(|_| format!("invalid list item {item:?}"))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_valid() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_field_argument() {
        let cli = Cli::try_parse_from(["quadclass", "classnum", "-d", "-23"]).unwrap();
        match cli.command {
            Command::Classnum { field, .. } => assert_eq!(field.field, Some(-23)),
            other => panic!("{other:?}"),
        }
        assert!(Cli::try_parse_from(["quadclass", "classnum"]).is_err());
        assert!(Cli::try_parse_from(["quadclass", "classnum", "-d", "-23", "-D", "-23"]).is_err());
    }

    #[test]
    fn global_flags_after_subcommand() {
        let cli = Cli::try_parse_from([
            "quadclass", "verify-thm1", "--p", "3", "--format", "json", "--workers", "8", "--enum-bound", "1e12",
        ])
        .unwrap();
        assert_eq!(cli.global.format, Format::Json);
        assert_eq!(cli.global.workers, Some(8));
        assert_eq!(cli.global.enum_bound, Some(1_000_000_000_000));
    }

    #[test]
    fn number_parsing() {
        assert_eq!(parse_count::<u64>("10_000"), Ok(10_000));
        assert_eq!(parse_count::<u64>("3e2"), Ok(300));
        assert!(parse_count::<u64>("0").is_err());
        assert!(parse_count::<u32>("1e12").is_err());
        assert_eq!(parse_range("4..2000"), Ok((4, 2000)));
        assert_eq!(parse_range("4..=7"), Ok((4, 7)));
        assert_eq!(parse_range("9"), Ok((9, 9)));
        assert!(parse_range("5..4").is_err());
        assert_eq!(parse_list("3,5,7", true), Ok(vec![3, 5, 7]));
        assert_eq!(parse_list("", true), Ok(vec![]));
        assert_eq!(parse_list("3..13", true), Ok(vec![3, 5, 7, 11, 13]));
        assert_eq!(parse_list("2..4", false), Ok(vec![2, 3, 4]));
    }
}
