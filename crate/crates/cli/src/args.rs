use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::ops::Pow;
use rug::{Complex, Float, Integer};
use stieltjes::{ContourMode, Error, Method};

#[derive(Debug, Parser)]
#[command(name = "stieltjes", version, about = "Generalized Stieltjes constants γₙ(v) at arbitrary precision")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute γₙ(v) by quadrature.
    Compute(CommonArgs),
    /// Closed-form leading-order saddle approximation of γₙ(v).
    Asymptotic(CommonArgs),
    /// Sample the normalized integrand f(y)/f(0) on the quadrature grid.
    Profile(CommonArgs),
    /// Relative error against a fine-grid reference for h = h₀·2^-m.
    Convergence(ConvergenceArgs),
    /// Cross-check the direct rule against the Laurent-coefficient oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Order n: decimal digits or `10^k`.
    #[arg(long, value_parser = parse_order)]
    pub n: Integer,
    /// Parameter v, e.g. `1`, `0.5`, `2+3i`.
    #[arg(long, default_value = "1", value_parser = parse_param)]
    pub v: Param,
    /// Significant digits of the result.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub digits: u64,
    /// Starting node count (odd) instead of the schedule.
    #[arg(long = "M")]
    pub m: Option<u64>,
    #[arg(long, value_enum, default_value_t = EpsMode::Unit)]
    pub eps: EpsMode,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Cutoff q instead of the Gaussian estimate, e.g. `6.067e-48`.
    #[arg(long)]
    pub q: Option<String>,
    /// Rows m = 0..=levels; the reference is one level finer.
    #[arg(long, default_value_t = 4)]
    pub levels: u32,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Also check the stored 100-digit reference values.
    #[arg(long)]
    pub golden: bool,
    /// Reference values to use with `--golden` instead of the built-in set.
    #[arg(long)]
    pub golden_file: Option<PathBuf>,
    /// Digits required in the oracle comparison.
    #[arg(long, default_value_t = 50)]
    pub digits: u64,
    /// Largest order in the oracle comparison.
    #[arg(long, default_value_t = 10)]
    pub nmax: u32,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EpsMode {
    Unit,
    Steepest,
}

impl From<EpsMode> for ContourMode {
    fn from(m: EpsMode) -> Self {
        match m {
            EpsMode::Unit => ContourMode::Unit,
            EpsMode::Steepest => ContourMode::Steepest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Saddle,
    Direct,
    Asymptotic,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Saddle => Method::Saddle,
            MethodArg::Direct => Method::Direct,
            MethodArg::Asymptotic => Method::Asymptotic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

/// `n` as an exact integer: plain decimal digits or `10^k`.
pub fn parse_order(s: &str) -> Result<Integer, Error> {
    if s.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty order".into(),
        });
    }
    if let Some(k) = s.strip_prefix("10^") {
        let k = digits_at(k, 3)?;
        let k: u32 = k.parse().map_err(|_| Error::Parse {
            pos: 3,
            msg: "exponent too large".into(),
        })?;
        return Ok(Integer::from(10u32).pow(k));
    }
    Ok(digits_at(s, 0)?.parse().expect("validated digits"))
}

fn digits_at(s: &str, offset: usize) -> Result<&str, Error> {
    if s.is_empty() {
        return Err(Error::Parse {
            pos: offset,
            msg: "expected digits".into(),
        });
    }
    match s.bytes().position(|b| !b.is_ascii_digit()) {
        Some(p) => Err(Error::Parse {
            pos: offset + p,
            msg: format!("unexpected character {:?}", s[p..].chars().next().unwrap_or(' ')),
        }),
        None => Ok(s),
    }
}

/// A complex parameter kept as decimal text until the precision is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub text: String,
    re: String,
    im: String,
}

impl Param {
    pub fn to_complex(&self, prec: u32) -> Complex {
        let re = Float::with_val(prec, Float::parse(&self.re).expect("validated"));
        let im = Float::with_val(prec, Float::parse(&self.im).expect("validated"));
        Complex::with_val(prec, (re, im))
    }

    pub fn is_real(&self) -> bool {
        Float::parse(&self.im)
            .map(|p| Float::with_val(64, p).is_zero())
            .unwrap_or(false)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// `re`, `re+imi`, `re-imi`, `imi` (an empty `im` means 1).
pub fn parse_param(s: &str) -> Result<Param, Error> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    if t.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty parameter".into(),
        });
    }
    let (re, im, im_pos) = match t.strip_suffix('i') {
        None => (t, "0", 0),
        Some(body) => {
            let b = body.as_bytes();
            let split = (1..b.len())
                .rev()
                .find(|&k| (b[k] == b'+' || b[k] == b'-') && !matches!(b[k - 1], b'e' | b'E'));
            match split {
                Some(k) => (&body[..k], &body[k..], k),
                None => ("0", body, 0),
            }
        }
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    check_number(re, lead)?;
    check_number(im, lead + im_pos)?;
    Ok(Param {
        text: t.to_string(),
        re: re.trim_start_matches('+').to_string(),
        im: im.trim_start_matches('+').to_string(),
    })
}

fn check_number(s: &str, pos: usize) -> Result<(), Error> {
    let ok = !s.is_empty()
        && s.bytes().any(|b| b.is_ascii_digit())
        && s.bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'))
        && Float::parse(s).is_ok();
    if ok {
        Ok(())
    } else {
        Err(Error::Parse {
            pos,
            msg: format!("{s:?} is not a decimal number"),
        })
    }
}
