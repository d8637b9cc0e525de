use std::fmt::Write as _;

use rug::{Complex, Float, Integer};
use serde::Serialize;
use stieltjes::dequad::{fit_cutoff, integrate_levels, m_schedule, profile, QuadPlan};
use stieltjes::mpkernel::{agreement_digits, cabs, Precision};
use stieltjes::oracle::gamma_oracle_all;
use stieltjes::saddle::{saddle_point_with, SaddleData};
use stieltjes::stieltjes::{gamma_direct_with, parameter_a, TARGET_MARGIN};
use stieltjes::{gamma, Error, GammaRequest, Method};

use crate::args::{parse_order, parse_param, CommonArgs, ConvergenceArgs, Format, Param, VerifyArgs};
use crate::golden::{self, matching_digits, GoldenEntry};
use crate::report::{sci, Report};
use crate::CliError;

/// Guard digits from `STIELTJES_PREC_GUARD`, if set.
pub fn guard_digits() -> Result<Option<u64>, CliError> {
    match std::env::var("STIELTJES_PREC_GUARD") {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| {
            CliError::Core(Error::Parse {
                pos: 0,
                msg: format!("STIELTJES_PREC_GUARD must be a non-negative integer, got {s:?}"),
            })
        }),
        Err(_) => Ok(None),
    }
}

fn request(args: &CommonArgs, method: Method) -> Result<GammaRequest, CliError> {
    let prec = stieltjes::mpkernel::digits_to_bits(args.digits + TARGET_MARGIN + 10);
    let mut req = GammaRequest::new(args.n.clone(), args.v.to_complex(prec), args.digits).method(method);
    req.contour_mode = args.eps.into();
    req.m_override = args.m;
    if let Some(g) = guard_digits()? {
        req.guard_digits = g;
    }
    Ok(req)
}

/// `compute` and `asymptotic`.
pub fn compute(args: &CommonArgs, method: Method) -> Result<String, CliError> {
    let req = request(args, method)?;
    let res = gamma(&req)?;
    let report = Report::new(&args.n, &args.v.text, args.digits, &res);
    Ok(match args.format {
        Format::Plain => report.to_plain(),
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    })
}

/// Saddle data and grid as the quadrature would use them for `args`.
fn saddle_grid(args: &CommonArgs, q: Option<&Float>) -> Result<(SaddleData, QuadPlan), CliError> {
    let req = request(args, Method::Saddle)?;
    let target = args.digits + TARGET_MARGIN;
    let precision = Precision::for_order(target, &req.n, req.guard_digits);
    let a = parameter_a(&req.v, precision.bits)?;
    let sd = saddle_point_with(&req.n, &a, precision, req.contour_mode)?;
    sd.endpoint_guard(target)?;
    let m = args.m.unwrap_or_else(|| m_schedule(args.digits));
    let plan = match q {
        Some(q) => QuadPlan::with_cutoff(&sd, target, q.clone(), m)?,
        None => fit_cutoff(&sd, QuadPlan::new(&sd, target, m)?)?,
    };
    Ok((sd, plan))
}

#[derive(Serialize)]
struct ProfileRow {
    y: String,
    re_ratio: String,
    im_ratio: String,
}

/// Normalized integrand `f(y)/f(0)` on the quadrature grid.
pub fn profile_cmd(args: &CommonArgs) -> Result<String, CliError> {
    let (sd, plan) = saddle_grid(args, None)?;
    let rows: Vec<ProfileRow> = profile(&sd, &plan)?
        .into_iter()
        .map(|(y, r)| ProfileRow {
            y: sci(&y, 17),
            re_ratio: sci(r.real(), 17),
            im_ratio: sci(r.imag(), 17),
        })
        .collect();
    Ok(match args.format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Csv => table(
            "y,re_ratio,im_ratio",
            ",",
            rows.iter().map(|r| [r.y.as_str(), &r.re_ratio, &r.im_ratio]),
        ),
        Format::Plain => table(
            "y re_ratio im_ratio",
            " ",
            rows.iter().map(|r| [r.y.as_str(), &r.re_ratio, &r.im_ratio]),
        ),
    })
}

#[derive(Serialize)]
struct ConvergenceRow {
    m: u32,
    h: String,
    rel_err: String,
}

/// Relative error of `I` at `h₀·2^{−m}` against one further halving.
pub fn convergence_cmd(args: &ConvergenceArgs) -> Result<String, CliError> {
    let common = &args.common;
    let q = match &args.q {
        Some(s) => {
            let prec = stieltjes::mpkernel::digits_to_bits(common.digits + 20);
            let parsed = Float::parse(s).map_err(|e| Error::Parse {
                pos: 0,
                msg: format!("bad cutoff {s:?}: {e}"),
            })?;
            Some(Float::with_val(prec, parsed))
        }
        None => None,
    };
    let (sd, plan) = saddle_grid(common, q.as_ref())?;
    let trace = integrate_levels(&sd, &plan, args.levels + 1)?;
    let reference = &trace.last().expect("at least one level").log_i;
    let rows: Vec<ConvergenceRow> = trace[..trace.len() - 1]
        .iter()
        .enumerate()
        .map(|(m, t)| {
            let d = Complex::with_val(plan.prec, &t.log_i - reference).exp() - 1u32;
            ConvergenceRow {
                m: m as u32,
                h: sci(&t.h, 17),
                rel_err: sci(&cabs(&d), 17),
            }
        })
        .collect();
    Ok(match common.format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Csv => table(
            "m,h,rel_err",
            ",",
            rows.iter().map(|r| [r.m.to_string(), r.h.clone(), r.rel_err.clone()]),
        ),
        Format::Plain => table(
            "m h rel_err",
            " ",
            rows.iter().map(|r| [r.m.to_string(), r.h.clone(), r.rel_err.clone()]),
        ),
    })
}

fn table<S: AsRef<str>>(header: &str, sep: &str, rows: impl Iterator<Item = [S; 3]>) -> String {
    let mut out = format!("{header}\n");
    for [a, b, c] in rows {
        let _ = writeln!(out, "{}{sep}{}{sep}{}", a.as_ref(), b.as_ref(), c.as_ref());
    }
    out
}

/// One line of the verify report.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub kind: &'static str,
    pub n: String,
    pub v: String,
    pub required: u64,
    /// Digits of agreement; capped at 9999 for exact matches.
    pub agreement: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub worst_agreement: f64,
}

impl VerifyReport {
    fn new(checks: Vec<Check>) -> Self {
        let failed = checks.iter().filter(|c| !c.pass).count();
        let worst = checks.iter().map(|c| c.agreement).fold(f64::INFINITY, f64::min);
        VerifyReport {
            passed: checks.len() - failed,
            failed,
            worst_agreement: if worst.is_finite() { worst } else { 0.0 },
            checks,
        }
    }

    fn summary(&self) -> String {
        format!(
            "{} passed, {} failed, worst agreement {:.1} digits",
            self.passed, self.failed, self.worst_agreement
        )
    }

    fn render(&self, format: Format) -> Result<String, CliError> {
        Ok(match format {
            Format::Json => serde_json::to_string_pretty(self)? + "\n",
            Format::Csv => {
                let mut out = String::from("kind,n,v,required,agreement,pass\n");
                for c in &self.checks {
                    let _ = writeln!(out, "{},{},{},{},{:.1},{}", c.kind, c.n, c.v, c.required, c.agreement, c.pass);
                }
                out
            }
            Format::Plain => {
                let mut out = String::new();
                for c in &self.checks {
                    let _ = writeln!(
                        out,
                        "{} {:<6} n={} v={} {:.1}/{} digits",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.kind,
                        c.n,
                        c.v,
                        c.agreement,
                        c.required
                    );
                }
                out + &self.summary() + "\n"
            }
        })
    }
}

const EXACT: f64 = 9999.0;

/// Direct rule against the oracle for `n ≤ nmax` at `v ∈ {½, 1, 2+3i}`.
pub fn oracle_checks(nmax: u32, digits: u64, guard: u64) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for text in ["0.5", "1", "2+3i"] {
        let v = parse_param(text)?;
        let prec = stieltjes::mpkernel::digits_to_bits(digits + 40);
        let vz = v.to_complex(prec);
        let oracle = gamma_oracle_all(nmax, &vz, digits + TARGET_MARGIN)?;
        let a = parameter_a(&vz, prec)?;
        for (n, want) in oracle.gammas.iter().enumerate() {
            let got = gamma_direct_with(&Integer::from(n), &a, digits + TARGET_MARGIN, guard)?;
            let agreement = agreement_digits(&got.log_value.to_complex()?, want).min(EXACT);
            checks.push(Check {
                kind: "oracle",
                n: n.to_string(),
                v: v.text.clone(),
                required: digits,
                agreement,
                pass: agreement >= digits as f64,
            });
        }
    }
    Ok(checks)
}

/// Recomputes each stored value; parts compare at the number of digits stored.
pub fn golden_checks(entries: &[GoldenEntry], guard: Option<u64>) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for e in entries {
        let n = parse_order(&e.n)?;
        let v: Param = parse_param(&e.v)?;
        let (want_re, want_im) = (e.re()?, e.im()?);
        let prec = stieltjes::mpkernel::digits_to_bits(e.digits + 40);
        let mut req = GammaRequest::new(n, v.to_complex(prec), e.digits);
        if let Some(g) = guard {
            req.guard_digits = g;
        }
        let res = gamma(&req)?;
        let len = |b: &stieltjes::BigSci| b.significant_digits().max(1);
        let got_re = res.log_value.to_bigsci(len(&want_re))?.re;
        let got_im = res.log_value.to_bigsci(len(&want_im))?.im;
        let m_re = matching_digits(&got_re, &want_re);
        let m_im = if want_im.is_zero() && got_im.is_zero() {
            usize::MAX
        } else {
            matching_digits(&got_im, &want_im)
        };
        let pass = got_re == want_re && (got_im == want_im || (want_im.is_zero() && got_im.is_zero()));
        let agreement = m_re.min(m_im) as f64;
        checks.push(Check {
            kind: "golden",
            n: e.n.clone(),
            v: e.v.clone(),
            required: e.digits,
            agreement: if pass { len(&want_re) as f64 } else { agreement },
            pass,
        });
    }
    Ok(checks)
}

pub fn verify_cmd(args: &VerifyArgs) -> Result<String, CliError> {
    let guard = guard_digits()?;
    let mut checks = oracle_checks(args.nmax, args.digits, guard.unwrap_or(stieltjes::mpkernel::DEFAULT_GUARD_DIGITS))?;
    if args.golden || args.golden_file.is_some() {
        let entries = match &args.golden_file {
            Some(path) => golden::load(&std::fs::read_to_string(path)?)?,
            None => golden::builtin(),
        };
        checks.extend(golden_checks(&entries, guard)?);
    }
    let report = VerifyReport::new(checks);
    let text = report.render(args.format)?;
    if report.failed > 0 {
        return Err(CliError::VerifyFailed {
            summary: report.summary(),
            output: text,
        });
    }
    Ok(text)
}
