//! Generalized Stieltjes constants γₙ(v).
//!
//! With `a = v − ½` and `Iₙ(a) = ∫₀^∞ log^{n+1}(a+ix)/cosh²(πx) dx`,
//!
//! ```text
//! γₙ(v) = −π/(2(n+1)) · (Iₙ(a) + conj Iₙ(conj a))
//! ```
//!
//! which is `−π/(n+1)·Re Iₙ(a)` for real `a`. Large `n` goes through the
//! saddle-point quadrature of [`crate::dequad`], small `n` through a plain
//! double-exponential rule on the whole line, and [`gamma_asymptotic`] gives
//! the closed-form leading saddle approximation.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use crate::dequad::{integrate_adaptive, m_schedule, QuadPlan, QuadResult};
use crate::error::{Error, Result};
use crate::mpkernel::{
    cabs, clog, cprec, digits_to_bits, is_zero, pairwise_sum, pi, BigSciComplex, LogValue,
    Precision, DEFAULT_GUARD_DIGITS,
};
use crate::parallel;
use crate::saddle::{saddle_root, validity_guard, ContourMode, SaddleData, SaddleRoot};

/// Extra digits carried internally on top of the requested ones.
pub const TARGET_MARGIN: u64 = 5;

/// Contour shift of the direct rule: the line `Im x = −DIRECT_SHIFT`.
const DIRECT_SHIFT: f64 = 0.25;
const DIRECT_MAX_HALVINGS: u32 = 8;
const DIRECT_MAX_RETRIES: u32 = 4;
/// Scan step and half-width of the `t` window, in units of 1/8.
const SCAN_STEPS: i64 = 160;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    #[default]
    Auto,
    Saddle,
    Direct,
    Asymptotic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Saddle => "saddle",
            Method::Direct => "direct",
            Method::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "saddle" => Ok(Method::Saddle),
            "direct" => Ok(Method::Direct),
            "asymptotic" => Ok(Method::Asymptotic),
            _ => Err(Error::parse(0, format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GammaRequest {
    pub n: Integer,
    pub v: Complex,
    pub digits: u64,
    pub method: Method,
    pub contour_mode: ContourMode,
    /// Starting node count instead of the schedule.
    pub m_override: Option<u64>,
    pub guard_digits: u64,
}

impl GammaRequest {
    pub fn new(n: Integer, v: Complex, digits: u64) -> Self {
        GammaRequest {
            n,
            v,
            digits,
            method: Method::Auto,
            contour_mode: ContourMode::Unit,
            m_override: None,
            guard_digits: DEFAULT_GUARD_DIGITS,
        }
    }

    pub fn method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    fn target(&self) -> u64 {
        self.digits + TARGET_MARGIN
    }

    fn precision(&self) -> Precision {
        Precision::for_order(self.target(), &self.n, self.guard_digits)
    }
}

#[derive(Clone, Debug)]
pub struct GammaResult {
    pub value: BigSciComplex,
    pub log_value: LogValue,
    pub method_used: Method,
    /// Final grid of the (first) saddle quadrature.
    pub plan: Option<QuadPlan>,
    pub est_error: Float,
    pub elapsed: Duration,
    /// For real `v`: `|Im γ|/|γ|` of the unreduced complex assembly.
    pub imag_residue: Option<Float>,
}

/// γₙ(v) per the request.
pub fn gamma(req: &GammaRequest) -> Result<GammaResult> {
    let start = Instant::now();
    if req.digits == 0 {
        return Err(Error::Domain("at least one digit must be requested".into()));
    }
    let precision = req.precision();
    let a = parameter_a(&req.v, precision.bits)?;

    let outcome = match req.method {
        Method::Saddle => run_saddle(req, &a, precision)?,
        Method::Direct => run_direct(req, &a)?,
        Method::Asymptotic => run_asymptotic(req, &a, precision)?,
        Method::Auto => match saddle_setup(req, &a, precision) {
            Ok(setup) => saddle_from_setup(req, setup)?,
            Err(Error::Guard(_)) => run_direct(req, &a)?,
            Err(e) => return Err(e),
        },
    };
    let value = outcome.log_value.to_bigsci(req.digits as usize)?;
    Ok(GammaResult {
        value,
        log_value: outcome.log_value,
        method_used: outcome.method,
        plan: outcome.plan,
        est_error: outcome.est_error,
        elapsed: start.elapsed(),
        imag_residue: outcome.imag_residue,
    })
}

/// `a = v − ½`, rejecting `Re v < ½`.
pub fn parameter_a(v: &Complex, prec: u32) -> Result<Complex> {
    if !v.real().is_finite() || !v.imag().is_finite() {
        return Err(Error::Domain("v must be finite".into()));
    }
    let a = Complex::with_val(prec.max(cprec(v)), v) - Float::with_val(prec, 0.5);
    if a.real().is_sign_negative() && !a.real().is_zero() {
        return Err(Error::Domain(format!(
            "Re(v) must be at least 1/2 (got {:.6e})",
            v.real().to_f64()
        )));
    }
    Ok(Complex::with_val(prec, a))
}

struct Outcome {
    log_value: LogValue,
    method: Method,
    plan: Option<QuadPlan>,
    est_error: Float,
    imag_residue: Option<Float>,
}

struct SaddleSetup {
    primary: SaddleData,
    conjugate: Option<SaddleData>,
}

fn saddle_setup(req: &GammaRequest, a: &Complex, precision: Precision) -> Result<SaddleSetup> {
    validity_guard(&req.n, a)?;
    let root: SaddleRoot = saddle_root(&req.n, precision.bits)?;
    let build = |a: &Complex| -> Result<SaddleData> {
        let sd = SaddleData::from_root(&req.n, a, &root, precision, req.contour_mode)?;
        sd.endpoint_guard(req.target())?;
        Ok(sd)
    };
    let primary = build(a)?;
    let conjugate = if a.imag().is_zero() {
        None
    } else {
        Some(build(&Complex::with_val(precision.bits, a.conj_ref()))?)
    };
    Ok(SaddleSetup { primary, conjugate })
}

fn run_saddle(req: &GammaRequest, a: &Complex, precision: Precision) -> Result<Outcome> {
    let setup = saddle_setup(req, a, precision)?;
    saddle_from_setup(req, setup)
}

fn saddle_from_setup(req: &GammaRequest, setup: SaddleSetup) -> Result<Outcome> {
    let target = req.target();
    let m0 = req.m_override.unwrap_or_else(|| m_schedule(req.digits));
    let quad = |sd: &SaddleData| -> Result<QuadResult> { integrate_adaptive(sd, target, m0) };
    match &setup.conjugate {
        None => {
            let res = quad(&setup.primary)?;
            let log_value = assemble_gamma(&req.n, &res.log_i, None)?;
            let residue = real_assembly_residue(&req.n, &res.log_i)?;
            Ok(Outcome {
                log_value,
                method: Method::Saddle,
                plan: Some(res.plan),
                est_error: res.est_error,
                imag_residue: Some(residue),
            })
        }
        Some(conj) => {
            let (ra, rb) = parallel::join(|| quad(&setup.primary), || quad(conj));
            let (ra, rb) = (ra?, rb?);
            let log_value = assemble_gamma(&req.n, &ra.log_i, Some(&rb.log_i))?;
            let est_error = ra.est_error.clone().max(&rb.est_error);
            Ok(Outcome {
                log_value,
                method: Method::Saddle,
                plan: Some(ra.plan),
                est_error,
                imag_residue: None,
            })
        }
    }
}

fn run_direct(req: &GammaRequest, a: &Complex) -> Result<Outcome> {
    let res = gamma_direct_with(&req.n, a, req.target(), req.guard_digits)?;
    Ok(Outcome {
        log_value: res.log_value,
        method: Method::Direct,
        plan: None,
        est_error: res.est_error,
        imag_residue: res.imag_residue,
    })
}

fn run_asymptotic(req: &GammaRequest, a: &Complex, precision: Precision) -> Result<Outcome> {
    let log_value = gamma_asymptotic_with(&req.n, a, precision)?;
    let prec = precision.bits;
    let est_error = Float::with_val(prec, 1u32) / Float::with_val(prec, Integer::from(&req.n + 1u32));
    Ok(Outcome {
        log_value,
        method: Method::Asymptotic,
        plan: None,
        est_error,
        imag_residue: None,
    })
}

/// `ln(π/(2(n+1)))`.
fn ln_prefactor(n: &Integer, prec: u32) -> Float {
    let n1 = Float::with_val(prec, Integer::from(n + 1u32));
    (pi(prec) / (n1 * 2u32)).ln()
}

/// `log(e^x + e^y)` without leaving log space.
fn log_add_exp(x: &Complex, y: &Complex) -> Result<Complex> {
    let prec = cprec(x);
    let (hi, lo) = if x.real() >= y.real() { (x, y) } else { (y, x) };
    let d = Complex::with_val(prec, lo - hi).exp() + 1u32;
    Ok(clog(&d)? + hi)
}

/// γ from `log Iₙ(a)` and, for complex `a`, `log Iₙ(conj a)`.
///
/// Real `a` gives a [`LogValue::Real`]: `ln|γ| = ln(π/(n+1)) + Re L + ln|cos Im L|`,
/// negative when `cos Im L > 0`.
pub fn assemble_gamma(n: &Integer, log_i: &Complex, log_i_conj: Option<&Complex>) -> Result<LogValue> {
    let prec = cprec(log_i);
    match log_i_conj {
        None => {
            let cos = Float::with_val(prec, log_i.imag().cos_ref());
            if cos.is_zero() {
                return Err(Error::Precision("real part of the integral cancels exactly".into()));
            }
            let two = Float::with_val(prec, 2u32).ln();
            let ln_abs = ln_prefactor(n, prec) + two + log_i.real() + Float::with_val(prec, cos.abs_ref()).ln();
            Ok(LogValue::Real {
                negative: cos.is_sign_positive(),
                ln_abs,
            })
        }
        Some(lb) => {
            let sum = log_add_exp(log_i, &Complex::with_val(prec, lb.conj_ref()))?;
            let phase = Complex::with_val(prec, (ln_prefactor(n, prec), pi(prec)));
            Ok(LogValue::Complex(sum + phase))
        }
    }
}

/// `|sin Im Lγ|` for `Lγ` assembled through the complex path with `a = conj a`.
fn real_assembly_residue(n: &Integer, log_i: &Complex) -> Result<Float> {
    match assemble_gamma(n, log_i, Some(log_i))? {
        LogValue::Complex(l) => Ok(Float::with_val(cprec(&l), l.imag().sin_ref()).abs()),
        LogValue::Real { ln_abs, .. } => Ok(Float::new(ln_abs.prec())),
    }
}

/// Outcome of the whole-line double-exponential rule.
#[derive(Clone, Debug)]
pub struct DirectResult {
    pub log_value: LogValue,
    pub est_error: Float,
    pub h: Float,
    pub nodes: usize,
    pub working_digits: u64,
    /// `log10(Σ|term| / |Σ term|)` of the final sum.
    pub loss_digits: f64,
    pub imag_residue: Option<Float>,
}

/// γₙ(v) for `a = v − ½` by the plain DE rule, `digits` digits, default guard.
pub fn gamma_direct(n: &Integer, a: &Complex, digits: u64) -> Result<DirectResult> {
    gamma_direct_with(n, a, digits, DEFAULT_GUARD_DIGITS)
}

/// Direct rule on the line `Im x = −¼`:
///
/// ```text
/// γ = −π/(2(n+1)) ∫ log^{n+1}(a + ¼ + is) · sech²(π(s − i/4)) ds,   s = sinh t
/// ```
///
/// The working precision is raised until it covers the measured cancellation.
pub fn gamma_direct_with(n: &Integer, a: &Complex, digits: u64, guard: u64) -> Result<DirectResult> {
    if a.real().is_sign_negative() && !a.real().is_zero() {
        return Err(Error::Domain("Re(a) must be non-negative".into()));
    }
    let power = n
        .to_u32()
        .and_then(|k| k.checked_add(1))
        .ok_or_else(|| Error::Range(format!("order n = {n} is too large for the direct rule")))?;
    let mut working = Precision::for_order(digits, n, guard).working_digits;
    let mut last_err = None;
    for _ in 0..=DIRECT_MAX_RETRIES {
        match direct_pass(power, a, digits, working)? {
            Pass::Done(mut res) => {
                res.log_value = direct_value(n, &res.log_value)?;
                return Ok(res);
            }
            Pass::Starved { loss } => {
                working = digits + TARGET_MARGIN + guard + loss.ceil() as u64;
                last_err = Some(loss);
            }
        }
    }
    Err(Error::Precision(format!(
        "direct rule still loses {:.1} digits to cancellation at {} working digits",
        last_err.unwrap_or(f64::NAN),
        working
    )))
}

enum Pass {
    Done(DirectResult),
    Starved { loss: f64 },
}

/// `−π/(2(n+1))·J` given `J` carried as a `LogValue::Complex` of `J` itself.
fn direct_value(n: &Integer, j: &LogValue) -> Result<LogValue> {
    let prec = j.prec();
    let ln_pre = ln_prefactor(n, prec);
    Ok(match j {
        LogValue::Real { negative, ln_abs } => LogValue::Real {
            negative: !negative,
            ln_abs: ln_abs.clone() + ln_pre,
        },
        LogValue::Complex(l) => {
            let shift = Complex::with_val(prec, (ln_pre, pi(prec)));
            LogValue::Complex(Complex::with_val(prec, l + &shift))
        }
    })
}

struct DirectKernel {
    power: u32,
    /// `a + c`.
    base: Complex,
    pi: Float,
    /// `π c`.
    pi_c: Float,
    prec: u32,
}

impl DirectKernel {
    fn new(power: u32, a: &Complex, prec: u32) -> Self {
        let c = Float::with_val(prec, DIRECT_SHIFT);
        let pi = pi(prec);
        DirectKernel {
            power,
            base: Complex::with_val(prec, a + &c),
            pi_c: Float::with_val(prec, &pi * &c),
            pi,
            prec,
        }
    }

    /// `log^{n+1}(a+c+i sinh t) · sech²(π(sinh t − ic)) · cosh t`.
    fn term(&self, t: &Float) -> Result<Complex> {
        let prec = self.prec;
        let s = Float::with_val(prec, t.sinh_ref());
        let ds = Float::with_val(prec, t.cosh_ref());
        let log = clog(&self.point(&s))?;
        let pow = log.pow(self.power);
        Ok(pow * sech2(&self.sech_arg(&s)) * ds)
    }

    /// `a + c + is`.
    fn point(&self, s: &Float) -> Complex {
        let prec = cprec(&self.base);
        let mut z = Complex::with_val(prec, &self.base);
        *z.mut_imag() += s;
        z
    }

    /// `π(s − ic)`.
    fn sech_arg(&self, s: &Float) -> Complex {
        let prec = self.prec;
        Complex::with_val(prec, (Float::with_val(prec, s * &self.pi), Float::with_val(prec, -&self.pi_c)))
    }

    /// `ln|term(t)|` at 64 bits, for locating the support.
    fn ln_abs_term(&self, t: f64) -> f64 {
        let t = Float::with_val(64, t);
        let s = Float::with_val(self.prec, t.sinh_ref());
        let ds = Float::with_val(64, t.cosh_ref());
        let ln_log = match clog(&self.point(&s)) {
            Ok(l) => cabs(&l).ln().to_f64(),
            Err(_) => return f64::INFINITY,
        };
        let w = Complex::with_val(64, self.sech_arg(&s));
        self.power as f64 * ln_log + ln_abs_sech2(&w) + ds.ln().to_f64()
    }
}

/// `sech²w = 4e^{−2w'}/(1+e^{−2w'})²` with `w' = ±w`, `Re w' ≥ 0`.
fn sech2(w: &Complex) -> Complex {
    let prec = cprec(w);
    let wp = if w.real().is_sign_negative() {
        Complex::with_val(prec, -w)
    } else {
        w.clone()
    };
    let e = (wp * -2i32).exp();
    let den = Complex::with_val(prec, (Complex::with_val(prec, &e + 1u32)).square_ref());
    e * 4u32 / den
}

fn ln_abs_sech2(w: &Complex) -> f64 {
    let prec = cprec(w);
    let wp = if w.real().is_sign_negative() {
        Complex::with_val(prec, -w)
    } else {
        w.clone()
    };
    let re = wp.real().to_f64();
    let e = Complex::with_val(prec, &wp * -2i32).exp() + 1u32;
    4f64.ln() - 2.0 * re - 2.0 * cabs(&e).ln().to_f64()
}

/// Index window `[lo, hi]` (in steps of 1/8) where `term` is within
/// `drop` nats of its maximum.
fn scan_support(kernel: &DirectKernel, drop: f64) -> (i64, i64) {
    let vals: Vec<f64> = (-SCAN_STEPS..=SCAN_STEPS)
        .map(|k| kernel.ln_abs_term(k as f64 / 8.0))
        .collect();
    let max = vals.iter().cloned().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    let keep = |v: f64| v.is_finite() && v >= max - drop;
    let first = vals.iter().position(|&v| keep(v)).unwrap_or(SCAN_STEPS as usize);
    let last = vals.iter().rposition(|&v| keep(v)).unwrap_or(SCAN_STEPS as usize);
    let lo = (first as i64 - SCAN_STEPS - 1).max(-SCAN_STEPS);
    let hi = (last as i64 - SCAN_STEPS + 1).min(SCAN_STEPS);
    (lo, hi)
}

fn direct_pass(power: u32, a: &Complex, digits: u64, working: u64) -> Result<Pass> {
    let prec = digits_to_bits(working);
    let kernel = DirectKernel::new(power, a, prec);
    let drop = (working as f64 + 5.0) * std::f64::consts::LN_10;
    let (lo, hi) = scan_support(&kernel, drop);
    let tol = Float::with_val(prec, 10u32).pow(-(digits as i32));

    let mut sum = Complex::new(prec);
    let mut abs_sum = Float::new(64);
    let mut nodes = 0usize;
    let mut prev: Option<Complex> = None;
    for level in 0..=DIRECT_MAX_HALVINGS {
        let scale = 1i64 << level;
        let h = Float::with_val(prec, 0.125) / scale as u64;
        let ks: Vec<i64> = (lo * scale..=hi * scale)
            .filter(|k| level == 0 || k % 2 != 0)
            .collect();
        let idx: Vec<usize> = (0..ks.len()).collect();
        let terms = parallel::try_map(&idx, |i| {
            let t = Float::with_val(prec, &h * ks[i]);
            kernel.term(&t)
        })?;
        for t in &terms {
            if !t.real().is_finite() || !t.imag().is_finite() {
                return Err(Error::Range("direct-rule term overflows the exponent range".into()));
            }
            abs_sum += Float::with_val(64, cabs(t).abs_ref());
        }
        nodes += terms.len();
        sum += pairwise_sum(&terms, prec);
        let value = Complex::with_val(prec, &sum * &h);
        if let Some(p) = &prev {
            let diff = Complex::with_val(prec, &value - p);
            let mag = cabs(&value);
            if mag.is_zero() {
                return Err(Error::NonConvergence("direct-rule integral vanished".into()));
            }
            let est = cabs(&diff) / &mag;
            if est < tol {
                let loss = (Float::with_val(64, &abs_sum / cabs(&sum))).log10().to_f64().max(0.0);
                if (working as f64) - loss < (digits + TARGET_MARGIN) as f64 {
                    return Ok(Pass::Starved { loss });
                }
                return Ok(Pass::Done(finish_direct(value, a, est, h, nodes, working, loss)?));
            }
        }
        prev = Some(value);
    }
    Err(Error::NonConvergence(format!(
        "direct rule did not reach 1e-{digits} after {DIRECT_MAX_HALVINGS} halvings"
    )))
}

fn finish_direct(
    j: Complex,
    a: &Complex,
    est: Float,
    h: Float,
    nodes: usize,
    working: u64,
    loss: f64,
) -> Result<DirectResult> {
    let prec = cprec(&j);
    if a.imag().is_zero() {
        let mag = cabs(&j);
        let residue = Float::with_val(prec, j.imag().abs_ref()) / &mag;
        let re = j.real();
        if re.is_zero() {
            return Err(Error::Precision("real integral cancels to zero".into()));
        }
        let log_value = LogValue::Real {
            negative: re.is_sign_negative(),
            ln_abs: Float::with_val(prec, re.abs_ref()).ln(),
        };
        return Ok(DirectResult {
            log_value,
            est_error: est,
            h,
            nodes,
            working_digits: working,
            loss_digits: loss,
            imag_residue: Some(residue),
        });
    }
    if is_zero(&j) {
        return Err(Error::Precision("integral cancels to zero".into()));
    }
    Ok(DirectResult {
        log_value: LogValue::Complex(clog(&j)?),
        est_error: est,
        h,
        nodes,
        working_digits: working,
        loss_digits: loss,
        imag_residue: None,
    })
}

/// Leading saddle approximation of `log Iₙ(a)`:
///
/// ```text
/// log I ≈ (n+1)·log W − 2πω + ½·log(8(n+1) / (π(1+W))),   W = W₀((n+1)i/(2π))
/// ```
pub fn asymptotic_i(root: &SaddleRoot, n: &Integer, a: &Complex) -> Result<Complex> {
    let prec = cprec(&root.z);
    let n1 = Float::with_val(prec, Integer::from(n + 1u32));
    let omega = Complex::with_val(prec, a - &root.z).mul_i(false);
    let log_w = clog(&root.w0)?;
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let one_w = Complex::with_val(prec, &root.w0 + 1u32) * pi(prec);
    let ratio = Complex::with_val(prec, Float::with_val(prec, &n1 * 8u32)) / one_w;
    let half_log = clog(&ratio)? / 2u32;
    Ok(log_w * &n1 - omega * two_pi + half_log)
}

/// Asymptotic γₙ(v) for `a = v − ½` at `digits` digits.
pub fn gamma_asymptotic(n: &Integer, a: &Complex, digits: u64) -> Result<LogValue> {
    gamma_asymptotic_with(n, a, Precision::for_order(digits + TARGET_MARGIN, n, DEFAULT_GUARD_DIGITS))
}

pub fn gamma_asymptotic_with(n: &Integer, a: &Complex, precision: Precision) -> Result<LogValue> {
    validity_guard(n, a)?;
    let prec = precision.bits;
    let a = Complex::with_val(prec, a);
    let root = saddle_root(n, prec)?;
    let la = asymptotic_i(&root, n, &a)?;
    if a.imag().is_zero() {
        assemble_gamma(n, &la, None)
    } else {
        let lb = asymptotic_i(&root, n, &Complex::with_val(prec, a.conj_ref()))?;
        assemble_gamma(n, &la, Some(&lb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpkernel::agreement_digits;
    use crate::oracle::gamma_oracle;

    fn cx(re: f64, im: f64) -> Complex {
        Complex::with_val(64, (re, im))
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Auto, Method::Saddle, Method::Direct, Method::Asymptotic] {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("fast".parse::<Method>().is_err());
    }

    #[test]
    fn parameter_domain() {
        assert!(parameter_a(&cx(0.5, 0.0), 64).unwrap().real().is_zero());
        assert!(matches!(parameter_a(&cx(0.49, 1.0), 64), Err(Error::Domain(_))));
    }

    #[test]
    fn positive_real_integral_gives_negative_gamma() {
        let l = Complex::with_val(128, (10.0, 0.0));
        match assemble_gamma(&Integer::from(3), &l, None).unwrap() {
            LogValue::Real { negative, ln_abs } => {
                assert!(negative);
                // π/4 · e^10
                let want = (std::f64::consts::PI / 4.0).ln() + 10.0;
                assert!((ln_abs.to_f64() - want).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn real_and_complex_assembly_agree() {
        let n = Integer::from(100_000);
        let l = Complex::with_val(300, (1234.5, 98765.4321));
        let real = assemble_gamma(&n, &l, None).unwrap();
        let cplx = assemble_gamma(&n, &l, Some(&l)).unwrap();
        let a = real.to_bigsci(60).unwrap();
        let b = cplx.to_bigsci(60).unwrap();
        assert_eq!(a.re, b.re);
        assert!(b.im.is_zero() || b.im.exponent() < &(a.re.exponent() - Integer::from(60)));
    }

    #[test]
    fn direct_rule_small_orders() {
        let g0 = gamma_direct(&Integer::new(), &cx(0.5, 0.0), 50).unwrap();
        let got = g0.log_value.to_bigsci(20).unwrap();
        assert_eq!(got.re.to_string(), "5.7721566490153286061e-1");

        let g5 = gamma_direct(&Integer::from(5), &cx(0.5, 0.0), 55).unwrap();
        let want = gamma_oracle(5, &cx(1.0, 0.0), 55).unwrap();
        assert!(agreement_digits(&g5.log_value.to_complex().unwrap(), &want) > 50.0);
        assert!(g5.imag_residue.unwrap() < 1e-55);
    }

    #[test]
    fn direct_rule_complex_parameter() {
        let a = cx(1.5, 3.0);
        let d = gamma_direct(&Integer::from(3), &a, 45).unwrap();
        let want = gamma_oracle(3, &cx(2.0, 3.0), 45).unwrap();
        assert!(agreement_digits(&d.log_value.to_complex().unwrap(), &want) > 40.0);
    }

    #[test]
    fn asymptotic_is_conjugate_symmetric() {
        let n = Integer::from(10_000_000);
        let a = gamma_asymptotic(&n, &cx(1.5, 3.0), 30).unwrap();
        let b = gamma_asymptotic(&n, &cx(1.5, -3.0), 30).unwrap();
        let (a, b) = (a.to_bigsci(30).unwrap(), b.to_bigsci(30).unwrap());
        assert_eq!(a.re, b.re);
        assert_eq!(a.im, b.im.neg());
    }

    #[test]
    fn auto_routes_small_orders_to_direct() {
        let req = GammaRequest::new(Integer::from(3), cx(1.0, 0.0), 20);
        let res = gamma(&req).unwrap();
        assert_eq!(res.method_used, Method::Direct);
        let req = GammaRequest::new(Integer::from(3), cx(1.0, 0.0), 20).method(Method::Saddle);
        assert!(matches!(gamma(&req), Err(Error::Guard(_))));
        let req = GammaRequest::new(Integer::from(100), cx(50.0, 0.0), 10).method(Method::Asymptotic);
        assert!(matches!(gamma(&req), Err(Error::Guard(_))));
    }

    #[test]
    fn real_v_has_exact_zero_imaginary_part() {
        let req = GammaRequest::new(Integer::from(100_000), cx(1.0, 0.0), 40);
        let res = gamma(&req).unwrap();
        assert!(res.value.im.is_zero());
        assert_eq!(res.value.re.significant_digits(), 40);
        assert!(res.imag_residue.unwrap() < 1e-40);
        assert!(res.est_error < 1e-40);
    }
}
