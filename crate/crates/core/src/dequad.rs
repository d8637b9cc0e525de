//! Double-exponential quadrature of `Iₙ(a)` along the saddle contour.
//!
//! The contour is `x(y) = ω·e^{1+εy−e^{−εy}}`, which passes through the saddle
//! at `y = 0` and reaches the origin double-exponentially fast as `y → −∞`.
//! The integrand is evaluated relative to `exp(g(ω))`, so every node value is
//! O(1) near the saddle and the huge magnitude lives only in the log.
//!
//! Grids are nested: `y_k = q·(2k − (M−1))/(M−1)` gives bit-identical nodes
//! for `M` and `2M − 1`, and halving `h` only evaluates the new midpoints.

use rug::{Complex, Float, Integer};

use crate::error::{Error, Result};
use crate::mpkernel::{cabs, clog, pairwise_sum, two_pi};
use crate::parallel;
use crate::saddle::{cutoff_q, GFunction, SaddleData};

/// Halvings attempted by [`integrate_adaptive`] before giving up.
pub const MAX_HALVINGS: u32 = 8;

/// Times the cutoff may grow by 1.5 when the endpoint decay check fails.
pub const MAX_CUTOFF_GROWTH: u32 = 8;

/// Initial node count for a target of `digits` decimal digits.
///
/// 201 nodes up to 100 digits and 3201 at 1000 digits, scaled linearly in
/// between and beyond, rounded up to odd.
pub fn m_schedule(digits: u64) -> u64 {
    let d = digits.max(1);
    let m = match d {
        0..=100 => 201,
        101..=900 => 201 * d.div_ceil(100),
        901..=1000 => 3201,
        _ => 3201 * d.div_ceil(1000),
    };
    m | 1
}

/// A uniform grid on `[−q, q]` with `m` nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadPlan {
    pub digits: u64,
    pub q: Float,
    pub m: u64,
    /// `2q/(m−1)`.
    pub h: Float,
    pub eps: Complex,
    pub prec: u32,
}

impl QuadPlan {
    /// Plan with the Gaussian cutoff of `sd` for `digits`.
    pub fn new(sd: &SaddleData, digits: u64, m: u64) -> Result<Self> {
        Self::with_cutoff(sd, digits, cutoff_q(sd, digits), m)
    }

    pub fn with_cutoff(sd: &SaddleData, digits: u64, q: Float, m: u64) -> Result<Self> {
        if m < 3 || m.is_multiple_of(2) {
            return Err(Error::Domain(format!("node count must be odd and at least 3, got {m}")));
        }
        if !q.is_finite() || q <= 0u32 {
            return Err(Error::Domain("cutoff q must be positive and finite".into()));
        }
        let prec = sd.prec();
        let q = Float::with_val(prec, q);
        let h = Float::with_val(prec, &q * 2u32) / Float::with_val(prec, m - 1);
        Ok(QuadPlan {
            digits,
            q,
            m,
            h,
            eps: sd.eps.clone(),
            prec,
        })
    }

    /// Node `y_k`, `0 ≤ k < m`.
    pub fn node(&self, k: u64) -> Float {
        let i = Integer::from(2 * k) - Integer::from(self.m - 1);
        Float::with_val(self.prec, &self.q * &i) / Float::with_val(self.prec, self.m - 1)
    }

    /// The same interval with `h/2`.
    pub fn halved(&self) -> Self {
        self.refined(1)
    }

    /// The same interval with `h/2^levels`.
    pub fn refined(&self, levels: u32) -> Self {
        let scale = 1u64 << levels;
        let m = (self.m - 1) * scale + 1;
        QuadPlan {
            digits: self.digits,
            q: self.q.clone(),
            m,
            h: Float::with_val(self.prec, &self.h) / scale,
            eps: self.eps.clone(),
            prec: self.prec,
        }
    }

    fn with_q(&self, q: Float) -> Self {
        let h = Float::with_val(self.prec, &q * 2u32) / Float::with_val(self.prec, self.m - 1);
        QuadPlan {
            q,
            h,
            ..self.clone()
        }
    }
}

/// One level of the refinement sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct TracePoint {
    pub m: u64,
    pub h: Float,
    pub log_i: Complex,
    /// `|I_h − I_{prev}| / |I_h|` against the previous (coarser) level.
    pub est_error: Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadResult {
    /// `log Iₙ(a)`: log magnitude plus phase.
    pub log_i: Complex,
    pub trace: Vec<TracePoint>,
    pub est_error: Float,
    /// The plan of the returned (finest) level.
    pub plan: QuadPlan,
}

/// Normalized integrand `exp(g(x) − g(ω))·h(x)·dx/dy` for one saddle.
pub struct Integrand<'a> {
    sd: &'a SaddleData,
    g: GFunction,
    two_pi: Float,
    /// `2πic`, the shift that turns `tanh πx` into `tanh π(x − ic)`.
    shift_phase: Complex,
    /// Beyond this `Re(2πx)` the factor `h` equals 4 to working precision.
    flat_limit: Float,
}

impl<'a> Integrand<'a> {
    pub fn new(sd: &'a SaddleData) -> Self {
        let prec = sd.prec();
        let two_pi = two_pi(prec);
        let shift_phase = Complex::with_val(prec, (0, Float::with_val(prec, &two_pi * &sd.shift)));
        let flat_limit = Float::with_val(prec, prec as f64 * std::f64::consts::LN_2 + 64.0);
        Integrand {
            sd,
            g: sd.g(),
            two_pi,
            shift_phase,
            flat_limit,
        }
    }

    /// `(x(y), dx/dy)`.
    pub fn contour(&self, y: &Float) -> (Complex, Complex) {
        let prec = self.sd.prec();
        let ey = Complex::with_val(prec, &self.sd.eps * y);
        let e_neg = Complex::with_val(prec, -&ey).exp();
        let expo = Complex::with_val(prec, &ey + 1u32) - &e_neg;
        let growth = expo.exp();
        let x = Complex::with_val(prec, &self.sd.omega * &growth);
        let dx = Complex::with_val(prec, &x * &self.sd.eps) * (e_neg + 1u32);
        (x, dx)
    }

    /// `h(x) = (1 + tanh π(x − ic))² = 4 / (1 + e^{−2π(x−ic)})²`.
    pub fn h_factor(&self, x: &Complex) -> Complex {
        let prec = self.sd.prec();
        let arg = Complex::with_val(prec, x * &self.two_pi);
        if *arg.real() > self.flat_limit {
            return Complex::with_val(prec, 4u32);
        }
        let e = (-arg + &self.shift_phase).exp();
        let den = Complex::with_val(prec, (e + 1u32).square_ref());
        Complex::with_val(prec, 4u32) / den
    }

    pub fn eval(&self, y: &Float) -> Result<Complex> {
        let (x, dx) = self.contour(y);
        let gx = self.g.eval(&x)?;
        let rel = (gx - &self.sd.g_omega).exp();
        Ok(rel * self.h_factor(&x) * dx)
    }
}

/// `x(y)` on the contour of `sd`.
pub fn contour_x(y: &Float, sd: &SaddleData) -> Complex {
    Integrand::new(sd).contour(y).0
}

/// `dx/dy = ω·ε·(1 + e^{−εy})·e^{1+εy−e^{−εy}}`.
pub fn contour_dx(y: &Float, sd: &SaddleData) -> Complex {
    Integrand::new(sd).contour(y).1
}

/// The integrand at `y` relative to the saddle anchor `exp(g(ω))`.
pub fn integrand_normalized(y: &Float, sd: &SaddleData) -> Result<Complex> {
    Integrand::new(sd).eval(y)
}

/// `|f(±q)| / |f(0)|`, the larger of the two ends.
pub fn endpoint_decay(sd: &SaddleData, plan: &QuadPlan) -> Result<Float> {
    let f = Integrand::new(sd);
    let center = cabs(&f.eval(&Float::new(plan.prec))?);
    let lo = cabs(&f.eval(&Float::with_val(plan.prec, -&plan.q))?);
    let hi = cabs(&f.eval(&plan.q)?);
    Ok(lo.max(&hi) / center)
}

/// Samples `f(y)/f(0)` at every node of `plan`.
pub fn profile(sd: &SaddleData, plan: &QuadPlan) -> Result<Vec<(Float, Complex)>> {
    let f = Integrand::new(sd);
    let center = f.eval(&Float::new(plan.prec))?;
    let idx: Vec<usize> = (0..plan.m as usize).collect();
    let vals = parallel::try_map(&idx, |k| f.eval(&plan.node(k as u64)))?;
    Ok(idx
        .iter()
        .zip(vals)
        .map(|(&k, v)| (plan.node(k as u64), v / &center))
        .collect())
}

fn eval_nodes(f: &Integrand, plan: &QuadPlan, ks: &[usize]) -> Result<Vec<Complex>> {
    let last = plan.m as usize - 1;
    parallel::try_map(ks, |k| {
        let mut v = f.eval(&plan.node(k as u64))?;
        if k == 0 || k == last {
            v /= 2u32;
        }
        Ok(v)
    })
}

fn log_integral(sd: &SaddleData, h: &Float, sum: &Complex) -> Result<Complex> {
    let prec = sd.prec();
    let hs = Complex::with_val(prec, sum * h);
    let log = clog(&hs).map_err(|_| {
        Error::NonConvergence("quadrature sum vanished; the contour misses the saddle mass".into())
    })?;
    let shift = Complex::with_val(prec, (0, Float::with_val(prec, two_pi(prec) * &sd.shift)));
    Ok(log + &sd.g_omega + shift)
}

fn relative_change(prec: u32, fine: &Complex, coarse: &Complex) -> Float {
    let d = Complex::with_val(prec, fine - coarse);
    let den = cabs(fine);
    if den.is_zero() {
        return infinity(prec);
    }
    cabs(&d) / den
}

/// Single trapezoid pass over `plan`.
///
/// The error estimate compares against the `2h` subgrid made of the even
/// nodes of the same grid.
pub fn integrate(sd: &SaddleData, plan: &QuadPlan) -> Result<QuadResult> {
    let f = Integrand::new(sd);
    first_level(sd, &f, plan).map(|(r, _)| r)
}

fn first_level(sd: &SaddleData, f: &Integrand, plan: &QuadPlan) -> Result<(QuadResult, Complex)> {
    let prec = plan.prec;
    let all: Vec<usize> = (0..plan.m as usize).collect();
    let terms = eval_nodes(f, plan, &all)?;
    let even: Vec<Complex> = terms.iter().step_by(2).cloned().collect();
    let odd: Vec<Complex> = terms.iter().skip(1).step_by(2).cloned().collect();
    let coarse = pairwise_sum(&even, prec);
    let mut sum = coarse.clone();
    sum += pairwise_sum(&odd, prec);

    let h2 = Float::with_val(prec, &plan.h * 2u32);
    let i_fine = Complex::with_val(prec, &sum * &plan.h);
    let i_coarse = Complex::with_val(prec, &coarse * &h2);
    let est = relative_change(prec, &i_fine, &i_coarse);
    let log_i = log_integral(sd, &plan.h, &sum)?;
    let trace = vec![
        TracePoint {
            m: plan.m / 2 + 1,
            log_i: log_integral(sd, &h2, &coarse)?,
            h: h2,
            est_error: infinity(prec),
        },
        TracePoint {
            m: plan.m,
            h: plan.h.clone(),
            log_i: log_i.clone(),
            est_error: est.clone(),
        },
    ];
    let result = QuadResult {
        log_i,
        trace,
        est_error: est,
        plan: plan.clone(),
    };
    Ok((result, sum))
}

fn infinity(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Special::Infinity)
}

/// Widens `plan.q` by 1.5 until `|f(±q)| < 10^{−digits}·|f(0)|`.
pub fn fit_cutoff(sd: &SaddleData, plan: QuadPlan) -> Result<QuadPlan> {
    let tol = Float::with_val(plan.prec, 10u32).pow_neg(plan.digits);
    let mut plan = plan;
    for _ in 0..=MAX_CUTOFF_GROWTH {
        if endpoint_decay(sd, &plan)? < tol {
            return Ok(plan);
        }
        let q = Float::with_val(plan.prec, &plan.q * 3u32) / 2u32;
        plan = plan.with_q(q);
    }
    Err(Error::NonConvergence(format!(
        "integrand does not decay below 1e-{} within q = {:.4e}",
        plan.digits,
        plan.q.to_f64()
    )))
}

/// Trapezoid sums with `h` halved until two levels agree to `10^{−digits}`.
///
/// Starts from `m0` nodes on the Gaussian cutoff (widened by [`fit_cutoff`]).
pub fn integrate_adaptive(sd: &SaddleData, digits: u64, m0: u64) -> Result<QuadResult> {
    let plan = fit_cutoff(sd, QuadPlan::new(sd, digits, m0)?)?;
    integrate_from(sd, plan)
}

/// [`integrate_adaptive`] on a caller-chosen grid.
pub fn integrate_from(sd: &SaddleData, plan: QuadPlan) -> Result<QuadResult> {
    let prec = plan.prec;
    let tol = Float::with_val(prec, 10u32).pow_neg(plan.digits);
    let f = Integrand::new(sd);
    let (first, mut sum) = first_level(sd, &f, &plan)?;
    if first.est_error < tol {
        return Ok(first);
    }
    let mut trace = first.trace;
    let mut plan = plan;
    let mut value = Complex::with_val(prec, &sum * &plan.h);
    for _ in 0..MAX_HALVINGS {
        let fine = plan.halved();
        let mids: Vec<usize> = (1..fine.m as usize).step_by(2).collect();
        let terms = eval_nodes(&f, &fine, &mids)?;
        sum += pairwise_sum(&terms, prec);
        let next = Complex::with_val(prec, &sum * &fine.h);
        let est = relative_change(prec, &next, &value);
        let log_i = log_integral(sd, &fine.h, &sum)?;
        trace.push(TracePoint {
            m: fine.m,
            h: fine.h.clone(),
            log_i: log_i.clone(),
            est_error: est.clone(),
        });
        plan = fine;
        value = next;
        if est < tol {
            return Ok(QuadResult {
                log_i,
                trace,
                est_error: est,
                plan,
            });
        }
    }
    Err(Error::NonConvergence(format!(
        "h-halving stalled at est. error {:.3e} after {} halvings (M = {}); raise the precision",
        value_err(&trace),
        MAX_HALVINGS,
        plan.m
    )))
}

fn value_err(trace: &[TracePoint]) -> f64 {
    trace.last().map(|t| t.est_error.to_f64()).unwrap_or(f64::NAN)
}

/// `log I` at `h, h/2, …, h/2^levels` from one evaluation of the finest grid.
///
/// The last entry is the reference; the others are subsamples of its nodes.
pub fn integrate_levels(sd: &SaddleData, plan: &QuadPlan, levels: u32) -> Result<Vec<TracePoint>> {
    let prec = plan.prec;
    let fine = plan.refined(levels);
    let f = Integrand::new(sd);
    let all: Vec<usize> = (0..fine.m as usize).collect();
    let terms = eval_nodes(&f, &fine, &all)?;
    let mut out = Vec::with_capacity(levels as usize + 1);
    let mut prev: Option<Complex> = None;
    for level in 0..=levels {
        let stride = 1usize << (levels - level);
        let picked: Vec<Complex> = terms.iter().step_by(stride).cloned().collect();
        let sum = pairwise_sum(&picked, prec);
        let lp = plan.refined(level);
        let value = Complex::with_val(prec, &sum * &lp.h);
        let est = match &prev {
            Some(p) => relative_change(prec, &value, p),
            None => infinity(prec),
        };
        out.push(TracePoint {
            m: lp.m,
            log_i: log_integral(sd, &lp.h, &sum)?,
            h: lp.h,
            est_error: est,
        });
        prev = Some(value);
    }
    Ok(out)
}

trait PowNeg {
    fn pow_neg(self, k: u64) -> Float;
}

impl PowNeg for Float {
    fn pow_neg(self, k: u64) -> Float {
        use rug::ops::Pow;
        let e = i32::try_from(k).map(|k| -k).unwrap_or(i32::MIN);
        self.pow(e)
    }
}
