//! Saddle point of the integrand `exp(g(x))`, `g(x) = (n+1)·log log(a+ix) − 2πx`.
//!
//! In terms of `z = a + iω` the stationarity condition
//! `(n+1) + 2πi·z·log z = 0` does not involve `a`, so its root
//! `z* = u / W₀(u)` with `u = (n+1)i/(2π)` is shared by every `a`
//! (and by `a` and `conj a` in particular). `ω = i(a − z*)`.
//!
//! For `Re a` below [`SHIFT_FLOOR`] the contour is moved to the line
//! `Im x = −c`, `c = SHIFT_FLOOR − Re a`. On that line the integrand is
//! `log^{n+1}(a+c+is) / cosh²(π(s−ic))`, i.e. the same saddle problem with
//! `a → a + c`, a constant phase `e^{2πic}` and `h(x) = (1 + tanh π(x−ic))²`.
//! This keeps the ray from the origin away from the logarithm's branch point.

use rug::float::Constant;
use rug::{Complex, Float, Integer};

use crate::error::{Error, Result};
use crate::lambertw::lambert_w0;
use crate::mpkernel::{cabs, clog, cprec, pi, two_pi, Precision, DEFAULT_GUARD_DIGITS};

/// `(n+1) ≥ GUARD_RATIO · max(1, |a|)` is required for the saddle method.
pub const GUARD_RATIO: u32 = 20;

/// Safety factor applied to the Gaussian cutoff estimate.
pub const SAFETY_FACTOR: f64 = 1.5;

/// Real parts of `a` below this are shifted up to it.
pub const SHIFT_FLOOR: f64 = 0.4;

/// Direction of the contour at the saddle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ContourMode {
    /// `ε = 1`: the ray from the origin through ω.
    #[default]
    Unit,
    /// `ε = e^{iφ}`, `φ = (π − θ)/2`, `θ = Arg(ω²g″(ω))`.
    Steepest,
}

/// `a`-independent part of the saddle: `u`, `W₀(u)` and `z* = u/W₀(u)`.
#[derive(Clone, Debug)]
pub struct SaddleRoot {
    pub u: Complex,
    pub w0: Complex,
    /// `z* = a + iω`, polished by one Newton step.
    pub z: Complex,
    pub log_z: Complex,
    pub lambert_residual: Float,
}

/// Everything the quadrature needs about the saddle for one `a`.
#[derive(Clone, Debug)]
pub struct SaddleData {
    pub n: Integer,
    /// `n + 1` at working precision.
    pub n1: Float,
    /// `a = v − ½` as requested.
    pub a: Complex,
    /// Contour shift `c ≥ 0`.
    pub shift: Float,
    /// `a + c`, the parameter that enters `g`.
    pub a_eff: Complex,
    pub u: Complex,
    pub w0: Complex,
    pub omega: Complex,
    /// `a_eff + iω`.
    pub z: Complex,
    pub log_z: Complex,
    /// `g(ω)`, the log-space anchor.
    pub g_omega: Complex,
    /// `g″(ω)`.
    pub gpp: Complex,
    /// `Arg(ω²g″(ω)) ∈ (−π, π]`.
    pub theta: Float,
    pub eps: Complex,
    pub mode: ContourMode,
    pub precision: Precision,
}

/// `u = (n+1)i/(2π)`.
pub fn compute_u(n: &Integer, prec: u32) -> Complex {
    let n1 = Float::with_val(prec, Integer::from(n + 1u32));
    Complex::with_val(prec, (Float::new(prec), n1 / two_pi(prec)))
}

/// Contour shift for a given `a`: `max(0, SHIFT_FLOOR − Re a)`.
pub fn contour_shift(a: &Complex) -> Float {
    let prec = cprec(a);
    let floor = Float::with_val(prec, SHIFT_FLOOR);
    if *a.real() >= floor {
        Float::new(prec)
    } else {
        floor - a.real()
    }
}

/// Checks `Re a ≥ 0` and `(n+1) ≥ 20·max(1, |a|)`.
pub fn validity_guard(n: &Integer, a: &Complex) -> Result<()> {
    if a.real().is_sign_negative() && !a.real().is_zero() {
        return Err(Error::Domain(format!(
            "Re(v) must be at least 1/2 (got Re(a) = {:.6e})",
            a.real().to_f64()
        )));
    }
    let prec = cprec(a);
    let scale = cabs(a).max(&Float::with_val(prec, 1u32));
    let need = Float::with_val(prec, scale * GUARD_RATIO);
    if Float::with_val(prec, Integer::from(n + 1u32)) < need {
        return Err(Error::Guard(format!(
            "n+1 = {} is below {}·max(1,|a|) = {:.4}; n ≫ |a| does not hold",
            Integer::from(n + 1u32),
            GUARD_RATIO,
            need.to_f64()
        )));
    }
    Ok(())
}

/// Solves for `z*` at `prec` bits.
pub fn saddle_root(n: &Integer, prec: u32) -> Result<SaddleRoot> {
    let digits = (prec as f64 / std::f64::consts::LOG2_10).ceil() as u64;
    let u = compute_u(n, prec);
    let lw = lambert_w0(&u, digits)?;
    let w0 = Complex::with_val(prec, &lw.w);
    let mut z = Complex::with_val(prec, &u / &w0);
    // one Newton step on F(z) = (n+1) + 2πi z log z, F' = 2πi (log z + 1)
    let n1 = Float::with_val(prec, Integer::from(n + 1u32));
    let two_pi_i = Complex::with_val(prec, (0, two_pi(prec)));
    let log_z = clog(&z)?;
    let f = Complex::with_val(prec, &z * &log_z) * &two_pi_i + &n1;
    let fp = Complex::with_val(prec, &log_z + 1u32) * &two_pi_i;
    z -= f / fp;
    let log_z = clog(&z)?;
    Ok(SaddleRoot {
        u,
        w0,
        z,
        log_z,
        lambert_residual: lw.residual,
    })
}

/// Saddle data for `(n, a)` at target `digits` with the default guard digits.
pub fn saddle_point(n: &Integer, a: &Complex, digits: u64) -> Result<SaddleData> {
    let precision = Precision::for_order(digits, n, DEFAULT_GUARD_DIGITS);
    saddle_point_with(n, a, precision, ContourMode::Unit)
}

pub fn saddle_point_with(
    n: &Integer,
    a: &Complex,
    precision: Precision,
    mode: ContourMode,
) -> Result<SaddleData> {
    validity_guard(n, a)?;
    let root = saddle_root(n, precision.bits)?;
    SaddleData::from_root(n, a, &root, precision, mode)
}

impl SaddleData {
    pub fn from_root(
        n: &Integer,
        a: &Complex,
        root: &SaddleRoot,
        precision: Precision,
        mode: ContourMode,
    ) -> Result<Self> {
        validity_guard(n, a)?;
        let prec = precision.bits;
        let a = Complex::with_val(prec, a);
        let shift = contour_shift(&a);
        let a_eff = Complex::with_val(prec, &a + &shift);
        let z = Complex::with_val(prec, &root.z);
        let log_z = Complex::with_val(prec, &root.log_z);
        // ω = i (a_eff − z*)
        let omega = Complex::with_val(prec, &a_eff - &z).mul_i(false);
        let n1 = Float::with_val(prec, Integer::from(n + 1u32));
        let g = GFunction::new(n, &a_eff, prec);
        let g_omega = g.eval(&omega)?;
        let gpp = g_second_at(&n1, &z, &log_z);
        let rotated = Complex::with_val(prec, omega.square_ref()) * &gpp;
        let theta = Float::with_val(prec, rotated.arg_ref());
        let mut sd = SaddleData {
            n: n.clone(),
            n1,
            a,
            shift,
            a_eff,
            u: Complex::with_val(prec, &root.u),
            w0: Complex::with_val(prec, &root.w0),
            omega,
            z,
            log_z,
            g_omega,
            gpp,
            theta,
            eps: Complex::with_val(prec, 1u32),
            mode,
            precision,
        };
        sd.eps = contour_direction(&sd, mode);
        Ok(sd)
    }

    pub fn prec(&self) -> u32 {
        self.precision.bits
    }

    /// The `g` of this saddle (with the shifted parameter).
    pub fn g(&self) -> GFunction {
        GFunction::new(&self.n, &self.a_eff, self.prec())
    }

    /// `|(n+1) + 2πi·z·log z| / (n+1)` at the solved saddle.
    pub fn saddle_residual(&self) -> Float {
        let prec = self.prec();
        let two_pi_i = Complex::with_val(prec, (0, two_pi(prec)));
        let f = Complex::with_val(prec, &self.z * &self.log_z) * two_pi_i + &self.n1;
        cabs(&f) / &self.n1
    }

    /// Checks that the part of the ray next to the origin is negligible.
    ///
    /// The quadrature covers only a window around ω. Near `x = 0` the
    /// integrand is about `|log(a+c)|^{n+1}·sec²(πc)`; it must sit at least
    /// `10^{-(digits+5)}` below the saddle magnitude.
    pub fn endpoint_guard(&self, digits: u64) -> Result<()> {
        let prec = self.prec();
        let log_a = clog(&self.a_eff)?;
        let abs_log = cabs(&log_a);
        if abs_log.is_zero() {
            return Ok(());
        }
        let cos_shift = Float::with_val(prec, &self.shift * pi(prec)).cos();
        let origin = Float::with_val(prec, abs_log.ln() * &self.n1) - cos_shift.square().ln()
            + Float::with_val(prec, cabs(&self.omega) + 1u32).ln();
        let margin = Float::with_val(prec, self.g_omega.real() - &origin);
        let need = (digits as f64 + 5.0) * std::f64::consts::LN_10;
        if margin.to_f64() < need {
            return Err(Error::Guard(format!(
                "contribution near x = 0 is only 10^-{:.1} of the saddle; need 10^-{}",
                margin.to_f64() / std::f64::consts::LN_10,
                digits + 5
            )));
        }
        Ok(())
    }
}

/// `g(x) = (n+1)·log log(a+ix) − 2πx` with the branch checks.
#[derive(Clone, Debug)]
pub struct GFunction {
    n1: Float,
    a: Complex,
    two_pi: Float,
}

impl GFunction {
    pub fn new(n: &Integer, a: &Complex, prec: u32) -> Self {
        GFunction {
            n1: Float::with_val(prec, Integer::from(n + 1u32)),
            a: Complex::with_val(prec, a),
            two_pi: two_pi(prec),
        }
    }

    fn inner(&self, x: &Complex) -> Result<(Complex, Complex)> {
        let prec = self.two_pi.prec();
        let z = Complex::with_val(prec, x.mul_i_ref(false)) + &self.a;
        if z.imag().is_zero() && (z.real().is_sign_negative() || z.real().is_zero()) {
            return Err(Error::Branch(format!(
                "a + ix = {:.6e} lies on the cut of the inner logarithm",
                z.real().to_f64()
            )));
        }
        if z.imag().is_zero() && *z.real() == 1u32 {
            return Err(Error::Branch("a + ix = 1 makes the outer logarithm singular".into()));
        }
        let log_z = clog(&z)?;
        Ok((z, log_z))
    }

    pub fn eval(&self, x: &Complex) -> Result<Complex> {
        let (_, log_z) = self.inner(x)?;
        let ll = clog(&log_z)?;
        Ok(ll * &self.n1 - Complex::with_val(self.two_pi.prec(), x * &self.two_pi))
    }

    /// `g′(x) = (n+1)·i / ((a+ix)·log(a+ix)) − 2π`.
    pub fn prime(&self, x: &Complex) -> Result<Complex> {
        let (z, log_z) = self.inner(x)?;
        let prec = self.two_pi.prec();
        let den = z * log_z;
        let num = Complex::with_val(prec, (Float::new(prec), &self.n1));
        Ok(num / den - &self.two_pi)
    }
}

/// `g` evaluated at `x` for order `n` and parameter `a`.
pub fn g_eval(x: &Complex, n: &Integer, a: &Complex) -> Result<Complex> {
    GFunction::new(n, a, cprec(x)).eval(x)
}

fn g_second_at(n1: &Float, z: &Complex, log_z: &Complex) -> Complex {
    let prec = n1.prec();
    // (n+1)(1 + 1/L) / (z² L)
    let inv_l = Complex::with_val(prec, log_z.recip_ref());
    let num = (inv_l + 1u32) * n1;
    let den = Complex::with_val(prec, z.square_ref()) * log_z;
    num / den
}

/// `g″(ω) = (n+1)(1 + 1/log(a+iω)) / ((a+iω)² log(a+iω))`.
pub fn g_second(sd: &SaddleData) -> Complex {
    g_second_at(&sd.n1, &sd.z, &sd.log_z)
}

/// Contour direction ε at the saddle.
///
/// Steepest mode reduces φ to `(−π/2, π/2]` so that the contour keeps its
/// orientation from the origin towards infinity.
pub fn contour_direction(sd: &SaddleData, mode: ContourMode) -> Complex {
    let prec = sd.prec();
    match mode {
        ContourMode::Unit => Complex::with_val(prec, 1u32),
        ContourMode::Steepest => {
            let pi = Float::with_val(prec, Constant::Pi);
            let mut phi = Float::with_val(prec, &pi - &sd.theta) / 2u32;
            let half_pi = Float::with_val(prec, &pi / 2u32);
            if phi > half_pi {
                phi -= &pi;
            }
            let (s, c) = phi.sin_cos(Float::new(prec));
            Complex::with_val(prec, (c, s))
        }
    }
}

/// Cutoff `q = SAFETY_FACTOR · sqrt(N ln10 / |g″(ω) ω²|)`.
pub fn cutoff_q(sd: &SaddleData, digits: u64) -> Float {
    cutoff_q_with(sd, digits, SAFETY_FACTOR)
}

pub fn cutoff_q_with(sd: &SaddleData, digits: u64, safety: f64) -> Float {
    let prec = sd.prec();
    let curv = cabs(&(Complex::with_val(prec, sd.omega.square_ref()) * &sd.gpp));
    let num = Float::with_val(prec, 10u32).ln() * digits;
    (num / curv).sqrt() * Float::with_val(prec, safety)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn half(prec: u32) -> Complex {
        Complex::with_val(prec, 0.5)
    }

    fn rel(a: &Complex, b: &Complex) -> f64 {
        let d = Complex::with_val(cprec(a), a - b);
        (cabs(&d) / cabs(b)).to_f64()
    }

    #[test]
    fn u_is_positive_imaginary() {
        let u = compute_u(&Integer::new(), 200);
        assert!(u.real().is_zero());
        assert!(u.imag().to_string_radix(10, Some(12)).starts_with("1.5915494309"));
        let u = compute_u(&Integer::from(100_000), 200);
        assert!(u.real().is_zero());
        // 100001 / (2π) = 15915.6535…
        assert!((u.imag().to_f64() - 15_915.653_54).abs() < 1e-4);
    }

    #[test]
    fn residual_at_1e5() {
        let sd = saddle_point(&Integer::from(100_000), &half(400), 100).unwrap();
        assert!(sd.omega.real().is_sign_positive());
        assert!(sd.saddle_residual() < 1e-90);
    }

    /// Independent complex Newton solve of the stationarity condition in ω.
    #[test]
    fn matches_newton_oracle_at_500() {
        let n = Integer::from(500);
        let sd = saddle_point(&n, &half(64), 60).unwrap();
        let prec = sd.prec();
        let a = half(prec);
        let two_pi = two_pi(prec);
        let n1 = Float::with_val(prec, 501u32);
        // seed ω = n / (2π log n)
        let mut w = Complex::with_val(prec, 500.0 / (2.0 * std::f64::consts::PI * 500f64.ln()));
        for _ in 0..200 {
            let z = Complex::with_val(prec, w.mul_i_ref(false)) + &a;
            let l = z.clone().ln();
            // F(ω) = (n+1) + 2πi z log z ; dF/dω = 2πi · i (log z + 1)
            let f = Complex::with_val(prec, &z * &l).mul_i(false) * &two_pi + &n1;
            let fp = Complex::with_val(prec, &l + 1u32) * &two_pi * -1i32;
            let step = f / fp;
            w -= &step;
            if cabs(&step) < Float::with_val(prec, 10u32).pow(-75i32) {
                break;
            }
        }
        assert!(rel(&sd.omega, &w) < 1e-60, "{}", rel(&sd.omega, &w));
    }

    #[test]
    fn residual_grid() {
        let ns = [
            Integer::from(500),
            Integer::from(1000),
            Integer::from(100_000),
            Integer::from(10u32).pow(10u32),
            Integer::from(10u32).pow(100u32),
        ];
        let digits = 60;
        for n in &ns {
            for (re, im) in [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (1.5, 3.0)] {
                let a = Complex::with_val(64, (re, im));
                let sd = saddle_point(n, &a, digits).unwrap();
                let lim = Float::with_val(64, 10u32).pow(-(digits as i32) + 4);
                assert!(sd.saddle_residual() <= lim, "n={n} a=({re},{im})");
            }
        }
    }

    #[test]
    fn omega_shifts_additively_with_a() {
        let n = Integer::from(100_000);
        let prec = 300;
        let root = saddle_root(&n, prec).unwrap();
        let p = Precision::for_order(80, &n, 10);
        let root = saddle_root(&n, p.bits).unwrap_or(root);
        let a0 = Complex::with_val(p.bits, (0.4, 0.0));
        let a1 = Complex::with_val(p.bits, (1.5, 3.0));
        let s0 = SaddleData::from_root(&n, &a0, &root, p, ContourMode::Unit).unwrap();
        let s1 = SaddleData::from_root(&n, &a1, &root, p, ContourMode::Unit).unwrap();
        let diff = Complex::with_val(p.bits, &s1.omega - &s0.omega);
        let ia = Complex::with_val(p.bits, &a1 - &a0).mul_i(false);
        assert_eq!(diff, ia);
    }

    #[test]
    fn second_derivative_vs_finite_difference() {
        // 60-digit working precision, δ = |ω|·1e-15
        let n = Integer::from(100_000);
        let p = Precision::fixed(60, 60);
        let sd = saddle_point_with(&n, &half(64), p, ContourMode::Unit).unwrap();
        let prec = sd.prec();
        let g = sd.g();
        let delta = Float::with_val(prec, cabs(&sd.omega) * Float::with_val(prec, 1e-15));
        let xp = Complex::with_val(prec, &sd.omega + &delta);
        let xm = Complex::with_val(prec, &sd.omega - &delta);
        let fd = (g.prime(&xp).unwrap() - g.prime(&xm).unwrap()) / (delta * 2u32);
        assert!(rel(&fd, &g_second(&sd)) < 1e-20);
        // g'(ω) vanishes at the saddle
        let gp = g.prime(&sd.omega).unwrap();
        assert!(cabs(&gp) < 1e-50);
    }

    #[test]
    fn descent_direction_and_theta() {
        let sd = saddle_point(&Integer::from(100_000), &half(64), 50).unwrap();
        let rot = Complex::with_val(sd.prec(), sd.omega.square_ref()) * &sd.gpp;
        assert!(rot.real().is_sign_negative());
        // real part of ω²g″ dominates: θ sits near ±π, so ε = 1 is near-steepest
        let dist = std::f64::consts::PI - sd.theta.to_f64().abs();
        assert!(dist < std::f64::consts::FRAC_PI_4, "theta = {}", sd.theta);
    }

    #[test]
    fn contour_modes() {
        let n = Integer::from(100_000);
        let a = Complex::with_val(64, (1.5, 3.0));
        let sd = saddle_point(&n, &a, 50).unwrap();
        assert_eq!(contour_direction(&sd, ContourMode::Unit), Complex::with_val(64, 1u32));
        let e = contour_direction(&sd, ContourMode::Steepest);
        assert!((cabs(&e).to_f64() - 1.0).abs() < 1e-40);
        assert!(e.real().is_sign_positive());

        let mut flat = sd.clone();
        flat.theta = Float::new(sd.prec());
        let e = contour_direction(&flat, ContourMode::Steepest);
        assert!(e.real().to_f64().abs() < 1e-40);
        assert!((e.imag().to_f64() - 1.0).abs() < 1e-40);
    }

    #[test]
    fn cutoff_scales_as_sqrt_digits() {
        let sd = saddle_point(&Integer::from(100_000), &half(64), 50).unwrap();
        let q1 = cutoff_q(&sd, 25);
        let q4 = cutoff_q(&sd, 100);
        let ratio = (q4 / q1).to_f64();
        assert!((ratio - 2.0).abs() < 1e-15);
    }

    #[test]
    fn g_at_zero_for_a_e() {
        let prec = 128;
        let e = Complex::with_val(prec, Float::with_val(prec, 1u32).exp());
        let g = g_eval(&Complex::new(prec), &Integer::from(1000), &e).unwrap();
        assert!(cabs(&g) < 1e-30);
    }

    #[test]
    fn g_direct_evaluation() {
        let prec = 200;
        let x = Complex::with_val(prec, 1u32);
        let a = half(prec);
        let g = g_eval(&x, &Integer::from(100), &a).unwrap();
        let z = Complex::with_val(prec, (0.5, 1));
        let want = z.ln().ln() * 101u32 - two_pi(prec);
        assert!(rel(&g, &want) < 1e-55);
    }

    #[test]
    fn g_branch_errors() {
        let prec = 64;
        let a = half(prec);
        // a + ix = -0.5 on the cut
        let x = Complex::with_val(prec, (0, 1));
        assert!(matches!(g_eval(&x, &Integer::from(10), &a), Err(Error::Branch(_))));
        // a + ix = 1
        let x = Complex::with_val(prec, (0, -0.5));
        assert!(matches!(g_eval(&x, &Integer::from(10), &a), Err(Error::Branch(_))));
    }

    #[test]
    fn guards() {
        let a = Complex::with_val(64, (-0.25, 0.0));
        assert!(matches!(
            validity_guard(&Integer::from(1000), &a),
            Err(Error::Domain(_))
        ));
        let a = Complex::with_val(64, 49.5);
        assert!(matches!(
            validity_guard(&Integer::from(100), &a),
            Err(Error::Guard(_))
        ));
        assert!(validity_guard(&Integer::from(19), &half(64)).is_ok());
        assert!(validity_guard(&Integer::from(18), &half(64)).is_err());
    }

    #[test]
    fn shift_only_below_floor() {
        assert!(contour_shift(&half(64)).is_zero());
        let c = contour_shift(&Complex::with_val(64, (0, 3)));
        assert!((c.to_f64() - SHIFT_FLOOR).abs() < 1e-15);
    }

    #[test]
    fn endpoint_guard_rejects_small_n() {
        let sd = saddle_point(&Integer::from(20), &half(64), 50).unwrap();
        assert!(matches!(sd.endpoint_guard(50), Err(Error::Guard(_))));
        let sd = saddle_point(&Integer::from(500), &Complex::with_val(64, 0), 100).unwrap();
        assert!(sd.endpoint_guard(105).is_ok());
    }
}
