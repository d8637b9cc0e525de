//! Principal branch W₀ of the Lambert W function for complex argument.
//!
//! Halley iteration on `w·e^w − z = 0`, run at a ramped precision: each
//! stage iterates until the step is below the current precision's cube root,
//! then triples the precision. Only the final stage works at full precision.

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::mpkernel::{cabs, clog, digits_to_bits, is_zero};

const MAX_ITERATIONS: u32 = 200;
const START_PREC: u32 = 64;

/// Solution of `w·e^w = z` on the principal branch.
#[derive(Clone, Debug)]
pub struct LambertResult {
    pub w: Complex,
    /// `|w·e^w − z| / |z|` at the working precision (zero for `z = 0`).
    pub residual: Float,
    pub iterations: u32,
}

/// W₀(z) to `digits` decimal digits.
///
/// The result precision is `digits_to_bits(digits)` plus 32 guard bits.
pub fn lambert_w0(z: &Complex, digits: u64) -> Result<LambertResult> {
    let target = digits_to_bits(digits) + 32;
    if is_zero(z) {
        return Ok(LambertResult {
            w: Complex::new(target),
            residual: Float::new(target),
            iterations: 0,
        });
    }
    let z_full = Complex::with_val(target, z);
    let tol = Float::with_val(target, 10u32).pow(-(digits as i32) - 2);

    let mut prec = START_PREC.min(target);
    let mut w = seed(&Complex::with_val(prec, &z_full))?;
    let mut iterations = 0;
    loop {
        if iterations >= MAX_ITERATIONS {
            return Err(Error::NonConvergence(format!(
                "Lambert W: {MAX_ITERATIONS} Halley steps without meeting 1e-{} tolerance",
                digits + 2
            )));
        }
        let zp = Complex::with_val(prec, &z_full);
        let step = halley_step(&w, &zp);
        w -= &step;
        iterations += 1;
        if !w.real().is_finite() || !w.imag().is_finite() {
            return Err(Error::NonConvergence("Lambert W: iterate left the finite range".into()));
        }

        let rel = relative(&step, &w);
        if prec < target {
            // next iterate is good to ~3x the bits of this step
            let good_bits = if rel.is_zero() {
                f64::INFINITY
            } else {
                -rel.to_f64().log2()
            };
            if good_bits >= (prec as f64 - 16.0) / 3.0 {
                prec = (prec * 3).min(target);
                w.set_prec(prec);
            }
            continue;
        }
        if rel <= tol {
            let residual = residual(&w, &z_full);
            let limit = Float::with_val(target, 10u32).pow(-(digits as i32) + 2);
            if residual <= limit {
                return Ok(LambertResult {
                    w,
                    residual,
                    iterations,
                });
            }
        }
    }
}

fn relative(step: &Complex, w: &Complex) -> Float {
    let num = cabs(step);
    let den = cabs(w);
    if den.is_zero() {
        num
    } else {
        num / den
    }
}

/// Halley correction `f / (f' − f·f''/(2f'))` for `f = w·e^w − z`.
fn halley_step(w: &Complex, z: &Complex) -> Complex {
    let prec = z.prec().0;
    let ew = Complex::with_val(prec, w.exp_ref());
    let f = Complex::with_val(prec, w * &ew) - z;
    let w1 = Complex::with_val(prec, w + 1u32);
    let w2 = Complex::with_val(prec, w + 2u32);
    // f' = e^w (w+1), f''/(2f') = (w+2)/(2(w+1))
    let fp = Complex::with_val(prec, &ew * &w1);
    let corr = Complex::with_val(prec, &f * &w2) / (w1 * 2u32);
    let den = fp - corr;
    f / den
}

fn residual(w: &Complex, z: &Complex) -> Float {
    let prec = z.prec().0;
    let ew = Complex::with_val(prec, w.exp_ref());
    let r = Complex::with_val(prec, w * ew) - z;
    cabs(&r) / cabs(z)
}

/// Starting point on the principal branch.
///
/// Large `|z|`: `log z − log log z`. Near the branch point `−1/e`: the
/// square-root expansion. Near zero: the Taylor series. Otherwise a log-based
/// approximation that is real and accurate to a few percent on the positive
/// axis.
fn seed(z: &Complex) -> Result<Complex> {
    let prec = z.prec().0;
    let abs = cabs(z).to_f64();
    if abs > 3.0 {
        let l1 = clog(z)?;
        let l2 = clog(&l1)?;
        return Ok(l1 - l2);
    }
    let inv_e = Float::with_val(prec, -1i32).exp();
    let near_branch = Complex::with_val(prec, z + &inv_e);
    if cabs(&near_branch).to_f64() < 0.3 {
        // p = sqrt(2(e z + 1)), w ≈ −1 + p − p²/3 + 11p³/72
        let e = Float::with_val(prec, 1u32).exp();
        let p = (Complex::with_val(prec, z * e) + 1u32) * 2u32;
        let p = p.sqrt();
        let p2 = Complex::with_val(prec, p.square_ref());
        let p3 = Complex::with_val(prec, &p2 * &p);
        let w = Complex::with_val(prec, &p - 1u32) - p2 / 3u32 + p3 * 11u32 / 72u32;
        return Ok(w);
    }
    if abs < 0.3 {
        // z − z² + 3z³/2 − 8z⁴/3
        let z2 = Complex::with_val(prec, z.square_ref());
        let z3 = Complex::with_val(prec, &z2 * z);
        let z4 = Complex::with_val(prec, z2.square_ref());
        return Ok(Complex::with_val(prec, z - &z2) + z3 * 3u32 / 2u32 - z4 * 8u32 / 3u32);
    }
    let l = clog(&Complex::with_val(prec, z + 1u32))?;
    let inner = clog(&Complex::with_val(prec, &l + 1u32))?;
    let ratio = inner / Complex::with_val(prec, &l + 2u32);
    Ok(l.clone() * (Complex::with_val(prec, 1u32) - ratio))
}

/// `log z − log log z`, the leading asymptotic form of W₀ for large `|z|`.
pub fn asymptotic_seed(z: &Complex) -> Result<Complex> {
    let l1 = clog(z)?;
    let l2 = clog(&l1)?;
    Ok(l1 - l2)
}
