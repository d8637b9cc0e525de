//! Arbitrary-precision kernel: precision policy, principal-branch complex
//! logarithm, big integer powers, log-space values and the big-exponent
//! decimal representation used for inputs and outputs.
//!
//! Arithmetic is MPFR/MPC through `rug`, rounding to nearest-even. Values that
//! overflow any fixed exponent range (|γₙ| reaches 10^(10⁹⁸)) are carried as
//! their natural logarithm ([`LogValue`]) and only turned into decimal digits
//! at the very end ([`format_bigsci`]).

mod bigsci;

pub use bigsci::{format_bigsci, BigSci, BigSciComplex};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Complex, Float, Integer};

use crate::error::{Error, Result};

/// Working complex scalar. Both parts share one precision.
pub type MpComplex = Complex;

/// Lowest working precision in bits.
pub const MIN_PREC: u32 = 64;

/// Guard digits added on top of the target and the order amplification.
pub const DEFAULT_GUARD_DIGITS: u64 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Bits needed to hold `digits` decimal digits (never below [`MIN_PREC`]).
pub fn digits_to_bits(digits: u64) -> u32 {
    let bits = (digits as f64 * LOG2_10).ceil() as u64;
    bits.clamp(MIN_PREC as u64, (u32::MAX >> 2) as u64) as u32
}

/// Decimal digits represented by `bits` bits.
pub fn bits_to_digits(bits: u32) -> f64 {
    bits as f64 / LOG2_10
}

/// Number of decimal digits of |n| (1 for zero).
pub fn decimal_len(n: &Integer) -> u64 {
    if n.is_zero() {
        return 1;
    }
    // estimate from the bit length, then correct by comparison
    let est = ((n.significant_bits() as f64 - 1.0) / LOG2_10).floor() as u32 + 1;
    let abs = n.clone().abs();
    let mut len = est.max(1);
    while Integer::from(10u32).pow(len) <= abs {
        len += 1;
    }
    while len > 1 && Integer::from(10u32).pow(len - 1) > abs {
        len -= 1;
    }
    len as u64
}

/// Precision policy for an order-`n` computation.
///
/// `working_digits = target + guard + ceil(log10(n+1))`; the last term covers
/// the relative-error amplification of the `(n+1)·log log(·)` factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub target_digits: u64,
    pub guard_digits: u64,
    pub working_digits: u64,
    pub bits: u32,
}

impl Precision {
    pub fn for_order(target_digits: u64, n: &Integer, guard_digits: u64) -> Self {
        // ceil(log10(n+1)) equals the digit count of n for n >= 1
        let amplification = if n.is_zero() { 0 } else { decimal_len(n) };
        let working_digits = target_digits + guard_digits + amplification;
        Precision {
            target_digits,
            guard_digits,
            working_digits,
            bits: digits_to_bits(working_digits),
        }
    }

    /// Policy with a fixed working digit count and no order amplification.
    pub fn fixed(target_digits: u64, working_digits: u64) -> Self {
        Precision {
            target_digits,
            guard_digits: working_digits.saturating_sub(target_digits),
            working_digits,
            bits: digits_to_bits(working_digits),
        }
    }
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn two_pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi) * 2u32
}

pub fn ln10(prec: u32) -> Float {
    Float::with_val(prec, 10u32).ln()
}

/// Working precision of a complex value (the smaller of its two parts).
pub fn cprec(z: &Complex) -> u32 {
    let (re, im) = z.prec();
    re.min(im)
}

pub fn is_zero(z: &Complex) -> bool {
    z.real().is_zero() && z.imag().is_zero()
}

/// Principal-branch logarithm with `Im ∈ (−π, π]`.
///
/// A signed zero imaginary part is normalized to +0 first so that the
/// negative real axis maps to `+iπ`.
pub fn clog(z: &Complex) -> Result<Complex> {
    if is_zero(z) {
        return Err(Error::Domain("logarithm of zero".into()));
    }
    let mut w = z.clone();
    if w.imag().is_zero() {
        w.mut_imag().assign(0u32);
    }
    Ok(w.ln())
}

/// `z^k` for an arbitrary-size integer `k ≥ 0`, as `exp(k·clog z)`.
///
/// The logarithm is taken with `bits(k)` extra bits so that the product
/// `k·log z` keeps full absolute accuracy.
pub fn cpow_int_plus(z: &Complex, k: &Integer) -> Result<Complex> {
    let prec = cprec(z);
    if k.is_negative() {
        return Err(Error::Domain("negative exponent".into()));
    }
    if k.is_zero() {
        return Ok(Complex::with_val(prec, 1u32));
    }
    if is_zero(z) {
        return Ok(Complex::new(prec));
    }
    let extra = k.significant_bits() + 8;
    let wide = Complex::with_val(prec + extra, z);
    let log = clog(&wide)?;
    let scaled = log * Float::with_val(prec + extra, k);
    let out = Complex::with_val(prec, scaled.exp());
    if !out.real().is_finite() || !out.imag().is_finite() {
        return Err(Error::Range(format!(
            "power with {}-bit exponent overflows",
            k.significant_bits()
        )));
    }
    Ok(out)
}

/// Pairwise (tree) summation in index order.
///
/// The tree shape depends only on `terms.len()`, so the result is bit-identical
/// for identical inputs.
pub fn pairwise_sum(terms: &[Complex], prec: u32) -> Complex {
    match terms.len() {
        0 => Complex::new(prec),
        1 => Complex::with_val(prec, &terms[0]),
        len => {
            let (lo, hi) = terms.split_at(len / 2);
            let mut s = pairwise_sum(lo, prec);
            s += pairwise_sum(hi, prec);
            s
        }
    }
}

/// `|z|` as a real.
pub fn cabs(z: &Complex) -> Float {
    Float::with_val(cprec(z), z.abs_ref())
}

/// `ln |z|` without forming |z| when parts are huge.
pub fn ln_abs(z: &Complex) -> Float {
    cabs(z).ln()
}

/// Largest per-part relative difference between `a` and the reference `b`.
///
/// A part that is zero in `b` is measured against `|b|` instead.
pub fn part_relative_error(a: &Complex, b: &Complex) -> Float {
    let prec = cprec(b);
    let modulus = cabs(b);
    let part = |x: &Float, y: &Float| -> Float {
        let d = Float::with_val(prec, x - y).abs();
        if y.is_zero() {
            if modulus.is_zero() {
                d
            } else {
                d / &modulus
            }
        } else {
            d / Float::with_val(prec, y.abs_ref())
        }
    };
    let re = part(a.real(), b.real());
    let im = part(a.imag(), b.imag());
    re.max(&im)
}

/// Matching significant digits, `−log10` of [`part_relative_error`].
pub fn agreement_digits(a: &Complex, b: &Complex) -> f64 {
    let e = part_relative_error(a, b);
    if e.is_zero() {
        return f64::INFINITY;
    }
    -e.log10().to_f64()
}

/// A value carried by its natural logarithm.
///
/// Real values keep an explicit sign so that their imaginary part formats as
/// an exact zero.
#[derive(Clone, Debug, PartialEq)]
pub enum LogValue {
    Real { negative: bool, ln_abs: Float },
    Complex(Complex),
}

impl LogValue {
    pub fn prec(&self) -> u32 {
        match self {
            LogValue::Real { ln_abs, .. } => ln_abs.prec(),
            LogValue::Complex(z) => cprec(z),
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, LogValue::Real { .. })
    }

    /// The complex logarithm; real negatives get phase `π`.
    pub fn ln(&self) -> Complex {
        match self {
            LogValue::Real { negative, ln_abs } => {
                let prec = ln_abs.prec();
                let phase = if *negative { pi(prec) } else { Float::new(prec) };
                Complex::with_val(prec, (ln_abs, phase))
            }
            LogValue::Complex(z) => z.clone(),
        }
    }

    pub fn conj(&self) -> LogValue {
        match self {
            LogValue::Real { .. } => self.clone(),
            LogValue::Complex(z) => LogValue::Complex(z.clone().conj()),
        }
    }

    /// Natural log of the magnitude.
    pub fn ln_abs(&self) -> Float {
        match self {
            LogValue::Real { ln_abs, .. } => ln_abs.clone(),
            LogValue::Complex(z) => z.real().clone(),
        }
    }

    /// The value itself; fails if it overflows the exponent range.
    pub fn to_complex(&self) -> Result<Complex> {
        let prec = self.prec();
        let z = match self {
            LogValue::Real { negative, ln_abs } => {
                let mut x = ln_abs.clone().exp();
                if *negative {
                    x = -x;
                }
                Complex::with_val(prec, x)
            }
            LogValue::Complex(z) => z.clone().exp(),
        };
        if !z.real().is_finite() || !z.imag().is_finite() {
            return Err(Error::Range("value exceeds the exponent range".into()));
        }
        Ok(z)
    }

    /// Decimal scientific form with `digits` significant digits per part.
    pub fn to_bigsci(&self, digits: usize) -> Result<BigSciComplex> {
        match self {
            LogValue::Real { negative, ln_abs } => {
                let prec = ln_abs.prec();
                check_available(prec, ln_abs, &Float::new(prec), digits)?;
                let log10 = Float::with_val(prec, ln_abs / ln10(prec));
                Ok(BigSciComplex {
                    re: BigSci::from_log10(&log10, *negative, digits)?,
                    im: BigSci::zero(),
                })
            }
            LogValue::Complex(z) => format_bigsci(z, digits),
        }
    }
}

/// Bits of relative accuracy left in `exp(re + i·im)` when `re` and `im`
/// carry `prec` bits.
pub(crate) fn available_bits(prec: u32, re: &Float, im: &Float) -> f64 {
    let mag = |x: &Float| -> f64 {
        if x.is_zero() {
            0.0
        } else {
            x.to_f64().abs().max(f64::MIN_POSITIVE)
        }
    };
    let scale = 1.0 + mag(re) + mag(im);
    prec as f64 - scale.log2() - 2.0
}

pub(crate) fn check_available(prec: u32, re: &Float, im: &Float, digits: usize) -> Result<f64> {
    let avail = available_bits(prec, re, im);
    let need = (digits as f64 + 1.0) * LOG2_10;
    if avail < need {
        return Err(Error::Precision(format!(
            "log value carries {:.1} significant digits, {} requested",
            bits_to_digits(avail.max(0.0) as u32),
            digits
        )));
    }
    Ok(avail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(prec: u32, re: f64, im: f64) -> Complex {
        Complex::with_val(prec, (re, im))
    }

    #[test]
    fn clog_identity_and_branch() {
        let one = c(128, 1.0, 0.0);
        assert!(is_zero(&clog(&one).unwrap()));

        let l = clog(&c(128, 0.0, 1.0)).unwrap();
        assert!(l.real().is_zero());
        let half_pi = pi(128) / 2u32;
        assert_eq!(*l.imag(), half_pi);

        // branch edge: Im = +π, also for a negative-zero imaginary part
        let m2 = Complex::with_val(128, (-2, Float::with_val(128, -0.0)));
        let l = clog(&m2).unwrap();
        assert_eq!(*l.imag(), pi(128));
        assert_eq!(*l.real(), Float::with_val(128, 2u32).ln());
    }

    #[test]
    fn clog_of_zero_is_domain_error() {
        assert!(matches!(clog(&c(64, 0.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn cpow_cases() {
        let big = Integer::from(10u32).pow(100u32);
        let r = cpow_int_plus(&c(256, 1.0, 0.0), &big).unwrap();
        assert_eq!(r, Complex::with_val(256, 1u32));

        let e = Complex::with_val(256, Float::with_val(256, 1u32).exp());
        let e3 = cpow_int_plus(&e, &Integer::from(3)).unwrap();
        let want = Float::with_val(256, 3u32).exp();
        let rel = Float::with_val(256, e3.real() - &want).abs() / &want;
        assert!(rel < 1e-70);

        // 2i to the fifth by explicit multiplication
        let z = c(256, 0.0, 2.0);
        let mut prod = Complex::with_val(256, 1u32);
        for _ in 0..5 {
            prod *= &z;
        }
        let p = cpow_int_plus(&z, &Integer::from(5)).unwrap();
        let err = cabs(&Complex::with_val(256, &p - &prod));
        assert!(err < 1e-70);
        assert_eq!(prod, c(256, 0.0, 32.0));

        assert!(is_zero(&cpow_int_plus(&c(64, 0.0, 0.0), &Integer::from(7)).unwrap()));
        assert!(matches!(
            cpow_int_plus(&c(64, 3.0, 0.0), &big),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn precision_policy() {
        let n = Integer::from(10u32).pow(100u32);
        let p = Precision::for_order(100, &n, 10);
        assert_eq!(p.working_digits, 100 + 10 + 101);
        let p = Precision::for_order(100, &Integer::from(100_000), 10);
        assert_eq!(p.working_digits, 116);
        let p = Precision::for_order(50, &Integer::from(99), 10);
        assert_eq!(p.working_digits, 62);
        assert_eq!(Precision::for_order(5, &Integer::new(), 0).working_digits, 5);
        assert_eq!(digits_to_bits(1), MIN_PREC);
        assert_eq!(digits_to_bits(100), 333);
    }

    #[test]
    fn decimal_len_edges() {
        assert_eq!(decimal_len(&Integer::new()), 1);
        assert_eq!(decimal_len(&Integer::from(9)), 1);
        assert_eq!(decimal_len(&Integer::from(10)), 2);
        assert_eq!(decimal_len(&Integer::from(-99999)), 5);
        assert_eq!(decimal_len(&Integer::from(10u32).pow(100u32)), 101);
        assert_eq!(decimal_len(&(Integer::from(10u32).pow(100u32) - 1u32)), 100);
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let terms: Vec<Complex> = (1..=37).map(|k| c(128, k as f64, -(k as f64) / 2.0)).collect();
        let s = pairwise_sum(&terms, 128);
        assert_eq!(s, c(128, 703.0, -351.5));
        assert!(is_zero(&pairwise_sum(&[], 64)));
    }

    #[test]
    fn log_value_real_negative() {
        let v = LogValue::Real {
            negative: true,
            ln_abs: Float::with_val(128, 2u32).ln(),
        };
        let z = v.to_complex().unwrap();
        let err = cabs(&Complex::with_val(128, &z + 2u32));
        assert!(err < 1e-35);
        let s = v.to_bigsci(5).unwrap();
        assert_eq!(s.to_string(), "(-2.0000e0 + 0i)");
    }
}
