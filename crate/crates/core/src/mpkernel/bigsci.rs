use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use super::{check_available, cprec, ln10};
use crate::error::{Error, Result};

/// Decimal scientific value `±d.ddd…·10^e` with an arbitrary-size exponent.
///
/// Text form: optional `-`, mantissa `d.dd…d`, literal `e`, optional `-`,
/// exponent digits. Zero is written `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigSci {
    negative: bool,
    digits: String,
    exponent: Integer,
}

impl BigSci {
    pub fn zero() -> Self {
        BigSci {
            negative: false,
            digits: "0".into(),
            exponent: Integer::new(),
        }
    }

    /// Builds from a significant-digit string (no decimal point).
    pub fn new(negative: bool, digits: impl Into<String>, exponent: Integer) -> Result<Self> {
        let digits = digits.into();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(0, "mantissa must be a non-empty digit string"));
        }
        if digits.bytes().all(|b| b == b'0') {
            return Ok(BigSci::zero());
        }
        if digits.starts_with('0') {
            return Err(Error::parse(0, "leading mantissa digit must be nonzero"));
        }
        Ok(BigSci {
            negative,
            digits,
            exponent,
        })
    }

    /// Rounds `sign · 10^log10_abs` to `digits` significant digits
    /// (round-to-nearest-even on the scaled mantissa).
    pub fn from_log10(log10_abs: &Float, negative: bool, digits: usize) -> Result<Self> {
        if digits == 0 {
            return Err(Error::Domain("at least one digit is required".into()));
        }
        if !log10_abs.is_finite() {
            return Err(Error::Range("non-finite magnitude".into()));
        }
        let prec = log10_abs.prec();
        let floor = Float::with_val(prec, log10_abs.floor_ref());
        let mut exponent = floor.to_integer().expect("finite floor");
        let frac = Float::with_val(prec, log10_abs - &floor);
        let mantissa = frac.exp10();
        let scale = Integer::from(10u32).pow(digits as u32 - 1);
        let scaled = mantissa * &scale;
        let mut r = scaled.round_even().to_integer().expect("finite mantissa");
        let upper = Integer::from(&scale * 10u32);
        if r >= upper {
            r /= 10u32;
            exponent += 1u32;
        }
        BigSci::new(negative, r.to_string(), exponent)
    }

    pub fn is_zero(&self) -> bool {
        self.digits == "0"
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// Significant digits without sign or decimal point.
    pub fn digit_string(&self) -> &str {
        &self.digits
    }

    pub fn significant_digits(&self) -> usize {
        self.digits.len()
    }

    pub fn exponent(&self) -> &Integer {
        &self.exponent
    }

    /// Signed mantissa text, e.g. `-1.9919`; `0` for zero.
    pub fn mantissa(&self) -> String {
        let mut out = String::with_capacity(self.digits.len() + 2);
        if self.negative {
            out.push('-');
        }
        out.push_str(&self.digits[..1]);
        if self.digits.len() > 1 {
            out.push('.');
            out.push_str(&self.digits[1..]);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        if !out.is_zero() {
            out.negative = !out.negative;
        }
        out
    }

    /// Converts to a float when the exponent fits MPFR's range.
    pub fn to_float(&self, prec: u32) -> Option<Float> {
        if self.is_zero() {
            return Some(Float::new(prec));
        }
        self.exponent.to_i32().filter(|e| e.abs() < 300_000_000)?;
        let parsed = Float::parse(self.to_string()).ok()?;
        Some(Float::with_val(prec, parsed))
    }
}

impl fmt::Display for BigSci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        write!(f, "{}e{}", self.mantissa(), self.exponent)
    }
}

impl FromStr for BigSci {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let b = s.as_bytes();
        let mut i = 0;
        let mut negative = false;
        if i < b.len() && (b[i] == b'-' || b[i] == b'+') {
            negative = b[i] == b'-';
            i += 1;
        }
        if i >= b.len() || !b[i].is_ascii_digit() {
            return Err(Error::parse(i, "expected a mantissa digit"));
        }
        let mut digits = String::new();
        digits.push(b[i] as char);
        i += 1;
        if i < b.len() && b[i] == b'.' {
            i += 1;
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                digits.push(b[i] as char);
                i += 1;
            }
            if i == start {
                return Err(Error::parse(i, "expected digits after '.'"));
            }
        }
        if i == b.len() {
            if digits.bytes().all(|d| d == b'0') {
                return Ok(BigSci::zero());
            }
            return Err(Error::parse(i, "expected 'e' and an exponent"));
        }
        if b[i] != b'e' && b[i] != b'E' {
            return Err(Error::parse(i, "expected 'e'"));
        }
        i += 1;
        let exp_start = i;
        if i < b.len() && (b[i] == b'-' || b[i] == b'+') {
            i += 1;
        }
        let digit_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == digit_start {
            return Err(Error::parse(i, "expected exponent digits"));
        }
        if i != b.len() {
            return Err(Error::parse(i, "trailing characters"));
        }
        let exponent: Integer = s[exp_start..]
            .trim_start_matches('+')
            .parse()
            .map_err(|_| Error::parse(exp_start, "bad exponent"))?;
        if digits.starts_with('0') && !digits.bytes().all(|d| d == b'0') {
            return Err(Error::parse(0, "leading mantissa digit must be nonzero"));
        }
        BigSci::new(negative, digits, exponent)
    }
}

/// Complex value as two independently normalized [`BigSci`] parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigSciComplex {
    pub re: BigSci,
    pub im: BigSci,
}

impl BigSciComplex {
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl fmt::Display for BigSciComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "({} - {}i)", self.re, self.im.neg())
        } else {
            write!(f, "({} + {}i)", self.re, self.im)
        }
    }
}

impl FromStr for BigSciComplex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix("i)"))
            .ok_or_else(|| Error::parse(0, "expected '(<re> + <im>i)'"))?;
        let (split, negative) = match (inner.find(" + "), inner.find(" - ")) {
            (Some(p), _) => (p, false),
            (None, Some(p)) => (p, true),
            (None, None) => return Err(Error::parse(1, "expected ' + ' or ' - '")),
        };
        let re: BigSci = inner[..split].parse().map_err(|e| shift_pos(e, 1))?;
        let im: BigSci = inner[split + 3..]
            .parse()
            .map_err(|e| shift_pos(e, split + 4))?;
        Ok(BigSciComplex {
            re,
            im: if negative { im.neg() } else { im },
        })
    }
}

fn shift_pos(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

/// Decimal form of `exp(logvalue)`.
///
/// `logvalue = ln|x| + i·arg x`. Each part gets `digits` significant digits and
/// its own exponent `floor(log10 |part|)`. A part whose size is below the
/// noise floor of the carried phase is returned as exact zero.
pub fn format_bigsci(logvalue: &Complex, digits: usize) -> Result<BigSciComplex> {
    let prec = cprec(logvalue);
    let avail = check_available(prec, logvalue.real(), logvalue.imag(), digits)?;
    let (sin, cos) = Float::with_val(prec, logvalue.imag()).sin_cos(Float::new(prec));
    let ln10 = ln10(prec);
    let part = |trig: &Float| -> Result<BigSci> {
        if trig.is_zero() {
            return Ok(BigSci::zero());
        }
        let ln_trig = Float::with_val(prec, trig.abs_ref()).ln();
        // absolute phase error ~ 2^-avail; parts below it are noise
        let lost_bits = -ln_trig.to_f64() / std::f64::consts::LN_2;
        if lost_bits >= avail {
            return Ok(BigSci::zero());
        }
        if avail - lost_bits < (digits as f64 + 1.0) * std::f64::consts::LOG2_10 {
            return Err(Error::Precision(format!(
                "part is {:.1} digits below the magnitude; cannot resolve {} digits",
                lost_bits / std::f64::consts::LOG2_10,
                digits
            )));
        }
        let log10 = Float::with_val(prec, logvalue.real() + &ln_trig) / &ln10;
        BigSci::from_log10(&log10, trig.is_sign_negative(), digits)
    };
    Ok(BigSciComplex {
        re: part(&cos)?,
        im: part(&sin)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unity_and_negation() {
        let z = Complex::with_val(128, (0, 0));
        let s = format_bigsci(&z, 6).unwrap();
        assert_eq!(s.re.to_string(), "1.00000e0");
        assert!(s.im.is_zero());

        let pi = super::super::pi(256);
        let ln2 = Float::with_val(256, 2u32).ln();
        let s = format_bigsci(&Complex::with_val(256, (ln2, pi)), 8).unwrap();
        assert_eq!(s.re.to_string(), "-2.0000000e0");
        assert!(s.im.is_zero());
        assert_eq!(s.to_string(), "(-2.0000000e0 + 0i)");
    }

    #[test]
    fn large_exponent_mantissa() {
        // ln10·83432 + ln 1.99192730631…
        let prec = 400;
        let m: Float = Float::with_val(prec, Float::parse("1.9919273063125410956582").unwrap());
        let lv = Float::with_val(prec, super::super::ln10(prec) * 83432u32) + m.ln();
        let s = format_bigsci(&Complex::with_val(prec, (lv, 0)), 10).unwrap();
        assert_eq!(s.re.to_string(), "1.991927306e83432");
    }

    #[test]
    fn carry_into_exponent() {
        let prec = 200;
        let x = Float::with_val(prec, Float::parse("9.9999999").unwrap()).log10();
        let s = BigSci::from_log10(&x, false, 3).unwrap();
        assert_eq!(s.to_string(), "1.00e1");
    }

    #[test]
    fn precision_starved_log_value_is_rejected() {
        let prec = 64;
        let big = Float::with_val(prec, 1e15);
        let z = Complex::with_val(prec, (big, 0));
        assert!(matches!(format_bigsci(&z, 20), Err(Error::Precision(_))));
    }

    #[test]
    fn parse_errors_carry_position() {
        match "1.5x3".parse::<BigSci>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        match "-.5e3".parse::<BigSci>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 1),
            other => panic!("{other:?}"),
        }
        assert!("0.5e3".parse::<BigSci>().is_err());
        assert!("1.5e".parse::<BigSci>().is_err());
        assert_eq!("0".parse::<BigSci>().unwrap(), BigSci::zero());
        assert_eq!("7e-3".parse::<BigSci>().unwrap().mantissa(), "7");
    }

    #[test]
    fn complex_text_form() {
        let z = BigSciComplex {
            re: "1.5e3".parse().unwrap(),
            im: "-2.25e-1".parse().unwrap(),
        };
        assert_eq!(z.to_string(), "(1.5e3 - 2.25e-1i)");
        assert_eq!(z.to_string().parse::<BigSciComplex>().unwrap(), z);
    }

    proptest! {
        #[test]
        fn text_round_trip(
            neg in any::<bool>(),
            lead in 1u8..10,
            tail in "[0-9]{0,60}",
            exp in "-?[1-9][0-9]{0,120}",
        ) {
            let digits = format!("{lead}{tail}");
            let x = BigSci::new(neg, digits, exp.parse().unwrap()).unwrap();
            let back: BigSci = x.to_string().parse().unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn format_then_parse_reproduces_value(m in 1.0f64..10.0, e in -300i32..300, digits in 1usize..17) {
            let prec = 256;
            let x = Float::with_val(prec, m) * Float::with_val(prec, 10u32).pow(e);
            let s = BigSci::from_log10(&Float::with_val(prec, x.log10_ref()), false, digits).unwrap();
            let back = s.to_float(prec).unwrap();
            let again = BigSci::from_log10(&back.log10(), false, digits).unwrap();
            prop_assert_eq!(again, s);
        }
    }
}
