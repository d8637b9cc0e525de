use rug::{Float, Integer};
use serde::{Deserialize, Serialize};
use stieltjes::{BigSci, BigSciComplex, Error, GammaResult};

/// One computed value as emitted by `compute` and `asymptotic`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub n: String,
    pub v: String,
    pub digits: u64,
    pub method: String,
    pub mantissa_re: String,
    pub exponent_re: String,
    pub mantissa_im: String,
    pub exponent_im: String,
    pub est_error: String,
    pub elapsed_s: f64,
    #[serde(rename = "M")]
    pub m: Option<u64>,
    pub q: Option<String>,
}

const CSV_HEADER: &str = "n,v,digits,method,mantissa_re,exponent_re,mantissa_im,exponent_im,est_error,elapsed_s,M,q";

impl Report {
    pub fn new(n: &Integer, v: &str, digits: u64, res: &GammaResult) -> Self {
        let (mantissa_re, exponent_re) = parts(&res.value.re);
        let (mantissa_im, exponent_im) = parts(&res.value.im);
        Report {
            n: n.to_string(),
            v: v.to_string(),
            digits,
            method: res.method_used.to_string(),
            mantissa_re,
            exponent_re,
            mantissa_im,
            exponent_im,
            est_error: sci(&res.est_error, 3),
            elapsed_s: res.elapsed.as_secs_f64(),
            m: res.plan.as_ref().map(|p| p.m),
            q: res.plan.as_ref().map(|p| sci(&p.q, 6)),
        }
    }

    /// The value back as a [`BigSciComplex`].
    pub fn value(&self) -> Result<BigSciComplex, Error> {
        Ok(BigSciComplex {
            re: part(&self.mantissa_re, &self.exponent_re)?,
            im: part(&self.mantissa_im, &self.exponent_im)?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let opt = |x: &Option<String>| x.clone().unwrap_or_default();
        format!(
            "{CSV_HEADER}\n{},{},{},{},{},{},{},{},{},{},{},{}\n",
            self.n,
            self.v,
            self.digits,
            self.method,
            self.mantissa_re,
            self.exponent_re,
            self.mantissa_im,
            self.exponent_im,
            self.est_error,
            self.elapsed_s,
            opt(&self.m.map(|m| m.to_string())),
            opt(&self.q),
        )
    }

    /// The value on the first line, diagnostics after it.
    pub fn to_plain(&self) -> String {
        let value = match self.value() {
            Ok(v) if v.is_real() => v.re.to_string(),
            Ok(v) => v.to_string(),
            Err(_) => String::new(),
        };
        let mut out = format!("{value}\nmethod     {}\n", self.method);
        if let Some(m) = self.m {
            out += &format!("M          {m}\n");
        }
        if let Some(q) = &self.q {
            out += &format!("q          {q}\n");
        }
        out += &format!("est_error  {}\nelapsed_s  {:.3}\n", self.est_error, self.elapsed_s);
        out
    }
}

fn parts(x: &BigSci) -> (String, String) {
    if x.is_zero() {
        ("0".into(), "0".into())
    } else {
        (x.mantissa(), x.exponent().to_string())
    }
}

fn part(mantissa: &str, exponent: &str) -> Result<BigSci, Error> {
    if mantissa == "0" {
        return Ok(BigSci::zero());
    }
    format!("{mantissa}e{exponent}").parse()
}

/// `x` in scientific notation with `sig` significant digits.
pub fn sci(x: &Float, sig: usize) -> String {
    format!("{:.*e}", sig, x)
}
