use serde::{Deserialize, Serialize};
use stieltjes::{BigSci, Error};

use crate::args::{parse_order, parse_param};

/// Reference values at 100 digits, built into the binary.
pub const BUILTIN: &str = include_str!("../data/golden.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub n: String,
    pub v: String,
    pub digits: u64,
    pub mantissa_re: String,
    pub exponent_re: String,
    pub mantissa_im: String,
    pub exponent_im: String,
}

impl GoldenEntry {
    pub fn re(&self) -> Result<BigSci, Error> {
        bigsci(&self.mantissa_re, &self.exponent_re)
    }

    pub fn im(&self) -> Result<BigSci, Error> {
        bigsci(&self.mantissa_im, &self.exponent_im)
    }
}

fn bigsci(mantissa: &str, exponent: &str) -> Result<BigSci, Error> {
    if mantissa == "0" {
        return Ok(BigSci::zero());
    }
    format!("{mantissa}e{exponent}").parse()
}

/// Parses and validates a golden set.
pub fn load(text: &str) -> Result<Vec<GoldenEntry>, Error> {
    let entries: Vec<GoldenEntry> = serde_json::from_str(text).map_err(|e| Error::Parse {
        pos: e.column(),
        msg: format!("golden file line {}: {e}", e.line()),
    })?;
    for e in &entries {
        parse_order(&e.n)?;
        parse_param(&e.v)?;
        e.re()?;
        e.im()?;
    }
    Ok(entries)
}

pub fn builtin() -> Vec<GoldenEntry> {
    load(BUILTIN).expect("built-in golden set is valid")
}

/// Leading significant digits two values share; equal values count all of them.
pub fn matching_digits(got: &BigSci, want: &BigSci) -> usize {
    if got == want {
        return want.significant_digits();
    }
    if got.is_negative() != want.is_negative() || got.exponent() != want.exponent() {
        return 0;
    }
    got.digit_string()
        .bytes()
        .zip(want.digit_string().bytes())
        .take_while(|(a, b)| a == b)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_set_is_complete() {
        let g = builtin();
        assert_eq!(g.len(), 6);
        assert_eq!(g.iter().filter(|e| e.v == "2+3i").count(), 2);
        assert!(g.iter().all(|e| e.re().unwrap().significant_digits() == 100));
        assert_eq!(g[3].exponent_re.len(), 101);
    }

    #[test]
    fn malformed_file_is_a_parse_error() {
        assert!(matches!(load("[{\"n\": 5}]"), Err(Error::Parse { .. })));
        let bad = BUILTIN.replacen("\"100000\"", "\"1x0000\"", 1);
        assert!(matches!(load(&bad), Err(Error::Parse { pos: 1, .. })));
    }

    #[test]
    fn digit_matching() {
        let a: BigSci = "1.2345e10".parse().unwrap();
        let b: BigSci = "1.2399e10".parse().unwrap();
        assert_eq!(matching_digits(&a, &b), 3);
        assert_eq!(matching_digits(&a, &a), 5);
        let c: BigSci = "1.2345e11".parse().unwrap();
        assert_eq!(matching_digits(&a, &c), 0);
    }
}
