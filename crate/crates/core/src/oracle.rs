//! Small-n reference values straight from the Laurent expansion
//!
//! ```text
//! ζ(s,v) = 1/(s−1) + Σₙ (−1)ⁿ/n! · γₙ(v) · (s−1)ⁿ
//! ```
//!
//! `F(s) = ζ(s,v) − 1/(s−1)` is entire, so its Taylor coefficients at `s = 1`
//! come out of the trapezoidal rule on a circle `|s−1| = r` with geometric
//! convergence in the node count. ζ itself is Euler–Maclaurin summation.
//! None of this shares code with the quadrature paths.

use rug::ops::Pow;
use rug::{Assign, Complex, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::mpkernel::{cabs, clog, cprec, digits_to_bits, pairwise_sum, two_pi};
use crate::parallel;

/// Default contour radius around `s = 1`.
pub const DEFAULT_RADIUS: f64 = 0.25;
const INITIAL_NODES: usize = 64;
const MAX_NODES: usize = 4096;
const MAX_RETRIES: u32 = 4;

/// Euler–Maclaurin parameters for one `ζ(s, v)` evaluation.
#[derive(Clone, Debug)]
pub struct HurwitzParams {
    pub s: Complex,
    pub v: Complex,
    /// Terms summed directly before the tail.
    pub terms: u64,
    /// Number `p` of Bernoulli corrections `B₂ … B₂ₚ`.
    pub bernoulli_order: u64,
}

impl HurwitzParams {
    /// `terms = ⌈2.5·digits⌉ + |Im s|`, `p = 2⌈digits/4⌉`.
    pub fn for_digits(s: &Complex, v: &Complex, digits: u64) -> Self {
        let im = s.imag().to_f64().abs().ceil() as u64;
        HurwitzParams {
            s: s.clone(),
            v: v.clone(),
            terms: (2.5 * digits as f64).ceil() as u64 + im,
            bernoulli_order: 2 * digits.div_ceil(4),
        }
    }
}

/// `B₀, B₂, B₄, …, B₂ₚ` as exact rationals.
pub fn bernoulli_even(p: usize) -> Vec<Rational> {
    // Σ_{k<m+1} C(m+1,k) B_k = 0, m ≥ 1
    let top = 2 * p;
    let mut b: Vec<Rational> = Vec::with_capacity(top + 1);
    b.push(Rational::from(1));
    for m in 1..=top {
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from(bk * &binom);
            binom *= (m + 1 - k) as u32;
            binom /= (k + 1) as u32;
        }
        b.push(-acc / Integer::from(m + 1));
    }
    b.into_iter().step_by(2).collect()
}

/// Precomputed pieces shared by every `s` at one `v`.
pub struct HurwitzTable {
    v: Complex,
    terms: u64,
    /// `log(k + v)` for `k < terms`, and `log(terms + v)` last.
    logs: Vec<Complex>,
    /// `B₂ⱼ/(2j)!` for `j = 1..=p`.
    coeffs: Vec<Float>,
    prec: u32,
}

impl HurwitzTable {
    pub fn new(v: &Complex, digits: u64, max_im_s: f64) -> Result<Self> {
        let prec = digits_to_bits(digits + 10);
        let v = Complex::with_val(prec, v);
        if !v.real().is_sign_positive() || v.real().is_zero() {
            return Err(Error::Domain("Hurwitz zeta needs Re(v) > 0".into()));
        }
        let probe = Complex::with_val(prec, (1.0, max_im_s));
        let params = HurwitzParams::for_digits(&probe, &v, digits);
        let logs = (0..=params.terms)
            .map(|k| clog(&Complex::with_val(prec, &v + k)))
            .collect::<Result<Vec<_>>>()?;
        let bern = bernoulli_even(params.bernoulli_order as usize);
        let mut fact = Integer::from(1);
        let mut coeffs = Vec::with_capacity(bern.len());
        for (j, b) in bern.iter().enumerate().skip(1) {
            fact *= (2 * j - 1) as u32;
            fact *= (2 * j) as u32;
            coeffs.push(Float::with_val(prec, b) / Float::with_val(prec, &fact));
        }
        Ok(HurwitzTable {
            v,
            terms: params.terms,
            logs,
            coeffs,
            prec,
        })
    }

    /// `ζ(s,v) − 1/(s−1)`; finite at `s = 1`.
    pub fn regular_part(&self, s: &Complex) -> Result<Complex> {
        let prec = self.prec;
        let s = Complex::with_val(prec, s);
        let n = self.terms as usize;
        let head: Vec<Complex> = self.logs[..n]
            .iter()
            .map(|l| Complex::with_val(prec, -(Complex::with_val(prec, l * &s))).exp())
            .collect();
        let mut total = pairwise_sum(&head, prec);

        let log_nv = &self.logs[n];
        let nv = Complex::with_val(prec, &self.v + self.terms);
        let pow_neg_s = Complex::with_val(prec, -(Complex::with_val(prec, log_nv * &s))).exp();
        let s1 = Complex::with_val(prec, &s - 1u32);
        // [(N+v)^{1−s} − 1]/(s−1), which tends to −log(N+v) at s = 1
        let pow_one_minus = Complex::with_val(prec, &pow_neg_s * &nv);
        if s1.real().is_zero() && s1.imag().is_zero() {
            total -= log_nv;
        } else {
            total += (pow_one_minus - 1u32) / &s1;
        }
        total += Complex::with_val(prec, &pow_neg_s / 2u32);

        // Σ B₂ⱼ/(2j)! · s(s+1)…(s+2j−2) · (N+v)^{−s−2j+1}
        let inv_sq = Complex::with_val(prec, nv.square_ref()).recip();
        let mut p = Complex::with_val(prec, &pow_neg_s * &s) / &nv;
        let mut tail: Vec<Complex> = Vec::with_capacity(self.coeffs.len());
        for (j, c) in self.coeffs.iter().enumerate() {
            tail.push(Complex::with_val(prec, &p * c));
            let j = j as u32 + 1;
            let a = Complex::with_val(prec, &s + (2 * j - 1));
            let b = Complex::with_val(prec, &s + 2 * j);
            p = p * a * b * &inv_sq;
        }
        total += pairwise_sum(&tail, prec);
        Ok(total)
    }
}

/// ζ(s, v) to about `digits` digits.
pub fn hurwitz_zeta(s: &Complex, v: &Complex, digits: u64) -> Result<Complex> {
    let prec = digits_to_bits(digits + 10);
    let s1 = Complex::with_val(prec, s - 1u32);
    if s1.real().is_zero() && s1.imag().is_zero() {
        return Err(Error::Domain("ζ(s, v) has a pole at s = 1".into()));
    }
    let table = HurwitzTable::new(v, digits, s.imag().to_f64())?;
    let reg = table.regular_part(s)?;
    Ok(reg + s1.recip())
}

/// Laurent coefficients γ₀…γ_{nmax} at one `v`.
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub gammas: Vec<Complex>,
    pub nodes: usize,
    pub radius: f64,
    /// Largest coefficient change at the last node doubling.
    pub est_error: f64,
}

/// γₙ(v) for every `n ≤ nmax`, radius ¼.
pub fn gamma_oracle_all(nmax: u32, v: &Complex, digits: u64) -> Result<OracleResult> {
    gamma_oracle_all_with(nmax, v, digits, DEFAULT_RADIUS)
}

pub fn gamma_oracle_all_with(nmax: u32, v: &Complex, digits: u64, radius: f64) -> Result<OracleResult> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Domain("contour radius must lie in (0, 1)".into()));
    }
    let mut working = working_digits(nmax, digits, radius);
    for _ in 0..=MAX_RETRIES {
        let res = converge(nmax, v, digits, working, radius)?;
        let loss = res.1;
        if (working as f64) - loss >= (digits + 5) as f64 {
            return Ok(res.0);
        }
        working = working_digits(nmax, digits, radius) + loss.ceil() as u64;
    }
    Err(Error::Precision(format!(
        "oracle cancellation exceeds {working} working digits"
    )))
}

/// γₙ(v) at one `n`.
pub fn gamma_oracle(n: u32, v: &Complex, digits: u64) -> Result<Complex> {
    let mut all = gamma_oracle_all(n, v, digits)?;
    Ok(all.gammas.swap_remove(n as usize))
}

/// `digits + 15 + log10(nmax!) + nmax·log10(1/r)`.
fn working_digits(nmax: u32, digits: u64, radius: f64) -> u64 {
    let log_fact: f64 = (1..=nmax).map(|k| (k as f64).log10()).sum();
    let scale = nmax as f64 * (1.0 / radius).log10();
    digits + 15 + (log_fact + scale).ceil() as u64
}

/// Values `F(s_k)` on the circle plus the coefficient extraction.
struct Circle<'a> {
    table: &'a HurwitzTable,
    radius: Float,
    prec: u32,
}

impl Circle<'_> {
    fn node(&self, k: usize, count: usize) -> Complex {
        let prec = self.prec;
        let theta = Float::with_val(prec, two_pi(prec) * k as u64) / count as u64;
        let (sin, cos) = theta.sin_cos(Float::new(prec));
        Complex::with_val(prec, (cos * &self.radius + 1u32, sin * &self.radius))
    }

    fn values(&self, ks: &[usize], count: usize) -> Result<Vec<Complex>> {
        parallel::try_map(ks, |k| self.table.regular_part(&self.node(k, count)))
    }

    /// `γₙ = (−1)ⁿ n! r^{−n} (1/K) Σ F_k e^{−inθ_k}`.
    fn coefficients(&self, values: &[Complex], nmax: u32) -> (Vec<Complex>, f64) {
        let prec = self.prec;
        let count = values.len();
        let max_f = values.iter().map(cabs).fold(Float::new(64), |m, x| m.max(&x));
        let mut out = Vec::with_capacity(nmax as usize + 1);
        let mut loss: f64 = 0.0;
        let units: Vec<Complex> = (0..count)
            .map(|k| {
                let w = self.node(k, count) - 1u32;
                Complex::with_val(prec, w / &self.radius).conj()
            })
            .collect();
        let mut fact = Integer::from(1);
        for n in 0..=nmax {
            if n > 0 {
                fact *= n;
            }
            let terms: Vec<Complex> = values
                .iter()
                .enumerate()
                .map(|(k, f)| Complex::with_val(prec, f * &units[(n as usize * k) % count]))
                .collect();
            let sum = pairwise_sum(&terms, prec);
            let c = sum / count as u64;
            let rn = Float::with_val(prec, &self.radius).pow(n);
            let mut g = c / rn * Float::with_val(prec, &fact);
            if n % 2 == 1 {
                g = -g;
            }
            if self.table.v.imag().is_zero() {
                // real v: F(conj s) = conj F(s), so the coefficients are real
                g.mut_imag().assign(0u32);
            }
            let mag = Float::with_val(64, cabs(&g) / Float::with_val(prec, &fact))
                * Float::with_val(64, &self.radius).pow(n);
            if !mag.is_zero() {
                let l = Float::with_val(64, &max_f / mag).log10().to_f64();
                loss = loss.max(l);
            }
            out.push(g);
        }
        (out, loss)
    }
}

fn converge(nmax: u32, v: &Complex, digits: u64, working: u64, radius: f64) -> Result<(OracleResult, f64)> {
    let table = HurwitzTable::new(v, working, radius + 1.0)?;
    let prec = table.prec;
    let circle = Circle {
        table: &table,
        radius: Float::with_val(prec, radius),
        prec,
    };
    let tol = Float::with_val(prec, 10u32).pow(-(digits as i32) - 2);
    let mut count = INITIAL_NODES;
    let all: Vec<usize> = (0..count).collect();
    let mut values = circle.values(&all, count)?;
    let (mut prev, _) = circle.coefficients(&values, nmax);
    while count < MAX_NODES {
        // K → 2K reuses the old nodes at even positions
        let odd: Vec<usize> = (1..2 * count).step_by(2).collect();
        let fresh = circle.values(&odd, 2 * count)?;
        let mut merged = Vec::with_capacity(2 * count);
        for (old, new) in values.into_iter().zip(fresh) {
            merged.push(old);
            merged.push(new);
        }
        values = merged;
        count *= 2;
        let (next, loss) = circle.coefficients(&values, nmax);
        let worst = prev
            .iter()
            .zip(&next)
            .map(|(p, q)| relative(p, q))
            .fold(Float::new(64), |m, x| m.max(&x));
        if worst < tol {
            let result = OracleResult {
                gammas: next,
                nodes: count,
                radius,
                est_error: worst.to_f64(),
            };
            return Ok((result, loss));
        }
        prev = next;
    }
    Err(Error::NonConvergence(format!(
        "Laurent coefficients not stable at {MAX_NODES} contour nodes"
    )))
}

fn relative(a: &Complex, b: &Complex) -> Float {
    let d = Complex::with_val(cprec(b), b - a);
    let den = cabs(b);
    if den.is_zero() {
        return Float::with_val(64, cabs(&d));
    }
    Float::with_val(64, cabs(&d) / den)
}

/// Trapezoid estimate of γ₀…γ_{nmax} with exactly `nodes` points.
pub fn gamma_oracle_fixed(nmax: u32, v: &Complex, digits: u64, radius: f64, nodes: usize) -> Result<Vec<Complex>> {
    let table = HurwitzTable::new(v, working_digits(nmax, digits, radius), radius + 1.0)?;
    let prec = table.prec;
    let circle = Circle {
        table: &table,
        radius: Float::with_val(prec, radius),
        prec,
    };
    let all: Vec<usize> = (0..nodes).collect();
    let values = circle.values(&all, nodes)?;
    Ok(circle.coefficients(&values, nmax).0)
}
