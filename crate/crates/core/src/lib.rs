//! Generalized Stieltjes constants γₙ(v) at arbitrary precision.
//!
//! γₙ(v) are the Laurent coefficients of the Hurwitz zeta function at its
//! pole, `ζ(s,v) = 1/(s−1) + Σ (−1)ⁿ/n!·γₙ(v)·(s−1)ⁿ`. For large `n` they are
//! computed by double-exponential quadrature along a contour through the
//! saddle point of the integral representation; this works for `n` as large
//! as 10¹⁰⁰ in a fraction of a second. Small `n` use a whole-line DE rule, and
//! [`oracle`] provides independent reference values from ζ itself.
//!
//! ```no_run
//! use rug::{Complex, Integer};
//! use stieltjes::{gamma, GammaRequest};
//!
//! let req = GammaRequest::new(Integer::from(100_000), Complex::with_val(64, 1), 30);
//! let res = gamma(&req).unwrap();
//! println!("{}", res.value.re); // 1.99192730631254109565822724316e83432
//! ```

pub mod dequad;
pub mod error;
pub mod lambertw;
pub mod mpkernel;
pub mod oracle;
mod parallel;
pub mod saddle;
pub mod stieltjes;

pub use error::{Error, Result};
pub use mpkernel::{BigSci, BigSciComplex, LogValue};
pub use parallel::is_parallel;
pub use saddle::ContourMode;
pub use stieltjes::{gamma, GammaRequest, GammaResult, Method};
