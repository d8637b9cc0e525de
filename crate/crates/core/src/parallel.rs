//! Data-parallel evaluation helpers.
//!
//! With the `parallel` feature (default) node evaluations are spread over the
//! rayon thread pool. Without it the same functions run sequentially. Output
//! order is the index order in both cases, so every reduction done on the
//! returned vectors is reproducible regardless of worker count.

use crate::error::Result;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluates `f(i)` for every `i` in `indices`, keeping index order.
#[cfg(feature = "parallel")]
pub(crate) fn try_map<T, F>(indices: &[usize], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    indices.par_iter().map(|&i| f(i)).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn try_map<T, F>(indices: &[usize], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    indices.iter().map(|&i| f(i)).collect()
}

/// Runs two independent computations, concurrently when possible.
#[cfg(feature = "parallel")]
pub(crate) fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    rayon::join(a, b)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    (a(), b())
}

/// Whether this build evaluates nodes on the rayon pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
