//! Size constants of the random construction.

use core::fmt;

use libm::{ceil, exp, log2, pow};

use crate::{Error, Result};

/// Step and upper end of the grid searched for `c`.
pub const C_GRID_STEP: f64 = 0.25;
pub const C_GRID_MAX: f64 = 1024.0;

/// Constants for a `(k, N)` (or `(k, q, N)`) permutation selector of length
/// `m = ⌈c·k·k·log₂N⌉` (or `⌈c·k·q·log₂N⌉`).
///
/// * `gamma = (1 − 1/k)^(k−1)`: probability that one random set isolates
///   some element of a fixed k-set under inclusion probability `1/k`.
/// * `delta = 1 − 1/(4·gamma)`, so that `(1 − delta)·gamma·m = m/4`.
/// * `alpha = exp(−delta²·gamma/2)`: per-set Chernoff base.
/// * `beta = max(alpha, exp(−1/4))`.
/// * `c`: smallest grid value with `c·beta^c < 1/16`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SizeParams {
    pub k: usize,
    pub n: usize,
    pub q: Option<usize>,
    pub gamma: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub m: usize,
    /// `m` was raised to `2k`.
    pub clamped: bool,
}

pub fn isolation_gamma(k: usize) -> f64 {
    let k = k as f64;
    pow(1.0 - 1.0 / k, k - 1.0)
}

pub fn chernoff_delta(gamma: f64) -> f64 {
    1.0 - 1.0 / (4.0 * gamma)
}

pub fn chernoff_alpha(gamma: f64, delta: f64) -> f64 {
    exp(-delta * delta * gamma / 2.0)
}

pub fn union_beta(alpha: f64) -> f64 {
    alpha.max(exp(-0.25))
}

/// `c·beta^c`.
pub fn c_beta_c(c: f64, beta: f64) -> f64 {
    c * pow(beta, c)
}

/// Smallest `c` on the grid `{0.25, 0.5, ..., 1024}` with `c·beta^c < 1/16`.
pub fn smallest_c(beta: f64) -> Option<f64> {
    let steps = (C_GRID_MAX / C_GRID_STEP) as usize;
    (1..=steps)
        .map(|i| i as f64 * C_GRID_STEP)
        .find(|&c| c_beta_c(c, beta) < 1.0 / 16.0)
}

impl SizeParams {
    pub fn derive(k: usize, n: usize, q: Option<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("N must be at least 2".into()));
        }
        if k < 2 {
            return Err(Error::InvalidParameter("size constants need k >= 2".into()));
        }
        if k > n {
            return Err(Error::KExceedsUniverse { k, n });
        }
        if let Some(q) = q {
            if q == 0 || q > k {
                return Err(Error::InvalidQ { k, q });
            }
        }
        let gamma = isolation_gamma(k);
        let delta = chernoff_delta(gamma);
        let alpha = chernoff_alpha(gamma, delta);
        let beta = union_beta(alpha);
        let c = smallest_c(beta).ok_or_else(|| {
            Error::InvalidParameter(alloc::format!("no c <= {C_GRID_MAX} for k = {k}"))
        })?;
        let width = q.unwrap_or(k) as f64;
        let raw = ceil(c * k as f64 * width * log2(n as f64)) as usize;
        let clamped = raw < 2 * k;
        Ok(Self {
            k,
            n,
            q,
            gamma,
            delta,
            alpha,
            beta,
            c,
            m: raw.max(2 * k),
            clamped,
        })
    }
}

/// Flat `key=value` report.
impl fmt::Display for SizeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} N={} q=", self.k, self.n)?;
        match self.q {
            Some(q) => write!(f, "{q}")?,
            None => f.write_str("-")?,
        }
        write!(
            f,
            " gamma={} delta={} alpha={} beta={} c={} m={} clamped={}",
            self.gamma, self.delta, self.alpha, self.beta, self.c, self.m, self.clamped
        )
    }
}
