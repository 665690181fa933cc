//! Chernoff tail and union-bound arithmetic of the random construction.

use libm::{exp, log, log2, pow, sqrt};

use crate::build::random_selector;
use crate::params::{chernoff_alpha, chernoff_delta, isolation_gamma, union_beta};
use crate::rng::derive_seed;
use crate::selector::isolates;
use crate::{Error, Result};

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "k = {k} must be at least 2"
        )));
    }
    Ok(())
}

fn alpha(k: usize) -> f64 {
    let gamma = isolation_gamma(k);
    chernoff_alpha(gamma, chernoff_delta(gamma))
}

fn beta(k: usize) -> f64 {
    union_beta(alpha(k))
}

/// `alpha^m`: Chernoff bound on `Pr[h <= m/4]`, where `h` counts the sets of
/// a random length-`m` selector that isolate some element of a fixed k-set.
pub fn chernoff_tail(m: usize, k: usize) -> Result<f64> {
    check_k(k)?;
    Ok(pow(alpha(k), m as f64))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailSample {
    pub trials: u64,
    /// Trials with `h <= ⌊m/4⌋`.
    pub hits: u64,
    pub frequency: f64,
    /// `alpha^m`.
    pub bound: f64,
    /// `sqrt(bound·(1 − bound)/trials)`.
    pub bound_std_error: f64,
}

impl TailSample {
    /// `frequency <= bound + sigmas·bound_std_error`.
    pub fn within(&self, sigmas: f64) -> bool {
        self.frequency <= self.bound + sigmas * self.bound_std_error
    }
}

/// Samples `h` for `X = {0, .., k−1}` over `trials` random selectors of
/// length `m` on `[0, n)`; trial `t` uses seed `derive_seed(seed, t)`.
pub fn chernoff_empirical(
    k: usize,
    n: usize,
    m: usize,
    trials: u64,
    seed: u64,
) -> Result<TailSample> {
    check_k(k)?;
    if k > n {
        return Err(Error::KExceedsUniverse { k, n });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let subset: alloc::vec::Vec<usize> = (0..k).collect();
    let threshold = m / 4;
    let hits = (0..trials)
        .filter(|&t| {
            let sel = random_selector(k, n, m, derive_seed(seed, t));
            let h = sel
                .sets()
                .iter()
                .filter(|s| isolates(s, &subset).is_some())
                .count();
            h <= threshold
        })
        .count() as u64;
    let bound = chernoff_tail(m, k)?;
    Ok(TailSample {
        trials,
        hits,
        frequency: hits as f64 / trials as f64,
        bound,
        bound_std_error: sqrt(bound * (1.0 - bound) / trials as f64),
    })
}

/// Natural log of `beta^(m/k)·(m/k)^k`, the bound on the probability that a
/// random length-`m` selector misses one fixed instance.
pub fn ln_instance_failure_bound(k: usize, m: usize) -> Result<f64> {
    check_k(k)?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let r = m as f64 / k as f64;
    Ok(r * log(beta(k)) + k as f64 * log(r))
}

pub fn instance_failure_bound(k: usize, m: usize) -> Result<f64> {
    Ok(exp(ln_instance_failure_bound(k, m)?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnionBound {
    /// `ln(N^(4k)·(c·beta^c)^(k·log₂N))`.
    pub ln_value: f64,
    /// `ln_value < 0`, i.e. the union bound is below one.
    pub existence_certified: bool,
}

/// `N^(4k)·(c·beta^c)^(k·log₂N)` evaluated in log space.
pub fn union_bound_value(k: usize, n: usize, c: f64) -> Result<UnionBound> {
    check_k(k)?;
    if n < 2 {
        return Err(Error::InvalidParameter("N must be at least 2".into()));
    }
    if c.is_nan() || c <= 0.0 {
        return Err(Error::InvalidParameter("c must be positive".into()));
    }
    let (kf, nf) = (k as f64, n as f64);
    let ln_c_beta_c = log(c) + c * log(beta(k));
    let ln_value = 4.0 * kf * log(nf) + kf * log2(nf) * ln_c_beta_c;
    Ok(UnionBound {
        ln_value,
        existence_certified: ln_value < 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SizeParams;

    #[test]
    fn tail_values() {
        assert!((chernoff_tail(16, 2).unwrap() - exp(-1.0)).abs() < 1e-12);
        assert_eq!(chernoff_tail(0, 5).unwrap(), 1.0);
        assert!(chernoff_tail(3, 1).is_err());
    }

    #[test]
    fn empirical_tail_small() {
        let s = chernoff_empirical(2, 8, 40, 20_000, 3).unwrap();
        assert!(s.within(3.0), "{s:?}");
        assert_eq!(s, chernoff_empirical(2, 8, 40, 20_000, 3).unwrap());
    }

    #[test]
    fn union_bound_certifies_at_derived_c() {
        for k in 2..=8 {
            for n in [8usize, 16, 64, 1024] {
                if k > n {
                    continue;
                }
                let p = SizeParams::derive(k, n, None).unwrap();
                assert!(union_bound_value(k, n, p.c).unwrap().existence_certified);
            }
        }
    }

    #[test]
    fn union_bound_hand_computation() {
        // k = 4, N = 16, c = 0.001: 16·ln 16 + 4·4·(ln c + c·ln β).
        let b = beta(4);
        let hand = 16.0 * log(16.0) + 16.0 * (log(0.001) + 0.001 * log(b));
        let u = union_bound_value(4, 16, 0.001).unwrap();
        assert!((u.ln_value - hand).abs() < 1e-9);
        assert_eq!(u.existence_certified, hand < 0.0);
        // c = 1 gives c·beta^c = beta > 1/16, so the product exceeds one.
        assert!(!union_bound_value(4, 16, 1.0).unwrap().existence_certified);
    }

    #[test]
    fn union_bound_decreases_past_the_peak() {
        for k in [2usize, 3, 5] {
            let peak = -1.0 / log(beta(k));
            let mut prev = f64::INFINITY;
            for i in 0..200 {
                let c = peak + i as f64 * 2.0;
                let v = union_bound_value(k, 32, c).unwrap().ln_value;
                assert!(v <= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn failure_bound_form() {
        let v = instance_failure_bound(2, 20).unwrap();
        let expect = pow(beta(2), 10.0) * 100.0;
        assert!((v - expect).abs() < 1e-9 * expect);
    }
}
