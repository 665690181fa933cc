//! Random construction and Las Vegas generate-and-verify.

use alloc::vec::Vec;
use rand::Rng;

use crate::params::SizeParams;
use crate::rng::{derive_seed, stream};
use crate::selector::Selector;
use crate::verify::{verify, Budget, SizeMode, Target};
use crate::{Error, Result};

/// A random length-`m` selector over `[0, n)`: each label joins each set
/// independently with probability `1/k`.
///
/// Set `t` is drawn from stream `t` of key `seed`, one uniform `[0, 1)`
/// double per label in increasing label order; a label is in iff its draw
/// is `< 1/k`. A shorter selector is therefore always a prefix of a longer
/// one with the same seed.
///
/// # Panics
/// If `k == 0`.
pub fn random_selector(k: usize, n: usize, m: usize, seed: u64) -> Selector {
    assert!(k >= 1, "inclusion probability 1/k needs k >= 1");
    let p = 1.0 / k as f64;
    let mut sel = Selector::empty(n);
    for t in 0..m {
        let mut rng = stream(seed, t as u64);
        let members: Vec<usize> = (0..n).filter(|_| rng.gen::<f64>() < p).collect();
        sel.push(members).expect("labels are in range");
    }
    sel
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildConfig {
    pub seed: u64,
    pub max_attempts: usize,
    /// Selector length; [`SizeParams::m`] when absent.
    pub m_override: Option<usize>,
    pub size_mode: SizeMode,
    pub target: Target,
    pub budget: Budget,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_attempts: 50,
            m_override: None,
            size_mode: SizeMode::UpTo,
            target: Target::Permutation,
            budget: Budget::DEFAULT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Built {
    pub selector: Selector,
    /// 1-based index of the attempt that verified.
    pub attempts: usize,
}

fn target_q(target: Target) -> Option<usize> {
    match target {
        Target::KqPermutation { q } => Some(q),
        _ => None,
    }
}

fn formula_length(k: usize, n: usize, target: Target) -> Result<usize> {
    Ok(SizeParams::derive(k, n, target_q(target))?.m)
}

/// Generates random selectors until one verifies.
///
/// Attempt `a` (0-based) uses seed `derive_seed(config.seed, a)`. Attempts
/// run sequentially, so the result is the lowest-numbered success.
pub fn build_verified(k: usize, n: usize, config: &BuildConfig) -> Result<Built> {
    if k > n {
        return Err(Error::KExceedsUniverse { k, n });
    }
    let m = match config.m_override {
        Some(m) => m,
        None => formula_length(k, n, config.target)?,
    };
    for attempt in 0..config.max_attempts {
        let selector = random_selector(k.max(1), n, m, derive_seed(config.seed, attempt as u64));
        if verify(&selector, k, config.target, config.size_mode, config.budget)?.is_ok() {
            return Ok(Built {
                selector,
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::AttemptsExhausted {
        attempts: config.max_attempts,
    })
}

/// Smallest `m` at which one of `trials_per_m` random selectors verifies.
///
/// Linear scan `m = 1, 2, ...`. Trial `t` uses seed
/// `derive_seed(config.seed, t)` at every `m`, so the scan follows growing
/// prefixes of the same `trials_per_m` random sequences; by monotonicity the
/// answer is the shortest verifying prefix among them. The scan stops at
/// `config.m_override` if set, else at the formula length (or `k·N` when
/// `k < 2`), and reports [`Error::AttemptsExhausted`] past it.
pub fn minimal_m_search(
    k: usize,
    n: usize,
    config: &BuildConfig,
    trials_per_m: usize,
) -> Result<usize> {
    if k > n {
        return Err(Error::KExceedsUniverse { k, n });
    }
    let ceiling = match config.m_override {
        Some(m) => m,
        None if k < 2 => k.max(1) * n,
        None => formula_length(k, n, config.target)?,
    };
    let seeds: Vec<u64> = (0..trials_per_m as u64)
        .map(|t| derive_seed(config.seed, t))
        .collect();
    for m in 1..=ceiling {
        for &seed in &seeds {
            let selector = random_selector(k.max(1), n, m, seed);
            if verify(&selector, k, config.target, config.size_mode, config.budget)?.is_ok() {
                return Ok(m);
            }
        }
    }
    Err(Error::AttemptsExhausted {
        attempts: trials_per_m.saturating_mul(ceiling),
    })
}

/// Builds a `(k, n)`-permutation selector verified in [`SizeMode::UpTo`]
/// without knowing a good length in advance.
///
/// Starts at `m = 2k` and multiplies by 3/2 after `attempts_per_length`
/// failures, up to the formula length. For `k = 1` the single set `[0, n)`
/// is returned.
pub fn grow_verified(
    k: usize,
    n: usize,
    seed: u64,
    attempts_per_length: usize,
    budget: Budget,
) -> Result<Built> {
    if k == 1 {
        return build_verified(
            1,
            n,
            &BuildConfig {
                seed,
                max_attempts: 1,
                m_override: Some(1),
                budget,
                ..Default::default()
            },
        );
    }
    let ceiling = formula_length(k, n, Target::Permutation)?;
    let mut m = 2 * k;
    let mut tried = 0;
    loop {
        let config = BuildConfig {
            seed: derive_seed(seed, m as u64),
            max_attempts: attempts_per_length,
            m_override: Some(m),
            size_mode: SizeMode::UpTo,
            target: Target::Permutation,
            budget,
        };
        match build_verified(k, n, &config) {
            Ok(built) => {
                return Ok(Built {
                    attempts: tried + built.attempts,
                    ..built
                })
            }
            Err(Error::AttemptsExhausted { attempts }) if m < ceiling => {
                tried += attempts;
                m = (m * 3 / 2 + 1).min(ceiling);
            }
            Err(e) => return Err(e),
        }
    }
}
