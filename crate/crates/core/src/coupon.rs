//! Exact and sampled probabilities of the coupon-subsequence events.
//!
//! For a uniform sequence `r_0 .. r_{ℓ−1}` over the alphabet `{0, .., k−1}`:
//!
//! * `p(ℓ, k)`: probability that `0, 1, .., k−1` is *not* a subsequence.
//! * `p_jump(ℓ, k, q)`: with the alphabet cut into `q` consecutive blocks
//!   `B_0 .. B_{q−1}` of size `k/q`, probability that there is *no*
//!   subsequence picking one symbol of `B_0`, then `B_1`, ..., then
//!   `B_{q−1}` (a jump subsequence).
//!
//! Exact values are rationals over arbitrary-precision integers and are
//! computed two ways: a closed-form sum and full enumeration.

use core::cmp::Ordering;
use core::fmt;

use alloc::vec;
use alloc::vec::Vec;
use libm::{exp, pow, sqrt};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::rng::stream;
use crate::{Error, Result};

/// Default ceiling on `k^ℓ` for the enumeration oracles.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 24;

/// Base of the exponential factor in the jump-subsequence bound
/// `base^(ℓ/q)·(2ℓ/q)^q`. Unrelated to the isolation probability
/// [`crate::params::isolation_gamma`].
pub const JUMP_BOUND_BASE: f64 = 0.36787944117144233; // 1/e

/// A probability as a reduced fraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactProb {
    num: BigUint,
    den: BigUint,
}

impl ExactProb {
    /// # Panics
    /// If `den` is zero or `num > den`.
    pub fn new(num: BigUint, den: BigUint) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        assert!(num <= den, "probability above one");
        let g = num.gcd(&den);
        if g.is_zero() || g.is_one() {
            return Self { num, den };
        }
        Self {
            num: num / &g,
            den: den / &g,
        }
    }

    pub fn from_u64(num: u64, den: u64) -> Self {
        Self::new(BigUint::from(num), BigUint::from(den))
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn denominator(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Nearest-ish double; exact comparisons should use [`Self::le_f64`].
    pub fn to_f64(&self) -> f64 {
        let shift = self.den.bits().saturating_sub(62);
        let n = (&self.num >> shift).to_f64().unwrap_or(0.0);
        let d = (&self.den >> shift).to_f64().unwrap_or(1.0);
        n / d
    }

    /// Exact test `self <= x` for finite `x`.
    pub fn le_f64(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        if x.is_infinite() {
            return x > 0.0;
        }
        if x < 0.0 {
            return false;
        }
        let (mantissa, exponent) = decompose(x);
        let rhs = BigUint::from(mantissa) * &self.den;
        if exponent >= 0 {
            self.num <= rhs << exponent as u64
        } else {
            (&self.num << (-exponent) as u64) <= rhs
        }
    }
}

/// `x = mantissa · 2^exponent` for finite non-negative `x`.
fn decompose(x: f64) -> (u64, i32) {
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    }
}

impl PartialOrd for ExactProb {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactProb {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn big_pow(base: u64, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

fn big_binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from((n - i) as u64) / BigUint::from((i + 1) as u64);
    }
    acc
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "alphabet size k = {k} must be at least 2"
        )));
    }
    Ok(())
}

fn check_jump(k: usize, q: usize) -> Result<()> {
    if q == 0 || q > k {
        return Err(Error::InvalidQ { k, q });
    }
    if !k.is_multiple_of(q) {
        return Err(Error::QNotDivisor { k, q });
    }
    Ok(())
}

fn check_enumeration(ell: usize, k: usize, budget: u128) -> Result<()> {
    let required = (0..ell)
        .try_fold(1u128, |acc, _| acc.checked_mul(k as u128))
        .unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// `p(ℓ, k) = k^(−ℓ) · Σ_{j<k} C(ℓ, j)·(k−1)^(ℓ−j)`.
///
/// Terms are counted by the leftmost greedy embedding of `0, .., j−1`
/// that cannot be extended by `j`. Equals one when `ℓ < k`.
pub fn p_exact(ell: usize, k: usize) -> Result<ExactProb> {
    check_k(k)?;
    let num = (0..k.min(ell + 1)).fold(BigUint::zero(), |acc, j| {
        acc + big_binomial(ell, j) * big_pow(k as u64 - 1, ell - j)
    });
    Ok(ExactProb::new(num, big_pow(k as u64, ell)))
}

/// `p_jump(ℓ, k, q) = k^(−ℓ) · Σ_{j<q} C(ℓ, j)·(k/q)^j·(k − k/q)^(ℓ−j)`.
/// Requires `q | k`.
pub fn p_jump_exact(ell: usize, k: usize, q: usize) -> Result<ExactProb> {
    check_jump(k, q)?;
    let block = (k / q) as u64;
    let rest = k as u64 - block;
    let num = (0..q.min(ell + 1)).fold(BigUint::zero(), |acc, j| {
        acc + big_binomial(ell, j) * big_pow(block, j) * big_pow(rest, ell - j)
    });
    Ok(ExactProb::new(num, big_pow(k as u64, ell)))
}

/// Odometer over all `k^ℓ` sequences, counting those for which `hit`
/// returns false.
fn count_sequences(ell: usize, k: usize, hit: impl Fn(&[usize]) -> bool) -> ExactProb {
    let mut seq = vec![0usize; ell];
    let mut misses: u128 = 0;
    let mut total: u128 = 0;
    loop {
        total += 1;
        if !hit(&seq) {
            misses += 1;
        }
        let mut i = 0;
        loop {
            if i == ell {
                return ExactProb::new(BigUint::from(misses), BigUint::from(total));
            }
            seq[i] += 1;
            if seq[i] < k {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// Greedy: does `seq` contain `0, 1, .., k−1` as a subsequence?
pub fn contains_identity(seq: &[usize], k: usize) -> bool {
    let mut want = 0;
    for &x in seq {
        if want < k && x == want {
            want += 1;
        }
    }
    want == k
}

/// Greedy: does `seq` contain one symbol from each block in order?
pub fn contains_jump(seq: &[usize], block_of: &[usize], q: usize) -> bool {
    let mut want = 0;
    for &x in seq {
        if want < q && block_of[x] == want {
            want += 1;
        }
    }
    want == q
}

/// Block index of each symbol when `k` symbols are cut into `q` consecutive
/// blocks; the first `k mod q` blocks get `⌈k/q⌉` symbols, the rest `⌊k/q⌋`.
pub fn block_partition(k: usize, q: usize) -> Vec<usize> {
    let (small, extra) = (k / q, k % q);
    let mut out = Vec::with_capacity(k);
    for h in 0..q {
        let size = small + usize::from(h < extra);
        out.extend(core::iter::repeat_n(h, size));
    }
    out
}

/// `p(ℓ, k)` by enumerating all `k^ℓ` sequences.
pub fn p_bruteforce(ell: usize, k: usize, budget: u128) -> Result<ExactProb> {
    check_k(k)?;
    check_enumeration(ell, k, budget)?;
    Ok(count_sequences(ell, k, |s| contains_identity(s, k)))
}

/// `p_jump(ℓ, k, q)` by enumerating all `k^ℓ` sequences. Requires `q | k`.
pub fn p_jump_bruteforce(ell: usize, k: usize, q: usize, budget: u128) -> Result<ExactProb> {
    check_jump(k, q)?;
    check_enumeration(ell, k, budget)?;
    let block_of = block_partition(k, q);
    Ok(count_sequences(ell, k, |s| contains_jump(s, &block_of, q)))
}

/// `e^(−ℓ/k)·(2ℓ/k)^k`, an upper bound on `p(ℓ, k)` for `ℓ >= k >= 2`.
pub fn p_bound(ell: usize, k: usize) -> Result<f64> {
    check_k(k)?;
    if ell < k {
        return Err(Error::InvalidParameter(alloc::format!(
            "bound needs ell >= k (ell = {ell}, k = {k})"
        )));
    }
    let (l, kf) = (ell as f64, k as f64);
    Ok(exp(-l / kf) * pow(2.0 * l / kf, kf))
}

/// `base^(ℓ/q)·(2ℓ/q)^q` with `base = 1/e`, an upper bound on
/// `p_jump(ℓ, k, q)` for `ℓ >= q >= 1`.
pub fn p_jump_bound(ell: usize, k: usize, q: usize) -> Result<f64> {
    if q == 0 || q > k {
        return Err(Error::InvalidQ { k, q });
    }
    if ell < q {
        return Err(Error::InvalidParameter(alloc::format!(
            "bound needs ell >= q (ell = {ell}, q = {q})"
        )));
    }
    let (l, qf) = (ell as f64, q as f64);
    Ok(pow(JUMP_BOUND_BASE, l / qf) * pow(2.0 * l / qf, qf))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    /// `sqrt(p̂(1 − p̂)/trials)`.
    pub std_error: f64,
    pub trials: u64,
}

/// Frequency estimate of `p(ℓ, k)` (or `p_jump(ℓ, k, q)` when `q` is given;
/// any `1 <= q <= k` with the [`block_partition`] blocks).
///
/// All draws come sequentially from stream 0 of `seed`.
pub fn p_monte_carlo(
    ell: usize,
    k: usize,
    q: Option<usize>,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    match q {
        Some(q) if q == 0 || q > k => return Err(Error::InvalidQ { k, q }),
        Some(_) if k == 0 => return Err(Error::InvalidParameter("k must be at least 1".into())),
        None => check_k(k)?,
        _ => {}
    }
    let block_of = q.map(|q| block_partition(k, q));
    let mut rng = stream(seed, 0);
    let mut seq = vec![0usize; ell];
    let mut misses = 0u64;
    for _ in 0..trials {
        for x in seq.iter_mut() {
            *x = rng.gen_range(0..k);
        }
        let hit = match (&block_of, q) {
            (Some(b), Some(q)) => contains_jump(&seq, b, q),
            _ => contains_identity(&seq, k),
        };
        if !hit {
            misses += 1;
        }
    }
    let p = misses as f64 / trials as f64;
    Ok(McEstimate {
        estimate: p,
        std_error: sqrt(p * (1.0 - p) / trials as f64),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    const BUDGET: u128 = DEFAULT_ENUMERATION_BUDGET;

    #[test]
    fn exact_examples() {
        assert_eq!(p_exact(2, 2).unwrap(), ExactProb::from_u64(3, 4));
        assert_eq!(p_exact(3, 2).unwrap(), ExactProb::from_u64(1, 2));
        assert_eq!(p_exact(4, 2).unwrap(), ExactProb::from_u64(5, 16));
        for k in 2..6 {
            assert!(p_exact(k - 1, k).unwrap().is_one());
        }
        assert!(p_exact(3, 1).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(
            p_bruteforce(2, 2, BUDGET).unwrap(),
            ExactProb::from_u64(3, 4)
        );
        assert_eq!(
            p_bruteforce(4, 2, BUDGET).unwrap(),
            ExactProb::from_u64(5, 16)
        );
        assert!(matches!(
            p_bruteforce(30, 2, BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn exact_matches_enumeration() {
        for k in 2..=4 {
            for ell in 1..=8 {
                assert_eq!(
                    p_exact(ell, k).unwrap(),
                    p_bruteforce(ell, k, BUDGET).unwrap(),
                    "ell={ell} k={k}"
                );
            }
        }
    }

    #[test]
    fn jump_examples() {
        for ell in 1..8 {
            for k in [2, 3, 6] {
                assert!(p_jump_exact(ell, k, 1).unwrap().is_zero());
            }
        }
        for k in [2, 3] {
            for ell in 1..=8 {
                assert_eq!(p_jump_exact(ell, k, k).unwrap(), p_exact(ell, k).unwrap());
            }
        }
        assert_eq!(p_jump_exact(2, 2, 2).unwrap(), ExactProb::from_u64(3, 4));
        assert_eq!(p_jump_exact(2, 4, 2).unwrap(), ExactProb::from_u64(3, 4));
        assert_eq!(
            p_jump_bruteforce(2, 4, 2, BUDGET).unwrap(),
            ExactProb::from_u64(3, 4)
        );
        assert!(p_jump_exact(1, 4, 2).unwrap().is_one());
        assert_eq!(
            p_jump_exact(2, 4, 3),
            Err(Error::QNotDivisor { k: 4, q: 3 })
        );
        assert_eq!(
            p_jump_bruteforce(2, 4, 3, BUDGET),
            Err(Error::QNotDivisor { k: 4, q: 3 })
        );
    }

    #[test]
    fn bound_examples() {
        let b = p_bound(4, 2).unwrap();
        assert!((b - 16.0 * exp(-2.0)).abs() < 1e-12 && (b - 2.1654).abs() < 1e-4);
        assert!(p_exact(4, 2).unwrap().le_f64(b));
        let b = p_bound(2, 2).unwrap();
        assert!((b - 1.4715).abs() < 1e-4);
        assert!(p_bound(1, 2).is_err());
        let b = p_jump_bound(2, 4, 2).unwrap();
        assert!((b - 4.0 * exp(-1.0)).abs() < 1e-12);
        let b = p_jump_bound(5, 3, 1).unwrap();
        assert!((b - 10.0 * exp(-5.0)).abs() < 1e-12 && (b - 0.0674).abs() < 1e-4);
        assert!(p_jump_bound(1, 4, 2).is_err());
    }

    #[test]
    fn bound_dominates_on_grid() {
        for k in 2..=6 {
            for ell in k..=40 {
                assert!(
                    p_exact(ell, k).unwrap().le_f64(p_bound(ell, k).unwrap()),
                    "ell={ell} k={k}"
                );
            }
        }
    }

    #[test]
    fn monotone_in_length() {
        for k in 2..=5 {
            for ell in 1..30 {
                assert!(p_exact(ell + 1, k).unwrap() <= p_exact(ell, k).unwrap());
            }
        }
    }

    #[test]
    fn exact_comparison_with_floats() {
        let half = ExactProb::from_u64(1, 2);
        assert!(half.le_f64(0.5));
        assert!(!half.le_f64(0.5f64.next_down()));
        // 1/3 rounds down to a double just below one third.
        assert!(!ExactProb::from_u64(1, 3).le_f64(1.0 / 3.0));
        assert!(ExactProb::from_u64(1, 3).le_f64((1.0f64 / 3.0).next_up()));
        assert!(ExactProb::from_u64(0, 1).le_f64(0.0));
        assert!(!ExactProb::from_u64(1, 1u64 << 60).le_f64(0.0));
        assert!(ExactProb::from_u64(1, 1u64 << 60).le_f64(1e-18));
        assert!(!ExactProb::from_u64(1, 1u64 << 60).le_f64(8e-19));
        assert!(ExactProb::from_u64(1, 1u64 << 60).le_f64(libm::ldexp(1.0, -60)));
        assert_eq!(ExactProb::from_u64(3, 4).to_f64(), 0.75);
        assert_eq!(ExactProb::from_u64(6, 8).to_string(), "3/4");
    }

    #[test]
    fn partition_blocks() {
        assert_eq!(block_partition(4, 2), vec![0, 0, 1, 1]);
        assert_eq!(block_partition(5, 2), vec![0, 0, 0, 1, 1]);
        assert_eq!(block_partition(3, 3), vec![0, 1, 2]);
    }

    #[test]
    fn monte_carlo() {
        let est = p_monte_carlo(3, 2, None, 100_000, 1).unwrap();
        assert!((est.estimate - 0.5).abs() <= 3.0 * est.std_error);
        let est = p_monte_carlo(2, 4, Some(2), 100_000, 2).unwrap();
        assert!((est.estimate - 0.75).abs() <= 3.0 * est.std_error);
        let one = p_monte_carlo(3, 2, None, 1, 3).unwrap();
        assert!(one.estimate == 0.0 || one.estimate == 1.0);
        assert_eq!(
            p_monte_carlo(3, 2, None, 10, 7),
            p_monte_carlo(3, 2, None, 10, 7)
        );
        // Non-divisor partitions are allowed here.
        assert!(p_monte_carlo(4, 5, Some(2), 10, 1).is_ok());
    }
}
