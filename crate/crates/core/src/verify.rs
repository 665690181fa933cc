//! Exhaustive verifiers.
//!
//! Every verifier enumerates the instance space in a fixed order (subset
//! size ascending, then `X` lexicographically, then `π` lexicographically)
//! and reports the first failure, which is therefore the smallest one.
//! Before enumerating, the cost of the run is estimated in primitive checks
//! and compared against a [`Budget`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::combinatorics::{binomial, factorial, next_permutation, Combinations};
use crate::lis::lis_length;
use crate::selector::{isolates, Instance, Label, Selector};
use crate::{Error, Result};

/// Which subset sizes a verifier must cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SizeMode {
    /// `|X| = k` only.
    Exact,
    /// Every `1 <= |X| <= k`.
    UpTo,
}

impl SizeMode {
    fn sizes(self, k: usize) -> core::ops::RangeInclusive<usize> {
        match self {
            SizeMode::Exact => k..=k,
            SizeMode::UpTo => 1..=k,
        }
    }
}

/// Ceiling on primitive checks (one set-membership or table step each).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Budget {
    pub const DEFAULT: Budget = Budget(100_000_000);
    pub const UNLIMITED: Budget = Budget(u128::MAX);
}

impl Default for Budget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// The property a selector is checked (or built) for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    /// Strong `(k, N)`-selector: every element of every `X` is isolated.
    Strong,
    /// `(k, N)`-permutation selector.
    Permutation,
    /// `(k, q, N)`-selector: at least `q` elements of every `X` are isolated.
    Kq { q: usize },
    /// `(k, q, N)`-permutation selector.
    KqPermutation { q: usize },
}

impl Target {
    pub fn q(self) -> Option<usize> {
        match self {
            Target::Kq { q } | Target::KqPermutation { q } => Some(q),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// `element` of `subset` is never isolated.
    Element { subset: Vec<Label>, element: Label },
    /// Too few elements of `subset` are isolated.
    Subset { subset: Vec<Label> },
    /// The instance's order is not isolated.
    Permutation(Instance),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Fail(Counterexample),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, open: &str, xs: &[Label], close: &str) -> fmt::Result {
    f.write_str(open)?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(close)
}

/// `OK`, or `FAIL X={..}` followed by `x=..` or `pi=(..)` where applicable.
impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Ok => f.write_str("OK"),
            Verdict::Fail(Counterexample::Element { subset, element }) => {
                write_set(f, "FAIL X={", subset, "}")?;
                write!(f, " x={element}")
            }
            Verdict::Fail(Counterexample::Subset { subset }) => {
                write_set(f, "FAIL X={", subset, "}")
            }
            Verdict::Fail(Counterexample::Permutation(inst)) => {
                write_set(f, "FAIL X={", inst.subset(), "}")?;
                write_set(f, " pi=(", inst.order(), ")")
            }
        }
    }
}

fn check_k(universe: usize, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if k > universe {
        return Err(Error::KExceedsUniverse { k, n: universe });
    }
    Ok(())
}

fn check_q(k: usize, q: usize) -> Result<()> {
    if q == 0 || q > k {
        return Err(Error::InvalidQ { k, q });
    }
    Ok(())
}

/// Primitive-check estimate for verifying `target` on a length-`m`
/// selector over `[0, n)`.
///
/// Per subset `X` of size `s` the trace costs `m·s` membership tests; each
/// permutation then costs `s` table lookups (permutation target) or an LIS
/// over at most `m` events (`(k, q)`-permutation target).
pub fn estimated_cost(n: usize, k: usize, m: usize, target: Target, mode: SizeMode) -> u128 {
    let m = m as u128;
    mode.sizes(k)
        .map(|s| {
            let su = s as u128;
            let per_subset = match target {
                Target::Strong | Target::Kq { .. } => m.saturating_mul(su),
                Target::Permutation => m
                    .saturating_mul(su)
                    .saturating_add(factorial(s).saturating_mul(su)),
                Target::KqPermutation { .. } => m
                    .saturating_mul(su)
                    .saturating_add(factorial(s).saturating_mul(m.max(1))),
            };
            binomial(n, s).saturating_mul(per_subset)
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

fn check_budget(
    sel: &Selector,
    k: usize,
    target: Target,
    mode: SizeMode,
    budget: Budget,
) -> Result<()> {
    let required = estimated_cost(sel.universe_size(), k, sel.len(), target, mode);
    if required > budget.0 {
        return Err(Error::BudgetExceeded {
            required,
            budget: budget.0,
        });
    }
    Ok(())
}

/// Isolation trace of `subset` as indices into `subset`.
fn index_trace(sel: &Selector, subset: &[Label]) -> Vec<u32> {
    sel.sets()
        .iter()
        .filter_map(|s| isolates(s, subset))
        .map(|x| subset.binary_search(&x).unwrap() as u32)
        .collect()
}

/// `table[i * s + c]` = first position `>= i` holding symbol `c`, or `len`.
fn next_occurrence(trace: &[u32], s: usize) -> Vec<u32> {
    let len = trace.len();
    let mut table = vec![len as u32; (len + 1) * s];
    for i in (0..len).rev() {
        let (head, tail) = table.split_at_mut((i + 1) * s);
        head[i * s..].copy_from_slice(&tail[..s]);
        head[i * s + trace[i] as usize] = i as u32;
    }
    table
}

fn contains_order(table: &[u32], s: usize, len: usize, order: &[usize]) -> bool {
    let mut pos = 0usize;
    for &c in order {
        let j = table[pos * s + c] as usize;
        if j == len {
            return false;
        }
        pos = j + 1;
    }
    true
}

fn for_each_subset(
    n: usize,
    k: usize,
    mode: SizeMode,
    mut f: impl FnMut(&[Label]) -> Option<Counterexample>,
) -> Verdict {
    for s in mode.sizes(k) {
        for subset in Combinations::new(n, s) {
            if let Some(cx) = f(&subset) {
                return Verdict::Fail(cx);
            }
        }
    }
    Verdict::Ok
}

/// Strong `(k, N)`-selector check. Failures are reported as the smallest
/// `(X, x)` with `x` never isolated from `X`.
pub fn verify_strong(sel: &Selector, k: usize, mode: SizeMode, budget: Budget) -> Result<Verdict> {
    let n = sel.universe_size();
    check_k(n, k)?;
    check_budget(sel, k, Target::Strong, mode, budget)?;
    Ok(for_each_subset(n, k, mode, |subset| {
        let mut seen = vec![false; subset.len()];
        for c in index_trace(sel, subset) {
            seen[c as usize] = true;
        }
        seen.iter()
            .position(|&b| !b)
            .map(|i| Counterexample::Element {
                subset: subset.to_vec(),
                element: subset[i],
            })
    }))
}

/// `(k, q, N)`-selector check: at least `min(q, |X|)` distinct elements of
/// each `X` are isolated by some set.
pub fn verify_kq_selector(
    sel: &Selector,
    k: usize,
    q: usize,
    mode: SizeMode,
    budget: Budget,
) -> Result<Verdict> {
    let n = sel.universe_size();
    check_k(n, k)?;
    check_q(k, q)?;
    check_budget(sel, k, Target::Kq { q }, mode, budget)?;
    Ok(for_each_subset(n, k, mode, |subset| {
        let mut seen = vec![false; subset.len()];
        for c in index_trace(sel, subset) {
            seen[c as usize] = true;
        }
        let distinct = seen.iter().filter(|&&b| b).count();
        (distinct < q.min(subset.len())).then(|| Counterexample::Subset {
            subset: subset.to_vec(),
        })
    }))
}

/// `(k, N)`-permutation selector check.
pub fn verify_permutation_selector(
    sel: &Selector,
    k: usize,
    mode: SizeMode,
    budget: Budget,
) -> Result<Verdict> {
    let n = sel.universe_size();
    check_k(n, k)?;
    check_budget(sel, k, Target::Permutation, mode, budget)?;
    Ok(for_each_subset(n, k, mode, |subset| {
        let s = subset.len();
        let trace = index_trace(sel, subset);
        let table = next_occurrence(&trace, s);
        let mut order: Vec<usize> = (0..s).collect();
        loop {
            if !contains_order(&table, s, trace.len(), &order) {
                let pi = order.iter().map(|&i| subset[i]).collect();
                return Some(Counterexample::Permutation(Instance::from_parts(
                    subset.to_vec(),
                    pi,
                )));
            }
            if !next_permutation(&mut order) {
                return None;
            }
        }
    }))
}

/// `(k, q, N)`-permutation selector check: for each instance, the positions
/// in `π` of the isolated labels (in time order) must have an increasing
/// subsequence of length `min(q, |X|)`.
pub fn verify_kq_permutation_selector(
    sel: &Selector,
    k: usize,
    q: usize,
    mode: SizeMode,
    budget: Budget,
) -> Result<Verdict> {
    let n = sel.universe_size();
    check_k(n, k)?;
    check_q(k, q)?;
    check_budget(sel, k, Target::KqPermutation { q }, mode, budget)?;
    Ok(for_each_subset(n, k, mode, |subset| {
        let s = subset.len();
        let need = q.min(s);
        let trace = index_trace(sel, subset);
        let mut order: Vec<usize> = (0..s).collect();
        let mut position = vec![0usize; s];
        let mut mapped = vec![0usize; trace.len()];
        loop {
            for (d, &c) in order.iter().enumerate() {
                position[c] = d;
            }
            for (slot, &c) in mapped.iter_mut().zip(&trace) {
                *slot = position[c as usize];
            }
            if lis_length(&mapped) < need {
                let pi = order.iter().map(|&i| subset[i]).collect();
                return Some(Counterexample::Permutation(Instance::from_parts(
                    subset.to_vec(),
                    pi,
                )));
            }
            if !next_permutation(&mut order) {
                return None;
            }
        }
    }))
}

/// Dispatches to the verifier for `target`.
pub fn verify(
    sel: &Selector,
    k: usize,
    target: Target,
    mode: SizeMode,
    budget: Budget,
) -> Result<Verdict> {
    match target {
        Target::Strong => verify_strong(sel, k, mode, budget),
        Target::Permutation => verify_permutation_selector(sel, k, mode, budget),
        Target::Kq { q } => verify_kq_selector(sel, k, q, mode, budget),
        Target::KqPermutation { q } => verify_kq_permutation_selector(sel, k, q, mode, budget),
    }
}
