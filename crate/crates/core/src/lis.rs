//! Longest strictly increasing subsequence.

use alloc::vec::Vec;

/// Length of the longest strictly increasing subsequence of `seq`.
///
/// Patience sorting: `tails[i]` is the smallest possible last element of an
/// increasing subsequence of length `i + 1`. O(n log n).
pub fn lis_length<T: Ord + Copy>(seq: &[T]) -> usize {
    let mut tails: Vec<T> = Vec::with_capacity(seq.len());
    for &x in seq {
        // First tail >= x, so equal elements never extend a run.
        let pos = tails.partition_point(|&t| t < x);
        if pos == tails.len() {
            tails.push(x);
        } else {
            tails[pos] = x;
        }
    }
    tails.len()
}
