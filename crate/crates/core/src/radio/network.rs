use alloc::vec;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::bits::BitSet;
use crate::rng::stream;
use crate::selector::Label;
use crate::{Error, Result};

/// A directed graph on nodes labeled `0..n`.
///
/// Self-loops may be present; the delivery rule ignores them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    out: Vec<Vec<Label>>,
    inn: Vec<Vec<Label>>,
}

impl Network {
    /// `out[u]` lists the out-neighbors of `u`, in any order.
    pub fn from_adjacency(mut out: Vec<Vec<Label>>) -> Result<Self> {
        let n = out.len();
        let mut inn = vec![Vec::new(); n];
        for (u, list) in out.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if let Some(&v) = list.last() {
                if v >= n {
                    return Err(Error::LabelOutOfRange {
                        label: v,
                        universe: n,
                    });
                }
            }
            for &v in list.iter() {
                inn[v].push(u);
            }
        }
        Ok(Self { out, inn })
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Label, Label)>) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::LabelOutOfRange {
                    label: u,
                    universe: n,
                });
            }
            out[u].push(v);
        }
        Self::from_adjacency(out)
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    /// Sorted out-neighbors, self-loop included if present.
    pub fn out_neighbors(&self, u: Label) -> &[Label] {
        &self.out[u]
    }

    pub fn in_neighbors(&self, v: Label) -> &[Label] {
        &self.inn[v]
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    fn closure(adj: &[Vec<Label>], from: Label) -> BitSet {
        let mut seen = BitSet::new(adj.len());
        let mut stack = vec![from];
        seen.insert(from);
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Nodes reachable from `from`, itself included.
    pub fn reachable_from(&self, from: Label) -> BitSet {
        Self::closure(&self.out, from)
    }

    /// The lowest node not mutually reachable with node 0, if any.
    pub fn strong_connectivity_witness(&self) -> Option<Label> {
        if self.n() == 0 {
            return None;
        }
        let fwd = Self::closure(&self.out, 0);
        let bwd = Self::closure(&self.inn, 0);
        (0..self.n()).find(|&v| !fwd.contains(v) || !bwd.contains(v))
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strong_connectivity_witness().is_none()
    }
}

/// A directed Hamiltonian cycle through a random ordering of `0..n`, plus
/// each other ordered pair `(u, v)`, `u != v`, as an edge with probability
/// `extra_edge_prob`.
///
/// Draws come from stream 0 of `seed`: first the shuffle, then one uniform
/// per ordered pair in `(u, v)` lexicographic order.
pub fn random_strongly_connected(n: usize, extra_edge_prob: f64, seed: u64) -> Network {
    let mut rng = stream(seed, 0);
    let mut order: Vec<Label> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut out = vec![Vec::new(); n];
    if n >= 2 {
        for i in 0..n {
            out[order[i]].push(order[(i + 1) % n]);
        }
    }
    for (u, list) in out.iter_mut().enumerate() {
        for v in 0..n {
            if u != v && rng.gen::<f64>() < extra_edge_prob {
                list.push(v);
            }
        }
    }
    Network::from_adjacency(out).expect("labels are in range")
}
