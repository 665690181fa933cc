use alloc::vec;
use alloc::vec::Vec;

use super::network::Network;
use super::sim::SimState;
use crate::selector::Label;
use crate::{Error, Result};

/// Default ceiling on DFS extensions in [`active_path_ell`].
pub const DEFAULT_PATH_BUDGET: u128 = 50_000_000;

struct Search<'a> {
    net: &'a Network,
    state: &'a SimState,
    kappa: usize,
    on_path: Vec<bool>,
    /// Multiplicity of each node in the path's active in-neighborhood.
    hood: Vec<u32>,
    hood_size: usize,
    /// Shortest violating path length found so far.
    best: usize,
    steps: u128,
    budget: u128,
}

impl Search<'_> {
    fn add_hood(&mut self, v: Label, delta: i32) {
        for &u in self.net.in_neighbors(v) {
            if u == v || !self.state.is_active(u) {
                continue;
            }
            let c = &mut self.hood[u];
            if delta > 0 {
                if *c == 0 {
                    self.hood_size += 1;
                }
                *c += 1;
            } else {
                *c -= 1;
                if *c == 0 {
                    self.hood_size -= 1;
                }
            }
        }
    }

    fn extend(&mut self, v: Label, len: usize) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::BudgetExceeded {
                required: self.steps,
                budget: self.budget,
            });
        }
        self.on_path[v] = true;
        self.add_hood(v, 1);
        if self.hood_size >= self.kappa {
            self.best = self.best.min(len);
        } else if len + 1 < self.best {
            let net = self.net;
            for &w in net.out_neighbors(v) {
                if !self.on_path[w] && self.state.is_active(w) {
                    self.extend(w, len + 1)?;
                }
            }
        }
        self.add_hood(v, -1);
        self.on_path[v] = false;
        Ok(())
    }
}

/// The largest `ℓ <= n` such that every active path with at most `ℓ` nodes
/// has fewer than `kappa` nodes in its active in-neighborhood (the active
/// in-neighbors of its nodes, path nodes included). Equals the length of
/// the shortest violating active path minus one, or `n` if none exists.
///
/// Exhaustive DFS over simple active paths. A path with `L` nodes has at
/// least `L − 1` of them in its in-neighborhood, so the search depth is at
/// most `kappa + 1`.
pub fn active_path_ell(
    net: &Network,
    state: &SimState,
    kappa: usize,
    budget: u128,
) -> Result<usize> {
    let n = net.n();
    let mut search = Search {
        net,
        state,
        kappa,
        on_path: vec![false; n],
        hood: vec![0; n],
        hood_size: 0,
        best: n + 1,
        steps: 0,
        budget,
    };
    for v in 0..n {
        if state.is_active(v) {
            search.extend(v, 1)?;
        }
    }
    Ok(if search.best > n { n } else { search.best - 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitSet;

    #[test]
    fn vacuous_and_boundary() {
        let net = Network::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut st = SimState::new(3);
        st.make_dormant(&BitSet::full(3));
        assert_eq!(
            active_path_ell(&net, &st, 1, DEFAULT_PATH_BUDGET).unwrap(),
            3
        );

        // Node 2 has active in-neighbors {0, 1}: a single-node path violates kappa = 2.
        let net = Network::from_edges(3, [(0, 2), (1, 2)]).unwrap();
        let st = SimState::new(3);
        assert_eq!(
            active_path_ell(&net, &st, 2, DEFAULT_PATH_BUDGET).unwrap(),
            0
        );
        assert_eq!(
            active_path_ell(&net, &st, 3, DEFAULT_PATH_BUDGET).unwrap(),
            3
        );
    }

    #[test]
    fn cycle_paths() {
        // On a directed 4-cycle a path of L nodes has hood of size min(L, 4).
        let net = Network::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let st = SimState::new(4);
        for kappa in 1..=4 {
            assert_eq!(
                active_path_ell(&net, &st, kappa, DEFAULT_PATH_BUDGET).unwrap(),
                kappa - 1
            );
        }
        assert_eq!(
            active_path_ell(&net, &st, 5, DEFAULT_PATH_BUDGET).unwrap(),
            4
        );
        assert!(matches!(
            active_path_ell(&net, &st, 5, 3),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
