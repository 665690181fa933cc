use alloc::vec;
use alloc::vec::Vec;

use super::sim::{Phase, Simulator};
use crate::bits::BitSet;
use crate::selector::Label;
use crate::{Error, Result};

/// A broadcasting protocol: afterwards every node holds every rumor the
/// source held when it started.
pub trait BroadcastStrategy {
    /// Returns the number of simulated rounds used.
    fn broadcast(&self, sim: &mut Simulator<'_>, source: Label, phase: Phase) -> Result<u64>;
}

/// Passes over the singleton schedule `{0}, {1}, .., {n−1}`; in its slot a
/// node transmits iff it already has the source's payload. Each pass
/// extends the informed set by at least one BFS layer, and the broadcast
/// stops as soon as every node is informed, so it takes at most
/// `n·(D + 1)` rounds for eccentricity `D`.
#[derive(Clone, Copy, Debug, Default)]
pub struct RoundRobin;

impl BroadcastStrategy for RoundRobin {
    fn broadcast(&self, sim: &mut Simulator<'_>, source: Label, phase: Phase) -> Result<u64> {
        let net = sim.network();
        let n = net.n();
        if source >= n {
            return Err(Error::LabelOutOfRange {
                label: source,
                universe: n,
            });
        }
        let reach = net.reachable_from(source);
        if let Some(node) = (0..n).find(|&v| !reach.contains(v)) {
            return Err(Error::Unreachable {
                origin: source,
                node,
            });
        }
        let mut informed = BitSet::new(n);
        informed.insert(source);
        let mut informed_count = 1;
        let mut rounds = 0u64;
        'passes: for _ in 0..n {
            for u in 0..n {
                if informed_count == n {
                    break 'passes;
                }
                let tx: Vec<Label> = if informed.contains(u) {
                    vec![u]
                } else {
                    Vec::new()
                };
                let delivery = sim.transmit(phase, tx)?;
                rounds += 1;
                for &(v, _) in &delivery.received {
                    if informed.insert(v) {
                        informed_count += 1;
                    }
                }
            }
        }
        debug_assert_eq!(informed_count, n);
        Ok(rounds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radio::Network;

    #[test]
    fn path_completes_in_one_pass() {
        let net = Network::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut sim = Simulator::new(&net);
        let rounds = RoundRobin.broadcast(&mut sim, 0, Phase::Disperse).unwrap();
        assert_eq!(rounds, 2);
        assert!(sim.state.rumors(2).contains(0));
    }

    #[test]
    fn reverse_path_needs_passes() {
        // 2 -> 1 -> 0 from source 2: slot order 0,1,2 informs one node per pass.
        let net = Network::from_edges(3, [(2, 1), (1, 0)]).unwrap();
        let mut sim = Simulator::new(&net);
        let rounds = RoundRobin.broadcast(&mut sim, 2, Phase::Disperse).unwrap();
        assert_eq!(rounds, 5);
        assert!(sim.state.rumors(0).contains(2));
    }

    #[test]
    fn trivial_and_star() {
        let net = Network::from_edges(1, []).unwrap();
        let mut sim = Simulator::new(&net);
        assert_eq!(
            RoundRobin.broadcast(&mut sim, 0, Phase::Disperse).unwrap(),
            0
        );
        let star = Network::from_edges(5, (1..5).map(|v| (0, v))).unwrap();
        let mut sim = Simulator::new(&star);
        assert_eq!(
            RoundRobin.broadcast(&mut sim, 0, Phase::Disperse).unwrap(),
            1
        );
        assert!((1..5).all(|v| sim.state.rumors(v).contains(0)));
    }

    #[test]
    fn unreachable_reported() {
        let net = Network::from_edges(3, [(0, 1)]).unwrap();
        let mut sim = Simulator::new(&net);
        assert_eq!(
            RoundRobin.broadcast(&mut sim, 0, Phase::Disperse),
            Err(Error::Unreachable { origin: 0, node: 2 })
        );
    }
}
