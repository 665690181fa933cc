//! `Disperse`, `QuasiGossip` and gossiping.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use libm::{cbrt, ceil, log2};

use super::broadcast::BroadcastStrategy;
use super::network::Network;
use super::paths::active_path_ell;
use super::sim::{Phase, SimState, SimTrace, Simulator};
use crate::combinatorics::ceil_log2;
use crate::selector::{Label, Selector};
use crate::verify::{estimated_cost, Budget, SizeMode, Target};
use crate::{Error, Result};

/// Supplies a `(k, n)`-permutation selector verified for all subset sizes
/// up to `k`.
pub trait SelectorProvider {
    fn selector(&mut self, k: usize, n: usize) -> Result<Selector>;
}

impl<F: FnMut(usize, usize) -> Result<Selector>> SelectorProvider for F {
    fn selector(&mut self, k: usize, n: usize) -> Result<Selector> {
        self(k, n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProtocolConfig {
    pub kappa: usize,
    /// Rounds charged per `Disperse` node selection on top of the broadcast.
    pub surcharge_per_selection: u64,
    /// Track `active_path_ell` after the first `Disperse` and after every repeat-loop
    /// iteration, with this DFS budget.
    pub ell_budget: Option<u128>,
}

/// Accounting charge for one `Disperse` node selection: `B(n)·⌈log₂ n⌉`.
pub fn selection_surcharge(broadcast_rounds: u64, n: usize) -> u64 {
    broadcast_rounds * ceil_log2(n.max(1)) as u64
}

/// `⌈(n·B / log₂ n)^(1/3)⌉`, clamped to `[1, n]`.
pub fn choose_kappa(n: usize, broadcast_rounds: u64) -> usize {
    let n_f = n as f64;
    let raw = ceil(cbrt(n_f * broadcast_rounds as f64 / log2(n_f)));
    (raw as usize).clamp(1, n.max(1))
}

/// The largest `kappa <= desired` whose `UpTo` permutation-selector
/// verification at length `4·kappa²·⌈log₂ n⌉` fits `budget`.
pub fn feasible_kappa(n: usize, desired: usize, budget: Budget) -> usize {
    let log_n = ceil_log2(n.max(2)) as usize;
    let mut kappa = desired.clamp(1, n.max(1));
    while kappa > 1 {
        let m = 4 * kappa * kappa * log_n;
        if estimated_cost(n, kappa, m, Target::Permutation, SizeMode::UpTo) <= budget.0 {
            break;
        }
        kappa -= 1;
    }
    kappa
}

/// Rounds one broadcast from node 0 takes on a fresh state; used as `B(n)`.
pub fn measure_broadcast_rounds(net: &Network, strategy: &dyn BroadcastStrategy) -> Result<u64> {
    if net.n() == 0 {
        return Ok(0);
    }
    let mut sim = Simulator::new(net);
    strategy.broadcast(&mut sim, 0, Phase::Disperse)
}

/// Largest number of active in-neighbors (self excluded) over all nodes.
pub fn max_active_in_neighbors(net: &Network, state: &SimState) -> usize {
    (0..net.n())
        .map(|v| {
            net.in_neighbors(v)
                .iter()
                .filter(|&&u| u != v && state.is_active(u))
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Every active node's rumor is held by some dormant node.
pub fn check_quasi_gossip_done(state: &SimState) -> bool {
    let n = state.n();
    let dormant: Vec<Label> = (0..n).filter(|&w| !state.is_active(w)).collect();
    (0..n).all(|v| !state.is_active(v) || dormant.iter().any(|&w| state.rumors(w).contains(v)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DisperseReport {
    pub mu: usize,
    pub selections: usize,
    /// Active rumors at entry, summed over distinct rumors.
    pub active_at_entry: usize,
    /// Largest active-rumor count held by a node on return (always `< mu`).
    pub max_active_after: usize,
}

/// While some node holds at least `mu` active rumors, broadcasts from the
/// one holding the most (lowest label on ties) and marks every rumor it
/// carried dormant.
///
/// Node selection uses global knowledge; each selection is charged
/// `surcharge_per_selection` extra rounds.
pub fn disperse(
    sim: &mut Simulator<'_>,
    mu: usize,
    strategy: &dyn BroadcastStrategy,
    surcharge_per_selection: u64,
) -> Result<DisperseReport> {
    if mu == 0 {
        return Err(Error::InvalidParameter("mu must be at least 1".into()));
    }
    let n = sim.state.n();
    let active_at_entry = sim.state.active().count();
    let mut selections = 0;
    loop {
        let (best, count) = (0..n)
            .map(|v| (v, sim.state.active_rumor_count(v)))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if count < mu || n == 0 {
            return Ok(DisperseReport {
                mu,
                selections,
                active_at_entry,
                max_active_after: count,
            });
        }
        let carried = sim.state.rumors(best).clone();
        sim.charge(Phase::Disperse, surcharge_per_selection);
        strategy.broadcast(sim, best, Phase::Disperse)?;
        sim.state.make_dormant(&carried);
        selections += 1;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuasiGossipReport {
    pub kappa: usize,
    pub iterations: usize,
    pub selector_len: usize,
    /// Checked to be `< kappa`.
    pub max_active_in_after_first_disperse: usize,
    pub disperse: Vec<DisperseReport>,
    /// `active_path_ell` after the first `Disperse`, then after each iteration.
    pub ell: Vec<usize>,
    /// `check_quasi_gossip_done` after each iteration.
    pub done: Vec<bool>,
}

/// `QuasiGossip` on the simulator's current state:
///
/// 1. every node transmits alone, in label order;
/// 2. `Disperse(kappa)`;
/// 3. `⌈log₂ kappa⌉ + 1` times: the active nodes transmit along a
///    `(kappa, n)`-permutation selector (set `S_t` → transmitters
///    `S_t ∩ active`), then `Disperse(⌈kappa/2⌉)`.
///
/// Fails with [`Error::InvariantViolated`] if after step 2 some node has
/// `kappa` or more active in-neighbors, or if the quasi-gossip condition
/// does not hold at the end.
pub fn quasi_gossip(
    sim: &mut Simulator<'_>,
    provider: &mut dyn SelectorProvider,
    strategy: &dyn BroadcastStrategy,
    config: &ProtocolConfig,
) -> Result<QuasiGossipReport> {
    let net = sim.network();
    let n = net.n();
    let kappa = config.kappa;
    if kappa == 0 {
        return Err(Error::InvalidParameter("kappa must be at least 1".into()));
    }
    let mut report = QuasiGossipReport {
        kappa,
        ..Default::default()
    };

    for v in 0..n {
        sim.transmit(Phase::Singleton, vec![v])?;
    }

    report.disperse.push(disperse(
        sim,
        kappa,
        strategy,
        config.surcharge_per_selection,
    )?);
    let max_in = max_active_in_neighbors(net, &sim.state);
    report.max_active_in_after_first_disperse = max_in;
    if max_in >= kappa {
        return Err(Error::InvariantViolated(format!(
            "a node has {max_in} active in-neighbors after Disperse({kappa})"
        )));
    }
    if let Some(budget) = config.ell_budget {
        report
            .ell
            .push(active_path_ell(net, &sim.state, kappa, budget)?);
    }

    let iterations = ceil_log2(kappa) as usize + 1;
    let half = kappa.div_ceil(2);
    let selector = if iterations > 0 && n > 0 {
        Some(provider.selector(kappa, n)?)
    } else {
        None
    };
    if let Some(sel) = &selector {
        if sel.universe_size() != n {
            return Err(Error::InvalidParameter(format!(
                "selector universe {} does not match network size {n}",
                sel.universe_size()
            )));
        }
        report.selector_len = sel.len();
    }
    for _ in 0..iterations {
        if let Some(sel) = &selector {
            for set in sel.sets() {
                let tx: Vec<Label> = (0..n)
                    .filter(|&v| sim.state.is_active(v) && set.contains(v))
                    .collect();
                sim.transmit(Phase::Selector, tx)?;
            }
        }
        report.disperse.push(disperse(
            sim,
            half,
            strategy,
            config.surcharge_per_selection,
        )?);
        if let Some(budget) = config.ell_budget {
            report
                .ell
                .push(active_path_ell(net, &sim.state, kappa, budget)?);
        }
        report.done.push(check_quasi_gossip_done(&sim.state));
        report.iterations += 1;
    }

    if !check_quasi_gossip_done(&sim.state) {
        return Err(Error::InvariantViolated(
            "quasi-gossip condition fails after the last iteration".into(),
        ));
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct GossipOutcome {
    pub state: SimState,
    pub trace: SimTrace,
    pub report: QuasiGossipReport,
    /// Number of trace rounds belonging to the quasi-gossip run.
    pub quasi_rounds: usize,
}

/// Full gossiping: `QuasiGossip`, then one replay of its exact transmission
/// schedule. Fails unless every node ends up holding all `n` rumors.
pub fn gossip(
    net: &Network,
    provider: &mut dyn SelectorProvider,
    strategy: &dyn BroadcastStrategy,
    config: &ProtocolConfig,
) -> Result<GossipOutcome> {
    if let Some(v) = net.strong_connectivity_witness() {
        return Err(Error::NotStronglyConnected(v));
    }
    let mut sim = Simulator::new(net);
    let report = quasi_gossip(&mut sim, provider, strategy, config)?;
    let quasi_rounds = sim.trace.rounds.len();
    let schedule = core::mem::take(&mut sim.schedule);
    sim.replay(&schedule)?;
    if let Err((node, rumor)) = sim.state.everyone_has_everything() {
        return Err(Error::GossipIncomplete { node, rumor });
    }
    Ok(GossipOutcome {
        state: sim.state,
        trace: sim.trace,
        report,
        quasi_rounds,
    })
}
