use alloc::vec;
use alloc::vec::Vec;

use super::network::Network;
use crate::bits::BitSet;
use crate::selector::Label;
use crate::{Error, Result};

/// What a round is charged to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    /// The opening pass where every node transmits alone, in label order.
    Singleton,
    /// Active nodes transmitting along a permutation selector.
    Selector,
    /// Broadcasts and node selection inside `Disperse`.
    Disperse,
}

/// Rounds charged per phase. Includes accounting-only surcharges that are
/// not simulated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Accounting {
    pub singleton: u64,
    pub selector: u64,
    pub disperse: u64,
}

impl Accounting {
    pub fn charge(&mut self, phase: Phase, rounds: u64) {
        match phase {
            Phase::Singleton => self.singleton += rounds,
            Phase::Selector => self.selector += rounds,
            Phase::Disperse => self.disperse += rounds,
        }
    }

    pub fn total(&self) -> u64 {
        self.singleton + self.selector + self.disperse
    }
}

/// Rumor holdings and activity. Rumor `v` originates at node `v`; node `v`
/// is active iff rumor `v` is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimState {
    active: BitSet,
    rumors: Vec<BitSet>,
    /// Simulated rounds so far.
    pub round: u64,
    pub accounting: Accounting,
}

impl SimState {
    /// Every node active and holding only its own rumor.
    pub fn new(n: usize) -> Self {
        let rumors = (0..n)
            .map(|v| {
                let mut s = BitSet::new(n);
                s.insert(v);
                s
            })
            .collect();
        Self {
            active: BitSet::full(n),
            rumors,
            round: 0,
            accounting: Accounting::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.rumors.len()
    }

    pub fn is_active(&self, v: Label) -> bool {
        self.active.contains(v)
    }

    pub fn active(&self) -> &BitSet {
        &self.active
    }

    pub fn rumors(&self, v: Label) -> &BitSet {
        &self.rumors[v]
    }

    /// Number of active rumors held by `v`.
    pub fn active_rumor_count(&self, v: Label) -> usize {
        self.rumors[v].count_and(&self.active)
    }

    /// Marks every rumor in `carried` dormant.
    pub fn make_dormant(&mut self, carried: &BitSet) {
        self.active.difference_with(carried);
    }

    pub fn rumor_total(&self) -> usize {
        self.rumors.iter().map(BitSet::count).sum()
    }

    pub fn everyone_has_everything(&self) -> core::result::Result<(), (Label, Label)> {
        let n = self.n();
        for v in 0..n {
            if let Some(r) = (0..n).find(|&r| !self.rumors[v].contains(r)) {
                return Err((v, r));
            }
        }
        Ok(())
    }
}

/// Outcome of one round at the receivers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeliveryRecord {
    /// `(receiver, sender)`, by receiver.
    pub received: Vec<(Label, Label)>,
    /// Receivers with two or more transmitting in-neighbors, ascending.
    pub collisions: Vec<Label>,
}

/// The collision rule alone: who hears whom when `transmitters` transmit.
pub fn deliver(net: &Network, transmitters: &[Label]) -> Result<DeliveryRecord> {
    let n = net.n();
    let mut heard = vec![0u32; n];
    let mut from = vec![0 as Label; n];
    for &u in transmitters {
        if u >= n {
            return Err(Error::LabelOutOfRange {
                label: u,
                universe: n,
            });
        }
        for &v in net.out_neighbors(u) {
            if v != u {
                heard[v] += 1;
                from[v] = u;
            }
        }
    }
    let mut record = DeliveryRecord::default();
    for v in 0..n {
        match heard[v] {
            0 => {}
            1 => record.received.push((v, from[v])),
            _ => record.collisions.push(v),
        }
    }
    Ok(record)
}

/// One round: `transmitters` send their current rumor sets simultaneously.
pub fn step(net: &Network, state: &mut SimState, transmitters: &[Label]) -> Result<DeliveryRecord> {
    let record = deliver(net, transmitters)?;
    let messages: Vec<BitSet> = record
        .received
        .iter()
        .map(|&(_, u)| state.rumors[u].clone())
        .collect();
    for (&(v, _), msg) in record.received.iter().zip(&messages) {
        state.rumors[v].union_with(msg);
    }
    state.round += 1;
    Ok(record)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: u64,
    pub phase: Phase,
    pub transmitters: Vec<Label>,
    pub delivery: DeliveryRecord,
    /// `Σ_v |rumors_held(v)|` after the round.
    pub rumor_total: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimTrace {
    pub rounds: Vec<RoundRecord>,
    pub accounting: Accounting,
    /// Index in `rounds` where the replayed schedule starts, if any.
    pub replay_start: Option<usize>,
}

/// Re-derives every delivery in `trace` from its transmitter set.
pub fn audit_trace(net: &Network, trace: &SimTrace) -> Result<()> {
    for r in &trace.rounds {
        if deliver(net, &r.transmitters)? != r.delivery {
            return Err(Error::InvariantViolated(alloc::format!(
                "round {} delivery mismatch",
                r.round
            )));
        }
    }
    Ok(())
}

/// One entry of a replayable transmission schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScheduleEntry {
    Transmit {
        phase: Phase,
        transmitters: Vec<Label>,
    },
    /// Rounds charged without simulation (node selection surcharge).
    Charge { phase: Phase, rounds: u64 },
}

/// Network, state, trace and schedule of one run.
#[derive(Clone, Debug)]
pub struct Simulator<'a> {
    net: &'a Network,
    pub state: SimState,
    pub trace: SimTrace,
    pub schedule: Vec<ScheduleEntry>,
}

impl<'a> Simulator<'a> {
    pub fn new(net: &'a Network) -> Self {
        Self::with_state(net, SimState::new(net.n()))
    }

    pub fn with_state(net: &'a Network, state: SimState) -> Self {
        Self {
            net,
            state,
            trace: SimTrace::default(),
            schedule: Vec::new(),
        }
    }

    pub fn network(&self) -> &'a Network {
        self.net
    }

    /// Simulates, records and schedules one round.
    pub fn transmit(&mut self, phase: Phase, transmitters: Vec<Label>) -> Result<&DeliveryRecord> {
        let round = self.state.round;
        let delivery = step(self.net, &mut self.state, &transmitters)?;
        self.state.accounting.charge(phase, 1);
        self.trace.accounting.charge(phase, 1);
        self.schedule.push(ScheduleEntry::Transmit {
            phase,
            transmitters: transmitters.clone(),
        });
        self.trace.rounds.push(RoundRecord {
            round,
            phase,
            transmitters,
            delivery,
            rumor_total: self.state.rumor_total(),
        });
        Ok(&self.trace.rounds.last().unwrap().delivery)
    }

    pub fn charge(&mut self, phase: Phase, rounds: u64) {
        if rounds == 0 {
            return;
        }
        self.state.accounting.charge(phase, rounds);
        self.trace.accounting.charge(phase, rounds);
        self.schedule.push(ScheduleEntry::Charge { phase, rounds });
    }

    /// Runs `schedule` again on the current state.
    pub fn replay(&mut self, schedule: &[ScheduleEntry]) -> Result<()> {
        self.trace
            .replay_start
            .get_or_insert(self.trace.rounds.len());
        for entry in schedule {
            match entry {
                ScheduleEntry::Transmit {
                    phase,
                    transmitters,
                } => {
                    self.transmit(*phase, transmitters.clone())?;
                }
                ScheduleEntry::Charge { phase, rounds } => self.charge(*phase, *rounds),
            }
        }
        Ok(())
    }
}
