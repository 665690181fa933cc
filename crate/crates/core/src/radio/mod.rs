//! Discrete-round ad-hoc radio network simulator.
//!
//! Nodes are labeled `0..n` (the label universe is `[0, n)`). In each round
//! a set of nodes transmits; a node `v` receives the message of `u` iff `u`
//! is the only transmitting in-neighbor of `v`. Two or more transmitting
//! in-neighbors collide and `v` receives nothing. A transmitting node sends
//! every rumor it holds.

mod broadcast;
mod network;
mod paths;
mod protocol;
mod sim;

pub use broadcast::{BroadcastStrategy, RoundRobin};
pub use network::{random_strongly_connected, Network};
pub use paths::{active_path_ell, DEFAULT_PATH_BUDGET};
pub use protocol::{
    check_quasi_gossip_done, choose_kappa, disperse, feasible_kappa, gossip,
    max_active_in_neighbors, measure_broadcast_rounds, quasi_gossip, selection_surcharge,
    DisperseReport, GossipOutcome, ProtocolConfig, QuasiGossipReport, SelectorProvider,
};
pub use sim::{
    audit_trace, deliver, step, Accounting, DeliveryRecord, Phase, RoundRecord, ScheduleEntry,
    SimState, SimTrace, Simulator,
};
