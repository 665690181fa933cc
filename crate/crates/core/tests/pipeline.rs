use permsel_core::build::{build_verified, BuildConfig};
use permsel_core::radio::{gossip, random_strongly_connected, ProtocolConfig, RoundRobin};
use permsel_core::verify::{verify, verify_strong};
use permsel_core::{Budget, Instance, Selector, SizeMode, Target};

fn built(k: usize, n: usize, m: usize, seed: u64) -> Selector {
    let config = BuildConfig { seed, m_override: Some(m), ..Default::default() };
    build_verified(k, n, &config).unwrap().selector
}

#[test]
fn permutation_selector_is_strong_and_isolates_every_order() {
    let sel = built(3, 7, 90, 1);
    assert!(verify_strong(&sel, 3, SizeMode::UpTo, Budget::DEFAULT).unwrap().is_ok());
    let inst = Instance::within(7, vec![6, 0, 3]).unwrap();
    assert!(sel.isolates_permutation(&inst));
    let trace = sel.isolation_trace(inst.subset());
    assert!(trace.labels().any(|x| x == 6));
}

#[test]
fn verdict_survives_a_text_free_round_trip() {
    let sel = built(2, 5, 30, 3);
    let copy = Selector::new(5, sel.sets().iter().map(|s| s.labels())).unwrap();
    assert_eq!(copy, sel);
    assert!(verify(&copy, 2, Target::Permutation, SizeMode::Exact, Budget::DEFAULT).unwrap().is_ok());
}

#[test]
fn gossip_with_a_fixed_selector() {
    let net = random_strongly_connected(10, 0.2, 4);
    let sel = built(3, 10, 120, 5);
    let config = ProtocolConfig { kappa: 3, surcharge_per_selection: 10, ell_budget: None };
    let mut provider = |_: usize, _: usize| Ok(sel.clone());
    let outcome = gossip(&net, &mut provider, &RoundRobin, &config).unwrap();
    assert!(outcome.state.everyone_has_everything().is_ok());
    assert_eq!(outcome.report.selector_len, 120);
    assert!(outcome.trace.rounds.len() > outcome.quasi_rounds);
}
