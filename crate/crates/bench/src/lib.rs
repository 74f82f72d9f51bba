//! Workloads shared by the benchmarks.

use picomp_core::authority::UserId;
use picomp_core::generator::{compose_model, CompositionConfig};
use picomp_core::io::{load_aidb, load_wsdb};
use picomp_core::{parse_model, ModelFile, SignalId};

const WSDB: &str = include_str!("../../core/fixtures/dwsc/wsdb.json");
const AIDB: &str = include_str!("../../core/fixtures/dwsc/aidb.json");

/// The generated discovery/selection/execution composition.
pub fn dwsc_model() -> ModelFile {
    let wsdb = load_wsdb(WSDB).expect("fixture wsdb");
    let cfg = CompositionConfig {
        services: wsdb.services,
        channels: wsdb.channels,
        authority: load_aidb(AIDB).expect("fixture aidb"),
        requester_user: UserId::new("u_req"),
        failure_signal: SignalId::new(1).expect("signal 1"),
        literal_seq: false,
    };
    compose_model(&cfg).expect("fixture composes")
}

/// `n` cells passing a token around a ring, each also able to fail with a signal
/// caught by a handler that restarts the cell.
pub fn ring_source(n: usize) -> String {
    let mut src = String::new();
    for i in 0..n {
        let (me, next) = (format!("c{i}"), format!("c{}", (i + 1) % n));
        src.push_str(&format!("agent Cell{i} = {me}?(t).({next}!<t>.Cell{i} + sig(1).0)\n"));
    }
    let cells: Vec<String> = (0..n).map(|i| format!("[Cell{i}, Cell{i}]@1")).collect();
    src.push_str(&format!("main = c0!<tok>.0 | {}\n", cells.join(" | ")));
    src
}

pub fn ring_model(n: usize) -> ModelFile {
    parse_model(&ring_source(n)).expect("ring parses")
}
