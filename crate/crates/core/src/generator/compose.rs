use std::collections::{BTreeMap, BTreeSet};

use super::spec::{derive_sets, CompositionConfig, GenError, ServiceKind, ServiceSpec};
use super::template::{model_receiver, model_sender};
use crate::io::ModelFile;
use crate::syntax::{AgentId, DefinitionTable, Process};

/// Builds one recursive definition per service and the top-level system.
///
/// Each definition is a choice of an idle `tau` step, one initiator chain per
/// outgoing channel and one responder chain per incoming channel. The
/// registration service can also raise the failure signal. Generation,
/// selection and execution run under a handler that falls back to discovery.
pub fn compose_model(cfg: &CompositionConfig) -> Result<ModelFile, GenError> {
    let sets = derive_sets(cfg)?;
    let t = cfg.failure_signal;

    let mut entries = BTreeMap::new();
    for svc in sets.services.values() {
        let me = Process::call(svc.id.clone());
        let mut summands = vec![Process::tau(me.clone())];
        for ch in sets.channels.values() {
            if ch.from == svc.id {
                summands.push(model_sender(svc, ch)?);
            } else if ch.to == svc.id {
                summands.push(model_receiver(svc, ch, &sets.services[&ch.from])?);
            }
        }
        if svc.kind == ServiceKind::Registration {
            summands.push(Process::emit(t, me));
        }
        entries.insert(svc.id.clone(), Process::sum_all(summands));
    }
    let defs = DefinitionTable::new(entries)?;

    let of_kind = |kind: ServiceKind| -> Vec<&ServiceSpec> {
        sets.services.values().filter(|s| s.kind == kind).collect()
    };
    let fallback = of_kind(ServiceKind::Discovery).first().map(|s| Process::call(s.id.clone()));
    let guarded = |s: &ServiceSpec| match &fallback {
        Some(f) => Process::handler(Process::call(s.id.clone()), f.clone(), t),
        None => Process::call(s.id.clone()),
    };
    let plain = |s: &ServiceSpec| Process::call(s.id.clone());

    let mut provider_side = Vec::new();
    for kind in [ServiceKind::Provider, ServiceKind::Base, ServiceKind::Registration] {
        provider_side.extend(of_kind(kind).into_iter().map(plain));
    }
    let mut requester_side = Vec::new();
    requester_side.extend(of_kind(ServiceKind::Requester).into_iter().map(plain));
    requester_side.extend(of_kind(ServiceKind::Discovery).into_iter().map(plain));
    for kind in [ServiceKind::Generation, ServiceKind::Selection, ServiceKind::Execution] {
        requester_side.extend(of_kind(kind).into_iter().map(guarded));
    }
    requester_side.extend(of_kind(ServiceKind::Authority).into_iter().map(plain));

    let group = |parts: Vec<Process>| {
        if cfg.literal_seq {
            Process::seq_all(parts)
        } else {
            Process::par_all(parts)
        }
    };
    let main = Process::par(group(provider_side), group(requester_side));

    let mut agent_notes: BTreeMap<AgentId, Vec<String>> = BTreeMap::new();
    for s in of_kind(ServiceKind::Authority) {
        agent_notes.insert(
            s.id.clone(),
            vec![format!("{}: invented by the generator from its channel declarations", s.id)],
        );
    }
    let header = vec![
        format!(
            "generated for user {}: {} services, {} channels, failure signal {}",
            cfg.requester_user,
            sets.services.len(),
            sets.channels.len(),
            t
        ),
        format!(
            "composition: {}",
            if cfg.literal_seq { "sequential groups" } else { "parallel groups" }
        ),
    ];

    Ok(ModelFile {
        channels: sets.channels.keys().cloned().collect(),
        signals: BTreeSet::from([t]),
        defs,
        main,
        spans: BTreeMap::new(),
        header,
        agent_notes,
    })
}
