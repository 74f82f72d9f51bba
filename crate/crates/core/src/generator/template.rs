use super::spec::{ChannelSpec, GenError, ServiceSpec};
use crate::syntax::{Name, Process};

fn msg() -> Name {
    Name::new("msg").expect("valid name")
}

/// One exchange step of the initiator: send a token, wait for the reply and
/// check it.
fn ask(ch: &Name, sent: &Name, expected: &Name, then: Process) -> Process {
    Process::output(
        ch.clone(),
        sent.clone(),
        Process::input(ch.clone(), msg(), Process::matching(msg(), expected.clone(), then)),
    )
}

/// One exchange step of the responder: receive, check, reply.
fn answer(ch: &Name, expected: &Name, reply: &Name, then: Process) -> Process {
    Process::input(
        ch.clone(),
        msg(),
        Process::matching(msg(), expected.clone(), Process::output(ch.clone(), reply.clone(), then)),
    )
}

/// The initiating side of a channel: introduce by role (services outside the
/// framework only), then by goal, then swap the channel's information, and
/// recurse.
pub fn model_sender(svc: &ServiceSpec, ch: &ChannelSpec) -> Result<Process, GenError> {
    if svc.id != ch.from {
        return Err(GenError::EndpointMismatch { service: svc.id.clone(), channel: ch.name.clone() });
    }
    let c = &ch.name;
    let mut p = ask(c, &ch.forward, &ch.backward, Process::call(svc.id.clone()));
    p = ask(c, &svc.goal_token(), &svc.goal_token(), p);
    if svc.kind.announces_role() {
        p = ask(c, &svc.role_token(), &svc.role_token(), p);
    }
    Ok(p)
}

/// The responding side of a channel, mirroring [`model_sender`] for the
/// initiator `sender`.
pub fn model_receiver(svc: &ServiceSpec, ch: &ChannelSpec, sender: &ServiceSpec) -> Result<Process, GenError> {
    if svc.id != ch.to {
        return Err(GenError::EndpointMismatch { service: svc.id.clone(), channel: ch.name.clone() });
    }
    if sender.id != ch.from {
        return Err(GenError::EndpointMismatch { service: sender.id.clone(), channel: ch.name.clone() });
    }
    let c = &ch.name;
    let mut p = answer(c, &ch.forward, &ch.backward, Process::call(svc.id.clone()));
    p = answer(c, &sender.goal_token(), &sender.goal_token(), p);
    if sender.kind.announces_role() {
        p = answer(c, &sender.role_token(), &sender.role_token(), p);
    }
    Ok(p)
}
