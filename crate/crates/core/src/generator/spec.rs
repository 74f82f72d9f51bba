use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::authority::{AuthorityError, AuthorityModel, ObjectId, RoleId, UserId};
use crate::syntax::{AgentId, CalcError, Name, SignalId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ServiceKind {
    Registration,
    Discovery,
    Generation,
    Selection,
    Execution,
    Authority,
    Base,
    Requester,
    Provider,
}

impl ServiceKind {
    pub fn is_main(self) -> bool {
        !matches!(self, ServiceKind::Base | ServiceKind::Requester | ServiceKind::Provider)
    }

    /// Services outside the framework introduce themselves by role before
    /// stating a goal.
    pub fn announces_role(self) -> bool {
        !self.is_main()
    }
}

impl fmt::Display for ServiceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ServiceKind::Registration => "registration",
            ServiceKind::Discovery => "discovery",
            ServiceKind::Generation => "generation",
            ServiceKind::Selection => "selection",
            ServiceKind::Execution => "execution",
            ServiceKind::Authority => "authority",
            ServiceKind::Base => "base",
            ServiceKind::Requester => "requester",
            ServiceKind::Provider => "provider",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ServiceSpec {
    pub id: AgentId,
    pub role: RoleId,
    pub goal: ObjectId,
    pub kind: ServiceKind,
    /// The user the service acts for. Requester services act for the
    /// configured requester when this is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner: Option<UserId>,
}

impl ServiceSpec {
    pub fn role_token(&self) -> Name {
        token(&self.id, "role")
    }

    pub fn goal_token(&self) -> Name {
        token(&self.id, "goal")
    }
}

fn token(id: &AgentId, field: &str) -> Name {
    Name::new(&format!("{id}.{field}")).expect("an agent id followed by a plain segment is a name")
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub name: Name,
    pub from: AgentId,
    pub to: AgentId,
    /// Information sent from `from` to `to`.
    pub forward: Name,
    /// Information sent back from `to` to `from`.
    pub backward: Name,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionConfig {
    pub services: Vec<ServiceSpec>,
    pub channels: Vec<ChannelSpec>,
    pub authority: AuthorityModel,
    pub requester_user: UserId,
    pub failure_signal: SignalId,
    /// Compose each group sequentially instead of in parallel.
    pub literal_seq: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("service `{0}` acts outside its user's roles and goals")]
    UnauthorizedService(AgentId),
    #[error("channel `{0}` refers to an undeclared service")]
    DanglingChannel(Name),
    #[error("service `{service}` is not the expected endpoint of channel `{channel}`")]
    EndpointMismatch { service: AgentId, channel: Name },
    #[error("service `{0}` is declared twice")]
    DuplicateService(AgentId),
    #[error("channel `{0}` is declared twice")]
    DuplicateChannel(Name),
    #[error("channel `{0}` connects a service to itself")]
    SelfChannel(Name),
    #[error("expected exactly one requester service, found {0}")]
    RequesterCount(usize),
    #[error(transparent)]
    Authority(#[from] AuthorityError),
    #[error(transparent)]
    Calc(#[from] CalcError),
}

/// Validated services (by id) and channels (by name).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedSets {
    pub services: BTreeMap<AgentId, ServiceSpec>,
    pub channels: BTreeMap<Name, ChannelSpec>,
}

/// Checks the configuration and every bound service against its user's
/// service view.
pub fn derive_sets(cfg: &CompositionConfig) -> Result<DerivedSets, GenError> {
    let mut services = BTreeMap::new();
    for s in &cfg.services {
        if services.insert(s.id.clone(), s.clone()).is_some() {
            return Err(GenError::DuplicateService(s.id.clone()));
        }
    }
    let requesters = services.values().filter(|s| s.kind == ServiceKind::Requester).count();
    if requesters != 1 {
        return Err(GenError::RequesterCount(requesters));
    }

    let mut channels = BTreeMap::new();
    for ch in &cfg.channels {
        if !services.contains_key(&ch.from) || !services.contains_key(&ch.to) {
            return Err(GenError::DanglingChannel(ch.name.clone()));
        }
        if ch.from == ch.to {
            return Err(GenError::SelfChannel(ch.name.clone()));
        }
        if channels.insert(ch.name.clone(), ch.clone()).is_some() {
            return Err(GenError::DuplicateChannel(ch.name.clone()));
        }
    }

    let mut views = BTreeMap::new();
    for s in services.values() {
        let user = match (&s.owner, s.kind) {
            (Some(u), _) => u,
            (None, ServiceKind::Requester) => &cfg.requester_user,
            _ => continue,
        };
        if !views.contains_key(user) {
            views.insert(user.clone(), cfg.authority.service_view(user)?);
        }
        if !views[user].contains(&s.role, &s.goal) {
            return Err(GenError::UnauthorizedService(s.id.clone()));
        }
    }
    Ok(DerivedSets { services, channels })
}

/// Service ids bound to a user, with the user they were checked against.
pub fn bound_services(cfg: &CompositionConfig) -> BTreeSet<(AgentId, UserId)> {
    cfg.services
        .iter()
        .filter_map(|s| match (&s.owner, s.kind) {
            (Some(u), _) => Some((s.id.clone(), u.clone())),
            (None, ServiceKind::Requester) => Some((s.id.clone(), cfg.requester_user.clone())),
            _ => None,
        })
        .collect()
}
