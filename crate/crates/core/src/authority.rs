//! Role-based authority model: users, roles, permissions over
//! (operation, object) pairs, and the (role, goal) service view of a user.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

macro_rules! id_type {
    ($($name:ident),*) => {$(
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Self {
                $name(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_string())
            }
        }
    )*};
}

id_type!(UserId, RoleId, PermissionId, OperationId, ObjectId);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuthorityError {
    #[error("unknown user `{0}`")]
    UnknownUser(UserId),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorityModel {
    pub users: BTreeSet<UserId>,
    pub roles: BTreeSet<RoleId>,
    pub objects: BTreeSet<ObjectId>,
    pub operations: BTreeSet<OperationId>,
    pub permissions: BTreeMap<PermissionId, BTreeSet<(OperationId, ObjectId)>>,
    pub ua: BTreeMap<UserId, BTreeSet<RoleId>>,
    pub pa: BTreeMap<RoleId, BTreeSet<PermissionId>>,
}

/// The (role, goal) pairs a user may act under.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServiceView {
    pub pairs: BTreeSet<(RoleId, ObjectId)>,
}

impl ServiceView {
    pub fn contains(&self, role: &RoleId, goal: &ObjectId) -> bool {
        self.pairs.contains(&(role.clone(), goal.clone()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl AuthorityModel {
    fn known(&self, u: &UserId) -> Result<(), AuthorityError> {
        if self.users.contains(u) {
            Ok(())
        } else {
            Err(AuthorityError::UnknownUser(u.clone()))
        }
    }

    /// Every (operation, object) pair granted to `u` through any role.
    fn granted(&self, u: &UserId) -> impl Iterator<Item = &(OperationId, ObjectId)> + '_ {
        self.ua
            .get(u)
            .into_iter()
            .flatten()
            .filter_map(|r| self.pa.get(r))
            .flatten()
            .filter_map(|p| self.permissions.get(p))
            .flatten()
    }

    pub fn roles_of(&self, u: &UserId) -> Result<BTreeSet<RoleId>, AuthorityError> {
        self.known(u)?;
        Ok(self.ua.get(u).cloned().unwrap_or_default())
    }

    pub fn goals_of(&self, u: &UserId) -> Result<BTreeSet<ObjectId>, AuthorityError> {
        self.known(u)?;
        Ok(self.granted(u).map(|(_, ob)| ob.clone()).collect())
    }

    pub fn ops_of(&self, u: &UserId) -> Result<BTreeSet<OperationId>, AuthorityError> {
        self.known(u)?;
        Ok(self.granted(u).map(|(op, _)| op.clone()).collect())
    }

    pub fn authorize(&self, u: &UserId, op: &OperationId, obj: &ObjectId) -> Result<bool, AuthorityError> {
        self.known(u)?;
        Ok(self.granted(u).any(|(o, b)| o == op && b == obj))
    }

    /// All combinations of the user's roles and goals.
    pub fn service_view(&self, u: &UserId) -> Result<ServiceView, AuthorityError> {
        let roles = self.roles_of(u)?;
        let goals = self.goals_of(u)?;
        let pairs = roles
            .iter()
            .flat_map(|r| goals.iter().map(move |g| (r.clone(), g.clone())))
            .collect();
        Ok(ServiceView { pairs })
    }
}
