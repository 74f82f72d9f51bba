//! JSON documents for the authority database (AIDB) and the service
//! database (WSDB).

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{Map, Value};
use thiserror::Error;

use crate::authority::{AuthorityModel, ObjectId, OperationId, PermissionId, RoleId, UserId};
use crate::generator::{ChannelSpec, ServiceKind, ServiceSpec};
use crate::syntax::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{0}: schema violation: {1}")]
    SchemaViolation(String, String),
    #[error("{path}: `{id}` is not declared")]
    DanglingReference { path: String, id: String },
}

fn violation(path: &str, what: impl Into<String>) -> LoadError {
    LoadError::SchemaViolation(path.to_string(), what.into())
}

fn object<'a>(v: &'a Value, path: &str, keys: &[&str], optional: &[&str]) -> Result<&'a Map<String, Value>, LoadError> {
    let map = v.as_object().ok_or_else(|| violation(path, "expected an object"))?;
    for k in map.keys() {
        if !keys.contains(&k.as_str()) && !optional.contains(&k.as_str()) {
            return Err(violation(&format!("{path}.{k}"), "unknown key"));
        }
    }
    for k in keys {
        if !map.contains_key(*k) {
            return Err(violation(&format!("{path}.{k}"), "missing key"));
        }
    }
    Ok(map)
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str, LoadError> {
    v.as_str().ok_or_else(|| violation(path, "expected a string"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a [Value], LoadError> {
    v.as_array().map(Vec::as_slice).ok_or_else(|| violation(path, "expected an array"))
}

fn string_set(v: &Value, path: &str) -> Result<BTreeSet<String>, LoadError> {
    let mut out = BTreeSet::new();
    for (i, item) in array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let s = string(item, &p)?;
        if s.is_empty() {
            return Err(violation(&p, "empty identifier"));
        }
        if !out.insert(s.to_string()) {
            return Err(violation(&p, format!("duplicate `{s}`")));
        }
    }
    Ok(out)
}

fn check_ref(declared: &BTreeSet<String>, id: &str, path: &str) -> Result<(), LoadError> {
    if declared.contains(id) {
        Ok(())
    } else {
        Err(LoadError::DanglingReference { path: path.to_string(), id: id.to_string() })
    }
}

/// Loads and validates an AIDB document. Users without a `ua` entry get an
/// empty role set.
pub fn load_aidb(text: &str) -> Result<AuthorityModel, LoadError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| LoadError::Json(e.to_string()))?;
    let keys = ["users", "roles", "objects", "operations", "permissions", "ua", "pa"];
    let top = object(&doc, "$", &keys, &[])?;
    let users = string_set(&top["users"], "$.users")?;
    let roles = string_set(&top["roles"], "$.roles")?;
    let objects = string_set(&top["objects"], "$.objects")?;
    let operations = string_set(&top["operations"], "$.operations")?;

    let mut permissions = BTreeMap::new();
    let perm_map = top["permissions"].as_object().ok_or_else(|| violation("$.permissions", "expected an object"))?;
    for (pid, pairs) in perm_map {
        let path = format!("$.permissions.{pid}");
        let mut set = BTreeSet::new();
        for (i, pair) in array(pairs, &path)?.iter().enumerate() {
            let p = format!("{path}[{i}]");
            let items = array(pair, &p)?;
            if items.len() != 2 {
                return Err(violation(&p, "expected an [operation, object] pair"));
            }
            let op = string(&items[0], &format!("{p}[0]"))?;
            let ob = string(&items[1], &format!("{p}[1]"))?;
            check_ref(&operations, op, &format!("{p}[0]"))?;
            check_ref(&objects, ob, &format!("{p}[1]"))?;
            set.insert((OperationId::new(op), ObjectId::new(ob)));
        }
        permissions.insert(PermissionId::new(pid.as_str()), set);
    }
    let perm_ids: BTreeSet<String> = perm_map.keys().cloned().collect();

    let ua_map = top["ua"].as_object().ok_or_else(|| violation("$.ua", "expected an object"))?;
    let mut ua: BTreeMap<UserId, BTreeSet<RoleId>> =
        users.iter().map(|u| (UserId::new(u.as_str()), BTreeSet::new())).collect();
    for (u, rs) in ua_map {
        let path = format!("$.ua.{u}");
        check_ref(&users, u, &path)?;
        let set = string_set(rs, &path)?;
        for (i, r) in set.iter().enumerate() {
            check_ref(&roles, r, &format!("{path}[{i}]"))?;
        }
        ua.insert(UserId::new(u.as_str()), set.into_iter().map(RoleId::new).collect());
    }

    let pa_map = top["pa"].as_object().ok_or_else(|| violation("$.pa", "expected an object"))?;
    let mut pa = BTreeMap::new();
    for (r, ps) in pa_map {
        let path = format!("$.pa.{r}");
        check_ref(&roles, r, &path)?;
        let set = string_set(ps, &path)?;
        for (i, p) in set.iter().enumerate() {
            check_ref(&perm_ids, p, &format!("{path}[{i}]"))?;
        }
        pa.insert(RoleId::new(r.as_str()), set.into_iter().map(PermissionId::new).collect());
    }

    Ok(AuthorityModel {
        users: users.into_iter().map(UserId::new).collect(),
        roles: roles.into_iter().map(RoleId::new).collect(),
        objects: objects.into_iter().map(ObjectId::new).collect(),
        operations: operations.into_iter().map(OperationId::new).collect(),
        permissions,
        ua,
        pa,
    })
}

/// Service and channel declarations, sorted by id and name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WsdbDocument {
    pub services: Vec<ServiceSpec>,
    pub channels: Vec<ChannelSpec>,
}

fn name(v: &Value, path: &str) -> Result<Name, LoadError> {
    let s = string(v, path)?;
    Name::new(s).map_err(|_| violation(path, format!("`{s}` is not a valid name")))
}

fn kind(v: &Value, path: &str) -> Result<ServiceKind, LoadError> {
    serde_json::from_value(v.clone()).map_err(|_| violation(path, "unknown service kind"))
}

pub fn load_wsdb(text: &str) -> Result<WsdbDocument, LoadError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| LoadError::Json(e.to_string()))?;
    let top = object(&doc, "$", &["services", "channels"], &[])?;

    let mut services = Vec::new();
    let mut ids = BTreeSet::new();
    for (i, s) in array(&top["services"], "$.services")?.iter().enumerate() {
        let path = format!("$.services[{i}]");
        let m = object(s, &path, &["id", "role", "goal", "kind"], &["owner"])?;
        let id = name(&m["id"], &format!("{path}.id"))?;
        if !ids.insert(id.to_string()) {
            return Err(violation(&format!("{path}.id"), format!("duplicate service `{id}`")));
        }
        let owner = match m.get("owner") {
            Some(o) => Some(UserId::new(string(o, &format!("{path}.owner"))?)),
            None => None,
        };
        services.push(ServiceSpec {
            id,
            role: RoleId::new(string(&m["role"], &format!("{path}.role"))?),
            goal: ObjectId::new(string(&m["goal"], &format!("{path}.goal"))?),
            kind: kind(&m["kind"], &format!("{path}.kind"))?,
            owner,
        });
    }

    let mut channels = Vec::new();
    let mut names = BTreeSet::new();
    for (i, c) in array(&top["channels"], "$.channels")?.iter().enumerate() {
        let path = format!("$.channels[{i}]");
        let m = object(c, &path, &["name", "from", "to", "forward", "backward"], &[])?;
        let ch = ChannelSpec {
            name: name(&m["name"], &format!("{path}.name"))?,
            from: name(&m["from"], &format!("{path}.from"))?,
            to: name(&m["to"], &format!("{path}.to"))?,
            forward: name(&m["forward"], &format!("{path}.forward"))?,
            backward: name(&m["backward"], &format!("{path}.backward"))?,
        };
        if !ch.name.is_simple() {
            return Err(violation(&format!("{path}.name"), "channel names have a single segment"));
        }
        if !names.insert(ch.name.to_string()) {
            return Err(violation(&format!("{path}.name"), format!("duplicate channel `{}`", ch.name)));
        }
        check_ref(&ids, ch.from.as_str(), &format!("{path}.from"))?;
        check_ref(&ids, ch.to.as_str(), &format!("{path}.to"))?;
        if ch.from == ch.to {
            return Err(violation(&path, "a channel needs two distinct endpoints"));
        }
        channels.push(ch);
    }
    services.sort_by(|a, b| a.id.cmp(&b.id));
    channels.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(WsdbDocument { services, channels })
}
