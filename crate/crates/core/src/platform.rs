//! Platform adaptation (model C to model D) and deployment placement.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{
    check_wellformed, AbstractionLevel, Architecture, Component, ComponentKind, Constraint, Diagnostics, Value,
};
use crate::refine::{RefinementAction, SequenceError};
use crate::weave::Cascade;

/// Maps services carrying `tag` to a platform service type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceBinding {
    pub tag: String,
    pub service_type: String,
    /// Node class services of this type prefer.
    pub node_class: Option<String>,
    /// Infrastructural components the platform needs when this binding is used.
    pub infra: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeClass {
    pub name: String,
    pub capacity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatformProfile {
    pub name: String,
    pub bindings: Vec<ServiceBinding>,
    pub protocol: String,
    pub node_classes: Vec<NodeClass>,
}

impl PlatformProfile {
    /// First binding, in declaration order, whose tag the component carries.
    /// A component without tags counts as tagged `service`.
    pub fn binding_for(&self, c: &Component) -> Option<&ServiceBinding> {
        let fallback: BTreeSet<String> = [String::from("service")].into_iter().collect();
        let tags = if c.tags.is_empty() { &fallback } else { &c.tags };
        self.bindings.iter().find(|b| tags.contains(&b.tag))
    }
}

pub const TYPE_KEY: &str = "platform.type";
pub const PROTOCOL_KEY: &str = "platform.protocol";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlatformErrorCode {
    AlreadyConcrete,
    UnboundServiceKind,
    NameCollision,
    WrongLevel,
}

impl PlatformErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            PlatformErrorCode::AlreadyConcrete => "ALREADY_CONCRETE",
            PlatformErrorCode::UnboundServiceKind => "UNBOUND_SERVICE_KIND",
            PlatformErrorCode::NameCollision => "NAME_COLLISION",
            PlatformErrorCode::WrongLevel => "WRONG_LEVEL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatformError {
    pub code: PlatformErrorCode,
    pub message: String,
}

impl PlatformError {
    fn new(code: PlatformErrorCode, message: String) -> Self {
        PlatformError { code, message }
    }
}

impl fmt::Display for PlatformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.code.as_str(), self.message)
    }
}

impl core::error::Error for PlatformError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdaptFailure {
    IllFormed(Diagnostics),
    Platform(PlatformError),
    Action(SequenceError),
}

impl fmt::Display for AdaptFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdaptFailure::IllFormed(d) => write!(f, "input model is ill-formed:\n{d}"),
            AdaptFailure::Platform(e) => e.fmt(f),
            AdaptFailure::Action(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for AdaptFailure {}

/// The actions that bind `arch` to `profile`.
pub fn compile_adaptation(arch: &Architecture, profile: &PlatformProfile) -> Result<Vec<RefinementAction>, PlatformError> {
    if !arch.level.is_abstract() {
        return Err(PlatformError::new(
            PlatformErrorCode::AlreadyConcrete,
            format!("`{}` is already bound to {}", arch.name, arch.level),
        ));
    }
    let mut services: Vec<&Component> =
        arch.components.iter().filter(|c| c.kind == ComponentKind::Service).collect();
    services.sort_by(|a, b| a.name.cmp(&b.name));

    let mut out = Vec::new();
    let mut used = BTreeSet::new();
    for s in services {
        let Some(b) = profile.binding_for(s) else {
            let tags: Vec<&str> = if s.tags.is_empty() {
                alloc::vec!["service"]
            } else {
                s.tags.iter().map(String::as_str).collect()
            };
            return Err(PlatformError::new(
                PlatformErrorCode::UnboundServiceKind,
                format!("`{}` (tags: {}) has no binding on platform `{}`", s.name, tags.join(", "), profile.name),
            ));
        };
        used.insert(b.tag.as_str());
        out.push(RefinementAction::AttachConstraint {
            constraint: Constraint::on(s.name.clone(), TYPE_KEY, Value::Str(b.service_type.clone())),
        });
    }
    let mut added = BTreeSet::new();
    for b in profile.bindings.iter().filter(|b| used.contains(b.tag.as_str())) {
        for c in &b.infra {
            if !added.insert(c.name.clone()) {
                continue;
            }
            if arch.has_element(&c.name) {
                return Err(PlatformError::new(
                    PlatformErrorCode::NameCollision,
                    format!("platform component `{}` clashes with an existing element", c.name),
                ));
            }
            out.push(RefinementAction::AddComponent { component: c.clone(), behavior: None });
        }
    }
    let mut connectors: Vec<&str> = arch.connectors.iter().map(|k| k.name.as_str()).collect();
    connectors.sort_unstable();
    for k in connectors {
        out.push(RefinementAction::AttachConstraint {
            constraint: Constraint::on(k, PROTOCOL_KEY, Value::Str(profile.protocol.clone())),
        });
    }
    out.push(RefinementAction::SetLevel { level: AbstractionLevel::PlatformSpecific(profile.name.clone()) });
    Ok(out)
}

/// Binds an abstract, well-formed architecture to a platform. The last stage
/// of the cascade is the platform-specific model.
pub fn adapt_to_platform(arch: &Architecture, profile: &PlatformProfile) -> Result<Cascade, AdaptFailure> {
    let diags = check_wellformed(arch);
    if diags.has_errors() {
        return Err(AdaptFailure::IllFormed(diags));
    }
    let actions = compile_adaptation(arch, profile).map_err(AdaptFailure::Platform)?;
    let mut cascade = Cascade::build(arch, actions, &profile.name).map_err(AdaptFailure::Action)?;
    cascade.goal_result = cascade.result().level == AbstractionLevel::PlatformSpecific(profile.name.clone());
    Ok(cascade)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub component: String,
    pub node_class: String,
    /// 0-based slot within the node class.
    pub slot: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolBinding {
    pub connector: String,
    pub protocol: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeploymentDescriptor {
    pub platform: String,
    pub placements: Vec<Placement>,
    pub bindings: Vec<ProtocolBinding>,
    /// Components that did not fit anywhere.
    pub unplaced: Vec<String>,
}

fn string_constraint<'a>(arch: &'a Architecture, element: &'a str, key: &str) -> Option<&'a str> {
    arch.constraints_on(element).find(|c| c.key == key).and_then(|c| c.value.as_str())
}

/// First-fit placement of every component, in name order. A component goes
/// to its preferred node class when that has a free slot, otherwise to the
/// first declared class with room.
pub fn emit_deployment(arch: &Architecture, profile: &PlatformProfile) -> Result<DeploymentDescriptor, PlatformError> {
    let want = AbstractionLevel::PlatformSpecific(profile.name.clone());
    if arch.level != want {
        return Err(PlatformError::new(
            PlatformErrorCode::WrongLevel,
            format!("`{}` is at level {}, expected {want}", arch.name, arch.level),
        ));
    }
    let mut used: BTreeMap<&str, u32> = profile.node_classes.iter().map(|n| (n.name.as_str(), 0)).collect();
    let mut names: Vec<&Component> = arch.components.iter().collect();
    names.sort_by(|a, b| a.name.cmp(&b.name));

    let mut placements = Vec::new();
    let mut unplaced = Vec::new();
    for c in names {
        let preferred = match c.kind {
            ComponentKind::Service => string_constraint(arch, &c.name, TYPE_KEY)
                .and_then(|t| profile.bindings.iter().find(|b| b.service_type == t)),
            ComponentKind::Infrastructural => {
                profile.bindings.iter().find(|b| b.infra.iter().any(|i| i.name == c.name))
            }
        }
        .and_then(|b| b.node_class.as_deref());
        let free = |n: &NodeClass, used: &BTreeMap<&str, u32>| used[n.name.as_str()] < n.capacity;
        let class = preferred
            .and_then(|p| profile.node_classes.iter().find(|n| n.name == p))
            .filter(|n| free(n, &used))
            .or_else(|| profile.node_classes.iter().find(|n| free(n, &used)));
        match class {
            Some(n) => {
                let slot = used.get_mut(n.name.as_str()).expect("declared class");
                placements.push(Placement { component: c.name.clone(), node_class: n.name.clone(), slot: *slot });
                *slot += 1;
            }
            None => unplaced.push(c.name.clone()),
        }
    }
    let mut bindings: Vec<ProtocolBinding> = arch
        .connectors
        .iter()
        .map(|k| ProtocolBinding {
            connector: k.name.clone(),
            protocol: String::from(string_constraint(arch, &k.name, PROTOCOL_KEY).unwrap_or(&profile.protocol)),
        })
        .collect();
    bindings.sort_by(|a, b| a.connector.cmp(&b.connector));
    Ok(DeploymentDescriptor { platform: profile.name.clone(), placements, bindings, unplaced })
}
