//! Refinement actions: atomic, precondition-guarded model edits.
//!
//! Every action is checked by [`check_preconditions`] before it is applied;
//! [`apply_action`] fails exactly when the guard fails, and a successful
//! application always yields a well-formed architecture.

mod apply;
mod guard;

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use crate::model::{AbstractionLevel, Behavior, Component, Connector, Constraint, Port};

pub use apply::{apply_action, apply_sequence, SequenceError};
pub use guard::check_preconditions;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RenameTarget {
    Component,
    Connector,
    /// A port of the named component.
    Port(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RefinementAction {
    AddComponent { component: Component, behavior: Option<Behavior> },
    RemoveComponent { name: String },
    AddConnector { connector: Connector },
    RemoveConnector { name: String },
    AddPort { component: String, port: Port },
    RemovePort { component: String, port: String },
    Rename { old: String, new: String, target: RenameTarget },
    /// Replaces connector `c` by `c.from -> component -> c.to`. The new
    /// connectors are named `<c>_in` and `<c>_out`.
    Interpose { connector: String, component: Component, behavior: Option<Behavior> },
    CloneComponent { source: String, clone: String, port_renames: BTreeMap<String, String> },
    ReplaceBehavior { component: String, behavior: Behavior },
    AttachConstraint { constraint: Constraint },
    SetLevel { level: AbstractionLevel },
}

impl RefinementAction {
    /// True for the variants that delete model elements.
    pub fn is_removal(&self) -> bool {
        matches!(
            self,
            RefinementAction::RemoveComponent { .. }
                | RefinementAction::RemoveConnector { .. }
                | RefinementAction::RemovePort { .. }
        )
    }

    /// Names of the two connectors an `Interpose` on `connector` creates.
    pub fn interposed_connector_names(connector: &str) -> (String, String) {
        (alloc::format!("{connector}_in"), alloc::format!("{connector}_out"))
    }
}

impl fmt::Display for RefinementAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::format_action(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionErrorCode {
    UnknownTarget,
    DuplicateName,
    PortInUse,
    DirectionMismatch,
    BehaviorLabelUnknown,
    WouldOrphanConnector,
    WouldOrphanConstraint,
    /// The action's own payload is malformed (bad identifier, wrong port
    /// shape for `Interpose`, ill-formed behavior).
    InvalidPayload,
}

impl ActionErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ActionErrorCode::UnknownTarget => "UNKNOWN_TARGET",
            ActionErrorCode::DuplicateName => "DUPLICATE_NAME",
            ActionErrorCode::PortInUse => "PORT_IN_USE",
            ActionErrorCode::DirectionMismatch => "DIRECTION_MISMATCH",
            ActionErrorCode::BehaviorLabelUnknown => "BEHAVIOR_LABEL_UNKNOWN",
            ActionErrorCode::WouldOrphanConnector => "WOULD_ORPHAN_CONNECTOR",
            ActionErrorCode::WouldOrphanConstraint => "WOULD_ORPHAN_CONSTRAINT",
            ActionErrorCode::InvalidPayload => "INVALID_PAYLOAD",
        }
    }
}

impl fmt::Display for ActionErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionError {
    pub code: ActionErrorCode,
    pub message: String,
}

impl ActionError {
    pub(crate) fn new(code: ActionErrorCode, message: impl Into<String>) -> Self {
        ActionError { code, message: message.into() }
    }
}

impl fmt::Display for ActionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.code, self.message)
    }
}

impl core::error::Error for ActionError {}
