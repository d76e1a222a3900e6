//! Pattern weaving: a pattern (model B) is compiled against an architecture
//! (model A) into a list of refinement actions, which are then applied one
//! at a time. Every intermediate model is kept in a [`Cascade`].

mod compile;
mod goal;
mod selector;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::analysis::AnalysisError;
use crate::model::{check_wellformed, Architecture, ComponentKind, Diagnostics, Value};
use crate::refine::{apply_action, RefinementAction, SequenceError};

pub use compile::{compile_pattern, substitute as substitute_template, MAX_REPLICAS};
pub use goal::{glob_match, verify_goal};
pub use selector::match_selector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternKind {
    Replication,
    SecureChannel,
    Script,
}

impl PatternKind {
    pub fn keyword(self) -> &'static str {
        match self {
            PatternKind::Replication => "replication",
            PatternKind::SecureChannel => "secure_channel",
            PatternKind::Script => "script",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        [PatternKind::Replication, PatternKind::SecureChannel, PatternKind::Script]
            .into_iter()
            .find(|k| k.keyword() == s)
    }
}

/// How a pattern locates its targets in an architecture.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Selector {
    ByName(String),
    ByTag(String),
    ByConstraintKey(String),
    All,
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::ByName(n) => write!(f, "name {n}"),
            Selector::ByTag(t) => write!(f, "tag {t}"),
            Selector::ByConstraintKey(k) => write!(f, "constraint {k}"),
            Selector::All => f.write_str("all"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub component: String,
    /// Values derived from the selector; `ByConstraintKey` binds the
    /// constraint value under the key's last segment.
    pub bound: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GoalPredicate {
    /// Every non-replica component picked by the selector has at least
    /// `min` replicas, counting itself. Replicas of `S` are named `S_r<i>`.
    ReplicaCount { selector: Selector, min: i64 },
    /// Some component name matches the glob (`*` is the only wildcard).
    ComponentExists(String),
    /// Every connector has an endpoint on a component of this kind.
    ConnectorAllPassThrough(ComponentKind),
    /// The named property of the architecture holds.
    PropertyHolds(String),
}

impl fmt::Display for GoalPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoalPredicate::ReplicaCount { selector, min } => write!(f, "replica_count {selector} >= {min}"),
            GoalPredicate::ComponentExists(g) => write!(f, "component_exists {}", Value::Str(g.clone())),
            GoalPredicate::ConnectorAllPassThrough(k) => write!(
                f,
                "pass_through {}",
                match k {
                    ComponentKind::Service => "service",
                    ComponentKind::Infrastructural => "infra",
                }
            ),
            GoalPredicate::PropertyHolds(p) => write!(f, "property {p}"),
        }
    }
}

/// A reusable QoS pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub name: String,
    pub kind: PatternKind,
    pub selector: Selector,
    pub params: BTreeMap<String, Value>,
    /// Action line templates, `Script` patterns only.
    pub script: Vec<String>,
    /// Declared goal; `None` falls back to the kind's default.
    pub goal: Option<GoalPredicate>,
}

impl Pattern {
    pub fn new(name: impl Into<String>, kind: PatternKind, selector: Selector) -> Self {
        Pattern { name: name.into(), kind, selector, params: BTreeMap::new(), script: Vec::new(), goal: None }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: Value) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn gateway_prefix(&self) -> &str {
        self.params.get("gateway_name_prefix").and_then(Value::as_str).unwrap_or("gw")
    }

    /// The goal checked on the final model: the declared one, or a default
    /// per kind. Replication defaults to the smallest replica count any
    /// match asks for.
    pub fn effective_goal(&self, matches: &[Match]) -> GoalPredicate {
        if let Some(g) = &self.goal {
            return g.clone();
        }
        match self.kind {
            PatternKind::Replication => {
                let min = matches
                    .iter()
                    .filter_map(|m| compile::replicas_for(self, m).ok())
                    .min()
                    .unwrap_or(1);
                GoalPredicate::ReplicaCount { selector: self.selector.clone(), min }
            }
            PatternKind::SecureChannel => {
                GoalPredicate::ComponentExists(alloc::format!("*_{}1", self.gateway_prefix()))
            }
            PatternKind::Script => GoalPredicate::ComponentExists(String::from("*")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WeaveErrorCode {
    NoMatch,
    MissingParam,
    InvalidParam,
    NameCollision,
    /// The matched element does not have the shape the pattern needs.
    UnsupportedTarget,
    AlreadyConcrete,
    /// A script template does not expand to a valid action line.
    TemplateError,
}

impl WeaveErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            WeaveErrorCode::NoMatch => "NO_MATCH",
            WeaveErrorCode::MissingParam => "MISSING_PARAM",
            WeaveErrorCode::InvalidParam => "INVALID_PARAM",
            WeaveErrorCode::NameCollision => "NAME_COLLISION",
            WeaveErrorCode::UnsupportedTarget => "UNSUPPORTED_TARGET",
            WeaveErrorCode::AlreadyConcrete => "ALREADY_CONCRETE",
            WeaveErrorCode::TemplateError => "TEMPLATE_ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeaveError {
    pub code: WeaveErrorCode,
    pub message: String,
}

impl WeaveError {
    pub(crate) fn new(code: WeaveErrorCode, message: impl Into<String>) -> Self {
        WeaveError { code, message: message.into() }
    }
}

impl fmt::Display for WeaveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.code.as_str(), self.message)
    }
}

impl core::error::Error for WeaveError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoalError {
    UnknownProperty(String),
    Analysis(AnalysisError),
}

impl GoalError {
    pub fn code(&self) -> &'static str {
        match self {
            GoalError::UnknownProperty(_) => "UNKNOWN_PROPERTY",
            GoalError::Analysis(e) => e.code(),
        }
    }
}

impl fmt::Display for GoalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoalError::UnknownProperty(p) => write!(f, "[UNKNOWN_PROPERTY] no property named `{p}`"),
            GoalError::Analysis(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for GoalError {}

/// Why a weave produced no cascade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeaveFailure {
    IllFormed(Diagnostics),
    Compile(WeaveError),
    Action(SequenceError),
    Goal(GoalError),
}

impl fmt::Display for WeaveFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeaveFailure::IllFormed(d) => write!(f, "input model is ill-formed:\n{d}"),
            WeaveFailure::Compile(e) => e.fmt(f),
            WeaveFailure::Action(e) => e.fmt(f),
            WeaveFailure::Goal(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for WeaveFailure {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub action: RefinementAction,
    /// Name of the pattern or profile the action was compiled from.
    pub origin: String,
}

/// The sequence of models produced by applying actions one at a time.
/// `stages[0]` is the input model and `stages[i + 1]` is `stages[i]` after
/// `trace[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cascade {
    pub stages: Vec<Architecture>,
    pub trace: Vec<TraceEntry>,
    pub goal_result: bool,
}

impl Cascade {
    pub fn initial(&self) -> &Architecture {
        &self.stages[0]
    }

    pub fn result(&self) -> &Architecture {
        &self.stages[self.stages.len() - 1]
    }

    /// Applies `actions` stepwise to `arch`, recording every stage. The goal
    /// result starts out `false`.
    pub fn build(arch: &Architecture, actions: Vec<RefinementAction>, origin: &str) -> Result<Cascade, SequenceError> {
        let mut stages = Vec::with_capacity(actions.len() + 1);
        stages.push(arch.clone());
        let mut trace = Vec::with_capacity(actions.len());
        for (index, action) in actions.into_iter().enumerate() {
            let next = apply_action(&stages[index], &action).map_err(|error| SequenceError { index, error })?;
            stages.push(next);
            trace.push(TraceEntry { action, origin: String::from(origin) });
        }
        Ok(Cascade { stages, trace, goal_result: false })
    }
}

/// Compiles `p` against `arch`, applies the actions one by one and checks the
/// pattern's goal on the final model. Fails atomically.
pub fn weave(arch: &Architecture, p: &Pattern) -> Result<Cascade, WeaveFailure> {
    let diags = check_wellformed(arch);
    if diags.has_errors() {
        return Err(WeaveFailure::IllFormed(diags));
    }
    let matches = match_selector(arch, &p.selector);
    let actions = compile_pattern(arch, p).map_err(WeaveFailure::Compile)?;
    let mut cascade = Cascade::build(arch, actions, &p.name).map_err(WeaveFailure::Action)?;
    let goal = p.effective_goal(&matches);
    cascade.goal_result = verify_goal(cascade.result(), &goal).map_err(WeaveFailure::Goal)?;
    Ok(cascade)
}
