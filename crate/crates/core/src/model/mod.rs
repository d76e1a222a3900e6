//! Component/connector architecture model.
//!
//! An [`Architecture`] is an immutable value: every transformation in this
//! crate takes one by reference and returns a new one.

mod behavior;
mod check;
mod formula;
mod normalize;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use behavior::{Action, Behavior, ProcExpr};
pub use check::{check_wellformed, is_dotted_key, is_identifier, is_keyword, Diagnostic, Diagnostics, Severity, KEYWORDS};
pub use formula::{Label, LabelPattern, MuFormula};
pub use normalize::{arch_equal, external_interface, normalize, InterfacePort};

/// Whether a model is platform independent or bound to a named platform.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum AbstractionLevel {
    #[default]
    Abstract,
    PlatformSpecific(String),
}

impl AbstractionLevel {
    pub fn is_abstract(&self) -> bool {
        matches!(self, AbstractionLevel::Abstract)
    }
}

impl fmt::Display for AbstractionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstractionLevel::Abstract => f.write_str("abstract"),
            AbstractionLevel::PlatformSpecific(p) => write!(f, "platform {p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Provides,
    Requires,
}

impl Direction {
    pub fn keyword(self) -> &'static str {
        match self {
            Direction::Provides => "provides",
            Direction::Requires => "requires",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Port {
    pub name: String,
    pub direction: Direction,
}

impl Port {
    pub fn provides(name: impl Into<String>) -> Self {
        Port { name: name.into(), direction: Direction::Provides }
    }

    pub fn requires(name: impl Into<String>) -> Self {
        Port { name: name.into(), direction: Direction::Requires }
    }
}

/// Services come from the application model; infrastructural components
/// (dispatchers, gateways, registries) are introduced by transformations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum ComponentKind {
    #[default]
    Service,
    Infrastructural,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    pub name: String,
    pub kind: ComponentKind,
    pub ports: Vec<Port>,
    pub tags: BTreeSet<String>,
}

impl Component {
    pub fn service(name: impl Into<String>) -> Self {
        Component {
            name: name.into(),
            kind: ComponentKind::Service,
            ports: Vec::new(),
            tags: BTreeSet::new(),
        }
    }

    pub fn infrastructural(name: impl Into<String>) -> Self {
        Component { kind: ComponentKind::Infrastructural, ..Component::service(name) }
    }

    pub fn with_port(mut self, port: Port) -> Self {
        self.ports.push(port);
        self
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tags.insert(tag.into());
        self
    }

    pub fn port(&self, name: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.name == name)
    }
}

/// One end of a connector: a `component.port` pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attachment {
    pub component: String,
    pub port: String,
}

impl Attachment {
    pub fn new(component: impl Into<String>, port: impl Into<String>) -> Self {
        Attachment { component: component.into(), port: port.into() }
    }
}

impl fmt::Display for Attachment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.component, self.port)
    }
}

/// Point-to-point link from a `Requires` port to a `Provides` port.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Connector {
    pub name: String,
    pub from: Attachment,
    pub to: Attachment,
}

impl Connector {
    pub fn new(name: impl Into<String>, from: Attachment, to: Attachment) -> Self {
        Connector { name: name.into(), from, to }
    }

    pub fn touches(&self, component: &str) -> bool {
        self.from.component == component || self.to.component == component
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Str(String),
    Bool(bool),
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\t' => f.write_str("\\t")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintTarget {
    /// The architecture as a whole.
    Architecture,
    /// A component or connector, by name.
    Element(String),
}

impl fmt::Display for ConstraintTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintTarget::Architecture => f.write_str("architecture"),
            ConstraintTarget::Element(n) => f.write_str(n),
        }
    }
}

/// A keyed annotation such as `qos.availability.replicas = 3`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub target: ConstraintTarget,
    pub key: String,
    pub value: Value,
}

impl Constraint {
    pub fn on(target: impl Into<String>, key: impl Into<String>, value: Value) -> Self {
        Constraint { target: ConstraintTarget::Element(target.into()), key: key.into(), value }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropertyCheck {
    DeadlockFree,
    Formula(MuFormula),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropertySpec {
    pub name: String,
    pub check: PropertyCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Architecture {
    pub name: String,
    pub level: AbstractionLevel,
    pub components: Vec<Component>,
    pub connectors: Vec<Connector>,
    /// Behavior per component name; components without an entry behave as `stop`.
    pub behaviors: BTreeMap<String, Behavior>,
    pub constraints: Vec<Constraint>,
    pub properties: Vec<PropertySpec>,
}

impl Architecture {
    pub fn new(name: impl Into<String>) -> Self {
        Architecture { name: name.into(), ..Architecture::default() }
    }

    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn connector(&self, name: &str) -> Option<&Connector> {
        self.connectors.iter().find(|c| c.name == name)
    }

    /// True if `name` is used by any component or connector.
    pub fn has_element(&self, name: &str) -> bool {
        self.component(name).is_some() || self.connector(name).is_some()
    }

    /// The connector attached to `component.port`, if any.
    pub fn attached_connector(&self, component: &str, port: &str) -> Option<&Connector> {
        self.connectors.iter().find(|c| {
            (c.from.component == component && c.from.port == port)
                || (c.to.component == component && c.to.port == port)
        })
    }

    pub fn property(&self, name: &str) -> Option<&PropertySpec> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// Constraints whose target is the named element.
    pub fn constraints_on<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Constraint> + 'a {
        self.constraints
            .iter()
            .filter(move |c| matches!(&c.target, ConstraintTarget::Element(n) if n == name))
    }
}
