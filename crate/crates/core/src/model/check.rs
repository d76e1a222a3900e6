use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::behavior::BehaviorIssue;
use super::{Architecture, ConstraintTarget, Direction, Label, PropertyCheck};

/// Reserved words of the architecture language. None of them may be used as
/// a name anywhere in a model.
pub const KEYWORDS: &[&str] = &[
    "and",
    "architecture",
    "behavior",
    "connector",
    "constraint",
    "deadlock_free",
    "false",
    "from",
    "infra",
    "mu",
    "nu",
    "on",
    "or",
    "platform",
    "property",
    "provides",
    "requires",
    "service",
    "stop",
    "tagged",
    "tau",
    "to",
    "true",
    "where",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// ASCII letter followed by letters, digits or underscores, and not a keyword.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !is_keyword(s)
}

/// Identifiers joined by dots. Keywords are allowed as segments.
pub fn is_dotted_key(s: &str) -> bool {
    !s.is_empty() && s.split('.').all(|seg| is_identifier(seg) || is_keyword(seg))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    /// Name of the offending element (`component`, `component.port`, ...).
    pub location: String,
}

impl Diagnostic {
    pub fn error(code: &'static str, location: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, code, message: message.into(), location: location.into() }
    }

    pub fn warning(code: &'static str, location: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, code, message: message.into(), location: location.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}] {}: {}", self.code, self.location, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    pub fn new() -> Self {
        Diagnostics(Vec::new())
    }

    pub fn push(&mut self, d: Diagnostic) {
        self.0.push(d);
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter().filter(|d| d.severity == Severity::Error)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter()
    }

    pub fn codes(&self) -> Vec<&'static str> {
        self.0.iter().map(|d| d.code).collect()
    }

    pub fn extend(&mut self, other: Diagnostics) {
        self.0.extend(other.0);
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Reports every violated structural invariant. An architecture is
/// well-formed iff the result contains no errors.
pub fn check_wellformed(arch: &Architecture) -> Diagnostics {
    let mut out = Diagnostics::new();
    let name = |what: &str, loc: &str, n: &str, out: &mut Diagnostics| {
        if !is_identifier(n) {
            out.push(Diagnostic::error(
                "INVALID_NAME",
                loc,
                format!("{what} name `{n}` is not a valid identifier"),
            ));
        }
    };

    name("architecture", &arch.name, &arch.name, &mut out);
    if let super::AbstractionLevel::PlatformSpecific(p) = &arch.level {
        name("platform", &arch.name, p, &mut out);
    }

    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for c in &arch.components {
        name("component", &c.name, &c.name, &mut out);
        if !seen.insert(&c.name) {
            out.push(Diagnostic::error(
                "DUPLICATE_NAME",
                &c.name,
                format!("component `{}` declared more than once", c.name),
            ));
        }
        let mut ports = BTreeSet::new();
        for p in &c.ports {
            let loc = format!("{}.{}", c.name, p.name);
            name("port", &loc, &p.name, &mut out);
            if !ports.insert(&p.name) {
                out.push(Diagnostic::error("DUPLICATE_PORT", loc, "port declared more than once"));
            }
        }
        for t in &c.tags {
            name("tag", &c.name, t, &mut out);
        }
    }

    let mut seen_conn: BTreeSet<&str> = BTreeSet::new();
    let mut attached: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for k in &arch.connectors {
        name("connector", &k.name, &k.name, &mut out);
        if seen.contains(k.name.as_str()) || !seen_conn.insert(&k.name) {
            out.push(Diagnostic::error(
                "DUPLICATE_NAME",
                &k.name,
                format!("name `{}` is already used", k.name),
            ));
        }
        for (end, want) in [(&k.from, Direction::Requires), (&k.to, Direction::Provides)] {
            let Some(comp) = arch.component(&end.component) else {
                out.push(Diagnostic::error(
                    "DANGLING_ATTACHMENT",
                    &end.component,
                    format!("connector `{}` references missing component `{}`", k.name, end.component),
                ));
                continue;
            };
            let Some(port) = comp.port(&end.port) else {
                out.push(Diagnostic::error(
                    "UNKNOWN_PORT",
                    format!("{end}"),
                    format!("connector `{}` references missing port `{end}`", k.name),
                ));
                continue;
            };
            if port.direction != want {
                out.push(Diagnostic::error(
                    "DIRECTION_MISMATCH",
                    format!("{end}"),
                    format!(
                        "connector `{}` needs a {} port at `{end}`",
                        k.name,
                        want.keyword().trim_end_matches('s')
                    ),
                ));
            }
            *attached.entry((&end.component, &end.port)).or_default() += 1;
        }
        if k.from == k.to {
            out.push(Diagnostic::error("SELF_ATTACHMENT", &k.name, "connector joins a port to itself"));
        }
    }
    for ((c, p), n) in attached {
        if n > 1 {
            out.push(Diagnostic::error(
                "PORT_MULTIPLY_ATTACHED",
                format!("{c}.{p}"),
                format!("port attached to {n} connector endpoints"),
            ));
        }
    }

    for (owner, b) in &arch.behaviors {
        let Some(comp) = arch.component(owner) else {
            out.push(Diagnostic::error(
                "UNKNOWN_BEHAVIOR_OWNER",
                owner,
                format!("behavior given for missing component `{owner}`"),
            ));
            continue;
        };
        for p in b.ports_used() {
            if comp.port(p).is_none() {
                out.push(Diagnostic::error(
                    "UNKNOWN_PORT_LABEL",
                    format!("{owner}.{p}"),
                    format!("behavior of `{owner}` uses undeclared port `{p}`"),
                ));
            }
        }
        for def in b.definitions.keys() {
            name("process", owner, def, &mut out);
        }
        for issue in b.issues() {
            let d = match issue {
                BehaviorIssue::UnresolvedCall(n) => Diagnostic::error(
                    "UNRESOLVED_CALL",
                    owner,
                    format!("call to undefined process `{n}`"),
                ),
                BehaviorIssue::UnguardedRecursion(n) => Diagnostic::error(
                    "UNGUARDED_RECURSION",
                    owner,
                    format!("process `{n}` can call itself without performing an action"),
                ),
                BehaviorIssue::UnboundedParallel(n) => Diagnostic::error(
                    "UNBOUNDED_PARALLEL",
                    owner,
                    format!("recursive process `{n}` calls a process under a parallel operator"),
                ),
            };
            out.push(d);
        }
    }

    for c in &arch.constraints {
        if let ConstraintTarget::Element(t) = &c.target {
            if !arch.has_element(t) {
                out.push(Diagnostic::error(
                    "UNKNOWN_CONSTRAINT_TARGET",
                    t,
                    format!("constraint `{}` targets missing element `{t}`", c.key),
                ));
            }
        }
        if !is_dotted_key(&c.key) {
            out.push(Diagnostic::error(
                "INVALID_KEY",
                format!("{}", c.target),
                format!("constraint key `{}` is not a dotted identifier", c.key),
            ));
        }
    }

    let mut props = BTreeSet::new();
    for p in &arch.properties {
        name("property", &p.name, &p.name, &mut out);
        if !props.insert(&p.name) {
            out.push(Diagnostic::error(
                "DUPLICATE_NAME",
                &p.name,
                format!("property `{}` declared more than once", p.name),
            ));
        }
        if let PropertyCheck::Formula(f) = &p.check {
            for v in f.free_vars() {
                out.push(Diagnostic::error(
                    "OPEN_FORMULA",
                    &p.name,
                    format!("variable `{v}` is not bound by mu or nu"),
                ));
            }
            for v in f.bound_vars() {
                name("variable", &p.name, v, &mut out);
            }
            for l in f.labels() {
                let (Label::Send { component, port } | Label::Receive { component, port }) = l else {
                    continue;
                };
                name("component", &p.name, component, &mut out);
                name("port", &p.name, port, &mut out);
                if arch.component(component).and_then(|c| c.port(port)).is_none() {
                    out.push(Diagnostic::warning(
                        "UNKNOWN_FORMULA_LABEL",
                        &p.name,
                        format!("label `{l}` does not name a declared port"),
                    ));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    #[test]
    fn identifiers() {
        assert!(is_identifier("Store_r1"));
        assert!(!is_identifier("1abc"));
        assert!(!is_identifier("_x"));
        assert!(!is_identifier("service"));
        assert!(!is_identifier(""));
        assert!(is_dotted_key("qos.availability.replicas"));
        assert!(!is_dotted_key("qos..x"));
        assert!(is_dotted_key("platform.type"));
    }

    #[test]
    fn empty_architecture_is_clean() {
        assert!(check_wellformed(&Architecture::new("A")).is_empty());
    }

    #[test]
    fn dangling_attachment_reports_missing_component() {
        let mut a = Architecture::new("A");
        a.components.push(Component::service("S").with_port(Port::requires("r")));
        a.connectors.push(Connector::new("c", Attachment::new("S", "r"), Attachment::new("X", "p")));
        let d = check_wellformed(&a);
        assert_eq!(d.len(), 1);
        assert_eq!(d.0[0].code, "DANGLING_ATTACHMENT");
        assert_eq!(d.0[0].location, "X");
    }

    #[test]
    fn double_attachment_and_direction() {
        let mut a = Architecture::new("A");
        a.components.push(Component::service("S").with_port(Port::requires("r")));
        a.components.push(Component::service("T").with_port(Port::provides("p")).with_port(Port::provides("q")));
        a.connectors.push(Connector::new("c1", Attachment::new("S", "r"), Attachment::new("T", "p")));
        a.connectors.push(Connector::new("c2", Attachment::new("S", "r"), Attachment::new("T", "q")));
        a.connectors.push(Connector::new("c3", Attachment::new("T", "q"), Attachment::new("S", "r")));
        let codes = check_wellformed(&a).codes();
        assert!(codes.contains(&"PORT_MULTIPLY_ATTACHED"));
        assert!(codes.contains(&"DIRECTION_MISMATCH"));
    }

    #[test]
    fn name_shared_between_component_and_connector() {
        let mut a = Architecture::new("A");
        a.components.push(Component::service("S").with_port(Port::requires("r")));
        a.components.push(Component::service("T").with_port(Port::provides("p")));
        a.connectors.push(Connector::new("S", Attachment::new("S", "r"), Attachment::new("T", "p")));
        assert_eq!(check_wellformed(&a).codes(), alloc::vec!["DUPLICATE_NAME"]);
    }

    #[test]
    fn open_formula_is_an_error() {
        let mut a = Architecture::new("A");
        a.properties.push(PropertySpec { name: "p".into(), check: PropertyCheck::Formula(MuFormula::var("X")) });
        assert_eq!(check_wellformed(&a).codes(), alloc::vec!["OPEN_FORMULA"]);
    }
}
