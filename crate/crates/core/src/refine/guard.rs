use alloc::collections::BTreeSet;
use alloc::format;

use super::{ActionError, ActionErrorCode as Code, RefinementAction, RenameTarget};
use crate::model::{is_identifier, AbstractionLevel, Architecture, Behavior, Component, ConstraintTarget, Direction};

type Guard = Result<(), ActionError>;

fn fail(code: Code, message: impl Into<alloc::string::String>) -> Guard {
    Err(ActionError::new(code, message))
}

fn fresh(arch: &Architecture, name: &str) -> Guard {
    if arch.has_element(name) {
        return fail(Code::DuplicateName, format!("name `{name}` is already used"));
    }
    if !is_identifier(name) {
        return fail(Code::InvalidPayload, format!("`{name}` is not a valid identifier"));
    }
    Ok(())
}

fn component<'a>(arch: &'a Architecture, name: &str) -> Result<&'a Component, ActionError> {
    arch.component(name)
        .ok_or_else(|| ActionError::new(Code::UnknownTarget, format!("no component named `{name}`")))
}

fn no_constraints_on(arch: &Architecture, name: &str) -> Guard {
    if let Some(c) = arch.constraints_on(name).next() {
        return fail(
            Code::WouldOrphanConstraint,
            format!("constraint `{}` still targets `{name}`", c.key),
        );
    }
    Ok(())
}

fn valid_component(c: &Component) -> Guard {
    let mut names = BTreeSet::new();
    for p in &c.ports {
        if !is_identifier(&p.name) {
            return fail(Code::InvalidPayload, format!("port name `{}` is not a valid identifier", p.name));
        }
        if !names.insert(&p.name) {
            return fail(Code::InvalidPayload, format!("port `{}` declared twice on `{}`", p.name, c.name));
        }
    }
    if let Some(t) = c.tags.iter().find(|t| !is_identifier(t)) {
        return fail(Code::InvalidPayload, format!("tag `{t}` is not a valid identifier"));
    }
    Ok(())
}

fn valid_behavior(c: &Component, b: &Behavior) -> Guard {
    if let Some(p) = b.ports_used().into_iter().find(|p| c.port(p).is_none()) {
        return fail(
            Code::BehaviorLabelUnknown,
            format!("behavior uses `{p}`, which is not a port of `{}`", c.name),
        );
    }
    if let Some(d) = b.definitions.keys().find(|d| !is_identifier(d)) {
        return fail(Code::InvalidPayload, format!("process name `{d}` is not a valid identifier"));
    }
    if let Some(issue) = b.issues().first() {
        return fail(Code::InvalidPayload, format!("ill-formed behavior: {issue:?}"));
    }
    Ok(())
}

/// Checks whether `action` can be applied to the well-formed `arch`.
/// Returns the first violated guard; never modifies anything.
pub fn check_preconditions(arch: &Architecture, action: &RefinementAction) -> Result<(), ActionError> {
    match action {
        RefinementAction::AddComponent { component: c, behavior } => {
            fresh(arch, &c.name)?;
            valid_component(c)?;
            if let Some(b) = behavior {
                valid_behavior(c, b)?;
            }
            Ok(())
        }
        RefinementAction::RemoveComponent { name } => {
            component(arch, name)?;
            if let Some(k) = arch.connectors.iter().find(|k| k.touches(name)) {
                return fail(
                    Code::WouldOrphanConnector,
                    format!("connector `{}` is still attached to `{name}`", k.name),
                );
            }
            no_constraints_on(arch, name)
        }
        RefinementAction::AddConnector { connector: k } => {
            fresh(arch, &k.name)?;
            for (end, want) in [(&k.from, Direction::Requires), (&k.to, Direction::Provides)] {
                let c = component(arch, &end.component)?;
                let Some(p) = c.port(&end.port) else {
                    return fail(Code::UnknownTarget, format!("no port `{end}`"));
                };
                if p.direction != want {
                    return fail(
                        Code::DirectionMismatch,
                        format!("`{end}` is a {} port", p.direction.keyword()),
                    );
                }
            }
            for end in [&k.from, &k.to] {
                if let Some(other) = arch.attached_connector(&end.component, &end.port) {
                    return fail(Code::PortInUse, format!("`{end}` is already attached to `{}`", other.name));
                }
            }
            Ok(())
        }
        RefinementAction::RemoveConnector { name } => {
            if arch.connector(name).is_none() {
                return fail(Code::UnknownTarget, format!("no connector named `{name}`"));
            }
            no_constraints_on(arch, name)
        }
        RefinementAction::AddPort { component: c, port } => {
            let c = component(arch, c)?;
            if c.port(&port.name).is_some() {
                return fail(Code::DuplicateName, format!("`{}` already has a port `{}`", c.name, port.name));
            }
            if !is_identifier(&port.name) {
                return fail(Code::InvalidPayload, format!("`{}` is not a valid identifier", port.name));
            }
            Ok(())
        }
        RefinementAction::RemovePort { component: c, port } => {
            let comp = component(arch, c)?;
            if comp.port(port).is_none() {
                return fail(Code::UnknownTarget, format!("no port `{c}.{port}`"));
            }
            if let Some(k) = arch.attached_connector(c, port) {
                return fail(Code::PortInUse, format!("`{c}.{port}` is attached to `{}`", k.name));
            }
            if arch.behaviors.get(c).is_some_and(|b| b.ports_used().contains(port.as_str())) {
                return fail(Code::PortInUse, format!("the behavior of `{c}` uses `{port}`"));
            }
            Ok(())
        }
        RefinementAction::Rename { old, new, target } => match target {
            RenameTarget::Component => {
                component(arch, old)?;
                fresh(arch, new)
            }
            RenameTarget::Connector => {
                if arch.connector(old).is_none() {
                    return fail(Code::UnknownTarget, format!("no connector named `{old}`"));
                }
                fresh(arch, new)
            }
            RenameTarget::Port(c) => {
                let comp = component(arch, c)?;
                if comp.port(old).is_none() {
                    return fail(Code::UnknownTarget, format!("no port `{c}.{old}`"));
                }
                if comp.port(new).is_some() {
                    return fail(Code::DuplicateName, format!("`{c}` already has a port `{new}`"));
                }
                if !is_identifier(new) {
                    return fail(Code::InvalidPayload, format!("`{new}` is not a valid identifier"));
                }
                Ok(())
            }
        },
        RefinementAction::Interpose { connector, component: m, behavior } => {
            if arch.connector(connector).is_none() {
                return fail(Code::UnknownTarget, format!("no connector named `{connector}`"));
            }
            fresh(arch, &m.name)?;
            let (a, b) = RefinementAction::interposed_connector_names(connector);
            for n in [&a, &b] {
                if n == &m.name {
                    return fail(Code::DuplicateName, format!("`{n}` would name both a component and a connector"));
                }
                fresh(arch, n)?;
            }
            valid_component(m)?;
            let provides = m.ports.iter().filter(|p| p.direction == Direction::Provides).count();
            let requires = m.ports.iter().filter(|p| p.direction == Direction::Requires).count();
            if (provides, requires) != (1, 1) || m.ports.len() != 2 {
                return fail(
                    Code::InvalidPayload,
                    format!("`{}` must have exactly one provides and one requires port", m.name),
                );
            }
            if let Some(b) = behavior {
                valid_behavior(m, b)?;
            }
            no_constraints_on(arch, connector)
        }
        RefinementAction::CloneComponent { source, clone, port_renames } => {
            let src = component(arch, source)?;
            fresh(arch, clone)?;
            if let Some(p) = port_renames.keys().find(|p| src.port(p).is_none()) {
                return fail(Code::UnknownTarget, format!("no port `{source}.{p}` to rename"));
            }
            let mut names = BTreeSet::new();
            for p in &src.ports {
                let n = port_renames.get(&p.name).unwrap_or(&p.name);
                if !is_identifier(n) {
                    return fail(Code::InvalidPayload, format!("`{n}` is not a valid identifier"));
                }
                if !names.insert(n) {
                    return fail(Code::DuplicateName, format!("port renames produce `{n}` twice"));
                }
            }
            Ok(())
        }
        RefinementAction::ReplaceBehavior { component: c, behavior } => {
            let comp = component(arch, c)?;
            valid_behavior(comp, behavior)
        }
        RefinementAction::AttachConstraint { constraint } => {
            if let ConstraintTarget::Element(t) = &constraint.target {
                if !arch.has_element(t) {
                    return fail(Code::UnknownTarget, format!("no component or connector named `{t}`"));
                }
            }
            if !crate::model::is_dotted_key(&constraint.key) {
                return fail(Code::InvalidPayload, format!("`{}` is not a dotted key", constraint.key));
            }
            Ok(())
        }
        RefinementAction::SetLevel { level } => {
            if let AbstractionLevel::PlatformSpecific(p) = level {
                if !is_identifier(p) {
                    return fail(Code::InvalidPayload, format!("`{p}` is not a valid platform name"));
                }
            }
            Ok(())
        }
    }
}
