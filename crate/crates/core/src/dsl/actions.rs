//! Line-oriented rendering of refinement actions, one action per line:
//!
//! ```text
//! add_component <component-decl> [= <behavior>]
//! remove_component NAME
//! add_connector NAME { from C.p to D.q }
//! remove_connector NAME
//! add_port COMPONENT (provides|requires) PORT
//! remove_port COMPONENT PORT
//! rename_component OLD NEW
//! rename_connector OLD NEW
//! rename_port COMPONENT OLD NEW
//! interpose CONNECTOR <component-decl> [= <behavior>]
//! clone_component SOURCE CLONE [renaming p -> q, ...]
//! replace_behavior COMPONENT = <behavior>
//! attach_constraint on (NAME|architecture) { key = literal }
//! set_level (abstract | platform NAME)
//! ```
//!
//! `<component-decl>` and `<behavior>` use the architecture syntax.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt::Write;

use super::parser::Cursor;
use super::printer::{format_behavior, write_component};
use super::translate::{behavior, component, dotted};
use super::{ParseError, ParseErrorKind};
use crate::model::{AbstractionLevel, Attachment, Connector, Constraint, ConstraintTarget, Direction, Port};
use crate::refine::{RefinementAction, RenameTarget};

pub fn format_action(action: &RefinementAction) -> String {
    let mut s = String::new();
    match action {
        RefinementAction::AddComponent { component, behavior } => {
            s.push_str("add_component ");
            write_component(&mut s, component, 0);
            if let Some(b) = behavior {
                let _ = write!(s, " = {}", format_behavior(b));
            }
        }
        RefinementAction::RemoveComponent { name } => {
            let _ = write!(s, "remove_component {name}");
        }
        RefinementAction::AddConnector { connector: k } => {
            let _ = write!(s, "add_connector {} {{ from {} to {} }}", k.name, k.from, k.to);
        }
        RefinementAction::RemoveConnector { name } => {
            let _ = write!(s, "remove_connector {name}");
        }
        RefinementAction::AddPort { component, port } => {
            let _ = write!(s, "add_port {component} {} {}", port.direction.keyword(), port.name);
        }
        RefinementAction::RemovePort { component, port } => {
            let _ = write!(s, "remove_port {component} {port}");
        }
        RefinementAction::Rename { old, new, target } => {
            let _ = match target {
                RenameTarget::Component => write!(s, "rename_component {old} {new}"),
                RenameTarget::Connector => write!(s, "rename_connector {old} {new}"),
                RenameTarget::Port(c) => write!(s, "rename_port {c} {old} {new}"),
            };
        }
        RefinementAction::Interpose { connector, component, behavior } => {
            let _ = write!(s, "interpose {connector} ");
            write_component(&mut s, component, 0);
            if let Some(b) = behavior {
                let _ = write!(s, " = {}", format_behavior(b));
            }
        }
        RefinementAction::CloneComponent { source, clone, port_renames } => {
            let _ = write!(s, "clone_component {source} {clone}");
            for (i, (from, to)) in port_renames.iter().enumerate() {
                s.push_str(if i == 0 { " renaming " } else { ", " });
                let _ = write!(s, "{from} -> {to}");
            }
        }
        RefinementAction::ReplaceBehavior { component, behavior } => {
            let _ = write!(s, "replace_behavior {component} = {}", format_behavior(behavior));
        }
        RefinementAction::AttachConstraint { constraint: c } => {
            let _ = write!(s, "attach_constraint on {} {{ {} = {} }}", c.target, c.key, c.value);
        }
        RefinementAction::SetLevel { level } => {
            let _ = write!(s, "set_level {level}");
        }
    }
    s
}

/// Parses one action line in the format produced by [`format_action`].
pub fn parse_action(line: &str) -> Result<RefinementAction, ParseError> {
    let mut cur = Cursor::new(line)?;
    if cur.at_eof() {
        return Err(ParseError::new(ParseErrorKind::EmptyInput, cur.span(), &["action"], "end of input"));
    }
    let start = cur.span();
    let verb = cur.word()?;
    let action = match verb.text.as_str() {
        "add_component" | "interpose" => {
            let connector = if verb.text == "interpose" { Some(cur.ident()?.text) } else { None };
            let decl = cur.service()?;
            let b = if cur.eat_sym("=") {
                let (body, defs) = cur.behavior_rhs()?;
                Some(behavior(&body, &defs))
            } else {
                None
            };
            let component = component(&decl);
            match connector {
                Some(connector) => RefinementAction::Interpose { connector, component, behavior: b },
                None => RefinementAction::AddComponent { component, behavior: b },
            }
        }
        "remove_component" => RefinementAction::RemoveComponent { name: cur.ident()?.text },
        "add_connector" => {
            let name = cur.ident()?;
            let d = cur.connector_body(name, start)?;
            RefinementAction::AddConnector {
                connector: Connector::new(
                    d.name.text,
                    Attachment::new(d.from.component.text, d.from.port.text),
                    Attachment::new(d.to.component.text, d.to.port.text),
                ),
            }
        }
        "remove_connector" => RefinementAction::RemoveConnector { name: cur.ident()?.text },
        "add_port" => {
            let component = cur.ident()?.text;
            let direction = if cur.eat_kw("provides") {
                Direction::Provides
            } else if cur.eat_kw("requires") {
                Direction::Requires
            } else {
                return Err(cur.unexpected(&["`provides`", "`requires`"]));
            };
            let name = cur.ident()?.text;
            RefinementAction::AddPort { component, port: Port { name, direction } }
        }
        "remove_port" => RefinementAction::RemovePort { component: cur.ident()?.text, port: cur.ident()?.text },
        "rename_component" | "rename_connector" => {
            let target =
                if verb.text == "rename_component" { RenameTarget::Component } else { RenameTarget::Connector };
            RefinementAction::Rename { old: cur.ident()?.text, new: cur.ident()?.text, target }
        }
        "rename_port" => {
            let owner = cur.ident()?.text;
            RefinementAction::Rename { old: cur.ident()?.text, new: cur.ident()?.text, target: RenameTarget::Port(owner) }
        }
        "clone_component" => {
            let source = cur.ident()?.text;
            let clone = cur.ident()?.text;
            let mut port_renames = BTreeMap::new();
            if cur.eat_kw("renaming") {
                loop {
                    let from = cur.ident()?;
                    cur.expect_sym("->")?;
                    let to = cur.ident()?;
                    if port_renames.insert(from.text.clone(), to.text).is_some() {
                        return Err(ParseError::new(
                            ParseErrorKind::UnexpectedToken,
                            from.span,
                            &["port not yet renamed"],
                            from.text,
                        ));
                    }
                    if !cur.eat_sym(",") {
                        break;
                    }
                }
            }
            RefinementAction::CloneComponent { source, clone, port_renames }
        }
        "replace_behavior" => {
            let component = cur.ident()?.text;
            cur.expect_sym("=")?;
            let (body, defs) = cur.behavior_rhs()?;
            RefinementAction::ReplaceBehavior { component, behavior: behavior(&body, &defs) }
        }
        "attach_constraint" => {
            cur.expect_kw("on")?;
            let target = if cur.eat_kw("architecture") {
                ConstraintTarget::Architecture
            } else {
                ConstraintTarget::Element(cur.ident()?.text)
            };
            let (key, value, _) = cur.constraint_body()?;
            RefinementAction::AttachConstraint { constraint: Constraint { target, key: dotted(&key), value: value.value } }
        }
        "set_level" => {
            let level = if cur.eat_kw("abstract") {
                AbstractionLevel::Abstract
            } else if cur.eat_kw("platform") {
                AbstractionLevel::PlatformSpecific(cur.ident()?.text)
            } else {
                return Err(cur.unexpected(&["`abstract`", "`platform`"]));
            };
            RefinementAction::SetLevel { level }
        }
        other => {
            return Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                verb.span,
                &["action verb"],
                String::from(other),
            ))
        }
    };
    cur.expect_eof()?;
    Ok(action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Behavior, Component, ProcExpr, Value};

    fn roundtrip(a: RefinementAction) {
        let line = format_action(&a);
        assert!(!line.contains('\n'));
        assert_eq!(parse_action(&line).unwrap(), a, "{line}");
    }

    #[test]
    fn every_variant_round_trips() {
        let comp = Component::infrastructural("gw").with_tag("secure").with_port(Port::provides("inp")).with_port(Port::requires("out"));
        let b = Behavior::new(ProcExpr::call("G")).with_definition("G", ProcExpr::receive("inp", ProcExpr::send("out", ProcExpr::call("G"))));
        roundtrip(RefinementAction::AddComponent { component: comp.clone(), behavior: Some(b.clone()) });
        roundtrip(RefinementAction::AddComponent { component: Component::service("S"), behavior: None });
        roundtrip(RefinementAction::RemoveComponent { name: "S".into() });
        roundtrip(RefinementAction::AddConnector {
            connector: Connector::new("c", Attachment::new("A", "r"), Attachment::new("B", "p")),
        });
        roundtrip(RefinementAction::RemoveConnector { name: "c".into() });
        roundtrip(RefinementAction::AddPort { component: "S".into(), port: Port::requires("db") });
        roundtrip(RefinementAction::RemovePort { component: "S".into(), port: "db".into() });
        roundtrip(RefinementAction::Rename { old: "a".into(), new: "b".into(), target: RenameTarget::Component });
        roundtrip(RefinementAction::Rename { old: "a".into(), new: "b".into(), target: RenameTarget::Connector });
        roundtrip(RefinementAction::Rename { old: "a".into(), new: "b".into(), target: RenameTarget::Port("S".into()) });
        roundtrip(RefinementAction::Interpose { connector: "c".into(), component: comp, behavior: Some(b.clone()) });
        let mut renames = BTreeMap::new();
        renames.insert("p".into(), "q".into());
        renames.insert("r".into(), "s".into());
        roundtrip(RefinementAction::CloneComponent { source: "S".into(), clone: "S_r1".into(), port_renames: renames });
        roundtrip(RefinementAction::CloneComponent { source: "S".into(), clone: "S_r1".into(), port_renames: BTreeMap::new() });
        roundtrip(RefinementAction::ReplaceBehavior { component: "gw".into(), behavior: b });
        roundtrip(RefinementAction::AttachConstraint {
            constraint: Constraint::on("S", "woven.by", Value::Str("HA".into())),
        });
        roundtrip(RefinementAction::AttachConstraint {
            constraint: Constraint { target: ConstraintTarget::Architecture, key: "x".into(), value: Value::Int(-2) },
        });
        roundtrip(RefinementAction::SetLevel { level: AbstractionLevel::PlatformSpecific("testgrid".into()) });
        roundtrip(RefinementAction::SetLevel { level: AbstractionLevel::Abstract });
    }

    #[test]
    fn known_layout() {
        let a = RefinementAction::CloneComponent { source: "Store".into(), clone: "Store_r1".into(), port_renames: BTreeMap::new() };
        assert_eq!(format_action(&a), "clone_component Store Store_r1");
    }

    #[test]
    fn rejects_unknown_verb() {
        assert_eq!(parse_action("explode S").unwrap_err().found, "explode");
        assert_eq!(parse_action("").unwrap_err().kind, ParseErrorKind::EmptyInput);
    }
}
