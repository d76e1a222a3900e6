use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{check_preconditions, ActionError, RefinementAction, RenameTarget};
use crate::model::{
    Architecture, Attachment, Connector, ConstraintTarget, Direction, Label, LabelPattern, MuFormula, Port,
    PropertyCheck,
};

/// Applies one action to a copy of `arch`. The input is never modified; on
/// error no partial result exists.
pub fn apply_action(arch: &Architecture, action: &RefinementAction) -> Result<Architecture, ActionError> {
    check_preconditions(arch, action)?;
    let mut a = arch.clone();
    edit(&mut a, action);
    Ok(a)
}

/// Failure of an action sequence: the 0-based index of the first failing
/// action and its error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceError {
    pub index: usize,
    pub error: ActionError,
}

impl fmt::Display for SequenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "action {} failed: {}", self.index, self.error)
    }
}

impl core::error::Error for SequenceError {}

/// Left fold of [`apply_action`]; all or nothing.
pub fn apply_sequence(arch: &Architecture, actions: &[RefinementAction]) -> Result<Architecture, SequenceError> {
    let mut a = arch.clone();
    for (index, action) in actions.iter().enumerate() {
        check_preconditions(&a, action).map_err(|error| SequenceError { index, error })?;
        edit(&mut a, action);
    }
    Ok(a)
}

/// Performs an action whose preconditions have been checked.
fn edit(a: &mut Architecture, action: &RefinementAction) {
    match action {
        RefinementAction::AddComponent { component, behavior } => {
            a.components.push(component.clone());
            if let Some(b) = behavior {
                a.behaviors.insert(component.name.clone(), b.clone());
            }
        }
        RefinementAction::RemoveComponent { name } => {
            a.components.retain(|c| &c.name != name);
            a.behaviors.remove(name);
        }
        RefinementAction::AddConnector { connector } => a.connectors.push(connector.clone()),
        RefinementAction::RemoveConnector { name } => a.connectors.retain(|k| &k.name != name),
        RefinementAction::AddPort { component, port } => {
            if let Some(c) = a.components.iter_mut().find(|c| &c.name == component) {
                c.ports.push(port.clone());
            }
        }
        RefinementAction::RemovePort { component, port } => {
            if let Some(c) = a.components.iter_mut().find(|c| &c.name == component) {
                c.ports.retain(|p| &p.name != port);
            }
        }
        RefinementAction::Rename { old, new, target } => rename(a, old, new, target),
        RefinementAction::Interpose { connector, component, behavior } => {
            let Some(idx) = a.connectors.iter().position(|k| &k.name == connector) else { return };
            let old = a.connectors.remove(idx);
            let port = |dir| component.ports.iter().find(|p: &&Port| p.direction == dir).map(|p| p.name.clone());
            let (Some(inp), Some(outp)) = (port(Direction::Provides), port(Direction::Requires)) else { return };
            let (in_name, out_name) = RefinementAction::interposed_connector_names(connector);
            a.components.push(component.clone());
            if let Some(b) = behavior {
                a.behaviors.insert(component.name.clone(), b.clone());
            }
            a.connectors.push(Connector::new(in_name, old.from, Attachment::new(component.name.clone(), inp)));
            a.connectors.push(Connector::new(out_name, Attachment::new(component.name.clone(), outp), old.to));
        }
        RefinementAction::CloneComponent { source, clone, port_renames } => {
            let Some(src) = a.component(source).cloned() else { return };
            let renamed = |p: &str| port_renames.get(p).cloned().unwrap_or_else(|| String::from(p));
            let mut copy = src;
            copy.name = clone.clone();
            for p in &mut copy.ports {
                p.name = renamed(&p.name);
            }
            if let Some(b) = a.behaviors.get(source) {
                let b = b.rename_ports(&renamed);
                a.behaviors.insert(clone.clone(), b);
            }
            a.components.push(copy);
        }
        RefinementAction::ReplaceBehavior { component, behavior } => {
            a.behaviors.insert(component.clone(), behavior.clone());
        }
        RefinementAction::AttachConstraint { constraint } => a.constraints.push(constraint.clone()),
        RefinementAction::SetLevel { level } => a.level = level.clone(),
    }
}

fn rename(a: &mut Architecture, old: &str, new: &str, target: &RenameTarget) {
    let retarget = |t: &mut ConstraintTarget| {
        if matches!(t, ConstraintTarget::Element(n) if n == old) {
            *t = ConstraintTarget::Element(String::from(new));
        }
    };
    match target {
        RenameTarget::Component => {
            for c in a.components.iter_mut().filter(|c| c.name == old) {
                c.name = String::from(new);
            }
            for k in &mut a.connectors {
                for end in [&mut k.from, &mut k.to] {
                    if end.component == old {
                        end.component = String::from(new);
                    }
                }
            }
            if let Some(b) = a.behaviors.remove(old) {
                a.behaviors.insert(String::from(new), b);
            }
            a.constraints.iter_mut().for_each(|c| retarget(&mut c.target));
            relabel(a, |component, port| (component == old).then(|| (String::from(new), String::from(port))));
        }
        RenameTarget::Connector => {
            for k in a.connectors.iter_mut().filter(|k| k.name == old) {
                k.name = String::from(new);
            }
            a.constraints.iter_mut().for_each(|c| retarget(&mut c.target));
        }
        RenameTarget::Port(owner) => {
            if let Some(c) = a.components.iter_mut().find(|c| &c.name == owner) {
                for p in c.ports.iter_mut().filter(|p| p.name == old) {
                    p.name = String::from(new);
                }
            }
            for k in &mut a.connectors {
                for end in [&mut k.from, &mut k.to] {
                    if &end.component == owner && end.port == old {
                        end.port = String::from(new);
                    }
                }
            }
            if let Some(b) = a.behaviors.get_mut(owner) {
                *b = b.rename_ports(&|p| String::from(if p == old { new } else { p }));
            }
            relabel(a, |component, port| {
                (component == owner && port == old).then(|| (String::from(component), String::from(new)))
            });
        }
    }
}

/// Maps a (component, port) label to its new name, if it changes.
type LabelMap<'a> = dyn Fn(&str, &str) -> Option<(String, String)> + 'a;

/// Rewrites labels in property formulas so they keep naming the same ports.
fn relabel(a: &mut Architecture, f: impl Fn(&str, &str) -> Option<(String, String)>) {
    fn walk(m: &mut MuFormula, f: &LabelMap<'_>) {
        match m {
            MuFormula::True | MuFormula::False | MuFormula::Var(_) => {}
            MuFormula::And(x, y) | MuFormula::Or(x, y) => {
                walk(x, f);
                walk(y, f);
            }
            MuFormula::Mu(_, x) | MuFormula::Nu(_, x) => walk(x, f),
            MuFormula::Diamond(l, x) | MuFormula::Box(l, x) => {
                if let LabelPattern::Exact(Label::Send { component, port } | Label::Receive { component, port }) = l {
                    if let Some((c, p)) = f(component, port) {
                        *component = c;
                        *port = p;
                    }
                }
                walk(x, f);
            }
        }
    }
    let props: Vec<_> = a.properties.iter_mut().collect();
    for p in props {
        if let PropertyCheck::Formula(m) = &mut p.check {
            walk(m, &f);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;
    use crate::refine::ActionErrorCode;

    fn two_services() -> Architecture {
        let mut a = Architecture::new("Pair");
        a.components.push(Component::service("Client").with_port(Port::requires("out")));
        a.components.push(Component::service("Server").with_port(Port::provides("inp")));
        a.connectors.push(Connector::new("link", Attachment::new("Client", "out"), Attachment::new("Server", "inp")));
        a
    }

    #[test]
    fn add_component_to_empty() {
        let a = apply_action(
            &Architecture::new("E"),
            &RefinementAction::AddComponent { component: Component::service("Auth"), behavior: None },
        )
        .unwrap();
        assert_eq!((a.components.len(), a.connectors.len()), (1, 0));
    }

    #[test]
    fn remove_unknown_component() {
        let e = check_preconditions(&Architecture::new("E"), &RefinementAction::RemoveComponent { name: "X".into() })
            .unwrap_err();
        assert_eq!(e.code, ActionErrorCode::UnknownTarget);
    }

    #[test]
    fn remove_attached_component_refuses() {
        let e = apply_action(&two_services(), &RefinementAction::RemoveComponent { name: "Server".into() }).unwrap_err();
        assert_eq!(e.code, ActionErrorCode::WouldOrphanConnector);
    }

    #[test]
    fn rename_to_itself_is_duplicate() {
        let e = apply_action(
            &two_services(),
            &RefinementAction::Rename { old: "Client".into(), new: "Client".into(), target: RenameTarget::Component },
        )
        .unwrap_err();
        assert_eq!(e.code, ActionErrorCode::DuplicateName);
    }

    #[test]
    fn rename_port_follows_attachments_and_behavior() {
        let mut a = two_services();
        a.behaviors.insert("Client".into(), Behavior::new(ProcExpr::send("out", ProcExpr::Stop)));
        let b = apply_action(
            &a,
            &RefinementAction::Rename { old: "out".into(), new: "req".into(), target: RenameTarget::Port("Client".into()) },
        )
        .unwrap();
        assert!(check_wellformed(&b).is_empty());
        assert_eq!(b.connectors[0].from, Attachment::new("Client", "req"));
        assert_eq!(b.behaviors["Client"].body, ProcExpr::send("req", ProcExpr::Stop));
    }

    #[test]
    fn interpose_keeps_interface() {
        let a = two_services();
        let gw = Component::infrastructural("link_gw1").with_port(Port::provides("inp")).with_port(Port::requires("out"));
        let b = apply_action(
            &a,
            &RefinementAction::Interpose { connector: "link".into(), component: gw, behavior: None },
        )
        .unwrap();
        assert_eq!((b.components.len(), b.connectors.len()), (3, 2));
        assert_eq!(external_interface(&a).unwrap(), external_interface(&b).unwrap());
    }

    #[test]
    fn sequence_reports_failing_index() {
        let add = RefinementAction::AddComponent { component: Component::service("A"), behavior: None };
        let e = apply_sequence(&Architecture::new("E"), &[add.clone(), add]).unwrap_err();
        assert_eq!(e.index, 1);
        assert_eq!(e.error.code, ActionErrorCode::DuplicateName);
    }

    #[test]
    fn empty_sequence_is_identity() {
        let a = two_services();
        assert_eq!(apply_sequence(&a, &[]).unwrap(), a);
    }

    #[test]
    fn clone_renames_ports_in_behavior() {
        let mut a = two_services();
        a.behaviors.insert("Server".into(), Behavior::new(ProcExpr::receive("inp", ProcExpr::Stop)));
        let mut renames = alloc::collections::BTreeMap::new();
        renames.insert("inp".into(), "in2".into());
        let b = apply_action(
            &a,
            &RefinementAction::CloneComponent { source: "Server".into(), clone: "Server2".into(), port_renames: renames },
        )
        .unwrap();
        assert_eq!(b.behaviors["Server2"].body, ProcExpr::receive("in2", ProcExpr::Stop));
        assert!(check_wellformed(&b).is_empty());
    }
}
