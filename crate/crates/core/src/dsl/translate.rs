use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;

use super::ast::*;
use crate::model::{
    check_wellformed, AbstractionLevel, Action, Architecture, Attachment, Behavior, Component, ComponentKind,
    Connector, Constraint, ConstraintTarget, Diagnostic, Diagnostics, MuFormula, Port, ProcExpr, PropertyCheck,
    PropertySpec,
};

/// Maps each syntactic construct onto exactly one core element and checks
/// the result. Returns the diagnostics instead of a model if any error is
/// found.
pub fn translate_to_core(m: &DslModel) -> Result<Architecture, Diagnostics> {
    let mut diags = Diagnostics::new();
    let mut arch = Architecture::new(m.name.text.clone());
    if let Some(p) = &m.platform {
        arch.level = AbstractionLevel::PlatformSpecific(p.text.clone());
    }
    for item in &m.items {
        match item {
            Item::Service(s) => arch.components.push(component(s)),
            Item::Connector(c) => arch.connectors.push(Connector::new(
                c.name.text.clone(),
                Attachment::new(c.from.component.text.clone(), c.from.port.text.clone()),
                Attachment::new(c.to.component.text.clone(), c.to.port.text.clone()),
            )),
            Item::Behavior(b) => {
                if arch.behaviors.contains_key(&b.component.text) {
                    diags.push(dup(&b.component, "behavior for component"));
                    continue;
                }
                let mut definitions = BTreeMap::new();
                for (name, e) in &b.definitions {
                    if definitions.insert(name.text.clone(), proc_expr(e)).is_some() {
                        diags.push(dup(name, "process definition"));
                    }
                }
                arch.behaviors.insert(b.component.text.clone(), Behavior { body: proc_expr(&b.body), definitions });
            }
            Item::Constraint(c) => arch.constraints.push(Constraint {
                target: match &c.target {
                    None => ConstraintTarget::Architecture,
                    Some(t) => ConstraintTarget::Element(t.text.clone()),
                },
                key: dotted(&c.key),
                value: c.value.value.clone(),
            }),
            Item::Property(p) => arch.properties.push(PropertySpec {
                name: p.name.text.clone(),
                check: match &p.check {
                    PropertyCheckNode::DeadlockFree(_) => PropertyCheck::DeadlockFree,
                    PropertyCheckNode::Formula(f) => PropertyCheck::Formula(formula(f)),
                },
            }),
        }
    }
    diags.extend(check_wellformed(&arch));
    if diags.has_errors() {
        Err(diags)
    } else {
        Ok(arch)
    }
}

fn dup(id: &Ident, what: &str) -> Diagnostic {
    Diagnostic::error(
        "DUPLICATE_NAME",
        id.text.clone(),
        format!("{what} `{}` declared more than once (line {})", id.text, id.span.line),
    )
}

pub(crate) fn dotted(parts: &[Ident]) -> String {
    let mut s = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            s.push('.');
        }
        s.push_str(&p.text);
    }
    s
}

pub(crate) fn component(s: &ServiceDecl) -> Component {
    Component {
        name: s.name.text.clone(),
        kind: if s.infra { ComponentKind::Infrastructural } else { ComponentKind::Service },
        ports: s.ports.iter().map(|p| Port { name: p.name.text.clone(), direction: p.direction }).collect(),
        tags: s.tags.iter().map(|t| t.text.clone()).collect(),
    }
}

pub(crate) fn behavior(body: &ProcNode, defs: &[(Ident, ProcNode)]) -> Behavior {
    Behavior {
        body: proc_expr(body),
        definitions: defs.iter().map(|(n, e)| (n.text.clone(), proc_expr(e))).collect(),
    }
}

pub(crate) fn proc_expr(n: &ProcNode) -> ProcExpr {
    match &n.kind {
        ProcKind::Stop => ProcExpr::Stop,
        ProcKind::Send(p, next) => ProcExpr::Prefix(Action::Send(p.text.clone()), Box::new(proc_expr(next))),
        ProcKind::Receive(p, next) => ProcExpr::Prefix(Action::Receive(p.text.clone()), Box::new(proc_expr(next))),
        ProcKind::Choice(items) => ProcExpr::Choice(items.iter().map(proc_expr).collect()),
        ProcKind::Parallel(items) => ProcExpr::Parallel(items.iter().map(proc_expr).collect()),
        ProcKind::Call(n) => ProcExpr::Call(n.text.clone()),
    }
}

fn formula(n: &FormulaNode) -> MuFormula {
    match &n.kind {
        FormulaKind::True => MuFormula::True,
        FormulaKind::False => MuFormula::False,
        FormulaKind::And(a, b) => MuFormula::and(formula(a), formula(b)),
        FormulaKind::Or(a, b) => MuFormula::or(formula(a), formula(b)),
        FormulaKind::Diamond(l, f) => MuFormula::diamond(l.pattern.clone(), formula(f)),
        FormulaKind::Box(l, f) => MuFormula::boxed(l.pattern.clone(), formula(f)),
        FormulaKind::Var(v) => MuFormula::Var(v.text.clone()),
        FormulaKind::Mu(v, f) => MuFormula::mu(v.text.clone(), formula(f)),
        FormulaKind::Nu(v, f) => MuFormula::nu(v.text.clone(), formula(f)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_architecture;

    fn translate(src: &str) -> Result<Architecture, Diagnostics> {
        translate_to_core(&parse_architecture(src).unwrap())
    }

    #[test]
    fn one_service() {
        let a = translate("architecture A { service S { provides p } }").unwrap();
        assert_eq!(a.components.len(), 1);
        assert!(a.connectors.is_empty());
        assert_eq!(a.level, AbstractionLevel::Abstract);
    }

    #[test]
    fn duplicate_service() {
        let d = translate("architecture A { service S { } service S { } }").unwrap_err();
        assert_eq!(d.codes(), ["DUPLICATE_NAME"]);
    }

    #[test]
    fn unknown_port_in_connector() {
        let d = translate("architecture A { service S { provides p } connector c { from S.q to S.p } }").unwrap_err();
        assert_eq!(d.codes(), ["UNKNOWN_PORT"]);
        assert_eq!(d.0[0].location, "S.q");
    }

    #[test]
    fn duplicate_behavior() {
        let d = translate("architecture A { service S { } behavior S = stop behavior S = stop }").unwrap_err();
        assert_eq!(d.codes(), ["DUPLICATE_NAME"]);
    }

    #[test]
    fn platform_level() {
        let a = translate("architecture A platform grid { }").unwrap();
        assert_eq!(a.level, AbstractionLevel::PlatformSpecific("grid".into()));
    }
}
