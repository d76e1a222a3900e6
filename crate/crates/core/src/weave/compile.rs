use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{match_selector, Match, Pattern, PatternKind, WeaveError, WeaveErrorCode as Code};
use crate::dsl::parse_action;
use crate::model::{
    is_identifier, Architecture, Attachment, Behavior, Component, Connector, Constraint, Direction, Port, ProcExpr,
    Value,
};
use crate::refine::RefinementAction;

/// Largest replica count a Replication pattern accepts.
pub const MAX_REPLICAS: i64 = 64;

/// Translates `p` into refinement actions for `arch`. Pure: the same inputs
/// always give the same list.
pub fn compile_pattern(arch: &Architecture, p: &Pattern) -> Result<Vec<RefinementAction>, WeaveError> {
    if !arch.level.is_abstract() {
        return Err(WeaveError::new(
            Code::AlreadyConcrete,
            format!("`{}` is already bound to {}", arch.name, arch.level),
        ));
    }
    let matches = match_selector(arch, &p.selector);
    if matches.is_empty() {
        return Err(WeaveError::new(Code::NoMatch, format!("selector `{}` matches no component", p.selector)));
    }
    match p.kind {
        PatternKind::Replication => replication(arch, p, &matches),
        PatternKind::SecureChannel => secure_channel(arch, p, &matches),
        PatternKind::Script => script(p, &matches),
    }
}

fn param<'a>(p: &'a Pattern, m: &'a Match, key: &str) -> Option<&'a Value> {
    m.bound.get(key).or_else(|| p.params.get(key))
}

pub(super) fn replicas_for(p: &Pattern, m: &Match) -> Result<i64, WeaveError> {
    let v = param(p, m, "replicas")
        .ok_or_else(|| WeaveError::new(Code::MissingParam, format!("no `replicas` value for `{}`", m.component)))?;
    match v.as_int() {
        Some(n) if (1..=MAX_REPLICAS).contains(&n) => Ok(n),
        _ => Err(WeaveError::new(
            Code::InvalidParam,
            format!("`replicas` for `{}` must be an integer in 1..={MAX_REPLICAS}, got {v}", m.component),
        )),
    }
}

/// Tracks generated names so they clash neither with the model nor with
/// each other.
struct Names<'a> {
    arch: &'a Architecture,
    taken: BTreeSet<String>,
}

impl Names<'_> {
    fn claim(&mut self, name: String) -> Result<String, WeaveError> {
        if self.arch.has_element(&name) || !self.taken.insert(name.clone()) {
            return Err(WeaveError::new(Code::NameCollision, format!("generated name `{name}` is already in use")));
        }
        Ok(name)
    }
}

fn replication(arch: &Architecture, p: &Pattern, matches: &[Match]) -> Result<Vec<RefinementAction>, WeaveError> {
    let mut names = Names { arch, taken: BTreeSet::new() };
    let mut plans = Vec::new();
    for m in matches {
        let n = replicas_for(p, m)?;
        let s = &m.component;
        let replicas: Vec<String> = (1..n).map(|i| names.claim(format!("{s}_r{i}"))).collect::<Result<_, _>>()?;
        let dispatcher = names.claim(format!("{s}_dispatcher"))?;
        let mut all = Vec::with_capacity(n as usize);
        all.push(s.clone());
        all.extend(replicas.iter().cloned());
        let links: Vec<String> =
            all.iter().map(|r| names.claim(format!("{dispatcher}_to_{r}"))).collect::<Result<_, _>>()?;
        plans.push((m, replicas, dispatcher, all, links));
    }

    let mut out = Vec::new();
    for (m, replicas, dispatcher, all, links) in plans {
        let s = &m.component;
        let comp = arch.component(s).expect("matched component exists");
        let port = match comp.ports.as_slice() {
            [only] if only.direction == Direction::Provides => only.name.clone(),
            _ => {
                return Err(WeaveError::new(
                    Code::UnsupportedTarget,
                    format!("`{s}` must have exactly one port, a provides port, to be replicated"),
                ))
            }
        };
        let mut clients: Vec<&Connector> =
            arch.connectors.iter().filter(|k| k.to.component == *s && k.to.port == port).collect();
        clients.sort_by(|a, b| a.name.cmp(&b.name));
        if clients.is_empty() {
            return Err(WeaveError::new(Code::UnsupportedTarget, format!("`{s}.{port}` has no client connector")));
        }

        for r in &replicas {
            out.push(RefinementAction::CloneComponent {
                source: s.clone(),
                clone: r.clone(),
                port_renames: BTreeMap::new(),
            });
        }
        let ins: Vec<String> = (1..=clients.len()).map(|k| format!("in_{k}")).collect();
        let outs: Vec<String> = (1..=all.len()).map(|i| format!("out_{i}")).collect();
        let mut d = Component::infrastructural(dispatcher.clone());
        d.ports.extend(ins.iter().map(Port::provides));
        d.ports.extend(outs.iter().map(Port::requires));
        out.push(RefinementAction::AddComponent { component: d, behavior: None });
        for (k, inp) in clients.iter().zip(&ins) {
            out.push(RefinementAction::RemoveConnector { name: k.name.clone() });
            out.push(RefinementAction::AddConnector {
                connector: Connector::new(k.name.clone(), k.from.clone(), Attachment::new(dispatcher.clone(), inp.clone())),
            });
        }
        for ((r, o), link) in all.iter().zip(&outs).zip(&links) {
            out.push(RefinementAction::AddConnector {
                connector: Connector::new(
                    link.clone(),
                    Attachment::new(dispatcher.clone(), o.clone()),
                    Attachment::new(r.clone(), port.clone()),
                ),
            });
        }
        out.push(RefinementAction::ReplaceBehavior { component: dispatcher.clone(), behavior: round_robin(&ins, &outs) });
        out.push(woven_by(&dispatcher, p));
    }
    Ok(out)
}

/// `Turn1 = in_1?.out_1!.Turn2 + ...`, cycling through the outputs.
fn round_robin(ins: &[String], outs: &[String]) -> Behavior {
    let turn = |i: usize| format!("Turn{}", i % outs.len() + 1);
    let mut b = Behavior::new(ProcExpr::call(turn(0)));
    for (i, o) in outs.iter().enumerate() {
        let branches: Vec<ProcExpr> =
            ins.iter().map(|inp| ProcExpr::receive(inp.clone(), ProcExpr::send(o.clone(), ProcExpr::call(turn(i + 1))))).collect();
        let body = if branches.len() == 1 { branches.into_iter().next().unwrap() } else { ProcExpr::Choice(branches) };
        b = b.with_definition(turn(i), body);
    }
    b
}

fn woven_by(component: &str, p: &Pattern) -> RefinementAction {
    RefinementAction::AttachConstraint { constraint: Constraint::on(component, "woven.by", Value::Str(p.name.clone())) }
}

fn secure_channel(arch: &Architecture, p: &Pattern, matches: &[Match]) -> Result<Vec<RefinementAction>, WeaveError> {
    let prefix = match p.params.get("gateway_name_prefix") {
        None => "gw",
        Some(Value::Str(s)) if is_identifier(&format!("x_{s}1")) => s,
        Some(v) => return Err(WeaveError::new(Code::InvalidParam, format!("invalid `gateway_name_prefix` {v}"))),
    };
    let matched: BTreeSet<&str> = matches.iter().map(|m| m.component.as_str()).collect();
    let mut connectors: Vec<&Connector> = arch
        .connectors
        .iter()
        .filter(|k| matched.contains(k.from.component.as_str()) || matched.contains(k.to.component.as_str()))
        .collect();
    connectors.sort_by(|a, b| a.name.cmp(&b.name));
    if connectors.is_empty() {
        return Err(WeaveError::new(Code::NoMatch, format!("no connector touches a component matched by `{}`", p.selector)));
    }
    let mut names = Names { arch, taken: BTreeSet::new() };
    let mut out = Vec::new();
    for k in connectors {
        if arch.constraints_on(&k.name).next().is_some() {
            return Err(WeaveError::new(
                Code::UnsupportedTarget,
                format!("connector `{}` carries constraints and cannot be split", k.name),
            ));
        }
        let gw = names.claim(format!("{}_{prefix}1", k.name))?;
        let (a, b) = RefinementAction::interposed_connector_names(&k.name);
        names.claim(a)?;
        names.claim(b)?;
        let component = Component::infrastructural(gw.clone()).with_port(Port::provides("inp")).with_port(Port::requires("out"));
        let relay = ProcExpr::Choice(alloc::vec![
            ProcExpr::receive("inp", ProcExpr::send("out", ProcExpr::call("Relay"))),
            ProcExpr::receive("out", ProcExpr::send("inp", ProcExpr::call("Relay"))),
        ]);
        let behavior = Behavior::new(ProcExpr::call("Relay")).with_definition("Relay", relay);
        out.push(RefinementAction::Interpose { connector: k.name.clone(), component, behavior: Some(behavior) });
        out.push(woven_by(&gw, p));
    }
    Ok(out)
}

/// Replaces `${match}` and `${param}` placeholders. Strings are inserted
/// without quotes.
pub fn substitute(template: &str, lookup: impl Fn(&str) -> Option<String>) -> Result<String, WeaveError> {
    let mut out = String::new();
    let mut rest = template;
    while let Some(i) = rest.find("${") {
        out.push_str(&rest[..i]);
        let after = &rest[i + 2..];
        let Some(j) = after.find('}') else {
            return Err(WeaveError::new(Code::TemplateError, format!("unterminated placeholder in `{template}`")));
        };
        let key = &after[..j];
        let v = lookup(key)
            .ok_or_else(|| WeaveError::new(Code::MissingParam, format!("no value for `${{{key}}}` in `{template}`")))?;
        out.push_str(&v);
        rest = &after[j + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn raw(v: &Value) -> String {
    match v {
        Value::Str(s) => s.clone(),
        other => format!("{other}"),
    }
}

fn script(p: &Pattern, matches: &[Match]) -> Result<Vec<RefinementAction>, WeaveError> {
    let mut out = Vec::new();
    for m in matches {
        for t in &p.script {
            let line = substitute(t, |key| {
                if key == "match" {
                    Some(m.component.clone())
                } else {
                    param(p, m, key).map(raw)
                }
            })?;
            let action = parse_action(&line)
                .map_err(|e| WeaveError::new(Code::TemplateError, format!("`{line}` is not a valid action: {e}")))?;
            out.push(action);
        }
    }
    Ok(out)
}
