//! Random models. Every generator is a pure function of the RNG state.

use std::collections::{BTreeMap, BTreeSet};

use gmde_core::analysis::{Lts, Transition};
use gmde_core::refine::{RefinementAction, RenameTarget};
use gmde_core::*;
use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::Rng;

const WORDS: &[&str] = &["alpha", "beta", "gamma", "delta", "omega", "node", "store", "api", "x_", "Zed"];
const TAGS: &[&str] = &["gpu", "secure", "batch", "web"];
const KEY_PARTS: &[&str] = &["qos", "availability", "replicas", "latency", "max_ms", "owner", "platform", "type", "on"];

fn pick<'a, T>(rng: &mut Rng, xs: &'a [T]) -> &'a T {
    xs.choose(rng).expect("non-empty")
}

fn value(rng: &mut Rng) -> Value {
    match rng.gen_range(0..3) {
        0 => Value::Int(rng.gen_range(-1000..1000)),
        1 => {
            let pieces = ["a", "b c", "\"q\"", "back\\slash", "line\nbreak", "tab\t", "", "ü"];
            Value::Str((0..rng.gen_range(0..3)).map(|_| *pick(rng, &pieces)).collect())
        }
        _ => Value::Bool(rng.gen()),
    }
}

fn dotted_key(rng: &mut Rng) -> String {
    let n = rng.gen_range(1..=3);
    (0..n).map(|_| *pick(rng, KEY_PARTS)).collect::<Vec<_>>().join(".")
}

/// A random process over `ports`. Calls to `defs` only appear after a
/// prefix; parallel branches never call.
pub fn proc_expr(rng: &mut Rng, ports: &[Port], defs: &[String], depth: u32, guarded: bool, calls: bool) -> ProcExpr {
    let leaf = depth == 0 || ports.is_empty();
    let can_call = guarded && calls && !defs.is_empty();
    if leaf {
        return if can_call && rng.gen_bool(0.6) { ProcExpr::call(pick(rng, defs).clone()) } else { ProcExpr::Stop };
    }
    match rng.gen_range(0..10) {
        0 => ProcExpr::Stop,
        1..=5 => {
            let p = pick(rng, ports).name.clone();
            let next = proc_expr(rng, ports, defs, depth - 1, true, calls);
            if rng.gen() {
                ProcExpr::send(p, next)
            } else {
                ProcExpr::receive(p, next)
            }
        }
        6 | 7 => {
            let n = rng.gen_range(2..=3);
            ProcExpr::Choice((0..n).map(|_| proc_expr(rng, ports, defs, depth - 1, guarded, calls)).collect())
        }
        8 => {
            let n = rng.gen_range(2..=3);
            ProcExpr::Parallel((0..n).map(|_| proc_expr(rng, ports, defs, depth - 1, guarded, false)).collect())
        }
        _ if can_call => ProcExpr::call(pick(rng, defs).clone()),
        _ => ProcExpr::Stop,
    }
}

/// A well-formed behavior over `ports`.
pub fn behavior(rng: &mut Rng, ports: &[Port]) -> Behavior {
    let ndefs = if ports.is_empty() { 0 } else { rng.gen_range(0..=2) };
    let defs: Vec<String> = (0..ndefs).map(|i| format!("X{i}")).collect();
    let body = if !defs.is_empty() && rng.gen_bool(0.5) {
        ProcExpr::call(defs[0].clone())
    } else {
        proc_expr(rng, ports, &defs, 3, true, true)
    };
    let mut b = Behavior::new(body);
    for d in &defs {
        let e = proc_expr(rng, ports, &defs, 3, false, true);
        b = b.with_definition(d.clone(), e);
    }
    b
}

fn label(rng: &mut Rng, arch: &Architecture) -> Label {
    let ports: Vec<(&str, &str)> =
        arch.components.iter().flat_map(|c| c.ports.iter().map(move |p| (c.name.as_str(), p.name.as_str()))).collect();
    if ports.is_empty() || rng.gen_bool(0.2) {
        return Label::Tau;
    }
    let (c, p) = *pick(rng, &ports);
    if rng.gen() {
        Label::Send { component: c.into(), port: p.into() }
    } else {
        Label::Receive { component: c.into(), port: p.into() }
    }
}

/// A closed, negation-free formula with at most `fix_depth` nested
/// fixpoints.
pub fn formula(rng: &mut Rng, depth: u32, fix_depth: u32, labels: &[Label]) -> MuFormula {
    fn go(rng: &mut Rng, depth: u32, fix_left: u32, bound: &mut Vec<String>, labels: &[Label]) -> MuFormula {
        let pattern = |rng: &mut Rng| {
            if labels.is_empty() || rng.gen_bool(0.3) {
                LabelPattern::Any
            } else {
                LabelPattern::Exact(pick(rng, labels).clone())
            }
        };
        if depth == 0 {
            return match rng.gen_range(0..3) {
                0 if !bound.is_empty() => MuFormula::var(pick(rng, bound).clone()),
                1 => MuFormula::False,
                _ => MuFormula::True,
            };
        }
        match rng.gen_range(0..8) {
            0 => MuFormula::and(go(rng, depth - 1, fix_left, bound, labels), go(rng, depth - 1, fix_left, bound, labels)),
            1 => MuFormula::or(go(rng, depth - 1, fix_left, bound, labels), go(rng, depth - 1, fix_left, bound, labels)),
            2 | 3 => {
                let l = pattern(rng);
                MuFormula::diamond(l, go(rng, depth - 1, fix_left, bound, labels))
            }
            4 | 5 => {
                let l = pattern(rng);
                MuFormula::boxed(l, go(rng, depth - 1, fix_left, bound, labels))
            }
            _ if fix_left > 0 => {
                let v = ["X", "Y", "Z", "W"][bound.len() % 4].to_string() + &bound.len().to_string();
                bound.push(v.clone());
                let body = go(rng, depth - 1, fix_left - 1, bound, labels);
                bound.pop();
                if rng.gen() {
                    MuFormula::mu(v, body)
                } else {
                    MuFormula::nu(v, body)
                }
            }
            _ if !bound.is_empty() => MuFormula::var(pick(rng, bound).clone()),
            _ => MuFormula::True,
        }
    }
    go(rng, depth, fix_depth, &mut Vec::new(), labels)
}

/// A well-formed architecture with at most `max_components` components.
pub fn architecture(rng: &mut Rng, max_components: usize) -> Architecture {
    let mut a = Architecture::new(format!("Arch{}", rng.gen_range(0..100)));
    if rng.gen_bool(0.2) {
        a.level = AbstractionLevel::PlatformSpecific("grid1".into());
    }
    let n = rng.gen_range(0..=max_components);
    for i in 0..n {
        let name = format!("{}{i}", pick(rng, WORDS));
        let mut c = if rng.gen_bool(0.8) { Component::service(name) } else { Component::infrastructural(name) };
        for j in 0..rng.gen_range(0..=3) {
            c.ports.push(if rng.gen() { Port::provides(format!("p{j}")) } else { Port::requires(format!("r{j}")) });
        }
        for _ in 0..rng.gen_range(0..=2) {
            c.tags.insert((*pick(rng, TAGS)).into());
        }
        a.components.push(c);
    }
    let mut requires: Vec<Attachment> = Vec::new();
    let mut provides: Vec<Attachment> = Vec::new();
    for c in &a.components {
        for p in &c.ports {
            let at = Attachment::new(c.name.clone(), p.name.clone());
            match p.direction {
                Direction::Requires => requires.push(at),
                Direction::Provides => provides.push(at),
            }
        }
    }
    requires.shuffle(rng);
    provides.shuffle(rng);
    let links = requires.len().min(provides.len());
    let links = rng.gen_range(0..=links);
    for (i, (from, to)) in requires.into_iter().zip(provides).take(links).enumerate() {
        a.connectors.push(Connector::new(format!("k{i}_{}", pick(rng, WORDS)), from, to));
    }
    for c in a.components.clone() {
        if rng.gen_bool(0.7) {
            a.behaviors.insert(c.name.clone(), behavior(rng, &c.ports));
        }
    }
    let elements: Vec<String> =
        a.components.iter().map(|c| c.name.clone()).chain(a.connectors.iter().map(|k| k.name.clone())).collect();
    for _ in 0..rng.gen_range(0..=3) {
        let target = if elements.is_empty() || rng.gen_bool(0.2) {
            ConstraintTarget::Architecture
        } else {
            ConstraintTarget::Element(pick(rng, &elements).clone())
        };
        a.constraints.push(Constraint { target, key: dotted_key(rng), value: value(rng) });
    }
    for i in 0..rng.gen_range(0..=2) {
        let check = if rng.gen() {
            PropertyCheck::DeadlockFree
        } else {
            let labels: Vec<Label> = (0..3).map(|_| label(rng, &a)).collect();
            let depth = rng.gen_range(0..=4);
            PropertyCheck::Formula(formula(rng, depth, 2, &labels))
        };
        a.properties.push(PropertySpec { name: format!("prop{i}"), check });
    }
    a.components.shuffle(rng);
    a.connectors.shuffle(rng);
    a
}

fn some_name(rng: &mut Rng, a: &Architecture) -> String {
    let existing: Vec<String> =
        a.components.iter().map(|c| c.name.clone()).chain(a.connectors.iter().map(|k| k.name.clone())).collect();
    match rng.gen_range(0..10) {
        0..=5 if !existing.is_empty() => pick(rng, &existing).clone(),
        6 => "stop".into(),
        7 => "9bad".into(),
        _ => format!("fresh{}", rng.gen_range(0..5)),
    }
}

fn some_component(rng: &mut Rng, a: &Architecture) -> String {
    if a.components.is_empty() || rng.gen_bool(0.15) {
        return format!("ghost{}", rng.gen_range(0..3));
    }
    pick(rng, &a.components).name.clone()
}

fn some_port(rng: &mut Rng, a: &Architecture, component: &str) -> String {
    match a.component(component) {
        Some(c) if !c.ports.is_empty() && rng.gen_bool(0.85) => pick(rng, &c.ports).name.clone(),
        _ => format!("q{}", rng.gen_range(0..3)),
    }
}

fn some_attachment(rng: &mut Rng, a: &Architecture) -> Attachment {
    let c = some_component(rng, a);
    let p = some_port(rng, a, &c);
    Attachment::new(c, p)
}

fn new_component(rng: &mut Rng, a: &Architecture) -> Component {
    let mut c = Component::service(some_name(rng, a));
    if rng.gen_bool(0.3) {
        c.kind = ComponentKind::Infrastructural;
    }
    for j in 0..rng.gen_range(0..=3) {
        c.ports.push(if rng.gen() { Port::provides(format!("p{j}")) } else { Port::requires(format!("r{j}")) });
    }
    if rng.gen_bool(0.05) {
        c.ports.push(Port::provides("p0"));
    }
    c
}

/// A random action, often but not always applicable to `a`.
pub fn action(rng: &mut Rng, a: &Architecture) -> RefinementAction {
    match rng.gen_range(0..12) {
        0 => {
            let c = new_component(rng, a);
            let behavior = match rng.gen_range(0..3) {
                0 => None,
                1 => Some(behavior(rng, &c.ports)),
                _ => Some(behavior(rng, &[Port::provides("elsewhere")])),
            };
            RefinementAction::AddComponent { component: c, behavior }
        }
        1 => RefinementAction::RemoveComponent { name: some_component(rng, a) },
        2 => {
            let (from, to) = if !a.connectors.is_empty() && rng.gen_bool(0.2) {
                let k = pick(rng, &a.connectors);
                (k.from.clone(), k.to.clone())
            } else {
                (some_attachment(rng, a), some_attachment(rng, a))
            };
            RefinementAction::AddConnector { connector: Connector::new(some_name(rng, a), from, to) }
        }
        3 => RefinementAction::RemoveConnector {
            name: if a.connectors.is_empty() { "nope".into() } else { pick(rng, &a.connectors).name.clone() },
        },
        4 => {
            let c = some_component(rng, a);
            let name = some_port(rng, a, &c);
            let port = if rng.gen() { Port::provides(name) } else { Port::requires(name) };
            RefinementAction::AddPort { component: c, port }
        }
        5 => {
            let c = some_component(rng, a);
            let port = some_port(rng, a, &c);
            RefinementAction::RemovePort { component: c, port }
        }
        6 => {
            let target = match rng.gen_range(0..3) {
                0 => RenameTarget::Component,
                1 => RenameTarget::Connector,
                _ => RenameTarget::Port(some_component(rng, a)),
            };
            let (old, new) = match &target {
                RenameTarget::Port(c) => (some_port(rng, a, c), some_port(rng, a, c)),
                _ => (some_name(rng, a), some_name(rng, a)),
            };
            RefinementAction::Rename { old, new, target }
        }
        7 => {
            let connector = if a.connectors.is_empty() { "nope".into() } else { pick(rng, &a.connectors).name.clone() };
            let mut m = Component::infrastructural(some_name(rng, a));
            if rng.gen_bool(0.85) {
                m.ports = vec![Port::provides("inp"), Port::requires("out")];
            }
            let behavior = rng.gen_bool(0.5).then(|| behavior(rng, &m.ports));
            RefinementAction::Interpose { connector, component: m, behavior }
        }
        8 => {
            let source = some_component(rng, a);
            let mut port_renames = BTreeMap::new();
            for _ in 0..rng.gen_range(0..=2) {
                port_renames.insert(some_port(rng, a, &source), format!("n{}", rng.gen_range(0..3)));
            }
            RefinementAction::CloneComponent { source, clone: some_name(rng, a), port_renames }
        }
        9 => {
            let c = some_component(rng, a);
            let ports = a.component(&c).map(|c| c.ports.clone()).unwrap_or_default();
            let ports = if rng.gen_bool(0.1) { vec![Port::provides("elsewhere")] } else { ports };
            RefinementAction::ReplaceBehavior { component: c, behavior: behavior(rng, &ports) }
        }
        10 => {
            let target = if rng.gen_bool(0.2) {
                ConstraintTarget::Architecture
            } else {
                ConstraintTarget::Element(some_name(rng, a))
            };
            let key = if rng.gen_bool(0.1) { "bad..key".into() } else { dotted_key(rng) };
            RefinementAction::AttachConstraint { constraint: Constraint { target, key, value: value(rng) } }
        }
        _ => RefinementAction::SetLevel {
            level: match rng.gen_range(0..3) {
                0 => AbstractionLevel::Abstract,
                1 => AbstractionLevel::PlatformSpecific("grid2".into()),
                _ => AbstractionLevel::PlatformSpecific("no good".into()),
            },
        },
    }
}

/// Labels used by [`lts`].
pub fn lts_alphabet() -> Vec<Label> {
    vec![
        Label::Tau,
        Label::Send { component: "C".into(), port: "a".into() },
        Label::Receive { component: "C".into(), port: "b".into() },
        Label::Send { component: "D".into(), port: "c".into() },
    ]
}

/// A random LTS with `1..=max_states` states, every state reachable from 0.
pub fn lts(rng: &mut Rng, max_states: usize) -> Lts {
    let n = rng.gen_range(1..=max_states);
    let alphabet = lts_alphabet();
    let mut ts = Vec::new();
    for s in 1..n {
        ts.push(Transition { source: rng.gen_range(0..s), label: pick(rng, &alphabet).clone(), target: s });
    }
    let extra = rng.gen_range(0..=n * 2);
    for _ in 0..extra {
        ts.push(Transition {
            source: rng.gen_range(0..n),
            label: pick(rng, &alphabet).clone(),
            target: rng.gen_range(0..n),
        });
    }
    let terminal: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.1)).collect();
    Lts::new(n, ts, terminal)
}
