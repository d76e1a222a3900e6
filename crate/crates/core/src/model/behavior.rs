use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

/// An atomic communication on one of the owning component's ports.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Send(String),
    Receive(String),
}

impl Action {
    pub fn port(&self) -> &str {
        match self {
            Action::Send(p) | Action::Receive(p) => p,
        }
    }

    pub fn is_send(&self) -> bool {
        matches!(self, Action::Send(_))
    }

    /// Same action kind on another port.
    pub fn on_port(&self, port: String) -> Action {
        match self {
            Action::Send(_) => Action::Send(port),
            Action::Receive(_) => Action::Receive(port),
        }
    }
}

/// Finite-control, data-free process expression.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcExpr {
    Stop,
    Prefix(Action, Box<ProcExpr>),
    Choice(Vec<ProcExpr>),
    Parallel(Vec<ProcExpr>),
    Call(String),
}

impl ProcExpr {
    pub fn send(port: impl Into<String>, then: ProcExpr) -> Self {
        ProcExpr::Prefix(Action::Send(port.into()), Box::new(then))
    }

    pub fn receive(port: impl Into<String>, then: ProcExpr) -> Self {
        ProcExpr::Prefix(Action::Receive(port.into()), Box::new(then))
    }

    pub fn call(name: impl Into<String>) -> Self {
        ProcExpr::Call(name.into())
    }

    /// Collapses empty and singleton choice/parallel lists, bottom up.
    pub fn simplified(&self) -> ProcExpr {
        match self {
            ProcExpr::Stop | ProcExpr::Call(_) => self.clone(),
            ProcExpr::Prefix(a, p) => ProcExpr::Prefix(a.clone(), Box::new(p.simplified())),
            ProcExpr::Choice(items) => collapse(items, ProcExpr::Choice),
            ProcExpr::Parallel(items) => collapse(items, ProcExpr::Parallel),
        }
    }

    pub fn visit_actions<'a>(&'a self, f: &mut impl FnMut(&'a Action)) {
        match self {
            ProcExpr::Stop | ProcExpr::Call(_) => {}
            ProcExpr::Prefix(a, p) => {
                f(a);
                p.visit_actions(f);
            }
            ProcExpr::Choice(items) | ProcExpr::Parallel(items) => {
                items.iter().for_each(|i| i.visit_actions(f))
            }
        }
    }

    pub fn visit_calls<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            ProcExpr::Stop => {}
            ProcExpr::Call(n) => f(n),
            ProcExpr::Prefix(_, p) => p.visit_calls(f),
            ProcExpr::Choice(items) | ProcExpr::Parallel(items) => {
                items.iter().for_each(|i| i.visit_calls(f))
            }
        }
    }

    pub fn map_ports(&self, f: &impl Fn(&str) -> String) -> ProcExpr {
        match self {
            ProcExpr::Stop | ProcExpr::Call(_) => self.clone(),
            ProcExpr::Prefix(a, p) => {
                ProcExpr::Prefix(a.on_port(f(a.port())), Box::new(p.map_ports(f)))
            }
            ProcExpr::Choice(items) => ProcExpr::Choice(items.iter().map(|i| i.map_ports(f)).collect()),
            ProcExpr::Parallel(items) => {
                ProcExpr::Parallel(items.iter().map(|i| i.map_ports(f)).collect())
            }
        }
    }

    /// Calls not guarded by a prefix.
    fn unguarded_calls<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ProcExpr::Stop | ProcExpr::Prefix(..) => {}
            ProcExpr::Call(n) => out.push(n),
            ProcExpr::Choice(items) | ProcExpr::Parallel(items) => {
                items.iter().for_each(|i| i.unguarded_calls(out))
            }
        }
    }

    /// Calls that occur somewhere beneath a parallel operator.
    fn calls_under_parallel<'a>(&'a self, under: bool, out: &mut Vec<&'a str>) {
        match self {
            ProcExpr::Stop => {}
            ProcExpr::Call(n) => {
                if under {
                    out.push(n)
                }
            }
            ProcExpr::Prefix(_, p) => p.calls_under_parallel(under, out),
            ProcExpr::Choice(items) => items.iter().for_each(|i| i.calls_under_parallel(under, out)),
            ProcExpr::Parallel(items) => items.iter().for_each(|i| i.calls_under_parallel(true, out)),
        }
    }
}

fn collapse(items: &[ProcExpr], ctor: fn(Vec<ProcExpr>) -> ProcExpr) -> ProcExpr {
    let mut items: Vec<ProcExpr> = items.iter().map(ProcExpr::simplified).collect();
    match items.len() {
        0 => ProcExpr::Stop,
        1 => items.pop().unwrap_or(ProcExpr::Stop),
        _ => ctor(items),
    }
}

/// A component's behavior: a body plus named (possibly recursive) process
/// definitions it may call.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Behavior {
    pub body: ProcExpr,
    pub definitions: BTreeMap<String, ProcExpr>,
}

/// Structural problems in a behavior, independent of the owning component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum BehaviorIssue {
    UnresolvedCall(String),
    UnguardedRecursion(String),
    UnboundedParallel(String),
}

impl Behavior {
    pub fn new(body: ProcExpr) -> Self {
        Behavior { body, definitions: BTreeMap::new() }
    }

    pub fn with_definition(mut self, name: impl Into<String>, expr: ProcExpr) -> Self {
        self.definitions.insert(name.into(), expr);
        self
    }

    /// A behavior that is just `stop`.
    pub fn stop() -> Self {
        Behavior::new(ProcExpr::Stop)
    }

    pub fn exprs(&self) -> impl Iterator<Item = &ProcExpr> {
        core::iter::once(&self.body).chain(self.definitions.values())
    }

    /// Every port name used as an action label, sorted.
    pub fn ports_used(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for e in self.exprs() {
            e.visit_actions(&mut |a| {
                out.insert(a.port());
            });
        }
        out
    }

    pub fn rename_ports(&self, f: &impl Fn(&str) -> String) -> Behavior {
        Behavior {
            body: self.body.map_ports(f),
            definitions: self.definitions.iter().map(|(k, v)| (k.clone(), v.map_ports(f))).collect(),
        }
    }

    pub fn simplified(&self) -> Behavior {
        Behavior {
            body: self.body.simplified(),
            definitions: self.definitions.iter().map(|(k, v)| (k.clone(), v.simplified())).collect(),
        }
    }

    pub(crate) fn issues(&self) -> Vec<BehaviorIssue> {
        let mut issues = Vec::new();
        let mut unresolved = BTreeSet::new();
        for e in self.exprs() {
            e.visit_calls(&mut |n| {
                if !self.definitions.contains_key(n) {
                    unresolved.insert(String::from(n));
                }
            });
        }
        issues.extend(unresolved.into_iter().map(BehaviorIssue::UnresolvedCall));

        let calls = |guarded: bool| -> BTreeMap<&str, Vec<&str>> {
            self.definitions
                .iter()
                .map(|(name, e)| {
                    let mut out = Vec::new();
                    if guarded {
                        e.visit_calls(&mut |n| out.push(n));
                    } else {
                        e.unguarded_calls(&mut out);
                    }
                    out.retain(|n| self.definitions.contains_key(*n));
                    (name.as_str(), out)
                })
                .collect()
        };
        let all_calls = calls(true);
        let unguarded = calls(false);

        for name in self.definitions.keys() {
            if reaches(&unguarded, name, name) {
                issues.push(BehaviorIssue::UnguardedRecursion(name.clone()));
            }
        }
        for (name, e) in &self.definitions {
            if !reaches(&all_calls, name, name) {
                continue;
            }
            let mut under = Vec::new();
            e.calls_under_parallel(false, &mut under);
            if !under.is_empty() {
                issues.push(BehaviorIssue::UnboundedParallel(name.clone()));
            }
        }
        issues
    }
}

/// Whether `target` is reachable from `from` in one or more call steps.
fn reaches(graph: &BTreeMap<&str, Vec<&str>>, from: &str, target: &str) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<&str> = graph.get(from).cloned().unwrap_or_default();
    while let Some(n) = stack.pop() {
        if n == target {
            return true;
        }
        if seen.insert(n) {
            if let Some(next) = graph.get(n) {
                stack.extend(next.iter().copied());
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplify_collapses_degenerate_lists() {
        let e = ProcExpr::Choice(alloc::vec![ProcExpr::Parallel(alloc::vec![]), ProcExpr::call("X")]);
        assert_eq!(e.simplified(), ProcExpr::Choice(alloc::vec![ProcExpr::Stop, ProcExpr::call("X")]));
        let e = ProcExpr::Parallel(alloc::vec![ProcExpr::send("p", ProcExpr::Stop)]);
        assert_eq!(e.simplified(), ProcExpr::send("p", ProcExpr::Stop));
    }

    #[test]
    fn recursion_through_parallel_is_rejected() {
        let b = Behavior::new(ProcExpr::call("X")).with_definition(
            "X",
            ProcExpr::send("a", ProcExpr::Parallel(alloc::vec![ProcExpr::call("X"), ProcExpr::Stop])),
        );
        assert_eq!(b.issues(), alloc::vec![BehaviorIssue::UnboundedParallel("X".into())]);
    }

    #[test]
    fn parallel_of_recursive_processes_is_fine() {
        let b = Behavior::new(ProcExpr::Parallel(alloc::vec![ProcExpr::call("X"), ProcExpr::call("X")]))
            .with_definition("X", ProcExpr::send("a", ProcExpr::call("X")));
        assert!(b.issues().is_empty());
    }

    #[test]
    fn unguarded_recursion() {
        let b = Behavior::new(ProcExpr::call("X")).with_definition(
            "X",
            ProcExpr::Choice(alloc::vec![ProcExpr::call("Y"), ProcExpr::send("a", ProcExpr::Stop)]),
        )
        .with_definition("Y", ProcExpr::call("X"));
        let issues = b.issues();
        assert!(issues.contains(&BehaviorIssue::UnguardedRecursion("X".into())));
        assert!(issues.contains(&BehaviorIssue::UnguardedRecursion("Y".into())));
    }

    #[test]
    fn unresolved_call() {
        let b = Behavior::new(ProcExpr::call("Nope"));
        assert_eq!(b.issues(), alloc::vec![BehaviorIssue::UnresolvedCall("Nope".into())]);
    }
}
