use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::{AnalysisError, StateCap};
use crate::model::{check_wellformed, Action, Architecture, Behavior, Label, ProcExpr};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: usize,
    pub label: Label,
    pub target: usize,
}

/// Labelled transition system with states `0..num_states`; state 0 is
/// initial. Transitions are sorted by `(source, label, target)` and unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lts {
    num_states: usize,
    transitions: Vec<Transition>,
    /// `offsets[s]..offsets[s + 1]` indexes the transitions leaving `s`.
    offsets: Vec<usize>,
    terminal_success: BTreeSet<usize>,
}

impl Lts {
    /// Builds an LTS, sorting and deduplicating transitions. Panics if a
    /// state id is out of range or `num_states` is zero.
    pub fn new(num_states: usize, mut transitions: Vec<Transition>, terminal_success: BTreeSet<usize>) -> Self {
        assert!(num_states > 0, "an LTS has at least its initial state");
        assert!(
            transitions.iter().all(|t| t.source < num_states && t.target < num_states)
                && terminal_success.iter().all(|&s| s < num_states),
            "state id out of range"
        );
        transitions.sort();
        transitions.dedup();
        let mut offsets = alloc::vec![0; num_states + 1];
        for t in &transitions {
            offsets[t.source + 1] += 1;
        }
        for i in 0..num_states {
            offsets[i + 1] += offsets[i];
        }
        Lts { num_states, transitions, offsets, terminal_success }
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, s: usize) -> &[Transition] {
        &self.transitions[self.offsets[s]..self.offsets[s + 1]]
    }

    pub fn terminal_success(&self) -> &BTreeSet<usize> {
        &self.terminal_success
    }

    /// Aldebaran `.aut` text.
    pub fn to_aut(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "des (0, {}, {})", self.transitions.len(), self.num_states);
        for t in &self.transitions {
            let _ = writeln!(s, "({}, \"{}\", {})", t.source, t.label, t.target);
        }
        s
    }
}

/// Per component: sorted threads running in parallel. An empty list is a
/// component at `stop`.
type Global = Vec<Vec<ProcExpr>>;

/// Splits a process into its parallel threads, dropping `stop`.
fn threads(p: &ProcExpr, out: &mut Vec<ProcExpr>) {
    match p {
        ProcExpr::Stop => {}
        ProcExpr::Parallel(items) => items.iter().for_each(|i| threads(i, out)),
        ProcExpr::Choice(items) if items.is_empty() => {}
        ProcExpr::Choice(items) if items.len() == 1 => threads(&items[0], out),
        other => out.push(other.clone()),
    }
}

/// Immediate steps of one thread. Calls are unfolded; well-formedness
/// guarantees the recursion is guarded.
fn steps(p: &ProcExpr, b: &Behavior, out: &mut Vec<(Action, ProcExpr)>) {
    match p {
        ProcExpr::Stop => {}
        ProcExpr::Prefix(a, cont) => out.push((a.clone(), (**cont).clone())),
        ProcExpr::Choice(items) => items.iter().for_each(|i| steps(i, b, out)),
        ProcExpr::Parallel(items) => {
            for (i, item) in items.iter().enumerate() {
                let mut sub = Vec::new();
                steps(item, b, &mut sub);
                for (a, cont) in sub {
                    let mut rest = items.clone();
                    rest[i] = cont;
                    out.push((a, ProcExpr::Parallel(rest)));
                }
            }
        }
        ProcExpr::Call(n) => {
            if let Some(def) = b.definitions.get(n) {
                steps(def, b, out)
            }
        }
    }
}

/// Replaces thread `i` of `state` by the threads of `cont`.
fn replace_thread(state: &[ProcExpr], i: usize, cont: &ProcExpr) -> Vec<ProcExpr> {
    let mut next: Vec<ProcExpr> = state.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, t)| t.clone()).collect();
    threads(cont, &mut next);
    next.sort();
    next
}

struct Composition<'a> {
    names: Vec<&'a str>,
    behaviors: Vec<Behavior>,
    /// `(component index, port)` to the other end of its connector.
    peer: BTreeMap<(usize, &'a str), (usize, &'a str)>,
}

impl<'a> Composition<'a> {
    fn new(arch: &'a Architecture) -> Self {
        let mut names: Vec<&str> = arch.components.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let behaviors =
            names.iter().map(|n| arch.behaviors.get(*n).cloned().unwrap_or_else(Behavior::stop)).collect();
        let mut peer = BTreeMap::new();
        for k in &arch.connectors {
            let (Some(&a), Some(&b)) = (index.get(k.from.component.as_str()), index.get(k.to.component.as_str()))
            else {
                continue;
            };
            peer.insert((a, k.from.port.as_str()), (b, k.to.port.as_str()));
            peer.insert((b, k.to.port.as_str()), (a, k.from.port.as_str()));
        }
        Composition { names, behaviors, peer }
    }

    fn initial(&self) -> Global {
        self.behaviors
            .iter()
            .map(|b| {
                let mut t = Vec::new();
                threads(&b.body, &mut t);
                t.sort();
                t
            })
            .collect()
    }

    fn successors(&self, g: &Global) -> Vec<(Label, Global)> {
        // (component, thread, action, continuation)
        let mut moves = Vec::new();
        for (c, state) in g.iter().enumerate() {
            for (i, t) in state.iter().enumerate() {
                let mut s = Vec::new();
                steps(t, &self.behaviors[c], &mut s);
                moves.extend(s.into_iter().map(|(a, cont)| (c, i, a, cont)));
            }
        }
        let mut out = Vec::new();
        for (x, (c, i, a, cont)) in moves.iter().enumerate() {
            match self.peer.get(&(*c, a.port())) {
                None => {
                    let (component, port) = (String::from(self.names[*c]), String::from(a.port()));
                    let label = if a.is_send() { Label::Send { component, port } } else { Label::Receive { component, port } };
                    let mut next = g.clone();
                    next[*c] = replace_thread(&g[*c], *i, cont);
                    out.push((label, next));
                }
                Some(&(d, q)) => {
                    // Each pair once: the sender drives the synchronisation.
                    if !a.is_send() {
                        continue;
                    }
                    for (y, (c2, j, b, cont2)) in moves.iter().enumerate() {
                        if x == y || *c2 != d || b.is_send() || b.port() != q || (*c2 == *c && *j == *i) {
                            continue;
                        }
                        let mut next = g.clone();
                        if *c == d {
                            let mut rest: Vec<ProcExpr> = g[*c]
                                .iter()
                                .enumerate()
                                .filter(|(k, _)| *k != *i && *k != *j)
                                .map(|(_, t)| t.clone())
                                .collect();
                            threads(cont, &mut rest);
                            threads(cont2, &mut rest);
                            rest.sort();
                            next[*c] = rest;
                        } else {
                            next[*c] = replace_thread(&g[*c], *i, cont);
                            next[d] = replace_thread(&g[d], *j, cont2);
                        }
                        out.push((Label::Tau, next));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Breadth-first state space of the composed behaviors. State ids follow
/// discovery order, with the successors of each state visited in
/// `(label, state)` order, so equal architectures give equal LTSs.
pub fn derive_lts(arch: &Architecture, cap: StateCap) -> Result<Lts, AnalysisError> {
    let diags = check_wellformed(arch);
    if diags.has_errors() {
        return Err(AnalysisError::IllFormed(diags));
    }
    let comp = Composition::new(arch);
    let init = comp.initial();
    let mut ids: BTreeMap<Global, usize> = BTreeMap::new();
    let mut order: Vec<Global> = Vec::new();
    let mut queue = VecDeque::new();
    ids.insert(init.clone(), 0);
    order.push(init);
    queue.push_back(0usize);
    let mut transitions = Vec::new();
    let mut terminal = BTreeSet::new();
    while let Some(s) = queue.pop_front() {
        let g = order[s].clone();
        if g.iter().all(Vec::is_empty) {
            terminal.insert(s);
        }
        for (label, next) in comp.successors(&g) {
            let target = match ids.get(&next) {
                Some(&t) => t,
                None => {
                    let t = order.len();
                    if t >= cap.max_states() {
                        return Err(AnalysisError::StateSpaceExceeded { cap: cap.max_states(), reached: t + 1 });
                    }
                    ids.insert(next.clone(), t);
                    order.push(next);
                    queue.push_back(t);
                    t
                }
            };
            transitions.push(Transition { source: s, label, target });
        }
    }
    Ok(Lts::new(order.len(), transitions, terminal))
}
