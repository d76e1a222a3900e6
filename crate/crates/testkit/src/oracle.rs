//! Reference implementations. They share no code with `gmde-core` beyond
//! its data types and favour obviousness over speed.

use std::collections::{BTreeMap, HashMap, HashSet};

use gmde_core::analysis::Lts;
use gmde_core::platform::PlatformProfile;
use gmde_core::{Architecture, ComponentKind, ConstraintTarget, MuFormula, Value};

type Set = HashSet<usize>;

/// Fixpoints by explicit subset iteration over hash sets.
pub fn mu_kleene(lts: &Lts, f: &MuFormula) -> Set {
    fn ev(lts: &Lts, f: &MuFormula, env: &mut HashMap<String, Set>) -> Set {
        let all: Set = (0..lts.num_states()).collect();
        match f {
            MuFormula::True => all,
            MuFormula::False => Set::new(),
            MuFormula::And(a, b) => {
                let x = ev(lts, a, env);
                let y = ev(lts, b, env);
                x.intersection(&y).copied().collect()
            }
            MuFormula::Or(a, b) => {
                let x = ev(lts, a, env);
                let y = ev(lts, b, env);
                x.union(&y).copied().collect()
            }
            MuFormula::Diamond(l, g) => {
                let inner = ev(lts, g, env);
                lts.transitions()
                    .iter()
                    .filter(|t| l.matches(&t.label) && inner.contains(&t.target))
                    .map(|t| t.source)
                    .collect()
            }
            MuFormula::Box(l, g) => {
                let inner = ev(lts, g, env);
                let bad: Set = lts
                    .transitions()
                    .iter()
                    .filter(|t| l.matches(&t.label) && !inner.contains(&t.target))
                    .map(|t| t.source)
                    .collect();
                all.difference(&bad).copied().collect()
            }
            MuFormula::Var(v) => env[v].clone(),
            MuFormula::Mu(v, g) | MuFormula::Nu(v, g) => {
                let mut cur = if matches!(f, MuFormula::Mu(..)) { Set::new() } else { all };
                let saved = env.get(v).cloned();
                loop {
                    env.insert(v.clone(), cur.clone());
                    let next = ev(lts, g, env);
                    if next == cur {
                        break;
                    }
                    cur = next;
                }
                match saved {
                    Some(s) => env.insert(v.clone(), s),
                    None => env.remove(v),
                };
                cur
            }
        }
    }
    ev(lts, f, &mut HashMap::new())
}

/// Fixpoints by the Knaster-Tarski characterisation, enumerating every
/// subset of states as a bitmask. Only for LTSs of at most 10 states.
pub fn mu_tarski(lts: &Lts, f: &MuFormula) -> Set {
    let n = lts.num_states();
    assert!(n <= 10, "tarski oracle is exponential");
    let full: u32 = (1u32 << n) - 1;
    fn ev(lts: &Lts, f: &MuFormula, env: &mut HashMap<String, u32>, full: u32) -> u32 {
        match f {
            MuFormula::True => full,
            MuFormula::False => 0,
            MuFormula::And(a, b) => ev(lts, a, env, full) & ev(lts, b, env, full),
            MuFormula::Or(a, b) => ev(lts, a, env, full) | ev(lts, b, env, full),
            MuFormula::Diamond(l, g) => {
                let inner = ev(lts, g, env, full);
                let mut r = 0;
                for t in lts.transitions() {
                    if l.matches(&t.label) && inner >> t.target & 1 == 1 {
                        r |= 1 << t.source;
                    }
                }
                r
            }
            MuFormula::Box(l, g) => {
                let inner = ev(lts, g, env, full);
                let mut r = full;
                for t in lts.transitions() {
                    if l.matches(&t.label) && inner >> t.target & 1 == 0 {
                        r &= !(1 << t.source);
                    }
                }
                r
            }
            MuFormula::Var(v) => env[v],
            MuFormula::Mu(v, g) | MuFormula::Nu(v, g) => {
                let least = matches!(f, MuFormula::Mu(..));
                let saved = env.get(v).copied();
                // lfp = meet of all pre-fixpoints, gfp = join of all post-fixpoints
                let mut acc = if least { full } else { 0 };
                for s in 0..=full {
                    env.insert(v.clone(), s);
                    let fs = ev(lts, g, env, full);
                    if least && fs & !s == 0 {
                        acc &= s;
                    }
                    if !least && s & !fs == 0 {
                        acc |= s;
                    }
                }
                match saved {
                    Some(s) => env.insert(v.clone(), s),
                    None => env.remove(v),
                };
                acc
            }
        }
    }
    let bits = ev(lts, f, &mut HashMap::new(), full);
    (0..n).filter(|i| bits >> i & 1 == 1).collect()
}

/// All reachable deadlocks with their BFS distance from state 0.
pub fn deadlock_distances(lts: &Lts) -> BTreeMap<usize, usize> {
    let mut dist = vec![usize::MAX; lts.num_states()];
    dist[0] = 0;
    let mut frontier = vec![0usize];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &s in &frontier {
            for t in lts.transitions().iter().filter(|t| t.source == s) {
                if dist[t.target] == usize::MAX {
                    dist[t.target] = d;
                    next.push(t.target);
                }
            }
        }
        frontier = next;
    }
    (0..lts.num_states())
        .filter(|&s| dist[s] != usize::MAX)
        .filter(|&s| !lts.transitions().iter().any(|t| t.source == s) && !lts.terminal_success().contains(&s))
        .map(|s| (s, dist[s]))
        .collect()
}

/// States reachable from 0, by depth-first search.
pub fn reachable(lts: &Lts) -> HashSet<usize> {
    let mut seen = HashSet::from([0]);
    let mut stack = vec![0];
    while let Some(s) = stack.pop() {
        for t in lts.transitions().iter().filter(|t| t.source == s) {
            if seen.insert(t.target) {
                stack.push(t.target);
            }
        }
    }
    seen
}

/// `(component, node class, slot)` rows plus unplaced names.
pub type Placement = (Vec<(String, String, u32)>, Vec<String>);

/// First-fit placement, written from the description: components in name
/// order; the preferred class is the one named by the binding that matches
/// the component's `platform.type` (services) or that lists it as required
/// infrastructure; fall back to the first declared class with room.
pub fn first_fit(arch: &Architecture, profile: &PlatformProfile) -> Placement {
    let mut free: Vec<(String, u32)> = profile.node_classes.iter().map(|n| (n.name.clone(), n.capacity)).collect();
    let mut names: Vec<_> = arch.components.iter().collect();
    names.sort_by(|a, b| a.name.as_bytes().cmp(b.name.as_bytes()));
    let mut rows = Vec::new();
    let mut unplaced = Vec::new();
    for c in names {
        let preference = if c.kind == ComponentKind::Service {
            let ty = arch.constraints.iter().find_map(|k| match (&k.target, &k.value) {
                (ConstraintTarget::Element(t), Value::Str(v)) if *t == c.name && k.key == "platform.type" => Some(v),
                _ => None,
            });
            ty.and_then(|ty| profile.bindings.iter().find(|b| &b.service_type == ty))
        } else {
            profile.bindings.iter().find(|b| b.infra.iter().any(|i| i.name == c.name))
        }
        .and_then(|b| b.node_class.clone());
        let idx = preference
            .and_then(|p| free.iter().position(|(n, left)| *n == p && *left > 0))
            .or_else(|| free.iter().position(|(_, left)| *left > 0));
        match idx {
            Some(i) => {
                let cap = profile.node_classes[i].capacity;
                let slot = cap - free[i].1;
                free[i].1 -= 1;
                rows.push((c.name.clone(), free[i].0.clone(), slot));
            }
            None => unplaced.push(c.name.clone()),
        }
    }
    (rows, unplaced)
}

/// Shortest distance from the initial state to a deadlock, if any.
pub fn shortest_deadlock(lts: &Lts) -> Option<usize> {
    deadlock_distances(lts).values().copied().min()
}
