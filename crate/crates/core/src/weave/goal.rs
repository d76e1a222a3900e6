use alloc::vec::Vec;

use super::{match_selector, GoalError, GoalPredicate};
use crate::analysis::{check_property, StateCap};
use crate::model::Architecture;

/// Glob match where `*` stands for any (possibly empty) substring.
pub fn glob_match(pattern: &str, text: &str) -> bool {
    let parts: Vec<&str> = pattern.split('*').collect();
    if parts.len() == 1 {
        return pattern == text;
    }
    let (first, last) = (parts[0], parts[parts.len() - 1]);
    if !text.starts_with(first) || text.len() < first.len() + last.len() || !text.ends_with(last) {
        return false;
    }
    let mut rest = &text[first.len()..text.len() - last.len()];
    for mid in &parts[1..parts.len() - 1] {
        match rest.find(mid) {
            Some(i) => rest = &rest[i + mid.len()..],
            None => return false,
        }
    }
    true
}

/// `name` is `base_r<digits>`.
fn is_replica_of(name: &str, base: &str) -> bool {
    name.strip_prefix(base)
        .and_then(|r| r.strip_prefix("_r"))
        .is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}

/// Evaluates a goal on `arch`.
pub fn verify_goal(arch: &Architecture, goal: &GoalPredicate) -> Result<bool, GoalError> {
    Ok(match goal {
        GoalPredicate::ReplicaCount { selector, min } => {
            let matched = match_selector(arch, selector);
            let bases: Vec<&str> = matched
                .iter()
                .map(|m| m.component.as_str())
                .filter(|n| !arch.components.iter().any(|c| c.name != *n && is_replica_of(n, &c.name)))
                .collect();
            !bases.is_empty()
                && bases.iter().all(|b| {
                    let count = 1 + arch.components.iter().filter(|c| is_replica_of(&c.name, b)).count() as i64;
                    count >= *min
                })
        }
        GoalPredicate::ComponentExists(g) => arch.components.iter().any(|c| glob_match(g, &c.name)),
        GoalPredicate::ConnectorAllPassThrough(kind) => arch.connectors.iter().all(|k| {
            [&k.from, &k.to].iter().any(|end| arch.component(&end.component).is_some_and(|c| c.kind == *kind))
        }),
        GoalPredicate::PropertyHolds(name) => {
            let spec = arch.property(name).ok_or_else(|| GoalError::UnknownProperty(name.clone()))?;
            check_property(arch, spec, StateCap::default()).map_err(GoalError::Analysis)?.holds
        }
    })
}
