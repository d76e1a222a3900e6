use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Match, Selector};
use crate::model::{Architecture, ConstraintTarget};

/// Components picked by `sel`, sorted by name.
pub fn match_selector(arch: &Architecture, sel: &Selector) -> Vec<Match> {
    let mut out: Vec<Match> = Vec::new();
    for c in &arch.components {
        let bound = match sel {
            Selector::All => Some(BTreeMap::new()),
            Selector::ByName(n) => (&c.name == n).then(BTreeMap::new),
            Selector::ByTag(t) => c.tags.contains(t).then(BTreeMap::new),
            Selector::ByConstraintKey(key) => arch
                .constraints
                .iter()
                .find(|k| &k.key == key && matches!(&k.target, ConstraintTarget::Element(n) if n == &c.name))
                .map(|k| {
                    let field = key.rsplit('.').next().unwrap_or(key);
                    let mut m = BTreeMap::new();
                    m.insert(String::from(field), k.value.clone());
                    m
                }),
        };
        if let Some(bound) = bound {
            out.push(Match { component: c.name.clone(), bound });
        }
    }
    out.sort_by(|a, b| a.component.cmp(&b.component));
    out
}
