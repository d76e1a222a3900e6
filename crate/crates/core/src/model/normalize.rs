use alloc::collections::BTreeSet;
use alloc::string::String;

use super::{check_wellformed, Architecture, Diagnostics, Direction};

/// An unbound, externally visible port.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InterfacePort {
    pub component: String,
    pub port: String,
    pub direction: Direction,
}

/// Canonical form: every collection sorted by name, degenerate choice and
/// parallel lists collapsed. Idempotent.
pub fn normalize(arch: &Architecture) -> Architecture {
    let mut a = arch.clone();
    for c in &mut a.components {
        c.ports.sort();
    }
    a.components.sort();
    a.connectors.sort();
    a.constraints.sort();
    a.properties.sort();
    for b in a.behaviors.values_mut() {
        *b = b.simplified();
    }
    a
}

pub fn arch_equal(a: &Architecture, b: &Architecture) -> bool {
    normalize(a) == normalize(b)
}

/// Ports not attached to any connector. Fails with the well-formedness
/// diagnostics if `arch` is ill-formed.
pub fn external_interface(arch: &Architecture) -> Result<BTreeSet<InterfacePort>, Diagnostics> {
    let diags = check_wellformed(arch);
    if diags.has_errors() {
        return Err(diags);
    }
    Ok(arch
        .components
        .iter()
        .flat_map(|c| c.ports.iter().map(move |p| (c, p)))
        .filter(|(c, p)| arch.attached_connector(&c.name, &p.name).is_none())
        .map(|(c, p)| InterfacePort { component: c.name.clone(), port: p.name.clone(), direction: p.direction })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;
    use alloc::vec::Vec;

    #[test]
    fn sorts_components() {
        let mut a = Architecture::new("A");
        a.components.push(Component::service("B"));
        a.components.push(Component::service("A"));
        let n = normalize(&a);
        let names: Vec<_> = n.components.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["A", "B"]);
        assert_eq!(normalize(&n), n);
    }

    #[test]
    fn interface_of_single_component() {
        let mut a = Architecture::new("A");
        a.components.push(Component::service("S").with_port(Port::provides("p")).with_port(Port::requires("r")));
        assert_eq!(external_interface(&a).unwrap().len(), 2);
    }

    #[test]
    fn interface_of_wired_pair_is_empty() {
        let mut a = Architecture::new("A");
        a.components.push(Component::service("S").with_port(Port::requires("r")));
        a.components.push(Component::service("T").with_port(Port::provides("p")));
        a.connectors.push(Connector::new("c", Attachment::new("S", "r"), Attachment::new("T", "p")));
        assert!(external_interface(&a).unwrap().is_empty());
    }

    #[test]
    fn interface_requires_wellformed() {
        let mut a = Architecture::new("A");
        a.components.push(Component::service("S"));
        a.components.push(Component::service("S"));
        assert!(external_interface(&a).is_err());
    }
}
