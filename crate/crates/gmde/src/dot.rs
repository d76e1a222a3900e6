use std::fmt::Write;

use gmde_core::{Architecture, ComponentKind};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One `digraph` with a node per component and an edge per connector, both in
/// name order. Infrastructural components are drawn as dashed ellipses.
pub fn export_dot(arch: &Architecture) -> String {
    let mut comps: Vec<_> = arch.components.iter().collect();
    comps.sort_by(|a, b| a.name.cmp(&b.name));
    let mut conns: Vec<_> = arch.connectors.iter().collect();
    conns.sort_by(|a, b| a.name.cmp(&b.name));

    let mut s = String::new();
    let _ = writeln!(s, "digraph {} {{", quote(&arch.name));
    let _ = writeln!(s, "  node [shape=box];");
    for c in comps {
        let style = match c.kind {
            ComponentKind::Service => "",
            ComponentKind::Infrastructural => ", shape=ellipse, style=dashed",
        };
        let _ = writeln!(s, "  {} [label={}{style}];", quote(&c.name), quote(&c.name));
    }
    for k in conns {
        let _ = writeln!(
            s,
            "  {} -> {} [label={}];",
            quote(&k.from.component),
            quote(&k.to.component),
            quote(&k.name)
        );
    }
    s.push_str("}\n");
    s
}
