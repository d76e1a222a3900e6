//! `.gplat` platform profiles.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::parser::Cursor;
use super::translate::component;
use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::platform::{NodeClass, PlatformProfile, ServiceBinding};

fn invalid(span: SourceSpan, msg: String) -> ParseError {
    ParseError::new(ParseErrorKind::InvalidProfile, span, &[], msg)
}

/// Parses one `.gplat` profile:
///
/// ```text
/// platform NAME {
///     bind TAG as "type" [on CLASS] [{ infra declarations }]
///     protocol "name"
///     node CLASS capacity N
/// }
/// ```
pub fn parse_profile(text: &str) -> Result<PlatformProfile, ParseError> {
    let mut cur = Cursor::new(text)?;
    if cur.at_eof() {
        return Err(ParseError::new(ParseErrorKind::EmptyInput, cur.span(), &["`platform`"], "end of input"));
    }
    cur.expect_kw("platform")?;
    let name = cur.ident()?;
    cur.expect_sym("{")?;
    let mut bindings: Vec<ServiceBinding> = Vec::new();
    let mut protocol: Option<String> = None;
    let mut node_classes: Vec<NodeClass> = Vec::new();
    let mut class_refs = Vec::new();
    let mut infra_names = BTreeSet::new();
    while !cur.at_sym("}") {
        if cur.eat_kw("bind") {
            let tag = cur.word()?;
            cur.expect_kw("as")?;
            let (service_type, _) = cur.string()?;
            let node_class = if cur.eat_kw("on") {
                let n = cur.ident()?;
                class_refs.push(n.clone());
                Some(n.text)
            } else {
                None
            };
            let mut infra = Vec::new();
            if cur.eat_sym("{") {
                while !cur.at_sym("}") {
                    if !cur.at_kw("infra") {
                        return Err(cur.unexpected(&["`infra`", "`}`"]));
                    }
                    let decl = cur.service()?;
                    if !infra_names.insert(decl.name.text.clone()) {
                        return Err(invalid(decl.name.span, format!("infra component `{}` declared twice", decl.name.text)));
                    }
                    infra.push(component(&decl));
                }
                cur.expect_sym("}")?;
            }
            if bindings.iter().any(|b| b.tag == tag.text) {
                return Err(invalid(tag.span, format!("tag `{}` bound twice", tag.text)));
            }
            bindings.push(ServiceBinding { tag: tag.text, service_type, node_class, infra });
        } else if cur.eat_kw("protocol") {
            let (p, span) = cur.string()?;
            if protocol.replace(p).is_some() {
                return Err(invalid(span, String::from("more than one `protocol`")));
            }
        } else if cur.eat_kw("node") {
            let class = cur.ident()?;
            cur.expect_kw("capacity")?;
            let (cap, span) = cur.int()?;
            if !(1..=i64::from(u32::MAX)).contains(&cap) {
                return Err(invalid(span, format!("capacity must be positive, got {cap}")));
            }
            if node_classes.iter().any(|n| n.name == class.text) {
                return Err(invalid(class.span, format!("node class `{}` declared twice", class.text)));
            }
            node_classes.push(NodeClass { name: class.text, capacity: cap as u32 });
        } else {
            return Err(cur.unexpected(&["`bind`", "`protocol`", "`node`", "`}`"]));
        }
    }
    let end = cur.expect_sym("}")?;
    cur.expect_eof()?;
    let Some(protocol) = protocol else {
        return Err(invalid(end, String::from("a profile needs a `protocol`")));
    };
    if bindings.is_empty() {
        return Err(invalid(end, String::from("a profile needs at least one `bind`")));
    }
    if node_classes.is_empty() {
        return Err(invalid(end, String::from("a profile needs at least one `node` class")));
    }
    if let Some(r) = class_refs.iter().find(|r| !node_classes.iter().any(|n| n.name == r.text)) {
        return Err(invalid(r.span, format!("undeclared node class `{}`", r.text)));
    }
    Ok(PlatformProfile { name: name.text, bindings, protocol, node_classes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_profile() {
        let p = parse_profile(
            "platform testgrid {\n bind service as \"grid.service\" on compute { infra registry { provides lookup } }\n protocol \"soap\"\n node compute capacity 4\n}",
        )
        .unwrap();
        assert_eq!(p.bindings[0].infra[0].name, "registry");
        assert_eq!(p.node_classes[0].capacity, 4);
    }

    #[test]
    fn missing_protocol() {
        let e = parse_profile("platform p { bind service as \"t\" node n capacity 1 }").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::InvalidProfile);
    }

    #[test]
    fn unknown_class() {
        let e = parse_profile("platform p { bind service as \"t\" on big protocol \"x\" node n capacity 1 }").unwrap_err();
        assert_eq!((e.kind, e.found.contains("big")), (ParseErrorKind::InvalidProfile, true));
    }
}
