//! `.gpat` pattern files.

use alloc::format;
use alloc::string::String;

use super::actions::parse_action;
use super::parser::Cursor;
use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::model::{ComponentKind, Value};
use crate::weave::{GoalPredicate, Pattern, PatternKind, Selector};

fn invalid(span: SourceSpan, msg: String) -> ParseError {
    ParseError::new(ParseErrorKind::InvalidPattern, span, &[], msg)
}

fn selector(cur: &mut Cursor) -> Result<Selector, ParseError> {
    if cur.eat_kw("name") {
        Ok(Selector::ByName(cur.ident()?.text))
    } else if cur.eat_kw("tag") {
        Ok(Selector::ByTag(cur.ident()?.text))
    } else if cur.eat_kw("constraint") {
        Ok(Selector::ByConstraintKey(super::translate::dotted(&cur.dotted_key()?)))
    } else if cur.eat_kw("all") {
        Ok(Selector::All)
    } else {
        Err(cur.unexpected(&["`name`", "`tag`", "`constraint`", "`all`"]))
    }
}

fn goal(cur: &mut Cursor) -> Result<GoalPredicate, ParseError> {
    if cur.eat_kw("replica_count") {
        let selector = selector(cur)?;
        cur.expect_sym(">=")?;
        let (min, _) = cur.int()?;
        Ok(GoalPredicate::ReplicaCount { selector, min })
    } else if cur.eat_kw("component_exists") {
        Ok(GoalPredicate::ComponentExists(cur.string()?.0))
    } else if cur.eat_kw("pass_through") {
        if cur.eat_kw("service") {
            Ok(GoalPredicate::ConnectorAllPassThrough(ComponentKind::Service))
        } else if cur.eat_kw("infra") {
            Ok(GoalPredicate::ConnectorAllPassThrough(ComponentKind::Infrastructural))
        } else {
            Err(cur.unexpected(&["`service`", "`infra`"]))
        }
    } else if cur.eat_kw("property") {
        Ok(GoalPredicate::PropertyHolds(cur.ident()?.text))
    } else {
        Err(cur.unexpected(&["`replica_count`", "`component_exists`", "`pass_through`", "`property`"]))
    }
}

/// Parses one `.gpat` pattern:
///
/// ```text
/// pattern NAME kind (replication | secure_channel | script) {
///     match (name ID | tag ID | constraint KEY | all)
///     param ID = literal
///     goal ...
///     action "template"
/// }
/// ```
pub fn parse_pattern(text: &str) -> Result<Pattern, ParseError> {
    let mut cur = Cursor::new(text)?;
    if cur.at_eof() {
        return Err(ParseError::new(ParseErrorKind::EmptyInput, cur.span(), &["`pattern`"], "end of input"));
    }
    cur.expect_kw("pattern")?;
    let name = cur.ident()?;
    cur.expect_kw("kind")?;
    let kind_tok = cur.word()?;
    let kind = PatternKind::from_keyword(&kind_tok.text).ok_or_else(|| {
        ParseError::new(
            ParseErrorKind::UnknownPatternKind,
            kind_tok.span,
            &["`replication`", "`secure_channel`", "`script`"],
            kind_tok.text.clone(),
        )
    })?;
    cur.expect_sym("{")?;
    let mut p = Pattern::new(name.text, kind, Selector::All);
    let mut seen_match = false;
    let mut templates = alloc::vec::Vec::new();
    while !cur.at_sym("}") {
        let start = cur.span();
        if cur.eat_kw("match") {
            if seen_match {
                return Err(invalid(start, String::from("more than one `match` clause")));
            }
            seen_match = true;
            p.selector = selector(&mut cur)?;
        } else if cur.eat_kw("param") {
            let key = cur.ident()?;
            cur.expect_sym("=")?;
            let value = cur.literal()?.value;
            if p.params.insert(key.text.clone(), value).is_some() {
                return Err(invalid(key.span, format!("parameter `{}` set twice", key.text)));
            }
        } else if cur.eat_kw("goal") {
            if p.goal.is_some() {
                return Err(invalid(start, String::from("more than one `goal` clause")));
            }
            p.goal = Some(goal(&mut cur)?);
        } else if cur.eat_kw("action") {
            let (t, span) = cur.string()?;
            templates.push((t.clone(), span));
            p.script.push(t);
        } else {
            return Err(cur.unexpected(&["`match`", "`param`", "`goal`", "`action`", "`}`"]));
        }
    }
    let end = cur.expect_sym("}")?;
    cur.expect_eof()?;

    match kind {
        PatternKind::Replication => {
            if let Some(v) = p.params.get("replicas") {
                if !matches!(v, Value::Int(n) if *n >= 1) {
                    return Err(invalid(end, format!("`replicas` must be a positive integer, got {v}")));
                }
            }
        }
        PatternKind::Script if p.script.is_empty() => {
            return Err(invalid(end, String::from("a script pattern needs at least one `action`")));
        }
        _ => {}
    }
    if kind != PatternKind::Script {
        if let Some((_, span)) = templates.first() {
            return Err(invalid(*span, String::from("`action` is only allowed in script patterns")));
        }
    }
    // Templates that only use `${match}` and declared parameters are checked now.
    for (t, span) in &templates {
        let expanded = crate::weave::substitute_template(t, |key| {
            if key == "match" {
                Some(String::from("M"))
            } else {
                p.params.get(key).map(|v| match v {
                    Value::Str(s) => s.clone(),
                    other => format!("{other}"),
                })
            }
        });
        if let Ok(line) = expanded {
            if let Err(e) = parse_action(&line) {
                return Err(invalid(*span, format!("action template `{t}` does not parse: {e}")));
            }
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replication_pattern() {
        let p = parse_pattern(
            "pattern HA kind replication {\n match constraint qos.availability.replicas\n param replicas = 3\n goal replica_count constraint qos.availability.replicas >= 3\n}",
        )
        .unwrap();
        assert_eq!(p.selector, Selector::ByConstraintKey("qos.availability.replicas".into()));
        assert_eq!(p.params["replicas"], Value::Int(3));
        assert!(matches!(p.goal, Some(GoalPredicate::ReplicaCount { min: 3, .. })));
    }

    #[test]
    fn unknown_kind() {
        let e = parse_pattern("pattern P kind teleport { }").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownPatternKind);
        assert_eq!((e.span.line, e.span.column), (1, 16));
    }

    #[test]
    fn invariants() {
        let e = parse_pattern("pattern P kind script { match all }").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::InvalidPattern);
        let e = parse_pattern("pattern P kind replication { param replicas = 0 }").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::InvalidPattern);
        let e = parse_pattern("pattern P kind script { action \"explode ${match}\" }").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::InvalidPattern);
        assert!(parse_pattern("pattern P kind script { action \"add_port ${match} requires ${p}\" }").is_ok());
    }
}
