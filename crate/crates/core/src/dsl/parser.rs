use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::model::{is_identifier, Direction, Label, LabelPattern, Value};

pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub(crate) fn new(src: &str) -> Result<Cursor, ParseError> {
        Ok(Cursor { toks: tokenize(src)?, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    pub(crate) fn span(&self) -> SourceSpan {
        self.peek().span
    }

    /// Span of the most recently consumed token.
    pub(crate) fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span
    }

    pub(crate) fn advance(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    pub(crate) fn at_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(t) if *t == s)
    }

    pub(crate) fn at_kw(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(t) if t == kw)
    }

    pub(crate) fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.at_sym(s);
        if hit {
            self.advance();
        }
        hit
    }

    pub(crate) fn eat_kw(&mut self, kw: &str) -> bool {
        let hit = self.at_kw(kw);
        if hit {
            self.advance();
        }
        hit
    }

    pub(crate) fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::new(ParseErrorKind::UnexpectedToken, t.span, expected, t.tok.describe())
    }

    pub(crate) fn expect_sym(&mut self, s: &'static str) -> Result<SourceSpan, ParseError> {
        if self.at_sym(s) {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&[&format!("`{s}`")]))
        }
    }

    pub(crate) fn expect_kw(&mut self, kw: &str) -> Result<SourceSpan, ParseError> {
        if self.at_kw(kw) {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&[&format!("`{kw}`")]))
        }
    }

    pub(crate) fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    /// A non-keyword identifier.
    pub(crate) fn ident(&mut self) -> Result<Ident, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if is_identifier(s) => {
                let t = self.advance();
                let Tok::Ident(text) = t.tok else { unreachable!() };
                Ok(Ident { text, span: t.span })
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    /// Any word token, including keywords. Used where the grammar is
    /// keyword-driven (pattern kinds, action verbs).
    pub(crate) fn word(&mut self) -> Result<Ident, ParseError> {
        match &self.peek().tok {
            Tok::Ident(_) => {
                let t = self.advance();
                let Tok::Ident(text) = t.tok else { unreachable!() };
                Ok(Ident { text, span: t.span })
            }
            _ => Err(self.unexpected(&["word"])),
        }
    }

    fn key_segment(&mut self) -> Result<Ident, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if s.starts_with(|c: char| c.is_ascii_alphabetic()) => self.word(),
            _ => Err(self.unexpected(&["key segment"])),
        }
    }

    pub(crate) fn dotted_key(&mut self) -> Result<Vec<Ident>, ParseError> {
        let mut parts = alloc::vec![self.key_segment()?];
        while self.at_sym(".") {
            self.advance();
            parts.push(self.key_segment()?);
        }
        Ok(parts)
    }

    pub(crate) fn literal(&mut self) -> Result<Literal, ParseError> {
        let start = self.span();
        let value = match &self.peek().tok {
            Tok::Int(i) => Value::Int(*i),
            Tok::Str(s) => Value::Str(s.clone()),
            Tok::Ident(k) if k == "true" => Value::Bool(true),
            Tok::Ident(k) if k == "false" => Value::Bool(false),
            Tok::Sym("-") => {
                self.advance();
                match &self.peek().tok {
                    Tok::Int(i) => Value::Int(-*i),
                    _ => return Err(self.unexpected(&["integer"])),
                }
            }
            _ => return Err(self.unexpected(&["integer", "string", "`true`", "`false`"])),
        };
        let end = self.advance().span;
        Ok(Literal { value, span: start.to(end) })
    }

    pub(crate) fn int(&mut self) -> Result<(i64, SourceSpan), ParseError> {
        let lit = self.literal()?;
        match lit.value {
            Value::Int(i) => Ok((i, lit.span)),
            _ => Err(ParseError::new(ParseErrorKind::UnexpectedToken, lit.span, &["integer"], format!("{}", lit.value))),
        }
    }

    pub(crate) fn string(&mut self) -> Result<(String, SourceSpan), ParseError> {
        match &self.peek().tok {
            Tok::Str(s) => {
                let s = s.clone();
                Ok((s, self.advance().span))
            }
            _ => Err(self.unexpected(&["string"])),
        }
    }

    pub(crate) fn endpoint(&mut self) -> Result<EndpointRef, ParseError> {
        let component = self.ident()?;
        self.expect_sym(".")?;
        let port = self.ident()?;
        Ok(EndpointRef { component, port })
    }

    // ---- services and connectors ----

    /// `("service" | "infra") ID ("tagged" ID ("," ID)*)? "{" portdecl* "}"`
    pub(crate) fn service(&mut self) -> Result<ServiceDecl, ParseError> {
        let start = self.span();
        let infra = if self.eat_kw("infra") {
            true
        } else {
            self.expect_kw("service")?;
            false
        };
        let name = self.ident()?;
        let mut tags = Vec::new();
        if self.eat_kw("tagged") {
            tags.push(self.ident()?);
            while self.eat_sym(",") {
                tags.push(self.ident()?);
            }
        }
        self.expect_sym("{")?;
        let mut ports = Vec::new();
        loop {
            let pstart = self.span();
            let direction = if self.eat_kw("provides") {
                Direction::Provides
            } else if self.eat_kw("requires") {
                Direction::Requires
            } else if self.at_sym("}") {
                break;
            } else {
                return Err(self.unexpected(&["`provides`", "`requires`", "`}`"]));
            };
            let name = self.ident()?;
            ports.push(PortDecl { direction, span: pstart.to(name.span), name });
        }
        let end = self.expect_sym("}")?;
        Ok(ServiceDecl { infra, name, tags, ports, span: start.to(end) })
    }

    /// `"{" "from" ID "." ID "to" ID "." ID "}"` after the connector name.
    pub(crate) fn connector_body(&mut self, name: Ident, start: SourceSpan) -> Result<ConnectorDecl, ParseError> {
        self.expect_sym("{")?;
        self.expect_kw("from")?;
        let from = self.endpoint()?;
        self.expect_kw("to")?;
        let to = self.endpoint()?;
        let end = self.expect_sym("}")?;
        Ok(ConnectorDecl { name, from, to, span: start.to(end) })
    }

    /// `procexpr ("where" ID "=" procexpr)*`
    pub(crate) fn behavior_rhs(&mut self) -> Result<(ProcNode, Vec<(Ident, ProcNode)>), ParseError> {
        let body = self.proc_par()?;
        let mut defs = Vec::new();
        while self.eat_kw("where") {
            let name = self.ident()?;
            self.expect_sym("=")?;
            defs.push((name, self.proc_par()?));
        }
        Ok((body, defs))
    }

    /// `"{" DOTTEDKEY "=" literal "}"`
    pub(crate) fn constraint_body(&mut self) -> Result<(Vec<Ident>, Literal, SourceSpan), ParseError> {
        self.expect_sym("{")?;
        let key = self.dotted_key()?;
        self.expect_sym("=")?;
        let value = self.literal()?;
        let end = self.expect_sym("}")?;
        Ok((key, value, end))
    }

    // ---- process expressions ----

    fn proc_par(&mut self) -> Result<ProcNode, ParseError> {
        let first = self.proc_choice()?;
        if !self.at_sym("|") {
            return Ok(first);
        }
        let start = first.span;
        let mut items = alloc::vec![first];
        while self.eat_sym("|") {
            items.push(self.proc_choice()?);
        }
        let span = start.to(items[items.len() - 1].span);
        Ok(ProcNode { kind: ProcKind::Parallel(items), span })
    }

    fn proc_choice(&mut self) -> Result<ProcNode, ParseError> {
        let first = self.proc_prefix()?;
        if !self.at_sym("+") {
            return Ok(first);
        }
        let start = first.span;
        let mut items = alloc::vec![first];
        while self.eat_sym("+") {
            items.push(self.proc_prefix()?);
        }
        let span = start.to(items[items.len() - 1].span);
        Ok(ProcNode { kind: ProcKind::Choice(items), span })
    }

    fn proc_prefix(&mut self) -> Result<ProcNode, ParseError> {
        let start = self.span();
        if self.eat_kw("stop") {
            return Ok(ProcNode { kind: ProcKind::Stop, span: start });
        }
        if self.eat_sym("(") {
            let inner = self.proc_par()?;
            self.expect_sym(")")?;
            return Ok(inner);
        }
        let Ok(id) = self.ident() else {
            return Err(self.unexpected(&["identifier", "`stop`", "`(`"]));
        };
        let send = if self.eat_sym("!") {
            true
        } else if self.eat_sym("?") {
            false
        } else {
            return Ok(ProcNode { span: id.span, kind: ProcKind::Call(id) });
        };
        self.expect_sym(".")?;
        let next = self.proc_prefix()?;
        let span = start.to(next.span);
        let next = Box::new(next);
        let kind = if send { ProcKind::Send(id, next) } else { ProcKind::Receive(id, next) };
        Ok(ProcNode { kind, span })
    }

    // ---- mu-calculus formulas ----

    pub(crate) fn formula(&mut self) -> Result<FormulaNode, ParseError> {
        let first = self.formula_conj()?;
        let mut acc = first;
        while self.eat_kw("or") {
            let rhs = self.formula_conj()?;
            let span = acc.span.to(rhs.span);
            acc = FormulaNode { kind: FormulaKind::Or(Box::new(acc), Box::new(rhs)), span };
        }
        Ok(acc)
    }

    fn formula_conj(&mut self) -> Result<FormulaNode, ParseError> {
        let mut acc = self.formula_unary()?;
        while self.eat_kw("and") {
            let rhs = self.formula_unary()?;
            let span = acc.span.to(rhs.span);
            acc = FormulaNode { kind: FormulaKind::And(Box::new(acc), Box::new(rhs)), span };
        }
        Ok(acc)
    }

    fn formula_unary(&mut self) -> Result<FormulaNode, ParseError> {
        let start = self.span();
        if self.eat_kw("true") {
            return Ok(FormulaNode { kind: FormulaKind::True, span: start });
        }
        if self.eat_kw("false") {
            return Ok(FormulaNode { kind: FormulaKind::False, span: start });
        }
        for (kw, least) in [("mu", true), ("nu", false)] {
            if self.eat_kw(kw) {
                let var = self.ident()?;
                self.expect_sym(".")?;
                let body = self.formula()?;
                let span = start.to(body.span);
                let body = Box::new(body);
                let kind = if least { FormulaKind::Mu(var, body) } else { FormulaKind::Nu(var, body) };
                return Ok(FormulaNode { kind, span });
            }
        }
        for (open, close, diamond) in [("<", ">", true), ("[", "]", false)] {
            if self.eat_sym(open) {
                let pattern = self.label_pattern()?;
                self.expect_sym(close)?;
                let sub = self.formula_unary()?;
                let span = start.to(sub.span);
                let sub = Box::new(sub);
                let kind = if diamond { FormulaKind::Diamond(pattern, sub) } else { FormulaKind::Box(pattern, sub) };
                return Ok(FormulaNode { kind, span });
            }
        }
        if self.eat_sym("(") {
            let inner = self.formula()?;
            self.expect_sym(")")?;
            return Ok(inner);
        }
        match self.ident() {
            Ok(v) => Ok(FormulaNode { span: v.span, kind: FormulaKind::Var(v) }),
            Err(_) => Err(self.unexpected(&[
                "`true`", "`false`", "`mu`", "`nu`", "`<`", "`[`", "`(`", "identifier",
            ])),
        }
    }

    fn label_pattern(&mut self) -> Result<LabelPatternNode, ParseError> {
        let start = self.span();
        if self.eat_sym("*") {
            return Ok(LabelPatternNode { pattern: LabelPattern::Any, span: start });
        }
        if self.eat_kw("tau") {
            return Ok(LabelPatternNode { pattern: LabelPattern::Exact(Label::Tau), span: start });
        }
        let Ok(ep) = self.endpoint() else {
            return Err(self.unexpected(&["`*`", "`tau`", "identifier"]));
        };
        let (component, port) = (ep.component.text, ep.port.text);
        let label = if self.eat_sym("!") {
            Label::Send { component, port }
        } else if self.eat_sym("?") {
            Label::Receive { component, port }
        } else {
            return Err(self.unexpected(&["`!`", "`?`"]));
        };
        Ok(LabelPatternNode { pattern: LabelPattern::Exact(label), span: start.to(self.prev_span()) })
    }
}

/// Parses one `.garch` architecture.
pub fn parse_architecture(text: &str) -> Result<DslModel, ParseError> {
    let mut cur = Cursor::new(text)?;
    if cur.at_eof() {
        return Err(ParseError::new(ParseErrorKind::EmptyInput, cur.span(), &["`architecture`"], "end of input"));
    }
    let start = cur.expect_kw("architecture")?;
    let name = cur.ident()?;
    let platform = if cur.eat_kw("platform") { Some(cur.ident()?) } else { None };
    cur.expect_sym("{")?;
    let mut items = Vec::new();
    while !cur.at_sym("}") {
        items.push(item(&mut cur)?);
    }
    let end = cur.expect_sym("}")?;
    cur.expect_eof()?;
    Ok(DslModel { name, platform, items, span: start.to(end) })
}

fn item(cur: &mut Cursor) -> Result<Item, ParseError> {
    let start = cur.span();
    if cur.at_kw("service") || cur.at_kw("infra") {
        return Ok(Item::Service(cur.service()?));
    }
    if cur.eat_kw("connector") {
        let name = cur.ident()?;
        return Ok(Item::Connector(cur.connector_body(name, start)?));
    }
    if cur.eat_kw("behavior") {
        let component = cur.ident()?;
        cur.expect_sym("=")?;
        let (body, definitions) = cur.behavior_rhs()?;
        let end = cur.prev_span();
        return Ok(Item::Behavior(BehaviorDecl { component, body, definitions, span: start.to(end) }));
    }
    if cur.eat_kw("constraint") {
        cur.expect_kw("on")?;
        let target = if cur.eat_kw("architecture") { None } else { Some(cur.ident()?) };
        let (key, value, end) = cur.constraint_body()?;
        return Ok(Item::Constraint(ConstraintDecl { target, key, value, span: start.to(end) }));
    }
    if cur.eat_kw("property") {
        let name = cur.ident()?;
        cur.expect_sym(":")?;
        let check = if cur.at_kw("deadlock_free") {
            PropertyCheckNode::DeadlockFree(cur.advance().span)
        } else {
            PropertyCheckNode::Formula(cur.formula()?)
        };
        let end = cur.prev_span();
        return Ok(Item::Property(PropertyDecl { name, check, span: start.to(end) }));
    }
    Err(cur.unexpected(&["`service`", "`infra`", "`connector`", "`behavior`", "`constraint`", "`property`", "`}`"]))
}
