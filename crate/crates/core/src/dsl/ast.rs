//! Syntax tree of `.garch` files. Every node carries the span of the source
//! text it was parsed from.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use super::SourceSpan;
use crate::model::{Direction, LabelPattern, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub text: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslModel {
    pub name: Ident,
    pub platform: Option<Ident>,
    pub items: Vec<Item>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Service(ServiceDecl),
    Connector(ConnectorDecl),
    Behavior(BehaviorDecl),
    Constraint(ConstraintDecl),
    Property(PropertyDecl),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceDecl {
    pub infra: bool,
    pub name: Ident,
    pub tags: Vec<Ident>,
    pub ports: Vec<PortDecl>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortDecl {
    pub direction: Direction,
    pub name: Ident,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointRef {
    pub component: Ident,
    pub port: Ident,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectorDecl {
    pub name: Ident,
    pub from: EndpointRef,
    pub to: EndpointRef,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorDecl {
    pub component: Ident,
    pub body: ProcNode,
    pub definitions: Vec<(Ident, ProcNode)>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcNode {
    pub kind: ProcKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProcKind {
    Stop,
    Send(Ident, Box<ProcNode>),
    Receive(Ident, Box<ProcNode>),
    Choice(Vec<ProcNode>),
    Parallel(Vec<ProcNode>),
    Call(Ident),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintDecl {
    /// `None` targets the whole architecture.
    pub target: Option<Ident>,
    pub key: Vec<Ident>,
    pub value: Literal,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub value: Value,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDecl {
    pub name: Ident,
    pub check: PropertyCheckNode,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyCheckNode {
    DeadlockFree(SourceSpan),
    Formula(FormulaNode),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaNode {
    pub kind: FormulaKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaKind {
    True,
    False,
    And(Box<FormulaNode>, Box<FormulaNode>),
    Or(Box<FormulaNode>, Box<FormulaNode>),
    Diamond(LabelPatternNode, Box<FormulaNode>),
    Box(LabelPatternNode, Box<FormulaNode>),
    Var(Ident),
    Mu(Ident, Box<FormulaNode>),
    Nu(Ident, Box<FormulaNode>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelPatternNode {
    pub pattern: LabelPattern,
    pub span: SourceSpan,
}
