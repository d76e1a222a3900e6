use alloc::string::String;
use core::fmt::Write;

use crate::model::{
    check_wellformed, normalize, AbstractionLevel, Architecture, Behavior, Component, ComponentKind, Diagnostics,
    MuFormula, ProcExpr, PropertyCheck,
};

const INDENT: &str = "    ";

/// Renders a well-formed architecture in canonical `.garch` layout.
///
/// Output is in normalized order, so two `arch_equal` models print to the
/// same text. Comments from the original source are not preserved.
pub fn pretty_print(arch: &Architecture) -> Result<String, Diagnostics> {
    let diags = check_wellformed(arch);
    if diags.has_errors() {
        return Err(diags);
    }
    let a = normalize(arch);
    let mut out = String::new();
    let _ = write!(out, "architecture {}", a.name);
    if let AbstractionLevel::PlatformSpecific(p) = &a.level {
        let _ = write!(out, " platform {p}");
    }
    out.push_str(" {\n");
    for c in &a.components {
        out.push_str(INDENT);
        write_component(&mut out, c, 1);
        out.push('\n');
    }
    for k in &a.connectors {
        let _ = writeln!(out, "{INDENT}connector {} {{ from {} to {} }}", k.name, k.from, k.to);
    }
    for (owner, b) in &a.behaviors {
        let _ = write!(out, "{INDENT}behavior {owner} = {}", format_proc(&b.body));
        for (name, e) in &b.definitions {
            let _ = write!(out, "\n{INDENT}{INDENT}where {name} = {}", format_proc(e));
        }
        out.push('\n');
    }
    for c in &a.constraints {
        let _ = writeln!(out, "{INDENT}constraint on {} {{ {} = {} }}", c.target, c.key, c.value);
    }
    for p in &a.properties {
        let _ = match &p.check {
            PropertyCheck::DeadlockFree => writeln!(out, "{INDENT}property {} : deadlock_free", p.name),
            PropertyCheck::Formula(f) => writeln!(out, "{INDENT}property {} : {}", p.name, format_formula(f)),
        };
    }
    out.push_str("}\n");
    Ok(out)
}

/// Component declaration. With `depth == 0` the declaration is kept on one
/// line (used by the trace format).
pub(crate) fn write_component(out: &mut String, c: &Component, depth: usize) {
    out.push_str(match c.kind {
        ComponentKind::Service => "service ",
        ComponentKind::Infrastructural => "infra ",
    });
    out.push_str(&c.name);
    for (i, t) in c.tags.iter().enumerate() {
        out.push_str(if i == 0 { " tagged " } else { ", " });
        out.push_str(t);
    }
    if c.ports.is_empty() {
        out.push_str(" { }");
        return;
    }
    out.push_str(" {");
    for p in &c.ports {
        if depth == 0 {
            out.push(' ');
        } else {
            out.push('\n');
            for _ in 0..=depth {
                out.push_str(INDENT);
            }
        }
        let _ = write!(out, "{} {}", p.direction.keyword(), p.name);
    }
    if depth == 0 {
        out.push_str(" }");
    } else {
        out.push('\n');
        for _ in 0..depth {
            out.push_str(INDENT);
        }
        out.push('}');
    }
}

/// One-line `body where X = ... where Y = ...` rendering.
pub fn format_behavior(b: &Behavior) -> String {
    let mut s = format_proc(&b.body);
    for (name, e) in &b.definitions {
        let _ = write!(s, " where {name} = {}", format_proc(e));
    }
    s
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum ProcCtx {
    Top,
    ChoiceOperand,
    PrefixTail,
}

pub fn format_proc(e: &ProcExpr) -> String {
    let mut s = String::new();
    write_proc(&mut s, e, ProcCtx::Top);
    s
}

fn write_proc(out: &mut String, e: &ProcExpr, ctx: ProcCtx) {
    match e {
        ProcExpr::Stop => out.push_str("stop"),
        ProcExpr::Call(n) => out.push_str(n),
        ProcExpr::Prefix(a, next) => {
            out.push_str(a.port());
            out.push_str(if a.is_send() { "!." } else { "?." });
            write_proc(out, next, ProcCtx::PrefixTail);
        }
        ProcExpr::Choice(items) | ProcExpr::Parallel(items) if items.len() < 2 => {
            // Degenerate lists print as their simplification.
            write_proc(out, &e.simplified(), ctx);
        }
        ProcExpr::Choice(items) => {
            let wrap = ctx != ProcCtx::Top;
            write_list(out, items, " + ", wrap, ProcCtx::ChoiceOperand);
        }
        ProcExpr::Parallel(items) => {
            write_list(out, items, " | ", ctx != ProcCtx::Top, ProcCtx::ChoiceOperand);
        }
    }
}

fn write_list(out: &mut String, items: &[ProcExpr], sep: &str, wrap: bool, ctx: ProcCtx) {
    if wrap {
        out.push('(');
    }
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        // Nested lists of either kind are parenthesized so they re-parse as
        // one operand.
        let item_ctx = match item {
            ProcExpr::Choice(xs) | ProcExpr::Parallel(xs) if xs.len() >= 2 => ProcCtx::PrefixTail,
            _ => ctx,
        };
        write_proc(out, item, item_ctx);
    }
    if wrap {
        out.push(')');
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum FormulaCtx {
    Top,
    Disjunct,
    Conjunct,
    Operand,
}

pub fn format_formula(f: &MuFormula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, FormulaCtx::Top);
    s
}

fn write_formula(out: &mut String, f: &MuFormula, ctx: FormulaCtx) {
    match f {
        MuFormula::True => out.push_str("true"),
        MuFormula::False => out.push_str("false"),
        MuFormula::Var(v) => out.push_str(v),
        MuFormula::Mu(v, body) | MuFormula::Nu(v, body) => {
            let wrap = ctx != FormulaCtx::Top;
            if wrap {
                out.push('(');
            }
            let kw = if matches!(f, MuFormula::Mu(..)) { "mu" } else { "nu" };
            let _ = write!(out, "{kw} {v}. ");
            write_formula(out, body, FormulaCtx::Top);
            if wrap {
                out.push(')');
            }
        }
        MuFormula::Or(a, b) => {
            let wrap = ctx > FormulaCtx::Disjunct;
            if wrap {
                out.push('(');
            }
            write_formula(out, a, FormulaCtx::Disjunct);
            out.push_str(" or ");
            write_formula(out, b, FormulaCtx::Conjunct);
            if wrap {
                out.push(')');
            }
        }
        MuFormula::And(a, b) => {
            let wrap = ctx > FormulaCtx::Conjunct;
            if wrap {
                out.push('(');
            }
            write_formula(out, a, FormulaCtx::Conjunct);
            out.push_str(" and ");
            write_formula(out, b, FormulaCtx::Operand);
            if wrap {
                out.push(')');
            }
        }
        MuFormula::Diamond(l, sub) => {
            let _ = write!(out, "<{l}> ");
            write_formula(out, sub, FormulaCtx::Operand);
        }
        MuFormula::Box(l, sub) => {
            let _ = write!(out, "[{l}] ");
            write_formula(out, sub, FormulaCtx::Operand);
        }
    }
}
