use std::fs;
use std::io::Write;
use std::path::Path;

use gmde_core::analysis::{self, derive_lts, evaluate_property, AnalysisError, CheckReport, StateCap};
use gmde_core::dsl::{format_action, parse_architecture, parse_pattern, parse_profile, pretty_print, translate_to_core};
use gmde_core::platform::{adapt_to_platform, emit_deployment, AdaptFailure, PlatformProfile};
use gmde_core::weave::{match_selector, weave, Cascade, GoalError, Pattern, WeaveFailure};
use gmde_core::{check_wellformed, AbstractionLevel, Architecture};

use crate::cli::{AdaptArgs, CheckArgs, DotArgs, WeaveArgs};
use crate::dot::export_dot;
use crate::json::{self, Deployment, Trace};
use crate::{exit, Failure};

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(exit::INPUT, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(exit::WRITE, format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::new(exit::WRITE, format!("cannot write output: {e}")))
}

pub fn load_architecture(path: &Path) -> Result<Architecture, Failure> {
    let text = read(path)?;
    let ast = parse_architecture(&text).map_err(|e| Failure::new(exit::INPUT, format!("{}:{e}", path.display())))?;
    translate_to_core(&ast).map_err(|d| Failure::new(exit::INPUT, format!("{}: ill-formed model\n{d}", path.display())))
}

pub fn load_pattern(path: &Path) -> Result<Pattern, Failure> {
    parse_pattern(&read(path)?).map_err(|e| Failure::new(exit::INPUT, format!("{}:{e}", path.display())))
}

pub fn load_profile(path: &Path) -> Result<PlatformProfile, Failure> {
    parse_profile(&read(path)?).map_err(|e| Failure::new(exit::INPUT, format!("{}:{e}", path.display())))
}

fn analysis_failure(e: AnalysisError) -> Failure {
    let code = match e {
        AnalysisError::StateSpaceExceeded { .. } => exit::STATE_CAP,
        _ => exit::INPUT,
    };
    Failure::new(code, e.to_string())
}

fn format_path(p: &analysis::Path) -> String {
    let mut s = String::new();
    for (state, label) in &p.steps {
        s += &format!("{state} --{label}--> ");
    }
    s += &p.target.to_string();
    s
}

fn human_report(r: &CheckReport) -> String {
    let mut s = format!(
        "{}: {} states, {} transitions, {} terminal\n",
        r.architecture, r.states, r.transitions, r.terminal_states
    );
    for p in &r.properties {
        match (&p.error, p.holds) {
            (Some(e), _) => s += &format!("  {}: error {e}\n", p.name),
            (None, true) => {
                s += &format!("  {}: holds\n", p.name);
                if let Some(w) = &p.witness {
                    s += &format!("    witness: {}\n", format_path(w));
                }
            }
            (None, false) => {
                s += &format!("  {}: FAILS\n", p.name);
                match &p.witness {
                    Some(w) => s += &format!("    deadlock after {} steps: {}\n", w.len(), format_path(w)),
                    None => s += "    not satisfied in the initial state\n",
                }
            }
        }
    }
    s
}

pub fn cmd_check(a: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let arch = load_architecture(&a.model)?;
    let diags = check_wellformed(&arch);
    if !diags.is_empty() {
        let _ = write!(err, "{diags}");
    }
    let cap = match a.max_states {
        Some(n) => StateCap::new(usize::try_from(n).unwrap_or(usize::MAX)).expect("clap enforces n >= 1"),
        None => StateCap::default(),
    };
    let lts = derive_lts(&arch, cap).map_err(analysis_failure)?;
    if let Some(path) = &a.aut {
        write(path, &lts.to_aut())?;
    }
    let report = CheckReport {
        architecture: arch.name.clone(),
        states: lts.num_states(),
        transitions: lts.transitions().len(),
        terminal_states: lts.terminal_success().len(),
        properties: arch.properties.iter().map(|p| evaluate_property(&lts, p)).collect(),
    };
    let text = if a.json { json::to_text(&json::Report::from(&report)) } else { human_report(&report) };
    emit(out, &text)?;
    Ok(if report.all_hold() { exit::OK } else { exit::PROPERTY })
}

/// Writes `stage_NNN.garch` for every stage plus `trace.json`.
pub fn write_cascade(dir: &Path, c: &Cascade, trace: &Trace) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::new(exit::WRITE, format!("cannot create {}: {e}", dir.display())))?;
    for (i, stage) in c.stages.iter().enumerate() {
        let text = pretty_print(stage).map_err(|d| Failure::new(exit::ACTION, format!("stage {i} is ill-formed\n{d}")))?;
        write(&dir.join(format!("stage_{i:03}.garch")), &text)?;
    }
    write(&dir.join("trace.json"), &json::to_text(trace))
}

fn action_list(c: &Cascade) -> String {
    c.trace.iter().map(|t| format_action(&t.action) + "\n").collect()
}

fn goal_code(ok: bool) -> i32 {
    if ok {
        exit::OK
    } else {
        exit::PROPERTY
    }
}

pub fn cmd_weave(a: &WeaveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let arch = load_architecture(&a.model)?;
    let pattern = load_pattern(&a.pattern)?;
    let c = weave(&arch, &pattern).map_err(|f| match f {
        WeaveFailure::IllFormed(d) => Failure::new(exit::INPUT, format!("input model is ill-formed\n{d}")),
        WeaveFailure::Compile(e) => Failure::new(exit::PATTERN, e.to_string()),
        WeaveFailure::Action(e) => Failure::new(exit::ACTION, e.to_string()),
        WeaveFailure::Goal(GoalError::Analysis(e)) => analysis_failure(e),
        WeaveFailure::Goal(e) => Failure::new(exit::PATTERN, e.to_string()),
    })?;
    if a.dry_run {
        emit(out, &action_list(&c))?;
        return Ok(goal_code(c.goal_result));
    }
    let goal = pattern.effective_goal(&match_selector(&arch, &pattern.selector)).to_string();
    let dir = a.out.as_deref().expect("clap requires --out without --dry-run");
    write_cascade(dir, &c, &Trace::new(&pattern.name, goal, &c))?;
    emit(out, &format!("wrote {} stages to {}\ngoal_result: {}\n", c.stages.len(), dir.display(), c.goal_result))?;
    Ok(goal_code(c.goal_result))
}

pub fn cmd_adapt(a: &AdaptArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let arch = load_architecture(&a.model)?;
    let profile = load_profile(&a.profile)?;
    let c = adapt_to_platform(&arch, &profile).map_err(|f| match f {
        AdaptFailure::IllFormed(d) => Failure::new(exit::INPUT, format!("input model is ill-formed\n{d}")),
        AdaptFailure::Platform(e) => Failure::new(exit::PLATFORM, e.to_string()),
        AdaptFailure::Action(e) => Failure::new(exit::ACTION, e.to_string()),
    })?;
    if a.dry_run {
        emit(out, &action_list(&c))?;
        return Ok(goal_code(c.goal_result));
    }
    let deployment =
        emit_deployment(c.result(), &profile).map_err(|e| Failure::new(exit::PLATFORM, e.to_string()))?;
    let goal = format!("level = {}", AbstractionLevel::PlatformSpecific(profile.name.clone()));
    let dir = a.out.as_deref().expect("clap requires --out without --dry-run");
    write_cascade(dir, &c, &Trace::new(&profile.name, goal, &c))?;
    write(&dir.join("deployment.json"), &json::to_text(&Deployment::from(&deployment)))?;
    emit(
        out,
        &format!(
            "wrote {} stages and deployment.json to {}\nplaced {}, unplaced {}\ngoal_result: {}\n",
            c.stages.len(),
            dir.display(),
            deployment.placements.len(),
            deployment.unplaced.len(),
            c.goal_result
        ),
    )?;
    Ok(goal_code(c.goal_result))
}

pub fn cmd_export_dot(a: &DotArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let arch = load_architecture(&a.model)?;
    let dot = export_dot(&arch);
    match &a.out {
        Some(p) => write(p, &dot)?,
        None => emit(out, &dot)?,
    }
    Ok(exit::OK)
}
