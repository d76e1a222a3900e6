//! JSON shapes of the files and reports the CLI writes. Field order is the
//! declaration order below.

use gmde_core::analysis::{AnalysisError, CheckReport, EvalStats, Path, PropertyOutcome};
use gmde_core::dsl::format_action;
use gmde_core::platform::DeploymentDescriptor;
use gmde_core::weave::Cascade;
use serde::Serialize;

#[derive(Serialize)]
pub struct TraceAction {
    pub index: usize,
    pub action: String,
    pub origin: String,
}

/// `trace.json`.
#[derive(Serialize)]
pub struct Trace {
    /// Pattern name, or the platform name for an adaptation.
    pub pattern: String,
    pub goal: String,
    pub actions: Vec<TraceAction>,
    pub goal_result: bool,
}

impl Trace {
    pub fn new(pattern: &str, goal: String, c: &Cascade) -> Self {
        Trace {
            pattern: pattern.into(),
            goal,
            actions: c
                .trace
                .iter()
                .enumerate()
                .map(|(index, t)| TraceAction { index, action: format_action(&t.action), origin: t.origin.clone() })
                .collect(),
            goal_result: c.goal_result,
        }
    }
}

#[derive(Serialize)]
pub struct PlacementJson {
    pub component: String,
    pub node_class: String,
    pub slot: u32,
}

#[derive(Serialize)]
pub struct BindingJson {
    pub connector: String,
    pub protocol: String,
}

/// `deployment.json`.
#[derive(Serialize)]
pub struct Deployment {
    pub platform: String,
    pub placements: Vec<PlacementJson>,
    pub bindings: Vec<BindingJson>,
    pub unplaced: Vec<String>,
}

impl From<&DeploymentDescriptor> for Deployment {
    fn from(d: &DeploymentDescriptor) -> Self {
        Deployment {
            platform: d.platform.clone(),
            placements: d
                .placements
                .iter()
                .map(|p| PlacementJson { component: p.component.clone(), node_class: p.node_class.clone(), slot: p.slot })
                .collect(),
            bindings: d
                .bindings
                .iter()
                .map(|b| BindingJson { connector: b.connector.clone(), protocol: b.protocol.clone() })
                .collect(),
            unplaced: d.unplaced.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct StepJson {
    pub state: usize,
    pub label: String,
}

#[derive(Serialize)]
pub struct PathJson {
    pub steps: Vec<StepJson>,
    pub target: usize,
}

impl From<&Path> for PathJson {
    fn from(p: &Path) -> Self {
        PathJson {
            steps: p.steps.iter().map(|(s, l)| StepJson { state: *s, label: l.to_string() }).collect(),
            target: p.target,
        }
    }
}

#[derive(Serialize)]
pub struct ErrorJson {
    pub code: &'static str,
    pub message: String,
}

impl From<&AnalysisError> for ErrorJson {
    fn from(e: &AnalysisError) -> Self {
        ErrorJson { code: e.code(), message: e.to_string() }
    }
}

#[derive(Serialize)]
pub struct StatsJson {
    pub fixpoints: usize,
    pub iterations: usize,
    pub max_iterations: usize,
    pub monotone: bool,
}

impl From<&EvalStats> for StatsJson {
    fn from(s: &EvalStats) -> Self {
        StatsJson {
            fixpoints: s.fixpoints,
            iterations: s.iterations,
            max_iterations: s.max_iterations,
            monotone: s.monotone,
        }
    }
}

#[derive(Serialize)]
pub struct PropertyJson {
    pub name: String,
    pub holds: bool,
    pub witness: Option<PathJson>,
    pub error: Option<ErrorJson>,
    pub stats: Option<StatsJson>,
}

impl From<&PropertyOutcome> for PropertyJson {
    fn from(p: &PropertyOutcome) -> Self {
        PropertyJson {
            name: p.name.clone(),
            holds: p.holds,
            witness: p.witness.as_ref().map(Into::into),
            error: p.error.as_ref().map(Into::into),
            stats: p.stats.as_ref().map(Into::into),
        }
    }
}

/// `check --json` output.
#[derive(Serialize)]
pub struct Report {
    pub architecture: String,
    pub states: usize,
    pub transitions: usize,
    pub terminal_states: usize,
    pub all_hold: bool,
    pub properties: Vec<PropertyJson>,
}

impl From<&CheckReport> for Report {
    fn from(r: &CheckReport) -> Self {
        Report {
            architecture: r.architecture.clone(),
            states: r.states,
            transitions: r.transitions,
            terminal_states: r.terminal_states,
            all_hold: r.all_hold(),
            properties: r.properties.iter().map(Into::into).collect(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain structs serialize");
    s.push('\n');
    s
}
