//! Behavioral checking over the labelled transition system derived from an
//! architecture's composed behaviors.
//!
//! Components interleave. A connector turns a send on one of its ends and a
//! matching receive on the other end into a single `tau` step; ports with a
//! connector never fire alone. Unattached ports fire alone with visible
//! labels.

mod lts;
mod mu;

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{Architecture, Diagnostics, Label, MuFormula, PropertyCheck, PropertySpec};

pub use lts::{derive_lts, Lts, Transition};
pub use mu::{eval_mu, EvalStats, MuResult};

/// Upper bound on the number of states [`derive_lts`] may create.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateCap(usize);

impl StateCap {
    pub const DEFAULT: usize = 100_000;

    /// `None` if `max_states` is zero.
    pub fn new(max_states: usize) -> Option<Self> {
        (max_states >= 1).then_some(StateCap(max_states))
    }

    pub fn max_states(self) -> usize {
        self.0
    }
}

impl Default for StateCap {
    fn default() -> Self {
        StateCap(Self::DEFAULT)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    IllFormed(Diagnostics),
    StateSpaceExceeded { cap: usize, reached: usize },
    /// The formula has this free variable.
    OpenFormula(String),
}

impl AnalysisError {
    pub fn code(&self) -> &'static str {
        match self {
            AnalysisError::IllFormed(_) => "ILL_FORMED",
            AnalysisError::StateSpaceExceeded { .. } => "STATE_SPACE_EXCEEDED",
            AnalysisError::OpenFormula(_) => "OPEN_FORMULA",
        }
    }
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::IllFormed(d) => write!(f, "[ILL_FORMED] model is ill-formed:\n{d}"),
            AnalysisError::StateSpaceExceeded { cap, reached } => {
                write!(f, "[STATE_SPACE_EXCEEDED] state space exceeds the cap of {cap} states ({reached} reached)")
            }
            AnalysisError::OpenFormula(v) => write!(f, "[OPEN_FORMULA] variable `{v}` is not bound"),
        }
    }
}

impl core::error::Error for AnalysisError {}

/// A run from the initial state: each step is a state and the label taken
/// from it; `target` is where the run ends.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Path {
    pub steps: Vec<(usize, Label)>,
    pub target: usize,
}

impl Path {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// `None` if no reachable state is a deadlock (no outgoing transitions and
/// not terminal success); otherwise a shortest path to one.
pub fn check_deadlock_free(lts: &Lts) -> Option<Path> {
    let n = lts.num_states();
    let mut parent: Vec<Option<(usize, &Label)>> = alloc::vec![None; n];
    let mut seen = alloc::vec![false; n];
    let mut queue = VecDeque::from([lts.initial()]);
    seen[lts.initial()] = true;
    while let Some(s) = queue.pop_front() {
        if lts.outgoing(s).is_empty() && !lts.terminal_success().contains(&s) {
            let mut steps = Vec::new();
            let mut cur = s;
            while let Some((p, l)) = parent[cur] {
                steps.push((p, l.clone()));
                cur = p;
            }
            steps.reverse();
            return Some(Path { steps, target: s });
        }
        for t in lts.outgoing(s) {
            if !seen[t.target] {
                seen[t.target] = true;
                parent[t.target] = Some((s, &t.label));
                queue.push_back(t.target);
            }
        }
    }
    None
}

/// Follows the leading chain of diamonds of a formula that holds at `from`.
fn diamond_witness(lts: &Lts, f: &MuFormula, from: usize) -> Option<Path> {
    let mut steps = Vec::new();
    let mut cur = from;
    let mut f = f;
    while let MuFormula::Diamond(l, g) = f {
        let sat = eval_mu(lts, g).ok()?;
        let t = lts.outgoing(cur).iter().find(|t| l.matches(&t.label) && sat.contains(t.target))?;
        steps.push((cur, t.label.clone()));
        cur = t.target;
        f = g;
    }
    (!steps.is_empty()).then_some(Path { steps, target: cur })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub name: String,
    pub holds: bool,
    /// Deadlock counterexample, or the diamond chain of a formula that holds.
    pub witness: Option<Path>,
    /// Set when the property could not be evaluated; `holds` is then false.
    pub error: Option<AnalysisError>,
    pub stats: Option<EvalStats>,
}

/// Result of checking every declared property of one architecture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub architecture: String,
    pub states: usize,
    pub transitions: usize,
    pub terminal_states: usize,
    pub properties: Vec<PropertyOutcome>,
}

impl CheckReport {
    pub fn all_hold(&self) -> bool {
        self.properties.iter().all(|p| p.holds)
    }
}

/// Evaluates one property on an already derived LTS.
pub fn evaluate_property(lts: &Lts, spec: &PropertySpec) -> PropertyOutcome {
    let name = spec.name.clone();
    match &spec.check {
        PropertyCheck::DeadlockFree => {
            let witness = check_deadlock_free(lts);
            PropertyOutcome { name, holds: witness.is_none(), witness, error: None, stats: None }
        }
        PropertyCheck::Formula(f) => match eval_mu(lts, f) {
            Ok(r) => {
                let holds = r.contains(lts.initial());
                let witness = if holds { diamond_witness(lts, f, lts.initial()) } else { None };
                PropertyOutcome { name, holds, witness, error: None, stats: Some(r.stats) }
            }
            Err(e) => PropertyOutcome { name, holds: false, witness: None, error: Some(e), stats: None },
        },
    }
}

/// Derives the LTS of `arch` and evaluates `spec` on it.
pub fn check_property(arch: &Architecture, spec: &PropertySpec, cap: StateCap) -> Result<PropertyOutcome, AnalysisError> {
    let lts = derive_lts(arch, cap)?;
    Ok(evaluate_property(&lts, spec))
}

/// Derives the LTS once and evaluates every declared property. A property
/// that cannot be evaluated is reported as failing with its error; the state
/// cap aborts the whole check.
pub fn check_architecture(arch: &Architecture, cap: StateCap) -> Result<CheckReport, AnalysisError> {
    let lts = derive_lts(arch, cap)?;
    Ok(CheckReport {
        architecture: arch.name.clone(),
        states: lts.num_states(),
        transitions: lts.transitions().len(),
        terminal_states: lts.terminal_success().len(),
        properties: arch.properties.iter().map(|p| evaluate_property(&lts, p)).collect(),
    })
}
