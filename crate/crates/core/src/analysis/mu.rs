use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{AnalysisError, Lts};
use crate::model::MuFormula;

/// Counters collected while evaluating fixpoints.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvalStats {
    /// Number of fixpoint computations started (inner ones count every time).
    pub fixpoints: usize,
    /// Total iterations that changed an iterate, over all fixpoints.
    pub iterations: usize,
    /// Most changing iterations any single fixpoint needed before it
    /// stabilised. Never exceeds the number of states.
    pub max_iterations: usize,
    /// Every iterate sequence was increasing (mu) or decreasing (nu).
    pub monotone: bool,
}

/// States satisfying a formula, plus evaluation statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuResult {
    pub sat: Vec<bool>,
    pub stats: EvalStats,
}

impl MuResult {
    pub fn contains(&self, s: usize) -> bool {
        self.sat.get(s).copied().unwrap_or(false)
    }

    pub fn states(&self) -> Vec<usize> {
        self.sat.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect()
    }
}

struct Eval<'a> {
    lts: &'a Lts,
    env: BTreeMap<String, Vec<bool>>,
    stats: EvalStats,
}

fn subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(x, y)| !*x || *y)
}

impl Eval<'_> {
    fn eval(&mut self, f: &MuFormula) -> Vec<bool> {
        let n = self.lts.num_states();
        match f {
            MuFormula::True => alloc::vec![true; n],
            MuFormula::False => alloc::vec![false; n],
            MuFormula::And(a, b) => {
                let (x, y) = (self.eval(a), self.eval(b));
                x.iter().zip(&y).map(|(p, q)| *p && *q).collect()
            }
            MuFormula::Or(a, b) => {
                let (x, y) = (self.eval(a), self.eval(b));
                x.iter().zip(&y).map(|(p, q)| *p || *q).collect()
            }
            MuFormula::Diamond(l, g) => {
                let inner = self.eval(g);
                (0..n).map(|s| self.lts.outgoing(s).iter().any(|t| l.matches(&t.label) && inner[t.target])).collect()
            }
            MuFormula::Box(l, g) => {
                let inner = self.eval(g);
                (0..n).map(|s| self.lts.outgoing(s).iter().all(|t| !l.matches(&t.label) || inner[t.target])).collect()
            }
            MuFormula::Var(v) => self.env.get(v).cloned().unwrap_or_else(|| alloc::vec![false; n]),
            MuFormula::Mu(v, g) => self.fixpoint(v, g, false),
            MuFormula::Nu(v, g) => self.fixpoint(v, g, true),
        }
    }

    fn fixpoint(&mut self, v: &str, body: &MuFormula, greatest: bool) -> Vec<bool> {
        let n = self.lts.num_states();
        let saved = self.env.remove(v);
        let mut cur = alloc::vec![greatest; n];
        let mut rounds = 0;
        self.stats.fixpoints += 1;
        loop {
            self.env.insert(String::from(v), cur.clone());
            let next = self.eval(body);
            let ordered = if greatest { subset(&next, &cur) } else { subset(&cur, &next) };
            self.stats.monotone &= ordered;
            if next == cur {
                break;
            }
            rounds += 1;
            cur = next;
        }
        self.stats.iterations += rounds;
        self.stats.max_iterations = self.stats.max_iterations.max(rounds);
        match saved {
            Some(s) => self.env.insert(String::from(v), s),
            None => self.env.remove(v),
        };
        cur
    }
}

/// Naive Kleene evaluation of a closed formula. A least fixpoint starts from
/// the empty set and a greatest one from all states.
pub fn eval_mu(lts: &Lts, f: &MuFormula) -> Result<MuResult, AnalysisError> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(AnalysisError::OpenFormula(v));
    }
    let mut e = Eval { lts, env: BTreeMap::new(), stats: EvalStats { monotone: true, ..EvalStats::default() } };
    let sat = e.eval(f);
    Ok(MuResult { sat, stats: e.stats })
}
