use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Transition label of a derived LTS. Ports are qualified by component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Tau,
    Send { component: String, port: String },
    Receive { component: String, port: String },
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Tau => f.write_str("tau"),
            Label::Send { component, port } => write!(f, "{component}.{port}!"),
            Label::Receive { component, port } => write!(f, "{component}.{port}?"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelPattern {
    Any,
    Exact(Label),
}

impl LabelPattern {
    pub fn matches(&self, label: &Label) -> bool {
        match self {
            LabelPattern::Any => true,
            LabelPattern::Exact(l) => l == label,
        }
    }
}

impl fmt::Display for LabelPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelPattern::Any => f.write_str("*"),
            LabelPattern::Exact(l) => l.fmt(f),
        }
    }
}

/// Negation-free modal mu-calculus formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MuFormula {
    True,
    False,
    And(Box<MuFormula>, Box<MuFormula>),
    Or(Box<MuFormula>, Box<MuFormula>),
    Diamond(LabelPattern, Box<MuFormula>),
    Box(LabelPattern, Box<MuFormula>),
    Var(String),
    Mu(String, Box<MuFormula>),
    Nu(String, Box<MuFormula>),
}

impl MuFormula {
    pub fn and(a: MuFormula, b: MuFormula) -> Self {
        MuFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: MuFormula, b: MuFormula) -> Self {
        MuFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn diamond(l: LabelPattern, f: MuFormula) -> Self {
        MuFormula::Diamond(l, Box::new(f))
    }

    pub fn boxed(l: LabelPattern, f: MuFormula) -> Self {
        MuFormula::Box(l, Box::new(f))
    }

    pub fn var(n: impl Into<String>) -> Self {
        MuFormula::Var(n.into())
    }

    pub fn mu(n: impl Into<String>, f: MuFormula) -> Self {
        MuFormula::Mu(n.into(), Box::new(f))
    }

    pub fn nu(n: impl Into<String>, f: MuFormula) -> Self {
        MuFormula::Nu(n.into(), Box::new(f))
    }

    /// Variables occurring free, sorted.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            MuFormula::True | MuFormula::False => {}
            MuFormula::And(a, b) | MuFormula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            MuFormula::Diamond(_, f) | MuFormula::Box(_, f) => f.collect_free(bound, out),
            MuFormula::Var(v) => {
                if !bound.contains(&v.as_str()) {
                    out.insert(v.clone());
                }
            }
            MuFormula::Mu(v, f) | MuFormula::Nu(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// The De Morgan dual: swaps True/False, And/Or, Diamond/Box and Mu/Nu.
    /// For a closed formula the dual denotes the complement set.
    pub fn dual(&self) -> MuFormula {
        match self {
            MuFormula::True => MuFormula::False,
            MuFormula::False => MuFormula::True,
            MuFormula::And(a, b) => MuFormula::or(a.dual(), b.dual()),
            MuFormula::Or(a, b) => MuFormula::and(a.dual(), b.dual()),
            MuFormula::Diamond(l, f) => MuFormula::boxed(l.clone(), f.dual()),
            MuFormula::Box(l, f) => MuFormula::diamond(l.clone(), f.dual()),
            MuFormula::Var(v) => MuFormula::Var(v.clone()),
            MuFormula::Mu(v, f) => MuFormula::nu(v.clone(), f.dual()),
            MuFormula::Nu(v, f) => MuFormula::mu(v.clone(), f.dual()),
        }
    }

    /// Maximum nesting of fixpoint binders.
    pub fn fixpoint_depth(&self) -> usize {
        match self {
            MuFormula::True | MuFormula::False | MuFormula::Var(_) => 0,
            MuFormula::And(a, b) | MuFormula::Or(a, b) => a.fixpoint_depth().max(b.fixpoint_depth()),
            MuFormula::Diamond(_, f) | MuFormula::Box(_, f) => f.fixpoint_depth(),
            MuFormula::Mu(_, f) | MuFormula::Nu(_, f) => 1 + f.fixpoint_depth(),
        }
    }

    pub fn labels(&self) -> Vec<&Label> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels<'a>(&'a self, out: &mut Vec<&'a Label>) {
        match self {
            MuFormula::True | MuFormula::False | MuFormula::Var(_) => {}
            MuFormula::And(a, b) | MuFormula::Or(a, b) => {
                a.collect_labels(out);
                b.collect_labels(out);
            }
            MuFormula::Diamond(l, f) | MuFormula::Box(l, f) => {
                if let LabelPattern::Exact(l) = l {
                    out.push(l);
                }
                f.collect_labels(out);
            }
            MuFormula::Mu(_, f) | MuFormula::Nu(_, f) => f.collect_labels(out),
        }
    }

    pub fn bound_vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            MuFormula::True | MuFormula::False | MuFormula::Var(_) => {}
            MuFormula::And(a, b) | MuFormula::Or(a, b) => {
                a.collect_bound(out);
                b.collect_bound(out);
            }
            MuFormula::Diamond(_, f) | MuFormula::Box(_, f) => f.collect_bound(out),
            MuFormula::Mu(v, f) | MuFormula::Nu(v, f) => {
                out.push(v);
                f.collect_bound(out);
            }
        }
    }
}
