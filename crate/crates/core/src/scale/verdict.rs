use super::ScaleElement;

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Decided on the posynomial normal form.
    Symbolic,
    /// Decided by sampling the tail only.
    Numeric,
}

/// Three-valued outcome of an eventual-domination question.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<T> {
    Holds(Certificate<T>),
    Fails(Refutation<T>),
    Unknown(Budget<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<T> {
    /// Dominating element (the right-hand side, or the frontier witness).
    pub witness: Option<ScaleElement>,
    /// Largest schedule λ from which the inequality holds at every later
    /// schedule point.
    pub threshold: T,
    pub evidence: Evidence,
    /// For ideal membership: the depth `D` up to which `|a| ≪ g1^n` was certified.
    pub degree: Option<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Refutation<T> {
    /// Tail points violating the inequality.
    pub counterexamples: Vec<T>,
    pub evidence: Evidence,
    /// For ideal membership: the first power `n` with `|a| ≪ g1^n` refuted.
    pub power: Option<u32>,
}

/// Search exhausted without a decision.
#[derive(Clone, Debug, PartialEq)]
pub struct Budget<T> {
    pub degree: u32,
    pub reason: String,
    /// Tail points refuting the largest candidate tried.
    pub counterexamples: Vec<T>,
}

impl<T> Verdict<T> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn certificate(&self) -> Option<&Certificate<T>> {
        match self {
            Verdict::Holds(c) => Some(c),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&ScaleElement> {
        self.certificate().and_then(|c| c.witness.as_ref())
    }

    pub fn evidence(&self) -> Option<Evidence> {
        match self {
            Verdict::Holds(c) => Some(c.evidence),
            Verdict::Fails(r) => Some(r.evidence),
            Verdict::Unknown(_) => None,
        }
    }

    /// Short tag: `holds`, `fails` or `unknown`.
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Holds(_) => "holds",
            Verdict::Fails(_) => "fails",
            Verdict::Unknown(_) => "unknown",
        }
    }
}
