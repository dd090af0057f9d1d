use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome class of a command; decides the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    HypothesisFailed,
    Inconclusive,
    /// A bounded check found a definite counterexample.
    Refuted,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::HypothesisFailed => 2,
            Status::Inconclusive => 3,
            Status::Refuted => 4,
        }
    }

    /// The worse of two statuses.
    pub fn join(self, other: Status) -> Status {
        match (self, other) {
            (Status::HypothesisFailed, _) | (_, Status::HypothesisFailed) => Status::HypothesisFailed,
            (Status::Refuted, _) | (_, Status::Refuted) => Status::Refuted,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Ok,
        }
    }
}

/// Reasons a command stops before producing outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// Malformed flags, expressions or files.
    Usage(String),
    /// A hypothesis of the requested formula does not hold for this input.
    Hypothesis(String),
    Io(String),
}

impl Failure {
    pub fn usage(e: impl fmt::Display) -> Self {
        Failure::Usage(e.to_string())
    }

    pub fn hypothesis(e: impl fmt::Display) -> Self {
        Failure::Hypothesis(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Hypothesis(_) => 2,
            Failure::Usage(_) | Failure::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Hypothesis(m) => write!(f, "hypothesis not satisfied: {m}"),
            Failure::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}
