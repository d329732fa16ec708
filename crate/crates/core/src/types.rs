use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A position paired with its objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub pos: Vec<f64>,
    pub val: f64,
}

impl EvalPoint {
    pub fn new(pos: Vec<f64>, val: f64) -> Self {
        Self { pos, val }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunLimits {
    pub max_epochs: u64,
    pub steps_per_epoch: u64,
}

impl RunLimits {
    pub fn new(max_epochs: u64, steps_per_epoch: u64) -> Result<Self> {
        let limits = Self {
            max_epochs,
            steps_per_epoch,
        };
        limits.validate()?;
        Ok(limits)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_epochs == 0 || self.steps_per_epoch == 0 {
            return Err(Error::InvalidParameter(format!(
                "run limits must be positive, got {self:?}"
            )));
        }
        Ok(())
    }
}

impl Default for RunLimits {
    fn default() -> Self {
        Self {
            max_epochs: 1_000_000,
            steps_per_epoch: 1_000,
        }
    }
}

/// Outcome of one proposal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// Candidate was no worse than the current state.
    AcceptImprove,
    /// Uphill candidate accepted by the acceptance kernel's coin flip.
    AcceptRandom,
    Reject,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::AcceptImprove => "accept_improve",
            Decision::AcceptRandom => "accept_random",
            Decision::Reject => "reject",
        }
    }

    pub fn is_accept(self) -> bool {
        !matches!(self, Decision::Reject)
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Decision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accept_improve" => Ok(Decision::AcceptImprove),
            "accept_random" => Ok(Decision::AcceptRandom),
            "reject" => Ok(Decision::Reject),
            _ => Err(Error::UnknownName {
                kind: "decision",
                name: s.to_string(),
            }),
        }
    }
}

/// One proposal in a run's history.
///
/// `chain` is always 0 for the quench engine. `best_val` is the global best
/// so far, so it never exceeds any `current_val` recorded before it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub epoch: u64,
    pub step: u64,
    pub chain: u32,
    pub temperature: f64,
    pub candidate: EvalPoint,
    pub decision: Decision,
    pub current_val: f64,
    pub best_val: f64,
}

/// Per-epoch bookkeeping shared by both engines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochSummary {
    pub epoch: u64,
    pub temperature: f64,
    pub steps: u64,
    /// Best point found during this epoch (chain engine) or global best at
    /// the end of it (quench engine).
    pub best: EvalPoint,
    /// Gelman-Rubin statistic over chain objective values, when `n_chains >= 2`.
    pub rhat: Option<f64>,
    /// Smallest per-chain effective sample size of objective values.
    pub ess: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best: EvalPoint,
    pub trace: Vec<StepRecord>,
    pub epochs: Vec<EpochSummary>,
    pub acceptances: u64,
    pub rejections: u64,
    pub samestate_time: u64,
    pub fcalls: u64,
    pub converged: bool,
    pub epochs_run: u64,
}

impl RunResult {
    pub fn steps(&self) -> u64 {
        self.acceptances + self.rejections
    }
}
