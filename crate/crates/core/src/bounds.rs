//! Box constraints with slack.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Default tolerance applied by [`Bounds::check`].
pub const DEFAULT_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    low: Vec<f64>,
    high: Vec<f64>,
    slack: f64,
}

impl Bounds {
    pub fn new(low: Vec<f64>, high: Vec<f64>) -> Result<Self> {
        Self::with_slack(low, high, DEFAULT_SLACK)
    }

    pub fn with_slack(low: Vec<f64>, high: Vec<f64>, slack: f64) -> Result<Self> {
        if low.is_empty() {
            return Err(Error::InvalidBounds("zero dimensions".into()));
        }
        if low.len() != high.len() {
            return Err(Error::InvalidBounds(format!(
                "{} lower bounds but {} upper bounds",
                low.len(),
                high.len()
            )));
        }
        if let Some(i) = (0..low.len()).find(|&i| !(low[i] < high[i])) {
            return Err(Error::InvalidBounds(format!(
                "low[{i}] = {} is not below high[{i}] = {}",
                low[i], high[i]
            )));
        }
        if !(slack >= 0.0) {
            return Err(Error::InvalidBounds(format!("negative slack {slack}")));
        }
        Ok(Self { low, high, slack })
    }

    /// The cube `[low, high]^dims`.
    pub fn uniform(dims: usize, low: f64, high: f64) -> Result<Self> {
        Self::new(vec![low; dims], vec![high; dims])
    }

    pub fn dims(&self) -> usize {
        self.low.len()
    }

    pub fn low(&self) -> &[f64] {
        &self.low
    }

    pub fn high(&self) -> &[f64] {
        &self.high
    }

    pub fn slack(&self) -> f64 {
        self.slack
    }

    /// True iff every coordinate lies strictly inside the slack-extended box.
    #[inline]
    pub fn contains(&self, pos: &[f64]) -> bool {
        pos.len() == self.dims()
            && pos
                .iter()
                .zip(self.low.iter().zip(&self.high))
                .all(|(&x, (&lo, &hi))| x > lo - self.slack && x < hi + self.slack)
    }

    pub fn check(&self, pos: &[f64]) -> Result<()> {
        if pos.len() != self.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                got: pos.len(),
            });
        }
        if self.contains(pos) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                pos: pos.to_vec(),
                low: self.low.clone(),
                high: self.high.clone(),
                slack: self.slack,
            })
        }
    }

    /// Uniform point in `[low, high)`.
    pub fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dims());
        self.sample_into(rng, &mut out);
        out
    }

    pub fn sample_into(&self, rng: &mut RngStream, out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            self.low
                .iter()
                .zip(&self.high)
                .map(|(&lo, &hi)| rng.uniform_in(lo, hi)),
        );
    }

    /// Componentwise clamp into `[low, high]`.
    pub fn clip(&self, pos: &[f64]) -> Vec<f64> {
        pos.iter()
            .zip(self.low.iter().zip(&self.high))
            .map(|(&x, (&lo, &hi))| x.max(lo).min(hi))
            .collect()
    }
}
