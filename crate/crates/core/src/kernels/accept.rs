//! Acceptance criteria for uphill moves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// `|Q_a - 1|` below which the generalized rule uses its exponential limit.
pub const QA_LIMIT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptDecision {
    pub accepted: bool,
    pub probability: f64,
}

impl AcceptDecision {
    fn flip(probability: f64, rng: &mut RngStream) -> Self {
        Self {
            accepted: rng.uniform() < probability,
            probability,
        }
    }
}

/// `min(exp(-k diff / T), 1)`.
#[inline]
pub fn metropolis_probability(diff: f64, temperature: f64, k: f64) -> f64 {
    (-k * diff / temperature).exp().min(1.0)
}

pub fn metropolis_accept(diff: f64, temperature: f64, k: f64, rng: &mut RngStream) -> AcceptDecision {
    AcceptDecision::flip(metropolis_probability(diff, temperature, k), rng)
}

/// Fermi-Dirac occupancy `1 / (1 + exp(diff / T))`.
///
/// Evaluated as `q` or `1 - q` with `q = 1/(1 + exp(-|diff|/T)) >= 1/2`, so
/// `p(d) + p(-d) == 1` holds exactly.
#[inline]
pub fn fermi_probability(diff: f64, temperature: f64) -> f64 {
    let x = diff / temperature;
    let q = 1.0 / (1.0 + (-x.abs()).exp());
    if x > 0.0 {
        1.0 - q
    } else {
        q
    }
}

pub fn fermi_accept(diff: f64, temperature: f64, rng: &mut RngStream) -> AcceptDecision {
    AcceptDecision::flip(fermi_probability(diff, temperature), rng)
}

/// Generalized Metropolis rule with shape `q_a`.
///
/// With `u = 1 - (1 - q_a) diff / T`: the exponential rule near `q_a = 1`,
/// `min(1, u^(1/(1-q_a)))` for `u > 0`, and for `u <= 0` zero when `q_a < 1`
/// and one when `q_a > 1` (the capped power diverges there).
#[inline]
pub fn gsa_probability(diff: f64, temperature: f64, q_a: f64) -> f64 {
    if (q_a - 1.0).abs() < QA_LIMIT_EPS {
        return (-diff / temperature).exp().min(1.0);
    }
    let u = 1.0 - (1.0 - q_a) * diff / temperature;
    if u <= 0.0 {
        return if q_a < 1.0 { 0.0 } else { 1.0 };
    }
    u.powf(1.0 / (1.0 - q_a)).min(1.0)
}

pub fn gsa_accept(diff: f64, temperature: f64, q_a: f64, rng: &mut RngStream) -> AcceptDecision {
    AcceptDecision::flip(gsa_probability(diff, temperature, q_a), rng)
}

pub trait AcceptCriterion: Send {
    fn decide(&mut self, diff: f64, temperature: f64, rng: &mut RngStream) -> AcceptDecision;

    fn name(&self) -> &'static str;
}

#[derive(Debug, Clone, Copy)]
pub struct Metropolis {
    pub k: f64,
}

impl Default for Metropolis {
    fn default() -> Self {
        Self { k: 1.0 }
    }
}

impl AcceptCriterion for Metropolis {
    fn decide(&mut self, diff: f64, temperature: f64, rng: &mut RngStream) -> AcceptDecision {
        metropolis_accept(diff, temperature, self.k, rng)
    }

    fn name(&self) -> &'static str {
        "metropolis"
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Fermi;

impl AcceptCriterion for Fermi {
    fn decide(&mut self, diff: f64, temperature: f64, rng: &mut RngStream) -> AcceptDecision {
        fermi_accept(diff, temperature, rng)
    }

    fn name(&self) -> &'static str {
        "fermi"
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TsallisAccept {
    pub q_a: f64,
}

impl AcceptCriterion for TsallisAccept {
    fn decide(&mut self, diff: f64, temperature: f64, rng: &mut RngStream) -> AcceptDecision {
        gsa_accept(diff, temperature, self.q_a, rng)
    }

    fn name(&self) -> &'static str {
        "gsa"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccepterKind {
    Metropolis,
    Fermi,
    Gsa,
}

impl AccepterKind {
    pub const ALL: [AccepterKind; 3] = [AccepterKind::Metropolis, AccepterKind::Fermi, AccepterKind::Gsa];

    pub fn name(self) -> &'static str {
        match self {
            AccepterKind::Metropolis => "metropolis",
            AccepterKind::Fermi => "fermi",
            AccepterKind::Gsa => "gsa",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::UnknownName {
                kind: "accepter",
                name: name.to_string(),
            })
    }

    /// `q_a` is only read by the generalized rule.
    pub fn build(self, q_a: f64) -> Result<Box<dyn AcceptCriterion>> {
        Ok(match self {
            AccepterKind::Metropolis => Box::new(Metropolis::default()),
            AccepterKind::Fermi => Box::new(Fermi),
            AccepterKind::Gsa => {
                if !q_a.is_finite() {
                    return Err(Error::InvalidParameter(format!("q_a must be finite, got {q_a}")));
                }
                Box::new(TsallisAccept { q_a })
            }
        })
    }
}
