//! Cooling schedules: pure maps from a step index to a temperature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `|q_v - 1|` below which the Tsallis schedule uses its `q_v -> 1` limit.
pub const QV_LIMIT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleParams {
    pub t_init: f64,
    pub c_param: f64,
    /// Reference step of the logarithmic schedule; `T(k0) = t_init`.
    pub k0: u64,
    pub q_v: f64,
}

impl ScheduleParams {
    pub fn new(t_init: f64) -> Result<Self> {
        let p = Self {
            t_init,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_init > 0.0 && self.t_init.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "T_init must be positive, got {}",
                self.t_init
            )));
        }
        if !(self.c_param > 0.0 && self.c_param.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "c_param must be positive, got {}",
                self.c_param
            )));
        }
        if self.k0 < 2 {
            return Err(Error::InvalidParameter(format!(
                "k0 must be at least 2, got {}",
                self.k0
            )));
        }
        if !(self.q_v >= 1.0 && self.q_v < 3.0) {
            return Err(Error::InvalidParameter(format!(
                "q_v must lie in [1, 3), got {}",
                self.q_v
            )));
        }
        Ok(())
    }
}

impl Default for ScheduleParams {
    fn default() -> Self {
        Self {
            t_init: 1.0,
            c_param: 1.0,
            k0: 2,
            q_v: 1.0,
        }
    }
}

/// `c * T_init / (1 + ln(epoch))`.
pub fn boltzmann_cooling(p: &ScheduleParams, epoch: u64) -> Result<f64> {
    if epoch < 1 {
        return Err(Error::Domain(format!("epoch must be >= 1, got {epoch}")));
    }
    Ok(p.c_param * p.t_init / (1.0 + (epoch as f64).ln()))
}

/// `T_init * ln(k0) / ln(k)`.
pub fn logarithmic_cooling(p: &ScheduleParams, k: u64) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(format!("step must be >= 2, got {k}")));
    }
    if p.k0 < 2 {
        return Err(Error::Domain(format!("k0 must be >= 2, got {}", p.k0)));
    }
    Ok(p.t_init * (p.k0 as f64).ln() / (k as f64).ln())
}

/// `T_init * (2^(q_v-1) - 1) / ((1+t)^(q_v-1) - 1)`, with the analytic
/// `T_init * ln 2 / ln(1+t)` at `q_v = 1`.
pub fn tsallis_cooling(p: &ScheduleParams, t: u64) -> Result<f64> {
    if t < 1 {
        return Err(Error::Domain(format!("step must be >= 1, got {t}")));
    }
    if p.q_v < 1.0 {
        return Err(Error::Domain(format!("q_v must be >= 1, got {}", p.q_v)));
    }
    let s = p.q_v - 1.0;
    let ln_2 = std::f64::consts::LN_2;
    let ln_t = (t as f64).ln_1p();
    if s.abs() < QV_LIMIT_EPS {
        return Ok(p.t_init * ln_2 / ln_t);
    }
    // expm1 keeps both differences accurate as q_v approaches 1
    Ok(p.t_init * (s * ln_2).exp_m1() / (s * ln_t).exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoolerKind {
    Boltzmann,
    Logarithmic,
    Tsallis,
}

impl CoolerKind {
    pub const ALL: [CoolerKind; 3] = [
        CoolerKind::Boltzmann,
        CoolerKind::Logarithmic,
        CoolerKind::Tsallis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoolerKind::Boltzmann => "boltzmann",
            CoolerKind::Logarithmic => "logarithmic",
            CoolerKind::Tsallis => "tsallis",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::UnknownName {
                kind: "cooler",
                name: name.to_string(),
            })
    }

    /// First valid step index.
    pub fn first_step(self) -> u64 {
        match self {
            CoolerKind::Logarithmic => 2,
            _ => 1,
        }
    }
}

pub trait CoolingSchedule: Send + Sync {
    fn temperature(&self, step: u64) -> Result<f64>;

    fn name(&self) -> &'static str;

    fn t_init(&self) -> f64;
}

/// One of the built-in schedules with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cooler {
    pub kind: CoolerKind,
    pub params: ScheduleParams,
}

impl Cooler {
    pub fn new(kind: CoolerKind, params: ScheduleParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { kind, params })
    }

    pub fn boltzmann(t_init: f64) -> Result<Self> {
        Self::new(CoolerKind::Boltzmann, ScheduleParams::new(t_init)?)
    }
}

impl CoolingSchedule for Cooler {
    fn temperature(&self, step: u64) -> Result<f64> {
        match self.kind {
            CoolerKind::Boltzmann => boltzmann_cooling(&self.params, step),
            CoolerKind::Logarithmic => {
                // the engines count from 1; offset so epoch 1 maps to k0
                logarithmic_cooling(&self.params, step + self.params.k0 - 1)
            }
            CoolerKind::Tsallis => tsallis_cooling(&self.params, step),
        }
    }

    fn name(&self) -> &'static str {
        self.kind.name()
    }

    fn t_init(&self) -> f64 {
        self.params.t_init
    }
}
