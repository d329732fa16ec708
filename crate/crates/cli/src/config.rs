//! Experiment configuration: the JSON file schema, flag overrides and the
//! resolved plan the runner executes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anneal_core::chain::{ChainConfig, NormalProposal, MH_N_SIM};
use anneal_core::kernels::{AccepterKind, VisitorKind};
use anneal_core::{
    preset_boltzmann, preset_fsa, preset_gsa, Cooler, CoolerKind, ObjectiveSpec, Preset, QuencherConfig,
    Registry, RunLimits, ScheduleParams,
};
use serde::{Deserialize, Serialize};

pub const DEFAULT_OUT_DIR: &str = "runs";
pub const DEFAULT_OBJECTIVE: &str = "styblinski_tang_2d";
pub const QUENCH_T_INIT: f64 = 5.0;
pub const CHAIN_T_INIT: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Quench,
    Chain,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Quench => "quench",
            Engine::Chain => "chain",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObjectiveConfig {
    pub name: Option<String>,
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LimitsConfig {
    pub max_epochs: Option<u64>,
    pub steps_per_epoch: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuenchSection {
    /// Component names; only read by the `custom` preset.
    pub cooler: Option<String>,
    pub accepter: Option<String>,
    pub visitor: Option<String>,
    pub q_v: Option<f64>,
    pub q_a: Option<f64>,
    pub c_param: Option<f64>,
    pub k0: Option<u64>,
    pub temp_floor: Option<f64>,
    pub init_pos: Option<Vec<f64>>,
    pub convergence_rtol: Option<f64>,
    pub trace_stride: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChainSection {
    pub cooler: Option<String>,
    pub q_v: Option<f64>,
    pub c_param: Option<f64>,
    pub k0: Option<u64>,
    pub n_sim: Option<u64>,
    pub n_chains: Option<usize>,
    pub proposal_scale: Option<f64>,
    pub temp_floor: Option<f64>,
    pub rhat_threshold: Option<f64>,
    pub init_state: Option<Vec<f64>>,
    pub convergence_rtol: Option<f64>,
    pub trace_stride: Option<u64>,
}

/// The config file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub objective: ObjectiveConfig,
    pub engine: Option<Engine>,
    pub preset: Option<Preset>,
    pub t_init: Option<f64>,
    pub seeds: Vec<u64>,
    pub limits: LimitsConfig,
    pub output_dir: Option<PathBuf>,
    pub quench: QuenchSection,
    pub chain: ChainSection,
}

impl FromStr for ExperimentConfig {
    type Err = serde_json::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_str(s)
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub objective: Option<String>,
    pub seeds: Vec<u64>,
    pub out: Option<PathBuf>,
    pub engine: Option<Engine>,
    pub preset: Option<Preset>,
    pub q_v: Option<f64>,
    pub q_a: Option<f64>,
    pub t_init: Option<f64>,
    pub max_epochs: Option<u64>,
    pub steps: Option<u64>,
    pub n_sim: Option<u64>,
    pub n_chains: Option<usize>,
    pub trace_stride: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<anneal_core::Error> for ConfigError {
    fn from(e: anneal_core::Error) -> Self {
        ConfigError(e.to_string())
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub objective: String,
    pub objective_params: BTreeMap<String, f64>,
    pub engine: Engine,
    pub preset: Preset,
    pub t_init: f64,
    pub seeds: Vec<u64>,
    pub limits: RunLimits,
    pub out_dir: PathBuf,
    pub quench: QuenchSection,
    pub chain: ChainSection,
}

fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

impl Plan {
    /// Merge flag > file > default. `env_seed` is the default seed list.
    pub fn resolve(file: ExperimentConfig, flags: &Overrides, env_seed: Option<u64>) -> Result<Self, ConfigError> {
        let engine = pick(flags.engine, file.engine).unwrap_or(Engine::Quench);
        let preset = pick(flags.preset, file.preset).unwrap_or(Preset::Bsa);
        let t_init = pick(flags.t_init, file.t_init).unwrap_or(match engine {
            Engine::Quench => QUENCH_T_INIT,
            Engine::Chain => CHAIN_T_INIT,
        });
        let seeds = if !flags.seeds.is_empty() {
            flags.seeds.clone()
        } else if !file.seeds.is_empty() {
            file.seeds
        } else {
            vec![env_seed.unwrap_or(0)]
        };
        let defaults = RunLimits::default();
        let limits = RunLimits::new(
            pick(flags.max_epochs, file.limits.max_epochs).unwrap_or(defaults.max_epochs),
            pick(flags.steps, file.limits.steps_per_epoch).unwrap_or(defaults.steps_per_epoch),
        )?;

        let mut quench = file.quench;
        quench.q_v = pick(flags.q_v, quench.q_v);
        quench.q_a = pick(flags.q_a, quench.q_a);
        quench.trace_stride = pick(flags.trace_stride, quench.trace_stride);
        let mut chain = file.chain;
        chain.n_sim = pick(flags.n_sim, chain.n_sim);
        chain.n_chains = pick(flags.n_chains, chain.n_chains);
        chain.trace_stride = pick(flags.trace_stride, chain.trace_stride);

        if preset != Preset::Custom && [&quench.cooler, &quench.accepter, &quench.visitor].iter().any(|c| c.is_some()) {
            return Err(ConfigError(format!(
                "quench.cooler/accepter/visitor are only read by the custom preset, not {}",
                preset.name()
            )));
        }

        let plan = Self {
            objective: pick(flags.objective.clone(), file.objective.name).unwrap_or_else(|| DEFAULT_OBJECTIVE.into()),
            objective_params: file.objective.params,
            engine,
            preset,
            t_init,
            seeds,
            limits,
            out_dir: pick(flags.out.clone(), file.output_dir).unwrap_or_else(|| DEFAULT_OUT_DIR.into()),
            quench,
            chain,
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Build and validate the engine config of every seed.
    pub fn validate(&self) -> Result<(), ConfigError> {
        for &seed in &self.seeds {
            match self.engine {
                Engine::Quench => self.quencher(seed)?.validate()?,
                Engine::Chain => self.chain_config(seed)?.validate()?,
            }
        }
        Ok(())
    }

    pub fn build_objective(&self) -> anneal_core::Result<ObjectiveSpec> {
        Registry::with_builtins().build(&self.objective, &self.objective_params)
    }

    /// Preset label written to summaries and run ids.
    pub fn preset_label(&self) -> &'static str {
        match self.engine {
            Engine::Quench => self.preset.name(),
            Engine::Chain => "mh",
        }
    }

    pub fn run_id(&self, seed: u64) -> String {
        format!("{}-{}-{}-s{seed}", self.objective, self.engine.name(), self.preset_label())
    }

    pub fn quencher(&self, seed: u64) -> anneal_core::Result<QuencherConfig> {
        let q = &self.quench;
        let objective = self.build_objective()?;
        let q_v = q.q_v.unwrap_or(1.0);
        let q_a = q.q_a.unwrap_or(1.0);
        let mut cfg = match self.preset {
            Preset::Bsa => preset_boltzmann(objective, self.t_init, None, None, seed)?,
            Preset::Fsa => preset_fsa(objective, self.t_init, seed)?,
            Preset::Gsa => preset_gsa(objective, self.t_init, q_v, q_a, seed)?,
            Preset::Custom => {
                let kind = CoolerKind::from_name(q.cooler.as_deref().unwrap_or("boltzmann"))?;
                let cooler = Cooler::new(kind, self.schedule_params(q.c_param, q.k0, q_v))?;
                let accepter = AccepterKind::from_name(q.accepter.as_deref().unwrap_or("metropolis"))?.build(q_a)?;
                let neighbor =
                    VisitorKind::from_name(q.visitor.as_deref().unwrap_or("normal_projected"))?.build(q_v)?;
                QuencherConfig::new(objective, neighbor, accepter, Box::new(cooler), seed)
            }
        };
        cfg.limits = self.limits;
        cfg.init_pos = q.init_pos.clone();
        if let Some(v) = q.temp_floor {
            cfg.temp_floor = v;
        }
        if let Some(v) = q.convergence_rtol {
            cfg.convergence_rtol = v;
        }
        if let Some(v) = q.trace_stride {
            cfg.trace_stride = v;
        }
        Ok(cfg)
    }

    pub fn chain_config(&self, seed: u64) -> anneal_core::Result<ChainConfig> {
        let c = &self.chain;
        let kind = CoolerKind::from_name(c.cooler.as_deref().unwrap_or("boltzmann"))?;
        let cooler = Cooler::new(kind, self.schedule_params(c.c_param, c.k0, c.q_v.unwrap_or(1.0)))?;
        let scale = c.proposal_scale.unwrap_or(1.0);
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(anneal_core::Error::InvalidParameter(format!(
                "proposal scale must be positive, got {scale}"
            )));
        }
        let mut cfg = ChainConfig::new(
            self.build_objective()?,
            Box::new(cooler),
            Box::new(NormalProposal { scale }),
            seed,
        );
        cfg.n_sim = c.n_sim.unwrap_or(MH_N_SIM);
        cfg.limits = self.limits;
        cfg.init_state = c.init_state.clone();
        if let Some(v) = c.n_chains {
            cfg.n_chains = v;
        }
        if let Some(v) = c.temp_floor {
            cfg.temp_floor = v;
        }
        if let Some(v) = c.rhat_threshold {
            cfg.rhat_threshold = v;
        }
        if let Some(v) = c.convergence_rtol {
            cfg.convergence_rtol = v;
        }
        if let Some(v) = c.trace_stride {
            cfg.trace_stride = v;
        }
        Ok(cfg)
    }

    fn schedule_params(&self, c_param: Option<f64>, k0: Option<u64>, q_v: f64) -> ScheduleParams {
        let d = ScheduleParams::default();
        ScheduleParams {
            t_init: self.t_init,
            c_param: c_param.unwrap_or(d.c_param),
            k0: k0.unwrap_or(d.k0),
            q_v,
        }
    }
}
