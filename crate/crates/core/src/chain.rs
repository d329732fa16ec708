//! Annealing as a sequence of Metropolis-Hastings samplers, one per
//! temperature, each targeting `exp(-F / T)` on the feasible box.

use crate::diagnostics::{effective_sample_size, gelman_rubin};
use crate::error::{Error, Result};
use crate::objectives::ObjectiveSpec;
use crate::quench::{has_converged, DEFAULT_RTOL};
use crate::rng::RngStream;
use crate::schedules::{Cooler, CoolingSchedule};
use crate::sweep;
use crate::types::{Decision, EpochSummary, EvalPoint, RunLimits, RunResult, StepRecord};

pub const DEFAULT_CHAIN_TEMP_FLOOR: f64 = 0.01;
pub const DEFAULT_RHAT_THRESHOLD: f64 = 1.1;
/// Steps per temperature of the generic chain engine.
pub const DEFAULT_N_SIM: u64 = 20_000;
/// Steps per temperature of the MH preset.
pub const MH_N_SIM: u64 = 5_000;

/// Symmetric random-walk proposal.
pub trait Proposal: Send + Sync {
    fn propose(&self, cur: &[f64], rng: &mut RngStream, out: &mut Vec<f64>);
}

/// `cur + scale * N(0, I)`.
#[derive(Debug, Clone, Copy)]
pub struct NormalProposal {
    pub scale: f64,
}

impl Default for NormalProposal {
    fn default() -> Self {
        Self { scale: 1.0 }
    }
}

impl Proposal for NormalProposal {
    fn propose(&self, cur: &[f64], rng: &mut RngStream, out: &mut Vec<f64>) {
        out.clear();
        out.extend(cur.iter().map(|c| c + self.scale * rng.normal()));
    }
}

/// Unnormalized density `exp(-F(x) / T)`, zero off the feasible box.
#[derive(Debug, Clone, Copy)]
pub struct Target<'a> {
    objective: &'a ObjectiveSpec,
    temperature: f64,
}

/// The objective value at a point (`+inf` when infeasible) and the
/// log-density it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetValue {
    pub val: f64,
    pub log_density: f64,
}

pub fn mk_target(objective: &ObjectiveSpec, temperature: f64) -> Result<Target<'_>> {
    if !(temperature > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "target temperature must be positive, got {temperature}"
        )));
    }
    Ok(Target {
        objective,
        temperature,
    })
}

impl Target<'_> {
    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn evaluate(&self, pos: &[f64]) -> Result<TargetValue> {
        if !self.objective.bounds().contains(pos) {
            return Ok(TargetValue {
                val: f64::INFINITY,
                log_density: f64::NEG_INFINITY,
            });
        }
        let val = self.objective.value(pos)?;
        Ok(TargetValue {
            val,
            log_density: -val / self.temperature,
        })
    }

    pub fn log_density(&self, pos: &[f64]) -> Result<f64> {
        self.evaluate(pos).map(|t| t.log_density)
    }

    pub fn density(&self, pos: &[f64]) -> Result<f64> {
        self.log_density(pos).map(f64::exp)
    }
}

/// A single Metropolis-Hastings chain.
#[derive(Debug, Clone)]
pub struct ChainState {
    current: Vec<f64>,
    current_val: f64,
    current_log: f64,
    states: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl ChainState {
    pub fn new(target: &Target<'_>, init: Vec<f64>) -> Result<Self> {
        let t = target.evaluate(&init)?;
        if t.log_density == f64::NEG_INFINITY {
            return Err(Error::DegenerateStart { pos: init });
        }
        Ok(Self {
            current: init,
            current_val: t.val,
            current_log: t.log_density,
            states: Vec::new(),
            values: Vec::new(),
        })
    }

    pub fn current(&self) -> &[f64] {
        &self.current
    }

    pub fn current_val(&self) -> f64 {
        self.current_val
    }

    /// Visited states, one per step.
    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    /// Objective values of [`Self::states`].
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Lowest visited state, earliest on ties.
    pub fn best(&self) -> Option<EvalPoint> {
        argmin(&self.values).map(|i| EvalPoint::new(self.states[i].clone(), self.values[i]))
    }
}

fn argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|b| v < values[b]) {
            best = Some(i);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct MhStep {
    /// Proposed point; `val` is `+inf` when it was infeasible.
    pub candidate: EvalPoint,
    pub probability: f64,
    pub decision: Decision,
}

/// Propose, accept with `min(1, target(prop) / target(cur))`, and append the
/// resulting state.
pub fn mh_step(
    chain: &mut ChainState,
    target: &Target<'_>,
    proposal: &dyn Proposal,
    rng: &mut RngStream,
) -> Result<MhStep> {
    let mut prop = Vec::with_capacity(chain.current.len());
    proposal.propose(&chain.current, rng, &mut prop);
    let t = target.evaluate(&prop)?;
    let probability = (t.log_density - chain.current_log).exp().min(1.0);
    let accepted = rng.uniform() < probability;
    let decision = match (accepted, t.val <= chain.current_val) {
        (false, _) => Decision::Reject,
        (true, true) => Decision::AcceptImprove,
        (true, false) => Decision::AcceptRandom,
    };
    if accepted {
        chain.current.clone_from(&prop);
        chain.current_val = t.val;
        chain.current_log = t.log_density;
    }
    chain.states.push(chain.current.clone());
    chain.values.push(chain.current_val);
    Ok(MhStep {
        candidate: EvalPoint::new(prop, t.val),
        probability,
        decision,
    })
}

/// Re-evaluate `states` and return the minimum, earliest on ties.
pub fn best_of(states: &[Vec<f64>], objective: &ObjectiveSpec) -> Result<EvalPoint> {
    let values = states
        .iter()
        .map(|s| objective.value(s))
        .collect::<Result<Vec<_>>>()?;
    let i = argmin(&values).ok_or(Error::EmptyStates)?;
    Ok(EvalPoint::new(states[i].clone(), values[i]))
}

pub struct ChainConfig {
    pub objective: ObjectiveSpec,
    pub cooler: Box<dyn CoolingSchedule>,
    pub proposal: Box<dyn Proposal>,
    /// Steps per chain per temperature.
    pub n_sim: u64,
    pub temp_floor: f64,
    /// Only `max_epochs` is read.
    pub limits: RunLimits,
    pub n_chains: usize,
    pub rhat_threshold: f64,
    pub seed: u64,
    pub convergence_rtol: f64,
    pub init_state: Option<Vec<f64>>,
    pub trace_stride: u64,
}

impl ChainConfig {
    pub fn new(
        objective: ObjectiveSpec,
        cooler: Box<dyn CoolingSchedule>,
        proposal: Box<dyn Proposal>,
        seed: u64,
    ) -> Self {
        Self {
            objective,
            cooler,
            proposal,
            n_sim: DEFAULT_N_SIM,
            temp_floor: DEFAULT_CHAIN_TEMP_FLOOR,
            limits: RunLimits::default(),
            n_chains: 1,
            rhat_threshold: DEFAULT_RHAT_THRESHOLD,
            seed,
            convergence_rtol: DEFAULT_RTOL,
            init_state: None,
            trace_stride: 1,
        }
    }

    /// Metropolis-Hastings annealer: unit normal random walk, Boltzmann
    /// cooling from `t_init`, 5000 steps per temperature.
    pub fn mh(objective: ObjectiveSpec, t_init: f64, seed: u64) -> Result<Self> {
        let mut cfg = Self::new(
            objective,
            Box::new(Cooler::boltzmann(t_init)?),
            Box::new(NormalProposal::default()),
            seed,
        );
        cfg.n_sim = MH_N_SIM;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sim == 0 {
            return Err(Error::InvalidParameter("n_sim must be >= 1".into()));
        }
        if self.n_chains == 0 {
            return Err(Error::InvalidParameter("n_chains must be >= 1".into()));
        }
        if !(self.rhat_threshold > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rhat threshold must exceed 1, got {}",
                self.rhat_threshold
            )));
        }
        if !(self.temp_floor > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature floor must be positive, got {}",
                self.temp_floor
            )));
        }
        if self.trace_stride == 0 {
            return Err(Error::InvalidParameter("trace stride must be >= 1".into()));
        }
        self.limits.validate()?;
        if let Some(p) = &self.init_state {
            self.objective.bounds().check(p)?;
        }
        self.cooler.temperature(1)?;
        Ok(())
    }
}

/// One chain's scratch state for an epoch.
struct Worker {
    index: u32,
    rng: RngStream,
    chain: Option<ChainState>,
    records: Vec<StepRecord>,
    acceptances: u64,
    rejections: u64,
    samestate_time: u64,
    local_best: f64,
    recorded: u64,
}

impl Worker {
    fn run_segment(
        &mut self,
        target: &Target<'_>,
        proposal: &dyn Proposal,
        epoch: u64,
        steps: std::ops::Range<u64>,
        stride: u64,
    ) -> Result<()> {
        let chain = self.chain.as_mut().expect("chain initialized");
        for step in steps {
            let s = mh_step(chain, target, proposal, &mut self.rng)?;
            if s.decision.is_accept() {
                self.acceptances += 1;
                if chain.current_val < self.local_best {
                    self.local_best = chain.current_val;
                } else {
                    self.samestate_time += 1;
                }
            } else {
                self.rejections += 1;
                self.samestate_time += 1;
            }
            if self.recorded.is_multiple_of(stride) {
                self.records.push(StepRecord {
                    epoch,
                    step: step + 1,
                    chain: self.index,
                    temperature: target.temperature(),
                    candidate: s.candidate,
                    decision: s.decision,
                    current_val: chain.current_val,
                    best_val: self.local_best,
                });
            }
            self.recorded += 1;
        }
        Ok(())
    }
}

pub fn run_chain_sa(cfg: ChainConfig) -> Result<RunResult> {
    cfg.validate()?;
    let objective = &cfg.objective;
    let bounds = objective.bounds();
    let calls_before = objective.calls();

    let mut workers: Vec<Worker> = (0..cfg.n_chains)
        .map(|c| Worker {
            index: c as u32,
            rng: RngStream::with_stream(cfg.seed, c as u64 + 1),
            chain: None,
            records: Vec::new(),
            acceptances: 0,
            rejections: 0,
            samestate_time: 0,
            local_best: f64::INFINITY,
            recorded: 0,
        })
        .collect();
    let mut starts: Vec<Vec<f64>> = workers
        .iter_mut()
        .map(|w| cfg.init_state.clone().unwrap_or_else(|| bounds.sample(&mut w.rng)))
        .collect();

    let checkpoint = if cfg.n_chains >= 2 {
        (cfg.n_sim / 10).max(1)
    } else {
        cfg.n_sim
    };

    let mut best: Option<EvalPoint> = None;
    let mut trace = Vec::new();
    let mut epochs = Vec::new();
    let mut converged = false;
    let mut epochs_run = 0;

    let mut epoch = 1u64;
    loop {
        let temperature = cfg.cooler.temperature(epoch)?;
        if !(temperature > cfg.temp_floor) || epoch > cfg.limits.max_epochs {
            break;
        }
        let target = mk_target(objective, temperature)?;
        let carried = best.as_ref().map_or(f64::INFINITY, |b| b.val);
        for (w, start) in workers.iter_mut().zip(starts.drain(..)) {
            w.chain = Some(ChainState::new(&target, start)?);
            w.local_best = carried;
        }

        let mut done = 0;
        let mut rhat = None;
        while done < cfg.n_sim {
            let end = (done + checkpoint).min(cfg.n_sim);
            let proposal = cfg.proposal.as_ref();
            let stride = cfg.trace_stride;
            sweep::for_each_mut(&mut workers, |w| {
                w.run_segment(&target, proposal, epoch, done..end, stride)
            })?;
            done = end;
            for w in workers.iter_mut() {
                trace.append(&mut w.records);
            }
            if cfg.n_chains >= 2 {
                let values: Vec<&[f64]> = workers
                    .iter()
                    .map(|w| w.chain.as_ref().expect("chain initialized").values())
                    .collect();
                rhat = gelman_rubin(&values).ok();
                if rhat.is_some_and(|r| r < cfg.rhat_threshold) {
                    break;
                }
            }
        }

        let chains: Vec<ChainState> = workers
            .iter_mut()
            .map(|w| w.chain.take().expect("chain initialized"))
            .collect();
        let epoch_best = chains
            .iter()
            .filter_map(ChainState::best)
            .fold(None::<EvalPoint>, |acc, p| match acc {
                Some(a) if a.val <= p.val => Some(a),
                _ => Some(p),
            })
            .ok_or(Error::EmptyStates)?;
        let ess = if cfg.n_chains >= 2 {
            chains
                .iter()
                .filter_map(|c| effective_sample_size(c.values()).ok())
                .reduce(f64::min)
        } else {
            None
        };
        epochs.push(EpochSummary {
            epoch,
            temperature,
            steps: done,
            best: epoch_best.clone(),
            rhat,
            ess,
        });

        if best.as_ref().is_none_or(|b| epoch_best.val < b.val) {
            best = Some(epoch_best.clone());
        }
        starts = vec![epoch_best.pos.clone(); cfg.n_chains];
        epochs_run = epoch;

        if let (Some(gm), Some(b)) = (objective.global_min(), best.as_ref()) {
            if has_converged(b, gm, cfg.convergence_rtol) {
                converged = true;
                break;
            }
        }
        if epoch >= cfg.limits.max_epochs {
            break;
        }
        epoch += 1;
    }

    // best_val becomes the running minimum in trace order
    let mut running = f64::INFINITY;
    for r in trace.iter_mut() {
        running = running.min(r.best_val).min(r.current_val);
        r.best_val = running;
    }

    let best = match best {
        Some(b) => b,
        None => {
            let start = starts.into_iter().next().expect("at least one chain");
            objective.eval_point(start)?
        }
    };
    Ok(RunResult {
        best,
        trace,
        epochs,
        acceptances: workers.iter().map(|w| w.acceptances).sum(),
        rejections: workers.iter().map(|w| w.rejections).sum(),
        samestate_time: workers.iter().map(|w| w.samestate_time).sum(),
        fcalls: objective.calls() - calls_before,
        converged,
        epochs_run,
    })
}
