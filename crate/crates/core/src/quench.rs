//! The epoch/step annealing loop.
//!
//! Per epoch the temperature comes from the cooling schedule; each inner step
//! proposes a feasible candidate, accepts it outright when it is no worse than
//! the current state, and otherwise defers to the acceptance kernel. The run
//! stops when the best value matches the known global minimum, the
//! temperature reaches the floor, or the epoch budget is spent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{
    AcceptCriterion, BoltzmannMove, DisplacementNeighbor, Fermi, Metropolis, Neighborhood, NormalProjected,
    TsallisAccept,
};
use crate::objectives::ObjectiveSpec;
use crate::rng::RngStream;
use crate::schedules::{Cooler, CoolerKind, CoolingSchedule, ScheduleParams, QV_LIMIT_EPS};
use crate::types::{Decision, EpochSummary, EvalPoint, RunLimits, RunResult, StepRecord};

pub const DEFAULT_TEMP_FLOOR: f64 = 0.1;
pub const DEFAULT_RTOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Bsa,
    Fsa,
    Gsa,
    Custom,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Bsa => "bsa",
            Preset::Fsa => "fsa",
            Preset::Gsa => "gsa",
            Preset::Custom => "custom",
        }
    }
}

pub struct QuencherConfig {
    pub objective: ObjectiveSpec,
    pub neighbor: Box<dyn Neighborhood>,
    pub accepter: Box<dyn AcceptCriterion>,
    pub cooler: Box<dyn CoolingSchedule>,
    pub temp_floor: f64,
    pub limits: RunLimits,
    pub init_pos: Option<Vec<f64>>,
    pub seed: u64,
    pub convergence_rtol: f64,
    /// Keep every `trace_stride`-th step record; 1 keeps all.
    pub trace_stride: u64,
    pub preset: Preset,
}

impl QuencherConfig {
    pub fn new(
        objective: ObjectiveSpec,
        neighbor: Box<dyn Neighborhood>,
        accepter: Box<dyn AcceptCriterion>,
        cooler: Box<dyn CoolingSchedule>,
        seed: u64,
    ) -> Self {
        Self {
            objective,
            neighbor,
            accepter,
            cooler,
            temp_floor: DEFAULT_TEMP_FLOOR,
            limits: RunLimits::default(),
            init_pos: None,
            seed,
            convergence_rtol: DEFAULT_RTOL,
            trace_stride: 1,
            preset: Preset::Custom,
        }
    }

    pub fn t_init(&self) -> f64 {
        self.cooler.t_init()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temp_floor > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature floor must be positive, got {}",
                self.temp_floor
            )));
        }
        self.limits.validate()?;
        if !(self.convergence_rtol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "convergence rtol must be non-negative, got {}",
                self.convergence_rtol
            )));
        }
        if self.trace_stride == 0 {
            return Err(Error::InvalidParameter("trace stride must be >= 1".into()));
        }
        if let Some(p) = &self.init_pos {
            self.objective.bounds().check(p)?;
        }
        self.cooler.temperature(1)?;
        Ok(())
    }
}

/// Relative match of `best` against the known optimum.
pub fn has_converged(best: &EvalPoint, globmin: &EvalPoint, rtol: f64) -> bool {
    (best.val - globmin.val).abs() <= rtol * globmin.val.abs()
}

pub fn run_quench(cfg: QuencherConfig) -> Result<RunResult> {
    cfg.validate()?;
    let QuencherConfig {
        objective,
        mut neighbor,
        mut accepter,
        cooler,
        temp_floor,
        limits,
        init_pos,
        seed,
        convergence_rtol,
        trace_stride,
        ..
    } = cfg;

    let calls_before = objective.calls();
    let bounds = objective.bounds();
    let mut rng = RngStream::new(seed);
    let init = init_pos.unwrap_or_else(|| bounds.sample(&mut rng));
    let mut cur = objective.eval_point(init)?;
    let mut best = cur.clone();

    let mut trace = Vec::new();
    let mut epochs = Vec::new();
    let (mut acceptances, mut rejections, mut samestate_time) = (0u64, 0u64, 0u64);
    let mut converged = false;
    let mut epochs_run = 0;
    let mut counter = 0u64;
    let mut cand = Vec::with_capacity(bounds.dims());

    let mut epoch = 1u64;
    loop {
        let temperature = cooler.temperature(epoch)?;
        if !(temperature > temp_floor) || epoch > limits.max_epochs {
            break;
        }
        for step in 1..=limits.steps_per_epoch {
            neighbor.propose(bounds, &cur.pos, temperature, &mut rng, &mut cand)?;
            let cand_val = objective.value(&cand)?;
            let diff = cand_val - cur.val;
            let decision = if diff <= 0.0 {
                Decision::AcceptImprove
            } else if accepter.decide(diff, temperature, &mut rng).accepted {
                Decision::AcceptRandom
            } else {
                Decision::Reject
            };

            let keep = counter.is_multiple_of(trace_stride);
            counter += 1;
            let recorded = keep.then(|| cand.clone());

            if decision.is_accept() {
                std::mem::swap(&mut cur.pos, &mut cand);
                cur.val = cand_val;
                if cur.val < best.val {
                    best.clone_from(&cur);
                } else {
                    samestate_time += 1;
                }
                acceptances += 1;
            } else {
                rejections += 1;
                samestate_time += 1;
            }

            if let Some(pos) = recorded {
                trace.push(StepRecord {
                    epoch,
                    step,
                    chain: 0,
                    temperature,
                    candidate: EvalPoint::new(pos, cand_val),
                    decision,
                    current_val: cur.val,
                    best_val: best.val,
                });
            }
        }
        epochs_run = epoch;
        epochs.push(EpochSummary {
            epoch,
            temperature,
            steps: limits.steps_per_epoch,
            best: best.clone(),
            rhat: None,
            ess: None,
        });
        if let Some(gm) = objective.global_min() {
            if has_converged(&best, gm, convergence_rtol) {
                converged = true;
                break;
            }
        }
        if epoch >= limits.max_epochs {
            break;
        }
        epoch += 1;
    }

    Ok(RunResult {
        best,
        trace,
        epochs,
        acceptances,
        rejections,
        samestate_time,
        fcalls: objective.calls() - calls_before,
        converged,
        epochs_run,
    })
}

/// Boltzmann annealing: projected-normal neighbor, Metropolis acceptance,
/// `T_init / (1 + ln epoch)` cooling.
pub fn preset_boltzmann(
    objective: ObjectiveSpec,
    t_init: f64,
    init_pos: Option<Vec<f64>>,
    limits: Option<RunLimits>,
    seed: u64,
) -> Result<QuencherConfig> {
    let mut cfg = QuencherConfig::new(
        objective,
        Box::new(NormalProjected::<BoltzmannMove>::default()),
        Box::new(Metropolis::default()),
        Box::new(Cooler::boltzmann(t_init)?),
        seed,
    );
    cfg.init_pos = init_pos;
    cfg.limits = limits.unwrap_or_default();
    cfg.preset = Preset::Bsa;
    Ok(cfg)
}

/// Fast annealing: Cauchy displacements of scale `T_gen`, Fermi acceptance,
/// with `T_gen` following the Boltzmann schedule.
pub fn preset_fsa(objective: ObjectiveSpec, t_init: f64, seed: u64) -> Result<QuencherConfig> {
    let mut cfg = QuencherConfig::new(
        objective,
        Box::new(DisplacementNeighbor::cauchy()),
        Box::new(Fermi),
        Box::new(Cooler::boltzmann(t_init)?),
        seed,
    );
    cfg.preset = Preset::Fsa;
    Ok(cfg)
}

/// Generalized annealing with visiting shape `q_v` and acceptance shape `q_a`.
///
/// At `q_v = 1` the neighbor and schedule are the Boltzmann preset's, and at
/// `q_a = 1` acceptance takes the exponential branch, so `(1, 1)` replays
/// [`preset_boltzmann`] exactly under the same seed.
pub fn preset_gsa(
    objective: ObjectiveSpec,
    t_init: f64,
    q_v: f64,
    q_a: f64,
    seed: u64,
) -> Result<QuencherConfig> {
    if !(1.0..3.0).contains(&q_v) {
        return Err(Error::InvalidParameter(format!("q_v must lie in [1, 3), got {q_v}")));
    }
    if !q_a.is_finite() {
        return Err(Error::InvalidParameter(format!("q_a must be finite, got {q_a}")));
    }
    let (neighbor, cooler): (Box<dyn Neighborhood>, Box<dyn CoolingSchedule>) =
        if (q_v - 1.0).abs() < QV_LIMIT_EPS {
            (Box::new(NormalProjected::<BoltzmannMove>::default()), Box::new(Cooler::boltzmann(t_init)?))
        } else {
            let params = ScheduleParams {
                q_v,
                ..ScheduleParams::new(t_init)?
            };
            (
                Box::new(DisplacementNeighbor::gsa(q_v)?),
                Box::new(Cooler::new(CoolerKind::Tsallis, params)?),
            )
        };
    let mut cfg = QuencherConfig::new(
        objective,
        neighbor,
        Box::new(TsallisAccept { q_a }),
        cooler,
        seed,
    );
    cfg.preset = Preset::Gsa;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Bounds;
    use crate::objectives::{FnObjective, StyblinskiTang};

    fn st2() -> ObjectiveSpec {
        ObjectiveSpec::new(StyblinskiTang::new(2).unwrap()).unwrap()
    }

    fn short(epochs: u64, steps: u64) -> Option<RunLimits> {
        Some(RunLimits::new(epochs, steps).unwrap())
    }

    #[test]
    fn converged_examples() {
        let gm = EvalPoint::new(vec![-2.903534; 2], -78.33198);
        let at = |v| EvalPoint::new(vec![0.0; 2], v);
        assert!(has_converged(&at(-78.33198), &gm, 1e-3));
        // |0.08198| / 78.33198 ~ 1.05e-3
        assert!(!has_converged(&at(-78.25), &gm, 1e-3));
        // 0.03198 / 78.33198 ~ 4.1e-4
        assert!(has_converged(&at(-78.30), &gm, 1e-3));
    }

    #[test]
    fn loop_bound() {
        let cfg = preset_boltzmann(st2(), 5.0, Some(vec![-2.0, -2.0]), short(1, 10), 1).unwrap();
        let r = run_quench(cfg).unwrap();
        assert_eq!(r.trace.len(), 10);
        assert_eq!(r.epochs_run, 1);
        assert_eq!(r.steps(), 10);
        assert!(r.trace.iter().all(|s| s.epoch == 1));
        assert_eq!(r.trace.iter().map(|s| s.step).collect::<Vec<_>>(), (1..=10).collect::<Vec<_>>());
    }

    #[test]
    fn constant_objective_always_improves() {
        let b = Bounds::uniform(2, -5.0, 5.0).unwrap();
        let flat = ObjectiveSpec::new(FnObjective::new("zero", b, |_| 0.0)).unwrap();
        let r = run_quench(preset_boltzmann(flat, 5.0, None, short(3, 50), 2).unwrap()).unwrap();
        assert_eq!(r.rejections, 0);
        assert_eq!(r.acceptances, 150);
        assert!(r.trace.iter().all(|s| s.decision == Decision::AcceptImprove));
        assert!(!r.converged);
        assert_eq!(r.epochs_run, 3);
    }

    #[test]
    fn invariants_hold_on_a_short_run() {
        for cfg in [
            preset_boltzmann(st2(), 5.0, None, short(20, 100), 3).unwrap(),
            {
                let mut c = preset_fsa(st2(), 5.0, 3).unwrap();
                c.limits = short(20, 100).unwrap();
                c
            },
            {
                let mut c = preset_gsa(st2(), 5.0, 2.3, 1.4, 3).unwrap();
                c.limits = short(20, 100).unwrap();
                c
            },
        ] {
            let bounds = cfg.objective.bounds().clone();
            let r = run_quench(cfg).unwrap();
            assert_eq!(r.acceptances + r.rejections, r.trace.len() as u64);
            assert_eq!(r.fcalls, r.trace.len() as u64 + 1);
            let mut last = f64::INFINITY;
            let mut min_seen = f64::INFINITY;
            for s in &r.trace {
                assert!(s.best_val <= last);
                last = s.best_val;
                assert!(s.temperature > 0.0);
                if s.decision.is_accept() {
                    assert!(bounds.check(&s.candidate.pos).is_ok());
                    assert_eq!(s.current_val, s.candidate.val);
                    min_seen = min_seen.min(s.candidate.val);
                }
                assert!(s.best_val <= s.current_val);
            }
            assert!(r.best.val <= min_seen);
            assert_eq!(r.best.val, last);
        }
    }

    #[test]
    fn same_seed_same_result() {
        let run = || run_quench(preset_boltzmann(st2(), 5.0, None, short(5, 200), 42).unwrap()).unwrap();
        assert_eq!(run(), run());
        let other = run_quench(preset_boltzmann(st2(), 5.0, None, short(5, 200), 43).unwrap()).unwrap();
        assert_ne!(run().trace, other.trace);
    }

    #[test]
    fn default_init_is_feasible() {
        let r = run_quench(preset_boltzmann(st2(), 5.0, None, short(1, 1), 9).unwrap()).unwrap();
        assert!(r.best.pos.iter().all(|x| (-5.0..5.0).contains(x)));
    }

    #[test]
    fn gsa_one_one_replays_boltzmann() {
        let mut g = preset_gsa(st2(), 5.0, 1.0, 1.0, 77).unwrap();
        g.limits = short(30, 100).unwrap();
        let b = preset_boltzmann(st2(), 5.0, None, short(30, 100), 77).unwrap();
        let (g, b) = (run_quench(g).unwrap(), run_quench(b).unwrap());
        assert_eq!(g.trace, b.trace);
        assert_eq!(g.best, b.best);
    }

    #[test]
    fn fsa_first_temperature_is_t_init() {
        let mut c = preset_fsa(st2(), 5.0, 1).unwrap();
        c.limits = short(1, 5).unwrap();
        let r = run_quench(c).unwrap();
        assert!(r.trace.iter().all(|s| s.temperature == 5.0));
    }

    #[test]
    fn config_errors_before_evaluation() {
        assert!(preset_gsa(st2(), 5.0, 3.0, 1.0, 0).is_err());
        assert!(preset_gsa(st2(), 5.0, 0.9, 1.0, 0).is_err());
        assert!(preset_boltzmann(st2(), 0.0, None, None, 0).is_err());
        let f = st2();
        let bad = preset_boltzmann(f, 5.0, Some(vec![9.0, 0.0]), None, 0).unwrap();
        assert!(matches!(run_quench(bad), Err(Error::OutOfBounds { .. })));
        let mut floor = preset_boltzmann(st2(), 5.0, None, None, 0).unwrap();
        floor.temp_floor = 0.0;
        assert!(run_quench(floor).is_err());
    }

    #[test]
    fn start_below_floor_runs_nothing() {
        let r = run_quench(preset_boltzmann(st2(), 0.05, None, short(10, 10), 1).unwrap()).unwrap();
        assert!(r.trace.is_empty());
        assert_eq!(r.epochs_run, 0);
        assert_eq!(r.fcalls, 1);
    }

    #[test]
    fn trace_stride_downsamples() {
        let mut c = preset_boltzmann(st2(), 5.0, None, short(2, 50), 4).unwrap();
        c.trace_stride = 7;
        let r = run_quench(c).unwrap();
        assert_eq!(r.trace.len(), 100usize.div_ceil(7));
        assert_eq!(r.steps(), 100);
    }
}
