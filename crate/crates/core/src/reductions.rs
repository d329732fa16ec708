//! Checks that the generalized kernels collapse onto the Boltzmann and
//! Cauchy variants.

use crate::error::Result;
use crate::kernels::{cauchy_visit, gsa_probability, metropolis_probability, GsaVisitor};
use crate::objectives::{ObjectiveSpec, StyblinskiTang};
use crate::quench::{preset_boltzmann, preset_gsa, run_quench};
use crate::rng::RngStream;
use crate::stats::{ks_two_sample, KsResult};
use crate::sweep;
use crate::types::{RunLimits, RunResult};

/// Largest per-step difference between two traces over candidate positions,
/// candidate values, current and best values. Infinite when the traces
/// differ in length or in any decision.
pub fn trajectory_deviation(a: &RunResult, b: &RunResult) -> f64 {
    if a.trace.len() != b.trace.len() {
        return f64::INFINITY;
    }
    let mut worst: f64 = 0.0;
    for (x, y) in a.trace.iter().zip(&b.trace) {
        if x.decision != y.decision || x.candidate.pos.len() != y.candidate.pos.len() {
            return f64::INFINITY;
        }
        let diffs = x
            .candidate
            .pos
            .iter()
            .zip(&y.candidate.pos)
            .map(|(p, q)| (p - q).abs())
            .chain([
                (x.candidate.val - y.candidate.val).abs(),
                (x.current_val - y.current_val).abs(),
                (x.best_val - y.best_val).abs(),
            ]);
        for d in diffs {
            if d.is_nan() {
                return f64::INFINITY;
            }
            worst = worst.max(d);
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryCheck {
    pub q_v: f64,
    pub q_a: f64,
    pub per_seed: Vec<(u64, f64)>,
    pub max_deviation: f64,
}

/// Run the GSA preset at `(q_v, q_a)` against the Boltzmann preset on
/// Styblinski-Tang in `dims` dimensions, for each seed, `epochs` epochs of
/// default length, with `T_init = 5` and start `(-2, ..., -2)`.
pub fn gsa_vs_boltzmann(dims: usize, seeds: &[u64], epochs: u64, q_v: f64, q_a: f64) -> Result<TrajectoryCheck> {
    let limits = RunLimits::new(epochs, RunLimits::default().steps_per_epoch)?;
    let runs = sweep::map_seeds(seeds, |seed| -> Result<f64> {
        let objective = || -> Result<ObjectiveSpec> { ObjectiveSpec::new(StyblinskiTang::new(dims)?) };
        let init = Some(vec![-2.0; dims]);
        let bsa = run_quench(preset_boltzmann(objective()?, 5.0, init.clone(), Some(limits), seed)?)?;
        let mut g = preset_gsa(objective()?, 5.0, q_v, q_a, seed)?;
        g.init_pos = init;
        g.limits = limits;
        let gsa = run_quench(g)?;
        Ok(trajectory_deviation(&bsa, &gsa))
    });
    let mut per_seed = Vec::with_capacity(seeds.len());
    for (&seed, r) in seeds.iter().zip(runs) {
        per_seed.push((seed, r?));
    }
    let max_deviation = per_seed.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(TrajectoryCheck {
        q_v,
        q_a,
        per_seed,
        max_deviation,
    })
}

/// Two-sample KS between the first coordinate of `gsa_visit(T=1, q_v, dims)`
/// and standard Cauchy draws, from independent streams of `seed`.
pub fn visit_vs_cauchy(q_v: f64, dims: usize, n: usize, seed: u64) -> Result<KsResult> {
    let visitor = GsaVisitor::new(q_v)?;
    let mut r1 = RngStream::with_stream(seed, 1);
    let mut r2 = RngStream::with_stream(seed, 2);
    let gsa = (0..n)
        .map(|_| visitor.sample(1.0, dims, &mut r1).map(|v| v[0]))
        .collect::<Result<Vec<_>>>()?;
    let cauchy = cauchy_visit(1.0, n, &mut r2)?;
    Ok(ks_two_sample(&gsa, &cauchy))
}

/// Largest `|gsa_probability(q_a = 1) - metropolis_probability(k = 1)|` over a
/// 10 x 10 grid of energy differences in `[-2, 8]` and temperatures in `[0.05, 10]`.
pub fn acceptance_grid_deviation() -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let diff = -2.0 + 10.0 * i as f64 / 9.0;
            let t = 0.05 + (10.0 - 0.05) * j as f64 / 9.0;
            worst = worst.max((gsa_probability(diff, t, 1.0) - metropolis_probability(diff, t, 1.0)).abs());
        }
    }
    worst
}
