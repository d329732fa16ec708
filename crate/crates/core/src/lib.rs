//! Simulated annealing built from interchangeable parts.
//!
//! An [`ObjectiveSpec`] wraps the function to minimize and its box
//! [`Bounds`]. The [`quench`] engine runs the classic epoch/step loop from a
//! neighborhood kernel, an acceptance kernel and a cooling schedule; the
//! Boltzmann, fast (Cauchy) and generalized (Tsallis) variants are presets over
//! that loop. The [`chain`] engine instead runs Metropolis-Hastings chains at
//! each temperature and reports Gelman-Rubin and effective-sample-size
//! diagnostics.
//!
//! ```
//! use anneal_core::{preset_boltzmann, run_quench, ObjectiveSpec, RunLimits, StyblinskiTang};
//!
//! let f = ObjectiveSpec::new(StyblinskiTang::new(2)?)?;
//! let limits = RunLimits::new(20, 100)?;
//! let cfg = preset_boltzmann(f, 5.0, Some(vec![-2.0, -2.0]), Some(limits), 7)?;
//! let result = run_quench(cfg)?;
//! assert_eq!(result.acceptances + result.rejections, 2000);
//! # Ok::<(), anneal_core::Error>(())
//! ```

// negated float comparisons are how parameter checks reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod chain;
pub mod diagnostics;
pub mod error;
pub mod export;
pub mod kernels;
pub mod objectives;
pub mod quench;
pub mod reductions;
pub mod rng;
pub mod schedules;
pub mod stats;
pub mod sweep;
pub mod types;

pub use bounds::Bounds;
pub use chain::{run_chain_sa, ChainConfig, NormalProposal};
pub use error::{Error, Result};
pub use objectives::{ObjectiveSpec, Registry, Rosenbrock2d, StyblinskiTang};
pub use quench::{preset_boltzmann, preset_fsa, preset_gsa, run_quench, Preset, QuencherConfig};
pub use rng::RngStream;
pub use schedules::{Cooler, CoolerKind, CoolingSchedule, ScheduleParams};
pub use types::{Decision, EpochSummary, EvalPoint, RunLimits, RunResult, StepRecord};
