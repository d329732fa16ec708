//! Executing a plan and writing its per-run files.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anneal_core::export::{write_grid_csv, write_trace_csv, RunSummary};
use anneal_core::sweep::map_seeds;
use anneal_core::{run_chain_sa, run_quench, RunResult};
use tempfile::NamedTempFile;

use crate::config::{Engine, Plan};

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub run_id: String,
    pub trace_path: PathBuf,
    pub summary_path: PathBuf,
    pub summary: RunSummary,
    pub rows: usize,
}

/// Write through a temporary file in `dir`, then rename onto `dir/name`.
pub fn write_atomic<F>(dir: &Path, name: &str, body: F) -> io::Result<PathBuf>
where
    F: FnOnce(&mut BufWriter<&mut NamedTempFile>) -> io::Result<()>,
{
    let mut tmp = NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(&mut tmp);
        body(&mut w)?;
        w.flush()?;
    }
    let path = dir.join(name);
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

fn execute(plan: &Plan, seed: u64) -> anneal_core::Result<RunResult> {
    match plan.engine {
        Engine::Quench => run_quench(plan.quencher(seed)?),
        Engine::Chain => run_chain_sa(plan.chain_config(seed)?),
    }
}

pub fn run_one(plan: &Plan, seed: u64) -> Result<RunOutput, String> {
    let run_id = plan.run_id(seed);
    let start = Instant::now();
    let result = execute(plan, seed).map_err(|e| format!("{run_id}: {e}"))?;
    let wall = start.elapsed().as_secs_f64();
    let summary = RunSummary::from_result(
        &plan.objective,
        plan.engine.name(),
        plan.preset_label(),
        seed,
        &result,
        wall,
    );
    let dims = result.best.pos.len();
    let io_err = |e: io::Error| format!("{run_id}: {e}");
    let trace_path = write_atomic(&plan.out_dir, &format!("{run_id}.trace.csv"), |w| {
        write_trace_csv(w, &run_id, dims, &result.trace)
    })
    .map_err(io_err)?;
    let summary_path = write_atomic(&plan.out_dir, &format!("{run_id}.summary.json"), |w| {
        writeln!(w, "{}", summary.to_json())
    })
    .map_err(io_err)?;
    Ok(RunOutput {
        run_id,
        trace_path,
        summary_path,
        summary,
        rows: result.trace.len(),
    })
}

/// Run every seed of `plan` on the worker pool, in seed order.
pub fn run_all(plan: &Plan) -> Result<Vec<Result<RunOutput, String>>, String> {
    fs::create_dir_all(&plan.out_dir).map_err(|e| format!("{}: {e}", plan.out_dir.display()))?;
    Ok(map_seeds(&plan.seeds, |seed| run_one(plan, seed)))
}

pub fn export_grid(plan: &Plan, resolution: usize) -> Result<PathBuf, String> {
    let objective = plan.build_objective().map_err(|e| e.to_string())?;
    fs::create_dir_all(&plan.out_dir).map_err(|e| format!("{}: {e}", plan.out_dir.display()))?;
    let mut failure = None;
    let path = write_atomic(&plan.out_dir, &format!("{}.grid.csv", plan.objective), |w| {
        write_grid_csv(w, &objective, resolution).map_err(|e| {
            failure = Some(e.to_string());
            io::Error::other("grid export failed")
        })
    });
    match (path, failure) {
        (_, Some(msg)) => Err(msg),
        (Ok(p), None) => Ok(p),
        (Err(e), None) => Err(e.to_string()),
    }
}
