//! Trace CSV, summary JSON and objective grid serialization.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! parsed value is bit-identical to the one written.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::ObjectiveSpec;
use crate::types::{RunResult, StepRecord};

/// `run_id,epoch,step,temperature,cand_pos_0..cand_pos_{d-1},cand_val,decision,cur_val,best_val`
pub fn trace_header(dims: usize) -> String {
    let mut cols = vec!["run_id".to_string(), "epoch".into(), "step".into(), "temperature".into()];
    cols.extend((0..dims).map(|i| format!("cand_pos_{i}")));
    cols.extend(["cand_val", "decision", "cur_val", "best_val"].map(String::from));
    cols.join(",")
}

#[inline]
fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_trace_csv<W: Write>(mut w: W, run_id: &str, dims: usize, trace: &[StepRecord]) -> io::Result<()> {
    writeln!(w, "{}", trace_header(dims))?;
    let mut line = String::new();
    for r in trace {
        line.clear();
        line.push_str(run_id);
        line.push(',');
        line.push_str(&r.epoch.to_string());
        line.push(',');
        line.push_str(&r.step.to_string());
        line.push(',');
        line.push_str(&num(r.temperature));
        for x in &r.candidate.pos {
            line.push(',');
            line.push_str(&num(*x));
        }
        for field in [num(r.candidate.val), r.decision.as_str().to_string(), num(r.current_val), num(r.best_val)] {
            line.push(',');
            line.push_str(&field);
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn trace_csv_bytes(run_id: &str, dims: usize, trace: &[StepRecord]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_trace_csv(&mut buf, run_id, dims, trace).expect("writing to a Vec cannot fail");
    buf
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub objective: String,
    pub engine: String,
    pub preset: String,
    pub seed: u64,
    pub best_pos: Vec<f64>,
    pub best_val: f64,
    pub converged: bool,
    pub epochs_run: u64,
    pub fcalls: u64,
    pub acceptances: u64,
    pub rejections: u64,
    pub samestate_time: u64,
    pub wall_time_s: f64,
}

impl RunSummary {
    pub fn from_result(
        objective: &str,
        engine: &str,
        preset: &str,
        seed: u64,
        result: &RunResult,
        wall_time_s: f64,
    ) -> Self {
        Self {
            objective: objective.to_string(),
            engine: engine.to_string(),
            preset: preset.to_string(),
            seed,
            best_pos: result.best.pos.clone(),
            best_val: result.best.val,
            converged: result.converged,
            epochs_run: result.epochs_run,
            fcalls: result.fcalls,
            acceptances: result.acceptances,
            rejections: result.rejections,
            samestate_time: result.samestate_time,
            wall_time_s,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// `x0,x1,value` over a `resolution x resolution` grid spanning the box of a
/// 2-D objective, endpoints included, `x0` varying slowest.
pub fn write_grid_csv<W: Write>(mut w: W, objective: &ObjectiveSpec, resolution: usize) -> Result<()> {
    if objective.dims() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: objective.dims(),
        });
    }
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution must be >= 2, got {resolution}"
        )));
    }
    let b = objective.bounds();
    let axis = |i: usize| -> Vec<f64> {
        let (lo, hi) = (b.low()[i], b.high()[i]);
        (0..resolution)
            .map(|k| lo + (hi - lo) * k as f64 / (resolution - 1) as f64)
            .collect()
    };
    let (xs, ys) = (axis(0), axis(1));
    let io = |e: io::Error| Error::InvalidParameter(format!("grid write failed: {e}"));
    writeln!(w, "x0,x1,value").map_err(io)?;
    for &x in &xs {
        for &y in &ys {
            let v = objective.value(&[x, y])?;
            writeln!(w, "{},{},{}", num(x), num(y), num(v)).map_err(io)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::StyblinskiTang;
    use crate::types::{Decision, EvalPoint};

    #[test]
    fn header_is_exact() {
        assert_eq!(
            trace_header(2),
            "run_id,epoch,step,temperature,cand_pos_0,cand_pos_1,cand_val,decision,cur_val,best_val"
        );
    }

    #[test]
    fn rows_round_trip_bits() {
        let rec = StepRecord {
            epoch: 3,
            step: 17,
            chain: 0,
            temperature: 5.0 / (1.0 + 3f64.ln()),
            candidate: EvalPoint::new(vec![0.1 + 0.2, -1e-300], f64::INFINITY),
            decision: Decision::AcceptRandom,
            current_val: -78.33198,
            best_val: 1e300,
        };
        let text = String::from_utf8(trace_csv_bytes("r0", 2, std::slice::from_ref(&rec))).unwrap();
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[0], "r0");
        assert_eq!(row[1], "3");
        assert_eq!(row[2], "17");
        assert_eq!(row[3].parse::<f64>().unwrap().to_bits(), rec.temperature.to_bits());
        assert_eq!(row[4].parse::<f64>().unwrap().to_bits(), (0.1f64 + 0.2).to_bits());
        assert_eq!(row[5].parse::<f64>().unwrap(), -1e-300);
        assert_eq!(row[6], "inf");
        assert_eq!(row[7], "accept_random");
        assert_eq!(row[9], "1e300");
    }

    #[test]
    fn grid_dimensions() {
        let f = ObjectiveSpec::new(StyblinskiTang::new(2).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &f, 30).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 900);
        assert!(text.lines().nth(1).unwrap().starts_with("-5.0,-5.0,"));
        let f3 = ObjectiveSpec::new(StyblinskiTang::new(3).unwrap()).unwrap();
        assert!(write_grid_csv(Vec::new(), &f3, 30).is_err());
    }
}
