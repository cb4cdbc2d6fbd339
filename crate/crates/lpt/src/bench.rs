//! Evaluation counts against `2^L · |ρ|²` on random instances.

use std::io::Write;

use lpt_core::{complexity_bound, EngineState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::generate::{formula_of_height, trace_steps};

pub const BENCH_ATOMS: [&str; 3] = ["a", "b", "c"];

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub height: usize,
    pub trace_len: usize,
    pub trials: usize,
    pub mean_count: f64,
    pub bound: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchCell {
    pub row: BenchRow,
    pub max_count: u64,
    /// Trials whose count exceeded the bound.
    pub violations: usize,
}

/// Seed for one (height, length) cell, so cells do not depend on which
/// other cells were requested.
fn cell_seed(seed: u64, height: usize, len: usize) -> u64 {
    seed ^ ((height as u64) << 32) ^ len as u64
}

pub fn run_cell(height: usize, len: usize, trials: usize, seed: u64) -> BenchCell {
    let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(seed, height, len));
    let bound = complexity_bound(height, len);
    let mut total = 0u64;
    let mut max_count = 0u64;
    let mut violations = 0;
    for _ in 0..trials {
        let formula = formula_of_height(&mut rng, &BENCH_ATOMS, height);
        let mut state = EngineState::for_formula(&formula);
        state
            .step_all(trace_steps(&mut rng, &BENCH_ATOMS, len))
            .expect("fresh engine");
        let count = state.evaluation_count();
        if count > bound {
            violations += 1;
            log::debug!("height {height} length {len}: {count} > {bound} for {formula}");
        }
        total += count;
        max_count = max_count.max(count);
    }
    let mean_count = if trials == 0 {
        0.0
    } else {
        total as f64 / trials as f64
    };
    BenchCell {
        row: BenchRow {
            height,
            trace_len: len,
            trials,
            mean_count,
            bound,
            ratio: if bound == 0 {
                0.0
            } else {
                mean_count / bound as f64
            },
        },
        max_count,
        violations,
    }
}

/// Every (height, length) cell in order. No cells when `trials` is zero.
pub fn run_bench(heights: &[usize], lengths: &[usize], trials: usize, seed: u64) -> Vec<BenchCell> {
    if trials == 0 {
        return Vec::new();
    }
    heights
        .iter()
        .flat_map(|&h| lengths.iter().map(move |&n| run_cell(h, n, trials, seed)))
        .collect()
}

pub fn write_csv<W: Write>(cells: &[BenchCell], out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    if cells.is_empty() {
        writer.write_record(["height", "trace_len", "trials", "mean_count", "bound", "ratio"])?;
    }
    for cell in cells {
        writer.serialize(&cell.row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Parse `0-4`, `1,2,5` or a mix such as `0-2,7`.
pub fn parse_range(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || format!("invalid range `{part}`");
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                let hi: usize = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}
