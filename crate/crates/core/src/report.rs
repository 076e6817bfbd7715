//! Machine-readable run reports and the comparison table.
//!
//! Reports are JSON documents carrying `schema_version`. Nothing in them
//! depends on the clock unless the caller adds a wall-clock figure, so two
//! runs with the same inputs produce identical bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arch::Architecture;
use crate::circuit::{Circuit, GateKind};
use crate::pipeline::RunConfig;
use crate::router::MappedSchedule;
use crate::sched::original_depth;

pub const SCHEMA_VERSION: u32 = 1;

/// Summary of one routing run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteReport {
    pub schema_version: u32,
    pub benchmark: String,
    pub architecture: String,
    pub router: String,
    pub initial: String,
    pub seed: u64,
    /// Weighted depth of the source circuit ignoring coupling.
    pub original_depth: u64,
    pub weighted_depth: u64,
    pub swap_count: usize,
    /// Gates in the emitted circuit.
    pub total_gates: usize,
    /// CX gates in the emitted circuit.
    pub cx_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
    pub initial_mapping: Vec<usize>,
    pub final_mapping: Vec<usize>,
}

impl RouteReport {
    /// Report for `s`. With `decomposed`, gate counts are those of the text
    /// with every SWAP written as three CX.
    pub fn new(
        benchmark: &str,
        c: &Circuit,
        arch: &Architecture,
        cfg: &RunConfig,
        s: &MappedSchedule,
        decomposed: bool,
    ) -> Self {
        let mc = &s.mapped_circuit;
        let (total, cx) = if decomposed {
            (
                mc.gates.len() + 2 * s.swap_count_all(),
                mc.cx_count() + 3 * s.swap_count_all(),
            )
        } else {
            (mc.gates.len(), mc.cx_count())
        };
        RouteReport {
            schema_version: SCHEMA_VERSION,
            benchmark: benchmark.to_string(),
            architecture: arch.name().to_string(),
            router: cfg.router.name().to_string(),
            initial: cfg.initial.name().to_string(),
            seed: cfg.traversal.seed,
            original_depth: original_depth(c, arch.durations()),
            weighted_depth: s.weighted_depth,
            swap_count: s.swap_count,
            total_gates: total,
            cx_count: cx,
            wall_clock_ms: None,
            initial_mapping: mc.initial_mapping.forward().to_vec(),
            final_mapping: mc.final_mapping.forward().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

impl MappedSchedule {
    /// Every SWAP in the output, inserted or from the source.
    pub fn swap_count_all(&self) -> usize {
        self.mapped_circuit
            .gates
            .iter()
            .filter(|g| g.kind == GateKind::Swap)
            .count()
    }
}

/// One `t=<start> <gate> <operands>` line per scheduled gate, in start
/// order.
pub fn schedule_listing(s: &MappedSchedule) -> String {
    let mut order: Vec<usize> = (0..s.scheduled.len()).collect();
    order.sort_by_key(|&i| (s.scheduled[i].start, i));
    let mut out = String::new();
    for i in order {
        let sg = &s.scheduled[i];
        let qs: Vec<String> = sg.gate.qubits.iter().map(|q| format!("q[{q}]")).collect();
        let _ = write!(out, "t={} {} {}", sg.start, sg.gate.kind, qs.join(","));
        if sg.gate.inserted {
            out.push_str(" inserted");
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub benchmark: String,
    pub architecture: String,
    pub qubits: usize,
    pub gates: usize,
    pub t_o: u64,
    /// Duration-aware router depth.
    pub t_c: u64,
    /// Baseline depth.
    pub t_s: u64,
    pub swaps_c: usize,
    pub swaps_s: usize,
    /// `t_s / t_c`, 1 when both are zero.
    pub ratio: f64,
}

impl CompareRow {
    pub fn new(
        benchmark: &str,
        arch: &Architecture,
        t_o: u64,
        gates: usize,
        comet: &MappedSchedule,
        baseline: &MappedSchedule,
    ) -> Self {
        let (t_c, t_s) = (comet.weighted_depth, baseline.weighted_depth);
        CompareRow {
            benchmark: benchmark.to_string(),
            architecture: arch.name().to_string(),
            qubits: comet.mapped_circuit.initial_mapping.num_logical(),
            gates,
            t_o,
            t_c,
            t_s,
            swaps_c: comet.swap_count,
            swaps_s: baseline.swap_count,
            ratio: if t_c == 0 {
                1.0
            } else {
                t_s as f64 / t_c as f64
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareFailure {
    pub benchmark: String,
    pub architecture: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareSummary {
    pub schema_version: u32,
    pub initial: String,
    pub rounds: usize,
    pub restarts: usize,
    pub seed: u64,
    pub rows: Vec<CompareRow>,
    pub failures: Vec<CompareFailure>,
    pub arithmetic_mean: Option<f64>,
    pub geometric_mean: Option<f64>,
    /// Rows with `t_c <= t_s`.
    pub comet_not_worse: usize,
}

impl CompareSummary {
    pub fn from_results(results: Vec<Result<CompareRow, CompareFailure>>, cfg: &RunConfig) -> Self {
        let mut rows = Vec::new();
        let mut failures = Vec::new();
        for r in results {
            match r {
                Ok(row) => rows.push(row),
                Err(f) => failures.push(f),
            }
        }
        let n = rows.len() as f64;
        let (arithmetic_mean, geometric_mean) = if rows.is_empty() {
            (None, None)
        } else {
            let sum: f64 = rows.iter().map(|r| r.ratio).sum();
            let log: f64 = rows.iter().map(|r| r.ratio.ln()).sum();
            (Some(sum / n), Some((log / n).exp()))
        };
        let comet_not_worse = rows.iter().filter(|r| r.t_c <= r.t_s).count();
        CompareSummary {
            schema_version: SCHEMA_VERSION,
            initial: cfg.initial.name().to_string(),
            rounds: cfg.traversal.rounds,
            restarts: cfg.traversal.restarts,
            seed: cfg.traversal.seed,
            rows,
            failures,
            arithmetic_mean,
            geometric_mean,
            comet_not_worse,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes") + "\n"
    }

    /// Fixed-width text table with a means footer.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<20} {:<14} {:>4} {:>6} {:>7} {:>7} {:>7} {:>6} {:>6} {:>7}",
            "benchmark", "arch", "n", "gates", "T_o", "T_C", "T_S", "sw_C", "sw_S", "T_S/T_C"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<20} {:<14} {:>4} {:>6} {:>7} {:>7} {:>7} {:>6} {:>6} {:>7.3}",
                r.benchmark,
                r.architecture,
                r.qubits,
                r.gates,
                r.t_o,
                r.t_c,
                r.t_s,
                r.swaps_c,
                r.swaps_s,
                r.ratio
            );
        }
        for f in &self.failures {
            let _ = writeln!(
                out,
                "{:<20} {:<14} failed: {}",
                f.benchmark, f.architecture, f.error
            );
        }
        match (self.arithmetic_mean, self.geometric_mean) {
            (Some(a), Some(g)) => {
                let _ = writeln!(
                    out,
                    "arithmetic mean {a:.3}  geometric mean {g:.3}  T_C <= T_S on {}/{} rows",
                    self.comet_not_worse,
                    self.rows.len()
                );
            }
            _ => out.push_str("no rows\n"),
        }
        out
    }
}
