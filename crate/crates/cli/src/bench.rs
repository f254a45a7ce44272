//! The `bench` subcommand.

use std::str::FromStr;

use anyhow::{bail, Result};
use serde::Serialize;

use fhebridge::bench::{output_digest, run_benchmark, BenchResult, Benchmark, BenchmarkSpec, Mode, WIDTHS};
use fhebridge::{BackendParams, LatticeBackend, LatticeParams, TrackedBackend};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    Plain,
    Lattice,
}

impl BackendKind {
    fn name(self) -> &'static str {
        match self {
            BackendKind::Plain => "plain",
            BackendKind::Lattice => "lattice",
        }
    }
}

impl FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "plain" => Ok(BackendKind::Plain),
            "lattice" => Ok(BackendKind::Lattice),
            _ => Err(format!("unknown backend {s:?} (expected plain or lattice)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub backend: BackendKind,
    pub t: u64,
    pub slots: usize,
    pub widths: Vec<usize>,
    pub benchmarks: Vec<Benchmark>,
    pub modes: Vec<Mode>,
    pub seed: u64,
    pub noise_budget: u32,
    pub n: usize,
    pub q: u64,
}

/// One completed run. Column order here is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub benchmark: String,
    pub mode: String,
    pub bits: usize,
    pub t: u64,
    pub slots: usize,
    pub backend: String,
    pub ct_adds: u64,
    pub ct_mults: u64,
    pub pt_ops: u64,
    pub mult_depth: u32,
    pub wall_ms: f64,
    pub amortized_ms: f64,
    pub output_digest: String,
}

/// A run that did not produce outputs, such as a lattice depth-guard hit.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub benchmark: String,
    pub mode: String,
    pub bits: usize,
    pub t: u64,
    pub slots: usize,
    pub backend: String,
    pub error: String,
}

/// Bit-level against bridged for one (benchmark, width), from `--mode both`.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub benchmark: String,
    pub bits: usize,
    pub bit_ct_mults: u64,
    pub bridged_ct_mults: u64,
    pub mult_ratio: f64,
    pub bit_mult_depth: u32,
    pub bridged_mult_depth: u32,
    pub outputs_match: bool,
}

#[derive(Debug, Default, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
    pub comparisons: Vec<Comparison>,
    pub errors: Vec<ErrorRecord>,
    /// Runs whose outputs decrypted with an exhausted noise budget.
    pub corrupted: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.errors.is_empty() && self.corrupted.is_empty()
    }
}

pub fn parse_benchmarks(s: &str) -> Result<Vec<Benchmark>> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Benchmark::ALL.to_vec());
    }
    s.split(',').map(|b| Ok(b.trim().parse::<Benchmark>()?)).collect()
}

pub fn parse_modes(s: &str) -> Result<Vec<Mode>> {
    if s.eq_ignore_ascii_case("both") {
        return Ok(Mode::ALL.to_vec());
    }
    Ok(vec![s.parse::<Mode>()?])
}

pub fn parse_widths(s: &str) -> Result<Vec<usize>> {
    let widths = s
        .split(',')
        .map(|w| w.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(w) = widths.iter().find(|w| !WIDTHS.contains(w)) {
        bail!("unsupported width {w}; choose from {WIDTHS:?}");
    }
    Ok(widths)
}

fn execute(cfg: &RunConfig, spec: &BenchmarkSpec) -> fhebridge::Result<BenchResult> {
    match cfg.backend {
        BackendKind::Plain => {
            let params = BackendParams::new(cfg.t, cfg.slots).with_noise_budget(cfg.noise_budget);
            let ctx = fhebridge::EvalContext::new(TrackedBackend::new(params)?.with_seed(cfg.seed));
            run_benchmark(&ctx, spec)
        }
        BackendKind::Lattice => {
            let params = LatticeParams::new(cfg.n, cfg.q, cfg.t)?;
            let ctx = LatticeBackend::context(params, cfg.seed, cfg.slots)?;
            run_benchmark(&ctx, spec)
        }
    }
}

pub fn run(cfg: &RunConfig) -> Report {
    let mut report = Report::default();
    for &benchmark in &cfg.benchmarks {
        for &bits in &cfg.widths {
            let mut finished: Vec<(Mode, BenchResult)> = Vec::new();
            for &mode in &cfg.modes {
                let outcome = BenchmarkSpec::generate(benchmark, mode, bits, cfg.t, cfg.slots, cfg.seed)
                    .and_then(|spec| execute(cfg, &spec));
                match outcome {
                    Ok(result) => {
                        if result.corrupted {
                            report.corrupted.push(format!("{benchmark}/{mode}/{bits}"));
                        }
                        report.records.push(Record {
                            benchmark: benchmark.name().into(),
                            mode: mode.name().into(),
                            bits,
                            t: cfg.t,
                            slots: cfg.slots,
                            backend: cfg.backend.name().into(),
                            ct_adds: result.cost.ct_adds,
                            ct_mults: result.cost.ct_mults,
                            pt_ops: result.cost.pt_ops,
                            mult_depth: result.cost.mult_depth,
                            wall_ms: result.wall_ms,
                            amortized_ms: result.amortized_ms,
                            output_digest: format!("{:016x}", output_digest(&result.outputs)),
                        });
                        finished.push((mode, result));
                    }
                    Err(e) => report.errors.push(ErrorRecord {
                        benchmark: benchmark.name().into(),
                        mode: mode.name().into(),
                        bits,
                        t: cfg.t,
                        slots: cfg.slots,
                        backend: cfg.backend.name().into(),
                        error: e.to_string(),
                    }),
                }
            }
            if let [(Mode::Bit, bit), (Mode::Bridged, bridged)] = &finished[..] {
                report.comparisons.push(Comparison {
                    benchmark: benchmark.name().into(),
                    bits,
                    bit_ct_mults: bit.cost.ct_mults,
                    bridged_ct_mults: bridged.cost.ct_mults,
                    mult_ratio: bit.cost.ct_mults as f64 / bridged.cost.ct_mults.max(1) as f64,
                    bit_mult_depth: bit.cost.mult_depth,
                    bridged_mult_depth: bridged.cost.mult_depth,
                    outputs_match: bit.outputs == bridged.outputs,
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_selections() {
        assert_eq!(parse_benchmarks("all").unwrap().len(), 6);
        assert_eq!(parse_benchmarks("pks, fib").unwrap(), vec![Benchmark::Pks, Benchmark::Fib]);
        assert!(parse_benchmarks("sha").is_err());
        assert_eq!(parse_modes("both").unwrap(), Mode::ALL.to_vec());
        assert_eq!(parse_widths("4,16").unwrap(), vec![4, 16]);
        assert!(parse_widths("5").is_err());
        assert_eq!("LATTICE".parse::<BackendKind>(), Ok(BackendKind::Lattice));
    }
}
