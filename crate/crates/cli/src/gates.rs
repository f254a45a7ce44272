//! The `gates` subcommand: homomorphic truth tables with per-gate cost.

use anyhow::Result;
use serde::Serialize;

use fhebridge::gates::{Bit, Gate};
use fhebridge::{BackendParams, TrackedBackend};

/// One truth-table row, evaluated on ciphertexts.
#[derive(Debug, Clone, Serialize)]
pub struct GateRow {
    pub gate: String,
    pub inputs: String,
    pub output: u64,
    pub ct_mults: u64,
    pub ct_adds: u64,
    pub pt_ops: u64,
}

pub fn run(t: u64) -> Result<Vec<GateRow>> {
    let ctx = TrackedBackend::context(BackendParams::new(t, 1))?;
    let mut rows = Vec::new();
    for gate in Gate::ALL {
        for combo in 0..1u32 << gate.arity() {
            let bits: Vec<bool> = (0..gate.arity()).rev().map(|i| combo >> i & 1 == 1).collect();
            let inputs = bits
                .iter()
                .map(|&b| Bit::encrypt(&ctx, &[b]))
                .collect::<fhebridge::Result<Vec<_>>>()?;
            let before = ctx.meter_snapshot();
            let out = gate.eval(&inputs)?;
            let cost = ctx.meter_snapshot().since(&before);
            rows.push(GateRow {
                gate: gate.name().into(),
                inputs: bits.iter().map(|&b| if b { '1' } else { '0' }).collect(),
                output: out.decrypt()[0],
                ct_mults: cost.ct_mults,
                ct_adds: cost.ct_adds,
                pt_ops: cost.pt_ops,
            });
        }
    }
    Ok(rows)
}
