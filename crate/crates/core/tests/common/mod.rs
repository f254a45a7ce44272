//! Helpers shared by the integration tests: context builders and reference
//! results written directly from each benchmark's meaning, independent of
//! the library's own step-by-step oracle.
#![allow(dead_code)]

use fhebridge::bench::Instance;
use fhebridge::{BackendParams, EvalContext, TrackedBackend};

/// Budget large enough for every benchmark circuit at s = 16.
pub const DEEP_BUDGET: u32 = 1 << 20;

pub fn tracked(t: u64, slots: usize) -> EvalContext<TrackedBackend> {
    TrackedBackend::context(BackendParams::new(t, slots)).unwrap()
}

pub fn tracked_deep(t: u64, slots: usize) -> EvalContext<TrackedBackend> {
    TrackedBackend::context(BackendParams::new(t, slots).with_noise_budget(DEEP_BUDGET)).unwrap()
}

/// Plaintext modulus used for benchmarks at a width: the smallest prime
/// above `2^s` for s = 4, Fermat prime 65537 otherwise.
pub fn modulus_for(width: usize) -> u64 {
    if width == 4 { 17 } else { 65537 }
}

fn fib_number(k: u64) -> i64 {
    match k {
        0 => 0,
        1 => 1,
        _ => fib_number(k - 1) + fib_number(k - 2),
    }
}

pub fn expected(inst: &Instance) -> Vec<i64> {
    match inst {
        Instance::Fib { input, max_iter } => {
            vec![if (*input as usize) < *max_iter { fib_number(*input) } else { 0 }]
        }
        Instance::Pks { values, key } => {
            vec![usize::try_from(*key).ok().and_then(|k| values.get(k)).copied().unwrap_or(0)]
        }
        Instance::Max { values } => vec![*values.iter().max().unwrap()],
        Instance::Mux {
            input,
            item,
            if_true,
            if_false,
        } => vec![if input == item { *if_true } else { *if_false }],
        Instance::Sor { values } => {
            let mut v = values.clone();
            v.sort_unstable();
            v
        }
        Instance::Log {
            inputs,
            weights,
            threshold,
            positions,
        } => {
            let mut out = Vec::new();
            for row in inputs {
                let capped: Vec<i64> = row
                    .iter()
                    .enumerate()
                    .map(|(k, &x)| if positions.contains(&k) { x.min(*threshold) } else { x })
                    .collect();
                let bias = &weights[capped.len()];
                for (j, b) in bias.iter().enumerate() {
                    out.push(capped.iter().zip(weights).map(|(&x, w)| x * w[j]).sum::<i64>() + b);
                }
            }
            out
        }
    }
}
