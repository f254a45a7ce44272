//! The six benchmark programs in bit-level and bridged form, with a harness
//! that encrypts inputs, meters and times a run, and decrypts the outputs.
//!
//! With more than one slot, every slot carries an independent instance of
//! the same shape, so one run evaluates `slots` instances at once.

mod instance;
pub mod programs;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::backend::{Backend, CostReport, EvalContext};
use crate::error::{Error, Result};
use crate::types::{center, SecureInt, SecureMod, SecureUint};

pub use instance::{
    generate, log_bound, Instance, FIB_MAX_ITER, LOG_FEATURES, LOG_OUTPUTS, LOG_POSITIONS, LOG_ROWS, MAX_LEN, PKS_LEN,
    SOR_LEN,
};

/// Word widths the benchmarks are defined for.
pub const WIDTHS: [usize; 3] = [4, 8, 16];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Benchmark {
    Fib,
    Log,
    Max,
    Mux,
    Pks,
    Sor,
}

impl Benchmark {
    pub const ALL: [Benchmark; 6] = [
        Benchmark::Fib,
        Benchmark::Log,
        Benchmark::Max,
        Benchmark::Mux,
        Benchmark::Pks,
        Benchmark::Sor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Fib => "FIB",
            Benchmark::Log => "LOG",
            Benchmark::Max => "MAX",
            Benchmark::Mux => "MUX",
            Benchmark::Pks => "PKS",
            Benchmark::Sor => "SOR",
        }
    }

    /// Whether outputs are two's-complement words (all but FIB).
    pub fn signed(self) -> bool {
        self != Benchmark::Fib
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown benchmark {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Bit,
    Bridged,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Bit, Mode::Bridged];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Bit => "bit",
            Mode::Bridged => "bridged",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown mode {s:?}")))
    }
}

/// One benchmark run: program, variant, word width and one instance per
/// slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkSpec {
    pub benchmark: Benchmark,
    pub mode: Mode,
    pub width: usize,
    pub seed: u64,
    pub instances: Vec<Instance>,
}

impl BenchmarkSpec {
    /// Draws `slots` random instances from `seed`. Slot `k` of a batched
    /// spec equals instance `k` of any other spec with the same seed.
    pub fn generate(benchmark: Benchmark, mode: Mode, width: usize, t: u64, slots: usize, seed: u64) -> Result<Self> {
        check_width(width)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let instances = (0..slots).map(|_| generate(benchmark, width, t, &mut rng)).collect();
        Ok(Self {
            benchmark,
            mode,
            width,
            seed,
            instances,
        })
    }

    /// A spec over caller-chosen instances.
    pub fn with_instances(mode: Mode, width: usize, instances: Vec<Instance>) -> Result<Self> {
        check_width(width)?;
        let first = instances
            .first()
            .ok_or_else(|| Error::InvalidParams("at least one instance is required".into()))?;
        if instances.iter().any(|i| i.shape() != first.shape()) {
            return Err(Error::InvalidParams("batched instances must share one shape".into()));
        }
        Ok(Self {
            benchmark: first.benchmark(),
            mode,
            width,
            seed: 0,
            instances,
        })
    }
}

fn check_width(width: usize) -> Result<()> {
    if WIDTHS.contains(&width) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("benchmark width must be one of {WIDTHS:?}, got {width}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    /// Decrypted outputs, one vector per slot.
    pub outputs: Vec<Vec<i64>>,
    pub cost: CostReport,
    pub wall_ms: f64,
    pub slots_used: usize,
    pub amortized_ms: f64,
    /// Some output decrypted with an exhausted noise budget.
    pub corrupted: bool,
}

/// 64-bit FNV-1a over the outputs, slot by slot, as little-endian `i64`s.
pub fn output_digest(outputs: &[Vec<i64>]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    outputs
        .iter()
        .flatten()
        .flat_map(|v| v.to_le_bytes())
        .fold(OFFSET, |h, byte| (h ^ u64::from(byte)).wrapping_mul(PRIME))
}

enum Outputs<'c, B: Backend> {
    Uint(Vec<SecureUint<'c, B>>),
    Int(Vec<SecureInt<'c, B>>),
    Mod(Vec<SecureMod<'c, B>>),
}

/// Runs one spec on `ctx`. The context must have one slot per instance;
/// the reported cost covers only this run.
pub fn run_benchmark<B: Backend>(ctx: &EvalContext<B>, spec: &BenchmarkSpec) -> Result<BenchResult> {
    let slots = spec.instances.len();
    if slots != ctx.slots() {
        return Err(Error::SlotCount {
            expected: ctx.slots(),
            got: slots,
        });
    }
    if spec.instances.iter().any(|i| i.shape() != spec.instances[0].shape()) {
        return Err(Error::InvalidParams("batched instances must share one shape".into()));
    }
    check_width(spec.width)?;
    let before = ctx.meter_snapshot();
    let start = Instant::now();
    let outputs = evaluate(ctx, spec)?;
    let (columns, corrupted) = decode(ctx, &outputs, spec.instances[0].benchmark().signed());
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let cost = ctx.meter_snapshot().since(&before);
    let per_slot = (0..slots).map(|k| columns.iter().map(|c| c[k]).collect()).collect();
    Ok(BenchResult {
        outputs: per_slot,
        cost,
        wall_ms,
        slots_used: slots,
        amortized_ms: wall_ms / slots as f64,
        corrupted,
    })
}

fn decode<B: Backend>(ctx: &EvalContext<B>, outputs: &Outputs<'_, B>, signed: bool) -> (Vec<Vec<i64>>, bool) {
    let t = ctx.plaintext_modulus();
    let mut corrupted = false;
    let mut check = |ct| corrupted |= ctx.decrypt(ct).corrupted;
    let columns = match outputs {
        Outputs::Uint(words) => words
            .iter()
            .map(|w| {
                w.word().bits().iter().for_each(|b| check(b.ciphertext()));
                w.decrypt().into_iter().map(|v| v as i64).collect()
            })
            .collect(),
        Outputs::Int(words) => words
            .iter()
            .map(|w| {
                w.word().bits().iter().for_each(|b| check(b.ciphertext()));
                w.decrypt()
            })
            .collect(),
        Outputs::Mod(residues) => residues
            .iter()
            .map(|m| {
                check(m.ciphertext());
                m.decrypt()
                    .into_iter()
                    .map(|r| if signed { center(r, t) } else { r as i64 })
                    .collect()
            })
            .collect(),
    };
    (columns, corrupted)
}

/// Per-slot values of one scalar input.
fn gather(instances: &[Instance], pick: impl Fn(&Instance) -> i64) -> Vec<i64> {
    instances.iter().map(pick).collect()
}

fn evaluate<'c, B: Backend>(ctx: &'c EvalContext<B>, spec: &BenchmarkSpec) -> Result<Outputs<'c, B>> {
    let (s, inst) = (spec.width, &spec.instances[..]);
    let int = |pick: &dyn Fn(&Instance) -> i64| SecureInt::encrypt(ctx, s, &gather(inst, pick));
    let bridged = spec.mode == Mode::Bridged;
    Ok(match &inst[0] {
        Instance::Fib { max_iter, .. } => {
            let input = gather(inst, |i| match i {
                Instance::Fib { input, .. } => *input as i64,
                _ => unreachable!("shape checked"),
            });
            let input: Vec<u64> = input.into_iter().map(|v| v as u64).collect();
            let input = SecureUint::encrypt(ctx, s, &input)?;
            if bridged {
                Outputs::Mod(vec![programs::fib_bridged(&input, *max_iter)?])
            } else {
                Outputs::Uint(vec![programs::fib_bit(&input, *max_iter)?])
            }
        }
        Instance::Pks { values, .. } => {
            let v = (0..values.len())
                .map(|k| {
                    int(&|i| match i {
                        Instance::Pks { values, .. } => values[k],
                        _ => unreachable!("shape checked"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let key = int(&|i| match i {
                Instance::Pks { key, .. } => *key,
                _ => unreachable!("shape checked"),
            })?;
            if bridged {
                Outputs::Mod(vec![programs::pks_bridged(&v, &key)?])
            } else {
                Outputs::Int(vec![programs::pks_bit(&v, &key)?])
            }
        }
        Instance::Max { values } | Instance::Sor { values } => {
            let v = (0..values.len())
                .map(|k| {
                    int(&|i| match i {
                        Instance::Max { values } | Instance::Sor { values } => values[k],
                        _ => unreachable!("shape checked"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match (inst[0].benchmark(), bridged) {
                (Benchmark::Max, false) => Outputs::Int(vec![programs::max_bit(&v)?]),
                (Benchmark::Max, true) => Outputs::Mod(vec![programs::max_bridged(&v)?]),
                (_, false) => Outputs::Int(programs::sor_bit(&v)?),
                (_, true) => Outputs::Mod(programs::sor_bridged(&v)?),
            }
        }
        Instance::Mux { .. } => {
            let field = |k: usize| {
                int(&move |i| match i {
                    Instance::Mux {
                        input,
                        item,
                        if_true,
                        if_false,
                    } => [*input, *item, *if_true, *if_false][k],
                    _ => unreachable!("shape checked"),
                })
            };
            let (input, item, t, f) = (field(0)?, field(1)?, field(2)?, field(3)?);
            if bridged {
                Outputs::Mod(vec![programs::mux_bridged(&input, &item, &t, &f)?])
            } else {
                Outputs::Int(vec![programs::mux_bit(&input, &item, &t, &f)?])
            }
        }
        Instance::Log {
            inputs,
            weights,
            positions,
            ..
        } => {
            let matrix = |weights_side: bool, r: usize, c: usize| {
                gather(inst, |i| match i {
                    Instance::Log { inputs, weights, .. } => {
                        if weights_side {
                            weights[r][c]
                        } else {
                            inputs[r][c]
                        }
                    }
                    _ => unreachable!("shape checked"),
                })
            };
            let x = (0..inputs.len())
                .map(|r| (0..inputs[r].len()).map(|c| SecureInt::encrypt(ctx, s, &matrix(false, r, c))).collect())
                .collect::<Result<Vec<Vec<_>>>>()?;
            let threshold = int(&|i| match i {
                Instance::Log { threshold, .. } => *threshold,
                _ => unreachable!("shape checked"),
            })?;
            let dims = |r: usize| 0..weights[r].len();
            if bridged {
                let w = (0..weights.len())
                    .map(|r| dims(r).map(|c| SecureMod::encrypt(ctx, &matrix(true, r, c))).collect())
                    .collect::<Result<Vec<Vec<_>>>>()?;
                let out = programs::logreg_bridged(&x, &w, &threshold, positions)?;
                Outputs::Mod(out.into_iter().flatten().collect())
            } else {
                let w = (0..weights.len())
                    .map(|r| dims(r).map(|c| SecureInt::encrypt(ctx, s, &matrix(true, r, c))).collect())
                    .collect::<Result<Vec<Vec<_>>>>()?;
                let out = programs::logreg_bit(&x, &w, &threshold, positions)?;
                Outputs::Int(out.into_iter().flatten().collect())
            }
        }
    })
}
