//! Benchmark inputs, their random generation and the plaintext oracle.

use rand::seq::index;
use rand::Rng;

use super::Benchmark;

/// Loop bound of the data-oblivious Fibonacci loop.
pub const FIB_MAX_ITER: usize = 10;
pub const PKS_LEN: usize = 8;
pub const MAX_LEN: usize = 4;
pub const SOR_LEN: usize = 4;
pub const LOG_ROWS: usize = 4;
pub const LOG_FEATURES: usize = 4;
pub const LOG_OUTPUTS: usize = 2;
/// Feature columns capped by the logistic-regression filter.
pub const LOG_POSITIONS: [usize; 2] = [0, 1];

/// Clear inputs of one benchmark run (one slot).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Fib {
        input: u64,
        max_iter: usize,
    },
    Pks {
        values: Vec<i64>,
        key: i64,
    },
    Max {
        values: Vec<i64>,
    },
    Mux {
        input: i64,
        item: i64,
        if_true: i64,
        if_false: i64,
    },
    Sor {
        values: Vec<i64>,
    },
    /// `weights` has one row per feature plus a final bias row.
    Log {
        inputs: Vec<Vec<i64>>,
        weights: Vec<Vec<i64>>,
        threshold: i64,
        positions: Vec<usize>,
    },
}

impl Instance {
    pub fn benchmark(&self) -> Benchmark {
        match self {
            Instance::Fib { .. } => Benchmark::Fib,
            Instance::Pks { .. } => Benchmark::Pks,
            Instance::Max { .. } => Benchmark::Max,
            Instance::Mux { .. } => Benchmark::Mux,
            Instance::Sor { .. } => Benchmark::Sor,
            Instance::Log { .. } => Benchmark::Log,
        }
    }

    /// Everything except the payload values. Instances batched into one
    /// ciphertext must share it, since they run through the same circuit.
    pub fn shape(&self) -> (Benchmark, Vec<usize>) {
        let dims = match self {
            Instance::Fib { max_iter, .. } => vec![*max_iter],
            Instance::Pks { values, .. } | Instance::Max { values } | Instance::Sor { values } => vec![values.len()],
            Instance::Mux { .. } => vec![],
            Instance::Log {
                inputs,
                weights,
                positions,
                ..
            } => {
                let mut d = vec![inputs.len(), inputs.first().map_or(0, Vec::len)];
                d.push(weights.len());
                d.push(weights.first().map_or(0, Vec::len));
                d.extend(positions);
                d
            }
        };
        (self.benchmark(), dims)
    }

    /// Reference result computed in the clear with unbounded integers,
    /// following the data-oblivious program step by step.
    pub fn oracle(&self) -> Vec<i64> {
        match self {
            Instance::Fib { input, max_iter } => {
                let (mut i, mut a, mut b, mut r) = (0u64, 0i64, 1i64, 0i64);
                for _ in 0..*max_iter {
                    r += i64::from(i == *input) * a;
                    i += 1;
                    std::mem::swap(&mut a, &mut b);
                    a += b;
                }
                vec![r]
            }
            Instance::Pks { values, key } => {
                vec![values.iter().enumerate().map(|(i, &v)| i64::from(i as i64 == *key) * v).sum()]
            }
            Instance::Max { values } => {
                let idx = ranks(values, |row| row.iter().product());
                vec![idx.iter().zip(values).map(|(&m, &v)| m * v).sum()]
            }
            Instance::Mux {
                input,
                item,
                if_true,
                if_false,
            } => {
                let cond = i64::from(input == item);
                vec![cond * if_true + (1 - cond) * if_false]
            }
            Instance::Sor { values } => {
                let idx = ranks(values, |row| row.iter().sum());
                (0..values.len() as i64)
                    .map(|i| idx.iter().zip(values).map(|(&r, &v)| i64::from(r == i) * v).sum())
                    .collect()
            }
            Instance::Log {
                inputs,
                weights,
                threshold,
                positions,
            } => {
                let mut x = inputs.clone();
                for &p in positions {
                    for row in &mut x {
                        if row[p] > *threshold {
                            row[p] = *threshold;
                        }
                    }
                }
                let cols = weights.first().map_or(0, Vec::len);
                x.iter()
                    .flat_map(|row| {
                        let with_bias: Vec<i64> = row.iter().copied().chain([1]).collect();
                        (0..cols).map(move |j| with_bias.iter().zip(weights).map(|(a, w)| a * w[j]).sum::<i64>())
                    })
                    .collect()
            }
        }
    }
}

/// Pairwise comparison matrix reduced per element, as in the MAX and SOR
/// programs: row `i` collects `v[i] > v[j]` for `j > i` and `!(v[j] > v[i])`
/// for `j < i`.
fn ranks(values: &[i64], reduce: impl Fn(&[i64]) -> i64) -> Vec<i64> {
    let n = values.len();
    let mut m = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let cond = i64::from(values[i] > values[j]);
            m[i].push(cond);
            m[j].push(1 - cond);
        }
    }
    m.iter().map(|row| reduce(row)).collect()
}

fn fib(k: u64) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

/// Largest magnitude for logistic-regression inputs, weights and threshold
/// such that every output (five products summed) stays representable both
/// as an `s`-bit signed word and as a centered residue mod `t`.
pub fn log_bound(width: usize, t: u64) -> i64 {
    let limit = (1i128 << (width - 1)).min(i128::from(t / 2));
    let mut b = 0i64;
    while 5 * i128::from(b + 1).pow(2) < limit {
        b += 1;
    }
    b
}

fn signed_range(width: usize) -> std::ops::RangeInclusive<i64> {
    let half = 1i64 << (width - 1);
    -half..=half - 1
}

fn distinct_signed(rng: &mut impl Rng, width: usize, len: usize) -> Vec<i64> {
    let range = signed_range(width);
    let span = (range.end() - range.start() + 1) as usize;
    index::sample(rng, span, len).into_iter().map(|k| range.start() + k as i64).collect()
}

/// Draws one random instance whose results fit both `width`-bit words and
/// residues mod `t` without wrapping, so bit-level and bridged runs agree
/// with the oracle.
pub fn generate(benchmark: Benchmark, width: usize, t: u64, rng: &mut impl Rng) -> Instance {
    let range = signed_range(width);
    match benchmark {
        Benchmark::Fib => {
            let cap = (1u64 << width).min(t);
            let valid: Vec<u64> = (0..FIB_MAX_ITER as u64).filter(|&k| fib(k) < cap).collect();
            Instance::Fib {
                input: valid[rng.gen_range(0..valid.len())],
                max_iter: FIB_MAX_ITER,
            }
        }
        Benchmark::Pks => Instance::Pks {
            values: (0..PKS_LEN).map(|_| rng.gen_range(range.clone())).collect(),
            key: rng.gen_range(0..PKS_LEN as i64),
        },
        Benchmark::Max => Instance::Max {
            values: distinct_signed(rng, width, MAX_LEN),
        },
        Benchmark::Mux => {
            let input = rng.gen_range(range.clone());
            // Hit both branches equally often.
            let item = if rng.gen() { input } else { rng.gen_range(range.clone()) };
            Instance::Mux {
                input,
                item,
                if_true: rng.gen_range(range.clone()),
                if_false: rng.gen_range(range),
            }
        }
        Benchmark::Sor => Instance::Sor {
            values: distinct_signed(rng, width, SOR_LEN),
        },
        Benchmark::Log => {
            let b = log_bound(width, t);
            let mut draw = |rows: usize, cols: usize| -> Vec<Vec<i64>> {
                (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-b..=b)).collect()).collect()
            };
            let inputs = draw(LOG_ROWS, LOG_FEATURES);
            let weights = draw(LOG_FEATURES + 1, LOG_OUTPUTS);
            Instance::Log {
                inputs,
                weights,
                threshold: rng.gen_range(-b..=b),
                positions: LOG_POSITIONS.to_vec(),
            }
        }
    }
}
