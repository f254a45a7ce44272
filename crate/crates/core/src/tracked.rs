//! Tracked-plaintext backend: ciphertexts carry their residues in the clear
//! together with a simulated noise budget.
//!
//! The noise model is linear: every ciphertext multiplication consumes
//! [`MUL_NOISE_BITS`], every ciphertext addition or subtraction half a bit,
//! and plaintext-mixed operations nothing. A result inherits the smaller
//! budget of its operands. Once the budget drops below zero decryption
//! returns seeded junk and raises the `corrupted` flag.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::backend::{Backend, BackendParams, Decryption, EvalContext};
use crate::error::{Error, Result};

pub const MUL_NOISE_BITS: i64 = 30;

// Budgets are kept in half bits so that additions cost an exact integer.
const MUL_COST_HALVES: i64 = 2 * MUL_NOISE_BITS;
const ADD_COST_HALVES: i64 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackedCt {
    payload: Vec<u64>,
    budget_halves: i64,
}

impl TrackedCt {
    pub fn payload(&self) -> &[u64] {
        &self.payload
    }

    /// Remaining simulated noise budget in whole bits (floor).
    pub fn noise_budget(&self) -> i64 {
        self.budget_halves.div_euclid(2)
    }

    pub fn is_corrupted(&self) -> bool {
        self.budget_halves < 0
    }
}

#[derive(Debug, Clone)]
pub struct TrackedBackend {
    params: BackendParams,
    seed: u64,
}

impl TrackedBackend {
    pub fn new(params: BackendParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, seed: 0 })
    }

    /// Seed for the junk returned by corrupted decryptions.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn params(&self) -> &BackendParams {
        &self.params
    }

    /// Builds an evaluation context over a fresh tracked backend.
    pub fn context(params: BackendParams) -> Result<EvalContext<Self>> {
        Ok(EvalContext::new(Self::new(params)?))
    }

    fn zip(&self, a: &TrackedCt, b: &TrackedCt, cost: i64, f: impl Fn(u64, u64) -> u64) -> TrackedCt {
        TrackedCt {
            payload: a.payload.iter().zip(&b.payload).map(|(&x, &y)| f(x, y)).collect(),
            budget_halves: a.budget_halves.min(b.budget_halves) - cost,
        }
    }

    fn map(&self, a: &TrackedCt, f: impl Fn(u64) -> u64) -> TrackedCt {
        TrackedCt {
            payload: a.payload.iter().map(|&x| f(x)).collect(),
            budget_halves: a.budget_halves,
        }
    }
}

impl Backend for TrackedBackend {
    type Raw = TrackedCt;

    fn plaintext_modulus(&self) -> u64 {
        self.params.t
    }

    fn slots(&self) -> usize {
        self.params.slots
    }

    fn supports_batching(&self) -> bool {
        true
    }

    fn encrypt(&self, values: &[u64]) -> Result<TrackedCt> {
        if values.len() != self.params.slots {
            return Err(Error::SlotCount {
                expected: self.params.slots,
                got: values.len(),
            });
        }
        let t = self.params.t;
        Ok(TrackedCt {
            payload: values.iter().map(|v| v % t).collect(),
            budget_halves: 2 * i64::from(self.params.noise_budget_0),
        })
    }

    fn decrypt(&self, ct: &TrackedCt) -> Decryption {
        if ct.is_corrupted() {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            let t = self.params.t;
            return Decryption {
                values: (0..ct.payload.len()).map(|_| rng.gen_range(0..t)).collect(),
                corrupted: true,
            };
        }
        Decryption {
            values: ct.payload.clone(),
            corrupted: false,
        }
    }

    fn add(&self, a: &TrackedCt, b: &TrackedCt) -> TrackedCt {
        let t = self.params.t;
        self.zip(a, b, ADD_COST_HALVES, |x, y| add_mod(x, y, t))
    }

    fn sub(&self, a: &TrackedCt, b: &TrackedCt) -> TrackedCt {
        let t = self.params.t;
        self.zip(a, b, ADD_COST_HALVES, |x, y| add_mod(x, t - y, t))
    }

    fn mul(&self, a: &TrackedCt, b: &TrackedCt) -> Result<TrackedCt> {
        let t = self.params.t;
        Ok(self.zip(a, b, MUL_COST_HALVES, |x, y| mul_mod(x, y, t)))
    }

    fn add_plain(&self, a: &TrackedCt, k: u64) -> TrackedCt {
        let t = self.params.t;
        self.map(a, |x| add_mod(x, k, t))
    }

    fn mul_plain(&self, a: &TrackedCt, k: u64) -> TrackedCt {
        let t = self.params.t;
        self.map(a, |x| mul_mod(x, k, t))
    }

    fn negate(&self, a: &TrackedCt) -> TrackedCt {
        let t = self.params.t;
        self.map(a, |x| (t - x) % t)
    }
}

fn add_mod(x: u64, y: u64, t: u64) -> u64 {
    ((u128::from(x) + u128::from(y)) % u128::from(t)) as u64
}

fn mul_mod(x: u64, y: u64, t: u64) -> u64 {
    ((u128::from(x) * u128::from(y)) % u128::from(t)) as u64
}
