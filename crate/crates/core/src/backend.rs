//! The homomorphic backend contract and the metered evaluation context.
//!
//! A [`Backend`] knows how to encrypt, decrypt and combine raw ciphertexts.
//! [`EvalContext`] wraps a backend, stamps every ciphertext with depth
//! metadata and the owning context, and counts every operation in a
//! [`CostMeter`]. All higher layers (gates, circuits, secure types,
//! benchmarks) go through the context, so the meter sees the true cost of
//! every program.

use std::cell::RefCell;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Parameters shared by every backend: plaintext modulus and slot count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackendParams {
    pub t: u64,
    pub slots: usize,
    /// Initial simulated noise budget in bits (tracked-plaintext backend only).
    pub noise_budget_0: u32,
}

impl BackendParams {
    pub const DEFAULT_NOISE_BUDGET: u32 = 880;

    pub fn new(t: u64, slots: usize) -> Self {
        Self {
            t,
            slots,
            noise_budget_0: Self::DEFAULT_NOISE_BUDGET,
        }
    }

    pub fn with_noise_budget(mut self, bits: u32) -> Self {
        self.noise_budget_0 = bits;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.t < 2 {
            return Err(Error::InvalidParams(format!(
                "plaintext modulus must be at least 2, got {}",
                self.t
            )));
        }
        if self.slots < 1 {
            return Err(Error::InvalidParams("slot count must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of a decryption. `corrupted` is set when the backend detected that
/// the noise exceeded its budget; the values are then meaningless.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decryption {
    pub values: Vec<u64>,
    pub corrupted: bool,
}

/// A raw homomorphic scheme. Implementations do not meter anything; the
/// [`EvalContext`] is responsible for accounting.
///
/// Plaintext constants passed to the `*_plain` methods are already reduced
/// into `[0, t)`.
pub trait Backend {
    type Raw: Clone + fmt::Debug;

    fn plaintext_modulus(&self) -> u64;
    fn slots(&self) -> usize;
    fn supports_batching(&self) -> bool;

    fn encrypt(&self, values: &[u64]) -> Result<Self::Raw>;
    fn decrypt(&self, ct: &Self::Raw) -> Decryption;

    fn add(&self, a: &Self::Raw, b: &Self::Raw) -> Self::Raw;
    fn sub(&self, a: &Self::Raw, b: &Self::Raw) -> Self::Raw;
    fn mul(&self, a: &Self::Raw, b: &Self::Raw) -> Result<Self::Raw>;

    fn add_plain(&self, a: &Self::Raw, k: u64) -> Self::Raw;
    fn mul_plain(&self, a: &Self::Raw, k: u64) -> Self::Raw;
    fn negate(&self, a: &Self::Raw) -> Self::Raw;
}

/// A ciphertext owned by one evaluation context, with its depth metadata.
#[derive(Debug, Clone)]
pub struct Ciphertext<R> {
    raw: R,
    mult_depth: u32,
    add_depth: u32,
    context: u64,
}

impl<R> Ciphertext<R> {
    pub fn raw(&self) -> &R {
        &self.raw
    }

    pub fn mult_depth(&self) -> u32 {
        self.mult_depth
    }

    pub fn add_depth(&self) -> u32 {
        self.add_depth
    }

    pub fn context_id(&self) -> u64 {
        self.context
    }
}

/// Running operation counters of one evaluation context.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CostMeter {
    pub ct_adds: u64,
    pub ct_mults: u64,
    pub pt_ops: u64,
    pub max_mult_depth: u32,
    pub max_add_depth: u32,
}

/// A snapshot of a [`CostMeter`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CostReport {
    pub ct_adds: u64,
    pub ct_mults: u64,
    pub pt_ops: u64,
    pub add_depth: u32,
    pub mult_depth: u32,
}

impl CostReport {
    /// Operation counts accumulated since `earlier`. Depths are maxima, so
    /// they are taken from `self` unchanged.
    pub fn since(&self, earlier: &CostReport) -> CostReport {
        CostReport {
            ct_adds: self.ct_adds - earlier.ct_adds,
            ct_mults: self.ct_mults - earlier.ct_mults,
            pt_ops: self.pt_ops - earlier.pt_ops,
            add_depth: self.add_depth,
            mult_depth: self.mult_depth,
        }
    }
}

static NEXT_CONTEXT_ID: AtomicU64 = AtomicU64::new(1);

/// A backend plus an operation meter. Not `Sync`: one context belongs to a
/// single thread of evaluation, while independent contexts can run in
/// parallel.
pub struct EvalContext<B: Backend> {
    backend: B,
    id: u64,
    meter: RefCell<CostMeter>,
}

impl<B: Backend + fmt::Debug> fmt::Debug for EvalContext<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvalContext")
            .field("backend", &self.backend)
            .field("id", &self.id)
            .field("meter", &*self.meter.borrow())
            .finish()
    }
}

impl<B: Backend> EvalContext<B> {
    pub fn new(backend: B) -> Self {
        Self {
            backend,
            id: NEXT_CONTEXT_ID.fetch_add(1, Ordering::Relaxed),
            meter: RefCell::new(CostMeter::default()),
        }
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn plaintext_modulus(&self) -> u64 {
        self.backend.plaintext_modulus()
    }

    pub fn slots(&self) -> usize {
        self.backend.slots()
    }

    /// Reduces a signed integer into `[0, t)`.
    pub fn reduce(&self, value: impl Into<i128>) -> u64 {
        value.into().rem_euclid(i128::from(self.plaintext_modulus())) as u64
    }

    pub fn meter_snapshot(&self) -> CostReport {
        let m = self.meter.borrow();
        CostReport {
            ct_adds: m.ct_adds,
            ct_mults: m.ct_mults,
            pt_ops: m.pt_ops,
            add_depth: m.max_add_depth,
            mult_depth: m.max_mult_depth,
        }
    }

    /// Encrypts one value per slot. Values are reduced mod `t` on entry.
    pub fn encrypt(&self, values: &[i64]) -> Result<Ciphertext<B::Raw>> {
        if values.len() != self.slots() {
            return Err(Error::SlotCount {
                expected: self.slots(),
                got: values.len(),
            });
        }
        let reduced: Vec<u64> = values.iter().map(|&v| self.reduce(v)).collect();
        let raw = self.backend.encrypt(&reduced)?;
        Ok(self.wrap(raw, 0, 0))
    }

    /// Encrypts the same value into every slot.
    pub fn encrypt_scalar(&self, value: i64) -> Result<Ciphertext<B::Raw>> {
        self.encrypt(&vec![value; self.slots()])
    }

    pub fn decrypt(&self, ct: &Ciphertext<B::Raw>) -> Decryption {
        self.backend.decrypt(&ct.raw)
    }

    pub fn add(&self, a: &Ciphertext<B::Raw>, b: &Ciphertext<B::Raw>) -> Result<Ciphertext<B::Raw>> {
        self.check_pair(a, b)?;
        let raw = self.backend.add(&a.raw, &b.raw);
        Ok(self.additive(raw, a, b))
    }

    pub fn sub(&self, a: &Ciphertext<B::Raw>, b: &Ciphertext<B::Raw>) -> Result<Ciphertext<B::Raw>> {
        self.check_pair(a, b)?;
        let raw = self.backend.sub(&a.raw, &b.raw);
        Ok(self.additive(raw, a, b))
    }

    pub fn mul(&self, a: &Ciphertext<B::Raw>, b: &Ciphertext<B::Raw>) -> Result<Ciphertext<B::Raw>> {
        self.check_pair(a, b)?;
        let raw = self.backend.mul(&a.raw, &b.raw)?;
        let mult_depth = a.mult_depth.max(b.mult_depth) + 1;
        let add_depth = a.add_depth.max(b.add_depth);
        let mut m = self.meter.borrow_mut();
        m.ct_mults += 1;
        m.max_mult_depth = m.max_mult_depth.max(mult_depth);
        drop(m);
        Ok(self.wrap(raw, mult_depth, add_depth))
    }

    pub fn add_plain(&self, a: &Ciphertext<B::Raw>, k: impl Into<i128>) -> Result<Ciphertext<B::Raw>> {
        self.check(a)?;
        let raw = self.backend.add_plain(&a.raw, self.reduce(k));
        Ok(self.plain(raw, a))
    }

    pub fn sub_plain(&self, a: &Ciphertext<B::Raw>, k: impl Into<i128>) -> Result<Ciphertext<B::Raw>> {
        self.check(a)?;
        let neg_k = self.reduce(-k.into());
        let raw = self.backend.add_plain(&a.raw, neg_k);
        Ok(self.plain(raw, a))
    }

    /// Computes `k - a` as a single plaintext-mixed operation.
    pub fn plain_sub(&self, k: impl Into<i128>, a: &Ciphertext<B::Raw>) -> Result<Ciphertext<B::Raw>> {
        self.check(a)?;
        let raw = self.backend.add_plain(&self.backend.negate(&a.raw), self.reduce(k));
        Ok(self.plain(raw, a))
    }

    pub fn mul_plain(&self, a: &Ciphertext<B::Raw>, k: impl Into<i128>) -> Result<Ciphertext<B::Raw>> {
        self.check(a)?;
        let raw = self.backend.mul_plain(&a.raw, self.reduce(k));
        Ok(self.plain(raw, a))
    }

    fn wrap(&self, raw: B::Raw, mult_depth: u32, add_depth: u32) -> Ciphertext<B::Raw> {
        Ciphertext {
            raw,
            mult_depth,
            add_depth,
            context: self.id,
        }
    }

    fn additive(&self, raw: B::Raw, a: &Ciphertext<B::Raw>, b: &Ciphertext<B::Raw>) -> Ciphertext<B::Raw> {
        let mult_depth = a.mult_depth.max(b.mult_depth);
        let add_depth = a.add_depth.max(b.add_depth) + 1;
        let mut m = self.meter.borrow_mut();
        m.ct_adds += 1;
        m.max_add_depth = m.max_add_depth.max(add_depth);
        drop(m);
        self.wrap(raw, mult_depth, add_depth)
    }

    fn plain(&self, raw: B::Raw, a: &Ciphertext<B::Raw>) -> Ciphertext<B::Raw> {
        self.meter.borrow_mut().pt_ops += 1;
        self.wrap(raw, a.mult_depth, a.add_depth)
    }

    fn check(&self, a: &Ciphertext<B::Raw>) -> Result<()> {
        if a.context != self.id {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    fn check_pair(&self, a: &Ciphertext<B::Raw>, b: &Ciphertext<B::Raw>) -> Result<()> {
        self.check(a)?;
        self.check(b)
    }
}
