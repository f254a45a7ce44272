//! A small textbook BFV scheme over `Z_q[X]/(X^n + 1)`.
//!
//! This is a toy: parameters are chosen for testing, not security, and
//! there is no relinearization, so every multiplication grows the
//! ciphertext by one component. [`LatticeBackend`] exposes the scheme
//! through the [`Backend`] contract with one slot, the message living in
//! the constant coefficient.

mod keys;
mod poly;

use std::cell::RefCell;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::backend::{Backend, Decryption, EvalContext};
use crate::error::{Error, Result};
use poly::Poly;

pub use keys::{PublicKey, SecretKey, MAGIC};

/// Largest ciphertext arity `lat_mul` will produce.
pub const MAX_COMPONENTS: usize = 16;

/// Samples beyond this many standard deviations are never produced.
const GAUSSIAN_TAIL_CUT: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    pub n: usize,
    pub q: u64,
    pub t: u64,
    pub error_stddev: f64,
}

impl LatticeParams {
    pub const DEFAULT_ERROR_STDDEV: f64 = 3.2;

    pub fn new(n: usize, q: u64, t: u64) -> Result<Self> {
        let params = Self {
            n,
            q,
            t,
            error_stddev: Self::DEFAULT_ERROR_STDDEV,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_error_stddev(mut self, sigma: f64) -> Result<Self> {
        self.error_stddev = sigma;
        self.validate()?;
        Ok(self)
    }

    /// `floor(q / t)`, the scaling factor of encoded messages.
    pub fn delta(&self) -> u64 {
        self.q / self.t
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !self.n.is_power_of_two() || !(16..=4096).contains(&self.n) {
            return bad(format!("ring degree must be a power of two in 16..=4096, got {}", self.n));
        }
        if !((1 << 30)..=(1 << 62)).contains(&self.q) {
            return bad(format!("ciphertext modulus must lie in [2^30, 2^62], got {}", self.q));
        }
        if !(2..=(1 << 17)).contains(&self.t) {
            return bad(format!("plaintext modulus must lie in [2, 2^17], got {}", self.t));
        }
        if !(self.error_stddev.is_finite() && self.error_stddev > 0.0) {
            return bad(format!("error width must be positive, got {}", self.error_stddev));
        }
        // t <= 2^17 and q >= 2^30 already give t < q and delta >= 2.
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeCiphertext {
    components: Vec<Poly>,
    mult_depth: u32,
}

impl LatticeCiphertext {
    pub fn components(&self) -> &[Vec<u64>] {
        &self.components
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn mult_depth(&self) -> u32 {
        self.mult_depth
    }
}

fn rng_from(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn ternary(n: usize, rng: &mut impl RngCore) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-1..=1)).collect()
}

/// Discrete Gaussian by rejection from a uniform proposal on the cut
/// support.
pub fn sample_gaussian(sigma: f64, rng: &mut impl RngCore) -> i64 {
    let bound = (GAUSSIAN_TAIL_CUT * sigma).ceil() as i64;
    loop {
        let x = rng.gen_range(-bound..=bound);
        let accept = (-((x * x) as f64) / (2.0 * sigma * sigma)).exp();
        if rng.gen::<f64>() < accept {
            return x;
        }
    }
}

fn gaussian_poly(params: &LatticeParams, rng: &mut impl RngCore) -> Vec<i64> {
    (0..params.n).map(|_| sample_gaussian(params.error_stddev, rng)).collect()
}

fn reduce(coeffs: &[i64], q: u64) -> Poly {
    coeffs.iter().map(|&c| poly::from_signed(c, q)).collect()
}

/// Generates a key pair. Equal seeds give equal keys.
pub fn keygen(params: &LatticeParams, seed: u64) -> (SecretKey, PublicKey) {
    keygen_with_error(params, seed).0
}

/// Key generation that also returns the error polynomial, for tail checks.
pub fn keygen_with_error(params: &LatticeParams, seed: u64) -> ((SecretKey, PublicKey), Vec<i64>) {
    let mut rng = rng_from(seed, 0);
    let q = params.q;
    let s = ternary(params.n, &mut rng);
    let a: Poly = (0..params.n).map(|_| rng.gen_range(0..q)).collect();
    let e = gaussian_poly(params, &mut rng);
    let as_ = poly::mul(&a, &reduce(&s, q), q);
    let p0 = poly::neg(&poly::add(&as_, &reduce(&e, q), q), q);
    let sk = SecretKey { params: *params, s };
    let pk = PublicKey {
        params: *params,
        p0,
        p1: a,
    };
    ((sk, pk), e)
}

/// Encrypts a full plaintext polynomial of `n` residues mod t.
pub fn enc(pk: &PublicKey, m: &[u64], rng: &mut impl RngCore) -> Result<LatticeCiphertext> {
    let params = &pk.params;
    if m.len() != params.n {
        return Err(Error::InvalidParams(format!(
            "message must have {} coefficients, got {}",
            params.n,
            m.len()
        )));
    }
    if let Some(&bad) = m.iter().find(|&&x| x >= params.t) {
        return Err(Error::InvalidParams(format!(
            "message coefficient {bad} not reduced mod {}",
            params.t
        )));
    }
    let q = params.q;
    let u = reduce(&ternary(params.n, rng), q);
    let e1 = reduce(&gaussian_poly(params, rng), q);
    let e2 = reduce(&gaussian_poly(params, rng), q);
    let scaled = poly::scalar_mul(m, params.delta(), q);
    let c0 = poly::add(&poly::add(&poly::mul(&pk.p0, &u, q), &e1, q), &scaled, q);
    let c1 = poly::add(&poly::mul(&pk.p1, &u, q), &e2, q);
    Ok(LatticeCiphertext {
        components: vec![c0, c1],
        mult_depth: 0,
    })
}

/// `sum_i c_i * s^i mod q`, centered.
fn phase(sk: &SecretKey, c: &LatticeCiphertext) -> Vec<i64> {
    let q = sk.params.q;
    let s = reduce(&sk.s, q);
    let mut acc = c.components[0].clone();
    let mut power = s.clone();
    for (i, comp) in c.components.iter().enumerate().skip(1) {
        if i > 1 {
            power = poly::mul(&power, &s, q);
        }
        acc = poly::add(&acc, &poly::mul(comp, &power, q), q);
    }
    acc.iter().map(|&x| poly::center(x, q)).collect()
}

/// `round(t * x / q)` without the final reduction mod t.
fn nearest_message(x: i64, params: &LatticeParams) -> i128 {
    let (t, q) = (params.t as i128, params.q as i128);
    (2 * t * x as i128 + q).div_euclid(2 * q)
}

fn decode(x: &[i64], params: &LatticeParams) -> Vec<u64> {
    x.iter()
        .map(|&xi| nearest_message(xi, params).rem_euclid(params.t as i128) as u64)
        .collect()
}

fn budget_of(x: &[i64], params: &LatticeParams) -> i64 {
    let delta = params.delta() as i128;
    let worst = x
        .iter()
        .map(|&xi| (xi as i128 - delta * nearest_message(xi, params)).unsigned_abs())
        .max()
        .unwrap_or(0)
        .max(1);
    let headroom = (params.q as f64 / (2.0 * params.t as f64)).log2();
    (headroom - (worst as f64).log2()).floor() as i64
}

pub fn dec(sk: &SecretKey, c: &LatticeCiphertext) -> Vec<u64> {
    decode(&phase(sk, c), &sk.params)
}

/// Remaining noise headroom in bits. Positive means decryption is exact.
///
/// The noise is measured against the nearest multiple of delta, so once it
/// has grown past the decryption threshold the reading saturates near zero
/// rather than going arbitrarily negative.
pub fn noise_budget(sk: &SecretKey, c: &LatticeCiphertext) -> i64 {
    budget_of(&phase(sk, c), &sk.params)
}

fn zip_padded(params: &LatticeParams, a: &LatticeCiphertext, b: &LatticeCiphertext, f: fn(&[u64], &[u64], u64) -> Poly) -> Vec<Poly> {
    let zero = poly::zero(params.n);
    (0..a.arity().max(b.arity()))
        .map(|i| {
            let x = a.components.get(i).unwrap_or(&zero);
            let y = b.components.get(i).unwrap_or(&zero);
            f(x, y, params.q)
        })
        .collect()
}

pub fn lat_add(params: &LatticeParams, a: &LatticeCiphertext, b: &LatticeCiphertext) -> LatticeCiphertext {
    LatticeCiphertext {
        components: zip_padded(params, a, b, poly::add),
        mult_depth: a.mult_depth.max(b.mult_depth),
    }
}

pub fn lat_sub(params: &LatticeParams, a: &LatticeCiphertext, b: &LatticeCiphertext) -> LatticeCiphertext {
    LatticeCiphertext {
        components: zip_padded(params, a, b, poly::sub),
        mult_depth: a.mult_depth.max(b.mult_depth),
    }
}

pub fn lat_mul(params: &LatticeParams, a: &LatticeCiphertext, b: &LatticeCiphertext) -> Result<LatticeCiphertext> {
    let components = a.arity() + b.arity() - 1;
    if components > MAX_COMPONENTS {
        return Err(Error::DepthGuard {
            components,
            limit: MAX_COMPONENTS,
        });
    }
    Ok(LatticeCiphertext {
        components: poly::tensor_scaled(&a.components, &b.components, params.t, params.q),
        mult_depth: a.mult_depth.max(b.mult_depth) + 1,
    })
}

/// Componentwise negation.
pub fn lat_negate(params: &LatticeParams, a: &LatticeCiphertext) -> LatticeCiphertext {
    LatticeCiphertext {
        components: a.components.iter().map(|c| poly::neg(c, params.q)).collect(),
        mult_depth: a.mult_depth,
    }
}

/// Adds the constant `k` (mod t) to the plaintext's constant coefficient.
pub fn lat_add_plain(params: &LatticeParams, a: &LatticeCiphertext, k: u64) -> LatticeCiphertext {
    let mut out = a.clone();
    let q = params.q;
    let shift = poly::mul_mod(k % params.t, params.delta(), q);
    out.components[0][0] = (out.components[0][0] + shift) % q;
    out
}

/// Scales by the constant `k` (mod t), using its centered representative
/// so that e.g. `t - 1` costs as little noise as `-1`.
pub fn lat_mul_plain(params: &LatticeParams, a: &LatticeCiphertext, k: u64) -> LatticeCiphertext {
    let centered = crate::types::center(k % params.t, params.t);
    let k_q = poly::from_signed(centered, params.q);
    LatticeCiphertext {
        components: a.components.iter().map(|c| poly::scalar_mul(c, k_q, params.q)).collect(),
        mult_depth: a.mult_depth,
    }
}

/// The lattice scheme behind the [`Backend`] contract. Holds both keys so
/// that the evaluation context can decrypt; one slot only.
#[derive(Debug)]
pub struct LatticeBackend {
    params: LatticeParams,
    sk: SecretKey,
    pk: PublicKey,
    rng: RefCell<ChaCha20Rng>,
}

impl LatticeBackend {
    /// Generates fresh keys from `seed`; encryption randomness comes from a
    /// separate stream of the same seed.
    pub fn new(params: LatticeParams, seed: u64) -> Self {
        let (sk, pk) = keygen(&params, seed);
        Self {
            params,
            sk,
            pk,
            rng: RefCell::new(rng_from(seed, 1)),
        }
    }

    pub fn from_keys(sk: SecretKey, pk: PublicKey, seed: u64) -> Result<Self> {
        if sk.params != pk.params {
            return Err(Error::InvalidParams("secret and public key parameters differ".into()));
        }
        Ok(Self {
            params: sk.params,
            sk,
            pk,
            rng: RefCell::new(rng_from(seed, 1)),
        })
    }

    /// Builds an evaluation context; the lattice backend has exactly one slot.
    pub fn context(params: LatticeParams, seed: u64, slots: usize) -> Result<EvalContext<Self>> {
        if slots != 1 {
            return Err(Error::BatchingUnsupported { slots });
        }
        Ok(EvalContext::new(Self::new(params, seed)))
    }

    pub fn params(&self) -> &LatticeParams {
        &self.params
    }

    pub fn secret_key(&self) -> &SecretKey {
        &self.sk
    }

    pub fn public_key(&self) -> &PublicKey {
        &self.pk
    }

    pub fn noise_budget(&self, ct: &LatticeCiphertext) -> i64 {
        noise_budget(&self.sk, ct)
    }
}

impl Backend for LatticeBackend {
    type Raw = LatticeCiphertext;

    fn plaintext_modulus(&self) -> u64 {
        self.params.t
    }

    fn slots(&self) -> usize {
        1
    }

    fn supports_batching(&self) -> bool {
        false
    }

    fn encrypt(&self, values: &[u64]) -> Result<LatticeCiphertext> {
        if values.len() != 1 {
            return Err(Error::SlotCount {
                expected: 1,
                got: values.len(),
            });
        }
        let mut m = vec![0; self.params.n];
        m[0] = values[0] % self.params.t;
        enc(&self.pk, &m, &mut *self.rng.borrow_mut())
    }

    fn decrypt(&self, ct: &LatticeCiphertext) -> Decryption {
        let x = phase(&self.sk, ct);
        Decryption {
            values: vec![decode(&x[..1], &self.params)[0]],
            corrupted: budget_of(&x, &self.params) <= 0,
        }
    }

    fn add(&self, a: &LatticeCiphertext, b: &LatticeCiphertext) -> LatticeCiphertext {
        lat_add(&self.params, a, b)
    }

    fn sub(&self, a: &LatticeCiphertext, b: &LatticeCiphertext) -> LatticeCiphertext {
        lat_sub(&self.params, a, b)
    }

    fn mul(&self, a: &LatticeCiphertext, b: &LatticeCiphertext) -> Result<LatticeCiphertext> {
        lat_mul(&self.params, a, b)
    }

    fn add_plain(&self, a: &LatticeCiphertext, k: u64) -> LatticeCiphertext {
        lat_add_plain(&self.params, a, k)
    }

    fn mul_plain(&self, a: &LatticeCiphertext, k: u64) -> LatticeCiphertext {
        lat_mul_plain(&self.params, a, k)
    }

    fn negate(&self, a: &LatticeCiphertext) -> LatticeCiphertext {
        lat_negate(&self.params, a)
    }
}
