//! Bridged homomorphic arithmetic.
//!
//! Programs mix two representations under one key set: bit-level words
//! ([`SecureUint`], [`SecureInt`], [`SecureBool`]) evaluated as Boolean
//! circuits of homomorphic gates, and native residues ([`SecureMod`]) using
//! the scheme's own addition and multiplication. Conversions in
//! [`convert`] move values between the two.
//!
//! Two backends implement the [`Backend`] contract: [`TrackedBackend`],
//! which meters operations over clear residues (with batching and a
//! simulated noise budget), and [`LatticeBackend`], a small textbook BFV
//! scheme over `Z_q[X]/(X^n + 1)`.
//!
//! ```
//! use fhebridge::convert::int_to_mod;
//! use fhebridge::{BackendParams, SecureInt, TrackedBackend};
//!
//! let ctx = TrackedBackend::context(BackendParams::new(65537, 1))?;
//! let a = SecureInt::encrypt(&ctx, 8, &[-5])?;
//! let b = SecureInt::encrypt(&ctx, 8, &[7])?;
//! let smaller = a.less_than(&b)?;
//! let product = int_to_mod(&a)?.try_mul(&int_to_mod(&b)?)?;
//! assert_eq!((&smaller * &product).decrypt_centered(), vec![-35]);
//! # Ok::<(), fhebridge::Error>(())
//! ```

pub mod backend;
pub mod bench;
pub mod circuits;
pub mod convert;
pub mod error;
pub mod gates;
pub mod lattice;
pub mod tracked;
pub mod types;

pub use backend::{Backend, BackendParams, Ciphertext, CostReport, Decryption, EvalContext};
pub use error::{Error, Result};
pub use lattice::{LatticeBackend, LatticeParams};
pub use tracked::TrackedBackend;
pub use types::{SecureBool, SecureInt, SecureMod, SecureUint};
