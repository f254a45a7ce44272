//! User-facing secure types.
//!
//! * [`SecureUint`] / [`SecureInt`]: `s`-bit words of encrypted bits with
//!   bit-level (Boolean circuit) arithmetic, unsigned and two's complement.
//! * [`SecureBool`]: a single encrypted bit.
//! * [`SecureMod`]: one ciphertext holding a residue mod `t`, operated on
//!   with the scheme's native arithmetic.
//!
//! Fallible `try_*` methods and comparisons return [`Result`]; the
//! `std::ops` impls on references call them and panic on error (context or
//! width mismatch, lattice depth guard).
//!
//! Conversions between the two worlds live in [`crate::convert`]. The only
//! implicit one is `SecureBool -> SecureMod`, which is free.

use std::fmt;
use std::ops;

use crate::backend::{Backend, Ciphertext, EvalContext};
use crate::circuits::{self, BitWord};
use crate::convert;
use crate::error::Result;
use crate::gates::{self, Bit};

pub struct SecureBool<'c, B: Backend> {
    bit: Bit<'c, B>,
}

pub struct SecureUint<'c, B: Backend> {
    word: BitWord<'c, B>,
}

pub struct SecureInt<'c, B: Backend> {
    word: BitWord<'c, B>,
}

pub struct SecureMod<'c, B: Backend> {
    ctx: &'c EvalContext<B>,
    ct: Ciphertext<B::Raw>,
}

macro_rules! impl_clone_debug {
    ($ty:ident, $field:ident) => {
        impl<B: Backend> Clone for $ty<'_, B> {
            fn clone(&self) -> Self {
                Self {
                    $field: self.$field.clone(),
                }
            }
        }

        impl<B: Backend> fmt::Debug for $ty<'_, B> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_struct(stringify!($ty)).field(stringify!($field), &self.$field).finish()
            }
        }
    };
}

impl_clone_debug!(SecureBool, bit);
impl_clone_debug!(SecureUint, word);
impl_clone_debug!(SecureInt, word);

impl<B: Backend> Clone for SecureMod<'_, B> {
    fn clone(&self) -> Self {
        Self {
            ctx: self.ctx,
            ct: self.ct.clone(),
        }
    }
}

impl<B: Backend> fmt::Debug for SecureMod<'_, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SecureMod").field("ct", &self.ct).finish()
    }
}

impl<'c, B: Backend> SecureBool<'c, B> {
    pub fn encrypt(ctx: &'c EvalContext<B>, values: &[bool]) -> Result<Self> {
        Ok(Self {
            bit: Bit::encrypt(ctx, values)?,
        })
    }

    pub fn constant(ctx: &'c EvalContext<B>, value: bool) -> Result<Self> {
        Ok(Self {
            bit: Bit::constant(ctx, value)?,
        })
    }

    pub fn from_bit(bit: Bit<'c, B>) -> Self {
        Self { bit }
    }

    pub fn bit(&self) -> &Bit<'c, B> {
        &self.bit
    }

    pub fn into_bit(self) -> Bit<'c, B> {
        self.bit
    }

    pub fn ctx(&self) -> &'c EvalContext<B> {
        self.bit.ctx()
    }

    pub fn decrypt(&self) -> Vec<bool> {
        self.bit.decrypt().into_iter().map(|v| v == 1).collect()
    }

    pub fn try_not(&self) -> Result<Self> {
        Ok(Self {
            bit: gates::not(&self.bit)?,
        })
    }

    pub fn try_and(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            bit: gates::and(&self.bit, &other.bit)?,
        })
    }

    pub fn try_or(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            bit: gates::or(&self.bit, &other.bit)?,
        })
    }

    pub fn try_xor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            bit: gates::xor(&self.bit, &other.bit)?,
        })
    }

    /// Reuses the bit ciphertext as a residue in `{0, 1}`; costs nothing.
    pub fn to_mod(&self) -> SecureMod<'c, B> {
        SecureMod {
            ctx: self.ctx(),
            ct: self.bit.ciphertext().clone(),
        }
    }

    /// Multiplexes a word: `self * a` with one AND gate per bit.
    pub fn select_uint(&self, a: &SecureUint<'c, B>) -> Result<SecureUint<'c, B>> {
        Ok(SecureUint {
            word: circuits::bool_mul(&self.bit, &a.word)?,
        })
    }

    pub fn select_int(&self, a: &SecureInt<'c, B>) -> Result<SecureInt<'c, B>> {
        Ok(SecureInt {
            word: circuits::bool_mul(&self.bit, &a.word)?,
        })
    }

    /// `self * a` in modular arithmetic: one native multiplication.
    pub fn select_mod(&self, a: &SecureMod<'c, B>) -> Result<SecureMod<'c, B>> {
        self.to_mod().try_mul(a)
    }
}

impl<'c, B: Backend> From<SecureBool<'c, B>> for SecureMod<'c, B> {
    fn from(b: SecureBool<'c, B>) -> Self {
        b.to_mod()
    }
}

macro_rules! word_type {
    ($ty:ident, $lt:path, $gt:path) => {
        impl<'c, B: Backend> $ty<'c, B> {
            pub fn from_word(word: BitWord<'c, B>) -> Self {
                Self { word }
            }

            /// Encrypts the same value into every slot.
            pub fn constant(ctx: &'c EvalContext<B>, width: usize, value: i64) -> Result<Self> {
                Ok(Self {
                    word: BitWord::constant(ctx, width, value)?,
                })
            }

            /// Zero-extends a bit (`SecureInt<S>(cond)` in C++ terms).
            pub fn from_bool(b: &SecureBool<'c, B>, width: usize) -> Result<Self> {
                Ok(Self {
                    word: BitWord::from_bit(b.bit(), width)?,
                })
            }

            pub fn word(&self) -> &BitWord<'c, B> {
                &self.word
            }

            pub fn into_word(self) -> BitWord<'c, B> {
                self.word
            }

            pub fn width(&self) -> usize {
                self.word.width()
            }

            pub fn ctx(&self) -> &'c EvalContext<B> {
                self.word.ctx()
            }

            pub fn mult_depth(&self) -> u32 {
                self.word.mult_depth()
            }

            pub fn try_add(&self, other: &Self) -> Result<Self> {
                Ok(Self {
                    word: circuits::add(&self.word, &other.word)?,
                })
            }

            pub fn try_sub(&self, other: &Self) -> Result<Self> {
                Ok(Self {
                    word: circuits::sub(&self.word, &other.word)?,
                })
            }

            pub fn try_mul(&self, other: &Self) -> Result<Self> {
                Ok(Self {
                    word: circuits::mul(&self.word, &other.word)?,
                })
            }

            pub fn try_neg(&self) -> Result<Self> {
                Ok(Self {
                    word: circuits::neg(&self.word)?,
                })
            }

            /// Bitwise complement.
            pub fn try_not(&self) -> Result<Self> {
                let bits = self.word.bits().iter().map(gates::not).collect::<Result<Vec<_>>>()?;
                Ok(Self {
                    word: BitWord::from_bits(bits)?,
                })
            }

            pub fn equals(&self, other: &Self) -> Result<SecureBool<'c, B>> {
                Ok(SecureBool::from_bit(circuits::eq(&self.word, &other.word)?))
            }

            pub fn not_equals(&self, other: &Self) -> Result<SecureBool<'c, B>> {
                Ok(SecureBool::from_bit(circuits::ne(&self.word, &other.word)?))
            }

            pub fn less_than(&self, other: &Self) -> Result<SecureBool<'c, B>> {
                Ok(SecureBool::from_bit($lt(&self.word, &other.word)?))
            }

            pub fn greater_than(&self, other: &Self) -> Result<SecureBool<'c, B>> {
                Ok(SecureBool::from_bit($gt(&self.word, &other.word)?))
            }
        }

        impl<'c, B: Backend> ops::Add for &$ty<'c, B> {
            type Output = $ty<'c, B>;
            fn add(self, rhs: Self) -> $ty<'c, B> {
                self.try_add(rhs).expect("homomorphic add")
            }
        }

        impl<'c, B: Backend> ops::Sub for &$ty<'c, B> {
            type Output = $ty<'c, B>;
            fn sub(self, rhs: Self) -> $ty<'c, B> {
                self.try_sub(rhs).expect("homomorphic sub")
            }
        }

        impl<'c, B: Backend> ops::Mul for &$ty<'c, B> {
            type Output = $ty<'c, B>;
            fn mul(self, rhs: Self) -> $ty<'c, B> {
                self.try_mul(rhs).expect("homomorphic mul")
            }
        }

        impl<'c, B: Backend> ops::Neg for &$ty<'c, B> {
            type Output = $ty<'c, B>;
            fn neg(self) -> $ty<'c, B> {
                self.try_neg().expect("homomorphic neg")
            }
        }

        impl<'c, B: Backend> ops::Not for &$ty<'c, B> {
            type Output = $ty<'c, B>;
            fn not(self) -> $ty<'c, B> {
                self.try_not().expect("homomorphic not")
            }
        }

        impl<'c, B: Backend> ops::Mul<&$ty<'c, B>> for &SecureBool<'c, B> {
            type Output = $ty<'c, B>;
            fn mul(self, rhs: &$ty<'c, B>) -> $ty<'c, B> {
                $ty {
                    word: circuits::bool_mul(&self.bit, &rhs.word).expect("homomorphic select"),
                }
            }
        }
    };
}

word_type!(SecureUint, circuits::lt_u, circuits::gt_u);
word_type!(SecureInt, circuits::lt_s, circuits::gt_s);

impl<'c, B: Backend> SecureUint<'c, B> {
    pub fn encrypt(ctx: &'c EvalContext<B>, width: usize, values: &[u64]) -> Result<Self> {
        let signed: Vec<i64> = values.iter().map(|&v| v as i64).collect();
        Ok(Self {
            word: BitWord::encrypt(ctx, width, &signed)?,
        })
    }

    pub fn decrypt(&self) -> Vec<u64> {
        self.word.decrypt()
    }

    /// Reinterprets the bits as two's complement.
    pub fn as_int(&self) -> SecureInt<'c, B> {
        SecureInt {
            word: self.word.clone(),
        }
    }

    /// Horner fold into a residue; additions only.
    pub fn to_mod(&self) -> Result<SecureMod<'c, B>> {
        convert::uint_to_mod(self)
    }

    pub fn from_mod(x: &SecureMod<'c, B>, width: usize) -> Result<Self> {
        convert::mod_to_uint(x, width)
    }
}

impl<'c, B: Backend> SecureInt<'c, B> {
    pub fn encrypt(ctx: &'c EvalContext<B>, width: usize, values: &[i64]) -> Result<Self> {
        Ok(Self {
            word: BitWord::encrypt(ctx, width, values)?,
        })
    }

    pub fn decrypt(&self) -> Vec<i64> {
        self.word.decrypt_signed()
    }

    /// Reinterprets the bits as unsigned.
    pub fn as_uint(&self) -> SecureUint<'c, B> {
        SecureUint {
            word: self.word.clone(),
        }
    }

    pub fn to_mod(&self) -> Result<SecureMod<'c, B>> {
        convert::int_to_mod(self)
    }

    pub fn from_mod(x: &SecureMod<'c, B>, width: usize) -> Result<Self> {
        convert::mod_to_int(x, width)
    }
}

impl<'c, B: Backend> SecureMod<'c, B> {
    pub fn encrypt(ctx: &'c EvalContext<B>, values: &[i64]) -> Result<Self> {
        Ok(Self {
            ctx,
            ct: ctx.encrypt(values)?,
        })
    }

    pub fn constant(ctx: &'c EvalContext<B>, value: i64) -> Result<Self> {
        Ok(Self {
            ctx,
            ct: ctx.encrypt_scalar(value)?,
        })
    }

    pub fn from_ciphertext(ctx: &'c EvalContext<B>, ct: Ciphertext<B::Raw>) -> Self {
        Self { ctx, ct }
    }

    pub fn ctx(&self) -> &'c EvalContext<B> {
        self.ctx
    }

    pub fn ciphertext(&self) -> &Ciphertext<B::Raw> {
        &self.ct
    }

    pub fn mult_depth(&self) -> u32 {
        self.ct.mult_depth()
    }

    /// Residues in `[0, t)`.
    pub fn decrypt(&self) -> Vec<u64> {
        self.ctx.decrypt(&self.ct).values
    }

    /// Residues lifted to `(-t/2, t/2]`.
    pub fn decrypt_centered(&self) -> Vec<i64> {
        let t = self.ctx.plaintext_modulus();
        self.decrypt().into_iter().map(|r| center(r, t)).collect()
    }

    /// Reinterprets the residue as a bit. The caller guarantees it is 0 or 1.
    pub fn as_bool(&self) -> SecureBool<'c, B> {
        SecureBool::from_bit(Bit::from_ciphertext(self.ctx, self.ct.clone()))
    }

    fn wrap(&self, ct: Ciphertext<B::Raw>) -> Self {
        Self { ctx: self.ctx, ct }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(self.wrap(self.ctx.add(&self.ct, &other.ct)?))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(self.wrap(self.ctx.sub(&self.ct, &other.ct)?))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(self.wrap(self.ctx.mul(&self.ct, &other.ct)?))
    }

    pub fn add_plain(&self, k: impl Into<i128>) -> Result<Self> {
        Ok(self.wrap(self.ctx.add_plain(&self.ct, k)?))
    }

    pub fn sub_plain(&self, k: impl Into<i128>) -> Result<Self> {
        Ok(self.wrap(self.ctx.sub_plain(&self.ct, k)?))
    }

    /// `k - self`.
    pub fn plain_sub(&self, k: impl Into<i128>) -> Result<Self> {
        Ok(self.wrap(self.ctx.plain_sub(k, &self.ct)?))
    }

    pub fn mul_plain(&self, k: impl Into<i128>) -> Result<Self> {
        Ok(self.wrap(self.ctx.mul_plain(&self.ct, k)?))
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        convert::mod_pow(self, e)
    }

    /// Sum of a non-empty list, as a balanced tree.
    pub fn sum(items: &[Self]) -> Result<Self> {
        circuits::tree_reduce(items, Self::try_add).expect("sum of an empty list")
    }

    /// Product of a list as a balanced tree; the empty product is an
    /// encryption of 1.
    pub fn product(ctx: &'c EvalContext<B>, items: &[Self]) -> Result<Self> {
        circuits::tree_reduce(items, Self::try_mul).unwrap_or_else(|| Self::constant(ctx, 1))
    }
}

/// Lifts a residue mod `t` to the centered range `(-t/2, t/2]`.
pub fn center(r: u64, t: u64) -> i64 {
    if r > t / 2 {
        -((t - r) as i64)
    } else {
        r as i64
    }
}

impl<'c, B: Backend> ops::Add for &SecureMod<'c, B> {
    type Output = SecureMod<'c, B>;
    fn add(self, rhs: Self) -> SecureMod<'c, B> {
        self.try_add(rhs).expect("homomorphic add")
    }
}

impl<'c, B: Backend> ops::Sub for &SecureMod<'c, B> {
    type Output = SecureMod<'c, B>;
    fn sub(self, rhs: Self) -> SecureMod<'c, B> {
        self.try_sub(rhs).expect("homomorphic sub")
    }
}

impl<'c, B: Backend> ops::Mul for &SecureMod<'c, B> {
    type Output = SecureMod<'c, B>;
    fn mul(self, rhs: Self) -> SecureMod<'c, B> {
        self.try_mul(rhs).expect("homomorphic mul")
    }
}

impl<'c, B: Backend> ops::Mul<&SecureMod<'c, B>> for &SecureBool<'c, B> {
    type Output = SecureMod<'c, B>;
    fn mul(self, rhs: &SecureMod<'c, B>) -> SecureMod<'c, B> {
        self.select_mod(rhs).expect("homomorphic mul")
    }
}

impl<'c, B: Backend> ops::Not for &SecureBool<'c, B> {
    type Output = SecureBool<'c, B>;
    fn not(self) -> SecureBool<'c, B> {
        self.try_not().expect("homomorphic not")
    }
}
