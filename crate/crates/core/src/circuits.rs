//! Combinational circuits over encrypted bits.
//!
//! Words are little-endian (`bits[0]` is the LSB) and all arithmetic wraps
//! modulo `2^s`. Every gate goes through [`crate::gates`], so the context
//! meter records the true cost of each circuit. The circuits are the
//! canonical textbook forms: ripple-carry adder, schoolbook multiplier,
//! MSB-first comparator and an XNOR/AND-tree equality test.

use std::fmt;

use crate::backend::{Backend, EvalContext};
use crate::error::{Error, Result};
use crate::gates::{self, Bit};

pub const MAX_WIDTH: usize = 64;

pub struct BitWord<'c, B: Backend> {
    bits: Vec<Bit<'c, B>>,
}

impl<B: Backend> Clone for BitWord<'_, B> {
    fn clone(&self) -> Self {
        Self {
            bits: self.bits.clone(),
        }
    }
}

impl<B: Backend> fmt::Debug for BitWord<'_, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BitWord").field("width", &self.bits.len()).finish()
    }
}

pub(crate) fn check_width(width: usize) -> Result<()> {
    if width == 0 || width > MAX_WIDTH {
        return Err(Error::InvalidWidth(width));
    }
    Ok(())
}

impl<'c, B: Backend> BitWord<'c, B> {
    pub fn from_bits(bits: Vec<Bit<'c, B>>) -> Result<Self> {
        check_width(bits.len())?;
        Ok(Self { bits })
    }

    /// Encrypts one `width`-bit value per slot (values are truncated to
    /// `width` bits, so negative numbers come out in two's complement).
    pub fn encrypt(ctx: &'c EvalContext<B>, width: usize, values: &[i64]) -> Result<Self> {
        check_width(width)?;
        let bits = (0..width)
            .map(|i| {
                let slot_bits: Vec<bool> = values.iter().map(|&v| (v as u64) >> i & 1 == 1).collect();
                Bit::encrypt(ctx, &slot_bits)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { bits })
    }

    /// Encrypts the same value into every slot.
    pub fn constant(ctx: &'c EvalContext<B>, width: usize, value: i64) -> Result<Self> {
        Self::encrypt(ctx, width, &vec![value; ctx.slots()])
    }

    /// Zero-extends a single bit to a word (`bits = [b, 0, ..., 0]`).
    pub fn from_bit(bit: &Bit<'c, B>, width: usize) -> Result<Self> {
        check_width(width)?;
        let mut bits = Vec::with_capacity(width);
        bits.push(bit.clone());
        for _ in 1..width {
            bits.push(Bit::constant(bit.ctx(), false)?);
        }
        Ok(Self { bits })
    }

    pub fn ctx(&self) -> &'c EvalContext<B> {
        self.bits[0].ctx()
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[Bit<'c, B>] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<Bit<'c, B>> {
        self.bits
    }

    pub fn bit(&self, i: usize) -> &Bit<'c, B> {
        &self.bits[i]
    }

    pub fn msb(&self) -> &Bit<'c, B> {
        &self.bits[self.bits.len() - 1]
    }

    pub fn mult_depth(&self) -> u32 {
        self.bits.iter().map(Bit::mult_depth).max().unwrap_or(0)
    }

    /// Unsigned value of every slot.
    pub fn decrypt(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.ctx().slots()];
        for (i, bit) in self.bits.iter().enumerate() {
            for (acc, b) in out.iter_mut().zip(bit.decrypt()) {
                *acc |= (b & 1) << i;
            }
        }
        out
    }

    /// Two's-complement value of every slot.
    pub fn decrypt_signed(&self) -> Vec<i64> {
        let s = self.width();
        self.decrypt().into_iter().map(|v| sign_extend(v, s)).collect()
    }
}

/// Interprets the low `width` bits of `v` as a two's-complement number.
pub fn sign_extend(v: u64, width: usize) -> i64 {
    if width >= 64 {
        return v as i64;
    }
    let shift = 64 - width;
    ((v << shift) as i64) >> shift
}

fn same_width<B: Backend>(a: &BitWord<'_, B>, b: &BitWord<'_, B>) -> Result<()> {
    if a.width() != b.width() {
        return Err(Error::WidthMismatch {
            left: a.width(),
            right: b.width(),
        });
    }
    Ok(())
}

/// Balanced AND reduction: `n - 1` gates, depth `ceil(log2 n)`.
fn and_tree<'c, B: Backend>(mut level: Vec<Bit<'c, B>>) -> Result<Bit<'c, B>> {
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.chunks(2);
        for pair in &mut it {
            match pair {
                [x, y] => next.push(gates::and(x, y)?),
                [x] => next.push(x.clone()),
                _ => unreachable!(),
            }
        }
        level = next;
    }
    Ok(level.pop().expect("non-empty word"))
}

/// `a == b`: `s` XNORs feeding a balanced tree of `s - 1` ANDs.
pub fn eq<'c, B: Backend>(a: &BitWord<'c, B>, b: &BitWord<'c, B>) -> Result<Bit<'c, B>> {
    same_width(a, b)?;
    let xnors = a
        .bits
        .iter()
        .zip(&b.bits)
        .map(|(x, y)| gates::xnor(x, y))
        .collect::<Result<Vec<_>>>()?;
    and_tree(xnors)
}

pub fn ne<'c, B: Backend>(a: &BitWord<'c, B>, b: &BitWord<'c, B>) -> Result<Bit<'c, B>> {
    gates::not(&eq(a, b)?)
}

/// MSB-first ripple comparator returning `a > b`.
///
/// State is the pair (all higher bits equal, already greater). For signed
/// words the sign bit compares inverted.
fn greater<'c, B: Backend>(a: &BitWord<'c, B>, b: &BitWord<'c, B>, signed: bool) -> Result<Bit<'c, B>> {
    same_width(a, b)?;
    let s = a.width();
    let mut state: Option<(Bit<'c, B>, Bit<'c, B>)> = None;
    for i in (0..s).rev() {
        let (x, y) = (&a.bits[i], &b.bits[i]);
        let here = if signed && i == s - 1 {
            gates::and(&gates::not(x)?, y)?
        } else {
            gates::and(x, &gates::not(y)?)?
        };
        let last = i == 0;
        state = Some(match state {
            None => {
                let eq = gates::xnor(x, y)?;
                (eq, here)
            }
            Some((eq, gt)) => {
                let gt = gates::or(&gt, &gates::and(&eq, &here)?)?;
                if last {
                    (eq, gt)
                } else {
                    (gates::and(&eq, &gates::xnor(x, y)?)?, gt)
                }
            }
        });
    }
    Ok(state.expect("width >= 1").1)
}

pub fn gt_u<'c, B: Backend>(a: &BitWord<'c, B>, b: &BitWord<'c, B>) -> Result<Bit<'c, B>> {
    greater(a, b, false)
}

pub fn lt_u<'c, B: Backend>(a: &BitWord<'c, B>, b: &BitWord<'c, B>) -> Result<Bit<'c, B>> {
    greater(b, a, false)
}

pub fn gt_s<'c, B: Backend>(a: &BitWord<'c, B>, b: &BitWord<'c, B>) -> Result<Bit<'c, B>> {
    greater(a, b, true)
}

pub fn lt_s<'c, B: Backend>(a: &BitWord<'c, B>, b: &BitWord<'c, B>) -> Result<Bit<'c, B>> {
    greater(b, a, true)
}

enum Carry<'c, B: Backend> {
    Zero,
    One,
    Bit(Bit<'c, B>),
}

/// Ripple-carry addition of equal-length bit slices, truncated to their
/// length. Full adder: `p = a ^ b`, `sum = p ^ c`, `carry = p ? c : a`.
fn ripple<'c, B: Backend>(a: &[Bit<'c, B>], b: &[Bit<'c, B>], mut carry: Carry<'c, B>) -> Result<Vec<Bit<'c, B>>> {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (x, y) = (&a[i], &b[i]);
        let p = gates::xor(x, y)?;
        out.push(match &carry {
            Carry::Zero => p.clone(),
            Carry::One => gates::not(&p)?,
            Carry::Bit(c) => gates::xor(&p, c)?,
        });
        if i + 1 < n {
            carry = Carry::Bit(match &carry {
                Carry::Zero => gates::and(x, y)?,
                Carry::One => gates::or(x, y)?,
                Carry::Bit(c) => gates::mux(&p, c, x)?,
            });
        }
    }
    Ok(out)
}

pub fn add<'c, B: Backend>(a: &BitWord<'c, B>, b: &BitWord<'c, B>) -> Result<BitWord<'c, B>> {
    same_width(a, b)?;
    Ok(BitWord {
        bits: ripple(&a.bits, &b.bits, Carry::Zero)?,
    })
}

/// `a - b = a + !b + 1`.
pub fn sub<'c, B: Backend>(a: &BitWord<'c, B>, b: &BitWord<'c, B>) -> Result<BitWord<'c, B>> {
    same_width(a, b)?;
    let inverted = b.bits.iter().map(gates::not).collect::<Result<Vec<_>>>()?;
    Ok(BitWord {
        bits: ripple(&a.bits, &inverted, Carry::One)?,
    })
}

/// `a + 1` with a half-adder chain.
pub fn increment<'c, B: Backend>(a: &BitWord<'c, B>) -> Result<BitWord<'c, B>> {
    let s = a.width();
    let mut bits = Vec::with_capacity(s);
    bits.push(gates::not(&a.bits[0])?);
    let mut carry = a.bits[0].clone();
    for i in 1..s {
        bits.push(gates::xor(&a.bits[i], &carry)?);
        if i + 1 < s {
            carry = gates::and(&a.bits[i], &carry)?;
        }
    }
    Ok(BitWord { bits })
}

/// Two's-complement negation `!a + 1`.
pub fn neg<'c, B: Backend>(a: &BitWord<'c, B>) -> Result<BitWord<'c, B>> {
    let inverted = BitWord {
        bits: a.bits.iter().map(gates::not).collect::<Result<Vec<_>>>()?,
    };
    increment(&inverted)
}

/// Schoolbook multiplication truncated to `s` bits.
pub fn mul<'c, B: Backend>(a: &BitWord<'c, B>, b: &BitWord<'c, B>) -> Result<BitWord<'c, B>> {
    same_width(a, b)?;
    let s = a.width();
    let mut acc = a
        .bits
        .iter()
        .map(|x| gates::and(x, &b.bits[0]))
        .collect::<Result<Vec<_>>>()?;
    for j in 1..s {
        let partial = a.bits[..s - j]
            .iter()
            .map(|x| gates::and(x, &b.bits[j]))
            .collect::<Result<Vec<_>>>()?;
        let upper = ripple(&acc[j..], &partial, Carry::Zero)?;
        acc.truncate(j);
        acc.extend(upper);
    }
    Ok(BitWord { bits: acc })
}

/// `sel * a`: one AND per bit.
pub fn bool_mul<'c, B: Backend>(sel: &Bit<'c, B>, a: &BitWord<'c, B>) -> Result<BitWord<'c, B>> {
    Ok(BitWord {
        bits: a.bits.iter().map(|x| gates::and(sel, x)).collect::<Result<Vec<_>>>()?,
    })
}

/// Pairwise reduction, so a list of `n` operands costs `n - 1` operations
/// at depth `ceil(log2 n)`. `None` for an empty list.
pub(crate) fn tree_reduce<T: Clone>(items: &[T], op: impl Fn(&T, &T) -> Result<T>) -> Option<Result<T>> {
    if items.is_empty() {
        return None;
    }
    let mut level = items.to_vec();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            next.push(match pair {
                [a, b] => match op(a, b) {
                    Ok(v) => v,
                    Err(e) => return Some(Err(e)),
                },
                [a] => a.clone(),
                _ => unreachable!(),
            });
        }
        level = next;
    }
    level.pop().map(Ok)
}

/// Wrapping sum of a non-empty list of words, as a balanced tree.
pub fn sum<'c, B: Backend>(words: &[BitWord<'c, B>]) -> Result<BitWord<'c, B>> {
    tree_reduce(words, |a, b| add(a, b)).expect("sum of an empty list")
}

/// Wrapping product of a list of words as a balanced tree; the empty
/// product is the constant 1.
pub fn product<'c, B: Backend>(ctx: &'c EvalContext<B>, width: usize, words: &[BitWord<'c, B>]) -> Result<BitWord<'c, B>> {
    tree_reduce(words, |a, b| mul(a, b)).unwrap_or_else(|| BitWord::constant(ctx, width, 1))
}
