//! Conversions between bit-level words and native residues.
//!
//! | conversion   | ciphertext mults                          | mult depth               |
//! |--------------|-------------------------------------------|--------------------------|
//! | uint -> mod  | 0 (and `2(s-1)` additions)                | +0                       |
//! | int -> mod   | 2                                         | +1                       |
//! | `x^e`        | `floor(log2 e) + w(e) - 1`                | `ceil(log2 e)`           |
//! | mod -> uint  | `t (s + floor(log2(t-1)) + w(t-1) - 1)`   | `ceil(log2(t-1)) + 1`    |
//! | mod -> int   | `2t (s + floor(log2(t-1)) + w(t-1))`      | `ceil(log2(t-1)) + 2`    |
//!
//! `w` is the Hamming weight. [`cost`] has the same formulas as plain
//! functions. The two directions out of modular arithmetic run a linear
//! search over all `t` residues and are only practical for small `t`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::backend::Backend;
use crate::circuits::{self, BitWord};
use crate::error::{Error, Result};
use crate::gates::{self, Bit};
use crate::types::{SecureInt, SecureMod, SecureUint};

/// Horner fold `((x_{s-1} * 2 + x_{s-2}) * 2 + ...) * 2 + x_0`, doubling by
/// self-addition.
pub fn uint_to_mod<'c, B: Backend>(x: &SecureUint<'c, B>) -> Result<SecureMod<'c, B>> {
    let ctx = x.ctx();
    let bits = x.word().bits();
    let mut acc = bits[bits.len() - 1].ciphertext().clone();
    for bit in bits[..bits.len() - 1].iter().rev() {
        let doubled = ctx.add(&acc, &acc)?;
        acc = ctx.add(&doubled, bit.ciphertext())?;
    }
    Ok(SecureMod::from_ciphertext(ctx, acc))
}

/// Signed word to residue: `msb ? (t - 2^s + u) : u` where `u` is the
/// unsigned reading, selected with two native multiplications.
pub fn int_to_mod<'c, B: Backend>(x: &SecureInt<'c, B>) -> Result<SecureMod<'c, B>> {
    let ctx = x.ctx();
    let t = ctx.plaintext_modulus();
    let s = x.width();
    let span = 1u128 << s;
    if u128::from(t) < span {
        return Err(Error::ModulusTooSmall { t, bits: s });
    }
    let pos = uint_to_mod(&x.as_uint())?;
    let neg = pos.add_plain((u128::from(t) - span) as i128)?;
    let msb = SecureMod::from_ciphertext(ctx, x.word().msb().ciphertext().clone());
    let pick_neg = msb.try_mul(&neg)?;
    let pick_pos = msb.plain_sub(1)?.try_mul(&pos)?;
    pick_neg.try_add(&pick_pos)
}

/// Square-and-multiply. The squarings `x, x^2, x^4, ...` form a chain; the
/// selected powers are then multiplied shallowest-first, which keeps the
/// depth at `ceil(log2 e)`.
pub fn mod_pow<'c, B: Backend>(x: &SecureMod<'c, B>, e: u64) -> Result<SecureMod<'c, B>> {
    if e == 0 {
        return Err(Error::InvalidExponent(e));
    }
    let top = 63 - e.leading_zeros();
    let mut selected = Vec::with_capacity(e.count_ones() as usize);
    let mut power = x.clone();
    for k in 0..=top {
        if e >> k & 1 == 1 {
            selected.push(power.clone());
        }
        if k < top {
            power = power.try_mul(&power)?;
        }
    }

    // Min-heap on (depth, insertion order).
    let mut heap: BinaryHeap<Reverse<(u32, usize)>> = BinaryHeap::new();
    let mut slots: Vec<Option<SecureMod<'c, B>>> = Vec::new();
    for p in selected {
        heap.push(Reverse((p.mult_depth(), slots.len())));
        slots.push(Some(p));
    }
    while heap.len() > 1 {
        let Reverse((_, i)) = heap.pop().expect("two entries");
        let Reverse((_, j)) = heap.pop().expect("two entries");
        let a = slots[i].take().expect("live entry");
        let b = slots[j].take().expect("live entry");
        let prod = a.try_mul(&b)?;
        heap.push(Reverse((prod.mult_depth(), slots.len())));
        slots.push(Some(prod));
    }
    let Reverse((_, last)) = heap.pop().expect("at least one power");
    Ok(slots[last].take().expect("live entry"))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `1 - (x - i)^(t-1)` for every residue `i` in `[0, t)`: exactly one of
/// the returned bits is 1 (Fermat, `t` prime).
fn residue_indicators<'c, B: Backend>(x: &SecureMod<'c, B>) -> Result<Vec<Bit<'c, B>>> {
    let t = x.ctx().plaintext_modulus();
    (0..t)
        .map(|i| {
            let diff = x.sub_plain(i)?;
            let nonzero = mod_pow(&diff, t - 1)?;
            Ok(nonzero.plain_sub(1)?.as_bool().into_bit())
        })
        .collect()
}

/// Bitwise sum of selected words. Valid only when at most one selector
/// fired, so no position ever exceeds 1 and no carries are needed.
fn disjoint_or<'c, B: Backend>(words: Vec<BitWord<'c, B>>) -> Result<BitWord<'c, B>> {
    let mut it = words.into_iter();
    let first = it.next().expect("at least one residue");
    let ctx = first.ctx();
    let mut acc: Vec<Bit<'c, B>> = first.into_bits();
    for w in it {
        for (a, b) in acc.iter_mut().zip(w.bits()) {
            let ct = ctx.add(a.ciphertext(), b.ciphertext())?;
            *a = Bit::from_ciphertext(ctx, ct);
        }
    }
    BitWord::from_bits(acc)
}

fn check_prime(t: u64) -> Result<()> {
    if !is_prime(t) {
        return Err(Error::NonPrimeModulus(t));
    }
    Ok(())
}

/// Linear search over all residues: `X = sum_i i * [x == i]`, with the
/// selection done as a bool-times-word multiplexer against an encrypted
/// constant. The result is only meaningful when the residue is below
/// `2^width`; larger residues come out truncated.
pub fn mod_to_uint<'c, B: Backend>(x: &SecureMod<'c, B>, width: usize) -> Result<SecureUint<'c, B>> {
    circuits::check_width(width)?;
    let ctx = x.ctx();
    check_prime(ctx.plaintext_modulus())?;
    let picked = residue_indicators(x)?
        .iter()
        .enumerate()
        .map(|(i, hit)| {
            let constant = BitWord::constant(ctx, width, i as i64)?;
            circuits::bool_mul(hit, &constant)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SecureUint::from_word(disjoint_or(picked)?))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Branch {
    NonNegative,
    Negative,
}

/// One linear-search pass for the signed conversion. Computes the MSB of
/// the unsigned reading from the indicators, gates every indicator on the
/// requested branch and selects `i` (non-negative branch) or
/// `2^s - t + i` (negative branch).
fn signed_pass<'c, B: Backend>(x: &SecureMod<'c, B>, width: usize, branch: Branch) -> Result<BitWord<'c, B>> {
    let ctx = x.ctx();
    let t = ctx.plaintext_modulus();
    let hits = residue_indicators(x)?;

    let mut msb: Option<Bit<'c, B>> = None;
    for (i, hit) in hits.iter().enumerate() {
        if (i as u64) >> (width - 1) & 1 == 1 {
            msb = Some(match msb {
                None => hit.clone(),
                Some(acc) => Bit::from_ciphertext(ctx, ctx.add(acc.ciphertext(), hit.ciphertext())?),
            });
        }
    }
    let msb = match msb {
        Some(b) => b,
        None => Bit::constant(ctx, false)?,
    };
    let gate = match branch {
        Branch::NonNegative => gates::not(&msb)?,
        Branch::Negative => msb,
    };

    let span = 1i128 << width;
    let picked = hits
        .iter()
        .enumerate()
        .map(|(i, hit)| {
            let value = match branch {
                Branch::NonNegative => i as i128,
                Branch::Negative => span - i128::from(t) + i as i128,
            };
            let constant = BitWord::constant(ctx, width, value as i64)?;
            circuits::bool_mul(&gates::and(hit, &gate)?, &constant)
        })
        .collect::<Result<Vec<_>>>()?;
    disjoint_or(picked)
}

/// `Y = (1 - X_{s-1}) X + X_{s-1} (2^s - t + X)` where `X` is the unsigned
/// reading of the residue. Needs `2^s >= t`. The sign is decided by the
/// MSB of `X`, so a residue below `t` but with its top bit set comes out
/// negative.
pub fn mod_to_int<'c, B: Backend>(x: &SecureMod<'c, B>, width: usize) -> Result<SecureInt<'c, B>> {
    circuits::check_width(width)?;
    let ctx = x.ctx();
    let t = ctx.plaintext_modulus();
    check_prime(t)?;
    if width < 64 && (1u64 << width) < t {
        return Err(Error::ModulusTooSmall { t, bits: width });
    }
    let positive = signed_pass(x, width, Branch::NonNegative)?;
    let negative = signed_pass(x, width, Branch::Negative)?;
    Ok(SecureInt::from_word(disjoint_or(vec![positive, negative])?))
}

/// Closed-form operation counts of the conversions.
pub mod cost {
    pub fn floor_log2(e: u64) -> u32 {
        63 - e.leading_zeros()
    }

    pub fn ceil_log2(e: u64) -> u32 {
        if e <= 1 {
            0
        } else {
            64 - (e - 1).leading_zeros()
        }
    }

    pub fn uint_to_mod_adds(s: usize) -> u64 {
        2 * (s as u64 - 1)
    }

    pub const INT_TO_MOD_MULTS: u64 = 2;
    pub const INT_TO_MOD_DEPTH: u32 = 1;

    pub fn pow_mults(e: u64) -> u64 {
        u64::from(floor_log2(e) + e.count_ones() - 1)
    }

    pub fn pow_depth(e: u64) -> u32 {
        ceil_log2(e)
    }

    pub fn mod_to_uint_mults(t: u64, s: usize) -> u64 {
        t * (s as u64 + pow_mults(t - 1))
    }

    pub fn mod_to_uint_depth(t: u64) -> u32 {
        ceil_log2(t - 1) + 1
    }

    pub fn mod_to_int_mults(t: u64, s: usize) -> u64 {
        2 * t * (s as u64 + u64::from(floor_log2(t - 1) + (t - 1).count_ones()))
    }

    pub fn mod_to_int_depth(t: u64) -> u32 {
        ceil_log2(t - 1) + 2
    }
}
