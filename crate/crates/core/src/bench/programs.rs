//! The six data-oblivious programs, each written once with bit-level words
//! only and once with bridging to native residues.

use crate::backend::{Backend, EvalContext};
use crate::circuits::{self, BitWord};
use crate::convert::int_to_mod;
use crate::error::Result;
use crate::types::{SecureBool, SecureInt, SecureMod, SecureUint};

/// Fibonacci number `input` via a fixed `max_iter`-step loop, all words.
pub fn fib_bit<'c, B: Backend>(input: &SecureUint<'c, B>, max_iter: usize) -> Result<SecureUint<'c, B>> {
    let (ctx, s) = (input.ctx(), input.width());
    let mut i = SecureUint::constant(ctx, s, 0)?;
    let mut a = SecureUint::constant(ctx, s, 0)?;
    let mut b = SecureUint::constant(ctx, s, 1)?;
    let mut r = SecureUint::constant(ctx, s, 0)?;
    for _ in 0..max_iter {
        let hit = i.equals(input)?;
        i = SecureUint::from_word(circuits::increment(i.word())?);
        r = r.try_add(&(&hit * &a))?;
        std::mem::swap(&mut a, &mut b);
        a = a.try_add(&b)?;
    }
    Ok(r)
}

/// Fibonacci with only the input and the counter kept as words.
pub fn fib_bridged<'c, B: Backend>(input: &SecureUint<'c, B>, max_iter: usize) -> Result<SecureMod<'c, B>> {
    let (ctx, s) = (input.ctx(), input.width());
    let mut i = SecureUint::constant(ctx, s, 0)?;
    let mut a = SecureMod::constant(ctx, 0)?;
    let mut b = SecureMod::constant(ctx, 1)?;
    let mut r = SecureMod::constant(ctx, 0)?;
    for _ in 0..max_iter {
        let hit = i.equals(input)?;
        i = SecureUint::from_word(circuits::increment(i.word())?);
        r = r.try_add(&(&hit * &a))?;
        std::mem::swap(&mut a, &mut b);
        a = a.try_add(&b)?;
    }
    Ok(r)
}

fn index_hit<'c, B: Backend>(i: usize, key: &SecureInt<'c, B>) -> Result<SecureBool<'c, B>> {
    SecureInt::constant(key.ctx(), key.width(), i as i64)?.equals(key)
}

/// Private keyword search: `sum_i (i == key) * v[i]`.
pub fn pks_bit<'c, B: Backend>(values: &[SecureInt<'c, B>], key: &SecureInt<'c, B>) -> Result<SecureInt<'c, B>> {
    let selected = values
        .iter()
        .enumerate()
        .map(|(i, v)| Ok(&index_hit(i, key)? * v))
        .collect::<Result<Vec<_>>>()?;
    sum_words(key.ctx(), key.width(), &selected)
}

pub fn pks_bridged<'c, B: Backend>(values: &[SecureInt<'c, B>], key: &SecureInt<'c, B>) -> Result<SecureMod<'c, B>> {
    let selected = values
        .iter()
        .enumerate()
        .map(|(i, v)| index_hit(i, key)?.to_mod().try_mul(&int_to_mod(v)?))
        .collect::<Result<Vec<_>>>()?;
    sum_mods(key.ctx(), &selected)
}

fn sum_words<'c, B: Backend>(ctx: &'c EvalContext<B>, width: usize, words: &[SecureInt<'c, B>]) -> Result<SecureInt<'c, B>> {
    if words.is_empty() {
        return SecureInt::constant(ctx, width, 0);
    }
    let raw: Vec<BitWord<'c, B>> = words.iter().map(|w| w.word().clone()).collect();
    Ok(SecureInt::from_word(circuits::sum(&raw)?))
}

fn product_words<'c, B: Backend>(ctx: &'c EvalContext<B>, width: usize, words: &[SecureInt<'c, B>]) -> Result<SecureInt<'c, B>> {
    let raw: Vec<BitWord<'c, B>> = words.iter().map(|w| w.word().clone()).collect();
    Ok(SecureInt::from_word(circuits::product(ctx, width, &raw)?))
}

fn sum_mods<'c, B: Backend>(ctx: &'c EvalContext<B>, items: &[SecureMod<'c, B>]) -> Result<SecureMod<'c, B>> {
    if items.is_empty() {
        return SecureMod::constant(ctx, 0);
    }
    SecureMod::sum(items)
}

/// The pairwise comparison matrix shared by MAX and SOR: row `i` holds
/// `v[i] > v[j]` for later `j` and the complement for earlier ones.
fn comparisons<'c, B: Backend>(values: &[SecureInt<'c, B>]) -> Result<Vec<Vec<SecureBool<'c, B>>>> {
    let n = values.len();
    let mut m: Vec<Vec<SecureBool<'c, B>>> = (0..n).map(|_| Vec::new()).collect();
    for i in 0..n {
        for j in i + 1..n {
            let cond = values[i].greater_than(&values[j])?;
            m[j].push(cond.try_not()?);
            m[i].push(cond);
        }
    }
    Ok(m)
}

fn as_words<'c, B: Backend>(row: &[SecureBool<'c, B>], width: usize) -> Result<Vec<SecureInt<'c, B>>> {
    row.iter().map(|b| SecureInt::from_bool(b, width)).collect()
}

/// Maximum of distinct values: the element that beats all others.
pub fn max_bit<'c, B: Backend>(values: &[SecureInt<'c, B>]) -> Result<SecureInt<'c, B>> {
    let (ctx, s) = (values[0].ctx(), values[0].width());
    let selected = comparisons(values)?
        .iter()
        .zip(values)
        .map(|(row, v)| product_words(ctx, s, &as_words(row, s)?)?.try_mul(v))
        .collect::<Result<Vec<_>>>()?;
    sum_words(ctx, s, &selected)
}

pub fn max_bridged<'c, B: Backend>(values: &[SecureInt<'c, B>]) -> Result<SecureMod<'c, B>> {
    let ctx = values[0].ctx();
    let selected = comparisons(values)?
        .iter()
        .zip(values)
        .map(|(row, v)| {
            let residues: Vec<SecureMod<'c, B>> = row.iter().map(SecureBool::to_mod).collect();
            SecureMod::product(ctx, &residues)?.try_mul(&int_to_mod(v)?)
        })
        .collect::<Result<Vec<_>>>()?;
    sum_mods(ctx, &selected)
}

/// `input == item ? if_true : if_false` with both branches evaluated.
pub fn mux_bit<'c, B: Backend>(
    input: &SecureInt<'c, B>,
    item: &SecureInt<'c, B>,
    if_true: &SecureInt<'c, B>,
    if_false: &SecureInt<'c, B>,
) -> Result<SecureInt<'c, B>> {
    let cond = input.equals(item)?;
    (&cond * if_true).try_add(&(&cond.try_not()? * if_false))
}

pub fn mux_bridged<'c, B: Backend>(
    input: &SecureInt<'c, B>,
    item: &SecureInt<'c, B>,
    if_true: &SecureInt<'c, B>,
    if_false: &SecureInt<'c, B>,
) -> Result<SecureMod<'c, B>> {
    let cond = input.equals(item)?;
    let t = int_to_mod(if_true)?;
    let f = int_to_mod(if_false)?;
    (&cond * &t).try_add(&(&cond.try_not()? * &f))
}

fn sort_ranks<'c, B: Backend>(values: &[SecureInt<'c, B>]) -> Result<Vec<SecureInt<'c, B>>> {
    let (ctx, s) = (values[0].ctx(), values[0].width());
    comparisons(values)?
        .iter()
        .map(|row| sum_words(ctx, s, &as_words(row, s)?))
        .collect()
}

/// Ascending sort of distinct values by rank selection.
pub fn sor_bit<'c, B: Backend>(values: &[SecureInt<'c, B>]) -> Result<Vec<SecureInt<'c, B>>> {
    let (ctx, s) = (values[0].ctx(), values[0].width());
    let ranks = sort_ranks(values)?;
    (0..values.len())
        .map(|i| {
            let terms = ranks
                .iter()
                .zip(values)
                .map(|(r, v)| Ok(&index_hit(i, r)? * v))
                .collect::<Result<Vec<_>>>()?;
            sum_words(ctx, s, &terms)
        })
        .collect()
}

/// Ranks stay bit-level; only the final selection runs on residues.
pub fn sor_bridged<'c, B: Backend>(values: &[SecureInt<'c, B>]) -> Result<Vec<SecureMod<'c, B>>> {
    let ctx = values[0].ctx();
    let ranks = sort_ranks(values)?;
    let residues = values.iter().map(int_to_mod).collect::<Result<Vec<_>>>()?;
    (0..values.len())
        .map(|i| {
            let terms = ranks
                .iter()
                .zip(&residues)
                .map(|(r, v)| index_hit(i, r)?.to_mod().try_mul(v))
                .collect::<Result<Vec<_>>>()?;
            sum_mods(ctx, &terms)
        })
        .collect()
}

/// Caps the given feature columns at `threshold`.
fn filter<'c, B: Backend>(
    inputs: &[Vec<SecureInt<'c, B>>],
    threshold: &SecureInt<'c, B>,
    positions: &[usize],
) -> Result<Vec<Vec<SecureInt<'c, B>>>> {
    let mut m = inputs.to_vec();
    for &p in positions {
        for row in &mut m {
            let cond = row[p].greater_than(threshold)?;
            row[p] = (&cond * threshold).try_add(&(&cond.try_not()? * &row[p]))?;
        }
    }
    Ok(m)
}

/// Filtered affine map `[x | 1] * W`, entirely on words.
pub fn logreg_bit<'c, B: Backend>(
    inputs: &[Vec<SecureInt<'c, B>>],
    weights: &[Vec<SecureInt<'c, B>>],
    threshold: &SecureInt<'c, B>,
    positions: &[usize],
) -> Result<Vec<Vec<SecureInt<'c, B>>>> {
    let (ctx, s) = (threshold.ctx(), threshold.width());
    let one = SecureInt::constant(ctx, s, 1)?;
    let mut x = filter(inputs, threshold, positions)?;
    for row in &mut x {
        row.push(one.clone());
    }
    x.iter()
        .map(|row| {
            (0..weights[0].len())
                .map(|j| {
                    let terms = row
                        .iter()
                        .zip(weights)
                        .map(|(a, w)| a.try_mul(&w[j]))
                        .collect::<Result<Vec<_>>>()?;
                    sum_words(ctx, s, &terms)
                })
                .collect()
        })
        .collect()
}

/// Filters on words, then converts and runs the matrix product natively.
pub fn logreg_bridged<'c, B: Backend>(
    inputs: &[Vec<SecureInt<'c, B>>],
    weights: &[Vec<SecureMod<'c, B>>],
    threshold: &SecureInt<'c, B>,
    positions: &[usize],
) -> Result<Vec<Vec<SecureMod<'c, B>>>> {
    let ctx = threshold.ctx();
    let one = SecureMod::constant(ctx, 1)?;
    let x = filter(inputs, threshold, positions)?
        .iter()
        .map(|row| {
            let mut converted = row.iter().map(int_to_mod).collect::<Result<Vec<_>>>()?;
            converted.push(one.clone());
            Ok(converted)
        })
        .collect::<Result<Vec<_>>>()?;
    x.iter()
        .map(|row| {
            (0..weights[0].len())
                .map(|j| {
                    let terms = row
                        .iter()
                        .zip(weights)
                        .map(|(a, w)| a.try_mul(&w[j]))
                        .collect::<Result<Vec<_>>>()?;
                    sum_mods(ctx, &terms)
                })
                .collect()
        })
        .collect()
}
