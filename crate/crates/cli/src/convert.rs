//! The `convert` subcommand: one bridging conversion with its metered cost.

use anyhow::{bail, Result};
use clap::ValueEnum;
use serde::Serialize;

use fhebridge::convert::{int_to_mod, mod_to_int, mod_to_uint, uint_to_mod};
use fhebridge::{BackendParams, SecureInt, SecureMod, SecureUint, TrackedBackend};

/// Largest modulus the linear-search conversions accept without `--force`.
pub const SEARCH_LIMIT: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    U2m,
    I2m,
    M2u,
    M2i,
}

impl Direction {
    fn name(self) -> &'static str {
        match self {
            Direction::U2m => "u2m",
            Direction::I2m => "i2m",
            Direction::M2u => "m2u",
            Direction::M2i => "m2i",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvertRecord {
    pub direction: String,
    pub bits: usize,
    pub t: u64,
    pub input: i64,
    pub output: i64,
    pub ct_adds: u64,
    pub ct_mults: u64,
    pub pt_ops: u64,
    pub mult_depth: u32,
    pub corrupted: bool,
}

pub fn run(direction: Direction, bits: usize, t: u64, value: i64, force: bool, noise_budget: u32) -> Result<ConvertRecord> {
    if !(1..=63).contains(&bits) {
        bail!("--bits must be between 1 and 63");
    }
    let half = 1i64 << (bits - 1);
    match direction {
        Direction::U2m if !(0..2 * half).contains(&value) => bail!("{value} is not a {bits}-bit unsigned value"),
        Direction::I2m if !(-half..half).contains(&value) => bail!("{value} is not a {bits}-bit signed value"),
        Direction::M2u | Direction::M2i if !(0..t as i64).contains(&value) => {
            bail!("{value} is not a residue mod {t}")
        }
        Direction::M2u | Direction::M2i if t > SEARCH_LIMIT && !force => bail!(
            "refusing {} with t = {t}: the linear search costs about t * (s + 2 log2 t) multiplications, \
             which is impractical for t > {SEARCH_LIMIT}; pass --force to run it anyway",
            direction.name()
        ),
        _ => {}
    }
    let ctx = TrackedBackend::context(BackendParams::new(t, 1).with_noise_budget(noise_budget))?;
    let (output, corrupted) = match direction {
        Direction::U2m => {
            let m = uint_to_mod(&SecureUint::encrypt(&ctx, bits, &[value as u64])?)?;
            (m.decrypt()[0] as i64, ctx.decrypt(m.ciphertext()).corrupted)
        }
        Direction::I2m => {
            let m = int_to_mod(&SecureInt::encrypt(&ctx, bits, &[value])?)?;
            (m.decrypt()[0] as i64, ctx.decrypt(m.ciphertext()).corrupted)
        }
        Direction::M2u => {
            let w = mod_to_uint(&SecureMod::encrypt(&ctx, &[value])?, bits)?;
            let corrupted = w.word().bits().iter().any(|b| ctx.decrypt(b.ciphertext()).corrupted);
            (w.decrypt()[0] as i64, corrupted)
        }
        Direction::M2i => {
            let w = mod_to_int(&SecureMod::encrypt(&ctx, &[value])?, bits)?;
            let corrupted = w.word().bits().iter().any(|b| ctx.decrypt(b.ciphertext()).corrupted);
            (w.decrypt()[0], corrupted)
        }
    };
    let cost = ctx.meter_snapshot();
    Ok(ConvertRecord {
        direction: direction.name().into(),
        bits,
        t,
        input: value,
        output,
        ct_adds: cost.ct_adds,
        ct_mults: cost.ct_mults,
        pt_ops: cost.pt_ops,
        mult_depth: cost.mult_depth,
        corrupted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = run(Direction::U2m, 8, 65537, 200, false, 880).unwrap();
        assert_eq!((r.output, r.ct_adds, r.ct_mults), (200, 14, 0));
        let r = run(Direction::M2u, 3, 5, 4, false, 880).unwrap();
        assert_eq!((r.output, r.ct_mults), (4, 25));
        let r = run(Direction::I2m, 4, 17, -3, false, 880).unwrap();
        assert_eq!(r.output, 14);
    }

    #[test]
    fn rejects_out_of_range_values_and_large_moduli() {
        assert!(run(Direction::U2m, 4, 17, 16, false, 880).is_err());
        assert!(run(Direction::I2m, 4, 17, 8, false, 880).is_err());
        assert!(run(Direction::M2i, 3, 5, 5, false, 880).is_err());
        let err = run(Direction::M2u, 17, 65537, 1, false, 880).unwrap_err();
        assert!(err.to_string().contains("--force"));
    }
}
