//! Homomorphic Boolean gates written as ring arithmetic on `{0,1}`-valued
//! ciphertexts.
//!
//! | gate | generic `t`        | `t = 2`      |
//! |------|--------------------|--------------|
//! | AND  | `xy`               | `xy`         |
//! | NAND | `1 - xy`           | `1 - xy`     |
//! | OR   | `x + y - xy`       | `x + y + xy` |
//! | NOR  | `1 - OR`           | `1 - OR`     |
//! | XOR  | `x + y - 2xy`      | `x + y`      |
//! | XNOR | `1 - XOR`          | `1 + x + y`  |
//! | NOT  | `1 - x`            | `1 - x`      |
//! | MUX  | `x(y - z) + z`     | `x(y - z) + z` |
//!
//! The constant `1` is always a plaintext constant, so every two-input gate
//! costs exactly one ciphertext multiplication (none for XOR/XNOR when
//! `t = 2`) and NOT costs none.

use std::fmt;

use crate::backend::{Backend, Ciphertext, EvalContext};
use crate::error::Result;

/// An encrypted bit: every slot decrypts to 0 or 1.
pub struct Bit<'c, B: Backend> {
    ctx: &'c EvalContext<B>,
    ct: Ciphertext<B::Raw>,
}

impl<B: Backend> Clone for Bit<'_, B> {
    fn clone(&self) -> Self {
        Self {
            ctx: self.ctx,
            ct: self.ct.clone(),
        }
    }
}

impl<B: Backend> fmt::Debug for Bit<'_, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bit").field("ct", &self.ct).finish()
    }
}

impl<'c, B: Backend> Bit<'c, B> {
    /// Encrypts one bit per slot.
    pub fn encrypt(ctx: &'c EvalContext<B>, bits: &[bool]) -> Result<Self> {
        let values: Vec<i64> = bits.iter().map(|&b| i64::from(b)).collect();
        Ok(Self {
            ctx,
            ct: ctx.encrypt(&values)?,
        })
    }

    /// Encrypts the same bit into every slot.
    pub fn constant(ctx: &'c EvalContext<B>, bit: bool) -> Result<Self> {
        Ok(Self {
            ctx,
            ct: ctx.encrypt_scalar(i64::from(bit))?,
        })
    }

    /// Reinterprets a ciphertext as a bit. The caller guarantees that every
    /// slot holds 0 or 1.
    pub fn from_ciphertext(ctx: &'c EvalContext<B>, ct: Ciphertext<B::Raw>) -> Self {
        Self { ctx, ct }
    }

    pub fn ctx(&self) -> &'c EvalContext<B> {
        self.ctx
    }

    pub fn ciphertext(&self) -> &Ciphertext<B::Raw> {
        &self.ct
    }

    pub fn into_ciphertext(self) -> Ciphertext<B::Raw> {
        self.ct
    }

    pub fn mult_depth(&self) -> u32 {
        self.ct.mult_depth()
    }

    pub fn decrypt(&self) -> Vec<u64> {
        self.ctx.decrypt(&self.ct).values
    }

    fn wrap(&self, ct: Ciphertext<B::Raw>) -> Self {
        Self { ctx: self.ctx, ct }
    }

    fn mod2(&self) -> bool {
        self.ctx.plaintext_modulus() == 2
    }
}

pub fn and<'c, B: Backend>(x: &Bit<'c, B>, y: &Bit<'c, B>) -> Result<Bit<'c, B>> {
    Ok(x.wrap(x.ctx.mul(&x.ct, &y.ct)?))
}

pub fn nand<'c, B: Backend>(x: &Bit<'c, B>, y: &Bit<'c, B>) -> Result<Bit<'c, B>> {
    not(&and(x, y)?)
}

pub fn or<'c, B: Backend>(x: &Bit<'c, B>, y: &Bit<'c, B>) -> Result<Bit<'c, B>> {
    let ctx = x.ctx;
    let sum = ctx.add(&x.ct, &y.ct)?;
    let prod = ctx.mul(&x.ct, &y.ct)?;
    let ct = if x.mod2() {
        ctx.add(&sum, &prod)?
    } else {
        ctx.sub(&sum, &prod)?
    };
    Ok(x.wrap(ct))
}

pub fn nor<'c, B: Backend>(x: &Bit<'c, B>, y: &Bit<'c, B>) -> Result<Bit<'c, B>> {
    not(&or(x, y)?)
}

pub fn xor<'c, B: Backend>(x: &Bit<'c, B>, y: &Bit<'c, B>) -> Result<Bit<'c, B>> {
    let ctx = x.ctx;
    let sum = ctx.add(&x.ct, &y.ct)?;
    if x.mod2() {
        return Ok(x.wrap(sum));
    }
    let prod = ctx.mul(&x.ct, &y.ct)?;
    let twice = ctx.mul_plain(&prod, 2)?;
    Ok(x.wrap(ctx.sub(&sum, &twice)?))
}

pub fn xnor<'c, B: Backend>(x: &Bit<'c, B>, y: &Bit<'c, B>) -> Result<Bit<'c, B>> {
    if x.mod2() {
        let sum = x.ctx.add(&x.ct, &y.ct)?;
        return Ok(x.wrap(x.ctx.add_plain(&sum, 1)?));
    }
    not(&xor(x, y)?)
}

pub fn not<'c, B: Backend>(x: &Bit<'c, B>) -> Result<Bit<'c, B>> {
    Ok(x.wrap(x.ctx.plain_sub(1, &x.ct)?))
}

/// `sel ? y : z`
pub fn mux<'c, B: Backend>(sel: &Bit<'c, B>, y: &Bit<'c, B>, z: &Bit<'c, B>) -> Result<Bit<'c, B>> {
    let ctx = sel.ctx;
    let diff = ctx.sub(&y.ct, &z.ct)?;
    let picked = ctx.mul(&sel.ct, &diff)?;
    Ok(sel.wrap(ctx.add(&picked, &z.ct)?))
}

/// The eight gates by name, for table-driven callers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Mux,
}

impl Gate {
    pub const ALL: [Gate; 8] = [
        Gate::And,
        Gate::Nand,
        Gate::Or,
        Gate::Nor,
        Gate::Xor,
        Gate::Xnor,
        Gate::Not,
        Gate::Mux,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Gate::And => "AND",
            Gate::Nand => "NAND",
            Gate::Or => "OR",
            Gate::Nor => "NOR",
            Gate::Xor => "XOR",
            Gate::Xnor => "XNOR",
            Gate::Not => "NOT",
            Gate::Mux => "MUX",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Gate::Not => 1,
            Gate::Mux => 3,
            _ => 2,
        }
    }

    /// Plaintext truth function. `inputs` must hold `arity()` values.
    pub fn truth(self, inputs: &[bool]) -> bool {
        match self {
            Gate::And => inputs[0] & inputs[1],
            Gate::Nand => !(inputs[0] & inputs[1]),
            Gate::Or => inputs[0] | inputs[1],
            Gate::Nor => !(inputs[0] | inputs[1]),
            Gate::Xor => inputs[0] ^ inputs[1],
            Gate::Xnor => !(inputs[0] ^ inputs[1]),
            Gate::Not => !inputs[0],
            Gate::Mux => {
                if inputs[0] {
                    inputs[1]
                } else {
                    inputs[2]
                }
            }
        }
    }

    pub fn eval<'c, B: Backend>(self, inputs: &[Bit<'c, B>]) -> Result<Bit<'c, B>> {
        match self {
            Gate::And => and(&inputs[0], &inputs[1]),
            Gate::Nand => nand(&inputs[0], &inputs[1]),
            Gate::Or => or(&inputs[0], &inputs[1]),
            Gate::Nor => nor(&inputs[0], &inputs[1]),
            Gate::Xor => xor(&inputs[0], &inputs[1]),
            Gate::Xnor => xnor(&inputs[0], &inputs[1]),
            Gate::Not => not(&inputs[0]),
            Gate::Mux => mux(&inputs[0], &inputs[1], &inputs[2]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::BackendParams;
    use crate::tracked::TrackedBackend;

    const MODULI: [u64; 4] = [2, 5, 17, 65537];

    fn ctx(t: u64) -> EvalContext<TrackedBackend> {
        TrackedBackend::context(BackendParams::new(t, 1)).unwrap()
    }

    fn inputs(arity: usize) -> Vec<Vec<bool>> {
        (0..1usize << arity)
            .map(|m| (0..arity).map(|i| m >> i & 1 == 1).collect())
            .collect()
    }

    #[test]
    fn truth_tables_all_moduli() {
        for t in MODULI {
            let c = ctx(t);
            for gate in Gate::ALL {
                for row in inputs(gate.arity()) {
                    let bits: Vec<_> = row.iter().map(|&b| Bit::encrypt(&c, &[b]).unwrap()).collect();
                    let out = gate.eval(&bits).unwrap().decrypt();
                    assert_eq!(out, vec![u64::from(gate.truth(&row))], "{} {:?} t={t}", gate.name(), row);
                }
            }
        }
    }

    #[test]
    fn xor_table_large_t() {
        let c = ctx(65537);
        let expect = [((false, false), 0), ((false, true), 1), ((true, false), 1), ((true, true), 0)];
        for ((a, b), want) in expect {
            let x = Bit::encrypt(&c, &[a]).unwrap();
            let y = Bit::encrypt(&c, &[b]).unwrap();
            assert_eq!(xor(&x, &y).unwrap().decrypt(), vec![want]);
        }
    }

    #[test]
    fn mux_selects() {
        let c = ctx(17);
        for y in [false, true] {
            for z in [false, true] {
                let yb = Bit::encrypt(&c, &[y]).unwrap();
                let zb = Bit::encrypt(&c, &[z]).unwrap();
                let one = Bit::encrypt(&c, &[true]).unwrap();
                let zero = Bit::encrypt(&c, &[false]).unwrap();
                assert_eq!(mux(&one, &yb, &zb).unwrap().decrypt(), vec![u64::from(y)]);
                assert_eq!(mux(&zero, &yb, &zb).unwrap().decrypt(), vec![u64::from(z)]);
            }
        }
    }

    fn mults(t: u64, gate: Gate) -> (u64, u64) {
        let c = ctx(t);
        let bits: Vec<_> = (0..gate.arity()).map(|_| Bit::encrypt(&c, &[true]).unwrap()).collect();
        let before = c.meter_snapshot();
        gate.eval(&bits).unwrap();
        let d = c.meter_snapshot().since(&before);
        (d.ct_mults, d.ct_adds)
    }

    #[test]
    fn xor_is_free_mod_two() {
        assert_eq!(mults(2, Gate::Xor), (0, 1));
        assert_eq!(mults(2, Gate::Xnor).0, 0);
        assert_eq!(mults(65537, Gate::Xor).0, 1);
        assert_eq!(mults(65537, Gate::Xnor).0, 1);
    }

    #[test]
    fn gate_cost_table() {
        for t in [5, 17, 65537] {
            for gate in Gate::ALL {
                let want = if gate == Gate::Not { 0 } else { 1 };
                assert_eq!(mults(t, gate).0, want, "{} t={t}", gate.name());
            }
        }
        for gate in [Gate::And, Gate::Nand, Gate::Or, Gate::Nor, Gate::Mux] {
            assert_eq!(mults(2, gate).0, 1, "{} t=2", gate.name());
        }
        assert_eq!(mults(2, Gate::Not).0, 0);
    }

    #[test]
    fn batched_gates_act_slotwise() {
        let c = TrackedBackend::context(BackendParams::new(17, 4)).unwrap();
        let x = Bit::encrypt(&c, &[false, false, true, true]).unwrap();
        let y = Bit::encrypt(&c, &[false, true, false, true]).unwrap();
        assert_eq!(and(&x, &y).unwrap().decrypt(), vec![0, 0, 0, 1]);
        assert_eq!(or(&x, &y).unwrap().decrypt(), vec![0, 1, 1, 1]);
        assert_eq!(xor(&x, &y).unwrap().decrypt(), vec![0, 1, 1, 0]);
    }
}
