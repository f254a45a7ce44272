//! Polynomial arithmetic in `Z_q[X]/(X^n + 1)`, coefficients in `[0, q)`.
//!
//! Products use schoolbook negacyclic convolution. `q < 2^62`, so a single
//! coefficient product fits in a `u128`.

pub(crate) type Poly = Vec<u64>;

pub(crate) fn zero(n: usize) -> Poly {
    vec![0; n]
}

pub(crate) fn add(a: &[u64], b: &[u64], q: u64) -> Poly {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let s = x + y;
            if s >= q { s - q } else { s }
        })
        .collect()
}

pub(crate) fn sub(a: &[u64], b: &[u64], q: u64) -> Poly {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| if x >= y { x - y } else { x + q - y })
        .collect()
}

pub(crate) fn neg(a: &[u64], q: u64) -> Poly {
    a.iter().map(|&x| if x == 0 { 0 } else { q - x }).collect()
}

pub(crate) fn scalar_mul(a: &[u64], k: u64, q: u64) -> Poly {
    a.iter().map(|&x| mul_mod(x, k, q)).collect()
}

pub(crate) fn mul_mod(x: u64, y: u64, q: u64) -> u64 {
    ((x as u128 * y as u128) % q as u128) as u64
}

/// Maps a signed integer into `[0, q)`.
pub(crate) fn from_signed(x: i64, q: u64) -> u64 {
    x.rem_euclid(q as i64) as u64
}

/// Lifts a residue to its representative in `(-q/2, q/2]`.
pub(crate) fn center(x: u64, q: u64) -> i64 {
    if x > q / 2 { x as i64 - q as i64 } else { x as i64 }
}

/// Negacyclic product mod q.
pub(crate) fn mul(a: &[u64], b: &[u64], q: u64) -> Poly {
    let n = a.len();
    let q128 = q as u128;
    let mut acc = vec![0u128; n];
    let mut wrapped = vec![0u128; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let p = (x as u128 * y as u128) % q128;
            let k = i + j;
            if k < n {
                acc[k] += p;
                if acc[k] >= q128 << 64 {
                    acc[k] %= q128;
                }
            } else {
                wrapped[k - n] += p;
                if wrapped[k - n] >= q128 << 64 {
                    wrapped[k - n] %= q128;
                }
            }
        }
    }
    acc.iter()
        .zip(&wrapped)
        .map(|(&pos, &negs)| {
            let pos = (pos % q128) as u64;
            let negs = (negs % q128) as u64;
            if pos >= negs { pos - negs } else { pos + q - negs }
        })
        .collect()
}

/// Exact integer accumulator for `Q * q + R`, used by the scaled tensor
/// product where raw sums overflow 128 bits.
#[derive(Clone, Copy, Default)]
struct Wide {
    quot: i128,
    rem: i128,
}

const SPILL: i128 = 1 << 124;

impl Wide {
    fn add(&mut self, term: i128, q: i128) {
        self.rem += term;
        if self.rem.abs() >= SPILL {
            self.normalize(q);
        }
    }

    fn normalize(&mut self, q: i128) {
        self.quot += self.rem.div_euclid(q);
        self.rem = self.rem.rem_euclid(q);
    }

    /// `round(t * (Q*q + R) / q) mod q`.
    fn scale_round(mut self, t: u64, q: u64) -> u64 {
        let qi = q as i128;
        self.normalize(qi);
        let t = t as i128;
        let whole = (t * self.quot.rem_euclid(qi)).rem_euclid(qi);
        let frac = (2 * t * self.rem + qi).div_euclid(2 * qi);
        ((whole + frac).rem_euclid(qi)) as u64
    }
}

/// Tensor product of two component vectors over the integers, each output
/// coefficient scaled by `t/q`, rounded and reduced mod q. Inputs are lifted
/// to centered representatives before multiplying.
pub(crate) fn tensor_scaled(a: &[Poly], b: &[Poly], t: u64, q: u64) -> Vec<Poly> {
    let n = a[0].len();
    let qi = q as i128;
    let lift = |c: &[Poly]| -> Vec<Vec<i64>> {
        c.iter().map(|p| p.iter().map(|&x| center(x, q)).collect()).collect()
    };
    let (la, lb) = (lift(a), lift(b));
    let arity = a.len() + b.len() - 1;
    let mut acc = vec![vec![Wide::default(); n]; arity];
    for (i, pa) in la.iter().enumerate() {
        for (j, pb) in lb.iter().enumerate() {
            let out = &mut acc[i + j];
            for (u, &x) in pa.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (v, &y) in pb.iter().enumerate() {
                    let p = x as i128 * y as i128;
                    let k = u + v;
                    if k < n {
                        out[k].add(p, qi);
                    } else {
                        out[k - n].add(-p, qi);
                    }
                }
            }
        }
    }
    acc.into_iter()
        .map(|poly| poly.into_iter().map(|w| w.scale_round(t, q)).collect())
        .collect()
}
