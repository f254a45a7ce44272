//! Key material and its binary file format.
//!
//! Layout, all integers little-endian `u64`:
//!
//! ```text
//! "FHBRIDG1" | kind | n | q | t | error_stddev (f64 bits) | arrays...
//! ```
//!
//! where each array is a length followed by that many coefficients. A secret
//! key holds one array (the ternary secret mod q), a public key two
//! (`p0`, `p1`).

use super::poly::Poly;
use super::LatticeParams;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"FHBRIDG1";

const KIND_SECRET: u64 = 1;
const KIND_PUBLIC: u64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct SecretKey {
    pub(crate) params: LatticeParams,
    /// Coefficients in {-1, 0, 1}.
    pub(crate) s: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PublicKey {
    pub(crate) params: LatticeParams,
    pub(crate) p0: Poly,
    pub(crate) p1: Poly,
}

impl SecretKey {
    pub fn params(&self) -> &LatticeParams {
        &self.params
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.s
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let q = self.params.q;
        let s: Poly = self.s.iter().map(|&c| super::poly::from_signed(c, q)).collect();
        encode(KIND_SECRET, &self.params, &[&s])
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (params, arrays) = decode(KIND_SECRET, 1, bytes)?;
        let q = params.q;
        let s = arrays[0]
            .iter()
            .map(|&c| match super::poly::center(c, q) {
                v @ -1..=1 => Ok(v),
                _ => Err(Error::Format("secret coefficient is not ternary".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, s })
    }
}

impl PublicKey {
    pub fn params(&self) -> &LatticeParams {
        &self.params
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        encode(KIND_PUBLIC, &self.params, &[&self.p0, &self.p1])
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (params, mut arrays) = decode(KIND_PUBLIC, 2, bytes)?;
        let p1 = arrays.pop().unwrap_or_default();
        let p0 = arrays.pop().unwrap_or_default();
        Ok(Self { params, p0, p1 })
    }
}

fn encode(kind: u64, params: &LatticeParams, arrays: &[&Poly]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 * (6 + arrays.iter().map(|a| a.len() + 1).sum::<usize>()));
    out.extend_from_slice(MAGIC);
    for word in [
        kind,
        params.n as u64,
        params.q,
        params.t,
        params.error_stddev.to_bits(),
    ] {
        out.extend_from_slice(&word.to_le_bytes());
    }
    for array in arrays {
        out.extend_from_slice(&(array.len() as u64).to_le_bytes());
        for &c in array.iter() {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl Reader<'_> {
    fn word(&mut self) -> Result<u64> {
        if self.bytes.len() < 8 {
            return Err(Error::Format("unexpected end of data".into()));
        }
        let (head, tail) = self.bytes.split_at(8);
        self.bytes = tail;
        Ok(u64::from_le_bytes(head.try_into().expect("8-byte slice")))
    }
}

fn decode(kind: u64, count: usize, bytes: &[u8]) -> Result<(LatticeParams, Vec<Poly>)> {
    if bytes.len() < 8 || &bytes[..8] != MAGIC {
        return Err(Error::Format("missing FHBRIDG1 header".into()));
    }
    let mut r = Reader { bytes: &bytes[8..] };
    let found = r.word()?;
    if found != kind {
        return Err(Error::Format(format!("expected key kind {kind}, found {found}")));
    }
    let n = usize::try_from(r.word()?).map_err(|_| Error::Format("ring degree overflows".into()))?;
    let q = r.word()?;
    let t = r.word()?;
    let sigma = f64::from_bits(r.word()?);
    let params = LatticeParams::new(n, q, t)?.with_error_stddev(sigma)?;
    let mut arrays = Vec::with_capacity(count);
    for _ in 0..count {
        let len = r.word()?;
        if len != n as u64 {
            return Err(Error::Format(format!("array length {len} does not match n = {n}")));
        }
        let coeffs = (0..n)
            .map(|_| {
                let c = r.word()?;
                if c >= q {
                    return Err(Error::Format("coefficient not reduced mod q".into()));
                }
                Ok(c)
            })
            .collect::<Result<Poly>>()?;
        arrays.push(coeffs);
    }
    if !r.bytes.is_empty() {
        return Err(Error::Format("trailing bytes after key data".into()));
    }
    Ok((params, arrays))
}
