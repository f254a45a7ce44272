//! The `keygen` subcommand: lattice key pairs on disk.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use fhebridge::lattice::keygen;
use fhebridge::LatticeParams;

#[derive(Debug, Clone, Serialize)]
pub struct KeygenRecord {
    pub n: usize,
    pub q: u64,
    pub t: u64,
    pub seed: u64,
    pub secret_key: PathBuf,
    pub public_key: PathBuf,
}

/// Writes `<prefix>.sk` and `<prefix>.pk`.
pub fn run(params: LatticeParams, seed: u64, prefix: &Path, force: bool) -> Result<KeygenRecord> {
    let sk_path = prefix.with_extension("sk");
    let pk_path = prefix.with_extension("pk");
    for p in [&sk_path, &pk_path] {
        if p.exists() && !force {
            bail!("{} already exists; pass --force to overwrite", p.display());
        }
    }
    let (sk, pk) = keygen(&params, seed);
    std::fs::write(&sk_path, sk.to_bytes()).with_context(|| format!("writing {}", sk_path.display()))?;
    std::fs::write(&pk_path, pk.to_bytes()).with_context(|| format!("writing {}", pk_path.display()))?;
    Ok(KeygenRecord {
        n: params.n,
        q: params.q,
        t: params.t,
        seed,
        secret_key: sk_path,
        public_key: pk_path,
    })
}
