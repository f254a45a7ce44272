mod bench;
mod config;
mod convert;
mod gates;
mod keygen;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use fhebridge::LatticeParams;

use crate::bench::{BackendKind, RunConfig};
use crate::config::{parse_u64, Config};
use crate::convert::Direction;
use crate::report::{sink, write_csv, write_json, Format};

const SEED_ENV: &str = "FHEBRIDGE_SEED";

#[derive(Parser, Debug)]
#[command(name = "fhebridge", version, about = "Bridged bit-level and modular homomorphic arithmetic")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// RNG seed. Falls back to the config file, then FHEBRIDGE_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout (key file prefix for keygen).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Flat `key = value` file; command-line flags win over its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Allow impractically large conversions and overwriting key files.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run benchmarks and report operation counts.
    Bench(BenchArgs),
    /// Run one conversion between representations.
    Convert(ConvertArgs),
    /// Generate a lattice key pair.
    Keygen(LatticeArgs),
    /// Print homomorphic gate truth tables with their costs.
    Gates {
        #[arg(long)]
        t: Option<u64>,
    },
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// plain or lattice.
    #[arg(long)]
    backend: Option<String>,
    /// Comma-separated benchmark names, or `all`.
    #[arg(long)]
    benchmark: Option<String>,
    /// bit, bridged or both.
    #[arg(long)]
    mode: Option<String>,
    /// Comma-separated word widths.
    #[arg(long)]
    bits: Option<String>,
    #[arg(long)]
    slots: Option<usize>,
    /// Initial simulated noise budget in bits (plain backend).
    #[arg(long)]
    noise_budget: Option<u32>,
    #[command(flatten)]
    lattice: LatticeArgs,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// Plaintext modulus.
    #[arg(long)]
    t: Option<u64>,
    /// Ring degree.
    #[arg(long)]
    n: Option<usize>,
    /// Ciphertext modulus, decimal or `2^k`.
    #[arg(long, value_parser = parse_u64)]
    q: Option<u64>,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    #[arg(value_enum)]
    direction: Direction,
    #[arg(allow_negative_numbers = true)]
    value: i64,
    #[arg(long)]
    bits: Option<usize>,
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    noise_budget: Option<u32>,
}

struct Resolved {
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
    force: bool,
    config: Config,
}

fn resolve(common: Common) -> Result<Resolved> {
    let config = match &common.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let env_seed = std::env::var(SEED_ENV)
        .ok()
        .map(|v| v.parse::<u64>().with_context(|| format!("{SEED_ENV} must be an integer")))
        .transpose()?;
    let seed = config.pick(common.seed, "seed")?.or(env_seed).unwrap_or(0);
    let out = config.pick(common.out, "out")?;
    let format = config.pick(common.format, "format")?.unwrap_or(Format::Json);
    let force = common.force || config.pick(None, "force")?.unwrap_or(false);
    Ok(Resolved {
        seed,
        out,
        format,
        force,
        config,
    })
}

fn lattice_params(args: &LatticeArgs, cfg: &Config, default_t: u64) -> Result<LatticeParams> {
    let n = cfg.pick(args.n, "n")?.unwrap_or(64);
    let q = match args.q {
        Some(q) => q,
        None => cfg.raw("q").map(parse_u64).transpose().map_err(anyhow::Error::msg)?.unwrap_or(1 << 40),
    };
    let t = cfg.pick(args.t, "t")?.unwrap_or(default_t);
    Ok(LatticeParams::new(n, q, t)?)
}

fn cmd_bench(args: BenchArgs, r: &Resolved) -> Result<ExitCode> {
    let cfg = &r.config;
    let backend: BackendKind = cfg.pick(args.backend, "backend")?.unwrap_or_else(|| "plain".into()).parse().map_err(anyhow::Error::msg)?;
    let lattice = backend == BackendKind::Lattice;
    let t = cfg.pick(args.lattice.t, "t")?.unwrap_or(if lattice { 17 } else { 65537 });
    let mut slots = cfg.pick(args.slots, "slots")?.unwrap_or(1);
    if lattice && slots != 1 {
        eprintln!("warning: the lattice backend has one slot; ignoring slots = {slots}");
        slots = 1;
    }
    let (n, q) = if lattice {
        let p = lattice_params(&args.lattice, cfg, t)?;
        (p.n, p.q)
    } else {
        (0, 0)
    };
    let run = RunConfig {
        backend,
        t,
        slots,
        widths: bench::parse_widths(&cfg.pick(args.bits, "bits")?.unwrap_or_else(|| if lattice { "4".into() } else { "4,8,16".into() }))?,
        benchmarks: bench::parse_benchmarks(&cfg.pick(args.benchmark, "benchmark")?.unwrap_or_else(|| "all".into()))?,
        modes: bench::parse_modes(&cfg.pick(args.mode, "mode")?.unwrap_or_else(|| "both".into()))?,
        seed: r.seed,
        noise_budget: cfg.pick(args.noise_budget, "noise_budget")?.unwrap_or(fhebridge::BackendParams::DEFAULT_NOISE_BUDGET),
        n,
        q,
    };
    let report = bench::run(&run);
    let mut out = sink(r.out.as_deref())?;
    match r.format {
        Format::Json => write_json(&mut out, &report)?,
        Format::Csv => {
            write_csv(&mut out, &report.records)?;
            for c in &report.comparisons {
                eprintln!(
                    "{} s={}: bit {} mults (depth {}), bridged {} mults (depth {}), ratio {:.2}, outputs {}",
                    c.benchmark,
                    c.bits,
                    c.bit_ct_mults,
                    c.bit_mult_depth,
                    c.bridged_ct_mults,
                    c.bridged_mult_depth,
                    c.mult_ratio,
                    if c.outputs_match { "match" } else { "differ" }
                );
            }
            for e in &report.errors {
                eprintln!("error: {}/{} s={}: {}", e.benchmark, e.mode, e.bits, e.error);
            }
        }
    }
    for c in &report.corrupted {
        eprintln!("error: {c} exhausted its noise budget; outputs are not meaningful");
    }
    Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_convert(args: ConvertArgs, r: &Resolved) -> Result<ExitCode> {
    let cfg = &r.config;
    let bits = cfg.pick(args.bits, "bits")?.unwrap_or(8);
    let t = cfg.pick(args.t, "t")?.unwrap_or(65537);
    let budget = cfg.pick(args.noise_budget, "noise_budget")?.unwrap_or(fhebridge::BackendParams::DEFAULT_NOISE_BUDGET);
    let record = convert::run(args.direction, bits, t, args.value, r.force, budget)?;
    let mut out = sink(r.out.as_deref())?;
    match r.format {
        Format::Json => write_json(&mut out, &record)?,
        Format::Csv => write_csv(&mut out, &[&record])?,
    }
    if record.corrupted {
        eprintln!("error: the conversion exhausted the noise budget");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_keygen(args: LatticeArgs, r: &Resolved) -> Result<ExitCode> {
    let params = lattice_params(&args, &r.config, 17)?;
    let prefix = r.out.clone().unwrap_or_else(|| PathBuf::from("fhebridge"));
    let record = keygen::run(params, r.seed, &prefix, r.force)?;
    let mut out = sink(None)?;
    match r.format {
        Format::Json => write_json(&mut out, &record)?,
        Format::Csv => write_csv(&mut out, &[&record])?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gates(t: Option<u64>, r: &Resolved) -> Result<ExitCode> {
    let t = r.config.pick(t, "t")?.unwrap_or(65537);
    let rows = gates::run(t)?;
    let mut out = sink(r.out.as_deref())?;
    match r.format {
        Format::Json => write_json(&mut out, &rows)?,
        Format::Csv => write_csv(&mut out, &rows)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let resolved = resolve(cli.common)?;
    match cli.command {
        Command::Bench(args) => cmd_bench(args, &resolved),
        Command::Convert(args) => cmd_convert(args, &resolved),
        Command::Keygen(args) => cmd_keygen(args, &resolved),
        Command::Gates { t } => cmd_gates(t, &resolved),
    }
}
