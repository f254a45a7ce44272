//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so every line is printed; exits non-zero if any
//! criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{expected, modulus_for, tracked, tracked_deep};
use fhebridge::bench::{run_benchmark, Benchmark, BenchmarkSpec, Mode};
use fhebridge::circuits::{self, BitWord};
use fhebridge::convert::{int_to_mod, mod_pow, mod_to_int, mod_to_uint, uint_to_mod};
use fhebridge::gates::{Bit, Gate};
use fhebridge::lattice::{dec, enc, keygen, lat_add, lat_mul, noise_budget, LatticeBackend, LatticeParams};
use fhebridge::{CostReport, SecureInt, SecureMod, SecureUint};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn floor_log2(e: u64) -> u64 {
    63 - u64::from(e.leading_zeros())
}

fn ceil_log2(e: u64) -> u64 {
    if e <= 1 { 0 } else { floor_log2(e - 1) + 1 }
}

fn weight(e: u64) -> u64 {
    u64::from(e.count_ones())
}

fn gate_reference(gate: Gate, x: &[bool]) -> bool {
    match gate.name() {
        "AND" => x[0] && x[1],
        "NAND" => !(x[0] && x[1]),
        "OR" => x[0] || x[1],
        "NOR" => !(x[0] || x[1]),
        "XOR" => x[0] != x[1],
        "XNOR" => x[0] == x[1],
        "NOT" => !x[0],
        "MUX" => {
            if x[0] {
                x[1]
            } else {
                x[2]
            }
        }
        other => panic!("unknown gate {other}"),
    }
}

fn gates() -> Outcome {
    let mut rows = 0;
    for t in [2u64, 5, 17, 65537] {
        let ctx = tracked(t, 1);
        for gate in Gate::ALL {
            let n = gate.arity();
            for combo in 0..1u32 << n {
                let inputs: Vec<bool> = (0..n).map(|i| combo >> i & 1 == 1).collect();
                let bits = inputs
                    .iter()
                    .map(|&b| Bit::encrypt(&ctx, &[b]))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| e.to_string())?;
                let before = ctx.meter_snapshot();
                let out = gate.eval(&bits).map_err(|e| e.to_string())?;
                let mults = ctx.meter_snapshot().since(&before).ct_mults;
                let want = u64::from(gate_reference(gate, &inputs));
                ensure!(out.decrypt() == vec![want], "{} t={t} inputs={inputs:?}", gate.name());
                if matches!(gate, Gate::Xor | Gate::Xnor) {
                    let expected_mults = if t == 2 { 0 } else { 1 };
                    ensure!(mults == expected_mults, "{} t={t} used {mults} mults", gate.name());
                }
                rows += 1;
            }
        }
    }
    Ok(format!("{rows} truth-table rows exact; XOR/XNOR 0 mults at t=2, 1 otherwise"))
}

fn delta<T>(ctx_snapshot: impl Fn() -> CostReport, f: impl FnOnce() -> T) -> (T, CostReport) {
    let before = ctx_snapshot();
    let out = f();
    (out, ctx_snapshot().since(&before))
}

fn conversion_costs() -> Outcome {
    let ctx = tracked(65537, 1);
    let snap = || ctx.meter_snapshot();
    for s in [2usize, 4, 8, 16] {
        let x = SecureUint::encrypt(&ctx, s, &[(1u64 << s) - 1]).unwrap();
        let (_, d) = delta(snap, || uint_to_mod(&x).unwrap());
        ensure!(d.ct_mults == 0 && d.ct_adds == 2 * (s as u64 - 1), "uint->mod s={s}: {d:?}");
    }
    for s in [2usize, 4, 8] {
        let x = SecureInt::encrypt(&ctx, s, &[-1]).unwrap();
        let (m, d) = delta(snap, || int_to_mod(&x).unwrap());
        ensure!(d.ct_mults == 2, "int->mod s={s}: {} mults", d.ct_mults);
        ensure!(m.mult_depth() == x.mult_depth() + 1, "int->mod s={s}: depth {}", m.mult_depth());
    }
    for e in [2u64, 3, 4, 5, 16, 100] {
        let x = SecureMod::encrypt(&ctx, &[3]).unwrap();
        let (y, d) = delta(snap, || mod_pow(&x, e).unwrap());
        ensure!(d.ct_mults == floor_log2(e) + weight(e) - 1, "pow e={e}: {} mults", d.ct_mults);
        ensure!(u64::from(y.mult_depth()) == ceil_log2(e), "pow e={e}: depth {}", y.mult_depth());
    }
    for (t, s, literal) in [(5u64, 3usize, 25u64), (17, 4, 136)] {
        let c = tracked(t, 1);
        let x = SecureMod::encrypt(&c, &[1]).unwrap();
        let (y, d) = delta(|| c.meter_snapshot(), || mod_to_uint(&x, s).unwrap());
        let formula = t * (s as u64 + floor_log2(t - 1) + weight(t - 1) - 1);
        ensure!(formula == literal && d.ct_mults == formula, "mod->uint t={t} s={s}: {} mults", d.ct_mults);
        ensure!(u64::from(y.mult_depth()) == ceil_log2(t - 1) + 1, "mod->uint depth {}", y.mult_depth());
    }
    let c = tracked(5, 1);
    let x = SecureMod::encrypt(&c, &[2]).unwrap();
    let (y, d) = delta(|| c.meter_snapshot(), || mod_to_int(&x, 3).unwrap());
    let formula = 2 * 5 * (3 + floor_log2(4) + weight(4));
    ensure!(formula == 60 && d.ct_mults == 60, "mod->int: {} mults", d.ct_mults);
    ensure!(u64::from(y.mult_depth()) == ceil_log2(4) + 2, "mod->int depth {}", y.mult_depth());
    Ok("all closed forms match the meter exactly (25, 136, 60 linear-search mults)".into())
}

fn conversion_soundness() -> Outcome {
    let t = 65537;
    for s in [2usize, 4, 8] {
        let n = 1usize << s;
        // One slot per input value.
        let ctx = tracked(t, n);
        let values: Vec<u64> = (0..n as u64).collect();
        let got = uint_to_mod(&SecureUint::encrypt(&ctx, s, &values).unwrap()).unwrap().decrypt();
        ensure!(got == values, "uint->mod s={s}");
        let signed: Vec<i64> = (0..n as i64).map(|v| v - (n as i64 / 2)).collect();
        let got = int_to_mod(&SecureInt::encrypt(&ctx, s, &signed).unwrap()).unwrap().decrypt();
        let want: Vec<u64> = signed.iter().map(|&v| v.rem_euclid(t as i64) as u64).collect();
        ensure!(got == want, "int->mod s={s}");
    }
    for (t, s) in [(5u64, 3usize), (17, 5)] {
        let ctx = tracked(t, t as usize);
        let residues: Vec<i64> = (0..t as i64).collect();
        let x = SecureMod::encrypt(&ctx, &residues).unwrap();
        let unsigned = mod_to_uint(&x, s).unwrap().decrypt();
        ensure!(unsigned == (0..t).collect::<Vec<_>>(), "mod->uint t={t} s={s}: {unsigned:?}");
        let signed = mod_to_int(&x, s).unwrap().decrypt();
        let half = 1i64 << (s - 1);
        let want: Vec<i64> = residues.iter().map(|&r| if r < half { r } else { r - t as i64 }).collect();
        ensure!(signed == want, "mod->int t={t} s={s}: {signed:?}");
    }
    Ok("exhaustive roundtrips exact".into())
}

fn wrap(v: i64, s: usize) -> i64 {
    let m = 1i64 << s;
    let u = v.rem_euclid(m);
    if u >= m / 2 { u - m } else { u }
}

fn circuit_equivalence() -> Outcome {
    let s = 4;
    let ctx = tracked_deep(17, 256);
    let (xs, ys): (Vec<i64>, Vec<i64>) = (0..256).map(|k| ((k >> 4) - 8, (k & 15) - 8)).unzip();
    let a = BitWord::encrypt(&ctx, s, &xs).unwrap();
    let b = BitWord::encrypt(&ctx, s, &ys).unwrap();
    let unsigned = |v: i64| v.rem_euclid(16);
    let check_word = |name: &str, w: BitWord<_>, f: &dyn Fn(i64, i64) -> i64| -> Result<(), String> {
        let got = w.decrypt_signed();
        for k in 0..256 {
            let want = wrap(f(xs[k], ys[k]), s);
            ensure!(got[k] == want, "{name}({}, {}) = {} want {want}", xs[k], ys[k], got[k]);
        }
        Ok(())
    };
    let check_bit = |name: &str, bit: Bit<_>, f: &dyn Fn(i64, i64) -> bool| -> Result<(), String> {
        let got = bit.decrypt();
        for k in 0..256 {
            ensure!(got[k] == u64::from(f(xs[k], ys[k])), "{name}({}, {})", xs[k], ys[k]);
        }
        Ok(())
    };
    check_word("add", circuits::add(&a, &b).unwrap(), &|x, y| x + y)?;
    check_word("sub", circuits::sub(&a, &b).unwrap(), &|x, y| x - y)?;
    check_word("mul", circuits::mul(&a, &b).unwrap(), &|x, y| x * y)?;
    check_word("neg", circuits::neg(&a).unwrap(), &|x, _| -x)?;
    check_bit("eq", circuits::eq(&a, &b).unwrap(), &|x, y| x == y)?;
    check_bit("lt_s", circuits::lt_s(&a, &b).unwrap(), &|x, y| x < y)?;
    check_bit("gt_s", circuits::gt_s(&a, &b).unwrap(), &|x, y| x > y)?;
    check_bit("lt_u", circuits::lt_u(&a, &b).unwrap(), &|x, y| unsigned(x) < unsigned(y))?;
    check_bit("gt_u", circuits::gt_u(&a, &b).unwrap(), &|x, y| unsigned(x) > unsigned(y))?;
    let sel = a.bit(0).clone();
    check_word("bool_mul", circuits::bool_mul(&sel, &b).unwrap(), &|x, y| (x & 1) * y)?;
    Ok("add/sub/mul/neg/eq/lt/gt (signed, unsigned) and bool_mul exact on all 256 pairs".into())
}

fn triple_equivalence() -> Outcome {
    let (s, t) = (8, 65537);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for benchmark in Benchmark::ALL {
        for _ in 0..100 {
            let seed = rng.gen();
            let mut outputs = Vec::new();
            for mode in Mode::ALL {
                let spec = BenchmarkSpec::generate(benchmark, mode, s, t, 1, seed).unwrap();
                let ctx = tracked_deep(t, 1);
                let r = run_benchmark(&ctx, &spec).map_err(|e| e.to_string())?;
                ensure!(!r.corrupted, "{benchmark}/{mode} corrupted");
                let want = expected(&spec.instances[0]);
                ensure!(r.outputs[0] == want, "{benchmark}/{mode} seed {seed}: {:?} want {want:?}", r.outputs[0]);
                outputs.push(r.outputs);
            }
            ensure!(outputs[0] == outputs[1], "{benchmark} seed {seed}: bit != bridged");
        }
    }
    Ok("oracle = bit = bridged on 100 instances of each benchmark".into())
}

fn cost(benchmark: Benchmark, mode: Mode, s: usize, seed: u64) -> CostReport {
    let t = modulus_for(s);
    let ctx = tracked_deep(t, 1);
    let spec = BenchmarkSpec::generate(benchmark, mode, s, t, 1, seed).unwrap();
    run_benchmark(&ctx, &spec).unwrap().cost
}

fn dominance() -> Outcome {
    let mut log_ratio = 0.0;
    for s in [4usize, 8, 16] {
        for benchmark in Benchmark::ALL {
            let bit = cost(benchmark, Mode::Bit, s, 1);
            let bridged = cost(benchmark, Mode::Bridged, s, 1);
            let strict = benchmark != Benchmark::Sor || s >= 8;
            if strict {
                ensure!(bridged.ct_mults < bit.ct_mults, "{benchmark} s={s}: {} vs {}", bridged.ct_mults, bit.ct_mults);
            } else {
                ensure!(bridged.ct_mults <= bit.ct_mults, "{benchmark} s={s}: {} vs {}", bridged.ct_mults, bit.ct_mults);
            }
            ensure!(
                bridged.mult_depth <= bit.mult_depth,
                "{benchmark} s={s}: depth {} vs {}",
                bridged.mult_depth,
                bit.mult_depth
            );
            if benchmark == Benchmark::Log && s == 8 {
                log_ratio = bit.ct_mults as f64 / bridged.ct_mults as f64;
            }
        }
    }
    ensure!(log_ratio.ge(&8.0), "LOG ratio at s=8 is {log_ratio:.2}, below 8");
    Ok(format!("mults and depth dominated at s=4,8,16; LOG mult ratio at s=8 = {log_ratio:.2}"))
}

/// Negacyclic product mod t, straight from the definition.
fn ring_product(a: &[u64], b: &[u64], t: u64) -> Vec<u64> {
    let n = a.len();
    let mut out = vec![0i64; n];
    for i in 0..n {
        for j in 0..n {
            let p = (a[i] * b[j]) as i64;
            if i + j < n {
                out[i + j] += p;
            } else {
                out[i + j - n] -= p;
            }
        }
    }
    out.iter().map(|&c| c.rem_euclid(t as i64) as u64).collect()
}

fn lattice() -> Outcome {
    let params = LatticeParams::new(64, 1 << 40, 17).unwrap();
    let (sk, pk) = keygen(&params, 2024);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let message = |rng: &mut ChaCha8Rng| -> Vec<u64> { (0..64).map(|_| rng.gen_range(0..17)).collect() };
    for k in 0..1000 {
        let m = message(&mut rng);
        let c = enc(&pk, &m, &mut rng).unwrap();
        ensure!(dec(&sk, &c) == m, "roundtrip {k} failed");
    }
    let mut positive = 0;
    for k in 0..200 {
        let (a, b) = (message(&mut rng), message(&mut rng));
        let ca = enc(&pk, &a, &mut rng).unwrap();
        let cb = enc(&pk, &b, &mut rng).unwrap();
        let sum = lat_add(&params, &ca, &cb);
        if noise_budget(&sk, &sum) > 0 {
            let want: Vec<u64> = a.iter().zip(&b).map(|(x, y)| (x + y) % 17).collect();
            ensure!(dec(&sk, &sum) == want, "add {k} wrong");
        }
        let prod = lat_mul(&params, &ca, &cb).unwrap();
        let budget = noise_budget(&sk, &prod);
        let before = noise_budget(&sk, &ca).min(noise_budget(&sk, &cb));
        ensure!(budget < before, "mul {k}: budget {budget} not below {before}");
        if budget > 0 {
            positive += 1;
            ensure!(dec(&sk, &prod) == ring_product(&a, &b, 17), "mul {k} wrong");
        }
    }
    ensure!(positive == 200, "only {positive}/200 products kept a positive budget");

    let (s, t) = (4, 17);
    let mut failures = Vec::new();
    for benchmark in Benchmark::ALL {
        for mode in Mode::ALL {
            let spec = BenchmarkSpec::generate(benchmark, mode, s, t, 1, 9).unwrap();
            let reference = run_benchmark(&tracked_deep(t, 1), &spec).unwrap();
            let ctx = LatticeBackend::context(params, 9, 1).unwrap();
            match run_benchmark(&ctx, &spec) {
                Ok(r) if r.outputs == reference.outputs && !r.corrupted => {}
                Ok(r) => failures.push(format!(
                    "{benchmark}/{mode}: {:?} vs {:?}{} (depth {})",
                    r.outputs[0],
                    reference.outputs[0],
                    if r.corrupted { ", noise exhausted" } else { "" },
                    reference.cost.mult_depth
                )),
                Err(e) => failures.push(format!("{benchmark}/{mode}: {e} (depth {})", reference.cost.mult_depth)),
            }
        }
    }
    ensure!(
        failures.is_empty(),
        "roundtrips, 200 add/mul and noise monotonicity hold; cross-backend differential failed for {}/12 runs: {}",
        failures.len(),
        failures.join("; ")
    );
    Ok("roundtrips, homomorphism, noise monotonicity and cross-backend differential".into())
}

fn batching() -> Outcome {
    let (s, t, slots) = (8, 65537, 64);
    for benchmark in [Benchmark::Pks, Benchmark::Fib] {
        for mode in Mode::ALL {
            let batched = BenchmarkSpec::generate(benchmark, mode, s, t, slots, 31).unwrap();
            let r = run_benchmark(&tracked_deep(t, slots), &batched).unwrap();
            ensure!(r.amortized_ms == r.wall_ms / 64.0, "{benchmark}/{mode}: amortized time");
            ensure!(r.slots_used == 64, "{benchmark}/{mode}: {} slots", r.slots_used);
            for (k, instance) in batched.instances.iter().enumerate() {
                let single = BenchmarkSpec::with_instances(mode, s, vec![instance.clone()]).unwrap();
                let one = run_benchmark(&tracked_deep(t, 1), &single).unwrap();
                ensure!(one.outputs[0] == r.outputs[k], "{benchmark}/{mode} slot {k}");
            }
        }
    }
    Ok("64-slot PKS and FIB equal 64 scalar runs slotwise".into())
}

fn obliviousness() -> Outcome {
    let mut configs = 0;
    for s in [4usize, 8, 16] {
        for benchmark in Benchmark::ALL {
            for mode in Mode::ALL {
                let first = cost(benchmark, mode, s, 0);
                for seed in 1..20 {
                    let c = cost(benchmark, mode, s, seed);
                    ensure!(c == first, "{benchmark}/{mode} s={s} seed {seed}: {c:?} vs {first:?}");
                }
                configs += 1;
            }
        }
    }
    Ok(format!("cost reports identical across 20 inputs for {configs} configurations"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("gate correctness", gates, Duration::from_secs(1)),
        ("conversion cost formulas", conversion_costs, Duration::from_secs(10)),
        ("conversion soundness", conversion_soundness, Duration::from_secs(30)),
        ("circuit equivalence", circuit_equivalence, Duration::from_secs(120)),
        ("benchmark triple equivalence", triple_equivalence, Duration::from_secs(300)),
        ("bridging dominance", dominance, Duration::from_secs(300)),
        ("lattice backend", lattice, Duration::from_secs(300)),
        ("batching", batching, Duration::from_secs(300)),
        ("data-obliviousness", obliviousness, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > *limit => Err(format!("took {elapsed:.1?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS in {elapsed:.2?}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL in {elapsed:.2?}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
