mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{expected, modulus_for, tracked, tracked_deep};
use fhebridge::bench::{output_digest, run_benchmark, Benchmark, BenchmarkSpec, Instance, Mode, WIDTHS};
use fhebridge::circuits::{self, BitWord};
use fhebridge::Error;

fn run(mode: Mode, width: usize, instance: Instance) -> Vec<i64> {
    let spec = BenchmarkSpec::with_instances(mode, width, vec![instance]).unwrap();
    let r = run_benchmark(&tracked_deep(modulus_for(width), 1), &spec).unwrap();
    assert!(!r.corrupted);
    r.outputs.into_iter().next().unwrap()
}

fn both(width: usize, instance: Instance) -> Vec<i64> {
    let bit = run(Mode::Bit, width, instance.clone());
    let bridged = run(Mode::Bridged, width, instance);
    assert_eq!(bit, bridged);
    bit
}

#[test]
fn fibonacci_examples() {
    let fib = |input| both(8, Instance::Fib { input, max_iter: 10 });
    assert_eq!(fib(7), vec![13]);
    assert_eq!(fib(0), vec![0]);
    assert_eq!(fib(12), vec![0]);
}

#[test]
fn keyword_search_examples() {
    let pks = |key| {
        both(
            8,
            Instance::Pks {
                values: vec![10, 20, 30],
                key,
            },
        )
    };
    assert_eq!(pks(1), vec![20]);
    assert_eq!(pks(5), vec![0]);
}

#[test]
fn max_examples() {
    assert_eq!(both(8, Instance::Max { values: vec![3, 1, 4, 2] }), vec![4]);
    assert_eq!(both(8, Instance::Max { values: vec![7] }), vec![7]);
    assert_eq!(both(8, Instance::Max { values: vec![-3, -9, -1] }), vec![-1]);
}

#[test]
fn sort_examples() {
    assert_eq!(both(8, Instance::Sor { values: vec![3, 1, 2] }), vec![1, 2, 3]);
    assert_eq!(both(8, Instance::Sor { values: vec![-2, 0, 5, 9] }), vec![-2, 0, 5, 9]);
}

#[test]
fn logistic_regression_example() {
    let inst = Instance::Log {
        inputs: vec![vec![5]],
        weights: vec![vec![2], vec![1]],
        threshold: 3,
        positions: vec![0],
    };
    assert_eq!(both(8, inst), vec![7]);
}

#[test]
fn mux_examples_and_exhaustive_small_width() {
    let mux = |input, item| {
        both(
            4,
            Instance::Mux {
                input,
                item,
                if_true: 7,
                if_false: -5,
            },
        )
    };
    assert_eq!(mux(2, 2), vec![7]);
    assert_eq!(mux(2, 3), vec![-5]);

    // Every (input, item) pair with random branch values, one per slot.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let instances: Vec<Instance> = (0..256)
        .map(|k| Instance::Mux {
            input: (k >> 4) - 8,
            item: (k & 15) - 8,
            if_true: rng.gen_range(-8..8),
            if_false: rng.gen_range(-8..8),
        })
        .collect();
    for mode in Mode::ALL {
        let spec = BenchmarkSpec::with_instances(mode, 4, instances.clone()).unwrap();
        let r = run_benchmark(&tracked_deep(17, 256), &spec).unwrap();
        for (inst, out) in instances.iter().zip(&r.outputs) {
            assert_eq!(*out, expected(inst), "{mode} {inst:?}");
        }
    }
}

#[test]
fn bridged_mux_cost_is_equality_plus_conversions_plus_selection() {
    for s in WIDTHS {
        let t = modulus_for(s);
        let ctx = tracked(t, 1);
        let a = BitWord::encrypt(&ctx, s, &[1]).unwrap();
        circuits::eq(&a, &a).unwrap();
        let eq_mults = ctx.meter_snapshot().ct_mults;
        let spec = BenchmarkSpec::generate(Benchmark::Mux, Mode::Bridged, s, t, 1, 0).unwrap();
        let r = run_benchmark(&tracked_deep(t, 1), &spec).unwrap();
        // Two signed conversions at 2 mults each, then two selections.
        assert_eq!(r.cost.ct_mults, eq_mults + 2 * 2 + 2, "s={s}");
    }
}

#[test]
fn random_instances_agree_with_reference_at_every_width() {
    for s in WIDTHS {
        let t = modulus_for(s);
        for benchmark in Benchmark::ALL {
            let instances = 100;
            for mode in Mode::ALL {
                let spec = BenchmarkSpec::generate(benchmark, mode, s, t, instances, 17).unwrap();
                let r = run_benchmark(&tracked_deep(t, instances), &spec).unwrap();
                for (inst, out) in spec.instances.iter().zip(&r.outputs) {
                    assert_eq!(*out, expected(inst), "{benchmark}/{mode} s={s} {inst:?}");
                    assert_eq!(*out, inst.oracle());
                }
            }
        }
    }
}

#[test]
fn digests_are_deterministic_per_seed() {
    let digest = |seed| {
        let spec = BenchmarkSpec::generate(Benchmark::Pks, Mode::Bridged, 8, 65537, 4, seed).unwrap();
        output_digest(&run_benchmark(&tracked_deep(65537, 4), &spec).unwrap().outputs)
    };
    assert_eq!(digest(3), digest(3));
    assert_ne!(digest(3), digest(4));
    // FNV-1a of the empty input is the offset basis.
    assert_eq!(output_digest(&[]), 0xcbf2_9ce4_8422_2325);
}

#[test]
fn bridged_depth_never_exceeds_bit_depth() {
    for s in WIDTHS {
        for benchmark in Benchmark::ALL {
            let cost = |mode| {
                let t = modulus_for(s);
                let spec = BenchmarkSpec::generate(benchmark, mode, s, t, 1, 2).unwrap();
                run_benchmark(&tracked_deep(t, 1), &spec).unwrap().cost
            };
            assert!(cost(Mode::Bridged).mult_depth <= cost(Mode::Bit).mult_depth, "{benchmark} s={s}");
        }
    }
}

#[test]
fn default_noise_budget_exposes_deep_bit_level_circuits() {
    let spec = BenchmarkSpec::generate(Benchmark::Log, Mode::Bit, 16, 65537, 1, 1).unwrap();
    let r = run_benchmark(&tracked(65537, 1), &spec).unwrap();
    assert!(r.cost.mult_depth > 880 / 30);
    assert!(r.corrupted);
}

#[test]
fn specs_are_validated() {
    assert!(BenchmarkSpec::generate(Benchmark::Fib, Mode::Bit, 5, 65537, 1, 0).is_err());
    let spec = BenchmarkSpec::generate(Benchmark::Fib, Mode::Bit, 8, 65537, 2, 0).unwrap();
    assert!(matches!(
        run_benchmark(&tracked(65537, 3), &spec),
        Err(Error::SlotCount { expected: 3, got: 2 })
    ));
    let mixed = vec![Instance::Max { values: vec![1, 2] }, Instance::Max { values: vec![1, 2, 3] }];
    assert!(BenchmarkSpec::with_instances(Mode::Bit, 8, mixed).is_err());
    assert!(BenchmarkSpec::with_instances(Mode::Bit, 8, vec![]).is_err());
    assert_eq!("pks".parse::<Benchmark>().unwrap(), Benchmark::Pks);
    assert_eq!("Bridged".parse::<Mode>().unwrap(), Mode::Bridged);
    assert!("nope".parse::<Benchmark>().is_err());
}
