use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use liezal::expmap::checks::{duhamel_vs_jacobian, SuiteOptions};
use liezal::expmap::{structure_constant, SamplingOptions};
use liezal::family::builtin::{build, FamilyParams};
use liezal::family::{marty_scan, Region, ScanOptions};
use liezal::liegroup::GroupInstance;
use liezal::par::Exec;
use liezal::zalcman::{argmax_mj, ArgmaxOptions};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn bench_marty(c: &mut Criterion) {
    let a = GroupInstance::additive(1);
    let fam = build("linear-family", &a, &FamilyParams::default()).unwrap();
    let region = Region::new(a.identity(), 1.0, 81).unwrap();
    let indices: Vec<u64> = (1..=10).collect();
    let mut group = c.benchmark_group("marty_scan_linear_81");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                marty_scan(
                    &fam,
                    &region,
                    black_box(&indices),
                    ScanOptions { cap: 10.0, exec },
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn bench_argmax_sl2(c: &mut Criterion) {
    let s = GroupInstance::sl2();
    let fam = build("sl2-entry-power", &s, &FamilyParams::default()).unwrap();
    let p0 = s.identity();
    let mut group = c.benchmark_group("argmax_sl2_grid7");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| argmax_mj(&fam, black_box(6), &p0, ArgmaxOptions { grid: 7, exec }).unwrap())
        });
    }
    group.finish();
}

fn bench_structure_constant(c: &mut Criterion) {
    let s = GroupInstance::sl2();
    let mut group = c.benchmark_group("structure_constant_sl2_1e6");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                structure_constant(
                    &s,
                    SamplingOptions {
                        samples: 1_000_000,
                        seed: 1,
                        exec,
                    },
                )
            })
        });
    }
    group.finish();
}

fn bench_duhamel(c: &mut Criterion) {
    let s = GroupInstance::sl2();
    let mut group = c.benchmark_group("duhamel_check_sl2_2000");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                duhamel_vs_jacobian(
                    &s,
                    &SuiteOptions {
                        samples: 2000,
                        seed: 1,
                        exec,
                    },
                    2.0,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_marty,
    bench_argmax_sl2,
    bench_structure_constant,
    bench_duhamel
);
criterion_main!(benches);
