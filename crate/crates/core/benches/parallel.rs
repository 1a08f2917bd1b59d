//! Parallel against sequential execution of the data-parallel paths.
//!
//! With the default `parallel` feature each workload runs twice: on a
//! one-thread pool and on the full pool. Built with
//! `--no-default-features` the same workloads run through the sequential
//! fallback.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use braidrep_core::analysis::{kernel_witness, WitnessOptions};
use braidrep_core::classifier::{classify, sampling_cross_check, SolveOptions};
use braidrep_core::lkb::m2wb3_extension;
use braidrep_core::localrep::{verify_representation, CatalogFamily, Rep};
use braidrep_core::presentations::{build_presentation, Group};
use braidrep_core::symalg::Variable;

type Workload = Box<dyn Fn() + Send + Sync>;

fn workloads() -> Vec<(&'static str, Workload)> {
    let mkwb3 = classify(Group::MkWB, 3, &SolveOptions::default()).unwrap();
    let ext = m2wb3_extension(&Variable::new("b")).unwrap().as_rep();
    let ext_pres = build_presentation(Group::MkWB, 3, 2).unwrap();
    let sweep: Vec<(Rep, _)> = CatalogFamily::mvb_all(3)
        .into_iter()
        .map(|f| (Rep::Local(f.spec(5, 3).unwrap()), build_presentation(f.group(), 5, 3).unwrap()))
        .collect();
    vec![
        (
            "classify MkVB k=3",
            Box::new(|| drop(black_box(classify(Group::MkVB, 3, &SolveOptions::default()).unwrap()))),
        ),
        (
            "sampled check MkWB k=3, 200 points",
            Box::new(move || drop(black_box(sampling_cross_check(&mkwb3, 200, &[3, 4], 0).unwrap()))),
        ),
        (
            "verify 17 families on n=5",
            Box::new(move || {
                for (rep, pres) in &sweep {
                    black_box(verify_representation(rep, pres).unwrap());
                }
            }),
        ),
        (
            "kernel search on the M_2WB_3 extension, length 5",
            Box::new(move || {
                drop(black_box(kernel_witness(&ext, &ext_pres, &WitnessOptions { max_len: 5, seed: 0 }).unwrap()))
            }),
        ),
    ]
}

#[cfg(feature = "parallel")]
fn bench(c: &mut Criterion) {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    for (name, work) in workloads() {
        let mut g = c.benchmark_group(name);
        g.sample_size(10);
        g.bench_function("1 thread", |b| b.iter(|| one.install(&work)));
        g.bench_function(format!("pool of {}", all.current_num_threads()), |b| b.iter(|| all.install(&work)));
        g.finish();
    }
}

#[cfg(not(feature = "parallel"))]
fn bench(c: &mut Criterion) {
    for (name, work) in workloads() {
        let mut g = c.benchmark_group(name);
        g.sample_size(10);
        g.bench_function("sequential", |b| b.iter(&work));
        g.finish();
    }
}

criterion_group!(benches, bench);
criterion_main!(benches);
