//! Parallel vs sequential throughput on the data-parallel inner loops:
//! Monte Carlo sampling and profile-map construction.

use criterion::{criterion_group, criterion_main, Criterion};

use matchdist::exact::build_pgf_with_mode;
use matchdist::sample::mc_pmf_with;
use matchdist::{Edge, ExecMode, HostGraph, SubgraphFamily};

fn canonical_pm_family(host: &HostGraph) -> SubgraphFamily {
    let n = host.n() as u32;
    let edges: Vec<Edge> = (0..n).map(|i| Edge::new(2 * i, 2 * i + 1).unwrap()).collect();
    SubgraphFamily::validate(host, vec![edges], true).unwrap()
}

fn bench_mc(c: &mut Criterion) {
    let host = HostGraph::complete(20).unwrap();
    let family = canonical_pm_family(&host);
    let samples = 20_000u64;
    let workers = 8;
    let mut group = c.benchmark_group("mc_pmf");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| mc_pmf_with(&host, &family, samples, 7, workers, ExecMode::Sequential).unwrap())
    });
    group.bench_function("parallel", |b| {
        b.iter(|| mc_pmf_with(&host, &family, samples, 7, workers, ExecMode::Parallel).unwrap())
    });
    group.finish();
}

fn bench_pgf(c: &mut Criterion) {
    // Three disjoint 8-edge matchings on K_48: 24 single-edge components.
    let host = HostGraph::complete(24).unwrap();
    let members: Vec<Vec<Edge>> = (0..3u32)
        .map(|m| {
            (0..8u32)
                .map(|i| {
                    let base = 16 * m + 2 * i;
                    Edge::new(base, base + 1).unwrap()
                })
                .collect()
        })
        .collect();
    let family = SubgraphFamily::validate(&host, members, true).unwrap();
    let mut group = c.benchmark_group("build_pgf");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| build_pgf_with_mode(&host, &family, ExecMode::Sequential).unwrap())
    });
    group.bench_function("parallel", |b| {
        b.iter(|| build_pgf_with_mode(&host, &family, ExecMode::Parallel).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_mc, bench_pgf);
criterion_main!(benches);
