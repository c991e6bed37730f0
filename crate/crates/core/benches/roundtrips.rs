//! Batch throughput: sequential vs rayon-parallel evaluation of the two
//! hot batteries, trivialization roundtrips and Smith-form verification.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[cfg(feature = "parallel")]
use graphact::batch::map_cases_par;
use graphact::batch::map_cases_seq;
use graphact::suite::{gross_tucker_roundtrip, CheckStatus};
use graphact::{
    skew_product, smith_normal_form, Cocycle, DiscreteGraph, GraphAction, GroupModel, IntMatrix,
};

fn random_base_graph(rng: &mut StdRng, max_vertices: usize, max_edges: usize) -> DiscreteGraph {
    let n = rng.gen_range(1..=max_vertices);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let m = rng.gen_range(0..=max_edges);
    let edges: Vec<(String, String, String)> = (0..m)
        .map(|i| {
            (
                format!("e{i}"),
                format!("v{}", rng.gen_range(0..n)),
                format!("v{}", rng.gen_range(0..n)),
            )
        })
        .collect();
    let vrefs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let erefs: Vec<(&str, &str, &str)> = edges
        .iter()
        .map(|(e, s, r)| (e.as_str(), s.as_str(), r.as_str()))
        .collect();
    DiscreteGraph::from_parts(&vrefs, &erefs).unwrap()
}

fn random_free_action(rng: &mut StdRng, group: &GroupModel) -> GraphAction {
    let order = group.order().unwrap();
    let base = random_base_graph(rng, 12 / order.max(1), 24 / order.max(1));
    let elements = group.elements().unwrap();
    let labels = base
        .edges()
        .iter()
        .map(|e| {
            (
                e.clone(),
                elements[rng.gen_range(0..elements.len())].clone(),
            )
        })
        .collect();
    let cocycle = Cocycle::new(base, group.clone(), labels).unwrap();
    skew_product(&cocycle, None).unwrap().action.unwrap()
}

fn action_cases(count: usize) -> Vec<GraphAction> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let groups = [
        GroupModel::cyclic(2).unwrap(),
        GroupModel::cyclic(3).unwrap(),
        GroupModel::cyclic(4).unwrap(),
        GroupModel::symmetric(3).unwrap(),
    ];
    (0..count)
        .map(|i| random_free_action(&mut rng, &groups[i % groups.len()]))
        .collect()
}

fn matrix_cases(count: usize) -> Vec<IntMatrix> {
    let mut rng = StdRng::seed_from_u64(0xfeed);
    (0..count)
        .map(|_| {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let entries: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-9..=9)).collect();
            IntMatrix::from_i64(rows, cols, &entries).unwrap()
        })
        .collect()
}

fn bench_roundtrips(c: &mut Criterion) {
    let mut group = c.benchmark_group("gross_tucker_battery");
    group.sample_size(10);
    for count in [64usize, 128] {
        group.bench_with_input(BenchmarkId::new("seq", count), &count, |b, &count| {
            let cases = action_cases(count);
            b.iter(|| {
                let outcomes = map_cases_seq(cases.clone(), gross_tucker_roundtrip);
                assert!(outcomes.iter().all(|o| o.status == CheckStatus::Pass));
            });
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("par", count), &count, |b, &count| {
            let cases = action_cases(count);
            b.iter(|| {
                let outcomes = map_cases_par(cases.clone(), gross_tucker_roundtrip);
                assert!(outcomes.iter().all(|o| o.status == CheckStatus::Pass));
            });
        });
    }
    group.finish();
}

fn bench_snf(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_form_battery");
    group.sample_size(10);
    for count in [256usize, 1024] {
        group.bench_with_input(BenchmarkId::new("seq", count), &count, |b, &count| {
            let cases = matrix_cases(count);
            b.iter(|| {
                let ranks = map_cases_seq(cases.clone(), |m| smith_normal_form(m).rank());
                assert!(ranks.iter().all(|&r| r <= 6));
            });
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("par", count), &count, |b, &count| {
            let cases = matrix_cases(count);
            b.iter(|| {
                let ranks = map_cases_par(cases.clone(), |m| smith_normal_form(m).rank());
                assert!(ranks.iter().all(|&r| r <= 6));
            });
        });
    }
    group.finish();
}

criterion_group!(benches, bench_roundtrips, bench_snf);
criterion_main!(benches);
