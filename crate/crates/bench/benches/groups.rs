use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nilrep_bench::heis_box;
use nilrep_core::nilgroup::library::c4_times_heisenberg;
use nilrep_core::nilgroup::{intersect, lemma2_check, prop1_refine, Subgroup, SubgroupChain};

fn collection(c: &mut Criterion) {
    let g = c4_times_heisenberg();
    let x = vec![3, 5, -7, 2];
    let y = vec![1, -4, 9, 11];
    c.bench_function("collect/c4xheis/commutator", |b| b.iter(|| g.commutator(black_box(&x), black_box(&y))));
    c.bench_function("collect/c4xheis/pow", |b| b.iter(|| g.pow(black_box(&x), 25)));
}

fn subgroups(c: &mut Criterion) {
    let (g, h1) = heis_box(4, 6, 1);
    let h2 = Subgroup::from_gens(g.clone(), &[vec![6, 1, 0], vec![0, 4, 0], vec![0, 0, 2]]);
    c.bench_function("subgroup/heis/intersect", |b| b.iter(|| intersect(black_box(&h1), black_box(&h2)).unwrap()));
    c.bench_function("subgroup/heis/lemma2", |b| b.iter(|| lemma2_check(black_box(&h2)).unwrap()));
    let prefix = (0..5).map(|i| heis_box(1 << i, 1 << i, 1 << (2 * i)).1).collect();
    let chain = SubgroupChain::new(g, prefix);
    c.bench_function("chain/heis/prop1_refine", |b| b.iter(|| prop1_refine(black_box(&chain), 5).unwrap()));
}

criterion_group!(benches, collection, subgroups);
criterion_main!(benches);
