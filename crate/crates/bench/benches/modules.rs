use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nilrep_bench::induced_character;
use nilrep_core::indmod::{is_induced_from, is_irreducible, INDUCED_SEARCH_BUDGET};

fn induction(c: &mut Criterion) {
    let w = induced_character(7, 3, 2, 3);
    c.bench_function("induce/z2/index3", |b| {
        b.iter(|| nilrep_core::indmod::induce(black_box(&w.base), &nilrep_core::nilgroup::Subgroup::whole(w.base.acting.group.clone())).unwrap())
    });
    c.bench_function("is_induced_from/z2/index3", |b| {
        b.iter(|| is_induced_from(black_box(&w.total), &w.base.acting, INDUCED_SEARCH_BUDGET).unwrap())
    });
    let big = induced_character(11, 4, 3, 2);
    c.bench_function("is_irreducible/z2/dim4", |b| b.iter(|| is_irreducible(black_box(&big.total)).unwrap()));
}

criterion_group!(benches, induction);
criterion_main!(benches);
