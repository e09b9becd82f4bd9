use criterion::{criterion_group, criterion_main, Criterion};
use legcalc_core::cobordism::check;
use legcalc_core::construct::endocobordism;
use legcalc_core::front::{parse_event_tokens, FrontDiagram, OrientedDiagram};
use legcalc_core::moves::enumerate_moves;
use legcalc_core::rulings::enumerate_rulings;
use std::hint::black_box;

fn front(word: &str) -> FrontDiagram {
    let toks: Vec<&str> = word.split_whitespace().collect();
    FrontDiagram::new(parse_event_tokens(&toks, 0).unwrap()).unwrap()
}

fn bench_invariants(c: &mut Criterion) {
    let trefoil = front("L1 L3 X2 X2 X2 R1 R1");
    let torus = front("L1 L3 X2 X2 X2 X2 X2 R1 R1");
    c.bench_function("invariants_trefoil", |b| {
        b.iter(|| OrientedDiagram::default_orientation(black_box(trefoil.clone())).invariants())
    });
    c.bench_function("invariants_t52", |b| {
        b.iter(|| OrientedDiagram::default_orientation(black_box(torus.clone())).invariants())
    });
}

fn bench_moves(c: &mut Criterion) {
    let trefoil = front("L1 L3 X2 X2 X2 R1 R1");
    c.bench_function("enumerate_moves_trefoil", |b| {
        b.iter(|| enumerate_moves(black_box(&trefoil)))
    });
}

fn bench_rulings(c: &mut Criterion) {
    let trefoil = front("L1 L3 X2 X2 X2 R1 R1");
    let torus = front("L1 L3 X2 X2 X2 X2 X2 R1 R1");
    c.bench_function("rulings_trefoil", |b| {
        b.iter(|| enumerate_rulings(black_box(&trefoil), false))
    });
    c.bench_function("rulings_t52_graded", |b| {
        b.iter(|| enumerate_rulings(black_box(&torus), true))
    });
}

fn bench_certificates(c: &mut Criterion) {
    let stab = front("L1 L1 R2 R1");
    let cert = endocobordism(&stab, 1).unwrap();
    c.bench_function("endocobordism_generate_k1", |b| {
        b.iter(|| endocobordism(black_box(&stab), 1).unwrap())
    });
    c.bench_function("endocobordism_check_k1", |b| b.iter(|| check(black_box(&cert)).unwrap()));
}

criterion_group!(benches, bench_invariants, bench_moves, bench_rulings, bench_certificates);
criterion_main!(benches);
