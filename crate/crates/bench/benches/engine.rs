use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use klr_core::{CartanDatum, ExtendedDatum, Gen, KlrAlgebra, ScalarParams};

fn nilhecke(c: &mut Criterion) {
    let d = CartanDatum::a1();
    let alg = KlrAlgebra::new(d.clone(), ScalarParams::trivial(&d));
    let e4 = alg.nilhecke_en(4, 0).unwrap();
    c.bench_function("nilhecke e4 squared", |b| b.iter(|| alg.mul(black_box(&e4), black_box(&e4)).unwrap()));
}

fn braid(c: &mut Criterion) {
    let x = ExtendedDatum::new(&CartanDatum::a2()).unwrap();
    let alg = KlrAlgebra::new(x.datum().clone(), x.specialized_params(&BTreeMap::new()).unwrap());
    let word = [Gen::Psi(1), Gen::Psi(2), Gen::Psi(1), Gen::X(1), Gen::Psi(2), Gen::Psi(1), Gen::Psi(2)];
    c.bench_function("braid normalize (1,2,1)", |b| b.iter(|| alg.normalize(black_box(&word), &[0, 1, 0]).unwrap()));
}

criterion_group!(benches, nilhecke, braid);
criterion_main!(benches);
