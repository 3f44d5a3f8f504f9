use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use mlk_core::bisector::{fair_bisector, tetractors};
use mlk_core::exactalg::{smith_normal_form, IntMatrix};
use mlk_core::localfield::{symbol_datum, weil_laws_check, FieldModel};
use mlk_core::metaplectic::{bar_y, modify, MetaplecticStructure};
use mlk_core::rootdata::preset;
use mlk_core::torusparams::{build_t_sharp, param_character_bijection};
use mlk_core::twisthopf::{build_chi, build_tau, verify_compatible, TwistContext, DEFAULT_WINDOW};

fn exact_algebra(c: &mut Criterion) {
    let m = IntMatrix::from_rows(&[vec![4, 6, 2, 8], vec![6, 9, -3, 1], vec![2, -3, 5, 7], vec![8, 1, 7, 12]], 4).unwrap();
    c.bench_function("smith normal form 4x4", |b| b.iter(|| smith_normal_form(black_box(&m))));

    let sp6 = preset("Sp6").unwrap();
    let ms = MetaplecticStructure::new(sp6.default_q.clone(), 2, &sp6.datum).unwrap();
    c.bench_function("modify Sp6 n=2", |b| b.iter(|| modify(black_box(&ms), &sp6.datum).unwrap()));

    let md = modify(&ms, &sp6.datum).unwrap();
    let bar = bar_y(&md).unwrap();
    let cb = fair_bisector(&sp6.default_q, &sp6.datum).unwrap();
    c.bench_function("tetractors Sp6", |b| b.iter(|| tetractors(&cb, &sp6.default_q, black_box(&bar)).unwrap()));
}

fn sweeps(c: &mut Criterion) {
    let field = FieldModel::padic(3).unwrap();
    c.bench_function("Weil laws Q_3", |b| b.iter(|| weil_laws_check(black_box(&field)).unwrap()));

    let sp4 = preset("Sp4").unwrap();
    let ms = MetaplecticStructure::new(sp4.default_q.clone(), 2, &sp4.datum).unwrap();
    let md = modify(&ms, &sp4.datum).unwrap();
    let sd = symbol_datum(&field, 2).unwrap();
    let cb = fair_bisector(&sp4.default_q, &sp4.datum).unwrap();
    let ctx = Arc::new(TwistContext::new(&md, &sd, DEFAULT_WINDOW).unwrap());
    let mut group = c.benchmark_group("Sp4 over Q_3");
    group.sample_size(20);
    group.bench_function("tau, chi and compatibility sweeps", |b| {
        b.iter(|| {
            let (tau, _) = build_tau(&ctx);
            let (chi, _) = build_chi(&ctx, &cb).unwrap();
            verify_compatible(&tau, &chi)
        })
    });
    let model = build_t_sharp(&md, &sd, &cb).unwrap();
    group.bench_function("character-parameter bijection", |b| b.iter(|| param_character_bijection(&model).unwrap()));
    group.finish();
}

criterion_group!(benches, exact_algebra, sweeps);
criterion_main!(benches);
