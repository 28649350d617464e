use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use csys::crr::{Crr, RrArgs};
use csys::crrlm::{crrlm_build, lm_of_rr, LmArgs};
use csys::csystem::{extend_randomly, CSystem};
use csys::kleisli::{qq_iter, qq_iter_by_iteration, sample_kmor, theta_rr};
use csys::relmonad::{BindingSignature, FreeMonad, RelativeMonad, Term};
use csys::prng;

const SEED: u64 = 11;

fn lam_app() -> FreeMonad {
    FreeMonad::new(BindingSignature::lam_app())
}

fn term(inst: &FreeMonad, n: usize, size: usize, seed: u64) -> Term<<FreeMonad as RelativeMonad>::Expr> {
    let mut rng = prng(seed);
    loop {
        if let Some(e) = inst.sample(n, size, &mut rng) {
            return Term::new(n, e);
        }
    }
}

fn extend(c: &mut Criterion) {
    let inst = lam_app();
    let mut group = c.benchmark_group("extend");
    for size in [4, 16, 64] {
        let t = term(&inst, 4, size, SEED);
        let f = sample_kmor(&inst, 4, 6, size, &mut prng(SEED + 1)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(size), &size, |b, _| {
            b.iter(|| inst.extend(black_box(&f), black_box(&t.expr)))
        });
    }
    group.finish();
}

fn qq(c: &mut Criterion) {
    let inst = lam_app();
    let f = sample_kmor(&inst, 4, 4, 16, &mut prng(SEED)).unwrap();
    let mut group = c.benchmark_group("qq_iter");
    for i in [1, 4, 16] {
        group.bench_with_input(BenchmarkId::new("closed", i), &i, |b, &i| {
            b.iter(|| qq_iter(&inst, black_box(&f), i))
        });
        group.bench_with_input(BenchmarkId::new("iterated", i), &i, |b, &i| {
            b.iter(|| qq_iter_by_iteration(&inst, black_box(&f), i))
        });
    }
    group.finish();
}

fn theta(c: &mut Criterion) {
    let inst = lam_app();
    let r = term(&inst, 2, 16, SEED);
    let s = term(&inst, 5, 32, SEED + 1);
    c.bench_function("theta_rr", |b| {
        b.iter(|| theta_rr(&inst, black_box(&r), black_box(&s)).unwrap())
    });
}

fn crr_bops(c: &mut Criterion) {
    let sys = Crr::new(lam_app());
    let args = RrArgs::STilde {
        r: term(sys.inst(), 2, 16, SEED),
        s: term(sys.inst(), 5, 32, SEED + 1),
    };
    let mut group = c.benchmark_group("crr_stilde");
    group.bench_function("explicit", |b| b.iter(|| sys.bop_explicit(black_box(&args))));
    group.bench_function("definitional", |b| {
        b.iter(|| sys.bop_definitional(black_box(&args)))
    });
    group.finish();
}

fn crrlm_bops(c: &mut Criterion) {
    let sys = crrlm_build(Crr::new(lam_app()), lm_of_rr());
    let mut rng = prng(SEED);
    let x = extend_randomly(&sys, &sys.pt(), 4, &mut rng).unwrap();
    let args = LmArgs::Delta { x };
    let mut group = c.benchmark_group("crrlm_delta");
    group.bench_function("explicit", |b| b.iter(|| sys.bop_lm_explicit(black_box(&args))));
    group.bench_function("definitional", |b| {
        b.iter(|| sys.bop_lm_definitional(black_box(&args)))
    });
    group.finish();
}

criterion_group!(benches, extend, qq, theta, crr_bops, crrlm_bops);
criterion_main!(benches);
