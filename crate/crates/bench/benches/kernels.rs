use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use theta_forge::dft::{build_dft, theta_vector};
use theta_forge::identities::{registry_by_id, verify_exact};
use theta_forge::qseries::{pentagonal_fifth_power, pochhammer_q};
use theta_forge::theta::{eval_f, eval_f_char};
use theta_forge::{BigRational, Characteristics, Complex64, EigClass, LogThetaArgs, Rational64, TruncationPolicy};

fn theta_eval(c: &mut Criterion) {
    let p = TruncationPolicy::default();
    let (a, b) = (Complex64::new(0.3, 0.2), Complex64::new(0.4, -0.1));
    c.bench_function("eval_f", |bn| bn.iter(|| eval_f(black_box(a), black_box(b), &p)));

    let chars = Characteristics::new(Rational64::new(1, 3), Rational64::new(1, 4), 3).unwrap();
    let args = LogThetaArgs::new(Complex64::new(-1.2, 0.4), Complex64::new(-0.8, -0.3), Complex64::new(0.1, 0.05)).unwrap();
    c.bench_function("eval_f_char", |bn| bn.iter(|| eval_f_char(&chars, black_box(&args), &p)));
}

fn eigenvectors(c: &mut Criterion) {
    let p = TruncationPolicy::default();
    let args = LogThetaArgs::new(Complex64::new(-1.2, 0.4), Complex64::new(-0.8, -0.3), Complex64::new(0.1, 0.05)).unwrap();
    let mut group = c.benchmark_group("theta_vector");
    for n in [4usize, 16, 64] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bn, &n| {
            bn.iter(|| theta_vector(n, EigClass::new(1).unwrap(), &args, &p))
        });
    }
    group.finish();
    c.bench_function("build_dft_64", |bn| bn.iter(|| build_dft(black_box(64))));
}

fn exact_series(c: &mut Criterion) {
    let one = BigRational::from_integer(1.into());
    let mut group = c.benchmark_group("pochhammer_q");
    for cutoff in [20i64, 60] {
        group.bench_with_input(BenchmarkId::from_parameter(cutoff), &cutoff, |bn, &cut| {
            bn.iter(|| pochhammer_q(&one, Rational64::new(1, 8), Rational64::new(1, 4), Rational64::from_integer(cut)))
        });
    }
    group.finish();

    c.bench_function("pentagonal_fifth_power_30", |bn| {
        bn.iter(|| pentagonal_fifth_power(Rational64::from_integer(30)))
    });

    let lemma = registry_by_id("lemma_5_1").unwrap();
    c.bench_function("verify_exact_lemma_5_1", |bn| {
        bn.iter(|| verify_exact(&lemma, Rational64::from_integer(20), 42))
    });
}

criterion_group!(benches, theta_eval, eigenvectors, exact_series);
criterion_main!(benches);
