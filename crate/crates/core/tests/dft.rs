use std::f64::consts::PI;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use theta_forge::dft::{
    build_dft, expected_multiplicities, matveev_vector, measured_multiplicities, residual, theta_oracle, theta_vector,
    SeriesTermOracle,
};
use theta_forge::{Complex64, DftError, EigClass, LogThetaArgs, TruncationPolicy};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sup(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn multiplicities_through_32() {
    for n in 1..=32 {
        let a = build_dft(n).unwrap();
        assert!(a.fourth_power_defect() <= 1e-11, "n = {n}");
        assert!(a.unitarity_defect() <= 1e-12, "n = {n}");
        assert_eq!(measured_multiplicities(&a, 1e-6).unwrap(), expected_multiplicities(n), "n = {n}");
        assert_eq!(expected_multiplicities(n).total(), n);
    }
}

#[test]
fn theta_vector_matches_periodised_oracle() {
    let p = TruncationPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=8 {
        for k in EigClass::ALL {
            let la = c(rng.random_range(-2.5..-0.7), rng.random_range(-1.0..1.0));
            let lb = c(rng.random_range(-2.5..-0.7), rng.random_range(-1.0..1.0));
            let x = c(rng.random_range(-0.5..0.5), rng.random_range(-0.1..0.1));
            let args = LogThetaArgs::new(la, lb, x).unwrap();
            let via_theta = theta_vector(n, k, &args, &p);
            let via_oracle = matveev_vector(&theta_oracle(n, args), n, k, &p);
            match (via_theta, via_oracle) {
                (Ok(t), Ok(o)) => {
                    let diff = sup(&(&t - &o)) / sup(&t).max(1.0);
                    assert!(diff <= 1e-10, "n = {n}, k = {}: {diff}", k.k());
                }
                (Err(DftError::Degenerate(_)), Err(DftError::Degenerate(_))) => {}
                (t, o) => panic!("n = {n}, k = {}: {t:?} vs {o:?}", k.k()),
            }
        }
    }
}

#[test]
fn random_geometric_oracles_give_eigenvectors() {
    let p = TruncationPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let r: f64 = rng.random_range(0.1..0.7);
        let phases: Vec<f64> = (0..=400).map(|_| rng.random_range(-PI..PI)).collect();
        let g = SeriesTermOracle::new(
            move |m: i64| {
                let idx = (m + 200) as usize;
                match phases.get(idx) {
                    Some(&ph) if m.abs() <= 200 => Complex64::from_polar(r.powi(m.abs() as i32), ph),
                    _ => c(0.0, 0.0),
                }
            },
            r,
        );
        for n in 2..=8 {
            let a = build_dft(n).unwrap();
            for k in EigClass::ALL {
                match matveev_vector(&g, n, k, &p) {
                    Ok(v) => assert!(residual(&a, &v, k) <= 1e-9, "n = {n}, k = {}", k.k()),
                    Err(DftError::Degenerate(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}

#[test]
fn order_two_example() {
    let p = TruncationPolicy::default();
    let args = LogThetaArgs::new(c(0.2f64.ln(), 0.0), c(0.1f64.ln(), 0.0), c(0.05, 0.0)).unwrap();
    let k = EigClass::new(0).unwrap();
    let v = theta_vector(2, k, &args, &p).unwrap();
    let a = build_dft(2).unwrap();
    let err = sup(&(a.apply(&v) - &v));
    assert!(err <= 1e-9 * sup(&v));
}

#[test]
fn order_three_is_parallel_to_known_eigenvector() {
    let p = TruncationPolicy::default();
    let v1 = [1.0 + 3f64.sqrt(), 1.0, 1.0];
    let args = LogThetaArgs::new(c(-1.1, 0.3), c(-0.9, -0.2), c(0.17, 0.02)).unwrap();
    let v = theta_vector(3, EigClass::new(0).unwrap(), &args, &p).unwrap();
    // The eigenvalue-1 space for n = 3 is one-dimensional.
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        assert!((v1[i] * v[j] - v1[j] * v[i]).norm() <= 1e-8);
    }
    let a = build_dft(3).unwrap();
    assert!(residual(&a, &DVector::from_vec(v1.iter().map(|&t| c(t, 0.0)).collect()), EigClass::new(0).unwrap()) <= 1e-14);
    assert!(residual(&a, &v, EigClass::new(0).unwrap()) <= 1e-9);
}

#[test]
fn order_five_minus_i() {
    let p = TruncationPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = build_dft(5).unwrap();
    let k = EigClass::new(3).unwrap();
    for _ in 0..10 {
        let args = LogThetaArgs::new(
            c(rng.random_range(-2.0..-0.5), rng.random_range(-PI..PI)),
            c(rng.random_range(-2.0..-0.5), rng.random_range(-PI..PI)),
            c(rng.random_range(-0.5..0.5), 0.0),
        )
        .unwrap();
        let v = theta_vector(5, k, &args, &p).unwrap();
        let diff = a.apply(&v) + v.map(|z| z * c(0.0, 1.0));
        assert!(sup(&diff) <= 1e-9 * sup(&v).max(1.0));
    }
}
