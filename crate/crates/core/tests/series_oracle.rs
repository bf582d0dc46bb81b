mod common;

use common::{
    cauchy_coefficient, max_relative_deviation, naive_exp, random_caps, random_complex,
    random_exponent,
};
use ngmzi::series::{apply_f1, series_from_exponent, Caps, MultiSeries};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engine_matches_naive_expansion(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_exponent(&mut rng, 1.0);
        let caps = random_caps(&mut rng, 3);
        let engine = series_from_exponent(&e, caps).unwrap();
        let reference = naive_exp(&e, caps);
        let dev = max_relative_deviation(&engine, &reference, 1e-300);
        prop_assert!(dev < 1e-12, "relative deviation {dev:e} for caps {caps:?}");
    }

    #[test]
    fn f1_is_linear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let caps = Caps::new(2, 2);
        let s1 = series_from_exponent(&random_exponent(&mut rng, 1.0), caps).unwrap();
        let s2 = series_from_exponent(&random_exponent(&mut rng, 1.0), caps).unwrap();
        let (a, b) = (random_complex(&mut rng, 2.0), random_complex(&mut rng, 2.0));
        let combo = s1.scale(a).add(&s2.scale(b)).unwrap();
        for (m, n) in [(0, 0), (1, 2), (2, 1), (2, 2)] {
            let lhs = apply_f1(&combo, m, n).unwrap();
            let rhs = a * apply_f1(&s1, m, n).unwrap() + b * apply_f1(&s2, m, n).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn raising_caps_never_changes_f1(seed in any::<u64>(), m in 0usize..=3, n in 0usize..=3, extra in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_exponent(&mut rng, 1.0);
        let tight = apply_f1(&series_from_exponent(&e, Caps::new(m, n)).unwrap(), m, n).unwrap();
        let loose = apply_f1(&series_from_exponent(&e, Caps::new(m + extra, n + extra)).unwrap(), m, n).unwrap();
        prop_assert_eq!(tight, loose);
    }
}

#[test]
fn coefficients_match_cauchy_integrals() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let e = random_exponent(&mut rng, 0.5);
        let engine = series_from_exponent(&e, Caps::new(2, 2)).unwrap();
        for idx in [
            [0, 0, 0, 0],
            [1, 1, 0, 0],
            [2, 2, 1, 1],
            [1, 0, 2, 1],
            [2, 2, 2, 2],
        ] {
            let want = cauchy_coefficient(&e, idx, 0.6, 24);
            let got = engine.coeff(idx);
            assert!(
                (got - want).norm() < 1e-11 * (1.0 + want.norm()),
                "{idx:?}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn naive_product_agrees_with_engine_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let caps = Caps::new(2, 1);
    let e1 = random_exponent(&mut rng, 0.7);
    let e2 = random_exponent(&mut rng, 0.7);
    let mut sum = e1.clone();
    for i in 0..4 {
        sum.linear[i] += e2.linear[i];
        for j in 0..4 {
            sum.quad[i][j] += e2.quad[i][j];
        }
    }
    // exp(A) exp(B) = exp(A + B) survives truncation.
    let prod = series_from_exponent(&e1, caps)
        .unwrap()
        .mul(&series_from_exponent(&e2, caps).unwrap())
        .unwrap();
    let reference = naive_exp(&sum, caps);
    assert!(max_relative_deviation(&prod, &reference, 1e-300) < 1e-12);
}

#[test]
fn zero_exponent_is_one() {
    let one = series_from_exponent(&ngmzi::series::QuadExponent::zero(), Caps::new(3, 3)).unwrap();
    assert_eq!(one, MultiSeries::one(Caps::new(3, 3)).unwrap());
    assert_eq!(one.coeff([0, 0, 0, 0]), Complex64::new(1.0, 0.0));
}
