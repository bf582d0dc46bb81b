#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use ngmzi::series::{Caps, QuadExponent};
use num_complex::Complex64;
use rand::Rng;

pub type Poly = BTreeMap<[usize; 4], Complex64>;

fn within(idx: &[usize; 4], caps: Caps) -> bool {
    idx[0] <= caps.d1 && idx[1] <= caps.d1 && idx[2] <= caps.d2 && idx[3] <= caps.d2
}

fn mul(a: &Poly, b: &Poly, caps: Caps) -> Poly {
    let mut out = Poly::new();
    for (ia, ca) in a {
        for (ib, cb) in b {
            let idx = [ia[0] + ib[0], ia[1] + ib[1], ia[2] + ib[2], ia[3] + ib[3]];
            if within(&idx, caps) {
                *out.entry(idx).or_default() += ca * cb;
            }
        }
    }
    out
}

fn unit(i: usize) -> [usize; 4] {
    let mut idx = [0; 4];
    idx[i] = 1;
    idx
}

/// `exp(u^T M u + u^T L)` by summing `X^k / k!` with repeated truncated
/// products. `X` has no constant term, so the sum terminates at the total
/// degree of the caps.
pub fn naive_exp(e: &QuadExponent, caps: Caps) -> Poly {
    let mut x = Poly::new();
    for i in 0..4 {
        let li = unit(i);
        if within(&li, caps) {
            *x.entry(li).or_default() += e.linear[i];
        }
        for j in 0..4 {
            let mut idx = unit(i);
            idx[j] += 1;
            if within(&idx, caps) {
                *x.entry(idx).or_default() += e.quad[i][j];
            }
        }
    }
    let top = 2 * (caps.d1 + caps.d2);
    let mut sum = Poly::new();
    sum.insert([0; 4], Complex64::new(1.0, 0.0));
    let mut term = sum.clone();
    for k in 1..=top {
        term = mul(&term, &x, caps);
        for c in term.values_mut() {
            *c /= k as f64;
        }
        for (idx, c) in &term {
            *sum.entry(*idx).or_default() += c;
        }
    }
    sum
}

/// Taylor coefficient `[u^idx] exp(u^T M u + u^T L)` from the Cauchy
/// integral on a torus of radius `rho`, trapezoidal rule with `nodes` per
/// variable. Only evaluates the exponent pointwise.
pub fn cauchy_coefficient(e: &QuadExponent, idx: [usize; 4], rho: f64, nodes: usize) -> Complex64 {
    let roots: Vec<Complex64> = (0..nodes)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64))
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut no_constant = e.clone();
    no_constant.constant = Complex64::new(0.0, 0.0);
    for a in 0..nodes {
        for b in 0..nodes {
            for c in 0..nodes {
                for d in 0..nodes {
                    let z = [roots[a], roots[b], roots[c], roots[d]];
                    let u = z.map(|w| w * rho);
                    // z^-idx on the unit circle
                    let phase = roots[(nodes - idx[0] * a % nodes) % nodes]
                        * roots[(nodes - idx[1] * b % nodes) % nodes]
                        * roots[(nodes - idx[2] * c % nodes) % nodes]
                        * roots[(nodes - idx[3] * d % nodes) % nodes];
                    acc += no_constant.eval(&u).exp() * phase;
                }
            }
        }
    }
    let n4 = (nodes as f64).powi(4);
    acc / n4 / rho.powi(idx.iter().sum::<usize>() as i32)
}

pub fn random_complex<R: Rng>(rng: &mut R, scale: f64) -> Complex64 {
    Complex64::new(
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    )
}

pub fn random_exponent<R: Rng>(rng: &mut R, scale: f64) -> QuadExponent {
    let mut e = QuadExponent::zero();
    for i in 0..4 {
        e.linear[i] = random_complex(rng, scale);
        for j in 0..4 {
            e.quad[i][j] = random_complex(rng, scale);
        }
    }
    e.constant = random_complex(rng, scale);
    e
}

pub fn random_caps<R: Rng>(rng: &mut R, max: usize) -> Caps {
    Caps::new(rng.random_range(0..=max), rng.random_range(0..=max))
}

/// Worst per-coefficient relative deviation, with the floor `floor` on the
/// reference magnitude.
pub fn max_relative_deviation(
    engine: &ngmzi::series::MultiSeries,
    reference: &Poly,
    floor: f64,
) -> f64 {
    let mut worst: f64 = 0.0;
    for (idx, c) in engine.iter() {
        let want = reference.get(&idx).copied().unwrap_or_default();
        let rel = (c - want).norm() / want.norm().max(floor);
        worst = worst.max(rel);
    }
    worst
}
