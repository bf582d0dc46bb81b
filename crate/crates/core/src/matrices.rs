//! The exponent matrices of the generating functions.
//!
//! Rows and columns are ordered `(u1, v1, u2, v2)` everywhere. `M1`/`M2` give
//! the heralded Wigner function, `M3` the heralding probability, and
//! `M4`/`M5`/`M6` the output-port parity. Entries are the closed forms
//! obtained by carrying out the Gaussian phase-space integrals; each set is
//! checked against the Fock-space oracle in the test suite.

use num_complex::Complex64;

use crate::params::{MziScenario, NgOpParams};

pub type Mat4 = [[Complex64; 4]; 4];
pub type Mat4x2 = [[Complex64; 2]; 4];
pub type Mat2 = [[f64; 2]; 2];

fn real4(rows: [[f64; 4]; 4]) -> Mat4 {
    rows.map(|row| row.map(|x| Complex64::new(x, 0.0)))
}

/// Quadratic part of the heralded Wigner exponent.
pub fn build_m1(p: &NgOpParams) -> Mat4 {
    let d = p.derived();
    let (a, b, t, tp2) = (d.alpha, d.beta, d.t, d.tp * d.tp);
    let diag_signal = a * b * tp2 * t * t;
    let pair_signal = -b * b * tp2;
    let cross = a * b * tp2 * t;
    let anti = a * a * tp2 * t + t;
    let diag_ancilla = a * b * tp2;
    let pair_ancilla = -a * a * tp2 * t * t;
    let m = [
        [diag_signal, pair_signal, cross, anti],
        [pair_signal, diag_signal, anti, cross],
        [cross, anti, diag_ancilla, pair_ancilla],
        [anti, cross, pair_ancilla, diag_ancilla],
    ];
    real4(m.map(|row| row.map(|x| 0.25 * x)))
}

/// Linear part of the heralded Wigner exponent at phase-space point `(q2, p2)`.
pub fn build_m2(p: &NgOpParams, q2: f64, p2: f64) -> [Complex64; 4] {
    let d = p.derived();
    let plus = Complex64::new(q2 * d.w1, p2 * d.w2);
    let minus = plus.conj();
    [
        -d.beta * d.tp * plus,
        d.beta * d.tp * minus,
        -d.alpha * d.tp * d.t * minus,
        d.alpha * d.tp * d.t * plus,
    ]
}

/// Quadratic exponent of the heralding probability (used as `M3 / (-4 w1 w2)`).
///
/// Equals `4 M1 - t'^2 (x x^T - y y^T)` with `x = (-b, b, -a t, a t)` and
/// `y = (-b, -b, a t, a t)`, which is what integrating the linear `M2` terms
/// over phase space adds.
pub fn build_m3(p: &NgOpParams) -> Mat4 {
    let d = p.derived();
    let (a, b, t, tp2) = (d.alpha, d.beta, d.t, d.tp * d.tp);
    let diag_signal = a * b * tp2 * t * t;
    let pair_signal = b * b * tp2;
    let cross = -a * b * tp2 * t;
    let anti = t + a * a * tp2 * t;
    let diag_ancilla = a * b * tp2;
    let pair_ancilla = a * a * tp2 * t * t;
    real4([
        [diag_signal, pair_signal, cross, anti],
        [pair_signal, diag_signal, anti, cross],
        [cross, anti, diag_ancilla, pair_ancilla],
        [anti, cross, pair_ancilla, diag_ancilla],
    ])
}

/// Quadratic exponent of the parity signal (used as `M4 / (-w3 w4)`).
pub fn build_m4(s: &MziScenario) -> Mat4 {
    let d = s.ng.derived();
    let (a, b, t, tp2) = (d.alpha, d.beta, d.t, d.tp * d.tp);
    let g = s.gamma();
    let diag_signal = a * b * g * g * tp2 * t * t;
    let pair_signal = -b * b * g * tp2;
    let cross = a * b * g * tp2 * t;
    let anti = t * (b * b - s.ng.tau * a * a * g * g);
    let diag_ancilla = a * b * tp2;
    let pair_ancilla = -a * a * g * tp2 * t * t;
    let m = [
        [diag_signal, pair_signal, cross, anti],
        [pair_signal, diag_signal, anti, cross],
        [cross, anti, diag_ancilla, pair_ancilla],
        [anti, cross, pair_ancilla, diag_ancilla],
    ];
    real4(m.map(|row| row.map(|x| 0.25 * x)))
}

/// Couples the generating variables to the displacement vector `d`.
pub fn build_m5(s: &MziScenario) -> Mat4x2 {
    let d = s.ng.derived();
    let (w3, w4) = (s.w3(), s.w4());
    let k = 0.25 * s.delta() * d.tp;
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    [
        [re(k * d.beta * w3), im(k * d.beta * w4)],
        [re(-k * d.beta * w3), im(k * d.beta * w4)],
        [re(k * d.alpha * d.t * w3), im(-k * d.alpha * d.t * w4)],
        [re(-k * d.alpha * d.t * w3), im(-k * d.alpha * d.t * w4)],
    ]
}

/// Displacement-only part of the parity exponent; diagonal and PSD.
pub fn build_m6(s: &MziScenario) -> Mat2 {
    let d = s.ng.derived();
    let half = (0.5 * s.phi).sin();
    let k = 0.25 * half * half;
    [[k * s.w3() * d.w1, 0.0], [0.0, k * s.w4() * d.w2]]
}

/// The three matrices entering the closed-form parity signal.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityMatrices {
    pub m4: Mat4,
    pub m5: Mat4x2,
    pub m6: Mat2,
}

impl ParityMatrices {
    pub fn build(s: &MziScenario) -> Self {
        Self {
            m4: build_m4(s),
            m5: build_m5(s),
            m6: build_m6(s),
        }
    }
}
