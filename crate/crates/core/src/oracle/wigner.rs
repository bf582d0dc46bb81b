use std::f64::consts::PI;

use num_complex::Complex64;

use super::fock::FockVector;

/// `<k| D(beta) |j>` for `k <= rows`, `j <= cols`, row-major with `cols + 1`
/// columns, from `D_{0,j} = e^{-|b|^2/2} (-b*)^j / sqrt(j!)` and
/// `sqrt(k+1) D_{k+1,j} = sqrt(j) D_{k,j-1} + b D_{k,j}`.
pub fn displacement_matrix(beta: Complex64, rows: usize, cols: usize) -> Vec<Complex64> {
    let width = cols + 1;
    let mut d = vec![Complex64::new(0.0, 0.0); (rows + 1) * width];
    let mut c = Complex64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
    for j in 0..=cols {
        if j > 0 {
            c = c * (-beta.conj()) / (j as f64).sqrt();
        }
        d[j] = c;
    }
    for k in 0..rows {
        let inv = 1.0 / ((k + 1) as f64).sqrt();
        for j in 0..=cols {
            let mut v = beta * d[k * width + j];
            if j > 0 {
                v += d[k * width + j - 1] * (j as f64).sqrt();
            }
            d[(k + 1) * width + j] = v * inv;
        }
    }
    d
}

/// Wigner function as the expectation of the displaced parity operator,
/// `W(q, p) = (1/pi) sum_k (-1)^k |<k| D(-beta) |psi>|^2` with
/// `beta = (q + i p)/sqrt(2)`.
pub fn wigner_displaced_parity(st: &FockVector, q: f64, p: f64) -> f64 {
    let beta = Complex64::new(q, p) / std::f64::consts::SQRT_2;
    let n = st.cutoff();
    // The displaced state lives within a few widths of |beta| + sqrt(n).
    let reach = ((n + 1) as f64).sqrt() + beta.norm() + 7.0;
    let rows = (reach * reach).ceil() as usize;
    let d = displacement_matrix(-beta, rows, n);
    let amps = st.amplitudes();
    let mut acc = 0.0;
    for k in 0..=rows {
        let row = &d[k * (n + 1)..(k + 1) * (n + 1)];
        let a: Complex64 = row.iter().zip(amps).map(|(x, y)| x * y).sum();
        acc += if k % 2 == 0 {
            a.norm_sqr()
        } else {
            -a.norm_sqr()
        };
    }
    acc / PI
}

/// Wigner function of the number state `|m>`:
/// `((-1)^m / pi) exp(-q^2 - p^2) L_m(2(q^2 + p^2))`.
pub fn fock_wigner(m: usize, q: f64, p: f64) -> f64 {
    let rho = q * q + p * p;
    let x = 2.0 * rho;
    let (mut prev, mut cur) = (1.0, 1.0 - x);
    let lm = if m == 0 {
        1.0
    } else {
        for k in 1..m {
            let k = k as f64;
            let next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
            prev = cur;
            cur = next;
        }
        cur
    };
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * (-rho).exp() * lm / PI
}
