//! Mixed partial derivatives of a Gaussian generating function, read off as
//! Taylor coefficients of exp(u^T M u + L^T u).

use ngmzi::series::{apply_f1, series_from_exponent, Caps, QuadExponent};
use num_complex::Complex64;

fn main() -> ngmzi::Result<()> {
    let c = |re: f64| Complex64::new(re, 0.0);
    let mut e = QuadExponent::zero();
    // exp(s t + u v) with u = (s, t, u, v)
    e.quad[0][1] = c(0.5);
    e.quad[1][0] = c(0.5);
    e.quad[2][3] = c(0.5);
    e.quad[3][2] = c(0.5);

    let caps = Caps::new(3, 3);
    let series = series_from_exponent(&e, caps)?;
    println!("{} stored coefficients", series.len());
    for k in 0..=3 {
        // d^k/ds^k d^k/dt^k exp(st) at 0 is k!, so F1 reduces to (-2)^k / pi
        let v = apply_f1(&series, k, 0)?;
        let want = (-2.0f64).powi(k as i32) / std::f64::consts::PI;
        println!(
            "[s^{k} t^{k}] = {:.6}  F1({k}, 0) = {:+.6}  expected {want:+.6}",
            series.coeff([k, k, 0, 0]).re,
            v.re
        );
    }
    println!("F1(2, 3) = {:+.6}", apply_f1(&series, 2, 3)?.re);
    Ok(())
}
