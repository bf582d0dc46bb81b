//! The heralded non-Gaussian squeezed vacuum: success probability, herald
//! distribution and Wigner function, all from the closed-form generating
//! functions.

use std::num::NonZeroUsize;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrices::{build_m1, build_m2, build_m3};
use crate::params::NgOpParams;
use crate::quadrature::GaussLegendre2d;
use crate::series::{Caps, MultiSeries, QuadExponent};

/// Below this the heralded state is treated as undefined.
pub const MIN_PROBABILITY: f64 = 1e-12;

/// Tensor-product nodes per axis for phase-space integrals of the Wigner function.
pub const WIGNER_QUADRATURE_POINTS: usize = 200;

const PROBABILITY_EXCESS: f64 = 1e-9;

/// Strips the imaginary part of a generating-function result after checking
/// that it is numerical noise.
pub(crate) fn real_part(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() >= 1e-10 * (1.0 + z.re.abs()) || !z.re.is_finite() {
        return Err(Error::InternalConsistency(format!(
            "{what} has imaginary residue {:e} (real part {:e})",
            z.im, z.re
        )));
    }
    Ok(z.re)
}

fn scale4(m: &[[Complex64; 4]; 4], k: f64) -> [[Complex64; 4]; 4] {
    m.map(|row| row.map(|x| x * k))
}

/// Exponent whose `F1` derivative is the heralding probability (up to the
/// `pi / sqrt(w1 w2)` prefactor).
pub fn probability_exponent(p: &NgOpParams) -> QuadExponent {
    let d = p.derived();
    let mut e = QuadExponent::zero();
    e.quad = scale4(&build_m3(p), -1.0 / (4.0 * d.w1 * d.w2));
    e
}

/// Exponent of the unnormalized heralded Wigner function at `(q, p)`; the
/// constant carries the Gaussian envelope `-(w1^2 q^2 + w2^2 p^2)/(w1 w2)`.
pub fn wigner_exponent(params: &NgOpParams, q: f64, p: f64) -> QuadExponent {
    let d = params.derived();
    let k = -1.0 / (d.w1 * d.w2);
    QuadExponent::new(
        scale4(&build_m1(params), k),
        build_m2(params, q, p).map(|x| x * k),
        Complex64::new(k * (d.w1 * d.w1 * q * q + d.w2 * d.w2 * p * p), 0.0),
    )
}

/// Probability that the ancilla detector clicks exactly `n` times.
pub fn success_probability(p: &NgOpParams) -> Result<f64> {
    let d = p.derived();
    let series = MultiSeries::from_exponent(&probability_exponent(p), Caps::new(p.m, p.n))?;
    let raw = series.apply_f1(p.m, p.n)? * (std::f64::consts::PI / (d.w1 * d.w2).sqrt());
    let value = real_part(raw, "success probability")?;
    if !(-MIN_PROBABILITY..=1.0 + PROBABILITY_EXCESS).contains(&value) {
        return Err(Error::InternalConsistency(format!(
            "success probability {value} outside [0, 1] for {p:?}"
        )));
    }
    // also maps -0.0 to 0.0
    Ok(if value <= 0.0 { 0.0 } else { value.min(1.0) })
}

/// `[P(n) for n in 0..=n_max]` for fixed injected `m`.
pub fn herald_distribution(m: usize, r: f64, tau: f64, n_max: usize) -> Result<Vec<f64>> {
    (0..=n_max)
        .map(|n| success_probability(&NgOpParams::new(r, tau, m, n)?))
        .collect()
}

/// A heralded state with its quadratic kernel precomputed, for repeated
/// Wigner evaluations.
#[derive(Debug, Clone)]
pub struct HeraldedState {
    params: NgOpParams,
    kernel: MultiSeries,
    probability: f64,
}

impl HeraldedState {
    pub fn new(params: NgOpParams) -> Result<Self> {
        let probability = success_probability(&params)?;
        if probability <= MIN_PROBABILITY {
            return Err(Error::UndefinedState(probability));
        }
        let kernel = MultiSeries::from_exponent(
            &wigner_exponent(&params, 0.0, 0.0),
            Caps::new(params.m, params.n),
        )?;
        Ok(Self {
            params,
            kernel,
            probability,
        })
    }

    pub fn params(&self) -> &NgOpParams {
        &self.params
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    /// Wigner function before dividing by the success probability.
    pub fn wigner_unnormalized(&self, q: f64, p: f64) -> Result<f64> {
        let e = wigner_exponent(&self.params, q, p);
        let d = self.params.derived();
        let z = self
            .kernel
            .apply_f1_with_linear(&e.linear, self.params.m, self.params.n)?
            * e.scalar_factor()
            / (d.w1 * d.w2).sqrt();
        real_part(z, "heralded Wigner function")
    }

    pub fn wigner(&self, q: f64, p: f64) -> Result<f64> {
        Ok(self.wigner_unnormalized(q, p)? / self.probability)
    }

    /// Half-width of the square that holds essentially all of the Wigner mass.
    pub fn phase_space_extent(&self) -> f64 {
        6.0 * self.params.r.exp().max(1.0)
    }

    /// Integral of the normalized Wigner function over phase space.
    pub fn normalization(&self) -> Result<f64> {
        let l = self.phase_space_extent();
        let rule = GaussLegendre2d::new(NonZeroUsize::new(WIGNER_QUADRATURE_POINTS).unwrap());
        let first_error = std::sync::Mutex::new(None);
        let v = rule.integrate((-l, l), (-l, l), |q, p| match self.wigner(q, p) {
            Ok(w) => w,
            Err(e) => {
                first_error.lock().unwrap().get_or_insert(e);
                f64::NAN
            }
        });
        match first_error.into_inner().unwrap() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }
}

/// Normalized Wigner function of the heralded state at `(q, p)`.
pub fn wigner_ng(params: &NgOpParams, q: f64, p: f64) -> Result<f64> {
    HeraldedState::new(*params)?.wigner(q, p)
}
