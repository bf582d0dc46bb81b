//! Parity signal of the output port, its phase derivative and the
//! error-propagation phase sensitivity.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrices::ParityMatrices;
use crate::params::MziScenario;
use crate::quadrature::GaussLegendre2d;
use crate::series::{Caps, MultiSeries, QuadExponent};
use crate::state::{real_part, success_probability, HeraldedState, MIN_PROBABILITY};

/// Default finite-difference step for `d<Pi>/dphi`.
pub const DEFAULT_STEP: f64 = 1e-5;

/// Derivatives at or below this make the sensitivity divergent.
pub const MIN_SLOPE: f64 = 1e-12;

const PARITY_EXCESS: f64 = 1e-9;
const QUADRATURE_POINTS: usize = 200;
const QUADRATURE_TOLERANCE: f64 = 1e-6;
// Coherent envelope exp(-|x|^2) is dropped beyond this radius.
const COHERENT_RADIUS: f64 = 8.0;

/// Closed-form parity expectation on the output port.
pub fn parity_expectation(s: &MziScenario) -> Result<f64> {
    parity_with_matrices(s, &ParityMatrices::build(s))
}

/// Closed-form parity with caller-supplied exponent matrices. Exposed so the
/// cross-check suite can be exercised against perturbed matrices.
pub fn parity_with_matrices(s: &MziScenario, mats: &ParityMatrices) -> Result<f64> {
    let p_ng = success_probability(&s.ng)?;
    if p_ng <= MIN_PROBABILITY {
        return Err(Error::UndefinedState(p_ng));
    }
    let w34 = s.w3() * s.w4();
    let k = -1.0 / w34;
    let d = s.d();

    let mut e = QuadExponent::zero();
    e.quad = mats.m4.map(|row| row.map(|x| x * k));
    for (i, row) in mats.m5.iter().enumerate() {
        e.linear[i] = (row[0] * d[0] + row[1] * d[1]) * k;
    }
    let dm6d = d[0] * d[0] * mats.m6[0][0]
        + d[0] * d[1] * (mats.m6[0][1] + mats.m6[1][0])
        + d[1] * d[1] * mats.m6[1][1];
    e.constant = Complex64::new(k * dm6d, 0.0);

    let series = MultiSeries::from_exponent(&e, Caps::new(s.ng.m, s.ng.n))?;
    let raw = series.apply_f1(s.ng.m, s.ng.n)? * e.scalar_factor() * (PI / w34.sqrt());
    let value = real_part(raw, "parity expectation")? / p_ng;
    if value.abs() > 1.0 + PARITY_EXCESS {
        return Err(Error::InternalConsistency(format!(
            "parity {value} outside [-1, 1] for {s:?}"
        )));
    }
    Ok(value.clamp(-1.0, 1.0))
}

/// Parity by direct phase-space integration of the evolved product Wigner
/// function, `pi * int W_coh(c x) W_ng(-s x) d^2x` with `c, s = cos, sin(phi/2)`.
/// Shares only the heralded Wigner function with the closed form.
pub fn parity_via_quadrature(s: &MziScenario) -> Result<f64> {
    let state = HeraldedState::new(s.ng)?;
    let coarse = parity_quadrature_with(&state, s, QUADRATURE_POINTS)?;
    let fine = parity_quadrature_with(&state, s, 2 * QUADRATURE_POINTS)?;
    let shift = (fine - coarse).abs();
    if shift > QUADRATURE_TOLERANCE {
        return Err(Error::QuadratureNotConverged(shift));
    }
    Ok(fine)
}

fn parity_quadrature_with(state: &HeraldedState, s: &MziScenario, points: usize) -> Result<f64> {
    let (sh, ch) = (0.5 * s.phi).sin_cos();
    let extent = state.phase_space_extent();
    let window = |centre: f64| -> Option<(f64, f64)> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        if ch.abs() > 1e-300 {
            let a = (centre - COHERENT_RADIUS) / ch;
            let b = (centre + COHERENT_RADIUS) / ch;
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
        if sh.abs() > 1e-300 {
            let reach = extent / sh.abs();
            lo = lo.max(-reach);
            hi = hi.min(reach);
        }
        (lo < hi).then_some((lo, hi))
    };
    let (Some(xw), Some(yw)) = (window(s.dx), window(s.dp)) else {
        return Ok(0.0);
    };

    let rule = GaussLegendre2d::new(NonZeroUsize::new(points).unwrap());
    let first_error = std::sync::Mutex::new(None);
    let total = rule.integrate(xw, yw, |x, y| {
        let cq = ch * x - s.dx;
        let cp = ch * y - s.dp;
        let coherent = (-(cq * cq) - cp * cp).exp() / PI;
        if coherent == 0.0 {
            return 0.0;
        }
        match state.wigner(-sh * x, -sh * y) {
            Ok(w) => coherent * w,
            Err(e) => {
                first_error.lock().unwrap().get_or_insert(e);
                f64::NAN
            }
        }
    });
    match first_error.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(PI * total),
    }
}

/// `d<Pi>/dphi` by central differences with one Richardson step (steps `h`
/// and `h/2`).
pub fn dparity_dphi(s: &MziScenario, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "step h = {h} must be positive"
        )));
    }
    let at = |phi: f64| parity_expectation(&s.with_phi(phi));
    let wide = (at(s.phi + h)? - at(s.phi - h)?) / (2.0 * h);
    let narrow = (at(s.phi + 0.5 * h)? - at(s.phi - 0.5 * h)?) / h;
    Ok((4.0 * narrow - wide) / 3.0)
}

/// Phase uncertainty from error propagation, with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sensitivity {
    /// `+inf` when `divergent`.
    pub delta_phi: f64,
    pub parity: f64,
    pub dparity: f64,
    pub divergent: bool,
}

/// `sqrt(1 - <Pi>^2) / |d<Pi>/dphi|`. A vanishing slope is reported through
/// [`Sensitivity::divergent`], not as an error.
pub fn phase_sensitivity(s: &MziScenario) -> Result<Sensitivity> {
    phase_sensitivity_with_step(s, DEFAULT_STEP)
}

pub fn phase_sensitivity_with_step(s: &MziScenario, h: f64) -> Result<Sensitivity> {
    let parity = parity_expectation(s)?;
    let dparity = dparity_dphi(s, h)?;
    let divergent = dparity.abs() <= MIN_SLOPE;
    let delta_phi = if divergent {
        f64::INFINITY
    } else {
        (1.0 - parity * parity).max(0.0).sqrt() / dparity.abs()
    };
    Ok(Sensitivity {
        delta_phi,
        parity,
        dparity,
        divergent,
    })
}

/// `dphi(SVS) - dphi(NG)` against the plain squeezed vacuum with the same `r`,
/// displacement and phase. `None` when either sensitivity diverges.
pub fn sensitivity_diff(s: &MziScenario) -> Result<Option<f64>> {
    let baseline = phase_sensitivity(&s.baseline())?;
    let ng = phase_sensitivity(s)?;
    Ok(diff_of(&baseline, &ng))
}

pub(crate) fn diff_of(baseline: &Sensitivity, ng: &Sensitivity) -> Option<f64> {
    (!baseline.divergent && !ng.divergent).then_some(baseline.delta_phi - ng.delta_phi)
}

/// Success probability times the sensitivity gain.
pub fn figure_of_merit(s: &MziScenario) -> Result<Option<f64>> {
    let p = success_probability(&s.ng)?;
    Ok(sensitivity_diff(s)?.map(|d| p * d))
}
