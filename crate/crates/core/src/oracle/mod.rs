//! Brute-force reference simulator in a truncated photon-number basis.
//!
//! Nothing here touches the generating-function machinery; the analytic
//! modules are validated against it.

mod fock;
mod two_mode;
mod wigner;

use num_complex::Complex64;

pub use fock::{
    coherent_fock, coherent_tail, squeezed_vacuum_fock, squeezed_vacuum_tail, FockVector, MAX_TAIL,
};
pub use two_mode::{beam_splitter_apply, herald, TwoModeFock, TwoModeUnitary};
pub use wigner::{displacement_matrix, fock_wigner, wigner_displaced_parity};

use crate::error::{Error, Result};
use crate::params::{MziScenario, NgOpParams};

const MAX_CUTOFF: usize = 4096;

/// Photon-number cutoff for a squeezed vacuum and a coherent state:
/// `ceil(8 (sinh^2 r + |alpha|^2) + 20)`, doubled until both truncation
/// tails fall below [`MAX_TAIL`].
pub fn oracle_cutoff(r: f64, alpha_norm_sqr: f64) -> Result<usize> {
    let mut n = (8.0 * (r.sinh().powi(2) + alpha_norm_sqr) + 20.0).ceil() as usize;
    loop {
        let tail = squeezed_vacuum_tail(r, n).max(coherent_tail(alpha_norm_sqr, n));
        if tail < MAX_TAIL {
            return Ok(n);
        }
        if n > MAX_CUTOFF {
            return Err(Error::CutoffTooSmall { cutoff: n, tail });
        }
        n *= 2;
    }
}

/// `a^n |psi>`, normalized.
pub fn ideal_ps(st: &FockVector, n: usize) -> Result<FockVector> {
    let mut v = st.clone();
    for _ in 0..n {
        v = v.annihilate();
    }
    v.normalized()
}

/// `a^dag^m |psi>`, normalized.
pub fn ideal_pa(st: &FockVector, m: usize) -> Result<FockVector> {
    let mut v = st.clone();
    for _ in 0..m {
        v = v.create();
    }
    v.normalized()
}

/// Squeezed vacuum mixed with `|m>` on the heralding splitter, conditioned
/// on `n` ancilla counts.
#[derive(Debug, Clone)]
pub struct HeraldOutcome {
    pub state: FockVector,
    pub probability: f64,
    /// Cutoff used for the squeezed vacuum.
    pub cutoff: usize,
}

pub fn herald_state(p: &NgOpParams) -> Result<HeraldOutcome> {
    let cutoff = oracle_cutoff(p.r, 0.0)?;
    herald_state_with_cutoff(p, cutoff)
}

pub fn herald_state_with_cutoff(p: &NgOpParams, cutoff: usize) -> Result<HeraldOutcome> {
    let svs = squeezed_vacuum_fock(p.r, cutoff)?;
    let joint = TwoModeFock::product(&svs, &FockVector::number(p.m, p.m));
    let (state, probability) = beam_splitter_apply(&joint, p.tau)?.herald(p.n)?;
    Ok(HeraldOutcome {
        state,
        probability,
        cutoff,
    })
}

/// Parity of output mode 2 with `|alpha>` in mode 1 and `sig` in mode 2,
/// through `exp(-i pi/2 J1) exp(i phi J3) exp(i pi/2 J1)`. `cutoff` truncates
/// the coherent state.
pub fn mzi_parity(sig: &FockVector, alpha: Complex64, phi: f64, cutoff: usize) -> Result<f64> {
    let coherent = coherent_fock(alpha, cutoff)?;
    let half = std::f64::consts::FRAC_PI_2;
    let st = TwoModeFock::product(&coherent, sig);
    let st = TwoModeUnitary::j1_rotation(half).apply(&st);
    let st = st.apply_phase(phi);
    let st = TwoModeUnitary::j1_rotation(-half).apply(&st);
    Ok(st.parity_second())
}

/// End-to-end oracle parity for a scenario, with cutoffs from [`oracle_cutoff`].
pub fn scenario_parity(s: &MziScenario) -> Result<f64> {
    let alpha = s.coherent_amplitude();
    let cutoff = oracle_cutoff(s.ng.r, alpha.norm_sqr())?;
    let signal = herald_state_with_cutoff(&s.ng, cutoff)?.state;
    mzi_parity(&signal, alpha, s.phi, cutoff)
}

/// `sqrt(1 - P^2) / |dP/dphi|` with the same central-difference and
/// Richardson scheme as the analytic path, on oracle parities.
pub fn scenario_sensitivity(s: &MziScenario, h: f64) -> Result<f64> {
    let alpha = s.coherent_amplitude();
    let cutoff = oracle_cutoff(s.ng.r, alpha.norm_sqr())?;
    let signal = herald_state_with_cutoff(&s.ng, cutoff)?.state;
    signal_sensitivity(&signal, alpha, s.phi, h, cutoff)
}

/// Phase sensitivity for an arbitrary signal state.
pub fn signal_sensitivity(
    sig: &FockVector,
    alpha: Complex64,
    phi: f64,
    h: f64,
    cutoff: usize,
) -> Result<f64> {
    let at = |x: f64| mzi_parity(sig, alpha, x, cutoff);
    let parity = at(phi)?;
    let wide = (at(phi + h)? - at(phi - h)?) / (2.0 * h);
    let narrow = (at(phi + 0.5 * h)? - at(phi - 0.5 * h)?) / h;
    let slope = (4.0 * narrow - wide) / 3.0;
    Ok((1.0 - parity * parity).max(0.0).sqrt() / slope.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cutoff_rule_grows_with_squeezing() {
        let a = oracle_cutoff(0.3, 0.0).unwrap();
        let b = oracle_cutoff(1.0, 4.0).unwrap();
        assert!(a >= 20 && b > a);
        assert!(squeezed_vacuum_tail(1.0, b) < MAX_TAIL);
    }

    #[test]
    fn ideal_operations() {
        let svs = squeezed_vacuum_fock(0.5, 60).unwrap();
        assert_eq!(ideal_ps(&svs, 0).unwrap(), svs);
        assert_relative_eq!(ideal_ps(&svs, 1).unwrap().parity(), -1.0, epsilon = 1e-14);
        assert_relative_eq!(ideal_pa(&svs, 2).unwrap().parity(), 1.0, epsilon = 1e-14);
        assert!(matches!(
            ideal_ps(&FockVector::vacuum(3), 1),
            Err(Error::HeraldImpossible(_))
        ));
    }

    #[test]
    fn heralded_parity_is_definite() {
        for (m, n) in [(0, 1), (1, 0), (1, 1), (2, 1), (0, 3)] {
            let p = NgOpParams::new(0.5, 0.9, m, n).unwrap();
            let out = herald_state(&p).unwrap();
            let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(out.state.parity(), sign, epsilon = 1e-8);
        }
    }

    #[test]
    fn herald_completeness() {
        let mut total = 0.0;
        for n in 0..=20 {
            let p = NgOpParams::new(0.5, 0.9, 1, n).unwrap();
            total += herald_state(&p).map(|o| o.probability).unwrap_or(0.0);
        }
        assert_relative_eq!(total, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn mzi_limits() {
        let sig = FockVector::number(1, 1);
        let alpha = Complex64::new(1.0, 1.0);
        assert_relative_eq!(
            mzi_parity(&sig, alpha, 0.0, 40).unwrap(),
            -1.0,
            epsilon = 1e-12
        );
        for phi in [0.2, 1.3, 2.9] {
            let vac =
                mzi_parity(&FockVector::vacuum(2), Complex64::new(0.0, 0.0), phi, 10).unwrap();
            assert_relative_eq!(vac, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn mzi_parity_is_stable_under_cutoff_doubling() {
        let s = MziScenario::new(NgOpParams::new(0.5, 0.9, 0, 1).unwrap(), 2.0, 2.0, 0.4).unwrap();
        let alpha = s.coherent_amplitude();
        let sig = herald_state(&s.ng).unwrap().state;
        let a = mzi_parity(&sig, alpha, s.phi, 40).unwrap();
        let b = mzi_parity(&sig, alpha, s.phi, 80).unwrap();
        assert!((a - b).abs() < 1e-9);
    }
}
