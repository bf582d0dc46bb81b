//! Parameter containers for the heralding stage and the interferometer.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::MAX_ORDER;

/// Which non-Gaussian operation a `(m, n)` herald implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operation {
    /// `m < n`
    Subtraction,
    /// `m > n`
    Addition,
    /// `m == n`
    Catalysis,
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operation::Subtraction => "subtraction",
            Operation::Addition => "addition",
            Operation::Catalysis => "catalysis",
        })
    }
}

/// Heralding configuration: squeezing `r`, splitter transmissivity `tau`,
/// injected ancilla Fock state `|m>` and detected photon number `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NgOpParams {
    pub r: f64,
    pub tau: f64,
    pub m: usize,
    pub n: usize,
}

impl NgOpParams {
    pub fn new(r: f64, tau: f64, m: usize, n: usize) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "squeezing r = {r} must be >= 0"
            )));
        }
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::InvalidParameter(format!(
                "transmissivity tau = {tau} must lie in [0, 1]"
            )));
        }
        if m > MAX_ORDER || n > MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "photon numbers (m, n) = ({m}, {n}) exceed the engine cap {MAX_ORDER}"
            )));
        }
        Ok(Self { r, tau, m, n })
    }

    /// Plain squeezed vacuum: nothing injected, nothing detected, `tau = 1`.
    pub fn squeezed_vacuum(r: f64) -> Result<Self> {
        Self::new(r, 1.0, 0, 0)
    }

    pub fn operation(&self) -> Operation {
        use std::cmp::Ordering::*;
        match self.m.cmp(&self.n) {
            Less => Operation::Subtraction,
            Greater => Operation::Addition,
            Equal => Operation::Catalysis,
        }
    }

    pub fn derived(&self) -> DerivedScalars {
        DerivedScalars::new(self.r, self.tau)
    }
}

/// Scalars shared by every matrix builder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScalars {
    /// `sinh r`
    pub alpha: f64,
    /// `cosh r`
    pub beta: f64,
    /// `sqrt(tau)`
    pub t: f64,
    /// `sqrt(1 - tau)`
    pub tp: f64,
    /// `cosh r + tau sinh r`
    pub w1: f64,
    /// `cosh r - tau sinh r`
    pub w2: f64,
    pub w0: f64,
}

impl DerivedScalars {
    pub fn new(r: f64, tau: f64) -> Self {
        let alpha = r.sinh();
        let beta = r.cosh();
        let tp2 = 1.0 - tau;
        let w1 = beta + tau * alpha;
        let w2 = beta - tau * alpha;
        let w0 = (-2.0 * r).exp() * (w2 + tp2 * alpha * alpha) / (w1 - tp2 * alpha * alpha);
        Self {
            alpha,
            beta,
            t: tau.sqrt(),
            tp: tp2.sqrt(),
            w1,
            w2,
            w0,
        }
    }
}

/// Full interferometer configuration: heralded input, coherent displacement
/// `(dx, dp)` and phase `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MziScenario {
    pub ng: NgOpParams,
    pub dx: f64,
    pub dp: f64,
    pub phi: f64,
}

impl MziScenario {
    pub fn new(ng: NgOpParams, dx: f64, dp: f64, phi: f64) -> Result<Self> {
        for (name, v) in [("dx", dx), ("dp", dp), ("phi", phi)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} is not finite"
                )));
            }
        }
        Ok(Self { ng, dx, dp, phi })
    }

    pub fn with_phi(&self, phi: f64) -> Self {
        Self { phi, ..*self }
    }

    /// Same squeezing, displacement and phase with the herald removed.
    pub fn baseline(&self) -> Self {
        Self {
            ng: NgOpParams {
                r: self.ng.r,
                tau: 1.0,
                m: 0,
                n: 0,
            },
            ..*self
        }
    }

    pub fn gamma(&self) -> f64 {
        self.phi.cos()
    }

    pub fn delta(&self) -> f64 {
        self.phi.sin()
    }

    /// `cosh r + tau sinh r cos(phi)`
    pub fn w3(&self) -> f64 {
        self.ng.r.cosh() + self.ng.tau * self.ng.r.sinh() * self.gamma()
    }

    /// `cosh r - tau sinh r cos(phi)`
    pub fn w4(&self) -> f64 {
        self.ng.r.cosh() - self.ng.tau * self.ng.r.sinh() * self.gamma()
    }

    /// `(2 dx, 2 dp)`
    pub fn d(&self) -> [f64; 2] {
        [2.0 * self.dx, 2.0 * self.dp]
    }

    /// `(dx + i dp) / sqrt(2)`
    pub fn coherent_amplitude(&self) -> Complex64 {
        Complex64::new(self.dx, self.dp) / std::f64::consts::SQRT_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn classification() {
        assert_eq!(
            NgOpParams::new(0.5, 0.9, 0, 1).unwrap().operation(),
            Operation::Subtraction
        );
        assert_eq!(
            NgOpParams::new(0.5, 0.9, 2, 0).unwrap().operation(),
            Operation::Addition
        );
        assert_eq!(
            NgOpParams::new(0.5, 0.9, 1, 1).unwrap().operation(),
            Operation::Catalysis
        );
    }

    #[test]
    fn rejects_bad_params() {
        assert!(NgOpParams::new(-0.1, 0.5, 0, 1).is_err());
        assert!(NgOpParams::new(0.1, 1.2, 0, 1).is_err());
        assert!(NgOpParams::new(0.1, f64::NAN, 0, 1).is_err());
        assert!(NgOpParams::new(0.1, 0.5, 21, 0).is_err());
        let ng = NgOpParams::new(0.1, 0.5, 0, 1).unwrap();
        assert!(MziScenario::new(ng, f64::INFINITY, 0.0, 0.0).is_err());
    }

    #[test]
    fn unit_transmissivity_scalars() {
        let d = DerivedScalars::new(0.7, 1.0);
        assert_relative_eq!(d.w1, 0.7f64.exp(), epsilon = 1e-14);
        assert_relative_eq!(d.w2, (-0.7f64).exp(), epsilon = 1e-14);
        assert_relative_eq!(d.w1 * d.w2, 1.0, epsilon = 1e-14);
        assert_eq!(d.tp, 0.0);
    }

    #[test]
    fn w0_is_one_without_squeezing() {
        assert_relative_eq!(DerivedScalars::new(0.0, 0.3).w0, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn coherent_amplitude_convention() {
        let ng = NgOpParams::new(0.5, 0.9, 0, 1).unwrap();
        let s = MziScenario::new(ng, 2.0, 2.0, 0.01).unwrap();
        assert_relative_eq!(s.coherent_amplitude().norm_sqr(), 4.0, epsilon = 1e-14);
        assert_eq!(s.d(), [4.0, 4.0]);
    }

    proptest::proptest! {
        #[test]
        fn w_scalars_positive(r in 0.0f64..3.0, tau in 0.0f64..=1.0, phi in -7.0f64..7.0) {
            let d = DerivedScalars::new(r, tau);
            proptest::prop_assert!(d.w1 >= d.w2 && d.w2 > 0.0);
            let s = MziScenario::new(NgOpParams::new(r, tau, 0, 0).unwrap(), 0.0, 0.0, phi).unwrap();
            proptest::prop_assert!(s.w3() > 0.0 && s.w4() > 0.0);
        }
    }
}
