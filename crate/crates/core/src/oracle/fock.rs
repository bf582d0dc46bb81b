use num_complex::Complex64;

use crate::error::{Error, Result};

/// Truncation loss above which a state preparation is rejected.
pub const MAX_TAIL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Single-mode pure state in the photon-number basis `|0>..|N>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

impl FockVector {
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(!amps.is_empty(), "a Fock vector needs at least |0>");
        Self { amps }
    }

    pub fn vacuum(cutoff: usize) -> Self {
        Self::number(0, cutoff)
    }

    /// `|k>` truncated at `cutoff >= k`.
    pub fn number(k: usize, cutoff: usize) -> Self {
        let mut amps = vec![ZERO; cutoff.max(k) + 1];
        amps[k] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|a_N|^2 + |a_{N-1}|^2`, a cheap indicator of cutoff adequacy.
    pub fn edge_mass(&self) -> f64 {
        self.amps.iter().rev().take(2).map(|a| a.norm_sqr()).sum()
    }

    /// `sum_k (-1)^k |a_k|^2`
    pub fn parity(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if k % 2 == 0 {
                    a.norm_sqr()
                } else {
                    -a.norm_sqr()
                }
            })
            .sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(k, a)| k as f64 * a.norm_sqr())
            .sum()
    }

    /// Rescales to unit norm; a zero vector means the conditioning event
    /// cannot happen.
    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm_sqr();
        if norm < 1e-28 {
            return Err(Error::HeraldImpossible(norm));
        }
        let k = 1.0 / norm.sqrt();
        self.amps.iter_mut().for_each(|a| *a *= k);
        Ok(self)
    }

    /// `a |psi>` (unnormalized); the cutoff is kept.
    pub fn annihilate(&self) -> Self {
        let mut amps = vec![ZERO; self.amps.len()];
        for k in 1..self.amps.len() {
            amps[k - 1] = self.amps[k] * (k as f64).sqrt();
        }
        Self { amps }
    }

    /// `a^dag |psi>` (unnormalized); the cutoff grows by one so nothing is lost.
    pub fn create(&self) -> Self {
        let mut amps = vec![ZERO; self.amps.len() + 1];
        for (k, a) in self.amps.iter().enumerate() {
            amps[k + 1] = a * ((k + 1) as f64).sqrt();
        }
        Self { amps }
    }

    /// Zero-pads (or truncates) to a new cutoff.
    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        let mut amps = self.amps.clone();
        amps.resize(cutoff + 1, ZERO);
        Self { amps }
    }
}

/// Squeezed vacuum `exp[r (a^2 - a^dag^2)/2] |0>`, renormalized after truncation.
///
/// Amplitudes are `(-tanh r)^k sqrt((2k)!) / (2^k k! sqrt(cosh r))` on `|2k>`.
pub fn squeezed_vacuum_fock(r: f64, cutoff: usize) -> Result<FockVector> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "squeezing r = {r} must be >= 0"
        )));
    }
    if cutoff < 2 {
        return Err(Error::InvalidParameter(format!(
            "cutoff {cutoff} must be >= 2"
        )));
    }
    let ratio = -r.tanh();
    let mut amps = vec![ZERO; cutoff + 1];
    let mut c = 1.0 / r.cosh().sqrt();
    let mut k = 0usize;
    while 2 * k <= cutoff {
        amps[2 * k] = Complex64::new(c, 0.0);
        let kk = k as f64;
        c *= ratio * ((2.0 * kk + 1.0) * (2.0 * kk + 2.0)).sqrt() / (2.0 * (kk + 1.0));
        k += 1;
    }
    finish_truncated(amps)
}

/// Coherent state `|alpha>`.
pub fn coherent_fock(alpha: Complex64, cutoff: usize) -> Result<FockVector> {
    let mut amps = vec![ZERO; cutoff + 1];
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for (k, a) in amps.iter_mut().enumerate() {
        if k > 0 {
            c = c * alpha / (k as f64).sqrt();
        }
        *a = c;
    }
    finish_truncated(amps)
}

/// Probability mass that truncation at `cutoff` discards from the squeezed vacuum.
pub fn squeezed_vacuum_tail(r: f64, cutoff: usize) -> f64 {
    let v = squeezed_vacuum_raw_mass(r, cutoff);
    (1.0 - v).max(0.0)
}

fn squeezed_vacuum_raw_mass(r: f64, cutoff: usize) -> f64 {
    let ratio = -r.tanh();
    let mut c = 1.0 / r.cosh().sqrt();
    let mut mass = 0.0;
    let mut k = 0usize;
    while 2 * k <= cutoff {
        mass += c * c;
        let kk = k as f64;
        c *= ratio * ((2.0 * kk + 1.0) * (2.0 * kk + 2.0)).sqrt() / (2.0 * (kk + 1.0));
        k += 1;
    }
    mass
}

/// Mass of a Poisson distribution with mean `mean` above `cutoff`.
pub fn coherent_tail(mean: f64, cutoff: usize) -> f64 {
    let mut term = (-mean).exp();
    let mut mass = 0.0;
    for k in 0..=cutoff {
        if k > 0 {
            term *= mean / k as f64;
        }
        mass += term;
    }
    (1.0 - mass).max(0.0)
}

fn finish_truncated(amps: Vec<Complex64>) -> Result<FockVector> {
    let cutoff = amps.len() - 1;
    let v = FockVector { amps };
    let tail = (1.0 - v.norm_sqr()).max(0.0);
    if tail > MAX_TAIL {
        return Err(Error::CutoffTooSmall { cutoff, tail });
    }
    v.normalized()
}
