//! Agreement grid between the closed-form pipeline and the Fock-space oracle.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interferometry::parity_with_matrices;
use crate::matrices::ParityMatrices;
use crate::oracle;
use crate::params::{MziScenario, NgOpParams};
use crate::state::{success_probability, HeraldedState};

pub const PARITY_TOLERANCE: f64 = 1e-6;
pub const WIGNER_TOLERANCE: f64 = 1e-6;
pub const PROBABILITY_TOLERANCE: f64 = 1e-8;

const SQUEEZING: [f64; 3] = [0.3, 0.5, 0.9];
const TRANSMISSIVITY: [f64; 2] = [0.5, 0.9];
const PHASES: [f64; 2] = [0.01, 0.1];
const FAST_STATES: [(usize, usize); 5] = [(0, 1), (0, 2), (1, 0), (2, 0), (1, 1)];
const DISPLACEMENT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Fast,
    /// Every `(m, n)` with `m + n <= 6`.
    Full,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Suite::Fast),
            "full" => Ok(Suite::Full),
            _ => Err(Error::InvalidParameter(format!(
                "unknown suite '{s}' (fast, full)"
            ))),
        }
    }
}

impl Suite {
    pub fn states(&self) -> Vec<(usize, usize)> {
        match self {
            Suite::Fast => FAST_STATES.to_vec(),
            Suite::Full => (0..=6)
                .flat_map(|m| (0..=6 - m).map(move |n| (m, n)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: Suite,
    pub states: usize,
    pub scenarios: usize,
    pub max_parity_deviation: f64,
    pub max_probability_deviation: f64,
    pub max_wigner_deviation: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.max_parity_deviation <= PARITY_TOLERANCE
            && self.max_probability_deviation <= PROBABILITY_TOLERANCE
            && self.max_wigner_deviation <= WIGNER_TOLERANCE
    }
}

struct Deviations {
    parity: f64,
    probability: f64,
    wigner: f64,
    scenarios: usize,
}

pub fn run(suite: Suite) -> Result<CheckReport> {
    run_with(suite, &ParityMatrices::build)
}

/// Same grid with a caller-supplied source for the parity exponent matrices.
pub fn run_with<F>(suite: Suite, matrices: &F) -> Result<CheckReport>
where
    F: Fn(&MziScenario) -> ParityMatrices + Sync,
{
    let states = suite.states();
    let mut cases = Vec::new();
    for &(m, n) in &states {
        for &r in &SQUEEZING {
            for &tau in &TRANSMISSIVITY {
                cases.push(NgOpParams::new(r, tau, m, n)?);
            }
        }
    }
    let per_case: Vec<Option<Deviations>> = cases
        .par_iter()
        .map(|p| check_case(p, matrices))
        .collect::<Result<_>>()?;

    let mut report = CheckReport {
        suite,
        states: states.len(),
        scenarios: 0,
        max_parity_deviation: 0.0,
        max_probability_deviation: 0.0,
        max_wigner_deviation: 0.0,
    };
    for d in per_case.into_iter().flatten() {
        report.scenarios += d.scenarios;
        report.max_parity_deviation = report.max_parity_deviation.max(d.parity);
        report.max_probability_deviation = report.max_probability_deviation.max(d.probability);
        report.max_wigner_deviation = report.max_wigner_deviation.max(d.wigner);
    }
    Ok(report)
}

fn check_case<F>(p: &NgOpParams, matrices: &F) -> Result<Option<Deviations>>
where
    F: Fn(&MziScenario) -> ParityMatrices,
{
    let base = MziScenario::new(*p, DISPLACEMENT, DISPLACEMENT, PHASES[0])?;
    let alpha = base.coherent_amplitude();
    let cutoff = oracle::oracle_cutoff(p.r, alpha.norm_sqr())?;
    let analytic_p = success_probability(p)?;
    let herald = match oracle::herald_state_with_cutoff(p, cutoff) {
        Ok(h) => h,
        // Impossible in both descriptions: nothing further to compare.
        Err(Error::HeraldImpossible(_)) if analytic_p < 1e-12 => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut dev = Deviations {
        parity: 0.0,
        probability: (analytic_p - herald.probability).abs(),
        wigner: 0.0,
        scenarios: 0,
    };

    let state = HeraldedState::new(*p)?;
    for q in [-1.0, 0.0, 1.0] {
        for pp in [-1.0, 0.0, 1.0] {
            let a = state.wigner(q, pp)?;
            let b = oracle::wigner_displaced_parity(&herald.state, q, pp);
            dev.wigner = dev.wigner.max((a - b).abs());
        }
    }

    for &phi in &PHASES {
        let s = base.with_phi(phi);
        let b = oracle::mzi_parity(&herald.state, alpha, phi, cutoff)?;
        // A closed form that cannot even produce a real number counts as a mismatch.
        let deviation = match parity_with_matrices(&s, &matrices(&s)) {
            Ok(a) => (a - b).abs(),
            Err(Error::InternalConsistency(_)) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        dev.parity = dev.parity.max(deviation);
        dev.scenarios += 1;
    }
    Ok(Some(dev))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_state_count() {
        assert_eq!(Suite::Full.states().len(), 28);
        assert!(Suite::Full.states().iter().all(|(m, n)| m + n <= 6));
    }

    #[test]
    fn fast_suite_passes() {
        let report = run(Suite::Fast).unwrap();
        assert_eq!(report.scenarios, 60);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn flipped_sign_is_caught() {
        let report = run_with(Suite::Fast, &|s: &MziScenario| {
            let mut m = ParityMatrices::build(s);
            m.m5[0][0] = -m.m5[0][0];
            m
        })
        .unwrap();
        assert!(!report.passed(), "{report:?}");
        assert!(report.max_parity_deviation > PARITY_TOLERANCE);
    }
}
