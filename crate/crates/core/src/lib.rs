//! Phase estimation in a Mach-Zehnder interferometer fed with a coherent
//! state and a heralded non-Gaussian squeezed vacuum, read out by parity
//! detection on one output port.
//!
//! The non-Gaussian state is made by mixing a squeezed vacuum with a Fock
//! state `|m>` on a beam splitter of transmissivity `tau` and keeping the
//! runs where the ancilla detector registers `n` photons (subtraction for
//! `m < n`, addition for `m > n`, catalysis for `m == n`). Every quantity is
//! a mixed partial derivative of a Gaussian generating function, evaluated
//! with an exact truncated power-series engine.
//!
//! Conventions: quadratures `q = (a + a^dag)/sqrt(2)`, vacuum Wigner function
//! `exp(-q^2 - p^2)/pi`, coherent amplitude `alpha = (dx + i dp)/sqrt(2)`,
//! squeezer `exp[r (a^2 - a^dag^2)/2]` (squeezed in `q`).
//!
//! ```
//! use ngmzi::params::{MziScenario, NgOpParams};
//! use ngmzi::interferometry::phase_sensitivity;
//!
//! let ng = NgOpParams::new(0.5, 0.9, 1, 0)?;
//! let s = MziScenario::new(ng, 2.0, 2.0, 0.01)?;
//! let sens = phase_sensitivity(&s)?;
//! assert!(sens.delta_phi > 0.0 && sens.delta_phi.is_finite());
//! # Ok::<(), ngmzi::Error>(())
//! ```
//!
//! [`oracle`] holds an independent brute-force simulator in the photon-number
//! basis used to validate all of the above.

#![allow(clippy::needless_range_loop)]

pub mod checks;
pub mod cli;
pub mod error;
pub mod explorer;
pub mod interferometry;
pub mod matrices;
pub mod oracle;
pub mod output;
pub mod params;
pub mod quadrature;
pub mod series;
pub mod state;

pub use error::{Error, Result};
