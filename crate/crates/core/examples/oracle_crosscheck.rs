//! Closed-form parity against the photon-number simulator and the numerical
//! phase-space integral.

use ngmzi::checks::{self, Suite};
use ngmzi::interferometry::{parity_expectation, parity_via_quadrature};
use ngmzi::oracle;
use ngmzi::params::{MziScenario, NgOpParams};

fn main() -> ngmzi::Result<()> {
    let s = MziScenario::new(NgOpParams::new(0.7, 0.6, 2, 1)?, 2.0, 2.0, 0.3)?;
    let a = parity_expectation(&s)?;
    let o = oracle::scenario_parity(&s)?;
    let q = parity_via_quadrature(&s)?;
    println!("closed form  {a:+.15}");
    println!("Fock space   {o:+.15}  ({:.1e})", (a - o).abs());
    println!("quadrature   {q:+.15}  ({:.1e})", (a - q).abs());

    let report = checks::run(Suite::Fast)?;
    println!(
        "\n{} scenarios: parity {:.1e}, probability {:.1e}, Wigner {:.1e} -> {}",
        report.scenarios,
        report.max_parity_deviation,
        report.max_probability_deviation,
        report.max_wigner_deviation,
        if report.passed() { "ok" } else { "FAILED" }
    );
    Ok(())
}
