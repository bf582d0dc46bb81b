//! Parity signal and phase sensitivity, compared with the plain squeezed
//! vacuum input.

use ngmzi::interferometry::{phase_sensitivity, sensitivity_diff};
use ngmzi::params::{MziScenario, NgOpParams};

fn main() -> ngmzi::Result<()> {
    let ng = NgOpParams::new(0.5, 0.9, 1, 0)?;
    println!("phi      <Pi>");
    for i in 0..=6 {
        let phi = 0.5 * i as f64;
        let s = MziScenario::new(ng, 2.0, 2.0, phi)?;
        println!(
            "{phi:.2}   {:+.6}",
            ngmzi::interferometry::parity_expectation(&s)?
        );
    }

    println!("\nstate  delta_phi   D");
    for (m, n) in [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (2, 0)] {
        let s = MziScenario::new(NgOpParams::new(0.5, 0.9, m, n)?, 2.0, 2.0, 0.01)?;
        let sens = phase_sensitivity(&s)?;
        let d = sensitivity_diff(&s)?.map_or("n/a".to_string(), |d| format!("{d:+.5}"));
        println!("({m},{n})  {:.5}     {d}", sens.delta_phi);
    }
    Ok(())
}
