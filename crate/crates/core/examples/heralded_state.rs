//! Success probability and Wigner function of the heralded states, plus the
//! herald photon-count distribution.

use std::f64::consts::PI;

use ngmzi::params::NgOpParams;
use ngmzi::state::{herald_distribution, HeraldedState};

fn main() -> ngmzi::Result<()> {
    let (r, tau) = (0.5, 0.9);
    println!("state    P_ng        pi*W(0,0)  norm");
    for (m, n) in [(0, 1), (0, 2), (1, 0), (2, 0), (1, 1), (2, 1)] {
        let st = HeraldedState::new(NgOpParams::new(r, tau, m, n)?)?;
        println!(
            "({m},{n})    {:.6}   {:+.6}  {:.8}",
            st.probability(),
            PI * st.wigner(0.0, 0.0)?,
            st.normalization()?
        );
    }

    println!("\ncut along q for photon subtraction:");
    let st = HeraldedState::new(NgOpParams::new(r, tau, 0, 1)?)?;
    for i in 0..=8 {
        let q = -2.0 + 0.5 * i as f64;
        println!("q = {q:+.1}  W = {:+.6}", st.wigner(q, 0.0)?);
    }

    let dist = herald_distribution(0, r, tau, 10)?;
    println!(
        "\nherald counts with a vacuum ancilla (total {:.10}):",
        dist.iter().sum::<f64>()
    );
    for (n, p) in dist.iter().enumerate() {
        println!("n = {n:2}  {p:.6e}");
    }
    Ok(())
}
