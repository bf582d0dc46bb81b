//! Best beam-splitter transmissivity for each operation, by raw gain D and
//! by probability-weighted gain P x D.

use ngmzi::explorer::{optimize_tau, Objective};

fn main() -> ngmzi::Result<()> {
    let (r, phi) = (0.5, 0.01);
    println!("state  objective  tau      value       flags");
    for state in [
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 0),
        (2, 0),
        (3, 0),
        (1, 1),
        (2, 2),
        (3, 3),
    ] {
        for objective in [Objective::D, Objective::PxD] {
            let best = optimize_tau(state, r, phi, 2.0, 2.0, objective)?;
            let flags: Vec<_> = best.flags.iter().map(|f| f.as_str()).collect();
            println!(
                "{state:?}  {:<9}  {:.5}  {:+.6e}  {}",
                format!("{objective:?}"),
                best.tau,
                best.value,
                flags.join(",")
            );
        }
    }
    Ok(())
}
