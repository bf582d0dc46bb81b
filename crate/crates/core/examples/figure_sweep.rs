//! Writes a figure preset as CSV. Pass the panel id, e.g. `2a` or `4c`.

use ngmzi::explorer::{figure, run_grid, run_sweep, Preset};
use ngmzi::output::to_csv;

fn main() -> ngmzi::Result<()> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "2a".into());
    let Some(preset) = figure(&id) else {
        eprintln!("unknown figure {id}");
        std::process::exit(2);
    };
    let rows = match preset {
        Preset::Sweep(spec) => run_sweep(&spec)?,
        Preset::Grid(spec) => run_grid(&spec)?,
    };
    print!("{}", to_csv(&rows));
    Ok(())
}
