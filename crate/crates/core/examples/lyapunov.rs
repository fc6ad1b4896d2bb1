//! Perturbations of the shell stay near the minimizing family.

use aggregation_shells::stability::{lyapunov_sweep, LyapunovOptions};
use aggregation_shells::Kernel;

fn main() -> aggregation_shells::Result<()> {
    let kernel = Kernel::from_exponents(3.0, 2.0, 2)?;
    let report = lyapunov_sweep(&kernel, &LyapunovOptions::new(64, vec![0.01, 0.02, 0.05, 0.1], 9))?;
    for p in &report.points {
        println!(
            "delta {:.2}: start {:.4}  sup {:.4}  end {:.4}  bound {:.4}",
            p.delta, p.initial_distance, p.sup_distance, p.final_distance, p.bound
        );
    }
    println!("envelope monotone: {}", report.envelope_monotone);
    Ok(())
}
