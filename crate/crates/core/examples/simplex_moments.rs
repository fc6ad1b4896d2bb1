//! Second moments and energies of the simplex and cross-polytope at (4, 2).

use aggregation_shells::equilibria::{cross_polytope_measure, shell_proxy};
use aggregation_shells::{Kernel, SimplexConfig};

fn main() -> aggregation_shells::Result<()> {
    for n in 1..=4 {
        let nf = n as f64;
        let kernel = Kernel::from_exponents(4.0, 2.0, n)?;
        let simplex = SimplexConfig::unit(n).measure();
        let radius = (nf / (2.0 * nf + 2.0)).sqrt();
        let target = -nf / (8.0 * (nf + 1.0));
        println!("n = {n}: target energy {target:.12}, target moment {:.6}", 1.0 / (2.0 * nf + 2.0));
        println!("  simplex  E = {:.12}  M = {:.6}", kernel.interaction_energy(&simplex)?, simplex.second_moment_matrix()[(0, 0)]);
        let cross = cross_polytope_measure(n, radius);
        println!("  cross    E = {:.12}", kernel.interaction_energy(&cross)?);
        if n >= 2 {
            println!("  proxy    E = {:.12}", kernel.interaction_energy(&shell_proxy(radius, n, 1024)?)?);
        }
    }
    Ok(())
}
