//! Steady planar rings: radius, Euler–Lagrange residual, exterior gap.

use aggregation_shells::equilibria::{euler_lagrange_residual, ring_steady_radius};
use aggregation_shells::special::shell_radius_closed_form;
use aggregation_shells::{Kernel, KernelParams, RingConfig};

fn main() -> aggregation_shells::Result<()> {
    for alpha in [3.0, 4.0] {
        let p = KernelParams::new(alpha, 2.0, 2)?;
        let kernel = Kernel::new(p)?;
        println!("alpha = {alpha}, shell radius {:.10}", shell_radius_closed_form(&p)?);
        for k in [3, 4, 8, 16, 32, 64] {
            let radius = ring_steady_radius(k, &p)?;
            let res = euler_lagrange_residual(&kernel, &RingConfig { k, radius }.measure())?;
            println!(
                "  k = {k:>2}: R = {radius:.10}  grad {:.1e}  gap {:+.3e}",
                res.grad_max, res.exterior_min_gap
            );
        }
    }
    Ok(())
}
