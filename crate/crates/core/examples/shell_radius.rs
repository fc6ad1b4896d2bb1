//! Steady shell radii by closed form and by root finding.

use aggregation_shells::equilibria::{r_star, shell_radius_rootfind};
use aggregation_shells::special::shell_radius_closed_form;
use aggregation_shells::KernelParams;

fn main() -> aggregation_shells::Result<()> {
    for n in [1, 2, 3] {
        for alpha in [2.5, 3.0, 3.5, 4.0] {
            let p = KernelParams::new(alpha, 2.0, n)?;
            let closed = shell_radius_closed_form(&p)?;
            let root = shell_radius_rootfind(&p)?;
            let r = r_star(&p)?;
            println!(
                "n = {n}, alpha = {alpha}: closed {closed:.10}  root {root:.10}  r* {:.10}  (1/(f'+1)) form {:.10}  (2/(f'+2)) form {:.10}",
                r.root, r.corrected_closed_form, r.alternate_closed_form
            );
        }
    }
    Ok(())
}
