//! A random cloud under the aggregation flow.

use aggregation_shells::dynamics::{evolve, FlowOptions};
use aggregation_shells::special::diameter_bound;
use aggregation_shells::{DiscreteMeasure, Kernel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> aggregation_shells::Result<()> {
    let kernel = Kernel::from_exponents(3.5, 2.0, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let cloud = DiscreteMeasure::from_flat(2, (0..240).map(|_| rng.gen_range(0.0..1.0)).collect(), None)?;
    let traj = evolve(&cloud, &kernel, &FlowOptions::new(30.0, 0.05, 1e-8).with_stride(60))?;
    for s in &traj.states {
        println!(
            "t = {:>6.2}  E = {:.10}  residual {:.3e}  diameter {:.6}",
            s.time,
            s.energy,
            s.force_residual,
            s.measure.support_diameter()
        );
    }
    println!("diameter bound {:.6}", diameter_bound(kernel.params())?.limit);
    println!("steps {}, rejected {}, drift {:.1e}", traj.accepted_steps, traj.rejected_steps, traj.max_center_drift);
    Ok(())
}
