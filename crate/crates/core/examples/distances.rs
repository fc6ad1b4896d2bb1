//! Wasserstein distances between rings and shell proxies.

use aggregation_shells::equilibria::shell_proxy;
use aggregation_shells::transport::{distance_to_minimizer, wasserstein};
use aggregation_shells::{Kernel, RingConfig};

fn main() -> aggregation_shells::Result<()> {
    let ring = RingConfig { k: 8, radius: 1.0 }.measure();
    let proxy = shell_proxy(1.0, 2, 8)?;
    let dilated = RingConfig { k: 8, radius: 1.1 }.measure();
    for p in [1.0, 2.0, 3.0, f64::INFINITY] {
        println!("p = {p}: d(ring, proxy) = {:.3e}, d(ring, dilated ring) = {:.6}", wasserstein(&ring, &proxy, p)?, wasserstein(&ring, &dilated, p)?);
    }
    let kernel = Kernel::from_exponents(3.0, 2.0, 2)?;
    let steady = RingConfig { k: 64, radius: 0.58 }.measure();
    println!("d_3 to the minimizing shell: {:.6}", distance_to_minimizer(&steady, &kernel, 3.0)?);
    Ok(())
}
