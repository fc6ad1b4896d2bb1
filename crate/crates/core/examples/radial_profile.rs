//! Radial potential of a two-shell mixture, its derivatives and critical radii.

use aggregation_shells::radial::{g_alpha, g_capital, inflection_and_min, linear_grid, radial_profile};
use aggregation_shells::{KernelParams, RadialMixture};

fn main() -> aggregation_shells::Result<()> {
    let params = KernelParams::new(3.0, 2.0, 3)?;
    let mix = RadialMixture::new(vec![0.5, 1.2], vec![0.3, 0.7], 3)?;
    let profile = radial_profile(&mix, &params, &linear_grid(0.05, 3.0, 60), 1e-12)?;
    for i in (0..profile.len()).step_by(10) {
        println!(
            "r = {:.3}  f = {:+.6}  f' = {:+.6}  f'' = {:+.6}  f''' = {:+.6}",
            profile.grid[i], profile.f[i], profile.f1[i], profile.f2[i], profile.f3[i]
        );
    }
    let min_f3 = profile.f3.iter().copied().fold(f64::INFINITY, f64::min);
    println!("min f''' on grid: {min_f3:.6e}");
    if let Ok(c) = inflection_and_min(&profile) {
        println!("inflection at {:.10}, minimum at {:.10}", c.r_inflect, c.r_min);
    }
    for r in [0.25, 0.5, 0.75] {
        println!("n = 3, r = {r}: g_3 = {:.6e}, G_3 = {:.6e}", g_alpha(3.0, r, 3, 1e-12)?, g_capital(3.0, r, 3, 1e-12)?);
    }
    Ok(())
}
