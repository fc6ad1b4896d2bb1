use aggregation_shells::special::{beta_star, c_of_alpha, diameter_bound, fourier_kernel_constant, gamma, omega_n};
use aggregation_shells::KernelParams;

fn main() -> aggregation_shells::Result<()> {
    println!("Gamma(1/2)^2 = {:.15} (pi = {:.15})", gamma(0.5)?.powi(2), std::f64::consts::PI);
    for n in 1..=4 {
        println!("n = {n}: |S^(n-1)| = {:.12}", omega_n(n));
    }
    for alpha in [0.5, 1.0, 2.5, 3.0, 3.5] {
        println!(
            "alpha = {alpha}: C = {:+.6e}, Fourier constant (n=1) = {:+.6e}",
            c_of_alpha(alpha, 1)?,
            fourier_kernel_constant(alpha, 1)?
        );
    }
    for n in 1..=3 {
        println!("beta*(alpha = 3, n = {n}) = {:.6}", beta_star(3.0, n)?);
    }
    let b = diameter_bound(&KernelParams::new(3.5, 2.0, 2)?)?;
    println!("diameter bound at (3.5, 2): zero {:.6}, limit {:.6}", b.zero, b.limit);
    Ok(())
}
