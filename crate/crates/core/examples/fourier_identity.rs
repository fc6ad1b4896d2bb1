//! F_alpha by direct summation and through its Fourier representation.

use aggregation_shells::convexity::{f_alpha_form, fourier_side, random_neutral, trial_rng};

fn main() -> aggregation_shells::Result<()> {
    for t in 0..5 {
        let rho = random_neutral(1, &mut trial_rng(3, t));
        for alpha in [1.0, 3.0] {
            let direct = f_alpha_form(&rho, alpha)?;
            let spectral = fourier_side(&rho, alpha)?;
            println!("trial {t}, alpha = {alpha}: direct {direct:+.10e}  fourier {spectral:+.10e}");
        }
    }
    Ok(())
}
