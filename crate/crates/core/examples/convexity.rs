//! Sign of the quadratic form F_alpha on random neutral measures.

use aggregation_shells::convexity::{f_alpha_form, reference_neutral_1d, sign_classify};

fn main() -> aggregation_shells::Result<()> {
    let rho = reference_neutral_1d();
    for alpha in [1.0, 3.0, 4.0] {
        println!("reference measure: F_{alpha} = {}", f_alpha_form(&rho, alpha)?);
    }
    for n in 1..=3 {
        for alpha in [0.5, 1.0, 2.0, 2.5, 3.5, 4.0] {
            let r = sign_classify(alpha, n, 200, 1)?;
            println!("n = {n}, alpha = {alpha}: [{:+.3e}, {:+.3e}] {}", r.min, r.max, r.verdict.as_str());
        }
    }
    Ok(())
}
