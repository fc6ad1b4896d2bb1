//! Interaction energy and potential of a small planar configuration.

use aggregation_shells::{DiscreteMeasure, Kernel};

fn main() -> aggregation_shells::Result<()> {
    let kernel = Kernel::from_exponents(3.0, 2.0, 2)?;
    let square = DiscreteMeasure::uniform(2, vec![vec![0.5, 0.5], vec![-0.5, 0.5], vec![-0.5, -0.5], vec![0.5, -0.5]])?;
    println!("E(square)        = {:.12}", kernel.interaction_energy(&square)?);
    println!("V(origin)        = {:.12}", kernel.potential_field(&square, &[0.0, 0.0])?);
    let g = kernel.field_gradient(&square, &[0.5, 0.5])?;
    println!("grad V(corner)   = ({:.3e}, {:.3e})", g.0[0], g.0[1]);
    let wide = square.scaled(2.0);
    println!("E(square, x2)    = {:.12}", kernel.interaction_energy(&wide)?);
    Ok(())
}
