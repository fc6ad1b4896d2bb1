//! Power-law kernels W_{α,β}, their gradients, interaction energies and
//! potential fields of discrete measures.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, Point};
use crate::special::KernelParams;
use crate::sum::CompensatedSum;

/// Pairwise loops switch to rayon above this many atoms.
const PAR_THRESHOLD: usize = 256;

/// |x|^p computed from |x|², with fast paths when 2p is a small integer.
#[inline]
pub(crate) fn rpow(r2: f64, p: f64) -> f64 {
    // Exponents on the quarter grid of r2 avoid powf.
    let q = 2.0 * p;
    if (0.0..=32.0).contains(&q) && q.fract() == 0.0 {
        let q = q as u32;
        let whole = r2.powi((q / 4) as i32);
        return match q % 4 {
            0 => whole,
            1 => whole * r2.sqrt().sqrt(),
            2 => whole * r2.sqrt(),
            _ => {
                let s = r2.sqrt();
                whole * s * s.sqrt()
            }
        };
    }
    r2.powf(0.5 * p)
}

/// W_{α,β}(x) = |x|^α/α − |x|^β/β.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kernel {
    params: KernelParams,
}

impl Kernel {
    pub fn new(params: KernelParams) -> Result<Self> {
        if params.alpha == 0.0 || params.beta == 0.0 {
            return Err(Error::Domain("zero exponent (logarithmic kernel) is not supported".into()));
        }
        Ok(Self { params })
    }

    /// Shorthand for `Kernel::new(KernelParams::new(alpha, beta, dim)?)`.
    pub fn from_exponents(alpha: f64, beta: f64, dim: usize) -> Result<Self> {
        Self::new(KernelParams::new(alpha, beta, dim)?)
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn beta(&self) -> f64 {
        self.params.beta
    }

    fn min_exponent(&self) -> f64 {
        self.params.alpha.min(self.params.beta)
    }

    /// W as a function of |x|².
    #[inline]
    pub(crate) fn value_r2(&self, r2: f64) -> Result<f64> {
        if r2 == 0.0 {
            return if self.min_exponent() > 0.0 {
                Ok(0.0)
            } else {
                Err(Error::Singularity(format!(
                    "W(0) is infinite for exponents ({}, {})",
                    self.alpha(),
                    self.beta()
                )))
            };
        }
        let (a, b) = (self.alpha(), self.beta());
        Ok(rpow(r2, a) / a - rpow(r2, b) / b)
    }

    /// The scalar g with ∇W(x) = g(|x|²)·x, for x ≠ 0.
    #[inline]
    pub(crate) fn grad_factor_r2(&self, r2: f64) -> f64 {
        rpow(r2, self.alpha() - 2.0) - rpow(r2, self.beta() - 2.0)
    }

    /// ∇W vanishes continuously at the origin when both exponents exceed 1.
    fn gradient_continuous_at_origin(&self) -> bool {
        self.min_exponent() > 1.0
    }

    pub fn kernel_value(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        self.value_r2(x.iter().map(|v| v * v).sum())
    }

    /// ∇W(x) = |x|^{α−2}x − |x|^{β−2}x; zero at the origin when β ≥ 2.
    pub fn kernel_gradient(&self, x: &[f64]) -> Result<Point> {
        self.check_dim(x.len())?;
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 == 0.0 {
            if self.beta() >= 2.0 {
                return Ok(Point::zeros(x.len()));
            }
            return Err(Error::Singularity(format!(
                "gradient at the origin for beta = {} < 2",
                self.beta()
            )));
        }
        let g = self.grad_factor_r2(r2);
        Ok(Point(x.iter().map(|v| g * v).collect()))
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.params.dim {
            return Err(Error::Domain(format!(
                "point has dim {d}, kernel expects {}",
                self.params.dim
            )));
        }
        Ok(())
    }

    fn check_measure(&self, m: &DiscreteMeasure) -> Result<()> {
        self.check_dim(m.dim())
    }

    /// E(μ) = ½ Σ_{i,j} w_i w_j W(x_i − x_j).
    pub fn interaction_energy(&self, m: &DiscreteMeasure) -> Result<f64> {
        self.check_measure(m)?;
        let n = m.len();
        let row = |i: usize| -> Result<f64> {
            let xi = m.point(i);
            let mut s = CompensatedSum::new();
            for j in (i + 1)..n {
                let r2 = sq_dist(xi, m.point(j));
                s.add(m.weights()[j] * self.value_r2(r2)?);
            }
            Ok(m.weights()[i] * s.value())
        };
        let rows: Vec<f64> = if n >= PAR_THRESHOLD {
            (0..n).into_par_iter().map(row).collect::<Result<_>>()?
        } else {
            (0..n).map(row).collect::<Result<_>>()?
        };
        Ok(crate::sum::compensated(rows))
    }

    /// V_μ(x) = Σ_j w_j W(x − x_j).
    pub fn potential_field(&self, m: &DiscreteMeasure, x: &[f64]) -> Result<f64> {
        self.check_measure(m)?;
        self.check_dim(x.len())?;
        let mut s = CompensatedSum::new();
        for (y, w) in m.points().zip(m.weights()) {
            s.add(w * self.value_r2(sq_dist(x, y))?);
        }
        Ok(s.value())
    }

    /// ∇V_μ(x) = Σ_j w_j ∇W(x − x_j).
    pub fn field_gradient(&self, m: &DiscreteMeasure, x: &[f64]) -> Result<Point> {
        self.check_measure(m)?;
        self.check_dim(x.len())?;
        let d = m.dim();
        let mut acc = vec![CompensatedSum::new(); d];
        for (y, w) in m.points().zip(m.weights()) {
            let r2 = sq_dist(x, y);
            if r2 == 0.0 {
                if self.beta() >= 2.0 {
                    continue;
                }
                return Err(Error::Singularity("field gradient evaluated on an atom with beta < 2".into()));
            }
            let g = w * self.grad_factor_r2(r2);
            for k in 0..d {
                acc[k].add(g * (x[k] - y[k]));
            }
        }
        Ok(Point(acc.iter().map(CompensatedSum::value).collect()))
    }

    /// ∇V_μ at atom i, excluding the atom's own (vanishing) self term.
    pub fn atom_gradient(&self, m: &DiscreteMeasure, i: usize) -> Result<Point> {
        self.check_measure(m)?;
        let mut out = vec![0.0; m.dim()];
        self.atom_gradient_flat(m.dim(), m.coords(), m.weights(), i, &mut out)?;
        Ok(Point(out))
    }

    /// Gradients ∇V_μ(x_i) at every atom, row-major.
    pub fn atom_gradients(&self, m: &DiscreteMeasure) -> Result<Vec<f64>> {
        self.check_measure(m)?;
        let mut out = vec![0.0; m.coords().len()];
        self.atom_gradients_flat(m.dim(), m.coords(), m.weights(), &mut out)?;
        Ok(out)
    }

    pub(crate) fn atom_gradients_flat(
        &self,
        dim: usize,
        coords: &[f64],
        weights: &[f64],
        out: &mut [f64],
    ) -> Result<()> {
        if weights.len() >= PAR_THRESHOLD {
            out.par_chunks_mut(dim)
                .enumerate()
                .try_for_each(|(i, o)| self.atom_gradient_flat(dim, coords, weights, i, o))
        } else {
            out.chunks_mut(dim)
                .enumerate()
                .try_for_each(|(i, o)| self.atom_gradient_flat(dim, coords, weights, i, o))
        }
    }

    fn atom_gradient_flat(
        &self,
        dim: usize,
        coords: &[f64],
        weights: &[f64],
        i: usize,
        out: &mut [f64],
    ) -> Result<()> {
        let xi = &coords[i * dim..(i + 1) * dim];
        let mut acc = [CompensatedSum::new(); 8];
        let mut acc_vec;
        let acc: &mut [CompensatedSum] = if dim <= 8 {
            &mut acc[..dim]
        } else {
            acc_vec = vec![CompensatedSum::new(); dim];
            &mut acc_vec
        };
        for (j, (y, w)) in coords.chunks_exact(dim).zip(weights).enumerate() {
            if j == i {
                continue;
            }
            let r2 = sq_dist(xi, y);
            if r2 == 0.0 {
                if self.gradient_continuous_at_origin() {
                    continue;
                }
                return Err(Error::Singularity(format!("atoms {i} and {j} coincide")));
            }
            let g = w * self.grad_factor_r2(r2);
            for k in 0..dim {
                acc[k].add(g * (xi[k] - y[k]));
            }
        }
        for (o, a) in out.iter_mut().zip(acc.iter()) {
            *o = a.value();
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{ring_measure, shell_proxy, simplex_measure, RingConfig};
    use proptest::prelude::*;

    fn k42(dim: usize) -> Kernel {
        Kernel::from_exponents(4.0, 2.0, dim).unwrap()
    }

    #[test]
    fn kernel_value_examples() {
        let k = k42(2);
        assert_eq!(k.kernel_value(&[1.0, 0.0]).unwrap(), -0.25);
        assert_eq!(k.kernel_value(&[0.0, 0.0]).unwrap(), 0.0);
        assert!(k.kernel_value(&[1.0, 1.0]).unwrap().abs() < 1e-15);
        let neg = Kernel::from_exponents(2.0, -0.5, 2).unwrap();
        assert!(matches!(neg.kernel_value(&[0.0, 0.0]), Err(Error::Singularity(_))));
        assert!(Kernel::from_exponents(2.0, 0.0, 2).is_err());
    }

    #[test]
    fn kernel_gradient_examples() {
        let k = k42(2);
        assert_eq!(k.kernel_gradient(&[1.0, 0.0]).unwrap().0, vec![0.0, 0.0]);
        assert_eq!(k.kernel_gradient(&[2.0, 0.0]).unwrap().0, vec![6.0, 0.0]);
        assert_eq!(k.kernel_gradient(&[0.0, 0.0]).unwrap().0, vec![0.0, 0.0]);
        let soft = Kernel::from_exponents(3.0, 1.5, 2).unwrap();
        assert!(soft.kernel_gradient(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn energy_examples() {
        let k1 = k42(1);
        let single = DiscreteMeasure::uniform(1, vec![vec![0.3]]).unwrap();
        assert_eq!(k1.interaction_energy(&single).unwrap(), 0.0);
        let mu_star = DiscreteMeasure::uniform(1, vec![vec![-0.5], vec![0.5]]).unwrap();
        assert!((k1.interaction_energy(&mu_star).unwrap() + 0.0625).abs() < 1e-16);
        let tri = simplex_measure(2);
        assert!((k42(2).interaction_energy(&tri).unwrap() + 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn coincident_atoms_with_negative_exponent_fail() {
        let k = Kernel::from_exponents(2.0, -0.5, 2).unwrap();
        let m = DiscreteMeasure::uniform(2, vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(k.interaction_energy(&m).is_err());
    }

    #[test]
    fn field_examples() {
        let k = k42(2);
        let ring = ring_measure(&RingConfig { k: 4, radius: 1.0 / 3f64.sqrt() });
        for i in 0..4 {
            let g = k.field_gradient(&ring, ring.point(i)).unwrap();
            assert!(g.norm() < 1e-12);
        }
        let fine = shell_proxy(1.0, 2, 4096).unwrap();
        let v0 = k.potential_field(&fine, &[0.0, 0.0]).unwrap();
        assert!((v0 + 0.25).abs() < 1e-12);
        let far = k.field_gradient(&ring, &[10.0, 0.0]).unwrap();
        assert!(far.0[0] > 0.0);
    }

    fn arb_cloud() -> impl Strategy<Value = DiscreteMeasure> {
        (1usize..4, 2usize..10).prop_flat_map(|(dim, n)| {
            prop::collection::vec(-2.0f64..2.0, dim * n)
                .prop_map(move |c| DiscreteMeasure::from_flat(dim, c, None).unwrap())
        })
    }

    proptest! {
        #[test]
        fn gradient_is_odd(x in prop::collection::vec(-3.0f64..3.0, 3), a in 2.1f64..5.0) {
            let k = Kernel::from_exponents(a, 2.0, 3).unwrap();
            let g = k.kernel_gradient(&x).unwrap();
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            let h = k.kernel_gradient(&neg).unwrap();
            for (p, q) in g.0.iter().zip(&h.0) {
                prop_assert!((p + q).abs() <= 1e-15 * (1.0 + p.abs()));
            }
        }

        #[test]
        fn energy_translation_and_rotation_invariant(m in arb_cloud(), s in -3.0f64..3.0, th in 0.0f64..std::f64::consts::TAU) {
            let k = Kernel::from_exponents(3.3, 1.7, m.dim()).unwrap();
            let e0 = k.interaction_energy(&m).unwrap();
            let e1 = k.interaction_energy(&m.translated(&vec![s; m.dim()])).unwrap();
            prop_assert!((e0 - e1).abs() < 1e-11 * (1.0 + e0.abs()));
            let mut rot = nalgebra::DMatrix::identity(m.dim(), m.dim());
            if m.dim() >= 2 {
                rot[(0, 0)] = th.cos(); rot[(0, 1)] = -th.sin();
                rot[(1, 0)] = th.sin(); rot[(1, 1)] = th.cos();
            } else {
                rot[(0, 0)] = -1.0;
            }
            let e2 = k.interaction_energy(&m.linear_map(&rot)).unwrap();
            prop_assert!((e0 - e2).abs() < 1e-11 * (1.0 + e0.abs()));
        }

        #[test]
        fn field_gradient_matches_central_differences(m in arb_cloud(), x in prop::collection::vec(-3.0f64..3.0, 3)) {
            let k = Kernel::from_exponents(3.5, 2.0, m.dim()).unwrap();
            let x = &x[..m.dim()];
            let g = k.field_gradient(&m, x).unwrap();
            let h = 1e-5;
            for c in 0..m.dim() {
                let mut xp = x.to_vec(); xp[c] += h;
                let mut xm = x.to_vec(); xm[c] -= h;
                let fd = (k.potential_field(&m, &xp).unwrap() - k.potential_field(&m, &xm).unwrap()) / (2.0 * h);
                prop_assert!((fd - g.0[c]).abs() <= 1e-6 * (1.0 + g.0[c].abs()));
            }
        }

        #[test]
        fn total_internal_force_vanishes(m in arb_cloud()) {
            let k = Kernel::from_exponents(3.0, 1.5, m.dim()).unwrap();
            let g = k.atom_gradients(&m).unwrap();
            for c in 0..m.dim() {
                let total: f64 = (0..m.len()).map(|i| m.weights()[i] * g[i * m.dim() + c]).sum();
                prop_assert!(total.abs() < 1e-12);
            }
        }
    }
}
