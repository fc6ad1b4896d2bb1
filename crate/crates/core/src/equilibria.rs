//! Steady configurations: shells, rings, simplices and cross-polytopes,
//! the radii at which they balance, and Euler–Lagrange residuals.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::potential::{rpow, Kernel};
use crate::radial::{sphere_integral, RadialMixture};
use crate::roots::{bisect, log_grid, scan_and_bisect};
use crate::special::KernelParams;

/// Bracket width used by every bisection in this module.
const ROOT_WIDTH: f64 = 1e-14;
/// Quadrature tolerance for constants that feed root finding.
const FINE_TOL: f64 = 1e-13;
/// Probe grid resolution per axis for [`euler_lagrange_residual`].
const PROBE_COUNT: usize = 64;

/// c_α = ∫ |e₁ − y|^{α−2} (1 − y₁) dσ(y) over the unit sphere.
/// For n = 1 the sphere is {±1} and c_α = 2^{α−2}.
pub fn c_alpha_constant(alpha: f64, n: usize) -> Result<f64> {
    if alpha <= 1.0 {
        return Err(Error::Domain(format!("c_alpha needs alpha > 1, got {alpha}")));
    }
    if n == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if n == 1 {
        return Ok(2f64.powf(alpha - 2.0));
    }
    sphere_integral(
        |c| {
            if c.dist2 == 0.0 {
                0.0
            } else {
                rpow(c.dist2, alpha - 2.0) * c.one_minus_cos
            }
        },
        1.0,
        n,
        FINE_TOL,
    )
}

/// Radius of the steady centered shell, found as the positive root of
/// c_α r^{α−1} − c_β r^{β−1}.
pub fn shell_radius_rootfind(p: &KernelParams) -> Result<f64> {
    if !(p.alpha > p.beta && p.beta > 1.0) {
        return Err(Error::Domain(format!(
            "shell balance needs alpha > beta > 1, got ({}, {})",
            p.alpha, p.beta
        )));
    }
    let ca = c_alpha_constant(p.alpha, p.dim)?;
    let cb = c_alpha_constant(p.beta, p.dim)?;
    // Divide by c_β r^{β−1} > 0: the sign of (c_α/c_β) r^{α−β} − 1 is that of the force.
    let ratio = ca / cb;
    let grid = log_grid(1e-6, 1e6, 241);
    scan_and_bisect(|r| Ok(ratio * r.powf(p.alpha - p.beta) - 1.0), &grid, ROOT_WIDTH)
}

/// The self-consistent shell radius r* for β = 2, together with the two
/// closed forms (1/(f'_{σ₁}(1)+1))^{1/(α−2)} and (2/(f'_{σ₁}(1)+2))^{1/(α−2)}.
///
/// Only `root` and `corrected_closed_form` agree with the steady shell
/// radius; `alternate_closed_form` is reported for comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RStar {
    pub root: f64,
    pub alternate_closed_form: f64,
    pub corrected_closed_form: f64,
    /// f'_{σ₁}(1).
    pub unit_slope: f64,
}

impl RStar {
    /// True when `alternate_closed_form` differs from the root by more than `tol`.
    pub fn alternate_form_flagged(&self, tol: f64) -> bool {
        (self.alternate_closed_form - self.root).abs() > tol
    }
}

pub fn r_star(p: &KernelParams) -> Result<RStar> {
    if p.beta != 2.0 || p.alpha <= 2.0 {
        return Err(Error::Domain(format!(
            "r_star needs beta = 2 < alpha, got ({}, {})",
            p.alpha, p.beta
        )));
    }
    let a = p.alpha;
    let slope_at = |radius: f64| -> Result<f64> {
        RadialMixture::shell(radius, p.dim)?.derivative(a, radius, 1, FINE_TOL)
    };
    let grid = log_grid(1e-3, 0.5f64.exp(), 64);
    let root = scan_and_bisect(slope_at, &grid, ROOT_WIDTH)?;
    let unit_slope = slope_at(1.0)?;
    Ok(RStar {
        root,
        alternate_closed_form: (2.0 / (unit_slope + 2.0)).powf(1.0 / (a - 2.0)),
        corrected_closed_form: (1.0 / (unit_slope + 1.0)).powf(1.0 / (a - 2.0)),
        unit_slope,
    })
}

/// The ring ω_{k,r}: k equal masses at r e^{2πim/k} in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingConfig {
    pub k: usize,
    pub radius: f64,
}

impl RingConfig {
    pub fn measure(&self) -> DiscreteMeasure {
        ring_measure(self)
    }
}

pub fn ring_measure(cfg: &RingConfig) -> DiscreteMeasure {
    assert!(cfg.k >= 1, "ring needs at least one atom");
    let coords = (0..cfg.k)
        .flat_map(|m| {
            let (s, c) = (2.0 * PI * m as f64 / cfg.k as f64).sin_cos();
            [cfg.radius * c, cfg.radius * s]
        })
        .collect();
    DiscreteMeasure::from_flat(2, coords, None).expect("ring coordinates are valid")
}

/// Radial force on the atom r e₁ of ω_{k,r}.
fn ring_radial_force(kernel: &Kernel, k: usize, r: f64) -> f64 {
    let w = 1.0 / k as f64;
    (1..k)
        .map(|m| {
            let (s, c) = (2.0 * PI * m as f64 / k as f64).sin_cos();
            let (dx, dy) = (r - r * c, -r * s);
            w * kernel.grad_factor_r2(dx * dx + dy * dy) * dx
        })
        .sum()
}

/// Radius at which the k-ring is steady, bracketed in [R/2, 2R] around the
/// steady shell radius R.
pub fn ring_steady_radius(k: usize, p: &KernelParams) -> Result<f64> {
    if k < 3 {
        return Err(Error::Domain(format!("ring_steady_radius needs k >= 3, got {k}")));
    }
    if p.dim != 2 {
        return Err(Error::Domain("rings live in the plane".into()));
    }
    let shell = shell_radius_rootfind(p)?;
    let kernel = Kernel::new(*p)?;
    bisect(|r| Ok(ring_radial_force(&kernel, k, r)), 0.5 * shell, 2.0 * shell, ROOT_WIDTH)
}

/// A regular n-simplex with the given edge length, centered at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexConfig {
    pub dim: usize,
    pub edge: f64,
}

impl SimplexConfig {
    pub fn unit(dim: usize) -> Self {
        Self { dim, edge: 1.0 }
    }

    pub fn circumradius(&self) -> f64 {
        let n = self.dim as f64;
        self.edge * (n / (2.0 * n + 2.0)).sqrt()
    }

    pub fn measure(&self) -> DiscreteMeasure {
        assert!(self.dim >= 1, "simplex needs n >= 1");
        let n = self.dim;
        let nf = n as f64;
        let s = self.edge / 2f64.sqrt();
        let apex = s * (1.0 - (nf + 1.0).sqrt()) / nf;
        let mut coords = vec![apex; n];
        for i in 0..n {
            let mut v = vec![0.0; n];
            v[i] = s;
            coords.extend(v);
        }
        DiscreteMeasure::from_flat(n, coords, None)
            .expect("simplex coordinates are valid")
            .centered()
    }
}

/// Uniform measure on the vertices of the unit-edge n-simplex.
pub fn simplex_measure(n: usize) -> DiscreteMeasure {
    SimplexConfig::unit(n).measure()
}

/// Uniform measure on ±R e_i, i = 1..n.
pub fn cross_polytope_measure(n: usize, radius: f64) -> DiscreteMeasure {
    assert!(n >= 1, "cross-polytope needs n >= 1");
    let mut coords = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut v = vec![0.0; n];
            v[i] = sign * radius;
            coords.extend(v);
        }
    }
    DiscreteMeasure::from_flat(n, coords, None).expect("cross-polytope coordinates are valid")
}

/// `count` quasi-uniform unit vectors in R^n: 2 alternating signs for n = 1,
/// equally spaced angles for n = 2, a Fibonacci lattice for n = 3 and
/// seeded uniform samples otherwise.
pub(crate) fn sphere_directions(n: usize, count: usize, seed: u64) -> Vec<f64> {
    match n {
        1 => (0..count).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect(),
        2 => (0..count)
            .flat_map(|m| {
                let (s, c) = (2.0 * PI * m as f64 / count as f64).sin_cos();
                [c, s]
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .flat_map(|i| {
                    let z = 1.0 - (2 * i + 1) as f64 / count as f64;
                    let rho = (1.0 - z * z).max(0.0).sqrt();
                    let (s, c) = (golden * i as f64).sin_cos();
                    [rho * c, rho * s, z]
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(n * count);
            while out.len() < n * count {
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let r2: f64 = v.iter().map(|x| x * x).sum();
                if r2 > 1e-6 && r2 <= 1.0 {
                    let r = r2.sqrt();
                    out.extend(v.iter().map(|x| x / r));
                }
            }
            out
        }
    }
}

/// A uniform `count`-atom approximation of σ_R in R^n, centered.
pub fn shell_proxy(radius: f64, n: usize, count: usize) -> Result<DiscreteMeasure> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidMeasure("shell proxy needs n >= 1 and count >= 1".into()));
    }
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(Error::InvalidMeasure(format!("shell radius {radius}")));
    }
    if n == 1 && count % 2 == 1 {
        return Err(Error::InvalidMeasure("a one-dimensional shell proxy needs an even count".into()));
    }
    if n == 2 {
        return Ok(ring_measure(&RingConfig { k: count, radius }));
    }
    let coords = sphere_directions(n, count, 0x5eed).into_iter().map(|x| radius * x).collect();
    Ok(DiscreteMeasure::from_flat(n, coords, None)?.centered())
}

/// Summary of how far a measure is from satisfying the Euler–Lagrange
/// conditions of the interaction energy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ElResidual {
    /// max over atoms of |∇V_μ|.
    pub grad_max: f64,
    /// max − min of V_μ over atoms.
    pub value_spread: f64,
    /// min of V_μ on the probe grid minus max of V_μ over atoms.
    pub exterior_min_gap: f64,
}

/// Probe points at radii (i+1)·2ρ/64 around the center of mass, where ρ is
/// the support radius, along 64 directions (±1 when n = 1).
fn probe_points(m: &DiscreteMeasure) -> Vec<f64> {
    let n = m.dim();
    let center = m.center_of_mass();
    let mut reach = m.support_radius();
    if reach == 0.0 {
        reach = 1.0;
    }
    let dirs_count = if n == 1 { 2 } else { PROBE_COUNT };
    let dirs = sphere_directions(n, dirs_count, 0x9e0b);
    let mut out = Vec::with_capacity(PROBE_COUNT * dirs_count * n);
    for i in 0..PROBE_COUNT {
        let r = (i + 1) as f64 * 2.0 * reach / PROBE_COUNT as f64;
        for d in dirs.chunks_exact(n) {
            out.extend(d.iter().zip(&center.0).map(|(u, c)| c + r * u));
        }
    }
    out
}

pub fn euler_lagrange_residual(kernel: &Kernel, m: &DiscreteMeasure) -> Result<ElResidual> {
    let grads = kernel.atom_gradients(m)?;
    let grad_max = grads
        .chunks_exact(m.dim())
        .map(|g| g.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let values: Vec<f64> = (0..m.len())
        .into_par_iter()
        .map(|i| kernel.potential_field(m, m.point(i)))
        .collect::<Result<_>>()?;
    let vmax = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let vmin = values.iter().copied().fold(f64::INFINITY, f64::min);
    let probes = probe_points(m);
    let probe_min = probes
        .par_chunks(m.dim())
        .map(|x| kernel.potential_field(m, x))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(ElResidual { grad_max, value_spread: vmax - vmin, exterior_min_gap: probe_min - vmax })
}
