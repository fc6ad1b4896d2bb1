//! Lyapunov stability of the minimizing shell: perturb a shell proxy by a
//! prescribed d_α distance, run the gradient flow and track how far the
//! trajectory strays from the minimizer family.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{evolve, FlowOptions};
use crate::equilibria::shell_proxy;
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::potential::Kernel;
use crate::roots::bisect;
use crate::special::shell_radius_closed_form;
use crate::transport::distance_to_minimizer;

/// Settings for [`lyapunov_sweep`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LyapunovOptions {
    pub particles: usize,
    pub deltas: Vec<f64>,
    pub seed: u64,
    pub t_end: f64,
    pub dt: f64,
    pub residual_tol: f64,
}

impl LyapunovOptions {
    pub fn new(particles: usize, deltas: Vec<f64>, seed: u64) -> Self {
        Self { particles, deltas, seed, t_end: 40.0, dt: 0.05, residual_tol: 1e-8 }
    }
}

/// Outcome for one perturbation size δ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LyapunovPoint {
    pub delta: f64,
    /// d_α from the perturbed start to the minimizer family.
    pub initial_distance: f64,
    /// Largest d_α to the minimizer family over all accepted steps.
    pub sup_distance: f64,
    pub final_distance: f64,
    /// 5δ + 2 sin(π/(2N)) R: the allowed excursion plus the chord offset
    /// between an N-ring and its rotated proxy.
    pub bound: f64,
    pub within_bound: bool,
    pub final_residual: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LyapunovReport {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub particles: usize,
    pub shell_radius: f64,
    pub points: Vec<LyapunovPoint>,
    /// Whether sup_distance is nondecreasing in δ.
    pub envelope_monotone: bool,
}

impl LyapunovReport {
    pub fn all_within_bound(&self) -> bool {
        self.points.iter().all(|p| p.within_bound)
    }
}

/// A seeded displacement field with zero mean, one vector per atom.
fn displacement_field(m: &DiscreteMeasure, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = m.dim();
    let mut v: Vec<f64> = (0..m.coords().len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    for k in 0..d {
        let mean = v.iter().skip(k).step_by(d).sum::<f64>() / m.len() as f64;
        v.iter_mut().skip(k).step_by(d).for_each(|x| *x -= mean);
    }
    v
}

fn displaced(m: &DiscreteMeasure, v: &[f64], lambda: f64) -> Result<DiscreteMeasure> {
    let coords = m.coords().iter().zip(v).map(|(x, dx)| x + lambda * dx).collect();
    DiscreteMeasure::from_flat(m.dim(), coords, None)
}

/// Move `base` along a seeded field until its distance to the minimizer
/// family, in d_α, equals `delta`.
pub fn perturb_to_distance(base: &DiscreteMeasure, kernel: &Kernel, delta: f64, seed: u64) -> Result<DiscreteMeasure> {
    let alpha = kernel.alpha();
    let v = displacement_field(base, seed);
    let gap = |lambda: f64| -> Result<f64> { Ok(distance_to_minimizer(&displaced(base, &v, lambda)?, kernel, alpha)? - delta) };
    let mut hi = delta;
    while gap(hi)? < 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Bracketing("perturbation never reaches the requested distance".into()));
        }
    }
    let lambda = bisect(gap, 0.0, hi, 1e-14 * hi)?;
    displaced(base, &v, lambda)
}

/// For each δ, start d_α-distance δ from the shell proxy, evolve, and
/// record the supremum of the distance to the minimizer family.
pub fn lyapunov_sweep(kernel: &Kernel, opts: &LyapunovOptions) -> Result<LyapunovReport> {
    let p = *kernel.params();
    if !p.in_shell_window() {
        return Err(Error::Unsupported("the sweep needs a kernel whose minimizer is a shell".into()));
    }
    let alpha = p.alpha;
    let radius = shell_radius_closed_form(&p)?;
    let base = shell_proxy(radius, p.dim, opts.particles)?;
    let chord = 2.0 * (std::f64::consts::PI / (2.0 * opts.particles as f64)).sin() * radius;
    let flow = FlowOptions::new(opts.t_end, opts.dt, opts.residual_tol);
    let mut points = Vec::with_capacity(opts.deltas.len());
    for (i, &delta) in opts.deltas.iter().enumerate() {
        let start = perturb_to_distance(&base, kernel, delta, opts.seed.wrapping_add(i as u64))?;
        let traj = evolve(&start, kernel, &flow)?;
        let dists: Vec<f64> = traj
            .states
            .iter()
            .map(|s| distance_to_minimizer(&s.measure, kernel, alpha))
            .collect::<Result<_>>()?;
        let sup_distance = dists.iter().copied().fold(0.0, f64::max);
        let bound = 5.0 * delta + chord;
        points.push(LyapunovPoint {
            delta,
            initial_distance: dists[0],
            sup_distance,
            final_distance: *dists.last().expect("trajectory is nonempty"),
            bound,
            within_bound: sup_distance < bound,
            final_residual: traj.last().force_residual,
            steps: traj.accepted_steps,
        });
    }
    let mut order: Vec<&LyapunovPoint> = points.iter().collect();
    order.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    let envelope_monotone = order.windows(2).all(|w| w[1].sup_distance >= w[0].sup_distance);
    Ok(LyapunovReport {
        alpha,
        beta: p.beta,
        n: p.dim,
        particles: opts.particles,
        shell_radius: radius,
        points,
        envelope_monotone,
    })
}
