//! Particle gradient flow ẋ_i = −∇V_μ(x_i) for the aggregation equation,
//! integrated with RK4 under an energy watchdog.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::potential::Kernel;
use crate::special::KernelParams;

/// A step that raises the energy by more than this is rejected.
pub const WATCHDOG_TOL: f64 = 1e-10;
/// Smallest admissible time step.
pub const MIN_DT: f64 = 1e-15;

/// Particle configuration at one instant.
#[derive(Clone, Debug, Serialize)]
pub struct FlowState {
    pub measure: DiscreteMeasure,
    pub time: f64,
    pub energy: f64,
    /// max_i |∇V_μ(x_i)|.
    pub force_residual: f64,
}

impl FlowState {
    pub fn new(measure: DiscreteMeasure, kernel: &Kernel) -> Result<Self> {
        Self::at_time(measure, kernel, 0.0)
    }

    fn at_time(measure: DiscreteMeasure, kernel: &Kernel, time: f64) -> Result<Self> {
        let grads = kernel.atom_gradients(&measure)?;
        let force_residual = max_norm(&grads, measure.dim());
        let energy = kernel.interaction_energy(&measure)?;
        Ok(Self { measure, time, energy, force_residual })
    }
}

fn max_norm(flat: &[f64], dim: usize) -> f64 {
    flat.chunks_exact(dim)
        .map(|g| g.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

/// Step-size policy of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepPolicy {
    pub dt0: f64,
    pub watchdog_tol: f64,
    pub min_dt: f64,
    /// Record every `stride`-th accepted step.
    pub stride: usize,
}

/// Options for [`evolve`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowOptions {
    pub t_end: f64,
    pub dt0: f64,
    pub residual_tol: f64,
    pub stride: usize,
    /// Hard cap on accepted steps.
    pub max_steps: usize,
}

impl FlowOptions {
    pub fn new(t_end: f64, dt0: f64, residual_tol: f64) -> Self {
        Self { t_end, dt0, residual_tol, stride: 1, max_steps: usize::MAX }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride.max(1);
        self
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }
}

/// Recorded states of a flow plus per-step bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct FlowTrajectory {
    pub states: Vec<FlowState>,
    pub params: KernelParams,
    pub policy: StepPolicy,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Largest energy change E_{k+1} − E_k over accepted steps.
    pub max_energy_increase: f64,
    /// Largest |center of mass − initial center of mass| over accepted steps.
    pub max_center_drift: f64,
}

impl FlowTrajectory {
    pub fn first(&self) -> &FlowState {
        &self.states[0]
    }

    pub fn last(&self) -> &FlowState {
        self.states.last().expect("a trajectory holds at least one state")
    }

    /// CSV with header `time,energy,force_residual`, one row per recorded state.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("time,energy,force_residual\n");
        for st in &self.states {
            let _ = writeln!(s, "{},{},{}", st.time, st.energy, st.force_residual);
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Write each recorded measure as `state_00000.json`, ... into `dir`.
    pub fn write_snapshots(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        for (i, st) in self.states.iter().enumerate() {
            st.measure.write_json(dir.join(format!("state_{i:05}.json")))?;
        }
        Ok(())
    }
}

/// Particle velocities −∇V_μ(x_i) at the given positions.
fn velocity(kernel: &Kernel, dim: usize, coords: &[f64], weights: &[f64], out: &mut [f64]) -> Result<()> {
    kernel.atom_gradients_flat(dim, coords, weights, out)?;
    for v in out.iter_mut() {
        *v = -*v;
    }
    Ok(())
}

/// One classical RK4 step of the particle ODE without any acceptance test.
fn rk4(kernel: &Kernel, m: &DiscreteMeasure, dt: f64) -> Result<Vec<f64>> {
    let (dim, x, w) = (m.dim(), m.coords(), m.weights());
    let len = x.len();
    let mut k1 = vec![0.0; len];
    let mut k2 = vec![0.0; len];
    let mut k3 = vec![0.0; len];
    let mut k4 = vec![0.0; len];
    let mut tmp = vec![0.0; len];
    velocity(kernel, dim, x, w, &mut k1)?;
    for i in 0..len {
        tmp[i] = x[i] + 0.5 * dt * k1[i];
    }
    velocity(kernel, dim, &tmp, w, &mut k2)?;
    for i in 0..len {
        tmp[i] = x[i] + 0.5 * dt * k2[i];
    }
    velocity(kernel, dim, &tmp, w, &mut k3)?;
    for i in 0..len {
        tmp[i] = x[i] + dt * k3[i];
    }
    velocity(kernel, dim, &tmp, w, &mut k4)?;
    Ok((0..len)
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Try `dt`, halving until the energy watchdog accepts. Returns the new
/// state, the step actually taken and the number of rejections.
fn watched_step(s: &FlowState, kernel: &Kernel, dt: f64) -> Result<(FlowState, f64, usize)> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    let mut h = dt;
    let mut rejected = 0;
    loop {
        if h < MIN_DT {
            return Err(Error::StepCollapse { dt: h });
        }
        let coords = rk4(kernel, &s.measure, h)?;
        let m = DiscreteMeasure::from_flat(s.measure.dim(), coords, Some(s.measure.weights().to_vec()))?;
        let energy = kernel.interaction_energy(&m)?;
        if energy.is_finite() && energy <= s.energy + WATCHDOG_TOL {
            let grads = kernel.atom_gradients(&m)?;
            let force_residual = max_norm(&grads, m.dim());
            let next = FlowState { measure: m, time: s.time + h, energy, force_residual };
            return Ok((next, h, rejected));
        }
        rejected += 1;
        h *= 0.5;
    }
}

/// One RK4 step under the energy watchdog.
pub fn step(s: &FlowState, kernel: &Kernel, dt: f64) -> Result<FlowState> {
    watched_step(s, kernel, dt).map(|(next, _, _)| next)
}

/// Integrate until `t_end` or until the force residual drops below
/// `residual_tol`. After a rejection the step regrows by doubling up to `dt0`.
pub fn evolve(m: &DiscreteMeasure, kernel: &Kernel, opts: &FlowOptions) -> Result<FlowTrajectory> {
    if !(opts.dt0 > 0.0) || !(opts.t_end >= 0.0) {
        return Err(Error::Domain("need dt0 > 0 and t_end >= 0".into()));
    }
    let stride = opts.stride.max(1);
    let mut state = FlowState::new(m.clone(), kernel)?;
    let c0 = state.measure.center_of_mass();
    let mut traj = FlowTrajectory {
        states: vec![state.clone()],
        params: *kernel.params(),
        policy: StepPolicy { dt0: opts.dt0, watchdog_tol: WATCHDOG_TOL, min_dt: MIN_DT, stride },
        accepted_steps: 0,
        rejected_steps: 0,
        max_energy_increase: f64::NEG_INFINITY,
        max_center_drift: 0.0,
    };
    let mut dt = opts.dt0;
    let mut last_recorded = true;
    while state.force_residual >= opts.residual_tol
        && state.time < opts.t_end
        && traj.accepted_steps < opts.max_steps
    {
        let h = dt.min(opts.t_end - state.time);
        let (next, taken, rejected) = watched_step(&state, kernel, h)?;
        traj.rejected_steps += rejected;
        traj.accepted_steps += 1;
        traj.max_energy_increase = traj.max_energy_increase.max(next.energy - state.energy);
        let c = next.measure.center_of_mass();
        let drift = c.0.iter().zip(&c0.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        traj.max_center_drift = traj.max_center_drift.max(drift);
        dt = if rejected > 0 { taken } else { (2.0 * dt).min(opts.dt0) };
        state = next;
        last_recorded = traj.accepted_steps % stride == 0;
        if last_recorded {
            traj.states.push(state.clone());
        }
    }
    if !last_recorded {
        traj.states.push(state);
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{ring_measure, ring_steady_radius, RingConfig};
    use std::f64::consts::PI;

    fn radii(m: &DiscreteMeasure) -> Vec<f64> {
        let c = m.center_of_mass();
        m.points()
            .map(|x| x.iter().zip(&c.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
            .collect()
    }

    #[test]
    fn steady_ring_does_not_move() {
        let k = Kernel::from_exponents(4.0, 2.0, 2).unwrap();
        let ring = ring_measure(&RingConfig { k: 4, radius: 1.0 / 3f64.sqrt() });
        let s = FlowState::new(ring.clone(), &k).unwrap();
        assert!(s.force_residual < 1e-12);
        let next = step(&s, &k, 0.01).unwrap();
        assert!(next.force_residual < 1e-12);
        for (a, b) in next.measure.coords().iter().zip(ring.coords()) {
            assert!((a - b).abs() < 1e-12);
        }
        let traj = evolve(&ring, &k, &FlowOptions::new(1.0, 0.01, 1e-10)).unwrap();
        assert_eq!(traj.states.len(), 1);
    }

    #[test]
    fn two_particles_relax_to_half() {
        let k = Kernel::from_exponents(4.0, 2.0, 1).unwrap();
        let m = DiscreteMeasure::uniform(1, vec![vec![-1.0], vec![1.0]]).unwrap();
        let traj = evolve(&m, &k, &FlowOptions::new(50.0, 0.01, 1e-12)).unwrap();
        let xs: Vec<f64> = traj.states.iter().map(|s| s.measure.point(1)[0]).collect();
        assert!(xs.windows(2).all(|w| w[1] <= w[0]));
        assert!((xs.last().unwrap() - 0.5).abs() < 1e-10);
        let c = traj.last().measure.center_of_mass();
        assert!(c.0[0].abs() < 1e-13);
    }

    #[test]
    fn circle_relaxes_to_ring_radius() {
        let p = KernelParams::new(3.0, 2.0, 2).unwrap();
        let k = Kernel::new(p).unwrap();
        let m = ring_measure(&RingConfig { k: 64, radius: 0.9 });
        let traj = evolve(&m, &k, &FlowOptions::new(200.0, 0.05, 1e-8).with_stride(10)).unwrap();
        let last = traj.last();
        assert!(last.force_residual < 1e-8);
        let target = ring_steady_radius(64, &p).unwrap();
        for r in radii(&last.measure) {
            assert!((r - target).abs() < 5e-3);
        }
        assert!((target - 3.0 * PI / 16.0).abs() < 5e-3);
        assert!(traj.max_energy_increase <= WATCHDOG_TOL);
        assert!(traj.max_center_drift < 1e-10 * traj.accepted_steps as f64);
    }

    #[test]
    fn steady_state_persists_for_many_steps() {
        let k = Kernel::from_exponents(4.0, 2.0, 2).unwrap();
        let ring = ring_measure(&RingConfig { k: 6, radius: 1.0 / 3f64.sqrt() });
        let mut s = FlowState::new(ring.clone(), &k).unwrap();
        for _ in 0..1000 {
            s = step(&s, &k, 1e-3).unwrap();
        }
        for (a, b) in s.measure.coords().iter().zip(ring.coords()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn concentric_rings_merge() {
        let k = Kernel::from_exponents(3.0, 2.0, 2).unwrap();
        let inner = ring_measure(&RingConfig { k: 16, radius: 0.3 });
        let outer = ring_measure(&RingConfig { k: 16, radius: 0.9 });
        let rot = std::f64::consts::PI / 16.0;
        let (s, c) = rot.sin_cos();
        let outer = outer.linear_map(&nalgebra::DMatrix::from_row_slice(2, 2, &[c, -s, s, c]));
        let m = inner.mixture(&outer, 0.5).unwrap();
        let traj = evolve(&m, &k, &FlowOptions::new(200.0, 0.05, 1e-9).with_stride(100)).unwrap();
        for r in radii(&traj.last().measure) {
            assert!((r - 3.0 * PI / 16.0).abs() < 1e-2, "{r}");
        }
    }

    #[test]
    fn rejects_nonpositive_dt() {
        let k = Kernel::from_exponents(4.0, 2.0, 1).unwrap();
        let m = DiscreteMeasure::uniform(1, vec![vec![-1.0], vec![1.0]]).unwrap();
        let s = FlowState::new(m, &k).unwrap();
        assert!(step(&s, &k, 0.0).is_err());
    }

    #[test]
    fn csv_export() {
        let k = Kernel::from_exponents(4.0, 2.0, 1).unwrap();
        let m = DiscreteMeasure::uniform(1, vec![vec![-1.0], vec![1.0]]).unwrap();
        let traj = evolve(&m, &k, &FlowOptions::new(0.1, 0.05, 0.0)).unwrap();
        let csv = traj.to_csv();
        assert!(csv.starts_with("time,energy,force_residual\n"));
        assert_eq!(csv.lines().count(), traj.states.len() + 1);
    }
}
