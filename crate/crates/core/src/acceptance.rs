//! The acceptance suite: eleven end-to-end checks with fixed tolerances,
//! seeds and runtime limits. Used by the `verify` subcommand and by the
//! `acceptance` integration test.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convexity::{f_alpha_form, fourier_side, random_neutral, reference_neutral_1d, sign_classify, trial_rng, NeutralMeasure};
use crate::dynamics::{evolve, FlowOptions};
use crate::equilibria::{
    cross_polytope_measure, euler_lagrange_residual, ring_measure, ring_steady_radius, shell_proxy, shell_radius_rootfind,
    simplex_measure, RingConfig,
};
use crate::error::Result;
use crate::measure::DiscreteMeasure;
use crate::potential::Kernel;
use crate::radial::{g_alpha, g_capital, RadialMixture};
use crate::special::{shell_radius_closed_form, KernelParams};
use crate::stability::{lyapunov_sweep, LyapunovOptions};
use crate::transport::{assignment_coupling, optimal_coupling, wasserstein_inf};

/// Seed shared by every randomized criterion.
pub const SUITE_SEED: u64 = 20_240_917;
const QUAD_TOL: f64 = 1e-12;

/// Result of one criterion.
#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    /// Measured quantities behind the verdict.
    pub measured: String,
    pub elapsed_s: f64,
    pub limit_s: f64,
}

impl Outcome {
    /// One summary line, e.g. `PASS  1 radius consistency  (0.01 s / 5 s)  ...`.
    pub fn line(&self) -> String {
        format!(
            "{}  {:>2} {:<28} ({:.2} s / {} s)  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_s,
            self.limit_s,
            self.measured
        )
    }
}

/// Names and runtime limits of the criteria, indexed from 1.
pub const CRITERIA: [(&str, f64); 11] = [
    ("radius consistency", 5.0),
    ("g and G identities", 5.0),
    ("third derivative positivity", 30.0),
    ("alpha = 4 degeneracy", 5.0),
    ("convexity signs", 10.0),
    ("fourier identity", 30.0),
    ("ring steady states", 20.0),
    ("particle dynamics", 60.0),
    ("one-dimensional minimizer", 5.0),
    ("lyapunov sweep", 120.0),
    ("transport correctness", 20.0),
];

/// Run criterion `id` (1..=11).
pub fn run_criterion(id: usize) -> Outcome {
    assert!((1..=CRITERIA.len()).contains(&id), "criteria are numbered 1 to 11");
    let (name, limit_s) = CRITERIA[id - 1];
    let start = Instant::now();
    let result = match id {
        1 => radius_consistency(),
        2 => g_identities(),
        3 => third_derivative_positivity(),
        4 => alpha_four_degeneracy(),
        5 => convexity_signs(),
        6 => fourier_identity(),
        7 => ring_steady_states(),
        8 => particle_dynamics(),
        9 => one_dimensional_minimizer(),
        10 => lyapunov(),
        _ => transport_correctness(),
    };
    let elapsed_s = start.elapsed().as_secs_f64();
    let (ok, measured) = match result {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let passed = ok && elapsed_s < limit_s;
    let measured = if ok && !passed { format!("{measured}; over time limit") } else { measured };
    Outcome { id, name, passed, measured, elapsed_s, limit_s }
}

/// Run the whole suite in order.
pub fn run_all() -> Vec<Outcome> {
    (1..=CRITERIA.len()).map(run_criterion).collect()
}

type Check = Result<(bool, String)>;

fn params(a: f64, b: f64, n: usize) -> Result<KernelParams> {
    KernelParams::new(a, b, n)
}

fn radius_consistency() -> Check {
    let mut closed_err = 0.0f64;
    for n in 1..=8 {
        let nf = n as f64;
        let r = shell_radius_closed_form(&params(4.0, 2.0, n)?)?;
        closed_err = closed_err.max((r - (nf / (2.0 * nf + 2.0)).sqrt()).abs());
    }
    let mut root_err = 0.0f64;
    for n in [2, 3] {
        for a in [2.5, 3.0, 3.5, 4.0] {
            let p = params(a, 2.0, n)?;
            root_err = root_err.max((shell_radius_rootfind(&p)? - shell_radius_closed_form(&p)?).abs());
        }
    }
    let p = params(3.0, 2.0, 2)?;
    let e32 = (shell_radius_closed_form(&p)? - 3.0 * PI / 16.0)
        .abs()
        .max((shell_radius_rootfind(&p)? - 3.0 * PI / 16.0).abs());
    Ok((
        closed_err < 1e-12 && root_err < 1e-8 && e32 < 1e-8,
        format!("closed-form error {closed_err:.2e}, root vs closed {root_err:.2e}, (3,2,2) vs 3pi/16 {e32:.2e}"),
    ))
}

fn g_identities() -> Check {
    let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let mut planar = 0.0f64;
    let mut spatial_min = f64::INFINITY;
    for &r in &grid {
        planar = planar.max(g_alpha(2.0, r, 2, QUAD_TOL)?.abs()).max(g_capital(2.0, r, 2, QUAD_TOL)?.abs());
        for a in [2.0, 3.0] {
            spatial_min = spatial_min.min(g_alpha(a, r, 3, QUAD_TOL)?).min(g_capital(a, r, 3, QUAD_TOL)?);
        }
    }
    Ok((
        planar < 1e-9 && spatial_min > 0.0,
        format!("max |g_2|,|G_2| (n=2) {planar:.2e}; min g,G (n=3) {spatial_min:.4e}"),
    ))
}

/// Fourth-order central difference of f'' at r with step capped by the
/// distance to the nearest shell, where f''' is only Hölder continuous.
fn difference_of_f2(mix: &RadialMixture, alpha: f64, r: f64) -> Result<f64> {
    let near = mix.radii().iter().map(|s| (r - s).abs()).fold(f64::INFINITY, f64::min);
    let h = 1e-4f64.min(near / 40.0);
    let d = |h: f64| -> Result<f64> {
        Ok((mix.derivative(alpha, r + h, 2, QUAD_TOL)? - mix.derivative(alpha, r - h, 2, QUAD_TOL)?) / (2.0 * h))
    };
    Ok((4.0 * d(0.5 * h)? - d(h)?) / 3.0)
}

fn random_mixture(n: usize, rng: &mut ChaCha8Rng) -> Result<RadialMixture> {
    let radii: Vec<f64> = (0..5).map(|_| rng.gen_range(0.1..2.0)).collect();
    let raw: Vec<f64> = (0..5).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    RadialMixture::new(radii, raw.iter().map(|w| w / total).collect(), n)
}

fn third_derivative_positivity() -> Check {
    let grid: Vec<f64> = (0..200).map(|i| 0.05 + 2.95 * i as f64 / 199.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let mut f3_min = f64::INFINITY;
    let mut fd_err = 0.0f64;
    let mut id_err = 0.0f64;
    for n in [2, 3] {
        for a in [2.5, 3.0, 3.5] {
            let unit = RadialMixture::shell(1.0, n)?;
            let mixes = [random_mixture(n, &mut rng)?, random_mixture(n, &mut rng)?];
            for &r in &grid {
                let f3 = unit.derivative(a, r, 3, QUAD_TOL)?;
                f3_min = f3_min.min(f3);
                fd_err = fd_err.max(((difference_of_f2(&unit, a, r)? - f3) / f3).abs());
                let rhs = (a - 1.0) * g_alpha(a, r, n, QUAD_TOL)? + (4.0 - a) * g_capital(a, r, n, QUAD_TOL)?;
                id_err = id_err.max((f3 / (a - 2.0) - rhs).abs());
                for mix in &mixes {
                    f3_min = f3_min.min(mix.derivative(a, r, 3, QUAD_TOL)?);
                }
            }
        }
    }
    Ok((
        f3_min > 0.0 && fd_err < 1e-5 && id_err < 1e-8,
        format!("min f''' {f3_min:.4e}, difference rel. error {fd_err:.2e}, identity error {id_err:.2e}"),
    ))
}

fn alpha_four_degeneracy() -> Check {
    let mut exact_err = 0.0f64;
    let mut proxy_err = 0.0f64;
    for n in [2, 3] {
        let nf = n as f64;
        let k = Kernel::from_exponents(4.0, 2.0, n)?;
        let target = -nf / (8.0 * (nf + 1.0));
        let radius = (nf / (2.0 * nf + 2.0)).sqrt();
        exact_err = exact_err
            .max((k.interaction_energy(&simplex_measure(n))? - target).abs())
            .max((k.interaction_energy(&cross_polytope_measure(n, radius))? - target).abs());
        proxy_err = proxy_err.max((k.interaction_energy(&shell_proxy(radius, n, 1024)?)? - target).abs());
    }
    let r = 1.0 / 3f64.sqrt();
    let rho = NeutralMeasure::difference(&ring_measure(&RingConfig { k: 3, radius: r }), &ring_measure(&RingConfig { k: 4, radius: r }))?;
    let f4 = f_alpha_form(&rho, 4.0)?;
    Ok((
        exact_err < 1e-12 && proxy_err < 1e-5 && f4.abs() < 1e-12,
        format!("simplex/cross-polytope error {exact_err:.2e}, proxy error {proxy_err:.2e}, F_4(triangle - square) {f4:.2e}"),
    ))
}

fn convexity_signs() -> Check {
    let mut ok = true;
    let mut pos_min = f64::INFINITY;
    let mut neg_max = f64::NEG_INFINITY;
    let mut two_abs = 0.0f64;
    let mut four_min = f64::INFINITY;
    for n in 1..=3 {
        for a in [2.5, 3.0, 3.5] {
            let r = sign_classify(a, n, 200, SUITE_SEED)?;
            pos_min = pos_min.min(r.min);
        }
        for a in [0.5, 1.0, 1.5] {
            let r = sign_classify(a, n, 200, SUITE_SEED)?;
            neg_max = neg_max.max(r.max);
        }
        let r = sign_classify(2.0, n, 200, SUITE_SEED)?;
        two_abs = two_abs.max(r.min.abs()).max(r.max.abs());
        four_min = four_min.min(sign_classify(4.0, n, 200, SUITE_SEED)?.min);
    }
    ok &= pos_min > 0.0 && neg_max < 0.0 && two_abs < 1e-12 && four_min >= -1e-12;
    let rho = reference_neutral_1d();
    let hand = [(3.0, 1.0), (1.0, -0.5), (4.0, 3.375)];
    let mut hand_err = 0.0f64;
    for (a, want) in hand {
        hand_err = hand_err.max((f_alpha_form(&rho, a)? - want).abs());
    }
    ok &= hand_err < 1e-12;
    Ok((
        ok,
        format!(
            "min F (2<a<4) {pos_min:.3e}, max F (a<2) {neg_max:.3e}, max |F_2| {two_abs:.2e}, min F_4 {four_min:.3e}, hand values error {hand_err:.2e}"
        ),
    ))
}

fn fourier_identity() -> Check {
    let mut worst = 0.0f64;
    for t in 0..20 {
        let rho = random_neutral(1, &mut trial_rng(SUITE_SEED, t));
        for a in [1.0, 2.5, 3.0, 3.5] {
            let direct = f_alpha_form(&rho, a)?;
            let spectral = fourier_side(&rho, a)?;
            worst = worst.max(((spectral - direct) / direct).abs());
        }
    }
    Ok((worst < 1e-4, format!("max relative mismatch {worst:.2e}")))
}

fn ring_steady_states() -> Check {
    let p42 = params(4.0, 2.0, 2)?;
    let target = 1.0 / 3f64.sqrt();
    let k42 = Kernel::new(p42)?;
    let mut err42 = 0.0f64;
    let mut grad42 = 0.0f64;
    let mut gap42 = 0.0f64;
    for k in 3..=12 {
        let r = ring_steady_radius(k, &p42)?;
        err42 = err42.max((r - target).abs());
        let res = euler_lagrange_residual(&k42, &ring_measure(&RingConfig { k, radius: r }))?;
        grad42 = grad42.max(res.grad_max);
        gap42 = gap42.max(res.exterior_min_gap.abs());
    }
    let p32 = params(3.0, 2.0, 2)?;
    let k32 = Kernel::new(p32)?;
    let shell = 3.0 * PI / 16.0;
    let mut errs = Vec::new();
    let mut grad32 = 0.0f64;
    let mut gaps = Vec::new();
    for k in [8, 16, 32] {
        let r = ring_steady_radius(k, &p32)?;
        errs.push((r - shell).abs());
        let res = euler_lagrange_residual(&k32, &ring_measure(&RingConfig { k, radius: r }))?;
        grad32 = grad32.max(res.grad_max);
        gaps.push(res.exterior_min_gap);
    }
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    let ok = err42 < 1e-10 && grad42 < 1e-10 && decreasing && grad32 < 1e-10 && gaps.iter().all(|g| *g < 0.0);
    Ok((
        ok,
        format!(
            "(4,2) radius error {err42:.2e}, grad {grad42:.1e}, |gap| {gap42:.1e}; (3,2) |R_k - 3pi/16| {:.2e} {:.2e} {:.2e}, grad {grad32:.1e}, gaps {:.2e} {:.2e} {:.2e}",
            errs[0], errs[1], errs[2], gaps[0], gaps[1], gaps[2]
        ),
    ))
}

fn particle_dynamics() -> Check {
    let p = params(3.0, 2.0, 2)?;
    let k = Kernel::new(p)?;
    let start = ring_measure(&RingConfig { k: 64, radius: 0.9 });
    let traj = evolve(&start, &k, &FlowOptions::new(1000.0, 0.05, 1e-8).with_stride(1000))?;
    let target = ring_steady_radius(64, &p)?;
    let last = traj.last();
    let c = last.measure.center_of_mass();
    let radius_err = last
        .measure
        .points()
        .map(|x| ((x[0] - c.0[0]).hypot(x[1] - c.0[1]) - target).abs())
        .fold(0.0, f64::max);
    let mut ok = last.force_residual < 1e-8
        && radius_err < 5e-3
        && traj.max_energy_increase <= 0.0
        && traj.max_center_drift < 1e-9;
    let summary = format!(
        "ring: residual {:.1e}, radius error {radius_err:.2e}, max energy change {:.1e}, drift {:.1e}",
        last.force_residual, traj.max_energy_increase, traj.max_center_drift
    );

    let k35 = Kernel::from_exponents(3.5, 2.0, 2)?;
    let bound = 0.5f64.exp();
    let mut widest = 0.0f64;
    for s in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED + s);
        let coords = (0..400).map(|_| rng.gen_range(0.0..1.0)).collect();
        let cloud = DiscreteMeasure::from_flat(2, coords, None)?;
        let traj = evolve(&cloud, &k35, &FlowOptions::new(20.0, 0.05, 1e-8).with_stride(1000))?;
        ok &= traj.max_energy_increase <= 0.0 && traj.max_center_drift < 1e-9;
        widest = widest.max(traj.last().measure.support_diameter());
    }
    ok &= widest <= bound;
    Ok((ok, format!("{summary}; clouds: max diameter {widest:.4} <= {bound:.4}")))
}

fn one_dimensional_minimizer() -> Check {
    let k = Kernel::from_exponents(3.5, 2.0, 1)?;
    let mu_star = DiscreteMeasure::uniform(1, vec![vec![-0.5], vec![0.5]])?;
    let res = euler_lagrange_residual(&k, &mu_star)?;
    let e0 = k.interaction_energy(&mu_star)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let mut min_gain = f64::INFINITY;
    for _ in 0..20 {
        // Split each half-mass into mirrored sub-atoms moved by at most 0.05.
        let parts = rng.gen_range(1..=4);
        let offsets: Vec<f64> = (0..parts).map(|_| rng.gen_range(-0.05..0.05)).collect();
        let mut pts = Vec::new();
        for &o in &offsets {
            pts.push(vec![0.5 + o]);
            pts.push(vec![-0.5 - o]);
        }
        let m = DiscreteMeasure::uniform(1, pts)?;
        min_gain = min_gain.min(k.interaction_energy(&m)? - e0);
    }
    Ok((
        res.grad_max < 1e-12 && res.exterior_min_gap >= 0.0 && min_gain > 0.0,
        format!(
            "grad {:.1e}, gap {:.3e}, min energy increase {min_gain:.3e}",
            res.grad_max, res.exterior_min_gap
        ),
    ))
}

fn lyapunov() -> Check {
    let k = Kernel::from_exponents(3.0, 2.0, 2)?;
    let rep = lyapunov_sweep(&k, &LyapunovOptions::new(64, vec![0.01, 0.02, 0.05], SUITE_SEED))?;
    let parts: Vec<String> = rep
        .points
        .iter()
        .map(|p| format!("delta {} sup {:.4} < {:.4}", p.delta, p.sup_distance, p.bound))
        .collect();
    Ok((
        rep.all_within_bound(),
        format!("{}; envelope monotone: {}", parts.join(", "), rep.envelope_monotone),
    ))
}

fn transport_correctness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let mut exact = true;
    let mut p1_gap = 0.0f64;
    for t in 0..64 {
        let n = rng.gen_range(2..=64);
        let mut cloud = || -> Result<DiscreteMeasure> {
            DiscreteMeasure::from_flat(1, (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(), None)
        };
        let (a, b) = (cloud()?, cloud()?);
        let p = [1.5, 2.0, 2.5, 3.0][t % 4];
        exact &= optimal_coupling(&a, &b, p)?.cost == assignment_coupling(&a, &b, p)?.cost;
        p1_gap = p1_gap.max((optimal_coupling(&a, &b, 1.0)?.cost - assignment_coupling(&a, &b, 1.0)?.cost).abs());
    }
    let ring = ring_measure(&RingConfig { k: 4, radius: 1.0 });
    let replicated = DiscreteMeasure::from_flat(
        2,
        ring.points().flat_map(|x| std::iter::repeat_n(x.to_vec(), 1024).flatten()).collect(),
        None,
    )?;
    let d = wasserstein_inf(&replicated, &shell_proxy(1.0, 2, 4096)?)?;
    let d_err = (d - 2.0 * (PI / 8.0).sin()).abs();
    Ok((
        exact && p1_gap < 1e-12 && d_err < 1e-3,
        format!("sorted == assignment (p > 1): {exact}, p = 1 gap {p1_gap:.1e}, d_inf error {d_err:.2e}"),
    ))
}
