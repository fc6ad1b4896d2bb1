//! Command-line front end: every subcommand prints deterministic JSON (or CSV)
//! on stdout and its wall-clock time on stderr.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use aggregation_shells::acceptance;
use aggregation_shells::convexity::sign_classify;
use aggregation_shells::dynamics::{evolve, FlowOptions};
use aggregation_shells::equilibria::{
    cross_polytope_measure, euler_lagrange_residual, r_star, ring_measure, ring_steady_radius,
    shell_radius_rootfind, ElResidual, RingConfig, SimplexConfig,
};
use aggregation_shells::radial::{inflection_and_min, linear_grid, radial_profile, InflectionAndMin};
use aggregation_shells::special::{diameter_bound, shell_radius_closed_form, DiameterBound};
use aggregation_shells::stability::{lyapunov_sweep, LyapunovOptions};
use aggregation_shells::transport::{distance_to_minimizer, wasserstein};
use aggregation_shells::{DiscreteMeasure, Error, Kernel, KernelParams, RadialMixture, Result};

const EXIT_ACCEPTANCE: u8 = 5;
/// Closed forms further than this from the root are flagged.
const FLAG_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "shells", version, about = "Power-law interaction energies, shells, rings and flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct KernelArgs {
    /// Attractive exponent α of W = |x|^α/α − |x|^β/β.
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Repulsive exponent β.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    beta: f64,
    /// Ambient dimension n.
    #[arg(long, default_value_t = 2)]
    dim: usize,
}

impl KernelArgs {
    fn params(&self) -> Result<KernelParams> {
        KernelParams::new(self.alpha, self.beta, self.dim)
    }

    fn kernel(&self) -> Result<Kernel> {
        Kernel::new(self.params()?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Interaction energy E(μ) = ½ ΣΣ w_i w_j W(x_i − x_j) of a measure file,
    /// with the Euler–Lagrange residual of its potential V = W∗μ.
    Energy {
        /// Measure file: {"dim", "points", "weights"}.
        measure: PathBuf,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        beta: f64,
    },
    /// Radial potential f(r) = W∗σ of a mixture of shells and its first three
    /// derivatives, written as CSV with header r,f,f1,f2,f3. Also locates the
    /// inflection radius (f'' = 0) and the minimum of f.
    RadialProfile {
        #[command(flatten)]
        kernel: KernelArgs,
        /// Shell radii (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "1")]
        radii: Vec<f64>,
        /// Shell weights (comma separated, uniform when omitted).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.05)]
        r_min: f64,
        #[arg(long, default_value_t = 3.0)]
        r_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Quadrature tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every determination of the steady shell radius: the Gamma-function
    /// closed form, the root of the shell force balance, and for β = 2 the
    /// root of f'_{σ_r}(r) = 0 beside the two closed forms built from
    /// f'_{σ₁}(1), flagging any that disagree with the root.
    ShellRadius {
        #[command(flatten)]
        kernel: KernelArgs,
    },
    /// Steady radius of the planar ring of k equal masses and its
    /// Euler–Lagrange residual (a negative exterior gap means the ring is
    /// steady but not a minimizer).
    Ring {
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value_t = 16)]
        k: usize,
        /// Write the ring as a measure file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unit-edge simplex and the cross-polytope of the same circumradius:
    /// second moments against Id/(2n+2) and energies at (4,2) against
    /// −n/(8(n+1)).
    Simplex {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Write the simplex as a measure file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Particle gradient flow dx_i/dt = −∇V(x_i) by RK4 with an energy
    /// watchdog. The trajectory (time,energy,force_residual) goes to --out as
    /// CSV. Starts from a measure file, or a seeded cloud in the unit cube.
    Flow {
        #[command(flatten)]
        kernel: KernelArgs,
        /// Initial measure file.
        measure: Option<PathBuf>,
        /// Cloud size when no measure file is given.
        #[arg(long, default_value_t = 64)]
        particles: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        dt: f64,
        #[arg(long, default_value_t = 20.0)]
        t_end: f64,
        /// Stop once max |∇V(x_i)| falls below this.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Record every n-th accepted step.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for per-state measure snapshots.
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
    /// Wasserstein distance d_p between two measure files (p may be inf), or
    /// from one measure to the known minimizer family of the kernel.
    Distance {
        first: PathBuf,
        second: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Kernel used when the second measure is omitted.
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        beta: f64,
    },
    /// Sign of F_α(ρ) = ∬|x−y|^α dρ(x)dρ(y) over seeded random neutral
    /// measures ρ (zero mass and zero first moment): positive for 2 < α < 4,
    /// negative for 0 < α < 2.
    Convexity {
        #[arg(long, default_value_t = 3.0)]
        alpha: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lyapunov stability of the shell: perturb its N-point proxy to
    /// d_α-distance δ, evolve, and record the largest distance to the
    /// minimizer family along the flow.
    Lyapunov {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 64)]
        particles: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.02,0.05")]
        deltas: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        dt: f64,
        #[arg(long, default_value_t = 40.0)]
        t_end: f64,
    },
    /// Run the acceptance suite; exits with 5 when any check fails.
    Verify {
        /// Run only these criteria (1 to 11).
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<usize>>,
        /// Also write the outcomes as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct EnergyReport {
    alpha: f64,
    beta: f64,
    dim: usize,
    atoms: usize,
    energy: f64,
    residual: ElResidual,
}

#[derive(Serialize)]
struct ProfileSummary {
    rows: usize,
    out: String,
    min_f3: f64,
    critical_points: Option<InflectionAndMin>,
    window_warning: Option<String>,
}

#[derive(Serialize)]
struct RStarReport {
    root: f64,
    corrected_closed_form: f64,
    alternate_closed_form: f64,
    corrected_flagged: bool,
    alternate_form_flagged: bool,
    unit_slope: f64,
}

#[derive(Serialize)]
struct ShellRadiusReport {
    params: KernelParams,
    in_shell_window: bool,
    closed_form: f64,
    rootfind: f64,
    discrepancy: f64,
    r_star: Option<RStarReport>,
    diameter_bound: DiameterBound,
}

#[derive(Serialize)]
struct RingReport {
    alpha: f64,
    beta: f64,
    k: usize,
    radius: f64,
    shell_radius: f64,
    residual: ElResidual,
}

#[derive(Serialize)]
struct PolytopeReport {
    name: &'static str,
    atoms: usize,
    circumradius: f64,
    moment_error: f64,
    energy: f64,
    energy_error: f64,
}

#[derive(Serialize)]
struct SimplexReport {
    dim: usize,
    target_moment: f64,
    target_energy: f64,
    polytopes: Vec<PolytopeReport>,
}

#[derive(Serialize)]
struct FlowReport {
    params: KernelParams,
    atoms: usize,
    accepted_steps: usize,
    rejected_steps: usize,
    recorded_states: usize,
    final_time: f64,
    initial_energy: f64,
    final_energy: f64,
    final_residual: f64,
    max_energy_increase: f64,
    max_center_drift: f64,
    final_diameter: f64,
}

#[derive(Serialize)]
struct DistanceReport {
    p: String,
    against: &'static str,
    distance: f64,
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn polytope(name: &'static str, m: &DiscreteMeasure, kernel: &Kernel, moment: f64, energy: f64) -> Result<PolytopeReport> {
    let mm = m.second_moment_matrix();
    let n = m.dim();
    let moment_error = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (mm[(i, j)] - if i == j { moment } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let e = kernel.interaction_energy(m)?;
    Ok(PolytopeReport {
        name,
        atoms: m.len(),
        circumradius: m.support_radius(),
        moment_error,
        energy: e,
        energy_error: (e - energy).abs(),
    })
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Energy { measure, alpha, beta } => {
            let m = DiscreteMeasure::read_json(&measure)?;
            let k = Kernel::from_exponents(alpha, beta, m.dim())?;
            emit(&EnergyReport {
                alpha,
                beta,
                dim: m.dim(),
                atoms: m.len(),
                energy: k.interaction_energy(&m)?,
                residual: euler_lagrange_residual(&k, &m)?,
            })?;
        }
        Command::RadialProfile { kernel, radii, weights, r_min, r_max, points, tol, out } => {
            let p = kernel.params()?;
            let weights = weights.unwrap_or_else(|| vec![1.0 / radii.len() as f64; radii.len()]);
            let mix = RadialMixture::new(radii, weights, p.dim)?;
            let profile = radial_profile(&mix, &p, &linear_grid(r_min, r_max, points), tol)?;
            match out {
                None => print!("{}", profile.to_csv()),
                Some(path) => {
                    profile.write_csv(&path)?;
                    emit(&ProfileSummary {
                        rows: profile.len(),
                        out: path.display().to_string(),
                        min_f3: profile.f3.iter().copied().fold(f64::INFINITY, f64::min),
                        critical_points: inflection_and_min(&profile).ok(),
                        window_warning: profile.window_warning.clone(),
                    })?;
                }
            }
        }
        Command::ShellRadius { kernel } => {
            let p = kernel.params()?;
            let closed_form = shell_radius_closed_form(&p)?;
            let rootfind = shell_radius_rootfind(&p)?;
            let r_star = if p.beta == 2.0 && p.alpha > 2.0 {
                let r = r_star(&p)?;
                Some(RStarReport {
                    root: r.root,
                    corrected_closed_form: r.corrected_closed_form,
                    alternate_closed_form: r.alternate_closed_form,
                    corrected_flagged: (r.corrected_closed_form - r.root).abs() > FLAG_TOL,
                    alternate_form_flagged: r.alternate_form_flagged(FLAG_TOL),
                    unit_slope: r.unit_slope,
                })
            } else {
                None
            };
            emit(&ShellRadiusReport {
                params: p,
                in_shell_window: p.in_shell_window(),
                closed_form,
                rootfind,
                discrepancy: (closed_form - rootfind).abs(),
                r_star,
                diameter_bound: diameter_bound(&p)?,
            })?;
        }
        Command::Ring { alpha, beta, k, out } => {
            let p = KernelParams::new(alpha, beta, 2)?;
            let radius = ring_steady_radius(k, &p)?;
            let ring = ring_measure(&RingConfig { k, radius });
            if let Some(path) = out {
                ring.write_json(path)?;
            }
            emit(&RingReport {
                alpha,
                beta,
                k,
                radius,
                shell_radius: shell_radius_closed_form(&p)?,
                residual: euler_lagrange_residual(&Kernel::new(p)?, &ring)?,
            })?;
        }
        Command::Simplex { dim, out } => {
            let n = dim as f64;
            let kernel = Kernel::from_exponents(4.0, 2.0, dim)?;
            let simplex = SimplexConfig::unit(dim).measure();
            if let Some(path) = out {
                simplex.write_json(path)?;
            }
            let moment = 1.0 / (2.0 * n + 2.0);
            let energy = -n / (8.0 * (n + 1.0));
            let cross = cross_polytope_measure(dim, (n / (2.0 * n + 2.0)).sqrt());
            emit(&SimplexReport {
                dim,
                target_moment: moment,
                target_energy: energy,
                polytopes: vec![
                    polytope("simplex", &simplex, &kernel, moment, energy)?,
                    polytope("cross-polytope", &cross, &kernel, moment, energy)?,
                ],
            })?;
        }
        Command::Flow { kernel, measure, particles, seed, dt, t_end, tol, stride, out, snapshots } => {
            let k = kernel.kernel()?;
            let start = match measure {
                Some(path) => DiscreteMeasure::read_json(path)?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let coords = (0..particles * kernel.dim).map(|_| rng.gen_range(0.0..1.0)).collect();
                    DiscreteMeasure::from_flat(kernel.dim, coords, None)?
                }
            };
            let traj = evolve(&start, &k, &FlowOptions::new(t_end, dt, tol).with_stride(stride))?;
            if let Some(path) = out {
                traj.write_csv(path)?;
            }
            if let Some(dir) = snapshots {
                traj.write_snapshots(dir)?;
            }
            let last = traj.last();
            emit(&FlowReport {
                params: *k.params(),
                atoms: start.len(),
                accepted_steps: traj.accepted_steps,
                rejected_steps: traj.rejected_steps,
                recorded_states: traj.states.len(),
                final_time: last.time,
                initial_energy: traj.first().energy,
                final_energy: last.energy,
                final_residual: last.force_residual,
                max_energy_increase: traj.max_energy_increase,
                max_center_drift: traj.max_center_drift,
                final_diameter: last.measure.support_diameter(),
            })?;
        }
        Command::Distance { first, second, p, alpha, beta } => {
            let a = DiscreteMeasure::read_json(first)?;
            let (against, distance) = match second {
                Some(path) => ("measure", wasserstein(&a, &DiscreteMeasure::read_json(path)?, p)?),
                None => ("minimizer family", distance_to_minimizer(&a, &Kernel::from_exponents(alpha, beta, a.dim())?, p)?),
            };
            emit(&DistanceReport { p: p.to_string(), against, distance })?;
        }
        Command::Convexity { alpha, dim, trials, seed } => {
            emit(&sign_classify(alpha, dim, trials, seed)?)?;
        }
        Command::Lyapunov { kernel, particles, deltas, seed, dt, t_end } => {
            let mut opts = LyapunovOptions::new(particles, deltas, seed);
            opts.dt = dt;
            opts.t_end = t_end;
            emit(&lyapunov_sweep(&kernel.kernel()?, &opts)?)?;
        }
        Command::Verify { only, out } => {
            let ids = only.unwrap_or_else(|| (1..=acceptance::CRITERIA.len()).collect());
            if let Some(bad) = ids.iter().find(|&&i| !(1..=acceptance::CRITERIA.len()).contains(&i)) {
                return Err(Error::Domain(format!("no criterion {bad}")));
            }
            let mut outcomes = Vec::new();
            for id in ids {
                let o = acceptance::run_criterion(id);
                println!("{}", o.line());
                outcomes.push(o);
            }
            if let Some(path) = out {
                std::fs::write(path, serde_json::to_string_pretty(&outcomes)?)?;
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
            if failed > 0 {
                return Ok(EXIT_ACCEPTANCE);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let status = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as u8
        }
    };
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    ExitCode::from(status)
}
