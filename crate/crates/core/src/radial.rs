//! Radial potentials of spherically symmetric measures.
//!
//! For a mixture of centered shells μ = Σ w_k σ_{R_k} and the kernel
//! W_{α,2}, [`radial_profile`] tabulates f(r) = (W_{α,2} ∗ μ)(r e₁) and its
//! first three derivatives. Each derivative comes from its own sphere
//! integral against the unit shell and is rescaled to radius R, so no
//! derivative is obtained by differencing.
//!
//! In one dimension the "shell" σ_R is the atom pair ½(δ_{−R} + δ_R) and
//! everything is an exact two-term sum.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::rpow;
use crate::quadrature::{tanh_sinh, Node, DEFAULT_MAX_NODES};
use crate::roots::bisect;
use crate::special::{omega_n, KernelParams};

pub use crate::quadrature::DEFAULT_TOL;

/// A point y on the unit sphere seen from r e₁, parametrized by the polar
/// angle θ between y and e₁. All fields are formed without cancellation.
#[derive(Clone, Copy, Debug)]
pub struct Chord {
    /// y₁ = cos θ.
    pub cos: f64,
    /// 1 − cos θ.
    pub one_minus_cos: f64,
    /// sin θ ≥ 0.
    pub sin: f64,
    /// |r e₁ − y|².
    pub dist2: f64,
    /// r − y₁.
    pub r_minus_y1: f64,
}

impl Chord {
    fn new(r: f64, node: Node) -> Self {
        let (cos, one_minus_cos, sin) = if node.from_a <= node.from_b {
            let t = node.from_a;
            let s = (0.5 * t).sin();
            (t.cos(), 2.0 * s * s, t.sin())
        } else {
            let d = node.from_b;
            let c = (0.5 * d).cos();
            (-d.cos(), 2.0 * c * c, d.sin())
        };
        let dr = r - 1.0;
        Chord {
            cos,
            one_minus_cos,
            sin,
            dist2: dr * dr + 2.0 * r * one_minus_cos,
            r_minus_y1: dr + one_minus_cos,
        }
    }

    pub fn dist(&self) -> f64 {
        self.dist2.sqrt()
    }
}

/// ∫ h(|r e₁ − y|², y) dσ(y) over the unit sphere in R^n, n ≥ 2, written
/// as a polar integral over θ ∈ [0, π] against (ω_{n−1}/ω_n) sin^{n−2}θ.
pub fn sphere_integral<H>(h: H, r: f64, n: usize, tol: f64) -> Result<f64>
where
    H: Fn(&Chord) -> f64,
{
    if n < 2 {
        return Err(Error::Domain("sphere quadrature needs n >= 2".into()));
    }
    let norm = omega_n(n - 1) / omega_n(n);
    let power = (n - 2) as i32;
    let gap = (r - 1.0).abs();
    // Put the near-singular region |θ| ≲ |r − 1| in its own panel.
    let breaks: Vec<f64> = if gap > 0.0 && gap < 0.25 {
        vec![0.0, gap, PI]
    } else {
        vec![0.0, PI]
    };
    let panels = (breaks.len() - 1) as f64;
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        // Chord wants θ and π − θ, not offsets from interior panel ends.
        let q = tanh_sinh(
            |node| {
                let polar = Node {
                    x: node.x,
                    from_a: if a == 0.0 { node.from_a } else { node.x },
                    from_b: if b == PI { node.from_b } else { PI - node.x },
                };
                let c = Chord::new(r, polar);
                h(&c) * c.sin.powi(power)
            },
            a,
            b,
            tol / (norm * panels),
            DEFAULT_MAX_NODES,
        )?;
        total += q.value;
    }
    Ok(norm * total)
}

/// Average of h(|r e₁ − y|, y₁) over the uniform measure on the unit sphere.
pub fn sphere_average<H>(h: H, r: f64, n: usize, tol: f64) -> Result<f64>
where
    H: Fn(f64, f64) -> f64,
{
    sphere_integral(|c| h(c.dist(), c.cos), r, n, tol)
}

fn check_g_args(alpha: f64, r: f64, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain("g_alpha needs n >= 2".into()));
    }
    if alpha < 2.0 {
        return Err(Error::Domain(format!("g_alpha needs alpha >= 2, got {alpha}")));
    }
    if alpha == 2.0 && n == 2 && r.abs() == 1.0 {
        return Err(Error::NonConvergent("alpha = 2 at r = 1 = n - 1".into()));
    }
    Ok(())
}

/// g_α(r) = ∫ (r − y₁) |r e₁ − y|^{α−4} dσ(y), odd in r.
pub fn g_alpha(alpha: f64, r: f64, n: usize, tol: f64) -> Result<f64> {
    check_g_args(alpha, r, n)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let v = sphere_integral(
        |c| {
            if c.dist2 == 0.0 {
                return 0.0;
            }
            c.r_minus_y1 * rpow(c.dist2, alpha - 4.0)
        },
        r.abs(),
        n,
        tol,
    )?;
    Ok(v.copysign(r))
}

/// G_α(r) = ∫ |r e₁ − y|^{α−6} (r − y₁)(1 − y₁²) dσ(y), odd in r.
pub fn g_capital(alpha: f64, r: f64, n: usize, tol: f64) -> Result<f64> {
    check_g_args(alpha, r, n)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let v = sphere_integral(
        |c| {
            if c.dist2 == 0.0 {
                return 0.0;
            }
            let one_minus_y1_sq = c.one_minus_cos * (2.0 - c.one_minus_cos);
            rpow(c.dist2, alpha - 6.0) * c.r_minus_y1 * one_minus_y1_sq
        },
        r.abs(),
        n,
        tol,
    )?;
    Ok(v.copysign(r))
}

/// Unit-shell integrals A_k(ρ) with f_{σ₁}^{(k)}(ρ) built from them.
fn unit_shell_integral(alpha: f64, rho: f64, n: usize, order: usize, tol: f64) -> Result<f64> {
    let a = alpha;
    sphere_integral(
        |c| {
            if c.dist2 == 0.0 {
                return 0.0;
            }
            let d2 = c.dist2;
            let u = c.r_minus_y1;
            match order {
                0 => rpow(d2, a),
                1 => rpow(d2, a - 2.0) * u,
                2 => (a - 2.0) * u * u * rpow(d2, a - 4.0) + rpow(d2, a - 2.0),
                _ => (a - 2.0) * u * rpow(d2, a - 6.0) * (3.0 * d2 + (a - 4.0) * u * u),
            }
        },
        rho,
        n,
        tol,
    )
}

/// The `order`-th derivative (0..=3) of f_{σ_R}(r) for the kernel W_{α,2}.
fn shell_derivative(alpha: f64, n: usize, radius: f64, r: f64, order: usize, tol: f64) -> Result<f64> {
    // Even extension: f, f2 even; f1, f3 odd.
    if r < 0.0 {
        let v = shell_derivative(alpha, n, radius, -r, order, tol)?;
        return Ok(if order % 2 == 1 { -v } else { v });
    }
    let a = alpha;
    if radius == 0.0 {
        return Ok(match order {
            0 => rpow(r * r, a) / a - 0.5 * r * r,
            1 => rpow(r * r, a - 2.0) * r - r,
            2 => (a - 1.0) * rpow(r * r, a - 2.0) - 1.0,
            _ => {
                if r == 0.0 {
                    0.0
                } else {
                    (a - 1.0) * (a - 2.0) * rpow(r * r, a - 3.0)
                }
            }
        });
    }
    if n == 1 {
        return Ok(atom_pair_derivative(a, radius, r, order));
    }
    if r == 0.0 {
        return Ok(match order {
            0 => rpow(radius * radius, a) / a - 0.5 * radius * radius,
            2 => rpow(radius * radius, a - 2.0) * ((a - 2.0) / n as f64 + 1.0) - 1.0,
            _ => 0.0,
        });
    }
    let rho = r / radius;
    let scale = |p: f64| rpow(radius * radius, p);
    let tol_unit = tol / scale(a - order as f64).max(1e-300);
    let integral = unit_shell_integral(a, rho, n, order, tol_unit.min(tol.max(1e-15) * 1e3))?;
    Ok(match order {
        0 => scale(a) * integral / a - 0.5 * (r * r + radius * radius),
        1 => scale(a - 1.0) * integral - r,
        2 => scale(a - 2.0) * integral - 1.0,
        _ => scale(a - 3.0) * integral,
    })
}

fn atom_pair_derivative(a: f64, radius: f64, r: f64, order: usize) -> f64 {
    let (p, q) = (r - radius, r + radius);
    let pw = |x: f64, e: f64| rpow(x * x, e);
    let odd = |x: f64, e: f64| if x == 0.0 { 0.0 } else { pw(x, e).copysign(x) };
    match order {
        0 => 0.5 * (pw(p, a) + pw(q, a)) / a - 0.5 * (r * r + radius * radius),
        1 => 0.5 * (odd(p, a - 1.0) + odd(q, a - 1.0)) - r,
        2 => 0.5 * (a - 1.0) * (pw(p, a - 2.0) + pw(q, a - 2.0)) - 1.0,
        _ => 0.5 * (a - 1.0) * (a - 2.0) * (odd(p, a - 3.0) + odd(q, a - 3.0)),
    }
}

/// A spherically symmetric measure Σ w_k σ_{R_k} on R^n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialMixture {
    radii: Vec<f64>,
    weights: Vec<f64>,
    dim: usize,
}

impl RadialMixture {
    pub fn new(radii: Vec<f64>, weights: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 || radii.is_empty() || radii.len() != weights.len() {
            return Err(Error::InvalidMeasure("mixture needs matching nonempty radii and weights".into()));
        }
        if radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::InvalidMeasure("shell radii must be nonnegative".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidMeasure("shell weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > crate::measure::WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!("shell weights sum to {total}")));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { radii, weights, dim })
    }

    /// The single shell σ_R.
    pub fn shell(radius: f64, dim: usize) -> Result<Self> {
        Self::new(vec![radius], vec![1.0], dim)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `order`-th radial derivative (0..=3) of f_μ at r.
    pub fn derivative(&self, alpha: f64, r: f64, order: usize, tol: f64) -> Result<f64> {
        let mut s = 0.0;
        for (&radius, &w) in self.radii.iter().zip(&self.weights) {
            s += w * shell_derivative(alpha, self.dim, radius, r, order, tol)?;
        }
        Ok(s)
    }
}

/// Values of f and its first three derivatives at one radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialValues {
    pub r: f64,
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

pub fn radial_values(mix: &RadialMixture, alpha: f64, r: f64, tol: f64) -> Result<RadialValues> {
    Ok(RadialValues {
        r,
        f: mix.derivative(alpha, r, 0, tol)?,
        f1: mix.derivative(alpha, r, 1, tol)?,
        f2: mix.derivative(alpha, r, 2, tol)?,
        f3: mix.derivative(alpha, r, 3, tol)?,
    })
}

#[derive(Clone, Debug)]
struct ProfileSource {
    mix: RadialMixture,
    alpha: f64,
    tol: f64,
}

/// Tabulated f_μ and derivatives on an increasing radius grid.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    pub grid: Vec<f64>,
    pub f: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub f3: Vec<f64>,
    /// Set when (α, n) lies outside the range where f''' > 0 is guaranteed.
    pub window_warning: Option<String>,
    /// Quadrature tolerance used to build the table (0 when unknown).
    pub tol: f64,
    source: Option<ProfileSource>,
}

impl RadialProfile {
    /// A profile from precomputed columns (e.g. read back from CSV).
    pub fn from_columns(grid: Vec<f64>, f: Vec<f64>, f1: Vec<f64>, f2: Vec<f64>, f3: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        if [f.len(), f1.len(), f2.len(), f3.len()].iter().any(|&l| l != n) {
            return Err(Error::Domain("profile columns differ in length".into()));
        }
        check_grid(&grid)?;
        Ok(Self { grid, f, f1, f2, f3, window_warning: None, tol: 0.0, source: None })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,f,f1,f2,f3\n");
        for i in 0..self.len() {
            let _ = writeln!(s, "{},{},{},{},{}", self.grid[i], self.f[i], self.f1[i], self.f2[i], self.f3[i]);
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("empty radius grid".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("radius grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Tabulate f_μ, f', f'', f''' for W_{α,2} on `grid`.
pub fn radial_profile(mix: &RadialMixture, params: &KernelParams, grid: &[f64], tol: f64) -> Result<RadialProfile> {
    if params.beta != 2.0 {
        return Err(Error::Domain(format!("radial profiles need beta = 2, got {}", params.beta)));
    }
    if params.alpha <= 2.0 {
        return Err(Error::Domain(format!("radial profiles need alpha > 2, got {}", params.alpha)));
    }
    if params.dim != mix.dim() {
        return Err(Error::Domain("kernel and mixture dimensions differ".into()));
    }
    check_grid(grid)?;
    let window_warning = (!params.in_shell_window()).then(|| {
        format!(
            "(alpha, n) = ({}, {}) is outside the range where f''' > 0 is guaranteed",
            params.alpha, params.dim
        )
    });
    let values: Vec<RadialValues> = grid
        .par_iter()
        .map(|&r| radial_values(mix, params.alpha, r, tol))
        .collect::<Result<_>>()?;
    Ok(RadialProfile {
        grid: grid.to_vec(),
        f: values.iter().map(|v| v.f).collect(),
        f1: values.iter().map(|v| v.f1).collect(),
        f2: values.iter().map(|v| v.f2).collect(),
        f3: values.iter().map(|v| v.f3).collect(),
        window_warning,
        tol,
        source: Some(ProfileSource { mix: mix.clone(), alpha: params.alpha, tol }),
    })
}

/// Inflection radius (0 when f'' > 0 throughout) and the positive minimizer of f.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InflectionAndMin {
    pub r_inflect: f64,
    pub r_min: f64,
}

/// Sign changes among values whose magnitude exceeds `noise`, as pairs of
/// grid indices bracketing each change, with the sign on the left.
fn significant_sign_changes(values: &[f64], noise: f64) -> (Vec<(usize, usize, f64)>, Option<f64>) {
    let mut changes = Vec::new();
    let mut last: Option<(usize, f64)> = None;
    let mut first_sign = None;
    for (i, &v) in values.iter().enumerate() {
        if v.abs() <= noise {
            continue;
        }
        let s = v.signum();
        first_sign.get_or_insert(s);
        if let Some((j, t)) = last {
            if t != s {
                changes.push((j, i, t));
            }
        }
        last = Some((i, s));
    }
    (changes, first_sign)
}

/// Locate the unique zero of f'' and the unique positive zero of f' on a profile.
pub fn inflection_and_min(profile: &RadialProfile) -> Result<InflectionAndMin> {
    let noise = 10.0 * profile.tol;
    let refine = |lo: usize, hi: usize, order: usize, column: &[f64]| -> Result<f64> {
        let (a, b) = (profile.grid[lo], profile.grid[hi]);
        match &profile.source {
            Some(src) => bisect(|r| src.mix.derivative(src.alpha, r, order, src.tol), a, b, 1e-13),
            None => {
                let (fa, fb) = (column[lo], column[hi]);
                Ok(a - fa * (b - a) / (fb - fa))
            }
        }
    };

    let (f2_changes, f2_first) = significant_sign_changes(&profile.f2, noise);
    let r_inflect = match (f2_changes.as_slice(), f2_first) {
        ([], Some(s)) if s > 0.0 => 0.0,
        ([], _) => {
            return Err(Error::StructureViolation("f'' never becomes positive on the grid".into()));
        }
        ([(lo, hi, s)], _) if *s < 0.0 => refine(*lo, *hi, 2, &profile.f2)?,
        _ => {
            return Err(Error::StructureViolation(format!(
                "f'' changes sign {} times (expected a single - to + change)",
                f2_changes.len()
            )));
        }
    };

    let positive: Vec<usize> = (0..profile.len()).filter(|&i| profile.grid[i] > 0.0).collect();
    let f1_pos: Vec<f64> = positive.iter().map(|&i| profile.f1[i]).collect();
    let (f1_changes, _) = significant_sign_changes(&f1_pos, noise);
    let r_min = match f1_changes.as_slice() {
        [(lo, hi, s)] if *s < 0.0 => refine(positive[*lo], positive[*hi], 1, &profile.f1)?,
        [] => {
            return Err(Error::StructureViolation("f' has no positive zero on the grid".into()));
        }
        _ => {
            return Err(Error::StructureViolation(format!(
                "f' changes sign {} times on r > 0 (expected one - to + change)",
                f1_changes.len()
            )));
        }
    };
    if r_min <= r_inflect {
        return Err(Error::StructureViolation(format!(
            "minimizer {r_min} does not exceed inflection radius {r_inflect}"
        )));
    }
    Ok(InflectionAndMin { r_inflect, r_min })
}

/// `count` evenly spaced radii from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn sphere_average_examples() {
        for n in [2, 3, 5] {
            for r in [0.0, 0.3, 1.0, 2.5] {
                let v = sphere_average(|_, _| 1.0, r, n, TOL).unwrap();
                assert!((v - 1.0).abs() < 1e-12);
            }
        }
        for r in [0.2, 1.7] {
            let v = sphere_average(|_, c| 1.0 - c, r, 2, TOL).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
        }
        let v = sphere_average(|d, _| d.powi(4), 1.0, 2, TOL).unwrap();
        assert!((v - 6.0).abs() < 1e-11);
        assert!(sphere_average(|_, _| 1.0, 0.5, 1, TOL).is_err());
    }

    #[test]
    fn lemma_identities_in_two_dimensions() {
        assert!(g_alpha(2.0, 0.5, 2, TOL).unwrap().abs() < 1e-9);
        assert!(g_capital(2.0, 0.5, 2, TOL).unwrap().abs() < 1e-9);
        assert!(g_alpha(3.0, 0.5, 3, TOL).unwrap() > 0.0);
        assert!(matches!(g_alpha(2.0, 1.0, 2, TOL), Err(Error::NonConvergent(_))));
    }

    #[test]
    fn g_functions_are_odd_and_positive_for_n3() {
        for r in [0.1, 0.5, 0.9, 1.3] {
            for a in [2.0, 2.5, 3.0] {
                let g = g_alpha(a, r, 3, TOL).unwrap();
                let gc = g_capital(a, r, 3, TOL).unwrap();
                assert!(g > 0.0 && gc > 0.0, "alpha {a} r {r}: {g} {gc}");
                assert_eq!(g_alpha(a, -r, 3, TOL).unwrap(), -g);
                assert_eq!(g_capital(a, -r, 3, TOL).unwrap(), -gc);
            }
        }
    }

    #[test]
    fn unit_shell_values() {
        let shell2 = RadialMixture::shell(1.0, 2).unwrap();
        assert!((shell2.derivative(4.0, 1.0, 0, TOL).unwrap() - 0.5).abs() < 1e-11);
        assert!((shell2.derivative(4.0, 1.0, 1, TOL).unwrap() - 2.0).abs() < 1e-11);
        let shell1 = RadialMixture::shell(1.0, 1).unwrap();
        assert!((shell1.derivative(4.0, 1.0, 1, TOL).unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(shell2.derivative(3.0, 0.0, 1, TOL).unwrap(), 0.0);
        assert_eq!(shell2.derivative(3.0, 0.0, 3, TOL).unwrap(), 0.0);
    }

    #[test]
    fn f3_identity_with_g_functions() {
        for n in [2, 3] {
            let shell = RadialMixture::shell(1.0, n).unwrap();
            for a in [2.5, 3.0, 3.5] {
                for r in [0.3, 0.9, 1.0, 1.4] {
                    let f3 = shell.derivative(a, r, 3, TOL).unwrap();
                    let rhs = (a - 1.0) * g_alpha(a, r, n, TOL).unwrap()
                        + (4.0 - a) * g_capital(a, r, n, TOL).unwrap();
                    assert!((f3 / (a - 2.0) - rhs).abs() < 1e-8, "n {n} a {a} r {r}");
                }
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-4;
        for n in [2, 3] {
            let shell = RadialMixture::shell(1.0, n).unwrap();
            for a in [2.5, 3.0, 3.5] {
                for r in [0.2, 0.5, 0.8, 1.2, 1.6, 2.0] {
                    for order in 1..=3 {
                        let d = shell.derivative(a, r, order, TOL).unwrap();
                        let fd = (shell.derivative(a, r + h, order - 1, TOL).unwrap()
                            - shell.derivative(a, r - h, order - 1, TOL).unwrap())
                            / (2.0 * h);
                        assert!((d - fd).abs() <= 1e-5 * d.abs().max(1.0), "n {n} a {a} r {r} order {order}: {d} vs {fd}");
                    }
                }
            }
        }
    }

    #[test]
    fn inflection_examples() {
        let grid = linear_grid(0.05, 2.0, 80);
        let r0 = 1.0 / 3f64.sqrt();
        let mix = RadialMixture::shell(r0, 2).unwrap();
        let p = KernelParams::new(4.0, 2.0, 2).unwrap();
        let prof = radial_profile(&mix, &p, &grid, TOL).unwrap();
        assert!(prof.window_warning.is_some());
        let res = inflection_and_min(&prof).unwrap();
        assert!((res.r_min - r0).abs() < 1e-8);
        assert!(res.r_inflect > 0.0 && res.r_inflect < res.r_min);

        let delta = RadialMixture::shell(0.0, 2).unwrap();
        let p3 = KernelParams::new(3.0, 2.0, 2).unwrap();
        let prof = radial_profile(&delta, &p3, &grid, TOL).unwrap();
        assert!(prof.window_warning.is_none());
        let res = inflection_and_min(&prof).unwrap();
        assert!((res.r_min - 1.0).abs() < 1e-10);
    }

    #[test]
    fn structure_violation_detected() {
        let grid = vec![0.1, 0.2, 0.3, 0.4, 0.5];
        let wobble = vec![-1.0, 1.0, -1.0, 1.0, 1.0];
        let prof = RadialProfile::from_columns(grid.clone(), wobble.clone(), wobble.clone(), wobble, vec![1.0; 5]).unwrap();
        assert!(matches!(inflection_and_min(&prof), Err(Error::StructureViolation(_))));
    }

    #[test]
    fn profile_csv_header() {
        let mix = RadialMixture::shell(1.0, 3).unwrap();
        let p = KernelParams::new(3.0, 2.0, 3).unwrap();
        let prof = radial_profile(&mix, &p, &[0.5, 1.0], 1e-10).unwrap();
        let csv = prof.to_csv();
        assert!(csv.starts_with("r,f,f1,f2,f3\n"));
        assert_eq!(csv.lines().count(), 3);
        assert!(radial_profile(&mix, &KernelParams::new(3.0, 1.0, 3).unwrap(), &[0.5], 1e-10).is_err());
    }

    #[test]
    fn c3_closed_form_cross_check() {
        // ∫|e₁−y|(1−y₁) dσ on the circle is 16/(3π)
        let v = sphere_average(|d, c| d * (1.0 - c), 1.0, 2, TOL).unwrap();
        assert!((v - 16.0 / (3.0 * PI)).abs() < 1e-11);
    }
}
