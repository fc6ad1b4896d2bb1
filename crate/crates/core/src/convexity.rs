//! The quadratic form F_α(ρ) = ∬ |x − y|^α dρ(x) dρ(y) on neutral signed
//! measures, its sign, its Fourier representation on the line, and the
//! resulting convexity of the energy along segments.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, SignedMeasure};
use crate::potential::rpow;
use crate::quadrature::{tanh_sinh, DEFAULT_MAX_NODES};
use crate::special::fourier_kernel_constant;
use crate::sum::CompensatedSum;

/// Tolerance on total mass and first moment of a neutral measure.
pub const NEUTRAL_TOL: f64 = 1e-12;
/// Values of F_α within this of zero count as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// A finite signed measure with zero mass and zero first moment, stored as
/// atoms with signed weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeutralMeasure {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

impl NeutralMeasure {
    pub fn new(dim: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() != dim * weights.len() {
            return Err(Error::InvalidMeasure("coordinate and weight counts disagree".into()));
        }
        if coords.iter().chain(&weights).any(|v| !v.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite atom".into()));
        }
        let m = Self { dim, coords, weights };
        let mass = m.total_mass();
        if mass.abs() >= NEUTRAL_TOL {
            return Err(Error::InvalidMeasure(format!("total mass {mass:e} is not zero")));
        }
        if let Some(v) = m.first_moment().into_iter().find(|v| v.abs() >= NEUTRAL_TOL) {
            return Err(Error::InvalidMeasure(format!("first moment component {v:e} is not zero")));
        }
        Ok(m)
    }

    /// The zero measure.
    pub fn zero(dim: usize) -> Self {
        Self { dim, coords: Vec::new(), weights: Vec::new() }
    }

    pub fn from_signed(rho: &SignedMeasure) -> Result<Self> {
        let mut coords = Vec::new();
        let mut weights = Vec::new();
        for (x, w) in rho.signed_atoms() {
            coords.extend_from_slice(x);
            weights.push(w);
        }
        Self::new(rho.dim(), coords, weights)
    }

    /// m1 − m0.
    pub fn difference(m1: &DiscreteMeasure, m0: &DiscreteMeasure) -> Result<Self> {
        Self::from_signed(&SignedMeasure::new(m1.clone(), m0.clone())?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        crate::sum::compensated(self.weights.iter().copied())
    }

    pub fn first_moment(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|k| crate::sum::compensated((0..self.len()).map(|i| self.weights[i] * self.point(i)[k])))
            .collect()
    }

    /// Apply x ↦ A x to every atom.
    pub fn linear_map(&self, a: &DMatrix<f64>) -> Self {
        let d = self.dim;
        let mut coords = Vec::with_capacity(self.coords.len());
        for i in 0..self.len() {
            let x = self.point(i);
            for r in 0..d {
                coords.push((0..d).map(|c| a[(r, c)] * x[c]).sum());
            }
        }
        Self { dim: d, coords, weights: self.weights.clone() }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self { dim: self.dim, coords: self.coords.iter().map(|c| lambda * c).collect(), weights: self.weights.clone() }
    }
}

/// ρ = ½(δ_{−1} + δ_1) − ½(δ_{−1/2} + δ_{1/2}) on the line.
pub fn reference_neutral_1d() -> NeutralMeasure {
    NeutralMeasure::new(1, vec![-1.0, 1.0, -0.5, 0.5], vec![0.5, 0.5, -0.5, -0.5])
        .expect("reference measure is neutral")
}

/// F_α(ρ) = Σ_{i,j} s_i s_j |x_i − x_j|^α.
pub fn f_alpha_form(rho: &NeutralMeasure, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("F_alpha needs alpha > 0, got {alpha}")));
    }
    let mut s = CompensatedSum::new();
    for i in 0..rho.len() {
        for j in (i + 1)..rho.len() {
            let r2 = crate::potential::sq_dist(rho.point(i), rho.point(j));
            s.add(2.0 * rho.weights[i] * rho.weights[j] * rpow(r2, alpha));
        }
    }
    Ok(s.value())
}

/// A point drawn uniformly from the unit ball of R^n.
fn unit_ball_point(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if x.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            return x;
        }
    }
}

/// A random neutral measure: 6 to 12 atoms in the unit ball with weights
/// of random sign and magnitude in [0.5, 1.5], projected onto zero mass and
/// zero first moment, each sign part normalized to unit mass and the pair
/// translated so that both parts are centered.
pub fn random_neutral(n: usize, rng: &mut ChaCha8Rng) -> NeutralMeasure {
    loop {
        let count = rng.gen_range(6..=12);
        let points: Vec<Vec<f64>> = (0..count).map(|_| unit_ball_point(n, rng)).collect();
        let w0 = DVector::from_iterator(
            count,
            (0..count).map(|_| {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                sign * rng.gen_range(0.5..1.5)
            }),
        );
        let a = DMatrix::from_fn(n + 1, count, |r, c| if r == 0 { 1.0 } else { points[c][r - 1] });
        let Some(chol) = (&a * a.transpose()).cholesky() else { continue };
        let w = &w0 - a.transpose() * chol.solve(&(&a * &w0));
        let scale = w.amax();
        if w.iter().any(|v| v.abs() < 1e-3 * scale) {
            continue;
        }
        let split = |positive: bool| -> Option<DiscreteMeasure> {
            let idx: Vec<usize> = (0..count).filter(|&i| (w[i] > 0.0) == positive).collect();
            if idx.len() < 2 {
                return None;
            }
            let mass: f64 = idx.iter().map(|&i| w[i].abs()).sum();
            DiscreteMeasure::new(
                n,
                idx.iter().map(|&i| points[i].clone()).collect(),
                Some(idx.iter().map(|&i| w[i].abs() / mass).collect()),
            )
            .ok()
        };
        let (Some(plus), Some(minus)) = (split(true), split(false)) else { continue };
        let shift: Vec<f64> = plus.center_of_mass().0.iter().map(|v| -v).collect();
        let signed = SignedMeasure { plus: plus.translated(&shift), minus: minus.translated(&shift) };
        if let Ok(rho) = NeutralMeasure::from_signed(&signed) {
            return rho;
        }
    }
}

/// The per-trial generator: stream `trial` of the master seed.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Sign pattern of F_α over random neutral measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    StrictlyPositive,
    StrictlyNegative,
    Zero,
    Nonnegative,
    Indefinite,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::StrictlyPositive => "strictly positive",
            Verdict::StrictlyNegative => "strictly negative",
            Verdict::Zero => "zero",
            Verdict::Nonnegative => "nonnegative",
            Verdict::Indefinite => "indefinite",
        }
    }

    fn from_range(min: f64, max: f64) -> Self {
        if min.abs() < ZERO_TOL && max.abs() < ZERO_TOL {
            Verdict::Zero
        } else if min > 0.0 {
            Verdict::StrictlyPositive
        } else if max < 0.0 {
            Verdict::StrictlyNegative
        } else if min >= -ZERO_TOL {
            Verdict::Nonnegative
        } else {
            Verdict::Indefinite
        }
    }

    /// Whether a verdict agrees with the sign F_α must have: positive for
    /// 2 < α < 4, negative for 0 < α < 2, zero at 2 and nonnegative at 4.
    pub fn consistent_with(&self, alpha: f64) -> bool {
        if alpha == 2.0 {
            *self == Verdict::Zero
        } else if alpha == 4.0 {
            matches!(self, Verdict::StrictlyPositive | Verdict::Nonnegative | Verdict::Zero)
        } else if alpha > 2.0 && alpha < 4.0 {
            *self == Verdict::StrictlyPositive
        } else {
            *self == Verdict::StrictlyNegative
        }
    }
}

/// Result of [`sign_classify`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignReport {
    pub alpha: f64,
    pub n: usize,
    pub trials: usize,
    pub min: f64,
    pub max: f64,
    #[serde(serialize_with = "verdict_text")]
    pub verdict: Verdict,
    pub consistent: bool,
}

fn verdict_text<S: serde::Serializer>(v: &Verdict, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(v.as_str())
}

pub fn sign_classify(alpha: f64, n: usize, trials: usize, seed: u64) -> Result<SignReport> {
    if !(alpha > 0.0 && alpha <= 4.0) {
        return Err(Error::Domain(format!("sign classification needs 0 < alpha <= 4, got {alpha}")));
    }
    if n == 0 || trials == 0 {
        return Err(Error::Domain("need n >= 1 and trials >= 1".into()));
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for t in 0..trials {
        let rho = random_neutral(n, &mut trial_rng(seed, t as u64));
        let v = f_alpha_form(&rho, alpha)?;
        min = min.min(v);
        max = max.max(v);
    }
    let verdict = Verdict::from_range(min, max);
    Ok(SignReport { alpha, n, trials, min, max, verdict, consistent: verdict.consistent_with(alpha) })
}

/// E_α(μ) = ½ Σ w_i w_j |x_i − x_j|^α / α.
fn power_energy(m: &DiscreteMeasure, alpha: f64) -> f64 {
    let mut s = CompensatedSum::new();
    for i in 0..m.len() {
        for j in (i + 1)..m.len() {
            let r2 = crate::potential::sq_dist(m.point(i), m.point(j));
            s.add(m.weights()[i] * m.weights()[j] * rpow(r2, alpha) / alpha);
        }
    }
    s.value()
}

fn check_segment(m0: &DiscreteMeasure, m1: &DiscreteMeasure, alpha: f64) -> Result<()> {
    if m0.dim() != m1.dim() {
        return Err(Error::Domain("segment endpoints differ in dimension".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("need alpha > 0, got {alpha}")));
    }
    Ok(())
}

/// The constant second derivative of t ↦ E_α((1−t)m0 + t m1), which is
/// F_α(m1 − m0)/α.
pub fn segment_second_derivative(m0: &DiscreteMeasure, m1: &DiscreteMeasure, alpha: f64) -> Result<f64> {
    check_segment(m0, m1, alpha)?;
    let rho = NeutralMeasure::difference(m1, m0)?;
    Ok(f_alpha_form(&rho, alpha)? / alpha)
}

/// 4(E(0) − 2E(½) + E(1)) along the same segment; equal to the second
/// derivative because E is quadratic in t.
pub fn segment_second_difference(m0: &DiscreteMeasure, m1: &DiscreteMeasure, alpha: f64) -> Result<f64> {
    check_segment(m0, m1, alpha)?;
    let mid = m0.mixture(m1, 0.5)?;
    Ok(4.0 * (power_energy(m0, alpha) - 2.0 * power_energy(&mid, alpha) + power_energy(m1, alpha)))
}

/// Upper end of the explicitly integrated frequency range.
const XI_MAX: f64 = 200.0;
/// Truncation of the exponentially damped tail integral.
const TAIL_T_MAX: f64 = 40.0;
const FOURIER_TOL: f64 = 1e-12;

/// ρ̂(ξ)/ξ² for a neutral measure on the line, as (re, im), formed from
/// cos θ − 1 and sin θ − θ so that the O(ξ²) cancellation is exact.
fn rho_hat_over_xi2(rho: &NeutralMeasure, xi: f64) -> (f64, f64) {
    let (mut re, mut im) = (CompensatedSum::new(), CompensatedSum::new());
    for i in 0..rho.len() {
        let x = rho.point(i)[0];
        let s = rho.weights[i];
        let theta = 2.0 * PI * xi * x;
        let half = (0.5 * theta).sin() / xi;
        re.add(s * (-2.0 * half * half));
        let sin_minus = if theta.abs() < 0.1 {
            let t2 = theta * theta;
            // sin θ − θ = −θ³/3! + θ⁵/5! − θ⁷/7! + θ⁹/9!
            -theta * t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0)))
        } else {
            theta.sin() - theta
        };
        im.add(-s * sin_minus / (xi * xi));
    }
    (re.value(), im.value())
}

/// ∫_X^∞ ξ^{−α−1} cos(2π d ξ) dξ.
fn tail_term(alpha: f64, d: f64) -> Result<f64> {
    if d == 0.0 {
        return Ok(XI_MAX.powf(-alpha) / alpha);
    }
    // Rotate ξ = X + i t/ω onto the imaginary direction, where e^{iωξ} decays.
    let omega = 2.0 * PI * d.abs();
    let power = |t: f64| -> (f64, f64) {
        let (a, b) = (XI_MAX, t / omega);
        let r = a.hypot(b);
        let phi = b.atan2(a);
        let mag = r.powf(-alpha - 1.0) * (-t).exp();
        let ang = -(alpha + 1.0) * phi;
        (mag * ang.cos(), mag * ang.sin())
    };
    let re = tanh_sinh(|n| power(n.x).0, 0.0, TAIL_T_MAX, FOURIER_TOL * 1e-3, DEFAULT_MAX_NODES)?.value;
    let im = tanh_sinh(|n| power(n.x).1, 0.0, TAIL_T_MAX, FOURIER_TOL * 1e-3, DEFAULT_MAX_NODES)?.value;
    // (i/ω) e^{iωX} (re + i im), real part.
    let (c, s) = ((omega * XI_MAX).cos(), (omega * XI_MAX).sin());
    let pi = c * im + s * re;
    Ok(-pi / omega)
}

/// The Fourier side C_α ∫ |ξ|^{−α−1} |ρ̂(ξ)|² dξ of the identity for F_α on
/// the line, with ρ̂(ξ) = ∫ e^{−2πiξx} dρ(x).
pub fn fourier_side(rho: &NeutralMeasure, alpha: f64) -> Result<f64> {
    if rho.dim() != 1 {
        return Err(Error::Domain("the Fourier side is implemented for n = 1 only".into()));
    }
    if !(alpha > 0.0 && alpha < 4.0 && alpha != 2.0) {
        return Err(Error::Domain(format!("Fourier side needs alpha in (0,2) or (2,4), got {alpha}")));
    }
    if rho.is_empty() {
        return Ok(0.0);
    }
    let c = fourier_kernel_constant(alpha, 1)?;
    let mut head = 0.0;
    let panels = XI_MAX as usize;
    for k in 0..panels {
        let q = tanh_sinh(
            |node| {
                let xi = node.x;
                if xi == 0.0 {
                    return 0.0;
                }
                let (re, im) = rho_hat_over_xi2(rho, xi);
                (re * re + im * im) * xi.powf(3.0 - alpha)
            },
            k as f64,
            (k + 1) as f64,
            FOURIER_TOL,
            DEFAULT_MAX_NODES,
        )?;
        head += q.value;
    }
    let mut tail = CompensatedSum::new();
    for i in 0..rho.len() {
        for j in 0..rho.len() {
            let d = rho.point(i)[0] - rho.point(j)[0];
            tail.add(rho.weights[i] * rho.weights[j] * tail_term(alpha, d)?);
        }
    }
    Ok(2.0 * c * (head + tail.value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{ring_measure, RingConfig};
    use crate::potential::Kernel;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn reference_values() {
        let rho = reference_neutral_1d();
        assert!((f_alpha_form(&rho, 3.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((f_alpha_form(&rho, 1.0).unwrap() + 0.5).abs() < 1e-12);
        assert!((f_alpha_form(&rho, 4.0).unwrap() - 3.375).abs() < 1e-12);
        assert!(f_alpha_form(&rho, 2.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn triangle_minus_square_is_flat_at_four() {
        let r = 0.8;
        let tri = ring_measure(&RingConfig { k: 3, radius: r });
        let sq = ring_measure(&RingConfig { k: 4, radius: r });
        let rho = NeutralMeasure::difference(&tri, &sq).unwrap();
        assert!(f_alpha_form(&rho, 4.0).unwrap().abs() < 1e-12);
        assert!(f_alpha_form(&rho, 3.0).unwrap() > 0.0);
    }

    #[test]
    fn rejects_non_neutral() {
        assert!(NeutralMeasure::new(1, vec![0.0, 1.0], vec![1.0, -0.5]).is_err());
        assert!(NeutralMeasure::new(1, vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn sign_classification() {
        for n in 1..=3 {
            for alpha in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0] {
                let r = sign_classify(alpha, n, 50, 11).unwrap();
                assert!(r.consistent, "alpha {alpha} n {n}: {:?}", r);
            }
        }
        let r = sign_classify(3.0, 2, 200, 7).unwrap();
        assert_eq!(r.verdict.as_str(), "strictly positive");
        assert!(sign_classify(4.5, 2, 10, 0).is_err());
    }

    #[test]
    fn random_neutral_is_centered_and_normalized() {
        for t in 0..20 {
            let rho = random_neutral(3, &mut trial_rng(5, t));
            assert!(rho.len() >= 6 && rho.len() <= 12);
            let plus: f64 = rho.weights().iter().filter(|w| **w > 0.0).sum();
            assert!((plus - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn segment_examples() {
        let mu_star = DiscreteMeasure::uniform(1, vec![vec![-0.5], vec![0.5]]).unwrap();
        let wide = DiscreteMeasure::uniform(1, vec![vec![-1.0], vec![1.0]]).unwrap();
        let a2 = segment_second_derivative(&mu_star, &wide, 3.0).unwrap();
        assert!((a2 - 1.0 / 3.0).abs() < 1e-12);
        assert!((segment_second_difference(&mu_star, &wide, 3.0).unwrap() - a2).abs() < 1e-10);
        assert_eq!(segment_second_derivative(&wide, &wide, 3.0).unwrap(), 0.0);
        assert!(segment_second_derivative(&mu_star, &wide, 2.0).unwrap().abs() < 1e-12);
        assert!(segment_second_difference(&mu_star, &wide, 2.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn fourier_side_reference() {
        let rho = reference_neutral_1d();
        for (alpha, want) in [(3.0, 1.0), (1.0, -0.5)] {
            let got = fourier_side(&rho, alpha).unwrap();
            assert!(((got - want) / want).abs() < 1e-4, "alpha {alpha}: {got}");
        }
        assert_eq!(fourier_side(&NeutralMeasure::zero(1), 3.0).unwrap(), 0.0);
        let planar = NeutralMeasure::zero(2);
        assert!(fourier_side(&planar, 3.0).is_err());
    }

    #[test]
    fn fourier_side_random() {
        for t in 0..4 {
            let rho = random_neutral(1, &mut trial_rng(3, t));
            for alpha in [1.0, 2.5, 3.0, 3.5] {
                let direct = f_alpha_form(&rho, alpha).unwrap();
                let spectral = fourier_side(&rho, alpha).unwrap();
                assert!(((spectral - direct) / direct).abs() < 1e-4, "alpha {alpha}: {spectral} vs {direct}");
            }
        }
    }

    fn rotation(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        g.qr().q()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn scaling_law(seed in 0u64..10_000, n in 1usize..4, alpha in 0.3f64..4.0, lambda in 0.2f64..3.0) {
            let rho = random_neutral(n, &mut trial_rng(seed, 0));
            let f = f_alpha_form(&rho, alpha).unwrap();
            let g = f_alpha_form(&rho.scaled(lambda), alpha).unwrap();
            prop_assert!((g - lambda.powf(alpha) * f).abs() <= 1e-10 * f.abs().max(1e-3));
        }

        #[test]
        fn rotation_and_permutation_invariance(seed in 0u64..10_000, n in 2usize..4, alpha in 0.3f64..4.0) {
            let rho = random_neutral(n, &mut trial_rng(seed, 1));
            let f = f_alpha_form(&rho, alpha).unwrap();
            let g = f_alpha_form(&rho.linear_map(&rotation(n, seed)), alpha).unwrap();
            prop_assert!((g - f).abs() <= 1e-10 * f.abs().max(1e-3));
            let k = rho.len();
            let perm: Vec<usize> = (0..k).map(|i| (i * 5 + 3) % k).collect();
            let coords = perm.iter().flat_map(|&i| rho.point(i).to_vec()).collect();
            let weights = perm.iter().map(|&i| rho.weights()[i]).collect();
            if let Ok(p) = NeutralMeasure::new(n, coords, weights) {
                prop_assert!((f_alpha_form(&p, alpha).unwrap() - f).abs() <= 1e-10 * f.abs().max(1e-3));
            }
        }

        #[test]
        fn midpoint_energy_is_lower(seed in 0u64..10_000, n in 1usize..4, alpha in 2.2f64..3.8) {
            let mut rng = trial_rng(seed, 2);
            let mut cloud = |count: usize| {
                let pts = (0..count).map(|_| unit_ball_point(n, &mut rng)).collect();
                DiscreteMeasure::uniform(n, pts).unwrap().centered()
            };
            let m0 = cloud(5);
            let m1 = cloud(7);
            let k = Kernel::from_exponents(alpha, 2.0, n).unwrap();
            let e0 = k.interaction_energy(&m0).unwrap();
            let e1 = k.interaction_energy(&m1).unwrap();
            let em = k.interaction_energy(&m0.mixture(&m1, 0.5).unwrap()).unwrap();
            prop_assert!(em < 0.5 * (e0 + e1) - 1e-12);
        }
    }
}
