//! Gamma function and closed-form constants for power-law interactions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// sin(πz) with exact argument reduction.
fn sin_pi(z: f64) -> f64 {
    let k = z.round();
    let s = (PI * (z - k)).sin();
    if (k as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Euler's Gamma function on the real line.
///
/// Lanczos approximation (g = 7, nine coefficients) for z ≥ 1/2 and the
/// reflection formula below that. Nonpositive integers are poles.
pub fn gamma(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("gamma of non-finite argument {z}")));
    }
    if z <= 0.0 && z == z.floor() {
        return Err(Error::Pole(z));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: f64) -> f64 {
    if z < 0.5 {
        PI / (sin_pi(z) * gamma_unchecked(1.0 - z))
    } else {
        let x = z - 1.0;
        let mut a = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// Surface measure of the unit sphere S^{n-1} ⊂ R^n: 2π^{n/2}/Γ(n/2).
pub fn omega_n(n: usize) -> f64 {
    assert!(n >= 1, "omega_n needs n >= 1");
    2.0 * PI.powf(n as f64 / 2.0) / gamma_unchecked(n as f64 / 2.0)
}

/// C(α) = 2^{α+n/2} Γ((α+n)/2) / Γ(−α/2), defined for α ∈ (0,2) ∪ (2,4).
///
/// Negative on (0,2), positive on (2,4). This constant belongs with the
/// unitary Fourier convention; see [`fourier_kernel_constant`] for the
/// e^{-2πiξ·x} convention.
pub fn c_of_alpha(alpha: f64, n: usize) -> Result<f64> {
    check_fourier_window(alpha)?;
    let nf = n as f64;
    Ok(2f64.powf(alpha + nf / 2.0) * gamma((alpha + nf) / 2.0)? / gamma(-alpha / 2.0)?)
}

/// Constant c with ∬|x−y|^α dρ dρ = c ∫ |ξ|^{−α−n} |ρ̂(ξ)|² dξ when
/// ρ̂(ξ) = ∫ e^{−2πiξ·x} dρ(x): π^{−α−n/2} Γ((α+n)/2)/Γ(−α/2),
/// i.e. C(α)·(2π)^{−α−n/2}.
pub fn fourier_kernel_constant(alpha: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    Ok(c_of_alpha(alpha, n)? * (2.0 * PI).powf(-alpha - nf / 2.0))
}

fn check_fourier_window(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 4.0) || alpha == 2.0 {
        return Err(Error::Domain(format!("alpha = {alpha} outside (0,2) ∪ (2,4)")));
    }
    Ok(())
}

/// Exponents (α, β) of W_{α,β}(x) = |x|^α/α − |x|^β/β on R^n.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub alpha: f64,
    pub beta: f64,
    pub dim: usize,
}

impl KernelParams {
    /// Requires −n < β < α.
    pub fn new(alpha: f64, beta: f64, dim: usize) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::Domain("non-finite kernel exponent".into()));
        }
        if dim == 0 {
            return Err(Error::Domain("dimension must be positive".into()));
        }
        if alpha <= beta {
            return Err(Error::Domain(format!("need alpha > beta, got ({alpha}, {beta})")));
        }
        if beta <= -(dim as f64) {
            return Err(Error::Domain(format!("need beta > -n, got beta = {beta}, n = {dim}")));
        }
        Ok(Self { alpha, beta, dim })
    }

    /// β = 2 and 2 < α < 4 for n ≥ 2, or β = 2 < α − 1 for n = 1.
    pub fn in_shell_window(&self) -> bool {
        self.beta == 2.0
            && if self.dim >= 2 {
                self.alpha > 2.0 && self.alpha < 4.0
            } else {
                self.alpha > 3.0
            }
    }
}

/// The radius R_{α,β} at which the centered spherical shell is steady,
/// evaluated exactly as the closed form
///
/// R = ½ [Γ((β+n−1)/2) Γ(α/2+n−1) / (Γ(β/2+n−1) Γ((α+n−1)/2))]^{1/(α−β)}.
pub fn shell_radius_closed_form(p: &KernelParams) -> Result<f64> {
    let (a, b, n) = (p.alpha, p.beta, p.dim as f64);
    let ratio = gamma((b + n - 1.0) / 2.0)? * gamma(a / 2.0 + n - 1.0)?
        / (gamma(b / 2.0 + n - 1.0)? * gamma((a + n - 1.0) / 2.0)?);
    Ok(0.5 * ratio.powf(1.0 / (a - b)))
}

/// Stability threshold β* = ((3−n)α − 10 + 7n − n²)/(α + n − 3).
pub fn beta_star(alpha: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    let den = alpha + nf - 3.0;
    if den == 0.0 {
        return Err(Error::Domain(format!("beta_star undefined at alpha + n = 3 (alpha = {alpha})")));
    }
    Ok(((3.0 - nf) * alpha - 10.0 + 7.0 * nf - nf * nf) / den)
}

/// Positive zero of r^α/α − r^β/β and its limit e^{1/β} as α ↓ β.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiameterBound {
    pub zero: f64,
    pub limit: f64,
}

pub fn diameter_bound(p: &KernelParams) -> Result<DiameterBound> {
    if p.beta <= 0.0 {
        return Err(Error::Domain(format!("diameter bound needs beta > 0, got {}", p.beta)));
    }
    Ok(DiameterBound {
        zero: (p.alpha / p.beta).powf(1.0 / (p.alpha - p.beta)),
        limit: (1.0 / p.beta).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_values() {
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(5.0).unwrap(), 24.0) < 1e-14);
        assert!(rel(gamma(-1.5).unwrap(), 4.0 * PI.sqrt() / 3.0) < 1e-14);
        assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-15);
        // 29! as an exact integer in f64 range
        let fact29: f64 = (1..=29).map(|k| k as f64).product();
        assert!(rel(gamma(30.0).unwrap(), fact29) < 1e-13);
    }

    #[test]
    fn gamma_poles() {
        for z in [0.0, -1.0, -2.0, -17.0] {
            assert!(matches!(gamma(z), Err(Error::Pole(_))));
        }
    }

    #[test]
    fn gamma_recurrence_on_grid() {
        let mut z: f64 = -10.0 + 0.013;
        while z < 10.0 {
            if (z + 1.0).fract().abs() > 1e-9 {
                let lhs = gamma(z + 1.0).unwrap();
                let rhs = z * gamma(z).unwrap();
                assert!(rel(lhs, rhs) < 1e-12, "z = {z}: {lhs} vs {rhs}");
            }
            z += 0.0371;
        }
    }

    #[test]
    fn sphere_areas() {
        assert!(rel(omega_n(2), 2.0 * PI) < 1e-15);
        assert!(rel(omega_n(3), 4.0 * PI) < 1e-15);
        assert!(rel(omega_n(4), 2.0 * PI * PI) < 1e-14);
        assert!(rel(omega_n(1), 2.0) < 1e-15);
    }

    #[test]
    fn c_of_alpha_signs_and_value() {
        assert!(c_of_alpha(1.0, 1).unwrap() < 0.0);
        assert!(c_of_alpha(3.0, 2).unwrap() > 0.0);
        let expected = 2f64.powf(3.5) / (4.0 * PI.sqrt() / 3.0);
        let got = c_of_alpha(3.0, 1).unwrap();
        assert!(rel(got, expected) < 1e-13);
        assert!((got - 4.7871).abs() < 5e-4);
        for bad in [2.0, 0.0, 4.0, -1.0, 5.0] {
            assert!(c_of_alpha(bad, 2).is_err());
        }
    }

    #[test]
    fn c_of_alpha_changes_sign_only_at_two() {
        for n in 1..=4 {
            let mut prev: Option<f64> = None;
            let mut changes = Vec::new();
            for i in 1..400 {
                let a = i as f64 * 0.01;
                if a == 2.0 {
                    continue;
                }
                let s = c_of_alpha(a, n).unwrap().signum();
                if let Some(p) = prev {
                    if p != s {
                        changes.push(a);
                    }
                }
                prev = Some(s);
            }
            assert_eq!(changes.len(), 1);
            assert!((changes[0] - 2.01).abs() < 1e-9);
        }
    }

    #[test]
    fn shell_radius_examples() {
        let r = |a, b, n| shell_radius_closed_form(&KernelParams::new(a, b, n).unwrap()).unwrap();
        assert!((r(4.0, 2.0, 2) - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((r(4.0, 2.0, 3) - (3.0f64 / 8.0).sqrt()).abs() < 1e-14);
        assert!((r(3.0, 2.0, 2) - 3.0 * PI / 16.0).abs() < 1e-14);
        for n in 1..=8 {
            let nf = n as f64;
            assert!((r(4.0, 2.0, n) - (nf / (2.0 * nf + 2.0)).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn beta_star_examples() {
        assert!((beta_star(4.0, 2).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((beta_star(4.0, 3).unwrap() - 0.5).abs() < 1e-15);
        assert!((beta_star(3.0, 2).unwrap() - 1.5).abs() < 1e-15);
        assert!(beta_star(1.0, 2).is_err());
    }

    #[test]
    fn diameter_bound_examples() {
        let b = |a, bt| diameter_bound(&KernelParams::new(a, bt, 2).unwrap()).unwrap();
        let d = b(4.0, 2.0);
        assert!((d.zero - 2f64.sqrt()).abs() < 1e-15);
        assert!((d.limit - 0.5f64.exp()).abs() < 1e-15);
        assert!((b(3.0, 2.0).zero - 1.5).abs() < 1e-15);
        assert!((b(2.01, 2.0).zero - 0.5f64.exp()).abs() < 3e-3);
        for (a, bt) in [(4.0, 2.0), (2.5, 0.5), (10.0, 9.9), (3.0, 0.1), (2.0001, 2.0)] {
            let d = b(a, bt);
            assert!(d.zero < d.limit);
        }
        assert!(diameter_bound(&KernelParams::new(3.0, -0.5, 2).unwrap()).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(KernelParams::new(2.0, 2.0, 2).is_err());
        assert!(KernelParams::new(2.0, 3.0, 2).is_err());
        assert!(KernelParams::new(2.0, -2.0, 2).is_err());
        assert!(KernelParams::new(2.0, -1.5, 2).is_ok());
    }
}
