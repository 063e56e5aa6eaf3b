//! Zeros of a channel's transfer function.
//!
//! The channel `f_0 + f_1 z⁻¹ + ... + f_{L-1} z^{-(L-1)}` has the same zeros
//! as the ordinary polynomial `f_0 z^{L-1} + f_1 z^{L-2} + ... + f_{L-1}`.
//! All zeros are found at once by Aberth–Ehrlich iteration, with
//! Durand–Kerner as a fallback when Aberth stalls.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{input, Result};

const RESIDUAL_TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootMethod {
    None,
    Aberth,
    DurandKerner,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootCheck {
    /// Root coordinates as `[re, im]` pairs.
    pub roots: Vec<[f64; 2]>,
    pub moduli: Vec<f64>,
    /// `max_i | |z_i| - 1 |`, zero for an empty root set.
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub method: RootMethod,
    pub converged: bool,
}

/// Coefficients are highest degree first.
fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `|p(z)|` relative to `Σ |c_i| |z|^(n-i)`, the rounding scale of Horner.
fn relative_residual(coeffs: &[f64], z: Complex64) -> f64 {
    let (p, _) = horner(coeffs, z);
    let r = z.norm();
    let scale = coeffs.iter().fold(0.0, |acc, c| acc * r + c.abs());
    p.norm() / scale.max(f64::MIN_POSITIVE)
}

fn initial_guesses(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let radius = (coeffs[n].abs() / coeffs[0].abs())
        .powf(1.0 / n as f64)
        .max(1e-3);
    (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

fn converged(coeffs: &[f64], z: &[Complex64]) -> bool {
    z.iter()
        .all(|&zi| relative_residual(coeffs, zi) <= RESIDUAL_TOLERANCE)
}

fn aberth(coeffs: &[f64], z: &mut [Complex64]) -> bool {
    for _ in 0..MAX_ITERATIONS {
        if converged(coeffs, z) {
            return true;
        }
        for k in 0..z.len() {
            let (p, dp) = horner(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..z.len())
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
            }
        }
    }
    converged(coeffs, z)
}

fn durand_kerner(coeffs: &[f64], z: &mut [Complex64]) -> bool {
    let lead = coeffs[0];
    for _ in 0..MAX_ITERATIONS {
        if converged(coeffs, z) {
            return true;
        }
        for k in 0..z.len() {
            let (p, _) = horner(coeffs, z[k]);
            let denom: Complex64 = (0..z.len())
                .filter(|&j| j != k)
                .map(|j| z[k] - z[j])
                .product::<Complex64>()
                * lead;
            let step = p / denom;
            if step.is_finite() {
                z[k] -= step;
            }
        }
    }
    converged(coeffs, z)
}

/// All roots of `coeffs[0] zⁿ + ... + coeffs[n]`; `coeffs[0]` must be nonzero.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<(Vec<Complex64>, RootMethod, bool)> {
    if coeffs.is_empty() || coeffs[0] == 0.0 {
        return input("leading polynomial coefficient must be nonzero");
    }
    // Trailing zero coefficients are roots at the origin.
    let nonzero_tail = coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0);
    let zeros_at_origin = coeffs.len() - 1 - nonzero_tail;
    let reduced = &coeffs[..=nonzero_tail];

    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    if reduced.len() == 1 {
        let method = if roots.is_empty() {
            RootMethod::None
        } else {
            RootMethod::Aberth
        };
        return Ok((roots, method, true));
    }

    let start = initial_guesses(reduced);
    let mut z = start.clone();
    let (method, ok) = if aberth(reduced, &mut z) {
        (RootMethod::Aberth, true)
    } else {
        z = start;
        let ok = durand_kerner(reduced, &mut z);
        (RootMethod::DurandKerner, ok)
    };
    roots.extend(z);
    Ok((roots, method, ok))
}

/// Check whether every zero of the channel lies within `tol` of the unit
/// circle.
pub fn root_check(taps: &[f64], tol: f64) -> Result<RootCheck> {
    if taps.is_empty() {
        return input("channel needs at least one tap");
    }
    let (roots, method, converged) = polynomial_roots(taps)?;
    let moduli: Vec<f64> = roots.iter().map(|z| z.norm()).collect();
    let max_deviation = moduli.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);
    Ok(RootCheck {
        roots: roots.iter().map(|z| [z.re, z.im]).collect(),
        moduli,
        max_deviation,
        tolerance: tol,
        pass: converged && max_deviation <= tol,
        method,
        converged,
    })
}
