//! Closed-form approximations used as independent cross-checks of the
//! exact engine: weak-dissipation covariances, first-order roots, and the
//! closed two-oscillator model that explains bath-induced entanglement.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{build_h_polynomial, ModelParams, RootSet};
use crate::spectral::CovarianceMatrix;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The approximation was evaluated outside the regime it was derived for.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainWarning {
    pub reasons: Vec<String>,
}

impl std::fmt::Display for DomainWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "outside validity region: {}", self.reasons.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakDissipation {
    pub x_sq: [f64; 2],
    pub p_sq: [f64; 2],
    pub x1x2: f64,
    pub p1p2: f64,
    pub warning: Option<DomainWarning>,
}

impl WeakDissipation {
    pub fn to_covariance(&self) -> CovarianceMatrix {
        CovarianceMatrix::from_blocks(
            [[self.x_sq[0], self.x1x2], [self.x1x2, self.x_sq[1]]],
            [[self.p_sq[0], self.p1p2], [self.p1p2, self.p_sq[1]]],
            [[0.0; 2]; 2],
        )
    }
}

fn weak_domain(p: &ModelParams) -> Option<DomainWarning> {
    let mut reasons = Vec::new();
    if p.k != 0.0 {
        reasons.push(format!("k = {} (formulas assume k = 0)", p.k));
    }
    if p.gamma / p.omega_c >= 0.01 {
        reasons.push(format!("gamma/omega_c = {:e} >= 0.01", p.gamma / p.omega_c));
    }
    let w_min = p.omega1.min(p.omega2);
    if p.temperature > 0.1 * w_min {
        reasons.push(format!("T = {} > 0.1 min(omega_i)", p.temperature));
    }
    (!reasons.is_empty()).then_some(DomainWarning { reasons })
}

/// Low-temperature, weak-dissipation covariances for `k = 0`.
///
/// In `<x_i^2>` the `-1/2` belongs inside the logarithm bracket multiplied
/// by `4/omega_c^2`; the other grouping is dimensionally inconsistent and
/// misses the exact engine by far more (see the tests).
pub fn weak_dissipation_covariances(p: &ModelParams) -> WeakDissipation {
    let (g, wc) = (p.gamma, p.omega_c);
    let w = [p.omega1, p.omega2];
    let x_sq = w.map(|wi| {
        1.0 / (2.0 * wi)
            - g / (2.0 * PI) * ((2.0 * wc - PI * wi) / (wi * wi * wc) + 4.0 / (wc * wc) * ((wc / wi).ln() - 0.5))
    });
    let p_sq = w.map(|wi| 0.5 * wi + g / (2.0 * PI) * (3.0 * PI * wi / wc - 2.0 + 4.0 * (wc / wi).ln()));
    let (w1, w2) = (p.omega1, p.omega2);
    let diff = w1 * w1 - w2 * w2;
    let x1x2 = g / (PI * diff) * 2.0 * (w2 / w1).ln();
    let p1p2 = g * 16f64.ln() / (2.0 * PI)
        + g * (w1 * w1 * (wc * wc / (4.0 * w1 * w1)).ln() - w2 * w2 * (wc * wc / (4.0 * w2 * w2)).ln()) / (PI * diff);
    WeakDissipation { x_sq, p_sq, x1x2, p1p2, warning: weak_domain(p) }
}

/// First-order roots for `k = 0`, `gamma/omega_c << 1`, in the upper half
/// plane: `±w_i ± gamma wc/(w_i ∓ i wc)` and the shifted cutoff root.
///
/// These are roots of `h(-omega)`; compare with `find_roots(..).reflected()`.
/// Residuals are `|h(-z)|`.
pub fn perturbative_roots(p: &ModelParams) -> RootSet {
    let (g, wc) = (p.gamma, p.omega_c);
    let mut roots = Vec::with_capacity(5);
    for wi in [p.omega1, p.omega2] {
        for s in [1.0, -1.0] {
            roots.push(s * wi + s * g * wc / (wi - s * I * wc));
        }
    }
    let (w1s, w2s, wcs) = (p.omega1 * p.omega1, p.omega2 * p.omega2, wc * wc);
    let shift = 2.0 * g * wcs * (w1s + w2s + 2.0 * wcs) / ((w1s + wcs) * (w2s + wcs));
    roots.push(I * wc - I * shift);
    let h = build_h_polynomial(p);
    let residuals = roots.iter().map(|z| h.eval(-z).norm()).collect();
    RootSet { multiplicities: vec![1; roots.len()], roots, residuals }
}

/// Closed two-oscillator model with potential `[[w1^2, g], [g, w2^2]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveModelParams {
    pub omega1: f64,
    pub omega2: f64,
    pub coupling: f64,
    pub temperature: f64,
}

impl EffectiveModelParams {
    /// Bath-induced coupling only: `w_i^2 + Omega^2` on the diagonal, `Omega^2` off it.
    pub fn bath_induced(p: &ModelParams) -> Self {
        let om2 = p.omega_sq();
        EffectiveModelParams {
            omega1: (p.omega1 * p.omega1 + om2).sqrt(),
            omega2: (p.omega2 * p.omega2 + om2).sqrt(),
            coupling: om2,
            temperature: p.temperature,
        }
    }

    /// Mechanical and bath-induced couplings combined into `Omega^2 - k`.
    pub fn combined(p: &ModelParams) -> Self {
        let om2 = p.omega_sq();
        EffectiveModelParams {
            omega1: (p.omega1 * p.omega1 + om2 + p.k).sqrt(),
            omega2: (p.omega2 * p.omega2 + om2 + p.k).sqrt(),
            coupling: om2 - p.k,
            temperature: p.temperature,
        }
    }
}

fn thermal_factor(freq: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        1.0
    } else {
        1.0 / (freq / (2.0 * temperature)).tanh()
    }
}

/// Gibbs-state covariance via the normal modes of the potential matrix.
pub fn effective_model_covariance(e: &EffectiveModelParams) -> Result<CovarianceMatrix> {
    let (v11, v22, g) = (e.omega1 * e.omega1, e.omega2 * e.omega2, e.coupling);
    let mean = 0.5 * (v11 + v22);
    let half_gap = (0.25 * (v11 - v22).powi(2) + g * g).sqrt();
    let lambdas = [mean + half_gap, mean - half_gap];
    if let Some(&omega_sq) = lambdas.iter().find(|l| **l <= 0.0) {
        return Err(Error::UnstablePotential { omega_sq });
    }
    // eigenvector of the larger eigenvalue is (cos t, sin t)
    let theta = 0.5 * (2.0 * g).atan2(v11 - v22);
    let (c, s) = (theta.cos(), theta.sin());
    let vecs = [[c, s], [-s, c]];
    let mut xx = [[0.0; 2]; 2];
    let mut pp = [[0.0; 2]; 2];
    for (m, &lambda) in lambdas.iter().enumerate() {
        let freq = lambda.sqrt();
        let coth = thermal_factor(freq, e.temperature);
        let q = coth / (2.0 * freq);
        let mom = 0.5 * freq * coth;
        for i in 0..2 {
            for j in 0..2 {
                xx[i][j] += vecs[m][i] * vecs[m][j] * q;
                pp[i][j] += vecs[m][i] * vecs[m][j] * mom;
            }
        }
    }
    Ok(CovarianceMatrix::from_blocks(xx, pp, [[0.0; 2]; 2]))
}

/// Entanglement test in EPR variables: `<eta_-^2><pi_+^2> < 1/4`.
pub fn epr_threshold_entangled(gamma: &CovarianceMatrix) -> bool {
    let (_, epr) = crate::gaussian::purities_and_epr(gamma);
    epr.eta_minus * epr.pi_plus < 0.25
}
