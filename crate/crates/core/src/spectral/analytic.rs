use num_complex::Complex64;
use std::f64::consts::PI;

use super::{CovarianceMatrix, Method};
use crate::error::Result;
use crate::model::{build_h_polynomial, find_roots, validate_params, ModelParams};
use crate::poly::Poly;
use crate::specfun::{digamma, partial_fractions, PartialFraction};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Covariance entries split into the part linear in `T` (the classical
/// mean value) and the digamma sum of quantum corrections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticSplit {
    pub classical_xx: [[f64; 2]; 2],
    pub classical_pp: [[f64; 2]; 2],
    pub quantum_xx: [[f64; 2]; 2],
    pub quantum_pp: [[f64; 2]; 2],
}

/// `∫ dω/2π F(ω) coth(ω/2T)` for a rational `F` given by its simple poles.
///
/// Requires `F` to vanish at the origin and to decay at least like `ω^-2`.
/// Closing the contour in the lower half plane picks up the poles of `F`
/// and the Matsubara ladder `-2πinT`; after the reflection formula for
/// upper-half-plane poles every digamma argument has real part above one:
///
/// `-(1/π)[Σ_up r ψ(1 - ip/2πT) + Σ_down r ψ(1 + iq/2πT)] - 2iT Σ_down r/q`.
///
/// Returns `(classical, quantum)`; at `T = 0` the digammas become logarithms.
fn thermal_integral(pf: &PartialFraction, temperature: f64) -> Result<(Complex64, Complex64)> {
    let mut classical = Complex64::new(0.0, 0.0);
    let mut quantum = Complex64::new(0.0, 0.0);
    for &(pole, r) in &pf.terms {
        // -i p for upper poles and i q for lower poles both have positive real part
        let arg = if pole.im > 0.0 { -I * pole } else { I * pole };
        if temperature == 0.0 {
            quantum -= r * arg.ln() / PI;
        } else {
            quantum -= r * digamma(1.0 + arg / (2.0 * PI * temperature))? / PI;
            if pole.im < 0.0 {
                classical -= 2.0 * I * temperature * r / pole;
            }
        }
    }
    Ok((classical, quantum))
}

/// Asymptotic covariance from the residues of the spectral kernel.
///
/// With `n_1 = w2^2 + 2k - ω^2` and `n_2 = w1^2 + 2k - ω^2`, the force response
/// is `A_i(ω) = n_i (ω_c - iω) / h(ω)` and the position kernel reduces to
/// `2γω_c^2 ω n_i n_j / (h(ω) h(-ω))`, with poles at `±z_k`.
pub fn covariance_analytic(p: &ModelParams) -> Result<CovarianceMatrix> {
    covariance_analytic_split(p).map(|(g, _)| g)
}

pub(crate) fn covariance_analytic_split(p: &ModelParams) -> Result<(CovarianceMatrix, AnalyticSplit)> {
    let p = validate_params(*p)?;
    let h = build_h_polynomial(&p);
    let roots = find_roots(&h)?;
    let lead = h.poly().leading();
    let mut poles = roots.roots.clone();
    poles.extend(roots.roots.iter().map(|z| -z));
    let leading = -lead * lead;

    let two_k = 2.0 * p.k;
    let n = [
        Poly::from_real(&[p.omega2 * p.omega2 + two_k, 0.0, -1.0]),
        Poly::from_real(&[p.omega1 * p.omega1 + two_k, 0.0, -1.0]),
    ];
    let prefactor = Poly::from_real(&[0.0, 2.0 * p.gamma * p.omega_c * p.omega_c]);
    let omega_sq = Poly::from_real(&[0.0, 0.0, 1.0]);

    let mut split = AnalyticSplit {
        classical_xx: [[0.0; 2]; 2],
        classical_pp: [[0.0; 2]; 2],
        quantum_xx: [[0.0; 2]; 2],
        quantum_pp: [[0.0; 2]; 2],
    };
    let mut xx = [[0.0; 2]; 2];
    let mut pp = [[0.0; 2]; 2];
    let mut imaginary: f64 = 0.0;
    let mut magnitude: f64 = 0.0;
    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        let position = prefactor.mul(&n[i]).mul(&n[j]);
        let momentum = position.mul(&omega_sq);
        for (numerator, is_momentum) in [(position, false), (momentum, true)] {
            let pf = partial_fractions(&numerator, &poles, leading)?;
            let (classical, quantum) = thermal_integral(&pf, p.temperature)?;
            let total = classical + quantum;
            imaginary = imaginary.max(total.im.abs());
            magnitude = magnitude.max(pf.terms.iter().map(|(_, r)| r.norm()).sum::<f64>());
            let (c, q, out) = if is_momentum {
                (&mut split.classical_pp, &mut split.quantum_pp, &mut pp)
            } else {
                (&mut split.classical_xx, &mut split.quantum_xx, &mut xx)
            };
            for (a, b) in [(i, j), (j, i)] {
                c[a][b] = classical.re;
                q[a][b] = quantum.re;
                out[a][b] = total.re;
            }
        }
    }
    let error = imaginary.max(64.0 * f64::EPSILON * magnitude);
    let g = CovarianceMatrix::from_blocks(xx, pp, [[0.0; 2]; 2]).with_origin(p, Method::Analytic, error);
    Ok((g, split))
}

/// Classical and quantum parts of the analytic covariance.
pub fn analytic_split(p: &ModelParams) -> Result<AnalyticSplit> {
    covariance_analytic_split(p).map(|(_, s)| s)
}
