use std::f64::consts::PI;

use super::gk::{integrate, Tolerance};
use super::{position_spectrum, CovarianceMatrix, Method};
use crate::error::Result;
use crate::model::{build_h_polynomial, find_roots, validate_params, ModelParams};

/// Breakpoints on `[0, inf)`: the origin, each resonance peak and a ladder
/// of offsets scaled by the peak width, so narrow Lorentzians at weak
/// damping are resolved from the first pass.
fn breakpoints(p: &ModelParams) -> Result<(Vec<f64>, f64)> {
    let roots = find_roots(&build_h_polynomial(p))?;
    let mut points = vec![0.0];
    for z in roots.roots.iter().filter(|z| z.re > 0.0) {
        points.push(z.re);
        for m in [1.0, 4.0, 16.0, 64.0] {
            let d = m * z.im.abs();
            points.push(z.re + d);
            if z.re - d > 0.0 {
                points.push(z.re - d);
            }
        }
    }
    let top = points.iter().copied().fold(0.0, f64::max);
    let tail_start = (2.0 * top).max(p.omega_c).max(1.0);
    points.push(tail_start);
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1e-300));
    Ok((points, tail_start))
}

/// Asymptotic covariance by adaptive quadrature of the power spectra.
///
/// The symmetrised integrands are even in omega, so
/// `Gamma = (1/pi) ∫_0^inf <R_i R_j>_omega d omega`.
pub fn covariance_quadrature(p: &ModelParams) -> Result<CovarianceMatrix> {
    let p = validate_params(*p)?;
    let (points, tail) = breakpoints(&p)?;
    let integrand = |w: f64| -> [f64; 7] {
        if w <= 0.0 {
            return [0.0; 7];
        }
        let s = position_spectrum(&p, w).expect("susceptibility is regular on the real axis for stable parameters");
        let x = s.position();
        let m = s.momentum();
        let px = s.momentum_position();
        [x[0][0], x[0][1], x[1][1], m[0][0], m[0][1], m[1][1], px[0][1].re]
    };
    let est = integrate(integrand, &points, Some(tail), Tolerance::default())?;
    let v: Vec<f64> = est.value.iter().map(|v| v / PI).collect();
    let xx = [[v[0], v[1]], [v[1], v[2]]];
    let pp = [[v[3], v[4]], [v[4], v[5]]];
    // <p1 x2> = -<p2 x1> by stationarity of <x1 x2>
    let px = [[0.0, v[6]], [-v[6], 0.0]];
    let error = est.error.iter().fold(0.0f64, |a, e| a.max(e / PI));
    Ok(CovarianceMatrix::from_blocks(xx, pp, px).with_origin(p, Method::Quadrature, error))
}
