//! Stationary power spectra and the asymptotic covariance matrix.
//!
//! The covariance is computed two independent ways: adaptive quadrature of
//! the spectra built from the susceptibility matrix, and a residue sum over
//! the roots of `h` in which the Matsubara ladder of `coth(omega/2T)`
//! collapses into digamma functions.

mod analytic;
pub mod gk;
mod quadrature;

use nalgebra::Matrix4;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{spectral_density, susceptibility, ModelParams};
use crate::specfun::coth_thermal;

pub use analytic::{analytic_split, covariance_analytic, AnalyticSplit};
pub use quadrature::covariance_quadrature;

/// Index of each quadrature in `R = {x1, p1, x2, p2}`.
pub const X1: usize = 0;
pub const P1: usize = 1;
pub const X2: usize = 2;
pub const P2: usize = 3;

/// Entrywise tolerance on the x-p blocks.
pub const COVARIANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Quadrature,
    Analytic,
    /// Closed-form model states (thermal, effective model, synthetic).
    ClosedForm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::Analytic => "analytic",
            Method::ClosedForm => "closed_form",
        }
    }
}

/// Symmetrised second moments `Gamma_ij = <R_i R_j> - [R_i, R_j]/2`, vacuum = I/2.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    matrix: Matrix4<f64>,
    pub params: Option<ModelParams>,
    pub method: Method,
    pub error_estimate: f64,
}

impl CovarianceMatrix {
    /// Any symmetric 4x4 matrix in `(x1, p1, x2, p2)` order.
    pub fn from_matrix(matrix: Matrix4<f64>) -> Self {
        let matrix = (matrix + matrix.transpose()) * 0.5;
        CovarianceMatrix { matrix, params: None, method: Method::ClosedForm, error_estimate: 0.0 }
    }

    /// Builds the matrix from its position and momentum blocks; x-p entries
    /// are set from `xp[i][j] = Gamma(p_i, x_j)`.
    pub fn from_blocks(xx: [[f64; 2]; 2], pp: [[f64; 2]; 2], px: [[f64; 2]; 2]) -> Self {
        let xs = [X1, X2];
        let ps = [P1, P2];
        let mut m = Matrix4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                m[(xs[i], xs[j])] = 0.5 * (xx[i][j] + xx[j][i]);
                m[(ps[i], ps[j])] = 0.5 * (pp[i][j] + pp[j][i]);
                m[(ps[i], xs[j])] = px[i][j];
                m[(xs[j], ps[i])] = px[i][j];
            }
        }
        CovarianceMatrix { matrix: m, params: None, method: Method::ClosedForm, error_estimate: 0.0 }
    }

    pub fn vacuum() -> Self {
        CovarianceMatrix::from_matrix(Matrix4::identity() * 0.5)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.matrix
    }

    /// `<x_i x_j>` with modes numbered 1 and 2.
    pub fn x(&self, i: usize, j: usize) -> f64 {
        self.matrix[(2 * (i - 1), 2 * (j - 1))]
    }

    /// `<p_i p_j>` with modes numbered 1 and 2.
    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.matrix[(2 * (i - 1) + 1, 2 * (j - 1) + 1)]
    }

    pub fn position_block(&self) -> [[f64; 2]; 2] {
        [[self.x(1, 1), self.x(1, 2)], [self.x(2, 1), self.x(2, 2)]]
    }

    pub fn momentum_block(&self) -> [[f64; 2]; 2] {
        [[self.p(1, 1), self.p(1, 2)], [self.p(2, 1), self.p(2, 2)]]
    }

    /// Largest |entry| of the position-momentum cross blocks.
    pub fn max_cross_block(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for x in [X1, X2] {
            for p in [P1, P2] {
                worst = worst.max(self.matrix[(x, p)].abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.amax()
    }

    /// Checks symmetry, positive diagonal, vanishing x-p blocks and
    /// Heisenberg positivity.
    pub fn check_invariants(&self) -> Result<()> {
        let nu_minus = crate::gaussian::spectrum(self).nu_minus;
        let diag_ok = (0..4).all(|i| self.matrix[(i, i)] > 0.0);
        let cross_ok = self.max_cross_block() <= COVARIANCE_TOL * self.max_abs().max(1.0);
        if !(diag_ok && cross_ok && nu_minus >= 1.0 - crate::gaussian::SYMPLECTIC_TOL) {
            return Err(Error::UnphysicalState { nu_minus });
        }
        Ok(())
    }

    pub(crate) fn with_origin(mut self, params: ModelParams, method: Method, error_estimate: f64) -> Self {
        self.params = Some(params);
        self.method = method;
        self.error_estimate = error_estimate;
        self
    }
}

/// One frequency sample of the stationary spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSpectrumEval {
    pub omega: f64,
    /// Symmetrised `<x_i x_j>_omega = sum_{kl} alpha_ik(w) alpha_jl(-w) pi J(w) coth(w/2T)`.
    pub values: [[Complex64; 2]; 2],
    /// The same product with `pi J(w)` in place of `pi J(w) coth(w/2T)`; it
    /// only feeds the non-symmetrised correlator and cancels from `Gamma`.
    pub one_part: [[Complex64; 2]; 2],
}

impl PowerSpectrumEval {
    /// Real part of the symmetrised position spectrum.
    pub fn position(&self) -> [[f64; 2]; 2] {
        let v = &self.values;
        [[v[0][0].re, v[0][1].re], [v[1][0].re, v[1][1].re]]
    }

    /// `<p_i p_j>_omega = omega^2 <x_i x_j>_omega`.
    pub fn momentum(&self) -> [[f64; 2]; 2] {
        let w2 = self.omega * self.omega;
        let x = self.position();
        [[w2 * x[0][0], w2 * x[0][1]], [w2 * x[1][0], w2 * x[1][1]]]
    }

    /// `<p_i x_j>_omega = -i omega <x_i x_j>_omega`.
    pub fn momentum_position(&self) -> [[Complex64; 2]; 2] {
        let f = Complex64::new(0.0, -self.omega);
        let v = &self.values;
        [[f * v[0][0], f * v[0][1]], [f * v[1][0], f * v[1][1]]]
    }

    /// Largest imaginary part among the symmetrised values.
    pub fn max_imaginary(&self) -> f64 {
        self.values.iter().flatten().map(|v| v.im.abs()).fold(0.0, f64::max)
    }
}

/// Stationary position spectra at a real frequency.
pub fn position_spectrum(p: &ModelParams, omega: f64) -> Result<PowerSpectrumEval> {
    let alpha = susceptibility(p, Complex64::new(omega, 0.0))?;
    // F couples to x1 + x2, so each response is a row sum of alpha.
    let resp = alpha.row_sums();
    let force = PI * spectral_density(p, omega);
    let thermal = force * coth_thermal(omega, p.temperature);
    let mut values = [[Complex64::new(0.0, 0.0); 2]; 2];
    let mut one_part = values;
    for i in 0..2 {
        for j in 0..2 {
            // alpha(-omega) = conj(alpha(omega)) on the real axis
            let product = resp[i] * resp[j].conj();
            values[i][j] = product * thermal;
            one_part[i][j] = product * force;
        }
    }
    Ok(PowerSpectrumEval { omega, values, one_part })
}
