//! Two-mode Gaussian measures on `sigma = 2 Gamma`, where a pure state has
//! symplectic eigenvalue 1.

use nalgebra::{Matrix4, SymmetricEigen};

use crate::error::{Error, Result};
use crate::spectral::CovarianceMatrix;

/// Slack on `nu_minus >= 1` for physical states.
pub const SYMPLECTIC_TOL: f64 = 1e-9;

/// `A, B, C, D`: determinants of the mode-1 block, mode-2 block, cross
/// block and full matrix of `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticInvariants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

fn lower_root(delta: f64, det: f64) -> f64 {
    // (delta - sqrt(delta^2 - 4 det)) / 2 without cancellation
    let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
    let upper = 0.5 * (delta + disc);
    if upper > 0.0 {
        det / upper
    } else {
        0.0
    }
}

impl SymplecticInvariants {
    pub fn delta(&self) -> f64 {
        self.a + self.b + 2.0 * self.c
    }

    /// `Delta` of the partially transposed state.
    pub fn delta_transposed(&self) -> f64 {
        self.a + self.b - 2.0 * self.c
    }

    pub fn nu_minus_unchecked(&self) -> f64 {
        lower_root(self.delta(), self.d).sqrt()
    }

    pub fn nu_plus(&self) -> f64 {
        let delta = self.delta();
        (0.5 * (delta + (delta * delta - 4.0 * self.d).max(0.0).sqrt())).sqrt()
    }

    pub fn nu_tilde_minus(&self) -> f64 {
        lower_root(self.delta_transposed(), self.d).sqrt()
    }

    /// Same invariants with the modes exchanged.
    pub fn swapped(&self) -> SymplecticInvariants {
        SymplecticInvariants { a: self.b, b: self.a, ..*self }
    }
}

/// Symplectic form for `(x1, p1, x2, p2)`.
pub fn symplectic_form() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// Below this relative discriminant the two symplectic eigenvalues are close
/// enough that the quadratic formula loses half the digits.
const NEAR_DEGENERATE: f64 = 1e-6;

/// `(nu_minus, nu_plus)` from the symmetric matrix `K^T K` with
/// `K = sigma^{1/2} Omega sigma^{1/2}`, whose eigenvalues are `nu^2`, each twice.
fn eigen_pair(sigma: &Matrix4<f64>) -> (f64, f64) {
    let se = SymmetricEigen::new(*sigma);
    let root = se.eigenvectors
        * Matrix4::from_diagonal(&se.eigenvalues.map(|l| l.max(0.0).sqrt()))
        * se.eigenvectors.transpose();
    let k = root * symplectic_form() * root;
    let mut ev: Vec<f64> = SymmetricEigen::new(k.transpose() * k).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ((0.5 * (ev[0] + ev[1])).max(0.0).sqrt(), (0.5 * (ev[2] + ev[3])).max(0.0).sqrt())
}

fn pair(delta: f64, det: f64, sigma: &Matrix4<f64>) -> (f64, f64) {
    if delta * delta - 4.0 * det <= NEAR_DEGENERATE * delta * delta {
        return eigen_pair(sigma);
    }
    let lo = lower_root(delta, det).sqrt();
    let hi = (0.5 * (delta + (delta * delta - 4.0 * det).sqrt())).sqrt();
    (lo, hi)
}

/// Symplectic eigenvalues of `sigma` and of its partial transpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub nu_tilde_minus: f64,
    pub nu_tilde_plus: f64,
}

/// Invariant formulas, switching to a symmetric eigensolver for
/// near-degenerate pairs (e.g. pure states).
pub fn spectrum(gamma: &CovarianceMatrix) -> Spectrum {
    let inv = symplectic_invariants(gamma);
    let sigma = gamma.matrix() * 2.0;
    let (nu_minus, nu_plus) = pair(inv.delta(), inv.d, &sigma);
    let flip = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
    let (nu_tilde_minus, nu_tilde_plus) = pair(inv.delta_transposed(), inv.d, &(flip * sigma * flip));
    Spectrum { nu_minus, nu_plus, nu_tilde_minus, nu_tilde_plus }
}

fn det2(m: &nalgebra::Matrix4<f64>, r: usize, c: usize) -> f64 {
    m[(r, c)] * m[(r + 1, c + 1)] - m[(r, c + 1)] * m[(r + 1, c)]
}

pub fn symplectic_invariants(gamma: &CovarianceMatrix) -> SymplecticInvariants {
    let sigma = gamma.matrix() * 2.0;
    SymplecticInvariants {
        a: det2(&sigma, 0, 0),
        b: det2(&sigma, 2, 2),
        c: det2(&sigma, 0, 2),
        d: sigma.determinant(),
    }
}

fn physical(gamma: &CovarianceMatrix) -> Result<(SymplecticInvariants, Spectrum)> {
    let inv = symplectic_invariants(gamma);
    let spec = spectrum(gamma);
    if !(inv.d > 0.0 && spec.nu_minus >= 1.0 - SYMPLECTIC_TOL) {
        return Err(Error::UnphysicalState { nu_minus: spec.nu_minus });
    }
    Ok((inv, spec))
}

/// `(nu_minus, nu_plus)` of `sigma`.
pub fn symplectic_eigenvalues(gamma: &CovarianceMatrix) -> Result<(f64, f64)> {
    let (_, spec) = physical(gamma)?;
    Ok((spec.nu_minus, spec.nu_plus))
}

/// `E_N = max(0, -ln nu_tilde_minus)` in nats.
pub fn log_negativity(gamma: &CovarianceMatrix) -> Result<f64> {
    let (_, spec) = physical(gamma)?;
    Ok((-spec.nu_tilde_minus.ln()).max(0.0))
}

/// Von Neumann entropy of a mode with symplectic eigenvalue `x` (sigma convention).
pub fn entropy_function(x: f64) -> f64 {
    let plus = 0.5 * (x + 1.0);
    let minus = 0.5 * (x - 1.0);
    let minus_term = if minus > 0.0 { minus * minus.ln() } else { 0.0 };
    plus * plus.ln() - minus_term
}

/// Smallest determinant of the mode-1 conditional state over all Gaussian
/// measurements on mode 2.
pub fn min_conditional_det(inv: &SymplecticInvariants) -> f64 {
    let SymplecticInvariants { a, b, c, d } = *inv;
    let eps = b - 1.0;
    if eps <= 1e-12 {
        // a pure mode-2 marginal forces a product state: nothing to condition on
        return a;
    }
    if (d - a * b).powi(2) <= (1.0 + b) * c * c * (a + d) {
        let x = eps * (d - a);
        let root = (c * c + x).max(0.0).sqrt();
        (2.0 * c * c + x + 2.0 * c.abs() * root) / (eps * eps)
    } else {
        let radicand = c.powi(4) + (d - a * b).powi(2) - 2.0 * c * c * (a * b + d);
        (a * b - c * c + d - radicand.max(0.0).sqrt()) / (2.0 * b)
    }
}

fn discord_from_invariants(inv: &SymplecticInvariants, spec: &Spectrum) -> f64 {
    let e_min = min_conditional_det(inv).max(1.0);
    let value = entropy_function(inv.b.max(1.0).sqrt())
        - entropy_function(spec.nu_plus.max(1.0))
        - entropy_function(spec.nu_minus.max(1.0))
        + entropy_function(e_min.sqrt());
    value.max(0.0)
}

/// Gaussian discord with the measurement on mode two, in nats.
pub fn gaussian_discord_mode2(gamma: &CovarianceMatrix) -> Result<f64> {
    let (inv, spec) = physical(gamma)?;
    Ok(discord_from_invariants(&inv, &spec))
}

/// Gaussian discord with the measurement on mode one.
pub fn gaussian_discord_mode1(gamma: &CovarianceMatrix) -> Result<f64> {
    let (inv, spec) = physical(gamma)?;
    Ok(discord_from_invariants(&inv.swapped(), &spec))
}

/// Variances of the EPR combinations `(x1 ± x2)/√2`, `(p1 ± p2)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprVariances {
    pub eta_plus: f64,
    pub eta_minus: f64,
    pub pi_plus: f64,
    pub pi_minus: f64,
}

impl EprVariances {
    /// `2 sqrt(<eta_-^2><pi_+^2>)`, which equals `nu_tilde_minus` when the
    /// state factorises in the EPR variables with a stiff relative mode.
    pub fn nu_tilde_proxy(&self) -> f64 {
        2.0 * (self.eta_minus * self.pi_plus).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub log_negativity: f64,
    pub discord_mode2: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub nu_tilde_minus: f64,
    pub purity_global: f64,
    pub purity_mode1: f64,
    pub purity_mode2: f64,
    pub epr: EprVariances,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Purities {
    pub global: f64,
    pub mode1: f64,
    pub mode2: f64,
}

pub fn purities_and_epr(gamma: &CovarianceMatrix) -> (Purities, EprVariances) {
    let inv = symplectic_invariants(gamma);
    let purities = Purities { global: 1.0 / inv.d.sqrt(), mode1: 1.0 / inv.a.sqrt(), mode2: 1.0 / inv.b.sqrt() };
    let (x11, x22, x12) = (gamma.x(1, 1), gamma.x(2, 2), gamma.x(1, 2));
    let (p11, p22, p12) = (gamma.p(1, 1), gamma.p(2, 2), gamma.p(1, 2));
    let epr = EprVariances {
        eta_plus: 0.5 * (x11 + x22 + 2.0 * x12),
        eta_minus: 0.5 * (x11 + x22 - 2.0 * x12),
        pi_plus: 0.5 * (p11 + p22 + 2.0 * p12),
        pi_minus: 0.5 * (p11 + p22 - 2.0 * p12),
    };
    (purities, epr)
}

pub fn correlation_report(gamma: &CovarianceMatrix) -> Result<CorrelationReport> {
    let (inv, spec) = physical(gamma)?;
    let (purities, epr) = purities_and_epr(gamma);
    Ok(CorrelationReport {
        log_negativity: (-spec.nu_tilde_minus.ln()).max(0.0),
        discord_mode2: discord_from_invariants(&inv, &spec),
        nu_minus: spec.nu_minus,
        nu_plus: spec.nu_plus,
        nu_tilde_minus: spec.nu_tilde_minus,
        purity_global: purities.global,
        purity_mode1: purities.mode1,
        purity_mode2: purities.mode2,
        epr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Matrix4;

    fn tmsv(r: f64) -> CovarianceMatrix {
        let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        let sigma = Matrix4::new(
            ch, 0.0, sh, 0.0, //
            0.0, ch, 0.0, -sh, //
            sh, 0.0, ch, 0.0, //
            0.0, -sh, 0.0, ch,
        );
        CovarianceMatrix::from_matrix(sigma * 0.5)
    }

    fn thermal_product(n1: f64, n2: f64) -> CovarianceMatrix {
        CovarianceMatrix::from_matrix(Matrix4::from_diagonal(&nalgebra::Vector4::new(n1, n1, n2, n2)) * 0.5)
    }

    #[test]
    fn eigen_route_agrees_off_degeneracy() {
        let g = CovarianceMatrix::from_blocks([[0.9, 0.3], [0.3, 1.4]], [[0.8, -0.2], [-0.2, 0.6]], [[0.0; 2]; 2]);
        let inv = symplectic_invariants(&g);
        let (lo, hi) = eigen_pair(&(g.matrix() * 2.0));
        assert!((lo - inv.nu_minus_unchecked()).abs() < 1e-13);
        assert!((hi - inv.nu_plus()).abs() < 1e-13);
    }

    #[test]
    fn vacuum() {
        let v = CovarianceMatrix::vacuum();
        assert_eq!(symplectic_eigenvalues(&v).unwrap(), (1.0, 1.0));
        assert_eq!(log_negativity(&v).unwrap(), 0.0);
        assert_eq!(gaussian_discord_mode2(&v).unwrap(), 0.0);
        let r = correlation_report(&v).unwrap();
        assert_eq!((r.purity_global, r.purity_mode1, r.purity_mode2), (1.0, 1.0, 1.0));
        for x in [r.epr.eta_plus, r.epr.eta_minus, r.epr.pi_plus, r.epr.pi_minus] {
            assert_eq!(x, 0.5);
        }
    }

    #[test]
    fn two_mode_squeezed_vacuum() {
        for r in [0.1, 0.5, 1.0, 2.0] {
            let g = tmsv(r);
            let (lo, hi) = symplectic_eigenvalues(&g).unwrap();
            assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12, "{r}: {lo} {hi}");
            assert!((log_negativity(&g).unwrap() - 2.0 * r).abs() < 1e-10);
        }
    }

    #[test]
    fn product_states_are_uncorrelated() {
        let g = thermal_product(3.0, 1.7);
        assert_eq!(log_negativity(&g).unwrap(), 0.0);
        assert!(gaussian_discord_mode2(&g).unwrap().abs() < 1e-14);
        assert!(gaussian_discord_mode1(&g).unwrap().abs() < 1e-14);
        // pure mode 2
        let g = thermal_product(3.0, 1.0);
        assert!(gaussian_discord_mode2(&g).unwrap().abs() < 1e-14);
    }

    #[test]
    fn unphysical_rejected() {
        let g = CovarianceMatrix::from_matrix(Matrix4::identity() * 0.2);
        assert!(matches!(log_negativity(&g), Err(Error::UnphysicalState { .. })));
        assert!(matches!(gaussian_discord_mode2(&g), Err(Error::UnphysicalState { .. })));
    }

    #[test]
    fn entropy_function_values() {
        assert_eq!(entropy_function(1.0), 0.0);
        // thermal state with mean occupation n: x = 2n + 1
        let n: f64 = 0.7;
        let expected = (n + 1.0) * (n + 1.0).ln() - n * n.ln();
        assert!((entropy_function(2.0 * n + 1.0) - expected).abs() < 1e-14);
    }

    #[test]
    fn tmsv_discord_matches_known_value() {
        // pure state: discord equals the entanglement entropy f(cosh 2r)
        let r: f64 = 0.8;
        let d = gaussian_discord_mode2(&tmsv(r)).unwrap();
        assert!((d - entropy_function((2.0 * r).cosh())).abs() < 1e-9);
    }

    #[test]
    fn epr_identities() {
        let g = CovarianceMatrix::from_blocks([[0.9, 0.3], [0.3, 1.4]], [[0.8, -0.2], [-0.2, 0.6]], [[0.0; 2]; 2]);
        let (_, epr) = purities_and_epr(&g);
        assert!((epr.eta_plus + epr.eta_minus - g.x(1, 1) - g.x(2, 2)).abs() < 1e-15);
        assert!((epr.pi_plus + epr.pi_minus - g.p(1, 1) - g.p(2, 2)).abs() < 1e-15);
        let det_x = g.x(1, 1) * g.x(2, 2) - g.x(1, 2).powi(2);
        assert!(epr.eta_plus * epr.eta_minus >= det_x - 1e-12);
    }
}
