//! Reference implementations that share no code with the library under
//! test: brute-force discord, matrix-eigenvalue symplectic spectra, random
//! physical states and textbook thermal limits.

use nalgebra::{Matrix2, Matrix4};
use qcorr::CovarianceMatrix;
use rand::Rng;

pub fn omega() -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m[(0, 1)] = 1.0;
    m[(1, 0)] = -1.0;
    m[(2, 3)] = 1.0;
    m[(3, 2)] = -1.0;
    m
}

fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

fn block_diag(a: Matrix2<f64>, b: Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&b);
    m
}

/// Random element of Sp(2, R): rotation, squeeze, rotation.
pub fn random_single_mode_symplectic<R: Rng>(rng: &mut R, max_squeeze: f64) -> Matrix2<f64> {
    let r = rng.gen_range(-max_squeeze..max_squeeze);
    rotation(rng.gen_range(0.0..std::f64::consts::TAU))
        * Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp())
        * rotation(rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn random_local_symplectic<R: Rng>(rng: &mut R, max_squeeze: f64) -> Matrix4<f64> {
    block_diag(random_single_mode_symplectic(rng, max_squeeze), random_single_mode_symplectic(rng, max_squeeze))
}

/// Beam splitter mixing `x1, x2` and `p1, p2` by the same angle.
pub fn beam_splitter(theta: f64) -> Matrix4<f64> {
    let (s, c) = theta.sin_cos();
    Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, s, //
        -s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )
}

pub fn two_mode_squeezer(r: f64) -> Matrix4<f64> {
    let (ch, sh) = (r.cosh(), r.sinh());
    Matrix4::new(
        ch, 0.0, sh, 0.0, //
        0.0, ch, 0.0, -sh, //
        sh, 0.0, ch, 0.0, //
        0.0, -sh, 0.0, ch,
    )
}

pub fn sigma_of(gamma: &CovarianceMatrix) -> Matrix4<f64> {
    gamma.matrix() * 2.0
}

pub fn from_sigma(sigma: Matrix4<f64>) -> CovarianceMatrix {
    CovarianceMatrix::from_matrix(sigma * 0.5)
}

pub fn two_mode_squeezed_vacuum(r: f64) -> CovarianceMatrix {
    let s = two_mode_squeezer(r);
    from_sigma(s * s.transpose())
}

/// `S diag(n1, n1, n2, n2) S^T` for a random symplectic `S`; both
/// symplectic eigenvalues are drawn from `[1, 1 + max_excess]`.
pub fn random_physical_state<R: Rng>(rng: &mut R, max_excess: f64) -> CovarianceMatrix {
    random_state_with_spectrum(rng, max_excess).0
}

/// As [`random_physical_state`], also returning the construction's
/// symplectic eigenvalues in ascending order.
pub fn random_state_with_spectrum<R: Rng>(rng: &mut R, max_excess: f64) -> (CovarianceMatrix, (f64, f64)) {
    let n1 = 1.0 + rng.gen_range(0.0..max_excess);
    let n2 = 1.0 + rng.gen_range(0.0..max_excess);
    let s = random_local_symplectic(rng, 0.5)
        * beam_splitter(rng.gen_range(0.0..std::f64::consts::PI))
        * two_mode_squeezer(rng.gen_range(-1.0..1.0))
        * random_local_symplectic(rng, 0.5);
    let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(n1, n1, n2, n2));
    (from_sigma(s * d * s.transpose()), (n1.min(n2), n1.max(n2)))
}

/// Symplectic eigenvalues as `|eig(i Omega sigma)|`, ascending, one per pair.
pub fn symplectic_eigenvalues_oracle(sigma: &Matrix4<f64>) -> (f64, f64) {
    let mut mags: Vec<f64> = (omega() * sigma).complex_eigenvalues().iter().map(|z| z.norm()).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (0.5 * (mags[0] + mags[1]), 0.5 * (mags[2] + mags[3]))
}

pub fn partial_transpose(sigma: &Matrix4<f64>) -> Matrix4<f64> {
    let flip = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
    flip * sigma * flip
}

/// `g(x) = ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2)` for `x >= 1`.
pub fn mode_entropy(x: f64) -> f64 {
    let xlogx = |y: f64| if y > 0.0 { y * y.ln() } else { 0.0 };
    xlogx(0.5 * (x + 1.0)) - xlogx(0.5 * (x - 1.0))
}

/// Covariance of mode one after a Gaussian measurement on mode two whose
/// outcome state is the pure `sigma_m`.
pub fn conditional_state(sigma: &Matrix4<f64>, sigma_m: &Matrix2<f64>) -> Matrix2<f64> {
    let a: Matrix2<f64> = sigma.fixed_view::<2, 2>(0, 0).into();
    let b: Matrix2<f64> = sigma.fixed_view::<2, 2>(2, 2).into();
    let c: Matrix2<f64> = sigma.fixed_view::<2, 2>(0, 2).into();
    a - c * (b + sigma_m).try_inverse().expect("sigma_B + sigma_M is positive") * c.transpose()
}

fn pure_measurement(log_lambda: f64, theta: f64) -> Matrix2<f64> {
    let r = rotation(theta);
    let l = log_lambda.exp();
    r * Matrix2::new(l, 0.0, 0.0, 1.0 / l) * r.transpose()
}

/// Gaussian discord with the measurement on mode two, minimising the
/// conditional entropy over pure single-mode measurement states on a
/// log-squeezing × angle grid followed by successive grid refinement.
pub fn discord_brute_force(gamma: &CovarianceMatrix) -> f64 {
    let sigma = sigma_of(gamma);
    let entropy = |ll: f64, th: f64| mode_entropy(conditional_state(&sigma, &pure_measurement(ll, th)).determinant().sqrt());
    let (ll_span, th_span) = (16.0, std::f64::consts::PI);
    let (n_ll, n_th) = (161, 90);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..n_ll {
        let ll = -ll_span + 2.0 * ll_span * i as f64 / (n_ll - 1) as f64;
        for j in 0..n_th {
            let th = th_span * j as f64 / n_th as f64;
            let e = entropy(ll, th);
            if e < best.0 {
                best = (e, ll, th);
            }
        }
    }
    let (mut d_ll, mut d_th) = (2.0 * ll_span / (n_ll - 1) as f64, th_span / n_th as f64);
    for _ in 0..40 {
        let (_, ll0, th0) = best;
        for i in -4..=4 {
            for j in -4..=4 {
                let ll = (ll0 + d_ll * i as f64 * 0.5).clamp(-ll_span, ll_span);
                let th = th0 + d_th * j as f64 * 0.5;
                let e = entropy(ll, th);
                if e < best.0 {
                    best = (e, ll, th);
                }
            }
        }
        d_ll *= 0.5;
        d_th *= 0.5;
    }
    let b: Matrix2<f64> = sigma.fixed_view::<2, 2>(2, 2).into();
    let (nu_minus, nu_plus) = symplectic_eigenvalues_oracle(&sigma);
    (mode_entropy(b.determinant().sqrt()) - mode_entropy(nu_minus.max(1.0)) - mode_entropy(nu_plus.max(1.0)) + best.0)
        .max(0.0)
}

/// Isolated oscillator in equilibrium: `(<x^2>, <p^2>)`.
pub fn thermal_oscillator(frequency: f64, temperature: f64) -> (f64, f64) {
    let coth = if temperature == 0.0 { 1.0 } else { 1.0 / (frequency / (2.0 * temperature)).tanh() };
    (coth / (2.0 * frequency), 0.5 * frequency * coth)
}

/// Classical limit `<x x^T> = T V^{-1}` for a 2×2 potential matrix.
pub fn equipartition_positions(potential: [[f64; 2]; 2], temperature: f64) -> [[f64; 2]; 2] {
    let v = Matrix2::new(potential[0][0], potential[0][1], potential[1][0], potential[1][1]);
    let inv = v.try_inverse().expect("stable potential") * temperature;
    [[inv[(0, 0)], inv[(0, 1)]], [inv[(1, 0)], inv[(1, 1)]]]
}

/// Reduced Gibbs state of the two oscillators plus a finite bath whose
/// modes discretise the Drude density: `n_low` equal steps on `[0, w_split]`
/// and `n_high` equal steps of `atan(ω/ω_c)` above it. The counterterm is the
/// discrete `Σ g_μ²/ω_μ²`, so the total potential stays positive.
///
/// For a bath dense enough to look continuous this is the stationary state
/// of the damped dynamics, computed without any spectral integral.
pub fn discretized_bath_state(p: &qcorr::ModelParams, n_low: usize, n_high: usize, w_split: f64) -> CovarianceMatrix {
    use nalgebra::{DMatrix, SymmetricEigen};
    use std::f64::consts::{FRAC_PI_2, PI};
    let wc = p.omega_c;
    let mut modes: Vec<(f64, f64)> = (0..n_low)
        .map(|i| {
            let dw = w_split / n_low as f64;
            ((i as f64 + 0.5) * dw, dw)
        })
        .collect();
    let theta0 = (w_split / wc).atan();
    let dtheta = (FRAC_PI_2 - theta0) / n_high as f64;
    modes.extend((0..n_high).map(|i| {
        let theta = theta0 + (i as f64 + 0.5) * dtheta;
        (wc * theta.tan(), wc / theta.cos().powi(2) * dtheta)
    }));
    let n = modes.len();
    let mut k = DMatrix::zeros(n + 2, n + 2);
    let mut counterterm = 0.0;
    for (mu, &(w, dw)) in modes.iter().enumerate() {
        let density = 2.0 * p.gamma * w / (PI * (1.0 + (w / wc).powi(2)));
        let g = (2.0 * w * density * dw).sqrt();
        counterterm += g * g / (w * w);
        k[(mu + 2, mu + 2)] = w * w;
        for i in 0..2 {
            k[(i, mu + 2)] = g;
            k[(mu + 2, i)] = g;
        }
    }
    k[(0, 0)] = p.omega1 * p.omega1 + p.k + counterterm;
    k[(1, 1)] = p.omega2 * p.omega2 + p.k + counterterm;
    k[(0, 1)] = counterterm - p.k;
    k[(1, 0)] = counterterm - p.k;
    let eig = SymmetricEigen::new(k);
    let mut xx = [[0.0; 2]; 2];
    let mut pp = [[0.0; 2]; 2];
    for (m, &lambda) in eig.eigenvalues.iter().enumerate() {
        let (x, mom) = thermal_oscillator(lambda.sqrt(), p.temperature);
        for i in 0..2 {
            for j in 0..2 {
                let w = eig.eigenvectors[(i, m)] * eig.eigenvectors[(j, m)];
                xx[i][j] += w * x;
                pp[i][j] += w * mom;
            }
        }
    }
    CovarianceMatrix::from_blocks(xx, pp, [[0.0; 2]; 2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_states_are_physical() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..200 {
            let s = random_physical_state(&mut rng, 3.0);
            let (lo, _) = symplectic_eigenvalues_oracle(&sigma_of(&s));
            assert!(lo >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn tmsv_brute_force_discord() {
        // measuring one half of a TMSV: heterodyne is optimal, E_min = 1
        let r: f64 = 0.7;
        let expected = mode_entropy((2.0 * r).cosh());
        assert!((discord_brute_force(&two_mode_squeezed_vacuum(r)) - expected).abs() < 1e-6);
    }

    #[test]
    fn product_state_has_no_discord() {
        let s = from_sigma(Matrix4::from_diagonal(&nalgebra::Vector4::new(2.0, 2.0, 3.0, 3.0)));
        assert!(discord_brute_force(&s).abs() < 1e-12);
    }
}
