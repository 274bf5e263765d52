//! Complex digamma, a cancellation-free coth, and numeric partial fractions.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::poly::Poly;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `B_{2k} / (2k)` for k = 1..=7.
const BERNOULLI_TERMS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// Below this modulus the argument is shifted upward before the asymptotic series.
const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// `cot(w)` evaluated through whichever exponential decays.
fn cot(w: Complex64) -> Complex64 {
    if w.im >= 0.0 {
        let q = (2.0 * I * w).exp();
        I * (q + 1.0) / (q - 1.0)
    } else {
        let q = (-2.0 * I * w).exp();
        I * (1.0 + q) / (1.0 - q)
    }
}

/// Digamma `psi(z) = Gamma'(z) / Gamma(z)` for complex `z`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if z.re <= 0.5 {
        let n = z.re.round();
        if n <= 0.0 && (z - Complex64::new(n, 0.0)).norm() < 1e-13 * (1.0 + n.abs()) {
            return Err(Error::DigammaPole { z });
        }
    }
    if z.re < 0.5 {
        // psi(z) = psi(1 - z) - pi cot(pi z)
        let reflected = digamma(1.0 - z)?;
        return Ok(reflected - PI * cot(PI * z));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < ASYMPTOTIC_THRESHOLD {
        shift -= 1.0 / w;
        w += 1.0;
    }
    let inv2 = 1.0 / (w * w);
    let mut series = Complex64::new(0.0, 0.0);
    for &b in BERNOULLI_TERMS.iter().rev() {
        series = (series + b) * inv2;
    }
    Ok(shift + w.ln() - 0.5 / w - series)
}

/// `coth(u)`, where callers pass `u = omega / (2T)`.
///
/// The argument is first reduced modulo `i pi`; near the origin the Laurent
/// form `1/u + u/3` replaces the exponential formula.
pub fn coth_half(u: Complex64) -> Result<Complex64> {
    let n = (u.im / PI).round();
    let reduced = u - I * (PI * n);
    if reduced.norm() <= 1e-300 || reduced.norm() < 1e-15 * u.norm() {
        return Err(Error::CothPole { u });
    }
    if reduced.norm() < 1e-4 {
        return Ok(1.0 / reduced + reduced / 3.0);
    }
    if reduced.re >= 0.0 {
        let q = (-2.0 * reduced).exp();
        Ok((1.0 + q) / (1.0 - q))
    } else {
        let q = (2.0 * reduced).exp();
        Ok(-(1.0 + q) / (1.0 - q))
    }
}

/// Real-argument `coth(omega / 2T)`; `T = 0` gives `sign(omega)`.
pub fn coth_thermal(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return omega.signum();
    }
    let u = omega / (2.0 * temperature);
    if u.abs() < 1e-4 {
        return 1.0 / u + u / 3.0;
    }
    1.0 / u.tanh()
}

/// A rational function written as a polynomial part plus simple poles.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFraction {
    pub terms: Vec<(Complex64, Complex64)>,
    pub polynomial: Option<Poly>,
}

impl PartialFraction {
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let poles: Complex64 = self.terms.iter().map(|(p, r)| r / (w - p)).sum();
        poles + self.polynomial.as_ref().map_or(Complex64::new(0.0, 0.0), |q| q.eval(w))
    }

    pub fn residue_sum(&self) -> Complex64 {
        self.terms.iter().map(|(_, r)| r).sum()
    }
}

/// Pole separation below `POLE_MERGE_TOL * max(|a|, |b|)` is treated as a collision.
pub const POLE_MERGE_TOL: f64 = 1e-10;

/// Decomposes `numerator / (leading * prod_k (w - poles[k]))`.
///
/// Residues are `numerator(p_k) / D'(p_k)` with `D'(p_k)` taken as the
/// product over the other poles.
pub fn partial_fractions(numerator: &Poly, poles: &[Complex64], leading: Complex64) -> Result<PartialFraction> {
    for (i, a) in poles.iter().enumerate() {
        for b in &poles[i + 1..] {
            let tolerance = POLE_MERGE_TOL * a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
            if (a - b).norm() <= tolerance {
                return Err(Error::DegeneratePoles { a: *a, b: *b, tolerance });
            }
        }
    }
    let terms = poles
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let dprime = poles
                .iter()
                .enumerate()
                .filter(|(m, _)| *m != k)
                .fold(leading, |acc, (_, &q)| acc * (p - q));
            (p, numerator.eval(p) / dprime)
        })
        .collect();
    let polynomial = if numerator.degree() >= poles.len() {
        let denominator = Poly::from_roots(poles).scale(leading);
        Some(numerator.div_rem(&denominator).0)
    } else {
        None
    };
    Ok(PartialFraction { terms, polynomial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fixture() -> Vec<(Complex64, Complex64)> {
        include_str!("../tests/fixtures/digamma_grid.csv")
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| {
                let v: Vec<f64> = l.split(',').map(|s| s.trim().parse().unwrap()).collect();
                (c(v[0], v[1]), c(v[2], v[3]))
            })
            .collect()
    }

    #[test]
    fn digamma_at_one() {
        let v = digamma(c(1.0, 0.0)).unwrap();
        assert!((v.re + 0.5772156649015329).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn digamma_matches_high_precision_grid() {
        let grid = fixture();
        assert_eq!(grid.len(), 100);
        for (z, expected) in grid {
            let got = digamma(z).unwrap();
            assert!((got - expected).norm() <= 1e-12 * expected.norm().max(1.0), "psi({z}) = {got}, want {expected}");
        }
    }

    #[test]
    fn digamma_recurrence() {
        for z in [c(0.3, 0.2), c(-2.7, 1.5), c(5.5, -3.0), c(0.01, 40.0), c(-0.5, -0.1), c(12.0, 0.0)] {
            let lhs = digamma(z + 1.0).unwrap() - digamma(z).unwrap();
            assert!((lhs - 1.0 / z).norm() < 1e-12 * (1.0 / z).norm().max(1.0), "{z}");
        }
    }

    #[test]
    fn digamma_asymptotic_regime() {
        for z in [c(100.0, 0.0), c(70.0, 80.0), c(3.0, -150.0), c(1e4, 2e3)] {
            let psi = digamma(1.0 + z).unwrap();
            let approx = z.ln() + 0.5 / z;
            // next term of the expansion is -1/(12 z^2)
            assert!((psi - approx).norm() <= 1.01 / (12.0 * z.norm_sqr()), "{z}");
        }
    }

    #[test]
    fn digamma_poles() {
        for n in [0.0, -1.0, -7.0] {
            assert!(matches!(digamma(c(n, 0.0)), Err(Error::DigammaPole { .. })));
        }
        assert!(digamma(c(-3.0, 1e-3)).is_ok());
    }

    #[test]
    fn coth_limits() {
        assert!((coth_half(c(40.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!((coth_half(c(-40.0, 0.0)).unwrap() + 1.0).norm() < 1e-15);
        for u in [c(1e-5, 0.0), c(3e-5, -2e-5), c(-1e-6, 1e-7)] {
            let series = 1.0 / u + u / 3.0 - u * u * u / 45.0;
            assert!((coth_half(u).unwrap() - series).norm() < 1e-15 * series.norm());
        }
        for u in [c(0.3, 0.2), c(2.0, -5.0), c(-0.7, 9.1)] {
            let direct = u.cosh() / u.sinh();
            assert!((coth_half(u).unwrap() - direct).norm() < 1e-13 * direct.norm());
            assert!((coth_half(-u).unwrap() + coth_half(u).unwrap()).norm() < 1e-14);
        }
        assert!(matches!(coth_half(c(0.0, PI)), Err(Error::CothPole { .. })));
        assert!(matches!(coth_half(c(0.0, 0.0)), Err(Error::CothPole { .. })));
        assert_eq!(coth_thermal(-3.0, 0.0), -1.0);
        assert!((coth_thermal(1.0, 0.5) - 1.0 / 1.0f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn textbook_pair() {
        let pf = partial_fractions(&Poly::from_real(&[1.0]), &[c(1.0, 0.0), c(-1.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert!((pf.terms[0].1 - c(0.5, 0.0)).norm() < 1e-15);
        assert!((pf.terms[1].1 - c(-0.5, 0.0)).norm() < 1e-15);
        assert!(pf.residue_sum().norm() < 1e-15);
        assert!(pf.polynomial.is_none());
    }

    #[test]
    fn random_rational_reconstruction() {
        let mut state = 99u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let numerator = Poly::new((0..5).map(|_| c(next(), next())).collect());
        let poles: Vec<Complex64> = (0..10).map(|_| c(3.0 * next(), 3.0 * next())).collect();
        let leading = c(0.7, -0.2);
        let pf = partial_fractions(&numerator, &poles, leading).unwrap();
        let denominator = Poly::from_roots(&poles).scale(leading);
        for _ in 0..50 {
            let w = c(5.0 * next(), 5.0 * next());
            if poles.iter().any(|p| (p - w).norm() < 0.05) {
                continue;
            }
            let direct = numerator.eval(w) / denominator.eval(w);
            assert!((pf.eval(w) - direct).norm() < 1e-10 * direct.norm());
        }
        assert!(pf.residue_sum().norm() < 1e-10 * pf.terms.iter().map(|t| t.1.norm()).sum::<f64>());
    }

    #[test]
    fn polynomial_part() {
        // (w^3 + 1) / (w^2 - 4) = w + (4w + 1)/(w^2 - 4)
        let pf = partial_fractions(&Poly::from_real(&[1.0, 0.0, 0.0, 1.0]), &[c(2.0, 0.0), c(-2.0, 0.0)], c(1.0, 0.0)).unwrap();
        let w = c(0.3, 1.1);
        let direct = (w * w * w + 1.0) / (w * w - 4.0);
        assert!((pf.eval(w) - direct).norm() < 1e-13);
    }

    #[test]
    fn colliding_poles_rejected() {
        let r = partial_fractions(&Poly::from_real(&[1.0]), &[c(1.0, 0.0), c(1.0 + 1e-12, 0.0)], c(1.0, 0.0));
        assert!(matches!(r, Err(Error::DegeneratePoles { .. })));
    }
}
