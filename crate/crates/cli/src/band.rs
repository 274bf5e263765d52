//! Edges of the `omega2` interval with nonzero logarithmic negativity at
//! fixed coupling, by a geometric coarse scan and bisection on each edge.

use qcorr::{Error, Method, ModelParams};
use serde::Serialize;

use crate::error::Result;
use crate::evaluate;

pub const DEFAULT_SCAN_POINTS: usize = 200;
pub const DEFAULT_BISECT_TOL: f64 = 1e-4;

/// Geometric scan of `omega2` over `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandScan {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl BandScan {
    /// Two decades either side of `omega1`.
    pub fn around(omega1: f64) -> Self {
        BandScan { lo: 0.01 * omega1, hi: 100.0 * omega1, points: DEFAULT_SCAN_POINTS }
    }

    fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            return self.hi;
        }
        self.lo * (self.hi / self.lo).powf(i as f64 / (self.points - 1) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandResult {
    pub omega_prime: f64,
    pub omega_double_prime: f64,
    pub max_log_negativity: f64,
    pub omega2_at_max: f64,
    /// Final bracket width on the wider of the two edges.
    pub tolerance: f64,
    /// An edge sits on the scan boundary rather than at a sign change.
    pub truncated: bool,
}

impl BandResult {
    pub fn width(&self) -> f64 {
        self.omega_double_prime - self.omega_prime
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "band", rename_all = "snake_case")]
pub enum BandOutcome {
    Found(BandResult),
    Empty,
}

impl BandOutcome {
    pub fn band(&self) -> Option<&BandResult> {
        match self {
            BandOutcome::Found(b) => Some(b),
            BandOutcome::Empty => None,
        }
    }

    /// Zero for an empty band.
    pub fn width(&self) -> f64 {
        self.band().map_or(0.0, BandResult::width)
    }
}

/// `E_N` at `omega2`, or `None` where the oscillators are resonant.
fn negativity(base: &ModelParams, omega2: f64, method: Method) -> Result<Option<f64>> {
    match evaluate(&base.with_omega2(omega2), method) {
        Ok(r) => Ok(Some(r.log_negativity)),
        Err(Error::ResonantParams { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Shrinks `[outside, inside]` (zero at `outside`, positive at `inside`)
/// until it is narrower than `tol`; returns the inside end and the width.
fn bisect(base: &ModelParams, mut outside: f64, mut inside: f64, tol: f64, method: Method) -> Result<(f64, f64)> {
    while (inside - outside).abs() > tol {
        let mut mid = 0.5 * (outside + inside);
        let e = loop {
            match negativity(base, mid, method)? {
                Some(e) => break e,
                // step off the resonance towards the inside end
                None => mid += 1e-3 * (inside - mid),
            }
        };
        if e > 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok((inside, (inside - outside).abs()))
}

pub fn cmd_band(base: &ModelParams, scan: &BandScan, tol: f64, method: Method) -> Result<BandOutcome> {
    if !(scan.lo > 0.0 && scan.lo < scan.hi && scan.points >= 2) {
        return Err(crate::CliError::Input(format!("invalid omega2 scan {}..{} with {} points", scan.lo, scan.hi, scan.points)));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(crate::CliError::Input(format!("bisection tolerance must be positive, got {tol}")));
    }
    let mut samples = Vec::with_capacity(scan.points);
    for i in 0..scan.points {
        let w = scan.value(i);
        if let Some(e) = negativity(base, w, method)? {
            samples.push((w, e));
        }
    }
    let Some(peak) = (0..samples.len()).filter(|&i| samples[i].1 > 0.0).max_by(|&a, &b| samples[a].1.total_cmp(&samples[b].1))
    else {
        return Ok(BandOutcome::Empty);
    };
    let mut lo = peak;
    while lo > 0 && samples[lo - 1].1 > 0.0 {
        lo -= 1;
    }
    let mut hi = peak;
    while hi + 1 < samples.len() && samples[hi + 1].1 > 0.0 {
        hi += 1;
    }
    let mut truncated = false;
    let mut achieved: f64 = 0.0;
    let omega_prime = if lo == 0 {
        truncated = true;
        samples[0].0
    } else {
        let (edge, width) = bisect(base, samples[lo - 1].0, samples[lo].0, tol, method)?;
        achieved = achieved.max(width);
        edge
    };
    let omega_double_prime = if hi + 1 == samples.len() {
        truncated = true;
        samples[hi].0
    } else {
        let (edge, width) = bisect(base, samples[hi + 1].0, samples[hi].0, tol, method)?;
        achieved = achieved.max(width);
        edge
    };
    Ok(BandOutcome::Found(BandResult {
        omega_prime,
        omega_double_prime,
        max_log_negativity: samples[peak].1,
        omega2_at_max: samples[peak].0,
        tolerance: achieved,
        truncated,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_scan_endpoints() {
        let s = BandScan::around(10.0);
        assert_eq!(s.value(0), 0.1);
        assert_eq!(s.value(s.points - 1), 1000.0);
        assert!((s.value(100) / s.value(99) - s.value(1) / s.value(0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_scan() {
        let p = ModelParams::new(10.0, 4.0, 0.0, 0.5, 500.0, 0.5);
        assert!(cmd_band(&p, &BandScan { lo: 0.0, hi: 1.0, points: 10 }, 1e-4, Method::Analytic).is_err());
        assert!(cmd_band(&p, &BandScan::around(10.0), 0.0, Method::Analytic).is_err());
    }
}
