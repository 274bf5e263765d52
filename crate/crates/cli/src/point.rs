use std::fmt::Write as _;

use qcorr::gaussian::correlation_report;
use qcorr::ModelParams;
use serde::Serialize;

use crate::error::Result;
use crate::{covariance, Measures, MethodChoice};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodResult {
    pub method: &'static str,
    #[serde(flatten)]
    pub measures: Measures,
    /// Row-major `(x1, p1, x2, p2)` covariance matrix.
    pub covariance: [f64; 16],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointOutput {
    pub omega1: f64,
    pub omega2: f64,
    pub k: f64,
    pub gamma: f64,
    pub omega_c: f64,
    pub temperature: f64,
    pub results: Vec<MethodResult>,
    /// `|E_N(analytic) - E_N(quadrature)|` when both ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_negativity_difference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discord_difference: Option<f64>,
}

pub fn cmd_point(p: &ModelParams, method: MethodChoice) -> Result<PointOutput> {
    let mut results = Vec::new();
    for &m in method.methods() {
        let gamma = covariance(p, m)?;
        let report = correlation_report(&gamma)?;
        let mut cov = [0.0; 16];
        for (i, v) in cov.iter_mut().enumerate() {
            *v = gamma.matrix()[(i / 4, i % 4)];
        }
        results.push(MethodResult { method: m.as_str(), measures: Measures::from(&report), covariance: cov });
    }
    let diff = |f: fn(&Measures) -> f64| (results.len() == 2).then(|| (f(&results[0].measures) - f(&results[1].measures)).abs());
    Ok(PointOutput {
        omega1: p.omega1,
        omega2: p.omega2,
        k: p.k,
        gamma: p.gamma,
        omega_c: p.omega_c,
        temperature: p.temperature,
        log_negativity_difference: diff(|m| m.log_negativity),
        discord_difference: diff(|m| m.discord2),
        results,
    })
}

impl PointOutput {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "omega1 = {}  omega2 = {}  k = {}  gamma = {}  omega_c = {}  T = {}",
            self.omega1, self.omega2, self.k, self.gamma, self.omega_c, self.temperature
        );
        for r in &self.results {
            let _ = writeln!(s, "[{}]", r.method);
            for (name, value) in Measures::COLUMNS.iter().zip(r.measures.values()) {
                let _ = writeln!(s, "  {name:<15} {value:.12e}");
            }
            let _ = writeln!(s, "  covariance (x1, p1, x2, p2):");
            for row in r.covariance.chunks(4) {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>20.12e}")).collect();
                let _ = writeln!(s, "  {}", cells.join(" "));
            }
        }
        if let (Some(de), Some(dd)) = (self.log_negativity_difference, self.discord_difference) {
            let _ = writeln!(s, "analytic vs quadrature: |dE_N| = {de:e}  |d discord2| = {dd:e}");
        }
        s
    }
}
