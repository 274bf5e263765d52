//! Self-check: cross-method agreement, physicality, classical and
//! weak-dissipation limits and the discord measurement-grid oracle, each
//! run on `cases` inputs.

use qcorr::approx::weak_dissipation_covariances;
use qcorr::gaussian::{correlation_report, gaussian_discord_mode2, SYMPLECTIC_TOL};
use qcorr::{covariance_analytic, covariance_quadrature, ModelParams};
use qcorr_oracles::{discord_brute_force, equipartition_positions, random_physical_state};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, Result};

/// Test hook: comma-separated `name=value` pairs replacing [`Tolerances`] fields.
pub const TOL_OVERRIDES_ENV: &str = "QCORR_TOL_OVERRIDES";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub covariance_rel: f64,
    pub covariance_abs: f64,
    pub measure_abs: f64,
    pub symplectic: f64,
    pub equipartition_p: f64,
    pub equipartition_x: f64,
    pub weak_ratio: f64,
    pub discord_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            covariance_rel: 1e-8,
            covariance_abs: 1e-10,
            measure_abs: 1e-7,
            symplectic: SYMPLECTIC_TOL,
            equipartition_p: 0.01,
            equipartition_x: 0.02,
            weak_ratio: 5.0,
            discord_abs: 1e-4,
        }
    }
}

impl Tolerances {
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::Input(format!("{TOL_OVERRIDES_ENV}: `{item}` is not name=value")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{TOL_OVERRIDES_ENV}: bad number in `{item}`")))?;
            let slot = match name.trim() {
                "covariance_rel" => &mut self.covariance_rel,
                "covariance_abs" => &mut self.covariance_abs,
                "measure_abs" => &mut self.measure_abs,
                "symplectic" => &mut self.symplectic,
                "equipartition_p" => &mut self.equipartition_p,
                "equipartition_x" => &mut self.equipartition_x,
                "weak_ratio" => &mut self.weak_ratio,
                "discord_abs" => &mut self.discord_abs,
                other => return Err(CliError::Input(format!("{TOL_OVERRIDES_ENV}: unknown tolerance `{other}`"))),
            };
            *slot = value;
        }
        Ok(self)
    }

    pub fn from_env() -> Result<Self> {
        match std::env::var(TOL_OVERRIDES_ENV) {
            Ok(spec) => Tolerances::default().with_overrides(&spec),
            Err(_) => Ok(Tolerances::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub limit: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub cases: usize,
    pub tolerances: Tolerances,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("{:<28} {:>6} {:>6} {:>12} {:>12}  result", "check", "cases", "fails", "worst", "limit")];
        for c in &self.checks {
            lines.push(format!(
                "{:<28} {:>6} {:>6} {:>12.3e} {:>12.3e}  {}",
                c.name,
                c.cases,
                c.failures,
                c.worst,
                c.limit,
                if c.passed() { "PASS" } else { "FAIL" }
            ));
            if let Some(f) = &c.first_failure {
                lines.push(format!("    first failure: {f}"));
            }
        }
        lines.push(format!("overall: {}", if self.passed() { "PASS" } else { "FAIL" }));
        lines.join("\n") + "\n"
    }
}

struct Tally {
    result: CheckResult,
}

impl Tally {
    fn new(name: &'static str, limit: f64) -> Self {
        Tally { result: CheckResult { name, cases: 0, failures: 0, worst: 0.0, limit, first_failure: None } }
    }

    /// Records `value`, failing when it exceeds the limit (or is NaN).
    fn record(&mut self, value: f64, context: impl FnOnce() -> String) {
        self.result.cases += 1;
        self.result.worst = self.result.worst.max(value);
        if value.is_nan() || value > self.result.limit {
            self.fail(context);
        }
    }

    fn fail(&mut self, context: impl FnOnce() -> String) {
        self.result.failures += 1;
        if self.result.first_failure.is_none() {
            self.result.first_failure = Some(context());
        }
    }
}

/// `omega1 = 10, omega_c = 500` with `omega2 x k x gamma x T`, 90 points.
pub fn lattice() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for omega2 in [1.0, 2.0, 4.0, 6.0, 9.0] {
        for k in [0.0, 10.0, 100.0] {
            for gamma in [0.01, 0.5] {
                for temperature in [0.1, 0.5, 5.0] {
                    let p = ModelParams::new(10.0, omega2, k, gamma, 500.0, temperature);
                    if qcorr::model::validate_params(p).is_ok() {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Largest `|a - q| / max(rel |a|, abs)` over all entries; agreement is `<= 1`.
pub fn covariance_disagreement(a: &qcorr::CovarianceMatrix, q: &qcorr::CovarianceMatrix, rel: f64, abs: f64) -> f64 {
    a.matrix()
        .iter()
        .zip(q.matrix().iter())
        .map(|(x, y)| (x - y).abs() / (rel * x.abs()).max(abs))
        .fold(0.0, f64::max)
}

/// Largest absolute difference over the six entries the approximation gives.
pub fn weak_dissipation_error(exact: &qcorr::CovarianceMatrix, approx: &qcorr::approx::WeakDissipation) -> f64 {
    [
        exact.x(1, 1) - approx.x_sq[0],
        exact.x(2, 2) - approx.x_sq[1],
        exact.p(1, 1) - approx.p_sq[0],
        exact.p(2, 2) - approx.p_sq[1],
        exact.x(1, 2) - approx.x1x2,
        exact.p(1, 2) - approx.p1p2,
    ]
    .iter()
    .fold(0.0, |m, d| m.max(d.abs()))
}

fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    loop {
        let omega1: f64 = rng.gen_range(1.0..20.0);
        let omega2 = rng.gen_range(0.5..20.0);
        if (omega1 - omega2).abs() < 0.05 {
            continue;
        }
        let temperature = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.01..10.0) };
        return ModelParams::new(
            omega1,
            omega2,
            rng.gen_range(0.0..200.0),
            10f64.powf(rng.gen_range(-3.0..0.0)),
            rng.gen_range(50.0..1000.0),
            temperature,
        );
    }
}

fn lattice_check(cases: usize, tol: &Tolerances) -> CheckResult {
    let mut cov = Tally::new("cross-method covariance", 1.0);
    let mut measures = Tally::new("cross-method measures", tol.measure_abs);
    for p in lattice().into_iter().take(cases) {
        match (covariance_analytic(&p), covariance_quadrature(&p)) {
            (Ok(a), Ok(q)) => {
                cov.record(covariance_disagreement(&a, &q, tol.covariance_rel, tol.covariance_abs), || format!("{p:?}"));
                match (correlation_report(&a), correlation_report(&q)) {
                    (Ok(ra), Ok(rq)) => {
                        let d = (ra.log_negativity - rq.log_negativity).abs().max((ra.discord_mode2 - rq.discord_mode2).abs());
                        measures.record(d, || format!("{p:?}"));
                    }
                    (Err(e), _) | (_, Err(e)) => measures.fail(|| format!("{p:?}: {e}")),
                }
            }
            (Err(e), _) | (_, Err(e)) => cov.fail(|| format!("{p:?}: {e}")),
        }
    }
    // both halves report through one row
    let mut merged = cov.result;
    merged.failures += measures.result.failures;
    if merged.first_failure.is_none() {
        merged.first_failure = measures.result.first_failure;
    }
    merged
}

pub fn cmd_validate(seed: u64, cases: usize, tol: &Tolerances) -> ValidationReport {
    let mut checks = Vec::new();
    if cases == 0 {
        return ValidationReport { seed, cases, tolerances: *tol, checks };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    checks.push(lattice_check(cases, tol));

    let mut positivity = Tally::new("symplectic positivity", tol.symplectic);
    for _ in 0..cases {
        let p = random_params(&mut rng);
        match covariance_analytic(&p).and_then(|g| correlation_report(&g)) {
            Ok(r) => positivity.record((1.0 - r.nu_minus).max(0.0), || format!("{p:?}: nu_minus = {}", r.nu_minus)),
            Err(e) => positivity.fail(|| format!("{p:?}: {e}")),
        }
    }
    checks.push(positivity.result);

    let mut equipartition = Tally::new("classical equipartition", 1.0);
    for _ in 0..cases {
        let p = ModelParams::new(
            rng.gen_range(2.0..20.0),
            rng.gen_range(0.5..1.5),
            rng.gen_range(0.0..100.0),
            rng.gen_range(0.001..0.5),
            500.0,
            1e4,
        );
        match covariance_analytic(&p) {
            Ok(g) => {
                let expected = equipartition_positions(p.potential_matrix(), p.temperature);
                let mut worst: f64 = 0.0;
                for i in 0..2 {
                    worst = worst.max((g.p(i + 1, i + 1) / p.temperature - 1.0).abs() / tol.equipartition_p);
                    for j in 0..2 {
                        let scale = expected[0][0].max(expected[1][1]);
                        worst = worst.max((g.x(i + 1, j + 1) - expected[i][j]).abs() / (tol.equipartition_x * scale));
                    }
                }
                equipartition.record(worst, || format!("{p:?}"));
            }
            Err(e) => equipartition.fail(|| format!("{p:?}: {e}")),
        }
    }
    checks.push(equipartition.result);

    // the ratio check passes when err(1e-3)/err(1e-4) >= weak_ratio; report its inverse against 1/ratio
    let mut weak = Tally::new("weak-dissipation convergence", 1.0 / tol.weak_ratio);
    for _ in 0..cases {
        let (omega1, omega2) = loop {
            let (a, b): (f64, f64) = (rng.gen_range(2.0..20.0), rng.gen_range(2.0..20.0));
            if (a - b).abs() > 1.0 {
                break (a, b);
            }
        };
        let shift_error = |gamma: f64| -> qcorr::Result<f64> {
            let p = ModelParams::new(omega1, omega2, 0.0, gamma, 500.0, 0.0);
            Ok(weak_dissipation_error(&covariance_analytic(&p)?, &weak_dissipation_covariances(&p)))
        };
        match (shift_error(1e-3), shift_error(1e-4)) {
            (Ok(coarse), Ok(fine)) => weak.record(fine / coarse, || format!("omega1={omega1} omega2={omega2}: {coarse:e} -> {fine:e}")),
            (Err(e), _) | (_, Err(e)) => weak.fail(|| format!("omega1={omega1} omega2={omega2}: {e}")),
        }
    }
    checks.push(weak.result);

    let mut discord = Tally::new("discord measurement grid", tol.discord_abs);
    for _ in 0..cases {
        let state = random_physical_state(&mut rng, 2.0);
        match gaussian_discord_mode2(&state) {
            Ok(d) => discord.record((d - discord_brute_force(&state)).abs(), || format!("{:?}", state.matrix().as_slice())),
            Err(e) => discord.fail(|| e.to_string()),
        }
    }
    checks.push(discord.result);

    ValidationReport { seed, cases, tolerances: *tol, checks }
}
