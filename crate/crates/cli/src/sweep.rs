use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};

use qcorr::{Error, Method};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::grid::{GridPoint, SweepGrid};
use crate::{evaluate, Measures, MethodChoice};

/// Fraction of failed grid points above which a sweep exits nonzero.
pub const MAX_FAILED_FRACTION: f64 = 0.1;
/// One in this many analytic points is recomputed by quadrature.
pub const SPOT_CHECK_RATE: u32 = 50;
pub const SPOT_CHECK_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    SkippedResonant,
    Failed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::SkippedResonant => "skipped_resonant",
            Status::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub axis1: f64,
    pub axis2: Option<f64>,
    #[serde(flatten)]
    pub measures: Option<Measures>,
    pub method: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl SweepRecord {
    fn from_result(point: &GridPoint, method: Method, result: qcorr::Result<qcorr::gaussian::CorrelationReport>) -> Self {
        let (measures, status, message) = match result {
            Ok(report) => (Some(Measures::from(&report)), Status::Ok, None),
            Err(e @ Error::ResonantParams { .. }) => (None, Status::SkippedResonant, Some(e.to_string())),
            Err(e) => (None, Status::Failed, Some(e.to_string())),
        };
        SweepRecord { axis1: point.axis1, axis2: point.axis2, measures, method: method.as_str(), status, message }
    }

    fn csv_row(&self) -> String {
        let mut fields = vec![self.axis1.to_string(), self.axis2.map(|v| v.to_string()).unwrap_or_default()];
        match &self.measures {
            Some(m) => fields.extend(m.values().iter().map(f64::to_string)),
            None => fields.extend(std::iter::repeat_n(String::new(), Measures::COLUMNS.len())),
        }
        fields.push(self.method.to_string());
        fields.push(self.status.as_str().to_string());
        fields.join(",")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpotCheck {
    pub checked: usize,
    /// Chosen points where quadrature itself failed.
    pub unavailable: usize,
    pub max_log_negativity_diff: f64,
    pub max_discord_diff: f64,
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub workers: usize,
    pub seed: u64,
    pub progress: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { workers: 1, seed: 0, progress: false }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub grid: SweepGrid,
    pub records: Vec<SweepRecord>,
    pub spot_check: Option<SpotCheck>,
}

impl SweepOutput {
    /// Grid points where at least one method failed.
    pub fn failed_points(&self) -> usize {
        let per_point = self.grid.method.methods().len();
        self.records.chunks(per_point).filter(|c| c.iter().any(|r| r.status == Status::Failed)).count()
    }

    pub fn check_failures(&self) -> Result<()> {
        let failed = self.failed_points();
        let total = self.grid.len();
        if failed as f64 > MAX_FAILED_FRACTION * total as f64 {
            return Err(CliError::SweepFailures { failed, total });
        }
        Ok(())
    }

    pub fn header_lines(&self) -> Vec<String> {
        let g = &self.grid;
        let p = g.base;
        vec![
            format!("# qcorr sweep v{}", env!("CARGO_PKG_VERSION")),
            format!("# axis1 = {}", g.axis1),
            format!("# axis2 = {}", g.axis2.map_or("none".to_string(), |a| a.to_string())),
            format!(
                "# fixed = omega1={} omega2={} k={} gamma={} omega_c={} temperature={}",
                p.omega1, p.omega2, p.k, p.gamma, p.omega_c, p.temperature
            ),
            format!("# method = {}", g.method.as_str()),
            "# order = axis2-major (axis1 varies fastest)".to_string(),
            "# grid ranges are user-chosen".to_string(),
        ]
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for line in self.header_lines() {
            writeln!(w, "{line}")?;
        }
        let mut columns = vec!["axis1", "axis2"];
        columns.extend(Measures::COLUMNS);
        columns.extend(["method", "status"]);
        writeln!(w, "{}", columns.join(","))?;
        for r in &self.records {
            writeln!(w, "{}", r.csv_row())?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: W) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            header: Vec<String>,
            axis1: String,
            axis2: Option<String>,
            method: MethodChoice,
            records: &'a [SweepRecord],
        }
        let doc = Doc {
            header: self.header_lines(),
            axis1: self.grid.axis1.axis.name().to_string(),
            axis2: self.grid.axis2.map(|a| a.axis.name().to_string()),
            method: self.grid.method,
            records: &self.records,
        };
        serde_json::to_writer_pretty(w, &doc).map_err(std::io::Error::other)
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Input(format!("cannot start {workers} workers: {e}")))
}

/// Evaluates every grid point; rows come back in grid order whatever the
/// worker count.
pub fn cmd_sweep(grid: &SweepGrid, opts: &SweepOptions) -> Result<SweepOutput> {
    let points = grid.points();
    let methods = grid.method.methods();
    let total = points.len();
    let done = AtomicUsize::new(0);
    let step = (total / 10).max(1);
    if opts.progress {
        eprintln!("sweep: {total} points, method {}, {} workers", grid.method.as_str(), opts.workers.max(1));
    }
    let pool = pool(opts.workers)?;
    let records: Vec<SweepRecord> = pool.install(|| {
        points
            .par_iter()
            .flat_map_iter(|point| {
                let rows: Vec<SweepRecord> =
                    methods.iter().map(|&m| SweepRecord::from_result(point, m, evaluate(&point.params, m))).collect();
                let n = done.fetch_add(1, Ordering::Relaxed) + 1;
                if opts.progress && n.is_multiple_of(step) {
                    eprintln!("sweep: {n}/{total}");
                }
                rows
            })
            .collect()
    });

    let spot_check = (grid.method == MethodChoice::Analytic).then(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let chosen: Vec<usize> = (0..total).filter(|_| rng.gen_ratio(1, SPOT_CHECK_RATE)).collect();
        let diffs: Vec<Option<(f64, f64)>> = pool.install(|| {
            chosen
                .par_iter()
                .map(|&i| {
                    let Some(a) = &records[i].measures else { return None };
                    let q = evaluate(&points[i].params, Method::Quadrature).ok()?;
                    Some(((a.log_negativity - q.log_negativity).abs(), (a.discord2 - q.discord_mode2).abs()))
                })
                .collect()
        });
        let found: Vec<(f64, f64)> = diffs.iter().flatten().copied().collect();
        let check = SpotCheck {
            checked: found.len(),
            unavailable: diffs.len() - found.len(),
            max_log_negativity_diff: found.iter().map(|d| d.0).fold(0.0, f64::max),
            max_discord_diff: found.iter().map(|d| d.1).fold(0.0, f64::max),
            mismatches: found.iter().filter(|d| d.0 > SPOT_CHECK_TOL || d.1 > SPOT_CHECK_TOL).count(),
        };
        if opts.progress {
            eprintln!(
                "spot check: {} points by quadrature ({} unavailable), max |dE_N| = {:e}, max |d discord| = {:e}, {} above {:e}",
                check.checked,
                check.unavailable, check.max_log_negativity_diff, check.max_discord_diff, check.mismatches, SPOT_CHECK_TOL
            );
        }
        check
    });

    let out = SweepOutput { grid: grid.clone(), records, spot_check };
    if opts.progress {
        eprintln!("sweep: done, {} failed points", out.failed_points());
    }
    Ok(out)
}
