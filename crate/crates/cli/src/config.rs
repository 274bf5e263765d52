//! Flat `key = value` run configuration. Keys mirror the long flags
//! (`omega-c` and `omega_c` are both accepted); `#` starts a comment and
//! `grid` may appear twice. Command-line flags override file values.

use std::path::{Path, PathBuf};

use qcorr::ModelParams;

use crate::error::{CliError, Result};
use crate::{MethodChoice, OutputFormat};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    pub k: Option<f64>,
    pub gamma: Option<f64>,
    pub omega_c: Option<f64>,
    pub temp: Option<f64>,
    pub method: Option<MethodChoice>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub workers: Option<usize>,
    pub grid: Vec<String>,
    pub bisect_tol: Option<f64>,
    pub seed: Option<u64>,
    pub cases: Option<usize>,
}

/// Defaults: the strong-dissipation operating point.
pub const DEFAULT_PARAMS: ModelParams = ModelParams {
    omega1: 10.0,
    omega2: 4.0,
    k: 0.0,
    gamma: 0.5,
    omega_c: 500.0,
    temperature: 0.5,
};

fn parse<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::Input(format!("config line {line}: bad value `{value}` for `{key}`")))
}

impl Settings {
    pub fn parse_str(text: &str) -> Result<Settings> {
        let mut s = Settings::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Input(format!("config line {line_no}: expected `key = value`")));
            };
            let (key, value) = (key.trim().replace('_', "-"), value.trim());
            match key.as_str() {
                "omega1" => s.omega1 = Some(parse(&key, value, line_no)?),
                "omega2" => s.omega2 = Some(parse(&key, value, line_no)?),
                "k" => s.k = Some(parse(&key, value, line_no)?),
                "gamma" => s.gamma = Some(parse(&key, value, line_no)?),
                "omega-c" => s.omega_c = Some(parse(&key, value, line_no)?),
                "temp" | "temperature" => s.temp = Some(parse(&key, value, line_no)?),
                "method" => s.method = Some(parse(&key, value, line_no)?),
                "out" => s.out = Some(PathBuf::from(value)),
                "format" => s.format = Some(parse(&key, value, line_no)?),
                "workers" => s.workers = Some(parse(&key, value, line_no)?),
                "grid" => s.grid.push(value.to_string()),
                "bisect-tol" => s.bisect_tol = Some(parse(&key, value, line_no)?),
                "seed" => s.seed = Some(parse(&key, value, line_no)?),
                "cases" => s.cases = Some(parse(&key, value, line_no)?),
                other => return Err(CliError::Input(format!("config line {line_no}: unknown key `{other}`"))),
            }
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Settings> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Settings::parse_str(&text)
    }

    /// `self` wins wherever it has a value; grids are replaced as a whole.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            omega1: self.omega1.or(base.omega1),
            omega2: self.omega2.or(base.omega2),
            k: self.k.or(base.k),
            gamma: self.gamma.or(base.gamma),
            omega_c: self.omega_c.or(base.omega_c),
            temp: self.temp.or(base.temp),
            method: self.method.or(base.method),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            workers: self.workers.or(base.workers),
            grid: if self.grid.is_empty() { base.grid } else { self.grid },
            bisect_tol: self.bisect_tol.or(base.bisect_tol),
            seed: self.seed.or(base.seed),
            cases: self.cases.or(base.cases),
        }
    }

    pub fn params(&self) -> ModelParams {
        let d = DEFAULT_PARAMS;
        ModelParams {
            omega1: self.omega1.unwrap_or(d.omega1),
            omega2: self.omega2.unwrap_or(d.omega2),
            k: self.k.unwrap_or(d.k),
            gamma: self.gamma.unwrap_or(d.gamma),
            omega_c: self.omega_c.unwrap_or(d.omega_c),
            temperature: self.temp.unwrap_or(d.temperature),
        }
    }
}
