use std::fmt;
use std::str::FromStr;

use qcorr::ModelParams;

use crate::error::CliError;
use crate::MethodChoice;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    K,
    Omega2,
    Temperature,
    Gamma,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::K => "k",
            Axis::Omega2 => "omega2",
            Axis::Temperature => "temperature",
            Axis::Gamma => "gamma",
        }
    }

    pub fn apply(self, p: ModelParams, value: f64) -> ModelParams {
        match self {
            Axis::K => p.with_k(value),
            Axis::Omega2 => p.with_omega2(value),
            Axis::Temperature => p.with_temperature(value),
            Axis::Gamma => p.with_gamma(value),
        }
    }

    fn accepts(self, value: f64) -> bool {
        match self {
            Axis::Omega2 => value > 0.0,
            _ => value >= 0.0,
        }
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "k" => Ok(Axis::K),
            "omega2" | "w2" => Ok(Axis::Omega2),
            "temperature" | "temp" | "T" => Ok(Axis::Temperature),
            "gamma" => Ok(Axis::Gamma),
            other => Err(CliError::Input(format!("unknown grid axis `{other}` (expected k, omega2, temperature or gamma)"))),
        }
    }
}

/// `axis:lo:hi:n`, with `n` points evenly spaced on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl AxisSpec {
    pub fn new(axis: Axis, lo: f64, hi: f64, points: usize) -> Result<Self, CliError> {
        if points < 2 {
            return Err(CliError::Input(format!("grid axis {} needs at least 2 points", axis.name())));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CliError::Input(format!("grid axis {} needs finite lo < hi, got {lo}..{hi}", axis.name())));
        }
        if !axis.accepts(lo) {
            return Err(CliError::Input(format!("grid axis {} starts outside the valid domain at {lo}", axis.name())));
        }
        Ok(AxisSpec { axis, lo, hi, points })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * i as f64 / (self.points - 1) as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|i| self.value(i))
    }
}

impl FromStr for AxisSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [axis, lo, hi, n] = parts[..] else {
            return Err(CliError::Input(format!("grid `{s}` is not of the form axis:lo:hi:n")));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| CliError::Input(format!("grid `{s}`: `{t}` is not a number")));
        let points = n.trim().parse::<usize>().map_err(|_| CliError::Input(format!("grid `{s}`: `{n}` is not a point count")))?;
        AxisSpec::new(axis.trim().parse()?, num(lo)?, num(hi)?, points)
    }
}

impl fmt::Display for AxisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.axis.name(), self.lo, self.hi, self.points)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub axis1: AxisSpec,
    pub axis2: Option<AxisSpec>,
    pub base: ModelParams,
    pub method: MethodChoice,
}

impl SweepGrid {
    pub fn new(axis1: AxisSpec, axis2: Option<AxisSpec>, base: ModelParams, method: MethodChoice) -> Result<Self, CliError> {
        if axis2.is_some_and(|a| a.axis == axis1.axis) {
            return Err(CliError::Input(format!("both grid axes are {}", axis1.axis.name())));
        }
        let grid = SweepGrid { axis1, axis2, base, method };
        let points = grid.points();
        for corner in [points.first(), points.last()].into_iter().flatten() {
            match qcorr::model::validate_params(corner.params) {
                Err(qcorr::Error::ResonantParams { .. }) | Ok(_) => {}
                Err(e) => return Err(e.into()),
            }
        }
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.axis1.points * self.axis2.map_or(1, |a| a.points)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points with axis 2 varying slowest.
    pub fn points(&self) -> Vec<GridPoint> {
        let outer: Vec<Option<f64>> = match &self.axis2 {
            Some(a) => a.values().map(Some).collect(),
            None => vec![None],
        };
        let mut out = Vec::with_capacity(self.len());
        for a2 in outer {
            for a1 in self.axis1.values() {
                let mut params = self.axis1.axis.apply(self.base, a1);
                if let (Some(spec), Some(v)) = (&self.axis2, a2) {
                    params = spec.axis.apply(params, v);
                }
                out.push(GridPoint { axis1: a1, axis2: a2, params });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub axis1: f64,
    pub axis2: Option<f64>,
    pub params: ModelParams,
}
