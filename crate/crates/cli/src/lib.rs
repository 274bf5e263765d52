//! Command-line surface for the two-oscillator correlation engine: single
//! points, parameter sweeps, entanglement-band search and a self-check.

pub mod band;
pub mod config;
pub mod error;
pub mod grid;
pub mod point;
pub mod sweep;
pub mod validate;

use std::str::FromStr;

use clap::ValueEnum;
use qcorr::gaussian::{correlation_report, CorrelationReport};
use qcorr::{covariance_analytic, covariance_quadrature, CovarianceMatrix, Method, ModelParams};
use serde::Serialize;

pub use error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Analytic,
    Quadrature,
    Both,
}

impl MethodChoice {
    pub fn methods(self) -> &'static [Method] {
        match self {
            MethodChoice::Analytic => &[Method::Analytic],
            MethodChoice::Quadrature => &[Method::Quadrature],
            MethodChoice::Both => &[Method::Analytic, Method::Quadrature],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MethodChoice::Analytic => "analytic",
            MethodChoice::Quadrature => "quadrature",
            MethodChoice::Both => "both",
        }
    }
}

impl FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

pub fn covariance(p: &ModelParams, method: Method) -> qcorr::Result<CovarianceMatrix> {
    match method {
        Method::Quadrature => covariance_quadrature(p),
        _ => covariance_analytic(p),
    }
}

pub fn evaluate(p: &ModelParams, method: Method) -> qcorr::Result<CorrelationReport> {
    correlation_report(&covariance(p, method)?)
}

/// Flat view of a [`CorrelationReport`], in output column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Measures {
    #[serde(rename = "E_N")]
    pub log_negativity: f64,
    pub discord2: f64,
    pub nu_tilde_minus: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub mu: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub eta_plus_var: f64,
    pub eta_minus_var: f64,
    pub pi_plus_var: f64,
    pub pi_minus_var: f64,
}

impl Measures {
    pub const COLUMNS: [&'static str; 12] = [
        "E_N",
        "discord2",
        "nu_tilde_minus",
        "nu_minus",
        "nu_plus",
        "mu",
        "mu1",
        "mu2",
        "eta_plus_var",
        "eta_minus_var",
        "pi_plus_var",
        "pi_minus_var",
    ];

    pub fn values(&self) -> [f64; 12] {
        [
            self.log_negativity,
            self.discord2,
            self.nu_tilde_minus,
            self.nu_minus,
            self.nu_plus,
            self.mu,
            self.mu1,
            self.mu2,
            self.eta_plus_var,
            self.eta_minus_var,
            self.pi_plus_var,
            self.pi_minus_var,
        ]
    }
}

impl From<&CorrelationReport> for Measures {
    fn from(r: &CorrelationReport) -> Self {
        Measures {
            log_negativity: r.log_negativity,
            discord2: r.discord_mode2,
            nu_tilde_minus: r.nu_tilde_minus,
            nu_minus: r.nu_minus,
            nu_plus: r.nu_plus,
            mu: r.purity_global,
            mu1: r.purity_mode1,
            mu2: r.purity_mode2,
            eta_plus_var: r.epr.eta_plus,
            eta_minus_var: r.epr.eta_minus,
            pi_plus_var: r.epr.pi_plus,
            pi_minus_var: r.epr.pi_minus,
        }
    }
}
