pub mod approx;
pub mod error;
pub mod gaussian;
pub mod model;
pub mod poly;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
pub use model::ModelParams;
pub use spectral::{covariance_analytic, covariance_quadrature, CovarianceMatrix, Method};
