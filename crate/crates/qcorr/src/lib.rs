//! Quantile correlation and quantile autoregression.
//!
//! This crate measures directional association at a chosen quantile level τ
//! rather than in the mean. The building block is the quantile covariance
//! qcov_τ(Y, X) = cov(ψ_τ(Y − Q_τ(Y)), X) with ψ_τ(w) = τ − I(w < 0), which
//! is normalized into a correlation-like quantity, extended to a partial
//! version that nets out control variables through a quantile regression,
//! and then specialized to time series:
//!
//! * [`corr::qcor`] / [`corr::qpcor`] — quantile correlation and partial
//!   correlation with plug-in asymptotic variances;
//! * [`qar::qpacf`] — the quantile partial autocorrelation function, the
//!   identification tool for quantile autoregressive (QAR) lag order;
//! * [`qar::fit_qar`] / [`qar::backward_eliminate`] — QAR estimation with a
//!   sandwich covariance, on full or subset lag sets;
//! * [`diagnostics::qacf_residuals`] / [`diagnostics::box_pierce`] — residual
//!   quantile autocorrelations and a portmanteau adequacy test;
//! * [`sim`] — seeded, reproducible Monte Carlo drivers for the estimators'
//!   sampling behaviour.
//!
//! Quantile regression is solved by an interior-point method on the dual LP
//! with a vertex-polishing step ([`regression::fit_quantile`]), so residuals
//! that are exactly zero at the fitted quantile come out as exact zeros.
//!
//! # Example
//!
//! ```
//! use qcorr::{BandwidthRule, QuantileLevel, Series};
//!
//! let x = Series::new((0..40).map(|i| (i as f64 * 0.77).sin()).collect()).unwrap();
//! let y = Series::new(x.values().iter().map(|v| 2.0 * v + 1.0).collect()).unwrap();
//! let tau = QuantileLevel::new(0.25).unwrap();
//! let est = qcorr::qcor(&y, &x, tau, BandwidthRule::HallSheather, 0.05).unwrap();
//! assert!(est.value > 0.5);
//! assert!(est.standard_error() > 0.0);
//! ```

pub mod corr;
pub mod diagnostics;
pub mod error;
pub mod numerics;
pub mod qar;
pub mod regression;
pub mod sim;

#[cfg(test)]
mod testdata;

// matrix/vector types appearing in the public regression signatures
pub use nalgebra::{DMatrix, DVector};

pub use corr::{qcor, qpcor, BandwidthRule, CorrEstimate};
pub use diagnostics::{box_pierce, qacf_residuals, PortmanteauResult};
pub use error::{QcorrError, Result};
pub use numerics::{QuantileLevel, Series};
pub use qar::{
    backward_eliminate, fit_qar, fit_qar_subset, qpacf, sparsity, Correlogram,
    QarFit, SparsityEstimates,
};
pub use regression::{fit_quantile, QuantileFit};
pub use sim::{run_experiment, ExperimentId, ExperimentReport, ReportCell};
