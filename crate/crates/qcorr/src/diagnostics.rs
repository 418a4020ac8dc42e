//! Residual diagnostics for fitted quantile autoregressions: the residual
//! quantile autocorrelation function and a portmanteau (Box–Pierce type)
//! adequacy test built on it.

use nalgebra::DMatrix;

use crate::error::{QcorrError, Result};
use crate::numerics::{chi_square_sf, psi, QuantileLevel};
use crate::qar::{Correlogram, QarFit};

/// Portmanteau test outcome.
#[derive(Clone, Copy, Debug)]
pub struct PortmanteauResult {
    /// Q = n · Σ_{k=1..K} r_k².
    pub statistic: f64,
    /// K − p.
    pub df: usize,
    /// Upper-tail χ²_{df} probability of `statistic`.
    pub p_value: f64,
}

/// Residual QACF r_k for k = 1..=max_lag, with the Ω̂₅ diagonal as the
/// per-lag variance.
///
/// Each r_k correlates the residual quantile score ψ_τ(ẽₜ) with the centred
/// lagged residual, summing over t = k+1..n but dividing by n (the same
/// convention as the fit itself; early residuals are the stored zeros). The
/// variance reuses the parent fit's estimated density weights and design
/// moments rather than re-estimating them on the trimmed window.
pub fn qacf_residuals(fit: &QarFit, max_lag: usize) -> Result<Correlogram> {
    if max_lag < 1 {
        return Err(QcorrError::InvalidInput("max_lag must be at least 1".into()));
    }
    let n = fit.n;
    let p = fit.order;
    if n <= max_lag + p {
        return Err(QcorrError::SeriesTooShort { need: max_lag + p + 1, got: n });
    }
    let tau = QuantileLevel::new(fit.tau)?;
    let spread = tau.spread();
    let e = &fit.residuals;
    let nf = n as f64;

    let window_stats = |start: usize| -> (f64, f64) {
        let mu = e[start..].iter().sum::<f64>() / nf;
        let s2 = e[start..].iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / nf;
        (mu, s2)
    };

    let mut values = Vec::with_capacity(max_lag);
    for k in 1..=max_lag {
        let (mu, s2) = window_stats(k);
        if s2 <= 0.0 {
            return Err(QcorrError::ZeroVariance("residuals"));
        }
        let num: f64 = (k..n)
            .map(|t| psi(e[t], tau) * (e[t - k] - mu))
            .sum::<f64>()
            / nf;
        values.push(num / (spread * s2).sqrt());
    }

    // Ω̂₅ over the rows where both the fit design and all K residual lags
    // exist: t = max(K, L)..n−1.
    let t0 = max_lag.max(fit.rows_start);
    let rows = n - t0;
    let skip = t0 - fit.rows_start;
    let k = max_lag;
    let em = DMatrix::from_fn(rows, k, |r, c| e[t0 + r - (c + 1)]);
    let zt = fit.design.rows(skip, rows).into_owned();
    let ft = fit.f.rows(skip, rows).into_owned();
    let (_, s2k) = window_stats(max_lag);
    if s2k <= 0.0 {
        return Err(QcorrError::ZeroVariance("residuals"));
    }
    let see = em.transpose() * &em / nf;
    let s50 = em.transpose() * &zt / nf;
    let mut ef = em.clone();
    for r in 0..rows {
        for c in 0..k {
            ef[(r, c)] *= ft[r];
        }
    }
    let s51 = ef.transpose() * &zt / nf;
    let s41_lu = fit.s41.clone().lu();
    let b = s41_lu
        .solve(&s51.transpose())
        .ok_or(QcorrError::RankDeficient)?; // d×K
    let om5 = (&see + b.transpose() * &fit.s40 * &b
        - b.transpose() * s50.transpose()
        - &s50 * &b)
        / s2k;
    let om5 = (&om5 + om5.transpose()) * 0.5;
    let variances = (0..k).map(|i| om5[(i, i)].max(0.0)).collect();

    Ok(Correlogram::assemble(fit.tau, n, values, variances, fit.truncated))
}

/// Box–Pierce type portmanteau statistic on a residual correlogram.
///
/// `p` is the number of estimated autoregressive parameters (the intercept
/// does not count); the reference distribution is χ² with K − p degrees of
/// freedom, so K must exceed p.
pub fn box_pierce(correlogram: &Correlogram, p: usize) -> Result<PortmanteauResult> {
    let k = correlogram.lags.len();
    if k <= p {
        return Err(QcorrError::DegreesOfFreedom { k, p });
    }
    let q = correlogram.n as f64
        * correlogram.values.iter().map(|r| r * r).sum::<f64>();
    let df = k - p;
    Ok(PortmanteauResult { statistic: q, df, p_value: chi_square_sf(q, df) })
}
