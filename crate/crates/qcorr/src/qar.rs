//! Quantile autoregression: QPACF-based order identification, QAR(p) fitting
//! with a sandwich coefficient covariance, Hendricks–Koenker conditional
//! density estimation, and backward lag elimination.
//!
//! Conventions shared with the correlation module: every time-series sum runs
//! over t = L+1..n (1-based) but is divided by the full length n, and lagged
//! designs are (1, y_{t−l₁}, …, y_{t−l_m}).

use nalgebra::{DMatrix, DVector};

use crate::corr::BandwidthRule;
use crate::error::{QcorrError, Result};
use crate::numerics::{chi_square_sf, psi, QuantileLevel, Series};
use crate::regression::{fit_quantile, ls_solve};

/// Sequence of per-lag correlation-type values with Ω̂-based bands; produced
/// by the QPACF and by the residual QACF.
#[derive(Clone, Debug)]
pub struct Correlogram {
    pub tau: f64,
    /// Full series length n (the divisor used in every sum).
    pub n: usize,
    /// Lags 1..=K.
    pub lags: Vec<usize>,
    pub values: Vec<f64>,
    /// Plug-in asymptotic variance Ω̂ per lag.
    pub variances: Vec<f64>,
    /// 1.96·√(Ω̂/n) per lag.
    pub band: Vec<f64>,
    /// True when the sparsity safeguard truncated at least one observation
    /// anywhere in the computation.
    pub truncated: bool,
}

impl Correlogram {
    pub(crate) fn assemble(
        tau: f64,
        n: usize,
        values: Vec<f64>,
        variances: Vec<f64>,
        truncated: bool,
    ) -> Self {
        let band = variances
            .iter()
            .map(|&v| 1.96 * (v.max(0.0) / n as f64).sqrt())
            .collect();
        Correlogram {
            tau,
            n,
            lags: (1..=values.len()).collect(),
            values,
            variances,
            band,
            truncated,
        }
    }

    /// Lags whose value exceeds the two-sided normal threshold at the given
    /// level (e.g. 0.05 → |value| > z_{0.975}·√(Ω̂/n)).
    pub fn significant_lags(&self, level: f64) -> Vec<usize> {
        let z = crate::numerics::normal_quantile(1.0 - level / 2.0);
        self.lags
            .iter()
            .zip(self.values.iter().zip(&self.variances))
            .filter(|(_, (v, om))| v.abs() > z * (*om / self.n as f64).sqrt())
            .map(|(&l, _)| l)
            .collect()
    }
}

/// Hendricks–Koenker conditional-density estimates along the sample path.
#[derive(Clone, Debug)]
pub struct SparsityEstimates {
    /// f̃_{t−1}(0) per design row (rows t = k+1..n); always > 0.
    pub values: Vec<f64>,
    /// Bandwidth actually used, after the extreme-τ clamp.
    pub bandwidth: f64,
    /// Truncation flags: true where the raw difference quotient was ≤ 0.
    pub truncated: Vec<bool>,
}

/// A fitted quantile autoregression, possibly on a lag subset.
#[derive(Clone, Debug)]
pub struct QarFit {
    pub tau: f64,
    /// Model order p = the largest included lag (0 for intercept-only).
    pub order: usize,
    /// (φ̃₀, φ̃₁, …, φ̃_p); entries at excluded lags are exactly 0.
    pub coefficients: Vec<f64>,
    /// (p+1)×(p+1) covariance Ω̂₄/n of the coefficient vector, with zero
    /// rows/columns at excluded lags.
    pub covariance: DMatrix<f64>,
    /// Length-n residual series; ẽₜ = 0 for t ≤ p by convention.
    pub residuals: Vec<f64>,
    /// The lags actually present in the design, ascending.
    pub included_lags: Vec<usize>,
    pub n: usize,
    /// True when the sparsity safeguard fired.
    pub truncated: bool,
    // compact pieces retained for the residual-diagnostic variance, which
    // reuses the fit's design moments rather than re-estimating them
    pub(crate) design: DMatrix<f64>,
    pub(crate) rows_start: usize,
    pub(crate) f: DVector<f64>,
    pub(crate) s40: DMatrix<f64>,
    pub(crate) s41: DMatrix<f64>,
}

impl QarFit {
    /// Standard errors aligned with `coefficients`; 0 at excluded lags.
    pub fn standard_errors(&self) -> Vec<f64> {
        (0..self.coefficients.len())
            .map(|i| self.covariance[(i, i)].max(0.0).sqrt())
            .collect()
    }
}

/// Design with rows t = tmin..n−1 (0-based) and columns (1, y_{t−l}).
/// Requires tmin ≥ max(lags).
pub(crate) fn lag_design(y: &[f64], lags: &[usize], tmin: usize) -> DMatrix<f64> {
    let rows = y.len() - tmin;
    DMatrix::from_fn(rows, 1 + lags.len(), |r, c| {
        if c == 0 {
            1.0
        } else {
            y[tmin + r - lags[c - 1]]
        }
    })
}

fn median_of(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub(crate) struct SparsityParts {
    pub f: DVector<f64>,
    pub h: f64,
    pub truncated_mask: Vec<bool>,
}

/// Difference-quotient density estimate on the design with the given lags.
///
/// Fits the τ±h quantile regressions and sets f̃ₜ = 2h/ΔQ̃ₜ. Crossing rows
/// (ΔQ̃ₜ ≤ 0) are floored at one fifth of the median positive spacing, which
/// keeps Σ̂₄₁-type moment matrices positive definite while staying on the
/// scale of the data.
pub(crate) fn sparsity_on_lags(
    y: &[f64],
    tau: QuantileLevel,
    lags: &[usize],
    hq: f64,
) -> Result<SparsityParts> {
    let t = tau.get();
    let mut h = hq;
    if t + h >= 1.0 || t - h <= 0.0 {
        h = 0.9 * t.min(1.0 - t);
    }
    if t + h >= 1.0 || t - h <= 0.0 {
        return Err(QcorrError::BandwidthTooLarge { tau: t, h });
    }
    let tmin = lags.iter().max().copied().unwrap_or(0);
    let z = lag_design(y, lags, tmin);
    let resp = DVector::from_column_slice(&y[tmin..]);
    let bp = fit_quantile(&z, &resp, QuantileLevel::new(t + h)?)?.coefficients;
    let bm = fit_quantile(&z, &resp, QuantileLevel::new(t - h)?)?.coefficients;
    let dq = &z * (bp - bm);
    let mut pos: Vec<f64> = dq.iter().copied().filter(|&v| v > 0.0).collect();
    let m = if pos.is_empty() { 2.0 * h } else { median_of(&mut pos) };
    let eps = (m / 5.0).max(2.0 * h / 1e9);
    let f = dq.map(|v| 2.0 * h / v.max(eps));
    let truncated_mask = dq.iter().map(|&v| v <= 0.0).collect();
    Ok(SparsityParts { f, h, truncated_mask })
}

/// Conditional-density estimates on the order-k autoregressive design
/// (1, y_{t−1}, …, y_{t−k}); `k = 0` means intercept-only.
pub fn sparsity(
    series: &Series,
    tau: QuantileLevel,
    fit_order_k: usize,
    rule: BandwidthRule,
    alpha: f64,
) -> Result<SparsityEstimates> {
    let n = series.len();
    if n <= 3 * (fit_order_k + 1) {
        return Err(QcorrError::SeriesTooShort { need: 3 * (fit_order_k + 1) + 1, got: n });
    }
    let lags: Vec<usize> = (1..=fit_order_k).collect();
    let hq = rule.value(n, tau, alpha);
    let parts = sparsity_on_lags(series.values(), tau, &lags, hq)?;
    Ok(SparsityEstimates {
        values: parts.f.iter().copied().collect(),
        bandwidth: parts.h,
        truncated: parts.truncated_mask,
    })
}

/// Sample quantile partial autocorrelation function for lags 1..=max_lag.
///
/// For each k, y_{t−k} is regressed on (1, y_{t−1}, …, y_{t−k+1}) by least
/// squares and y_t on the same design by quantile regression; the value is
/// the normalized score covariance. The variance slot holds the Ω̂₃ plug-in,
/// whose theoretical value is 1 for a correctly specified lower-order model.
pub fn qpacf(
    series: &Series,
    tau: QuantileLevel,
    max_lag: usize,
    rule: BandwidthRule,
    alpha: f64,
) -> Result<Correlogram> {
    let n = series.len();
    if max_lag < 1 {
        return Err(QcorrError::InvalidInput("max_lag must be at least 1".into()));
    }
    if n <= max_lag + 2 {
        return Err(QcorrError::SeriesTooShort { need: max_lag + 3, got: n });
    }
    let y = series.values();
    let nf = n as f64;
    let t = tau.get();
    let mut values = Vec::with_capacity(max_lag);
    let mut variances = Vec::with_capacity(max_lag);
    let mut truncated = false;

    for k in 1..=max_lag {
        let inner: Vec<usize> = (1..k).collect();
        let z = lag_design(y, &inner, k); // width k, rows t = k..n-1
        let rows = n - k;
        let resp = DVector::from_column_slice(&y[k..]);
        // y_{t−k} for rows t = k..n−1 is just the series head
        let xlag = DVector::from_fn(rows, |r, _| y[r]);

        let thls = ls_solve(&z, &xlag)?;
        let fitted = &z * &thls;
        let sig2 = xlag
            .iter()
            .zip(fitted.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            / nf;
        if sig2 <= 0.0 {
            return Err(QcorrError::ZeroVariance("lagged response"));
        }
        let qfit = fit_quantile(&z, &resp, tau)?;
        let score_sum: f64 = qfit
            .residuals
            .iter()
            .zip(xlag.iter())
            .map(|(&r, &x)| psi(r, tau) * x)
            .sum();
        let phi = score_sum / nf / (tau.spread() * sig2).sqrt();

        // Ω̂₃ plug-in from the order-k sparsity weights
        let hq = rule.value(n, tau, alpha);
        let klags: Vec<usize> = (1..=k).collect();
        let sp = sparsity_on_lags(y, tau, &klags, hq)?;
        truncated |= sp.truncated_mask.iter().any(|&b| b);
        let f = &sp.f;
        let d = z.ncols();
        let mut a0 = DVector::zeros(d);
        let mut a1 = DVector::zeros(d);
        let mut s30 = DMatrix::zeros(d, d);
        let mut s31 = DMatrix::zeros(d, d);
        for r in 0..rows {
            let xl = xlag[r];
            let fr = f[r];
            for p in 0..d {
                let zp = z[(r, p)];
                a0[p] += xl * zp;
                a1[p] += fr * xl * zp;
                for q in 0..d {
                    let zz = zp * z[(r, q)];
                    s30[(p, q)] += zz;
                    s31[(p, q)] += fr * zz;
                }
            }
        }
        a0 /= nf;
        a1 /= nf;
        s30 /= nf;
        s31 /= nf;
        let ey2 = resp.iter().map(|v| v * v).sum::<f64>() / nf;
        let v = s31.lu().solve(&a1).ok_or(QcorrError::RankDeficient)?;
        let om = (ey2 - 2.0 * v.dot(&a0) + (&s30 * &v).dot(&v)) / sig2;
        values.push(phi);
        variances.push(om.max(0.0));
    }
    Ok(Correlogram::assemble(t, n, values, variances, truncated))
}

fn validate_lags(lags: &[usize]) -> Result<()> {
    for (i, &l) in lags.iter().enumerate() {
        if l == 0 {
            return Err(QcorrError::InvalidInput("lag 0 is the response itself".into()));
        }
        if i > 0 && lags[i - 1] >= l {
            return Err(QcorrError::InvalidInput(
                "lags must be strictly increasing".into(),
            ));
        }
    }
    Ok(())
}

/// Fit a QAR model on the given lag subset (ascending; may be empty for an
/// intercept-only fit). Coefficient covariance is the sandwich
/// (τ−τ²)·Σ̂₄₁⁻¹Σ̂₄₀Σ̂₄₁⁻¹/n on the subset design, zero-embedded to full
/// (p+1)×(p+1) shape.
pub fn fit_qar_subset(
    series: &Series,
    tau: QuantileLevel,
    lags: &[usize],
    rule: BandwidthRule,
    alpha: f64,
) -> Result<QarFit> {
    validate_lags(lags)?;
    let n = series.len();
    let p = lags.last().copied().unwrap_or(0);
    if n <= 3 * (p + 1) {
        return Err(QcorrError::SeriesTooShort { need: 3 * (p + 1) + 1, got: n });
    }
    let y = series.values();
    let nf = n as f64;
    let tmin = p;
    let z = lag_design(y, lags, tmin);
    let resp = DVector::from_column_slice(&y[tmin..]);
    let qfit = fit_quantile(&z, &resp, tau)?;

    let mut residuals = vec![0.0; n];
    residuals[tmin..].copy_from_slice(qfit.residuals.as_slice());

    let hq = rule.value(n, tau, alpha);
    let sp = sparsity_on_lags(y, tau, lags, hq)?;
    let truncated = sp.truncated_mask.iter().any(|&b| b);
    let d = z.ncols();
    let mut s40 = DMatrix::zeros(d, d);
    let mut s41 = DMatrix::zeros(d, d);
    for r in 0..z.nrows() {
        let fr = sp.f[r];
        for a in 0..d {
            for b in 0..d {
                let zz = z[(r, a)] * z[(r, b)];
                s40[(a, b)] += zz;
                s41[(a, b)] += fr * zz;
            }
        }
    }
    s40 /= nf;
    s41 /= nf;
    let s41i = s41.clone().try_inverse().ok_or(QcorrError::RankDeficient)?;
    let om4 = tau.spread() * (&s41i * &s40 * &s41i);
    let om4 = (&om4 + om4.transpose()) * 0.5;

    // zero-embed the compact estimates into intercept + lags 1..=p
    let mut coefficients = vec![0.0; p + 1];
    let mut covariance = DMatrix::zeros(p + 1, p + 1);
    let slots: Vec<usize> =
        std::iter::once(0).chain(lags.iter().copied()).collect();
    for (ci, &si) in slots.iter().enumerate() {
        coefficients[si] = qfit.coefficients[ci];
        for (cj, &sj) in slots.iter().enumerate() {
            covariance[(si, sj)] = om4[(ci, cj)] / nf;
        }
    }

    Ok(QarFit {
        tau: tau.get(),
        order: p,
        coefficients,
        covariance,
        residuals,
        included_lags: lags.to_vec(),
        n,
        truncated,
        design: z,
        rows_start: tmin,
        f: sp.f,
        s40,
        s41,
    })
}

/// Fit a full QAR(p): all lags 1..=p plus intercept. `p = 0` reduces to the
/// sample quantile.
pub fn fit_qar(
    series: &Series,
    tau: QuantileLevel,
    p: usize,
    rule: BandwidthRule,
    alpha: f64,
) -> Result<QarFit> {
    let lags: Vec<usize> = (1..=p).collect();
    fit_qar_subset(series, tau, &lags, rule, alpha)
}

/// Backward lag elimination: starting from lags 1..=p_max, repeatedly drop
/// the least significant lag (largest two-sided normal p-value above `level`,
/// ties broken toward the larger lag) and refit, until every retained lag is
/// significant. The intercept is never dropped; total elimination yields an
/// intercept-only fit.
pub fn backward_eliminate(
    series: &Series,
    tau: QuantileLevel,
    p_max: usize,
    rule: BandwidthRule,
    alpha: f64,
    level: f64,
) -> Result<QarFit> {
    if p_max < 1 {
        return Err(QcorrError::InvalidInput("p_max must be at least 1".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(QcorrError::InvalidInput(format!(
            "significance level must lie in (0,1), got {level}"
        )));
    }
    let mut lags: Vec<usize> = (1..=p_max).collect();
    loop {
        let fit = fit_qar_subset(series, tau, &lags, rule, alpha)?;
        if lags.is_empty() {
            return Ok(fit);
        }
        let mut worst: Option<(usize, f64)> = None; // (lag, p-value)
        for &l in &lags {
            let se = fit.covariance[(l, l)].max(0.0).sqrt();
            let zstat = if se > 0.0 { fit.coefficients[l] / se } else { f64::INFINITY };
            let pv = chi_square_sf(zstat * zstat, 1);
            // ties (and equal p-values) resolve toward the larger lag
            if worst.map_or(true, |(_, wp)| pv >= wp) {
                worst = Some((l, pv));
            }
        }
        let (drop_lag, worst_p) = worst.unwrap();
        if worst_p <= level {
            return Ok(fit);
        }
        lags.retain(|&l| l != drop_lag);
    }
}
