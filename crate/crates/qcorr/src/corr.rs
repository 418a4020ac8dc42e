//! Quantile correlation and quantile partial correlation for i.i.d. samples,
//! with plug-in estimators of their asymptotic variances.
//!
//! The quantile correlation of (Y, X) at level τ is
//!
//! ```text
//!   qcor_τ(Y, X) = cov{ψ_τ(Y − Q_Y(τ)), X} / sqrt{(τ − τ²) var(X)}
//! ```
//!
//! where ψ_τ(w) = τ − I(w < 0). It measures how X co-moves with the event
//! that Y falls below its τ-th quantile, is bounded, and vanishes exactly
//! when X carries no information about that event. The partial variant
//! replaces the marginal quantile and variance by their counterparts after
//! regressing both variables on a conditioning set Z (quantile regression
//! for Y, least squares for X).

use nalgebra::{DMatrix, DVector};

use crate::error::{QcorrError, Result};
use crate::numerics::{
    empirical_quantile, mean_var, nadaraya_watson, normal_pdf, normal_quantile, psi,
    Kernel, QuantileLevel, Series,
};
use crate::regression::{fit_quantile, ls_solve};

/// Plug-in bandwidth rule for the kernel-smoothing steps inside the
/// asymptotic-variance estimators. All rules are functions of (n, τ) alone;
/// the Hall–Sheather family additionally depends on a significance level α.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BandwidthRule {
    /// Hall–Sheather rate n^{-1/3}.
    #[default]
    HallSheather,
    /// Bofinger rate n^{-1/5}.
    Bofinger,
    /// Hall–Sheather inflated threefold; a deliberate oversmoothing probe.
    HallSheather3,
    /// Bofinger deflated to 60%; a deliberate undersmoothing probe.
    Bofinger06,
}

impl BandwidthRule {
    pub const ALL: [BandwidthRule; 4] = [
        BandwidthRule::HallSheather,
        BandwidthRule::Bofinger,
        BandwidthRule::HallSheather3,
        BandwidthRule::Bofinger06,
    ];

    /// Bandwidth on the quantile-level scale.
    pub fn value(self, n: usize, tau: QuantileLevel, alpha: f64) -> f64 {
        let nf = n as f64;
        let q = normal_quantile(tau.get());
        match self {
            BandwidthRule::HallSheather | BandwidthRule::HallSheather3 => {
                let za = normal_quantile(1.0 - alpha / 2.0);
                let h = nf.powf(-1.0 / 3.0)
                    * za.powf(2.0 / 3.0)
                    * (1.5 * normal_pdf(q).powi(2) / (2.0 * q * q + 1.0)).powf(1.0 / 3.0);
                if self == BandwidthRule::HallSheather3 {
                    3.0 * h
                } else {
                    h
                }
            }
            BandwidthRule::Bofinger | BandwidthRule::Bofinger06 => {
                let h = nf.powf(-0.2)
                    * (4.5 * normal_pdf(q).powi(4) / (2.0 * q * q + 1.0).powi(2)).powf(0.2);
                if self == BandwidthRule::Bofinger06 {
                    0.6 * h
                } else {
                    h
                }
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BandwidthRule::HallSheather => "hs",
            BandwidthRule::Bofinger => "b",
            BandwidthRule::HallSheather3 => "3hs",
            BandwidthRule::Bofinger06 => "0.6b",
        }
    }
}

impl std::str::FromStr for BandwidthRule {
    type Err = QcorrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hs" => Ok(BandwidthRule::HallSheather),
            "b" => Ok(BandwidthRule::Bofinger),
            "3hs" => Ok(BandwidthRule::HallSheather3),
            "0.6b" => Ok(BandwidthRule::Bofinger06),
            other => Err(QcorrError::InvalidInput(format!(
                "unknown bandwidth rule {other:?} (expected hs, b, 3hs, 0.6b)"
            ))),
        }
    }
}

impl std::fmt::Display for BandwidthRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A correlation-type point estimate bundled with its estimated asymptotic
/// variance Ω̂, so that `sqrt(Ω̂/n)` is the standard error.
#[derive(Clone, Copy, Debug)]
pub struct CorrEstimate {
    pub value: f64,
    /// Plug-in estimate of the limiting variance of √n(estimate − truth).
    pub asymptotic_variance: f64,
    pub n: usize,
    pub tau: f64,
    /// True when a numerical fallback fired while estimating the variance
    /// (negative plug-in clamped to zero, or an ill-conditioned smoothing
    /// matrix replaced by its pseudo-inverse). The point estimate itself is
    /// never affected.
    pub flagged: bool,
}

impl CorrEstimate {
    pub fn standard_error(&self) -> f64 {
        (self.asymptotic_variance / self.n as f64).sqrt()
    }

    /// Symmetric normal-approximation confidence band half-width at the given
    /// two-sided level (e.g. 0.05 → 1.96·SE).
    pub fn band_half_width(&self, level: f64) -> f64 {
        normal_quantile(1.0 - level / 2.0) * self.standard_error()
    }
}

fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(QcorrError::InvalidInput(format!(
            "alpha must lie in (0,1), got {alpha}"
        )))
    }
}

/// Quantile correlation of `y` and `x` at level τ, with its plug-in
/// asymptotic variance. `rule`/`alpha` control only the variance smoothing.
pub fn qcor(
    y: &Series,
    x: &Series,
    tau: QuantileLevel,
    rule: BandwidthRule,
    alpha: f64,
) -> Result<CorrEstimate> {
    validate_alpha(alpha)?;
    let n = y.len();
    if x.len() != n {
        return Err(QcorrError::LengthMismatch { left: n, right: x.len() });
    }
    let t = tau.get();
    let q = empirical_quantile(y, tau);
    let (xb, s2) = mean_var(x.values());
    if s2 <= 0.0 {
        return Err(QcorrError::ZeroVariance("x"));
    }
    let nf = n as f64;
    let ps: Vec<f64> = y.values().iter().map(|&v| psi(v - q, tau)).collect();
    let qcov = ps
        .iter()
        .zip(x.values())
        .map(|(p, &xv)| p * (xv - xb))
        .sum::<f64>()
        / nf;
    let value = qcov / (tau.spread() * s2).sqrt();

    // plug-in asymptotic variance: fourth-moment, score, and cross terms of
    // the joint influence function of (q̂cov, σ̂²)
    let sd_y = mean_var(y.values()).1.sqrt();
    if sd_y <= 0.0 {
        return Err(QcorrError::ZeroVariance("y"));
    }
    let h = rule.value(n, tau, alpha) * sd_y;
    let rows: Vec<Vec<f64>> = x.values().iter().map(|&v| vec![v]).collect();
    let mu_xy = nadaraya_watson(y, &rows, q, h, Kernel::Gaussian)?[0];
    let mut s11 = 0.0;
    let mut s12 = 0.0;
    let mut s13 = 0.0;
    for (&xv, p) in x.values().iter().zip(&ps) {
        let xc = xv - xb;
        let c = p * (xv - mu_xy);
        s11 += xc.powi(4);
        s12 += c * c;
        s13 += c * xc * xc;
    }
    s11 = s11 / nf - s2 * s2;
    s12 = s12 / nf - qcov * qcov;
    s13 = s13 / nf - s2 * qcov;
    let om = (s11 * qcov * qcov / (4.0 * s2.powi(3)) - s13 * qcov / (s2 * s2) + s12 / s2)
        / tau.spread();
    Ok(CorrEstimate {
        value,
        asymptotic_variance: om.max(0.0),
        n,
        tau: t,
        flagged: om < 0.0,
    })
}

/// Assemble the conditioning design (1, z₁, …, z_m) shared by both partial
/// regressions.
fn conditioning_design(n: usize, z: &[Series]) -> Result<DMatrix<f64>> {
    for s in z {
        if s.len() != n {
            return Err(QcorrError::LengthMismatch { left: n, right: s.len() });
        }
    }
    Ok(DMatrix::from_fn(n, 1 + z.len(), |i, j| {
        if j == 0 {
            1.0
        } else {
            z[j - 1].values()[i]
        }
    }))
}

/// Quantile partial correlation of `y` and `x` at level τ given the
/// conditioning variables `z` (may be empty), with its plug-in asymptotic
/// variance. `x` enters uncentred: its LS projection on (1, z) already
/// removes the mean.
pub fn qpcor(
    y: &Series,
    x: &Series,
    z: &[Series],
    tau: QuantileLevel,
    rule: BandwidthRule,
    alpha: f64,
) -> Result<CorrEstimate> {
    validate_alpha(alpha)?;
    let n = y.len();
    if x.len() != n {
        return Err(QcorrError::LengthMismatch { left: n, right: x.len() });
    }
    let zs = conditioning_design(n, z)?;
    let d = zs.ncols();
    if n < d + 2 {
        return Err(QcorrError::SeriesTooShort { need: d + 2, got: n });
    }
    let nf = n as f64;
    let t = tau.get();
    let xv = DVector::from_column_slice(x.values());
    let yv = DVector::from_column_slice(y.values());

    let th1 = ls_solve(&zs, &xv)?;
    let ex = &xv - &zs * &th1;
    let s2 = ex.iter().map(|v| v * v).sum::<f64>() / nf;
    if s2 <= 0.0 {
        return Err(QcorrError::ZeroVariance("x | z"));
    }
    let qr = fit_quantile(&zs, &yv, tau)?;
    let ys = qr.residuals; // exact zeros on interpolated rows, so ψ(0) = τ
    let ps: Vec<f64> = ys.iter().map(|&v| psi(v, tau)).collect();
    let qcov = ps.iter().zip(x.values()).map(|(p, &v)| p * v).sum::<f64>() / nf;
    let value = qcov / (tau.spread() * s2).sqrt();

    // conditional-mean adjustment E(X·Z | Y* = 0) enters through a smoothed
    // least-squares projection evaluated at the fitted quantile surface
    let (_, var_ys) = mean_var(ys.as_slice());
    if var_ys <= 0.0 {
        return Err(QcorrError::ZeroVariance("y | z"));
    }
    let h = rule.value(n, tau, alpha) * var_ys.sqrt();
    let cond = Series::new(ys.as_slice().to_vec())?;
    let m1_rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..d).map(|j| x.values()[i] * zs[(i, j)]).collect())
        .collect();
    let m2_rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r = Vec::with_capacity(d * d);
            for a in 0..d {
                for b in 0..d {
                    r.push(zs[(i, a)] * zs[(i, b)]);
                }
            }
            r
        })
        .collect();
    let m1 = DVector::from_vec(nadaraya_watson(&cond, &m1_rows, 0.0, h, Kernel::Gaussian)?);
    let m2v = nadaraya_watson(&cond, &m2_rows, 0.0, h, Kernel::Gaussian)?;
    let m2 = DMatrix::from_fn(d, d, |a, b| m2v[a * d + b]);

    let svd = m2.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let mut pinv_used = false;
    let s20 = if smin > 0.0 && smax / smin <= 1e12 {
        m2.lu().solve(&m1).ok_or(QcorrError::RankDeficient)?
    } else {
        pinv_used = true;
        let pinv = svd
            .pseudo_inverse(smax * 1e-12)
            .map_err(|_| QcorrError::RankDeficient)?;
        pinv * &m1
    };

    let u = &xv - &zs * &s20;
    let mut s23 = 0.0;
    let mut s24 = 0.0;
    let mut s25 = 0.0;
    for i in 0..n {
        let pu = ps[i] * u[i];
        let e2 = ex[i] * ex[i];
        s23 += e2 * e2;
        s24 += pu * pu;
        s25 += pu * e2;
    }
    s23 = s23 / nf - s2 * s2;
    s24 = s24 / nf - qcov * qcov;
    s25 = s25 / nf - s2 * qcov;
    let om = (s23 * qcov * qcov / (4.0 * s2.powi(3)) - s25 * qcov / (s2 * s2) + s24 / s2)
        / tau.spread();
    Ok(CorrEstimate {
        value,
        asymptotic_variance: om.max(0.0),
        n,
        tau: t,
        flagged: pinv_used || om < 0.0,
    })
}
