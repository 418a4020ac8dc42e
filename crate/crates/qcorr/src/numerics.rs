//! Scalar and vector primitives shared by every estimator: the quantile score
//! and check function, order-statistic empirical quantiles, divisor-n moments,
//! Nadaraya–Watson smoothing, and the chi-square tail probability through the
//! regularized incomplete gamma function.

use crate::error::{QcorrError, Result};

pub const SQRT_2PI: f64 = 2.506628274631000502;

/// Quantile level τ, valid strictly inside (0,1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantileLevel(f64);

impl QuantileLevel {
    pub fn new(tau: f64) -> Result<Self> {
        if tau.is_finite() && tau > 0.0 && tau < 1.0 {
            Ok(Self(tau))
        } else {
            Err(QcorrError::InvalidQuantileLevel(tau))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// τ(1−τ), the variance of ψ_τ evaluated at an exact quantile.
    pub fn spread(self) -> f64 {
        self.0 * (1.0 - self.0)
    }
}

/// Ordered sequence of finite observations; nonempty by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Series(Vec<f64>);

impl Series {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(QcorrError::EmptySeries);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(QcorrError::NonFinite(i));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }
}

/// Smoothing kernel; symmetric densities only. Defaults to the standard
/// Gaussian, which is also what every internal plug-in uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Kernel {
    #[default]
    Gaussian,
}

impl Kernel {
    pub fn evaluate(self, u: f64) -> f64 {
        match self {
            Kernel::Gaussian => (-0.5 * u * u).exp() / SQRT_2PI,
        }
    }
}

/// Quantile score ψ_τ(w) = τ − I(w < 0); ψ_τ(0) = τ.
pub fn psi(w: f64, tau: QuantileLevel) -> f64 {
    if w < 0.0 {
        tau.get() - 1.0
    } else {
        tau.get()
    }
}

/// Check function ρ_τ(w) = w·ψ_τ(w) ≥ 0.
pub fn rho(w: f64, tau: QuantileLevel) -> f64 {
    w * psi(w, tau)
}

/// Left-continuous inverse of the empirical CDF: the order statistic with
/// 1-based rank ⌈nτ⌉. Always an element of the sample.
pub fn empirical_quantile(sample: &Series, tau: QuantileLevel) -> f64 {
    quantile_of(sample.values(), tau.get())
}

pub(crate) fn quantile_of(values: &[f64], tau: f64) -> f64 {
    let n = values.len();
    debug_assert!(n > 0 && tau > 0.0 && tau < 1.0);
    let j = (n as f64 * tau).ceil() as usize; // 1 ≤ j ≤ n for τ ∈ (0,1)
    let mut v = values.to_vec();
    let (_, q, _) = v.select_nth_unstable_by(j - 1, |a, b| a.total_cmp(b));
    *q
}

/// Sample mean and variance, both with divisor n.
pub fn moments(sample: &Series) -> (f64, f64) {
    mean_var(sample.values())
}

pub(crate) fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var)
}

/// Nadaraya–Watson estimate of E(row | conditioning = eval_point), computed
/// componentwise over the response rows.
pub fn nadaraya_watson(
    conditioning: &Series,
    response_rows: &[Vec<f64>],
    eval_point: f64,
    bandwidth: f64,
    kernel: Kernel,
) -> Result<Vec<f64>> {
    let n = conditioning.len();
    if response_rows.len() != n {
        return Err(QcorrError::LengthMismatch { left: n, right: response_rows.len() });
    }
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(QcorrError::InvalidInput(format!(
            "bandwidth must be a positive real, got {bandwidth}"
        )));
    }
    let width = response_rows.first().map_or(0, |r| r.len());
    if response_rows.iter().any(|r| r.len() != width) {
        return Err(QcorrError::InvalidInput("ragged response rows".into()));
    }
    let mut num = vec![0.0; width];
    let mut den = 0.0;
    for (c, row) in conditioning.values().iter().zip(response_rows) {
        let w = kernel.evaluate((c - eval_point) / bandwidth);
        den += w;
        for (acc, v) in num.iter_mut().zip(row) {
            *acc += w * v;
        }
    }
    if den < 1e-300 {
        return Err(QcorrError::DegenerateWindow);
    }
    for acc in &mut num {
        *acc /= den;
    }
    Ok(num)
}

// ------------------------------------------------------------ special functions

/// ln Γ(x) by the Lanczos approximation (g = 7, 9 terms), |rel err| < 1e−13.
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π/sin(πx)
        return (std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln()
            - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut a = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// Lower regularized incomplete gamma P(a,x) by power series; valid x < a+1.
fn p_gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..500 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Upper regularized incomplete gamma Q(a,x) by Lentz continued fraction;
/// valid x ≥ a+1.
fn q_gamma_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Upper regularized incomplete gamma Q(a,x) = 1 − P(a,x).
pub(crate) fn q_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0);
    if x <= 0.0 {
        1.0
    } else if x < a + 1.0 {
        1.0 - p_gamma_series(a, x)
    } else {
        q_gamma_cf(a, x)
    }
}

/// Survival function P(χ²_df > x), relative error ≤ 1e−10.
pub fn chi_square_sf(x: f64, df: usize) -> f64 {
    debug_assert!(df >= 1, "df must be >= 1");
    if !(x > 0.0) {
        return 1.0; // x ≤ 0 (and NaN) map to the full tail
    }
    q_gamma(df as f64 / 2.0, x / 2.0)
}

/// Standard normal density φ(x).
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Standard normal CDF Φ(x), through the incomplete gamma tail of x²/2.
pub fn normal_cdf(x: f64) -> f64 {
    let tail = 0.5 * q_gamma(0.5, 0.5 * x * x);
    if x >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Standard normal quantile Φ⁻¹(p) for p ∈ (0,1): rational initial guess
/// refined by two Halley steps; |error| < 1e−12 across the open interval.
pub fn normal_quantile(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0, "normal_quantile needs p in (0,1)");
    // reflect the upper half so refinement always works against the small
    // tail probability, where the CDF carries full relative precision
    // (1 − p is exact for p ≥ 0.5)
    if p > 0.5 {
        -lower_half_quantile(1.0 - p)
    } else {
        lower_half_quantile(p)
    }
}

/// Φ⁻¹ on (0, 0.5].
fn lower_half_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let mut x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    for _ in 0..2 {
        let e = normal_cdf(x) - p;
        let u = e * SQRT_2PI * (0.5 * x * x).exp();
        x -= u / (1.0 + x * u / 2.0);
    }
    x
}
