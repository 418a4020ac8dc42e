//! Linear quantile regression by a Frisch–Newton primal–dual interior-point
//! method with Mehrotra predictor–corrector steps, followed by a vertex
//! "polish" that projects the near-optimal iterate onto an exact basic
//! solution. Residuals at interpolated observations come out exactly zero,
//! which the score-based estimators downstream rely on (ψ(0) = τ).

use nalgebra::{DMatrix, DVector};

use crate::error::{QcorrError, Result};
use crate::numerics::{quantile_of, QuantileLevel};

const MAX_ITER: usize = 200;
const GAP_TOL: f64 = 1e-9;

/// Solution of min_β Σ ρ_τ(yᵢ − xᵢ′β).
#[derive(Clone, Debug)]
pub struct QuantileFit {
    /// Coefficient vector, one entry per design column.
    pub coefficients: DVector<f64>,
    /// y − Xβ̂, exactly 0.0 on the interpolated (basic) observations.
    pub residuals: DVector<f64>,
    /// Optimal check-loss value Σ ρ_τ(rᵢ).
    pub objective: f64,
    /// Interior-point iterations used (0 for the order-statistic fast path).
    pub iterations: usize,
    /// Final primal–dual gap.
    pub duality_gap: f64,
}

pub(crate) fn rho_sum(r: &DVector<f64>, tau: f64) -> f64 {
    r.iter()
        .map(|&v| v * (tau - if v < 0.0 { 1.0 } else { 0.0 }))
        .sum()
}

/// Optimality certificate for the check loss: #{r < 0} ≤ nτ ≤ #{r ≤ 0}.
pub(crate) fn sign_counts_ok(r: &DVector<f64>, tau: f64) -> bool {
    let n = r.len() as f64;
    let below = r.iter().filter(|&&v| v < 0.0).count() as f64;
    let at_or_below = r.iter().filter(|&&v| v <= 0.0).count() as f64;
    below <= n * tau && n * tau <= at_or_below
}

/// Least squares via normal equations, with a tiny ridge retry before giving
/// up on a singular Gram matrix.
pub(crate) fn ls_solve(z: &DMatrix<f64>, x: &DVector<f64>) -> Result<DVector<f64>> {
    let m = z.transpose() * z;
    let rhs = z.transpose() * x;
    if let Some(chol) = m.clone().cholesky() {
        return Ok(chol.solve(&rhs));
    }
    let d = m.nrows();
    let mut m2 = m;
    let ridge = 1e-12 * m2.trace() / d as f64 + 1e-300;
    for i in 0..d {
        m2[(i, i)] += ridge;
    }
    m2.lu().solve(&rhs).ok_or(QcorrError::RankDeficient)
}

/// Fit a τ-th quantile regression of `response` on the rows of `design`.
///
/// The design matrix is used as given — include a column of ones for an
/// intercept. A pure-intercept design short-circuits to the sample quantile.
pub fn fit_quantile(
    design: &DMatrix<f64>,
    response: &DVector<f64>,
    tau: QuantileLevel,
) -> Result<QuantileFit> {
    let (n, d) = design.shape();
    if n == 0 {
        return Err(QcorrError::EmptySeries);
    }
    if response.len() != n {
        return Err(QcorrError::LengthMismatch { left: n, right: response.len() });
    }
    if d == 0 {
        return Err(QcorrError::InvalidInput("design needs at least one column".into()));
    }
    if let Some(i) = response.iter().position(|v| !v.is_finite()) {
        return Err(QcorrError::NonFinite(i));
    }
    if design.iter().any(|v| !v.is_finite()) {
        return Err(QcorrError::InvalidInput("non-finite design entry".into()));
    }
    if n < d {
        return Err(QcorrError::SeriesTooShort { need: d, got: n });
    }
    let t = tau.get();

    if d == 1 && design.column(0).iter().all(|&v| v == 1.0) {
        let q = quantile_of(response.as_slice(), t);
        let r = response.map(|v| v - q);
        let objective = rho_sum(&r, t);
        return Ok(QuantileFit {
            coefficients: DVector::from_element(1, q),
            residuals: r,
            objective,
            iterations: 0,
            duality_gap: 0.0,
        });
    }

    let mut beta = ls_solve(design, response)?;
    let mut r = response - design * &beta;
    let eps0 = 0.1 * (1.0 + r.iter().map(|v| v.abs()).sum::<f64>() / n as f64);
    let mut w = r.map(|v| v.max(0.0) + eps0);
    let mut z = r.map(|v| (-v).max(0.0) + eps0);
    let mut a = DVector::from_element(n, 1.0 - t);
    let mut s = DVector::from_element(n, t);
    let rhs_dual =
        DVector::from_iterator(d, (0..d).map(|j| (1.0 - t) * design.column(j).sum()));
    let y_sum: f64 = response.sum();
    const ETA: f64 = 0.99995;

    let mut gap = f64::INFINITY;
    let mut iterations = MAX_ITER;
    let mut converged = false;
    for it in 0..MAX_ITER {
        r = response - design * &beta;
        let p_obj = rho_sum(&r, t);
        let d_obj = response.dot(&a) - (1.0 - t) * y_sum;
        gap = p_obj - d_obj;
        if gap <= GAP_TOL * (1.0 + p_obj.abs()) {
            iterations = it + 1;
            converged = true;
            break;
        }
        let mut r1 = r.clone();
        for i in 0..n {
            r1[i] += z[i] - w[i];
        }
        let r2 = &rhs_dual - design.transpose() * &a;
        let theta =
            DVector::from_iterator(n, (0..n).map(|i| 1.0 / (z[i] / a[i] + w[i] / s[i])));
        let mu = (a.dot(&z) + s.dot(&w)) / (2.0 * n as f64);

        // affine-scaling predictor
        let r3 = DVector::from_iterator(n, (0..n).map(|i| -a[i] * z[i]));
        let r4 = DVector::from_iterator(n, (0..n).map(|i| -s[i] * w[i]));
        let (_, da_a, dz_a, dw_a) =
            newton_direction(design, &theta, &r1, &r2, &a, &s, &z, &w, &r3, &r4)?;
        let ap = step_len(&w, &dw_a, &z, &dz_a);
        let ad = step_len_box(&a, &da_a);
        let mut mu_aff = 0.0;
        for i in 0..n {
            mu_aff += (a[i] + ad * da_a[i]) * (z[i] + ap * dz_a[i])
                + (s[i] - ad * da_a[i]) * (w[i] + ap * dw_a[i]);
        }
        mu_aff /= 2.0 * n as f64;
        let sigma = (mu_aff / mu).powi(3).clamp(0.0, 1.0);

        // centering corrector
        let r3 = DVector::from_iterator(
            n,
            (0..n).map(|i| sigma * mu - a[i] * z[i] - da_a[i] * dz_a[i]),
        );
        let r4 = DVector::from_iterator(
            n,
            (0..n).map(|i| sigma * mu - s[i] * w[i] + da_a[i] * dw_a[i]),
        );
        let (db, da, dz, dw) =
            newton_direction(design, &theta, &r1, &r2, &a, &s, &z, &w, &r3, &r4)?;
        let ap = (ETA * step_len(&w, &dw, &z, &dz)).min(1.0);
        let ad = (ETA * step_len_box(&a, &da)).min(1.0);
        beta += ap * db;
        w += ap * &dw;
        z += ap * &dz;
        a += ad * &da;
        s = a.map(|v| 1.0 - v);
    }

    r = response - design * &beta;
    if !converged {
        let p_obj = rho_sum(&r, t);
        let d_obj = response.dot(&a) - (1.0 - t) * y_sum;
        gap = p_obj - d_obj;
        if gap > GAP_TOL * (1.0 + p_obj.abs()) {
            return Err(QcorrError::NonConvergence { budget: MAX_ITER, gap });
        }
    }
    let objective = rho_sum(&r, t);
    let (beta, r, objective) = polish(design, response, t, beta, r, objective);
    Ok(QuantileFit {
        coefficients: beta,
        residuals: r,
        objective,
        iterations,
        duality_gap: gap,
    })
}

/// One reduced-KKT Newton solve shared by predictor and corrector.
#[allow(clippy::too_many_arguments)]
fn newton_direction(
    x: &DMatrix<f64>,
    theta: &DVector<f64>,
    r1: &DVector<f64>,
    r2: &DVector<f64>,
    a: &DVector<f64>,
    s: &DVector<f64>,
    z: &DVector<f64>,
    w: &DVector<f64>,
    r3: &DVector<f64>,
    r4: &DVector<f64>,
) -> Result<(DVector<f64>, DVector<f64>, DVector<f64>, DVector<f64>)> {
    let (n, d) = x.shape();
    let g = DVector::from_iterator(
        n,
        (0..n).map(|i| r1[i] - r4[i] / s[i] + r3[i] / a[i]),
    );
    let mut m = DMatrix::zeros(d, d);
    let mut rhs = DVector::zeros(d);
    for i in 0..n {
        let th = theta[i];
        let tg = th * g[i];
        for p in 0..d {
            let xp = x[(i, p)];
            rhs[p] += tg * xp;
            for q in p..d {
                m[(p, q)] += th * xp * x[(i, q)];
            }
        }
    }
    for p in 0..d {
        for q in 0..p {
            m[(p, q)] = m[(q, p)];
        }
    }
    rhs -= r2;
    let db = match m.clone().cholesky() {
        Some(chol) => chol.solve(&rhs),
        None => {
            let ridge = 1e-12 * m.trace() / d as f64 + 1e-300;
            for i in 0..d {
                m[(i, i)] += ridge;
            }
            m.lu().solve(&rhs).ok_or(QcorrError::RankDeficient)?
        }
    };
    let xdb = x * &db;
    let da = DVector::from_iterator(n, (0..n).map(|i| theta[i] * (g[i] - xdb[i])));
    let dz = DVector::from_iterator(n, (0..n).map(|i| (r3[i] - z[i] * da[i]) / a[i]));
    let dw = DVector::from_iterator(n, (0..n).map(|i| (r4[i] + w[i] * da[i]) / s[i]));
    Ok((db, da, dz, dw))
}

fn step_len(w: &DVector<f64>, dw: &DVector<f64>, z: &DVector<f64>, dz: &DVector<f64>) -> f64 {
    let mut am = f64::INFINITY;
    for (v, dv) in [(w, dw), (z, dz)] {
        for i in 0..v.len() {
            if dv[i] < 0.0 {
                am = am.min(-v[i] / dv[i]);
            }
        }
    }
    am.min(1.0)
}

fn step_len_box(a: &DVector<f64>, da: &DVector<f64>) -> f64 {
    let mut am = f64::INFINITY;
    for i in 0..a.len() {
        if da[i] < 0.0 {
            am = am.min(-a[i] / da[i]);
        } else if da[i] > 0.0 {
            am = am.min((1.0 - a[i]) / da[i]);
        }
    }
    am.min(1.0)
}

/// Snap the interior-point iterate to an exact vertex: pick the d most nearly
/// interpolated independent rows, solve through them, and keep the result only
/// if it does not worsen the objective and satisfies the sign-count
/// optimality certificate. Falls back to re-fitting the intercept as a
/// partial-residual order statistic, and keeps the raw iterate if neither
/// candidate qualifies.
fn polish(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    tau: f64,
    beta_ip: DVector<f64>,
    r_ip: DVector<f64>,
    obj_ip: f64,
) -> (DVector<f64>, DVector<f64>, f64) {
    let (n, d) = x.shape();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| r_ip[i].abs().total_cmp(&r_ip[j].abs()));

    // greedily collect the d smallest-|r| linearly independent rows
    let mut active: Vec<usize> = Vec::new();
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    for &i in &order {
        if active.len() == d {
            break;
        }
        let row = x.row(i).transpose();
        let mut resid = row.clone();
        for b in &ortho {
            let c = resid.dot(b);
            resid -= b * c;
        }
        let rn = resid.norm();
        if rn > 1e-10 * row.norm().max(1.0) {
            ortho.push(resid / rn);
            active.push(i);
        }
    }

    if !active.is_empty() {
        let k = active.len();
        let xa = DMatrix::from_fn(k, d, |r, c| x[(active[r], c)]);
        let ya = DVector::from_fn(k, |r, _| y[active[r]]);
        let beta_cand = if k == d {
            xa.clone().lu().solve(&ya)
        } else {
            // minimal-norm move onto the affine face through the active rows
            let gram = &xa * xa.transpose();
            let rhs = &ya - &xa * &beta_ip;
            gram.lu().solve(&rhs).map(|lam| &beta_ip + xa.transpose() * lam)
        };
        if let Some(beta) = beta_cand {
            let mut r = y - x * &beta;
            for &i in &active {
                r[i] = 0.0;
            }
            let obj = rho_sum(&r, tau);
            if obj <= obj_ip + 1e-8 * (1.0 + obj_ip.abs()) && sign_counts_ok(&r, tau) {
                return (beta, r, obj);
            }
        }
    }

    // fallback: exact intercept through the partial residuals
    let mut partial = y.clone();
    for i in 0..n {
        let mut acc = 0.0;
        for j in 1..d {
            acc += x[(i, j)] * beta_ip[j];
        }
        partial[i] -= acc;
    }
    let b0 = quantile_of(partial.as_slice(), tau);
    let r = partial.map(|v| v - b0);
    let obj = rho_sum(&r, tau);
    if obj <= obj_ip && sign_counts_ok(&r, tau) {
        let mut beta = beta_ip.clone();
        beta[0] = b0;
        return (beta, r, obj);
    }
    (beta_ip, r_ip, obj_ip)
}
