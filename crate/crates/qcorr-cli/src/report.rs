//! Table rendering: aligned 4-decimal text for standard output, plus
//! shortest-round-trip CSV for `--out`. Every emitted table carries a header
//! row, and wherever a band column appears it equals 1.96·√(variance/n)
//! computed from the variance column of the same row.

use std::fmt::Write as _;

use qcorr::{CorrEstimate, Correlogram, PortmanteauResult, QarFit};

/// The literal normal band factor used across all tables.
pub const BAND_Z: f64 = 1.96;

pub fn band_of(variance: f64, n: usize) -> f64 {
    BAND_Z * (variance.max(0.0) / n as f64).sqrt()
}

/// Shortest decimal representation that round-trips to the same f64.
fn num(v: f64) -> String {
    format!("{v}")
}

// ---------------------------------------------------------------- estimates

pub fn estimates_text(title: &str, rule: &str, ests: &[CorrEstimate]) -> String {
    let mut out = format!(
        "{title}  (n {}, bandwidth {rule})\n{:>6} {:>10} {:>10} {:>10}  flags\n",
        ests.first().map_or(0, |e| e.n),
        "tau",
        "value",
        "stderr",
        "band"
    );
    for e in ests {
        let _ = writeln!(
            out,
            "{:>6.2} {:>10.4} {:>10.4} {:>10.4}  {}",
            e.tau,
            e.value,
            e.standard_error(),
            band_of(e.asymptotic_variance, e.n),
            if e.flagged { "variance-fallback" } else { "" }
        );
    }
    out
}

pub fn estimates_csv(ests: &[CorrEstimate]) -> String {
    let mut out = String::from("tau,n,value,variance,band,flagged\n");
    for e in ests {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(e.tau),
            e.n,
            num(e.value),
            num(e.asymptotic_variance),
            num(band_of(e.asymptotic_variance, e.n)),
            e.flagged
        );
    }
    out
}

// ------------------------------------------------------------- correlograms

pub fn correlogram_text(title: &str, cg: &Correlogram, level: f64) -> String {
    let sig = cg.significant_lags(level);
    let mut out = format!(
        "{title}  (tau {:.2}, n {})\n{:>6} {:>10} {:>10}  significant\n",
        cg.tau, cg.n, "lag", "value", "band"
    );
    for (i, &lag) in cg.lags.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:>6} {:>10.4} {:>10.4}  {}",
            lag,
            cg.values[i],
            cg.band[i],
            if sig.contains(&lag) { "*" } else { "" }
        );
    }
    if cg.truncated {
        out.push_str("note: the sparsity safeguard truncated crossing rows\n");
    }
    out
}

pub fn correlograms_csv(cgs: &[Correlogram], level: f64) -> String {
    let mut out = String::from("tau,n,lag,value,variance,band,significant\n");
    for cg in cgs {
        let sig = cg.significant_lags(level);
        for (i, &lag) in cg.lags.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                num(cg.tau),
                cg.n,
                lag,
                num(cg.values[i]),
                num(cg.variances[i]),
                num(cg.band[i]),
                sig.contains(&lag)
            );
        }
    }
    out
}

// --------------------------------------------------------------------- fits

pub fn fit_text(fit: &QarFit) -> String {
    let se = fit.standard_errors();
    let mut out = format!(
        "quantile autoregression  (tau {:.2}, n {}, lags {})\n\
         {:>6} {:>12} {:>10} {:>10}\n",
        fit.tau,
        fit.n,
        lag_list(&fit.included_lags),
        "slot",
        "coefficient",
        "stderr",
        "band"
    );
    for (i, c) in fit.coefficients.iter().enumerate() {
        let variance = fit.covariance[(i, i)].max(0.0) * fit.n as f64;
        let _ = writeln!(
            out,
            "{:>6} {:>12.4} {:>10.4} {:>10.4}",
            i,
            c,
            se[i],
            band_of(variance, fit.n)
        );
    }
    let _ = writeln!(out, "model: {}", model_equation(fit));
    if fit.truncated {
        out.push_str("note: the sparsity safeguard truncated crossing rows\n");
    }
    out
}

pub fn fits_csv(fits: &[QarFit]) -> String {
    let mut out = String::from("tau,n,slot,coefficient,stderr,variance,band,included\n");
    for fit in fits {
        let se = fit.standard_errors();
        for (i, c) in fit.coefficients.iter().enumerate() {
            let variance = fit.covariance[(i, i)].max(0.0) * fit.n as f64;
            let included = i == 0 || fit.included_lags.contains(&i);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                num(fit.tau),
                fit.n,
                i,
                num(*c),
                num(se[i]),
                num(variance),
                num(band_of(variance, fit.n)),
                included
            );
        }
    }
    out
}

fn lag_list(lags: &[usize]) -> String {
    if lags.is_empty() {
        "none".to_string()
    } else {
        lags.iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// The fitted model in "coefficient with subscripted standard error" style:
/// `y_t = 0.1561_(0.0439) + 0.2966_(0.0868)·y_{t-1} + e_t`.
pub fn model_equation(fit: &QarFit) -> String {
    let se = fit.standard_errors();
    let mut eq = format!("y_t = {:.4}_({:.4})", fit.coefficients[0], se[0]);
    for &lag in &fit.included_lags {
        let c = fit.coefficients[lag];
        let sign = if c < 0.0 { " - " } else { " + " };
        let _ = write!(eq, "{sign}{:.4}_({:.4})·y_{{t-{lag}}}", c.abs(), se[lag]);
    }
    eq.push_str(" + e_t");
    eq
}

// -------------------------------------------------------------- portmanteau

pub fn portmanteau_text(bp: &PortmanteauResult, max_lag: usize) -> String {
    format!(
        "portmanteau: Q_BP({max_lag}) = {:.4}  df {}  p-value {:.4}\n",
        bp.statistic, bp.df, bp.p_value
    )
}

// ----------------------------------------------------------------- diagnose

/// One tau's worth of the diagnose workflow, already computed.
pub struct DiagnoseSection {
    pub qpacf: Correlogram,
    pub fit: QarFit,
    pub racf: Correlogram,
    pub bp: PortmanteauResult,
    pub p_max: usize,
    pub level: f64,
}

pub fn diagnose_text(sections: &[DiagnoseSection]) -> String {
    let mut out = String::new();
    for s in sections {
        let _ = writeln!(out, "== tau {:.2} ==", s.fit.tau);
        out.push_str(&correlogram_text(
            "quantile partial autocorrelations",
            &s.qpacf,
            s.level,
        ));
        let _ = writeln!(
            out,
            "selected model (backward elimination from p_max {}, level {}):\n  {}",
            s.p_max,
            s.level,
            model_equation(&s.fit)
        );
        out.push_str(&correlogram_text(
            "residual quantile autocorrelations",
            &s.racf,
            s.level,
        ));
        out.push_str(&portmanteau_text(&s.bp, s.racf.lags.len()));
    }
    out
}

/// Section-tagged CSV: one row per lag/coefficient/summary value. Rows whose
/// band is not defined (the portmanteau summary) leave variance/band empty.
pub fn diagnose_csv(sections: &[DiagnoseSection]) -> String {
    let mut out = String::from("tau,section,key,value,variance,band\n");
    for s in sections {
        let t = num(s.fit.tau);
        for (i, &lag) in s.qpacf.lags.iter().enumerate() {
            let _ = writeln!(
                out,
                "{t},qpacf,{lag},{},{},{}",
                num(s.qpacf.values[i]),
                num(s.qpacf.variances[i]),
                num(s.qpacf.band[i])
            );
        }
        for (i, c) in s.fit.coefficients.iter().enumerate() {
            let variance = s.fit.covariance[(i, i)].max(0.0) * s.fit.n as f64;
            let _ = writeln!(
                out,
                "{t},coefficient,{i},{},{},{}",
                num(*c),
                num(variance),
                num(band_of(variance, s.fit.n))
            );
        }
        for (i, &lag) in s.racf.lags.iter().enumerate() {
            let _ = writeln!(
                out,
                "{t},racf,{lag},{},{},{}",
                num(s.racf.values[i]),
                num(s.racf.variances[i]),
                num(s.racf.band[i])
            );
        }
        let _ = writeln!(out, "{t},portmanteau,statistic,{},,", num(s.bp.statistic));
        let _ = writeln!(out, "{t},portmanteau,df,{},,", s.bp.df);
        let _ = writeln!(out, "{t},portmanteau,p_value,{},,", num(s.bp.p_value));
    }
    out
}
