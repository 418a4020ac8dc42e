//! Monte Carlo invariants: coverage of the plug-in intervals, 1/√n scaling,
//! cut-off behaviour of the partial autocorrelogram, null uniformity of the
//! portmanteau p-value, and selection frequencies of backward elimination.
//! Every check is seeded and deterministic.

use rayon::prelude::*;

use qcorr::sim::{
    gen_ar, gen_random_coef_qar1, gen_trivariate_normal, make_rng,
    trivariate_qcor_limit, trivariate_qpcor_limit,
};
use qcorr::{
    backward_eliminate, box_pierce, fit_qar, qacf_residuals, qcor, qpacf, qpcor,
    sparsity, BandwidthRule, QuantileLevel, Series,
};

const HS: BandwidthRule = BandwidthRule::HallSheather;

fn lvl(t: f64) -> QuantileLevel {
    QuantileLevel::new(t).unwrap()
}

fn z975() -> f64 {
    qcorr::numerics::normal_quantile(0.975)
}

#[test]
fn interval_coverage_for_qcor_and_qpcor() {
    let reps = 1000usize;
    let n = 200usize;
    let z = z975();
    let hits: Vec<(u32, u32)> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = make_rng(301, 0, rep);
            let (x, y, w) = gen_trivariate_normal(n, &mut rng).unwrap();
            let a = qcor(&y, &x, lvl(0.50), HS, 0.05).unwrap();
            let b = qpcor(&y, &x, std::slice::from_ref(&w), lvl(0.25), HS, 0.05).unwrap();
            let c1 = (a.value - trivariate_qcor_limit(0.50)).abs() <= z * a.standard_error();
            let c2 =
                (b.value - trivariate_qpcor_limit(0.25)).abs() <= z * b.standard_error();
            (c1 as u32, c2 as u32)
        })
        .collect();
    let cov1 = hits.iter().map(|h| h.0).sum::<u32>() as f64 / reps as f64;
    let cov2 = hits.iter().map(|h| h.1).sum::<u32>() as f64 / reps as f64;
    assert!((0.92..=0.98).contains(&cov1), "qcor coverage {cov1}");
    assert!((0.92..=0.98).contains(&cov2), "qpcor coverage {cov2}");
}

#[test]
fn qpacf_iid_per_lag_coverage() {
    let reps = 400usize;
    let n = 200usize;
    let kmax = 3usize;
    let z = z975();
    let hits: Vec<Vec<u32>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = make_rng(302, 0, rep);
            let y = gen_ar(n, 0.0, &[], &mut rng).unwrap();
            let cg = qpacf(&y, lvl(0.5), kmax, HS, 0.05).unwrap();
            (0..kmax)
                .map(|k| {
                    let thr = z * (cg.variances[k] / n as f64).sqrt();
                    (cg.values[k].abs() <= thr) as u32
                })
                .collect()
        })
        .collect();
    for k in 0..kmax {
        let cov = hits.iter().map(|h| h[k]).sum::<u32>() as f64 / reps as f64;
        assert!(
            (0.90..=0.99).contains(&cov),
            "lag {} coverage {cov}",
            k + 1
        );
    }
}

#[test]
fn residual_correlogram_iid_coverage_at_lag_three() {
    let reps = 400usize;
    let n = 200usize;
    let z = z975();
    let hit: u32 = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = make_rng(303, 0, rep);
            let y = gen_ar(n, 0.0, &[], &mut rng).unwrap();
            let fit = fit_qar(&y, lvl(0.5), 1, HS, 0.05).unwrap();
            let cg = qacf_residuals(&fit, 3).unwrap();
            let thr = z * (cg.variances[2] / n as f64).sqrt();
            (cg.values[2].abs() <= thr) as u32
        })
        .sum();
    let cov = hit as f64 / reps as f64;
    assert!((0.90..=0.99).contains(&cov), "coverage {cov}");
}

#[test]
fn coefficient_covariance_halves_when_n_doubles() {
    let reps = 200usize;
    let sums: Vec<[f64; 4]> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = make_rng(304, 0, rep);
            let y1 = gen_ar(200, 0.1, &[0.5], &mut rng).unwrap();
            let y2 = gen_ar(400, 0.1, &[0.5], &mut rng).unwrap();
            let f1 = fit_qar(&y1, lvl(0.5), 1, HS, 0.05).unwrap();
            let f2 = fit_qar(&y2, lvl(0.5), 1, HS, 0.05).unwrap();
            [
                f1.covariance[(0, 0)],
                f1.covariance[(1, 1)],
                f2.covariance[(0, 0)],
                f2.covariance[(1, 1)],
            ]
        })
        .collect();
    for slot in 0..2 {
        let small: f64 = sums.iter().map(|s| s[slot]).sum::<f64>() / reps as f64;
        let big: f64 = sums.iter().map(|s| s[slot + 2]).sum::<f64>() / reps as f64;
        let ratio = big / small;
        assert!(
            (0.35..=0.65).contains(&ratio),
            "slot {slot}: ratio {ratio}"
        );
    }
}

#[test]
fn null_portmanteau_pvalues_are_uniform() {
    let reps = 1000usize;
    let mut ps: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = make_rng(305, 0, rep);
            let y = gen_ar(200, 0.0, &[0.5, 0.0], &mut rng).unwrap();
            let fit = fit_qar(&y, lvl(0.5), 1, HS, 0.05).unwrap();
            box_pierce(&qacf_residuals(&fit, 6).unwrap(), 1)
                .unwrap()
                .p_value
        })
        .collect();
    ps.sort_by(f64::total_cmp);
    let nf = reps as f64;
    let mut ks = 0.0f64;
    for (i, p) in ps.iter().enumerate() {
        ks = ks
            .max((p - i as f64 / nf).abs())
            .max((p - (i + 1) as f64 / nf).abs());
    }
    assert!(ks <= 0.06, "KS distance {ks}");
}

#[test]
fn random_coefficient_path_mean_is_stable_across_halves() {
    let mut rng = make_rng(306, 0, 0);
    let y = gen_random_coef_qar1(10_000, &mut rng).unwrap();
    let v = y.values();
    let m1 = v[..5000].iter().sum::<f64>() / 5000.0;
    let m2 = v[5000..].iter().sum::<f64>() / 5000.0;
    assert!((m1 - m2).abs() <= 0.1, "halves {m1} vs {m2}");
}

#[test]
fn esd_scales_like_inverse_sqrt_n() {
    let rep = qcorr::run_experiment(
        qcorr::ExperimentId::One,
        &[50, 200],
        &[0.5],
        300,
        Some(&[HS]),
        307,
        None,
    )
    .unwrap();
    for stat in ["qcor_esd", "qpcor_esd"] {
        let small = rep.get(50, 0.5, stat).unwrap();
        let big = rep.get(200, 0.5, stat).unwrap();
        let ratio = small / big;
        assert!((1.6..=2.4).contains(&ratio), "{stat}: ratio {ratio}");
    }
}

#[test]
fn scaled_qpacf_spread_is_near_one() {
    // sd of √n·φ̃_kk should approach 1 (the theoretical Ω₃)
    let n = 200usize;
    let rep = qcorr::run_experiment(
        qcorr::ExperimentId::Two,
        &[n],
        &[0.5],
        300,
        Some(&[HS]),
        308,
        None,
    )
    .unwrap();
    for k in [2usize, 4, 6] {
        let esd = rep.get(n, 0.5, &format!("qpacf_k{k}_esd")).unwrap();
        let scaled = esd * (n as f64).sqrt();
        assert!((0.85..=1.15).contains(&scaled), "k={k}: {scaled}");
    }
}

#[test]
fn qpacf_cut_off_beyond_true_order() {
    let reps = 1000usize;
    let n = 200usize;
    let z = z975();
    let rej: Vec<[u32; 3]> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = make_rng(309, 0, rep);
            let y = gen_ar(n, 0.1, &[0.5], &mut rng).unwrap();
            let cg = qpacf(&y, lvl(0.25), 3, HS, 0.05).unwrap();
            let mut out = [0u32; 3];
            for k in 0..3 {
                let thr = z * (cg.variances[k] / n as f64).sqrt();
                out[k] = (cg.values[k].abs() > thr) as u32;
            }
            out
        })
        .collect();
    let rate = |k: usize| rej.iter().map(|r| r[k]).sum::<u32>() as f64 / reps as f64;
    assert!(rate(0) > 0.5, "lag-1 rejection {}", rate(0));
    for k in 1..3 {
        let r = rate(k);
        assert!(
            (0.025..=0.075).contains(&r),
            "lag {}: spurious rejection {r}",
            k + 1
        );
    }
}

#[test]
fn backward_elimination_recovers_the_true_lag() {
    let reps = 500usize;
    let n = 200usize;
    let hits: u32 = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = make_rng(310, 0, rep);
            let y = gen_ar(n, 0.1, &[0.5], &mut rng).unwrap();
            let fit = backward_eliminate(&y, lvl(0.5), 4, HS, 0.05, 0.05).unwrap();
            (fit.included_lags == vec![1]) as u32
        })
        .sum();
    let freq = hits as f64 / reps as f64;
    assert!(freq >= 0.80, "lag set {{1}} frequency {freq}");
}

#[test]
fn backward_elimination_mostly_empties_on_iid_data() {
    // spurious retention happens at roughly the nominal level per candidate
    // lag, so the empty model should win about (1 − 0.05)³ ≈ 86% of the time
    let reps = 300usize;
    let outcomes: Vec<(bool, usize)> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = make_rng(311, 0, rep);
            let y = gen_ar(300, 0.0, &[], &mut rng).unwrap();
            let fit = backward_eliminate(&y, lvl(0.5), 3, HS, 0.05, 0.05).unwrap();
            (fit.included_lags.is_empty(), fit.coefficients.len())
        })
        .collect();
    let empty_rate = outcomes.iter().filter(|o| o.0).count() as f64 / reps as f64;
    assert!(empty_rate >= 0.75, "empty-model rate {empty_rate}");
    // an empty lag set leaves only the intercept
    assert!(outcomes.iter().filter(|o| o.0).all(|o| o.1 == 1));
}

#[test]
fn sparsity_estimates_the_density_at_zero() {
    // intercept-only design on iid normals: f̃ is the difference quotient of
    // sample quantiles around the median, estimating φ(0) ≈ 0.3989
    let mut rng = make_rng(312, 0, 0);
    let y = gen_ar(1000, 0.0, &[], &mut rng).unwrap();
    let sp = sparsity(&y, lvl(0.5), 0, HS, 0.05).unwrap();
    let mean_f = sp.values.iter().sum::<f64>() / sp.values.len() as f64;
    assert!((mean_f - 0.3989).abs() < 0.05, "intercept-only mean f {mean_f}");

    // AR(1) with standard normal errors: conditional density at the
    // conditional median is φ(0) at every t
    let y2 = gen_ar(1000, 0.1, &[0.5], &mut rng).unwrap();
    let sp2 = sparsity(&y2, lvl(0.5), 1, HS, 0.05).unwrap();
    let mean_f2 = sp2.values.iter().sum::<f64>() / sp2.values.len() as f64;
    assert!((mean_f2 - 0.3989).abs() < 0.05, "lag design mean f {mean_f2}");
}

#[test]
fn crossing_rows_are_flagged_but_still_positive() {
    let y = Series::new(vec![
        -0.288, -1.774, 1.261, -0.351, 3.917, 1.887, 1.805, 0.378, -0.082, 0.689,
        2.625, 1.083, -0.712, 2.584,
    ])
    .unwrap();
    let sp = sparsity(&y, lvl(0.5), 1, HS, 0.05).unwrap();
    assert!(sp.truncated.iter().any(|&b| b));
    assert!(sp.values.iter().all(|&f| f.is_finite() && f > 0.0));
}
