//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs with `cargo test --test acceptance`.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hawkinar::hypothesis::ks_two_sample;
use hawkinar::parallel;
use hawkinar_core::approx::{variance_identity_residual, yule_walker_residual, SweepPlan, DEFAULT_WINDOWS};
use hawkinar_core::estimate::fit_inar_ls;
use hawkinar_core::hawkes::{simulate_hawkes_cluster, simulate_hawkes_thinning};
use hawkinar_core::inar::{
    autocovariance, beta_coeffs, beta_expansion, counting_pmf_ratio, inar_mean, mgf, residuals, simulate_inar,
    simulate_inar_branching, truncate, truncation_mean_bound, truncation_order, FiniteSupportSeq, PmfRatio,
};
use hawkinar_core::stats::{self, Estimate};
use hawkinar_core::{discretize, HawkesModel, InarParams, ReproductionKernel, RngStream};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ar1() -> InarParams {
    InarParams::new(1.0, vec![0.5]).unwrap()
}

fn exp_kernel(a: f64) -> ReproductionKernel {
    ReproductionKernel::exponential(a, 1.0).unwrap()
}

/// η = 1, Exponential(0.5, 1) on the Δ = 0.1 grid.
fn exp_discretization() -> InarParams {
    discretize(1.0, &exp_kernel(0.5), 0.1, None).unwrap()
}

/// `Σ_{j∈ℤ} R(j)`, the variance scale of a sample mean.
fn long_run_variance(p: &InarParams) -> f64 {
    let r = autocovariance(p, 20_000, 1e-12).unwrap();
    r[0] + 2.0 * r[1..].iter().sum::<f64>()
}

fn mean_identity() -> Outcome {
    let sets = [
        ("alpha0=1 alpha1=0.5", ar1()),
        ("Exp(0.5,1) dt=0.1", exp_discretization()),
        (
            "Exp(1,1) dt=0.1 horizon=20",
            discretize(1.0, &exp_kernel(1.0), 0.1, Some(20.0)).unwrap(),
        ),
    ];
    let mut notes = Vec::new();
    for (i, (name, p)) in sets.iter().enumerate() {
        let s = simulate_inar(p, 100_000, None, &mut RngStream::new(101, i as u64).rng());
        let mean = stats::mean(&s.as_f64());
        let se = (long_run_variance(p) / s.len() as f64).sqrt();
        let target = inar_mean(p);
        ensure((mean - target).abs() < 3.0 * se, || {
            format!("{name}: mean {mean:.5} vs {target:.5}, SE {se:.5}")
        })?;
        notes.push(format!(
            "{name}: {mean:.4} vs {target:.4} (z={:+.2})",
            (mean - target) / se
        ));
    }
    Ok(notes.join("; "))
}

fn autocovariance_closed_form() -> Outcome {
    let p = ar1();
    let r = autocovariance(&p, 5, 1e-12).unwrap();
    ensure(
        (r[0] - 8.0 / 3.0).abs() < 1e-8 && (r[1] - 4.0 / 3.0).abs() < 1e-8,
        || format!("R(0)={} R(1)={}", r[0], r[1]),
    )?;
    let s = simulate_inar(&p, 1_000_000, None, &mut RngStream::new(102, 0).rng()).as_f64();
    // SE from the spread of 100 batch estimates
    let batches: Vec<&[f64]> = s.chunks(10_000).collect();
    let mut worst: f64 = 0.0;
    for (lag, &want) in r.iter().enumerate().take(6) {
        let full = stats::autocovariance(&s, lag);
        let per_batch: Vec<f64> = batches.iter().map(|b| stats::autocovariance(b, lag)).collect();
        let se = (stats::variance(&per_batch) / batches.len() as f64).sqrt();
        let z = (full - want) / se;
        ensure(z.abs() < 4.0, || {
            format!("lag {lag}: {full:.5} vs {want:.5} (z={z:.2})")
        })?;
        worst = worst.max(z.abs());
    }
    Ok(format!(
        "R(0)={:.9} R(1)={:.9}; empirical lags 0..5 max |z|={worst:.2}",
        r[0], r[1]
    ))
}

fn white_noise() -> Outcome {
    let p = ar1();
    let s = simulate_inar(&p, 100_000, None, &mut RngStream::new(103, 0).rng());
    let u = residuals(&s, &p).unwrap();
    let n = u.len() as f64;
    let e = Estimate::from_samples(&u);
    ensure(e.within(0.0, 3.0), || format!("mean {:?}", e))?;
    let v = stats::variance(&u);
    let m4 = u.iter().map(|x| (x - e.mean).powi(4)).sum::<f64>() / n;
    let v_se = ((m4 - v * v) / n).sqrt();
    let target = inar_mean(&p);
    ensure((v - target).abs() < 3.0 * v_se, || {
        format!("variance {v:.5} vs {target}, SE {v_se:.5}")
    })?;
    let rho = stats::autocovariance(&u, 1) / stats::autocovariance(&u, 0);
    ensure(rho.abs() < 3.0 / n.sqrt(), || format!("lag-1 autocorrelation {rho:.5}"))?;
    Ok(format!(
        "mean z={:+.2}, variance {v:.4} (z={:+.2}), rho1 z={:+.2}",
        e.mean / e.std_error,
        (v - target) / v_se,
        rho * n.sqrt()
    ))
}

fn beta_sum() -> Outcome {
    let sets = [
        ("alpha1=0.5", ar1()),
        (
            "alpha=(0.2,0.3,0.1)",
            InarParams::new(1.0, vec![0.2, 0.3, 0.1]).unwrap(),
        ),
        (
            "Exp(0.5,1) dt=0.1",
            discretize(1.0, &exp_kernel(0.5), 0.1, Some(50.0)).unwrap(),
        ),
        (
            "Exp(1,1) dt=0.1",
            discretize(1.0, &exp_kernel(1.0), 0.1, Some(50.0)).unwrap(),
        ),
    ];
    let mut notes = Vec::new();
    for (name, p) in &sets {
        let exp = beta_expansion(p, 1e-10).map_err(|e| e.to_string())?;
        let n = exp.betas.len() - 1;
        let partial: f64 = beta_coeffs(p, n).iter().sum();
        let target = 1.0 / (1.0 - p.reproduction_mean());
        let gap = (partial - target).abs();
        ensure(gap < 1e-9, || format!("{name}: partial sum {partial} vs {target}"))?;
        notes.push(format!("{name}: L={n} gap={gap:.1e}"));
    }
    Ok(notes.join("; "))
}

fn mgf_recursion() -> Outcome {
    let poisson = InarParams::new(1.0, vec![]).unwrap();
    for t in [vec![-0.2], vec![-1.5], vec![-0.2, -0.1, -3.0]] {
        let got = mgf(&poisson, &FiniteSupportSeq::new(t.clone()).unwrap(), 1e-13).unwrap();
        let want = t.iter().map(|s: &f64| s.exp_m1()).sum::<f64>().exp();
        ensure((got - want).abs() < 1e-10, || format!("K=0 t={t:?}: {got} vs {want}"))?;
    }
    let p = ar1();
    let t = [-0.2, -0.1];
    let exact = mgf(&p, &FiniteSupportSeq::new(t.to_vec()).unwrap(), 1e-13).unwrap();
    let root = RngStream::new(105, 0);
    let draws = parallel::replicate(1_000_000, |i| {
        let s = simulate_inar_branching(&p, 2, None, &mut root.substream(i as u64).rng()).unwrap();
        (t[0] * s.counts[0] as f64 + t[1] * s.counts[1] as f64).exp()
    });
    let e = Estimate::from_samples(&draws);
    ensure(e.within(exact, 3.0), || format!("recursion {exact} vs MC {:?}", e))?;
    Ok(format!(
        "Poisson closed form to 1e-10; recursion {exact:.6} vs MC {:.6} ± {:.6} (10^6 reps)",
        e.mean, e.std_error
    ))
}

fn window_counts(model: &HawkesModel, window: (f64, f64), reps: usize, seed: u64, thinning: bool) -> Vec<f64> {
    let root = RngStream::new(seed, 0);
    parallel::replicate(reps, |i| {
        let mut rng = root.substream(i as u64).rng();
        let n = if thinning {
            simulate_hawkes_thinning(model, window, None, &mut rng).unwrap().len()
        } else {
            simulate_hawkes_cluster(model, window, None, &mut rng)
                .unwrap()
                .pattern()
                .len()
        };
        n as f64
    })
}

fn simulator_equivalence() -> Outcome {
    let settings = [
        ("K=0", ReproductionKernel::zero()),
        ("K=0.5", exp_kernel(0.5)),
        ("K=0.9", exp_kernel(0.9)),
        ("K=0.5 step", ReproductionKernel::step(0.5, 1.0).unwrap()),
    ];
    let mut notes = Vec::new();
    for (i, (name, kernel)) in settings.iter().enumerate() {
        let m = HawkesModel::new(1.0, kernel.clone()).unwrap();
        let seed = 106 + 2 * i as u64;
        let a = window_counts(&m, (0.0, 50.0), 1000, seed, false);
        let b = window_counts(&m, (0.0, 50.0), 1000, seed + 1, true);
        let ks = ks_two_sample(&a, &b);
        ensure(ks.p_value > 0.01, || {
            format!("{name}: KS D={:.4} p={:.4}", ks.statistic, ks.p_value)
        })?;
        notes.push(format!("{name}: p={:.3}", ks.p_value));
    }
    Ok(notes.join("; "))
}

fn hawkes_mean_rate() -> Outcome {
    let m = HawkesModel::new(1.0, exp_kernel(0.5)).unwrap();
    let mut notes = Vec::new();
    for (name, thinning, seed) in [("cluster", false, 120), ("thinning", true, 121)] {
        let rates: Vec<f64> = window_counts(&m, (0.0, 100.0), 1000, seed, thinning)
            .iter()
            .map(|c| c / 100.0)
            .collect();
        let e = Estimate::from_samples(&rates);
        ensure(e.within(m.mean_rate(), 3.0), || {
            format!("{name}: {:?} vs {}", e, m.mean_rate())
        })?;
        notes.push(format!("{name}: {:.4} ± {:.4}", e.mean, e.std_error));
    }
    Ok(format!("target 2; {}", notes.join("; ")))
}

fn weak_convergence() -> Outcome {
    let m = HawkesModel::new(1.0, exp_kernel(0.5)).unwrap();
    let plan = SweepPlan::new(&m, &[0.2, 0.1, 0.05], DEFAULT_WINDOWS, 10_000).map_err(|e| e.to_string())?;
    let report = parallel::convergence_sweep(&plan, RngStream::new(108, 0)).map_err(|e| e.to_string())?;
    let rows = &report.rows;
    for w in rows.windows(2) {
        let slack = (w[0].w1_window1_se.powi(2) + w[1].w1_window1_se.powi(2)).sqrt();
        ensure(w[1].w1_window1 <= w[0].w1_window1 + slack, || {
            format!(
                "W1 rose from {:.4} (dt={}) to {:.4} (dt={})",
                w[0].w1_window1, w[0].delta, w[1].w1_window1, w[1].delta
            )
        })?;
    }
    let last = rows.last().unwrap();
    ensure(last.w1_window1 < 0.1, || {
        format!("W1 at dt=0.05 is {:.4}", last.w1_window1)
    })?;
    let path: Vec<String> = rows
        .iter()
        .map(|r| format!("dt={}: {:.4}±{:.4}", r.delta, r.w1_window1, r.w1_window1_se))
        .collect();
    Ok(path.join(", "))
}

fn moment_identities() -> Outcome {
    let cases = [
        ("alpha1=0.5", ar1(), 1.0, 1.0),
        ("Exp(0.5,1) dt=0.1", exp_discretization(), 1.0, 0.1),
    ];
    let mut notes = Vec::new();
    for (name, p, eta, delta) in &cases {
        let yw = yule_walker_residual(p, 50, 1e-10).map_err(|e| e.to_string())?;
        let var = variance_identity_residual(p, *eta, *delta, 1e-10).map_err(|e| e.to_string())?;
        ensure(yw < 1e-6 && var < 1e-6, || {
            format!("{name}: YW {yw:.2e}, variance {var:.2e}")
        })?;
        notes.push(format!("{name}: YW {yw:.1e}, var {var:.1e}"));
    }
    Ok(notes.join("; "))
}

fn truncation() -> Outcome {
    let sets = [
        ("Exp(0.5,1) dt=0.1", exp_discretization()),
        (
            "alpha_k=0.1e^-0.1k",
            discretize(1.0, &exp_kernel(1.0), 0.1, Some(20.0)).unwrap(),
        ),
    ];
    let mut notes = Vec::new();
    for (name, p) in &sets {
        let full = inar_mean(p);
        let means: Vec<f64> = (0..=p.order()).map(|q| inar_mean(&truncate(p, q))).collect();
        ensure(means.windows(2).all(|w| w[0] <= w[1]), || {
            format!("{name}: not monotone")
        })?;
        ensure((means[p.order()] - full).abs() < 1e-12, || {
            format!("{name}: limit {} vs {full}", means[p.order()])
        })?;
        let q = truncation_order(p, 1e-6).ok_or_else(|| format!("{name}: no order meets the bound"))?;
        let gap = full - means[q];
        ensure((0.0..1e-6).contains(&gap), || format!("{name}: gap {gap:.2e} at p={q}"))?;
        ensure(truncation_mean_bound(p, q) < 1e-6, || format!("{name}: bound"))?;
        notes.push(format!("{name}: p={q} gap={gap:.1e}"));
    }
    Ok(notes.join("; "))
}

fn estimation() -> Outcome {
    let p = ar1();
    let root = RngStream::new(111, 0);
    let fits = parallel::replicate(100, |i| {
        let s = simulate_inar(&p, 100_000, None, &mut root.substream(i as u64).rng());
        fit_inar_ls(&s, 1).unwrap()
    });
    let a0 = Estimate::from_samples(&fits.iter().map(|f| f.alpha0).collect::<Vec<_>>());
    let a1 = Estimate::from_samples(&fits.iter().map(|f| f.alphas[0]).collect::<Vec<_>>());
    ensure(a0.within(1.0, 4.0), || format!("alpha0 {:?}", a0))?;
    ensure(a1.within(0.5, 4.0), || format!("alpha1 {:?}", a1))?;
    Ok(format!(
        "alpha0 {:.5} ± {:.5}, alpha1 {:.5} ± {:.5} (100 fits)",
        a0.mean, a0.std_error, a1.mean, a1.std_error
    ))
}

fn counting_sequences() -> Outcome {
    let mut worst: f64 = 0.0;
    for (alpha, delta) in [(1.0, 0.01), (0.5, 0.02), (0.1, 0.001), (2.0, 0.0025), (0.01, 0.01)] {
        let x = alpha * delta;
        for n in [0, 1] {
            let r = match counting_pmf_ratio(alpha, delta, n).map_err(|e| e.to_string())? {
                PmfRatio::Ratio(r) => r,
                PmfRatio::PoissonOnly(_) => return Err(format!("n={n} x={x}: Bernoulli pmf vanished")),
            };
            ensure((r - 1.0).abs() <= 2.0 * x, || format!("n={n} x={x}: ratio {r}"))?;
            worst = worst.max((r - 1.0).abs() / x);
        }
    }
    Ok(format!("max |ratio − 1| / (dt·alpha) = {worst:.4} ≤ 2"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "mean identity",
            budget: Some(Duration::from_secs(10)),
            run: mean_identity,
        },
        Criterion {
            id: 2,
            name: "autocovariance closed form",
            budget: Some(Duration::from_secs(60)),
            run: autocovariance_closed_form,
        },
        Criterion {
            id: 3,
            name: "white-noise residuals",
            budget: None,
            run: white_noise,
        },
        Criterion {
            id: 4,
            name: "beta-sum identity",
            budget: None,
            run: beta_sum,
        },
        Criterion {
            id: 5,
            name: "MGF recursion",
            budget: None,
            run: mgf_recursion,
        },
        Criterion {
            id: 6,
            name: "cluster vs thinning (KS)",
            budget: Some(Duration::from_secs(300)),
            run: simulator_equivalence,
        },
        Criterion {
            id: 7,
            name: "Hawkes mean rate",
            budget: None,
            run: hawkes_mean_rate,
        },
        Criterion {
            id: 8,
            name: "weak-convergence sweep",
            budget: Some(Duration::from_secs(600)),
            run: weak_convergence,
        },
        Criterion {
            id: 9,
            name: "Yule-Walker and variance identities",
            budget: None,
            run: moment_identities,
        },
        Criterion {
            id: 10,
            name: "INAR(p) embedding",
            budget: None,
            run: truncation,
        },
        Criterion {
            id: 11,
            name: "estimation round-trip",
            budget: Some(Duration::from_secs(120)),
            run: estimation,
        },
        Criterion {
            id: 12,
            name: "Poisson vs Bernoulli counting",
            budget: None,
            run: counting_sequences,
        },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.1?}, budget {b:?}")),
            (o, _) => o,
        };
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{:>2}] {} ({elapsed:.1?}): {detail}", c.id, c.name);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
