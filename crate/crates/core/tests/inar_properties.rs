use hawkinar_core::inar::{
    autocovariance, beta_coeffs, inar_mean, residuals, simulate_family, simulate_inar, simulate_inar_branching,
    truncate,
};
use hawkinar_core::stats::{self, Estimate};
use hawkinar_core::{discretize, InarParams, ReproductionKernel, RngStream};
use proptest::prelude::*;

fn ar1() -> InarParams {
    InarParams::new(1.0, vec![0.5]).unwrap()
}

#[test]
fn recursion_mean_matches_closed_form() {
    let s = simulate_inar(&ar1(), 100_000, None, &mut RngStream::new(11, 0).rng());
    let xs = s.as_f64();
    // lag-correlated data: use the long-run variance Σ_j R(j) = 16/3 for the SE
    let se = (16.0f64 / 3.0 / xs.len() as f64).sqrt();
    assert!((stats::mean(&xs) - 2.0).abs() < 3.0 * se);
}

#[test]
fn branching_mean_matches_closed_form() {
    let s = simulate_inar_branching(&ar1(), 100_000, None, &mut RngStream::new(12, 0).rng()).unwrap();
    let xs = s.as_f64();
    let se = (16.0f64 / 3.0 / xs.len() as f64).sqrt();
    assert!((stats::mean(&xs) - 2.0).abs() < 3.0 * se);
}

#[test]
fn family_total_size_and_generations() {
    let p = InarParams::new(1.0, vec![0.5]).unwrap();
    let mut rng = RngStream::new(13, 0).rng();
    let reps = 100_000;
    let mut sizes = Vec::with_capacity(reps);
    let mut gens = vec![Vec::new(); 4];
    for _ in 0..reps {
        let f = simulate_family(&p, 60, &mut rng);
        sizes.push(f.total_size() as f64);
        let y = f.generation_sizes();
        for (g, col) in gens.iter_mut().enumerate() {
            col.push(y.get(g).copied().unwrap_or(0) as f64);
        }
    }
    let e = Estimate::from_samples(&sizes);
    assert!(e.within(2.0, 3.0), "{e:?}");
    for (g, col) in gens.iter().enumerate() {
        let e = Estimate::from_samples(col);
        let want = 0.5f64.powi(g as i32);
        if g == 0 {
            assert_eq!(e.mean, 1.0);
        } else {
            assert!(e.within(want, 3.0), "g={g} {e:?}");
        }
    }
}

#[test]
fn expected_family_profile_is_beta() {
    let p = InarParams::new(1.0, vec![0.3, 0.2, 0.1]).unwrap();
    let beta = beta_coeffs(&p, 10);
    let mut rng = RngStream::new(14, 0).rng();
    let reps = 100_000;
    let mut cols = vec![Vec::new(); 11];
    for _ in 0..reps {
        let f = simulate_family(&p, 10, &mut rng);
        for (n, col) in cols.iter_mut().enumerate() {
            col.push(f.family()[n] as f64);
        }
    }
    for (n, col) in cols.iter().enumerate().skip(1) {
        let e = Estimate::from_samples(col);
        assert!(e.within(beta[n], 3.0), "n={n} {e:?} vs {}", beta[n]);
    }
}

#[test]
fn residuals_are_white_noise() {
    let p = ar1();
    let s = simulate_inar(&p, 100_000, None, &mut RngStream::new(15, 0).rng());
    let u = residuals(&s, &p).unwrap();
    let n = u.len() as f64;
    let e = Estimate::from_samples(&u);
    assert!(e.within(0.0, 3.0), "{e:?}");
    // u_n given the past is Poisson(λ_n) − λ_n: Var u = E λ = 2, E u⁴ = E(λ + 3λ²)
    let v = stats::variance(&u);
    let m4: f64 = u.iter().map(|x| x.powi(4)).sum::<f64>() / n;
    assert!((v - 2.0).abs() < 3.0 * ((m4 - v * v) / n).sqrt(), "{v}");
    let rho1 = stats::autocovariance(&u, 1) / stats::autocovariance(&u, 0);
    assert!(rho1.abs() < 3.0 / n.sqrt(), "{rho1}");
}

#[test]
fn exponential_discretization_mean() {
    let k = ReproductionKernel::exponential(0.5, 1.0).unwrap();
    let p = discretize(1.0, &k, 0.1, None).unwrap();
    let s = simulate_inar(&p, 100_000, None, &mut RngStream::new(16, 0).rng());
    let xs = s.as_f64();
    let r = autocovariance(&p, 2000, 1e-12).unwrap();
    let long_run = r[0] + 2.0 * r[1..].iter().sum::<f64>();
    let se = (long_run / xs.len() as f64).sqrt();
    assert!((stats::mean(&xs) - inar_mean(&p)).abs() < 3.0 * se);
}

fn params_strategy() -> impl Strategy<Value = InarParams> {
    (0.0..3.0f64, prop::collection::vec(0.0..1.0f64, 0..6), 0.0..0.95f64).prop_map(|(a0, raw, k)| {
        let s: f64 = raw.iter().sum();
        let alphas = if s > 0.0 {
            raw.iter().map(|x| x * k / s).collect()
        } else {
            raw
        };
        InarParams::new(a0, alphas).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beta_and_covariances_are_nonnegative(p in params_strategy()) {
        prop_assert!(beta_coeffs(&p, 40).iter().all(|b| *b >= 0.0));
        let r = autocovariance(&p, 10, 1e-10).unwrap();
        prop_assert!(r.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn truncation_is_monotone(p in params_strategy()) {
        let mut last = -1.0;
        for q in 0..=p.order() {
            let k = truncate(&p, q).reproduction_mean();
            prop_assert!(k >= last);
            last = k;
        }
        prop_assert!((last - p.reproduction_mean()).abs() < 1e-15);
    }

    #[test]
    fn covariance_sum_is_bounded(p in params_strategy()) {
        let k = p.reproduction_mean();
        let r = autocovariance(&p, 400, 1e-12).unwrap();
        prop_assert!(r.iter().sum::<f64>() <= p.alpha0() / (1.0 - k).powi(3) + 1e-9);
    }
}
