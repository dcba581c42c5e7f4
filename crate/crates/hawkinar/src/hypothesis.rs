//! Two-sample and goodness-of-fit tests used to compare simulators.

use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value (Stephens'
/// small-sample correction). Ties make it conservative.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> TestResult {
    assert!(!a.is_empty() && !b.is_empty(), "KS test needs two nonempty samples");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let ne = (n * m / (n + m)).sqrt();
    let lambda = (ne + 0.12 + 0.11 / ne) * d;
    TestResult {
        statistic: d,
        p_value: kolmogorov_q(lambda),
    }
}

/// `Q(λ) = 2 Σ_{j≥1} (−1)^(j−1) e^(−2j²λ²)`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=200 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Chi-square test that two integer samples come from one law. Adjacent
/// values are pooled until every cell expects at least `min_expected` counts
/// in both rows.
pub fn chi_square_homogeneity(a: &[u64], b: &[u64], min_expected: f64) -> TestResult {
    assert!(
        !a.is_empty() && !b.is_empty(),
        "chi-square test needs two nonempty samples"
    );
    let max = a.iter().chain(b).copied().max().unwrap() as usize;
    let mut ha = vec![0f64; max + 1];
    let mut hb = vec![0f64; max + 1];
    a.iter().for_each(|&x| ha[x as usize] += 1.0);
    b.iter().for_each(|&x| hb[x as usize] += 1.0);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let total = na + nb;
    let need = min_expected * total / na.min(nb);
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (x, y) in ha.iter().zip(&hb) {
        acc = (acc.0 + x, acc.1 + y);
        if acc.0 + acc.1 >= need {
            cells.push(acc);
            acc = (0.0, 0.0);
        }
    }
    match cells.last_mut() {
        Some(last) => *last = (last.0 + acc.0, last.1 + acc.1),
        None => cells.push(acc),
    }
    if cells.len() < 2 {
        return TestResult {
            statistic: 0.0,
            p_value: 1.0,
        };
    }
    let stat: f64 = cells
        .iter()
        .map(|&(x, y)| {
            let col = x + y;
            let (ea, eb) = (col * na / total, col * nb / total);
            (x - ea).powi(2) / ea + (y - eb).powi(2) / eb
        })
        .sum();
    TestResult {
        statistic: stat,
        p_value: chi_square_sf(stat, (cells.len() - 1) as f64),
    }
}

/// Chi-square goodness of fit of an integer sample to `pmf`. Cells run
/// `0, 1, …` until the expected tail drops below `min_expected`; that tail is
/// the last cell.
pub fn chi_square_gof(sample: &[u64], pmf: impl Fn(u64) -> f64, min_expected: f64) -> TestResult {
    assert!(!sample.is_empty(), "goodness of fit needs a sample");
    let n = sample.len() as f64;
    let mut expected = Vec::new();
    let mut covered = 0.0;
    let mut k = 0u64;
    loop {
        let e = n * pmf(k);
        let tail = n * (1.0 - covered - pmf(k));
        if tail < min_expected || 1.0 - covered - pmf(k) < 1e-12 {
            expected.push(n * (1.0 - covered));
            break;
        }
        expected.push(e);
        covered += pmf(k);
        k += 1;
    }
    let last = expected.len() - 1;
    let mut observed = vec![0f64; expected.len()];
    for &x in sample {
        observed[(x as usize).min(last)] += 1.0;
    }
    let stat: f64 = observed.iter().zip(&expected).map(|(o, e)| (o - e).powi(2) / e).sum();
    TestResult {
        statistic: stat,
        p_value: chi_square_sf(stat, last as f64),
    }
}

fn chi_square_sf(x: f64, df: f64) -> f64 {
    if df <= 0.0 {
        return 1.0;
    }
    let d = ChiSquared::new(df).expect("positive degrees of freedom");
    1.0 - d.cdf(x)
}
