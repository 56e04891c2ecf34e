use sharpe_core::aggregation::{ar1_limit_sharpe, sample_autocorrelation};
use sharpe_core::mc::{
    ks_distance, simulate_ar1, simulate_iid, validate_aggregation, validate_crb,
    validate_sr_distribution, SimConfig,
};
use sharpe_core::sharpe::estimate_sharpe;
use sharpe_core::specfun::std_normal_cdf;

fn ar1_config(n: u32, mu: f64, sigma: f64, rho: f64, seed: u64) -> SimConfig {
    SimConfig {
        n,
        reps: 1,
        mu,
        sigma,
        rf: 0.0,
        rho: Some(rho),
        seed,
    }
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    let mean = x.iter().sum::<f64>() / m;
    (
        mean,
        x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0),
    )
}

fn two_sample_ks(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let config = SimConfig::iid(12, 20_000, 1.0, 7);
    let one = in_pool(1, || validate_sr_distribution(&config).unwrap());
    let four = in_pool(4, || validate_sr_distribution(&config).unwrap());
    assert_eq!(format!("{one:?}"), format!("{four:?}"));
    let crb1 = in_pool(1, || {
        validate_crb(&SimConfig::iid(50, 5_000, 0.3, 9)).unwrap()
    });
    let crb4 = in_pool(4, || {
        validate_crb(&SimConfig::iid(50, 5_000, 0.3, 9)).unwrap()
    });
    assert_eq!(format!("{crb1:?}"), format!("{crb4:?}"));
}

#[test]
fn same_seed_same_path_other_seed_other_path() {
    let c = SimConfig::iid(1000, 1, 0.1, 42);
    assert_eq!(simulate_iid(&c).unwrap(), simulate_iid(&c).unwrap());
    let d = SimConfig { seed: 43, ..c };
    assert_ne!(simulate_iid(&c).unwrap(), simulate_iid(&d).unwrap());
}

#[test]
fn normal_generator_passes_ks() {
    let c = SimConfig::iid(1_000_000, 1, 0.0, 2024);
    let x = simulate_iid(&c).unwrap();
    let d = ks_distance(x.returns(), |v| std_normal_cdf(v).unwrap());
    assert!(d < 0.002, "ks = {d}");
    let (_, var) = mean_var(x.returns());
    assert!((0.997..=1.003).contains(&var.sqrt()));
}

#[test]
fn invalid_configs_are_rejected() {
    let mut c = SimConfig::iid(10, 1, 0.1, 1);
    c.sigma = 0.0;
    assert!(simulate_iid(&c).is_err());
    assert!(simulate_ar1(&ar1_config(10, 0.0, 1.0, 1.0, 1)).is_err());
    assert!(simulate_ar1(&SimConfig::iid(10, 1, 0.1, 1)).is_err());
    assert!(validate_sr_distribution(&ar1_config(10, 0.0, 1.0, 0.5, 1)).is_err());
}

#[test]
fn ar1_long_run_moments() {
    let x = simulate_ar1(&ar1_config(1_000_000, 0.0, 1.0, 0.6, 5)).unwrap();
    let (_, var) = mean_var(x.returns());
    assert!((var / 1.5625 - 1.0).abs() < 0.01, "var = {var}");
    let r1 = sample_autocorrelation(x.returns(), 1).unwrap();
    assert!((r1 - 0.6).abs() < 0.01);

    let x = simulate_ar1(&ar1_config(1_000_000, 0.0, 1.0, 0.9, 6)).unwrap();
    for k in 1..=5 {
        let rk = sample_autocorrelation(x.returns(), k).unwrap();
        assert!((rk - 0.9f64.powi(k as i32)).abs() < 0.01, "lag {k}: {rk}");
    }
}

#[test]
fn ar1_with_zero_rho_looks_iid() {
    let a = simulate_ar1(&ar1_config(100_000, 0.0, 1.0, 0.0, 11)).unwrap();
    let b = simulate_iid(&SimConfig::iid(100_000, 1, 0.0, 12)).unwrap();
    assert!(two_sample_ks(a.returns(), b.returns()) < 0.01);
}

#[test]
fn ar1_start_is_stationary() {
    // moments at t = 1 and t = 1001 across independent paths
    let rho = 0.9;
    let target = 1.0 / (1.0 - rho * rho);
    let (mut first, mut later) = (Vec::new(), Vec::new());
    for seed in 0..4000 {
        let x = simulate_ar1(&ar1_config(1001, 0.0, 1.0, rho, seed)).unwrap();
        first.push(x.returns()[0]);
        later.push(x.returns()[1000]);
    }
    for sample in [&first, &later] {
        let (mean, var) = mean_var(sample);
        let m = sample.len() as f64;
        assert!(mean.abs() < 3.0 * (target / m).sqrt());
        assert!((var - target).abs() < 3.0 * target * (2.0 / m).sqrt());
    }
}

#[test]
fn long_ar1_path_estimates_limit_sharpe() {
    let (mu, sigma, rho) = (0.01, 0.02, 0.6);
    let x = simulate_ar1(&ar1_config(1_000_000, mu, sigma, rho, 77)).unwrap();
    let sr = estimate_sharpe(&x).unwrap().sr_hat;
    let limit = ar1_limit_sharpe(mu, 0.0, sigma, rho).unwrap();
    assert!((sr - limit).abs() < 0.01, "{sr} vs {limit}");
}

#[test]
fn iid_path_sharpe_is_close_to_one() {
    let x = simulate_iid(&SimConfig::iid(10_000, 1, 1.0, 3)).unwrap();
    let sr = estimate_sharpe(&x).unwrap().sr_hat;
    let se = (1.5f64 / 10_000.0).sqrt();
    assert!((sr - 1.0).abs() < 3.0 * se);
}

#[test]
fn bias_matches_k_n() {
    for (n, seed) in [(6, 1), (12, 2), (60, 3)] {
        let report = validate_sr_distribution(&SimConfig::iid(n, 100_000, 1.0, seed)).unwrap();
        for c in &report.checks {
            assert!(c.passed, "n={n}: {c:?}");
        }
    }
}

#[test]
fn zero_sharpe_mean_is_zero() {
    let report = validate_sr_distribution(&SimConfig::iid(12, 50_000, 0.0, 4)).unwrap();
    assert!(report.passed(), "{report:?}");
}

#[test]
fn crb_at_zero_sharpe() {
    let report = validate_crb(&SimConfig::iid(250, 100_000, 0.0, 5)).unwrap();
    assert!(report.passed(), "{report:?}");
}

#[test]
fn one_period_aggregation_is_identity() {
    let r = validate_aggregation(&ar1_config(10_000, 0.25, 1.0, 0.4, 8), 1).unwrap();
    assert!((r.checks[0].estimate - 1.0).abs() < 1e-12);
}

#[test]
fn aggregation_examples() {
    for (rho, target) in [(0.0, 3.464), (0.5, 2.121)] {
        let r = validate_aggregation(&ar1_config(1_000_000, 0.25, 1.0, rho, 21), 12).unwrap();
        assert!((r.checks[0].target - target).abs() < 5e-4);
        assert!(r.passed(), "{r:?}");
    }
}
