use proptest::prelude::*;
use qsearch::analysis::{
    classical_baselines, confidence_interval, expected_quantum_calls, r_metric, relabel_average, success_probability,
    AnalysisError, Metrics, OracleRun,
};
use qsearch::families::{build, Family, FamilyRequest, Partition, Uncompute};
use qsearch::sim::{run_exact, run_noisy, Distribution, NoiseModel};
use qsearch::synth::{OracleSpec, OracleStyle};
use qsearch::Pattern;

fn exact_run(req: &FamilyRequest) -> OracleRun {
    let c = build(req).unwrap();
    OracleRun::new(req.oracle.mask, run_exact(&c).unwrap()).unwrap()
}

fn grover_requests(n: usize) -> Vec<FamilyRequest> {
    Pattern::all(n)
        .map(|m| FamilyRequest::new(Family::Grover, OracleSpec::new(n, m, OracleStyle::AncillaRelphase).unwrap()))
        .collect()
}

/// Central 95% credible interval of the Beta(s+1, f+1) posterior, by
/// Riemann-sum quadrature of the density (normalised in log space).
fn beta_interval(successes: u64, shots: u64) -> (f64, f64) {
    let (a, b) = (successes as f64, (shots - successes) as f64);
    let steps = 400_000;
    let log_density = |x: f64| a * x.ln() + b * (1.0 - x).ln();
    let xs: Vec<f64> = (1..steps).map(|i| i as f64 / steps as f64).collect();
    let peak = xs.iter().map(|&x| log_density(x)).fold(f64::NEG_INFINITY, f64::max);
    let dens: Vec<f64> = xs.iter().map(|&x| (log_density(x) - peak).exp()).collect();
    let total: f64 = dens.iter().sum();
    let mut acc = 0.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut lo_set = false;
    for (x, d) in xs.iter().zip(&dens) {
        acc += d / total;
        if !lo_set && acc >= 0.025 {
            lo = *x;
            lo_set = true;
        }
        if acc >= 0.975 {
            hi = *x;
            break;
        }
    }
    (lo, hi)
}

#[test]
fn success_probability_examples() {
    let uniform = OracleRun::new("0110".parse().unwrap(), Distribution::exact(4, vec![1.0 / 16.0; 16])).unwrap();
    assert_eq!(success_probability(&uniform), 0.0625);

    for req in grover_requests(3) {
        assert!((success_probability(&exact_run(&req)) - 0.78125).abs() < 1e-12);
    }

    let mut counts = vec![0u64; 8];
    counts[0b011] = 300;
    counts[0b100] = 700;
    let run = OracleRun::new("011".parse().unwrap(), Distribution::sampled(3, counts)).unwrap();
    assert_eq!(success_probability(&run), 0.30);
}

#[test]
fn relabel_average_examples() {
    let mut probs = vec![0.0; 8];
    probs[0b111] = 1.0;
    let run = OracleRun::new("101".parse().unwrap(), Distribution::exact(3, probs)).unwrap();
    let avg = relabel_average(&[run]).unwrap();
    assert_eq!(avg[0b010], 1.0);

    let runs: Vec<OracleRun> = grover_requests(3).iter().map(exact_run).collect();
    let avg = relabel_average(&runs).unwrap();
    for run in &runs {
        let own = relabel_average(std::slice::from_ref(run)).unwrap();
        for (a, b) in avg.iter().zip(&own) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    let u = Distribution::exact(2, vec![0.25; 4]);
    let runs = [OracleRun::new("00".parse().unwrap(), u.clone()).unwrap(), OracleRun::new("11".parse().unwrap(), u).unwrap()];
    assert_eq!(relabel_average(&runs).unwrap(), vec![0.25; 4]);

    let narrow = OracleRun::new("00".parse().unwrap(), Distribution::exact(2, vec![0.25; 4])).unwrap();
    let wide = OracleRun::new("000".parse().unwrap(), Distribution::exact(3, vec![0.125; 8])).unwrap();
    assert!(matches!(relabel_average(&[narrow, wide]), Err(AnalysisError::WidthMismatch { .. })));
    assert_eq!(relabel_average(&[]), Err(AnalysisError::Empty));
}

#[test]
fn table_metric_examples() {
    assert!((r_metric(0.6614, 0.78125).unwrap() - 0.8466).abs() < 1e-4);
    assert!((r_metric(0.9518, 1.0).unwrap() - 0.9518).abs() < 1e-15);
    assert_eq!(r_metric(0.5, 0.5).unwrap(), 1.0);
    assert_eq!(r_metric(0.5, 0.0), Err(AnalysisError::ZeroTheoretical));
}

#[test]
fn baseline_and_call_examples() {
    assert_eq!(classical_baselines(4, 1).unwrap().single_model, 0.0625);
    assert_eq!(classical_baselines(6, 1).unwrap().guess_model, 0.03125);
    assert_eq!(classical_baselines(2, 1).unwrap().expected_calls, 2.5);
    assert!(matches!(classical_baselines(3, 0), Err(AnalysisError::BadQ { .. })));

    let four = expected_quantum_calls(0.66, 1).unwrap();
    assert!((four - 1.515_151_5).abs() < 1e-6 && four < classical_baselines(4, 1).unwrap().expected_calls);
    let five = expected_quantum_calls(0.26, 1).unwrap();
    assert!((five - 3.846_153_8).abs() < 1e-6 && five < classical_baselines(5, 1).unwrap().expected_calls);
    assert_eq!(expected_quantum_calls(1.0, 3).unwrap(), 3.0);
    assert_eq!(expected_quantum_calls(0.0, 1), Err(AnalysisError::ZeroSuccess));
}

#[test]
fn wilson_examples() {
    assert_eq!(confidence_interval(0, 100).unwrap().0, 0.0);
    let (lo, hi) = confidence_interval(50, 100).unwrap();
    assert!(((0.5 - lo) - (hi - 0.5)).abs() < 1e-9);
    let (lo, hi) = confidence_interval(662, 1000).unwrap();
    assert!(lo < 0.662 && 0.662 < hi);
    assert!((lo - 0.632_111_575).abs() < 1e-8 && (hi - 0.690_648_555).abs() < 1e-8);
    assert!(matches!(confidence_interval(3, 2), Err(AnalysisError::BadCounts { .. })));
}

#[test]
fn wilson_agrees_with_beta_posterior() {
    for (s, n) in [(662, 1000), (50, 100), (5, 100), (95, 100), (4500, 10_000), (1, 20)] {
        let (wl, wh) = confidence_interval(s, n).unwrap();
        let (bl, bh) = beta_interval(s, n);
        assert!((wl - bl).abs() < 0.01 && (wh - bh).abs() < 0.01, "{s}/{n}: wilson ({wl}, {wh}) beta ({bl}, {bh})");
    }
}

#[test]
fn success_equals_relabelled_bucket_for_every_family() {
    let p = |s: &str| -> Partition { s.parse().unwrap() };
    let mut requests: Vec<Box<dyn Fn(OracleSpec) -> FamilyRequest>> = vec![
        Box::new(|s| FamilyRequest::new(Family::Grover, s)),
        Box::new(|s| FamilyRequest::new(Family::Partial, s).diffuser_size(3)),
        Box::new(|s| FamilyRequest::new(Family::Wielomianer, s)),
    ];
    for family in [Family::Wojter, Family::WojterAa, Family::Drzewker, Family::PartialDrzewker] {
        let part = p("2,2");
        requests.push(Box::new(move |s| FamilyRequest::new(family, s).partition(part.clone()).uncompute(Uncompute::Partial)));
    }
    for make in &requests {
        let runs: Vec<OracleRun> = Pattern::all(4)
            .map(|m| exact_run(&make(OracleSpec::new(4, m, OracleStyle::PlainMcz).unwrap())))
            .collect();
        let avg = relabel_average(&runs).unwrap();
        assert!((avg.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for run in &runs {
            assert!((success_probability(run) - avg[0]).abs() < 1e-10);
        }
    }
}

#[test]
fn metrics_from_sampled_runs() {
    let reqs = grover_requests(3);
    let runs: Vec<OracleRun> = reqs
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let d = run_noisy(&build(r).unwrap(), &NoiseModel::noiseless(), 4_000, i as u64).unwrap();
            OracleRun::new(r.oracle.mask, d).unwrap()
        })
        .collect();
    let m = Metrics::compute(&runs, 0.78125, 1).unwrap();
    assert!(m.ci.0 <= m.p_succ && m.p_succ <= m.ci.1);
    assert!(m.p_succ_worst <= m.p_succ);
    assert!((m.r - m.p_succ / 0.78125).abs() < 1e-15);
    assert_eq!(m.ci_method, "wilson-95");
    assert_eq!(m.classical_guess, 0.25);

    let exact: Vec<OracleRun> = reqs.iter().map(exact_run).collect();
    let m = Metrics::compute(&exact, 0.78125, 1).unwrap();
    assert!((m.r - 1.0).abs() < 1e-12);
    assert_eq!(m.ci_method, "exact");
    let json = serde_json::to_value(&m).unwrap();
    assert!(json.get("R").is_some());
}

fn distribution(n: usize) -> impl Strategy<Value = Distribution> {
    proptest::collection::vec(0.0..1.0f64, 1 << n).prop_filter_map("non-zero mass", move |w| {
        let total: f64 = w.iter().sum();
        (total > 1e-6).then(|| Distribution::exact(n, w.iter().map(|x| x / total).collect()))
    })
}

proptest! {
    #[test]
    fn relabel_is_an_involution(d in distribution(4), mask in 0u64..16) {
        let back = d.relabel(mask).relabel(mask);
        prop_assert!(back.total_variation(&d) < 1e-15);
    }

    #[test]
    fn relabel_average_sums_to_one(ds in proptest::collection::vec((distribution(3), 0u64..8), 1..6)) {
        let runs: Vec<OracleRun> =
            ds.into_iter().map(|(d, m)| OracleRun::new(Pattern::new(3, m).unwrap(), d).unwrap()).collect();
        let avg = relabel_average(&runs).unwrap();
        prop_assert!((avg.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn guess_model_dominates(n in 1usize..12, frac in 0.0..1.0f64) {
        let big = 1u64 << n;
        let q = 1 + ((big - 1) as f64 * frac) as u64;
        let b = classical_baselines(n, q).unwrap();
        prop_assert!(b.guess_model >= b.single_model);
        prop_assert!(b.guess_model <= 1.0 && b.single_model <= 1.0);
    }

    #[test]
    fn expected_calls_decrease_with_success(a in 0.001..1.0f64, b in 0.001..1.0f64, calls in 1u64..10) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(expected_quantum_calls(hi, calls).unwrap() <= expected_quantum_calls(lo, calls).unwrap());
    }

    #[test]
    fn interval_contains_estimate(shots in 1u64..5000, frac in 0.0..=1.0f64) {
        let s = (shots as f64 * frac).round() as u64;
        let (lo, hi) = confidence_interval(s, shots).unwrap();
        let p = s as f64 / shots as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }
}
