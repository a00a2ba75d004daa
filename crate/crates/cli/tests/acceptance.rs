//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its headline numbers and enforcing its runtime limit.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use jsc_cli::parse_input;
use jsc_core::engine::bounds::{enumerate_bounds, subradius_bounds, EnumConfig};
use jsc_core::engine::kron_lift::{kron_lift_bounds, trace_kron_inequality};
use jsc_core::engine::perturb::{hausdorff_distance, perturbation_study, SetNorm};
use jsc_core::engine::trace_seq::trace_sequence;
use jsc_core::{
    conic_subradius_lower, construct_embedded_pair, dominant_eigenvalue, is_primitive, Matrix,
    MatrixSet, NormKind, PolyhedralCone, Primitivity,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn load(name: &str) -> MatrixSet {
    parse_input(&fixture(name)).unwrap().sigma
}

fn assert_runtime(elapsed: Duration, limit: Duration, what: &str) {
    assert!(
        elapsed <= limit,
        "{what} took {elapsed:?}, over the {limit:?} limit"
    );
}

#[test]
fn criterion_1_odd_even_alternation() {
    let sigma = load("odd_even.txt");
    let start = Instant::now();
    let report = enumerate_bounds(&sigma, 12, NormKind::Two, &EnumConfig::default()).unwrap();
    let elapsed = start.elapsed();

    for (i, &t) in report.t_values.iter().enumerate() {
        let expected = if t % 2 == 0 { 1.0 } else { 0.0 };
        assert!(
            (report.lower_jsr_rho[i] - expected).abs() <= 1e-10,
            "radius bound at t={t} was {}",
            report.lower_jsr_rho[i]
        );
    }
    let jsr = report.best_interval_jsr;
    assert!((jsr.lower - 1.0).abs() <= 1e-9);
    assert!((jsr.upper - 1.0).abs() <= 1e-9);
    assert_runtime(elapsed, Duration::from_secs(1), "criterion 1 enumeration");
    println!(
        "acceptance 1 (odd/even alternation): PASS  jsr=[{:.12}, {:.12}] in {elapsed:?}",
        jsr.lower, jsr.upper
    );
}

#[test]
fn criterion_2_discontinuity_family() {
    let start = Instant::now();
    for k in 1..=3usize {
        let sigma = load(&format!("sigma_k{k}.txt"));
        let t_max = 2 * (k + 1);
        let outcome = subradius_bounds(
            &sigma,
            t_max,
            None,
            NormKind::Two,
            1e-9,
            &EnumConfig::default(),
        )
        .unwrap();
        assert_eq!(
            outcome.interval.upper, 0.0,
            "family member k={k}: zero product not detected exactly at t_max={t_max}"
        );
    }

    let parsed = parse_input(&fixture("limit_pair.txt")).unwrap();
    let cone = parsed.cone.unwrap();
    let bound = conic_subradius_lower(&parsed.sigma, &cone, 1e-9).unwrap();
    assert!((bound.r - 1.0).abs() <= 1e-8, "conic bound was {}", bound.r);
    let outcome = subradius_bounds(
        &parsed.sigma,
        6,
        Some(&cone),
        NormKind::Two,
        1e-9,
        &EnumConfig::default(),
    )
    .unwrap();
    assert!((outcome.interval.lower - 1.0).abs() <= 1e-8);
    assert!((outcome.interval.upper - 1.0).abs() <= 1e-8);
    let elapsed = start.elapsed();
    assert_runtime(elapsed, Duration::from_secs(5), "criterion 2");
    println!(
        "acceptance 2 (discontinuity family): PASS  members collapse to 0, limit interval \
         [{:.12}, {:.12}] in {elapsed:?}",
        outcome.interval.lower, outcome.interval.upper
    );
}

#[test]
fn criterion_3_kron_lift_sandwich() {
    // Lifted-sum spectral radii fixed by the pre-build enumeration-side
    // run for the three committed fixtures.
    let expected: [(&str, [f64; 4]); 3] = [
        ("odd_even.txt", [1.0, 1.0, 1.0, 1.0]),
        ("limit_pair.txt", [2.0, 2.0, 2.0, 2.0]),
        ("cross_pair.txt", [6.0, 18.0, 54.0, 162.0]),
    ];
    let start = Instant::now();
    for (name, rho_expected) in expected {
        let parsed = parse_input(&fixture(name)).unwrap();
        let cone = parsed.cone.unwrap();
        let lift = kron_lift_bounds(&parsed.sigma, 4, Some(&cone), 4096, 1e-9).unwrap();
        assert!(lift.certified(), "{name}: cone check failed");
        let enumerated =
            enumerate_bounds(&parsed.sigma, 10, NormKind::Two, &EnumConfig::default()).unwrap();
        let jsr = enumerated.best_interval_jsr;
        for i in 0..4 {
            assert!(
                (lift.rho_sum[i] - rho_expected[i]).abs() <= 1e-8 * rho_expected[i].max(1.0),
                "{name}: lifted radius at k={} was {}, expected {}",
                i + 1,
                lift.rho_sum[i],
                rho_expected[i]
            );
            assert!(
                lift.lower_k[i] <= jsr.upper + 1e-8,
                "{name} lower_k exceeds jsr upper"
            );
            assert!(
                lift.upper_k[i] >= jsr.lower - 1e-8,
                "{name} upper_k below jsr lower"
            );
        }
        let width = |i: usize| lift.upper_k[i] - lift.lower_k[i];
        assert!(width(3) <= width(0), "{name}: sandwich failed to tighten");
    }
    let elapsed = start.elapsed();
    assert_runtime(elapsed, Duration::from_secs(10), "criterion 3");
    println!("acceptance 3 (Kronecker lift sandwich): PASS  3 fixtures, k=1..4 in {elapsed:?}");
}

/// Seeded nonnegative 3x3 pair used by criterion 4; member 0 is strictly
/// positive, hence primitive.
fn criterion_4_pair() -> MatrixSet {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let a: Vec<f64> = (0..9).map(|_| rng.random_range(0.1..1.0)).collect();
    let b: Vec<f64> = (0..9)
        .map(|_| {
            if rng.random::<f64>() < 0.5 {
                0.0
            } else {
                rng.random_range(0.0..1.0)
            }
        })
        .collect();
    MatrixSet::new(vec![Matrix::new(3, a).unwrap(), Matrix::new(3, b).unwrap()]).unwrap()
}

#[test]
fn criterion_4_trace_convergence_under_primitivity() {
    let start = Instant::now();
    let sigma = criterion_4_pair();
    let cfg = EnumConfig {
        budget: 3_000_000,
        dedup_tol: None,
    };
    let report = trace_sequence(&sigma, 20, &cfg).unwrap();
    assert!(report.diagnostic.has_primitive_member);
    assert_eq!(report.diagnostic.window, (15, 20));

    let bounds = enumerate_bounds(&sigma, 20, NormKind::Two, &cfg).unwrap();
    let jsr = bounds.best_interval_jsr;
    let s_window: Vec<f64> = report.s[14..].iter().flatten().copied().collect();
    let r_window = &report.r[14..];
    assert_eq!(
        s_window.len(),
        6,
        "trace sequence undefined inside the window"
    );

    let osc = |vals: &[f64]| {
        vals.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            - vals.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let s_osc = osc(&s_window);
    let r_osc = osc(r_window);
    assert!(
        s_osc <= 0.05 * jsr.upper,
        "trace oscillation {s_osc} above 5% of {}",
        jsr.upper
    );
    assert!(
        r_osc <= 0.05 * jsr.upper,
        "radius oscillation {r_osc} above 5% of {}",
        jsr.upper
    );
    for &v in s_window.iter().chain(r_window) {
        assert!(
            v >= jsr.lower - 1e-6 && v <= jsr.upper + 1e-6,
            "value {v} left the interval"
        );
    }

    // Without a primitive member the sequences oscillate with width one.
    let odd_even = load("odd_even.txt");
    let osc_report = trace_sequence(&odd_even, 12, &EnumConfig::default()).unwrap();
    assert!(!osc_report.diagnostic.has_primitive_member);
    assert!((osc_report.diagnostic.s_oscillation.unwrap() - 1.0).abs() <= 1e-12);
    assert!((osc_report.diagnostic.r_oscillation - 1.0).abs() <= 1e-12);

    let elapsed = start.elapsed();
    assert_runtime(elapsed, Duration::from_secs(30), "criterion 4");
    println!(
        "acceptance 4 (trace convergence): PASS  s_osc={s_osc:.3e} r_osc={r_osc:.3e} against \
         jsr=[{:.9}, {:.9}]; persistent width-1 oscillation without primitivity in {elapsed:?}",
        jsr.lower, jsr.upper
    );
}

#[test]
fn criterion_5_conic_achievability_for_positive_pairs() {
    let start = Instant::now();
    let mut worst_margin = f64::INFINITY;
    for idx in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + idx);
        let n = if idx % 2 == 0 { 2 } else { 3 };
        let mut draw = || -> Matrix {
            let data = (0..n * n).map(|_| rng.random_range(0.5..3.0)).collect();
            Matrix::new(n, data).unwrap()
        };
        let sigma = MatrixSet::new(vec![draw(), draw()]).unwrap();
        let orthant = PolyhedralCone::orthant(n);
        let pair = construct_embedded_pair(&sigma).unwrap();
        let squared_ratio = pair.beta_bound.unwrap();
        let conic = conic_subradius_lower(&sigma, &orthant, 1e-9).unwrap();
        let upper_est =
            subradius_bounds(&sigma, 8, None, NormKind::Two, 1e-9, &EnumConfig::default())
                .unwrap()
                .interval
                .upper;
        let margin = conic.r - (upper_est / squared_ratio - 1e-6);
        assert!(
            margin >= 0.0,
            "pair {idx}: conic bound {} below {upper_est}/{squared_ratio}",
            conic.r
        );
        worst_margin = worst_margin.min(margin);
    }
    let elapsed = start.elapsed();
    assert_runtime(elapsed, Duration::from_secs(60), "criterion 5");
    println!(
        "acceptance 5 (conic achievability): PASS  20 positive pairs, worst margin \
         {worst_margin:.6} in {elapsed:?}"
    );
}

#[test]
fn criterion_6_continuity_at_desk_scale() {
    let start = Instant::now();
    let parsed = parse_input(&fixture("positive_pair.txt")).unwrap();
    let cone = parsed.cone.unwrap();
    let report = perturbation_study(
        &parsed.sigma,
        &[0.1, 0.01, 0.001],
        20,
        0,
        8,
        Some(&cone),
        NormKind::Two,
        1e-9,
        &EnumConfig::default(),
    )
    .unwrap();
    assert!(report.positivity_mode);

    // Golden deviations fixed by the pre-build oracle run (seed 0).
    let golden_sub = [
        1.00355016034701094e-1,
        1.11785778138813185e-2,
        1.18551608552897036e-3,
    ];
    let golden_jsr = [
        1.72537417470826071e-1,
        1.42434869465644098e-2,
        1.30941457096422909e-3,
    ];
    for (i, o) in report.outcomes.iter().enumerate() {
        assert!(
            (o.max_sub_mid_deviation - golden_sub[i]).abs() <= 1e-9,
            "radius {}: subradius deviation {} drifted from golden {}",
            o.delta,
            o.max_sub_mid_deviation,
            golden_sub[i]
        );
        assert!(
            (o.max_jsr_mid_deviation - golden_jsr[i]).abs() <= 1e-9,
            "radius {}: jsr deviation {} drifted from golden {}",
            o.delta,
            o.max_jsr_mid_deviation,
            golden_jsr[i]
        );
        assert!(o.max_realized_hausdorff <= o.delta + 1e-12);
    }
    let sub_devs: Vec<f64> = report
        .outcomes
        .iter()
        .map(|o| o.max_sub_mid_deviation)
        .collect();
    let jsr_devs: Vec<f64> = report
        .outcomes
        .iter()
        .map(|o| o.max_jsr_mid_deviation)
        .collect();
    assert!(sub_devs[0] > sub_devs[1] && sub_devs[1] > sub_devs[2]);
    assert!(jsr_devs[0] > jsr_devs[1] && jsr_devs[1] > jsr_devs[2]);
    assert!(sub_devs[2] <= 0.02);

    let elapsed = start.elapsed();
    assert_runtime(elapsed, Duration::from_secs(60), "criterion 6");
    println!(
        "acceptance 6 (continuity at desk scale): PASS  sub deviations {:.6e} > {:.6e} > \
         {:.6e} in {elapsed:?}",
        sub_devs[0], sub_devs[1], sub_devs[2]
    );
}

#[test]
fn criterion_7_kronecker_identity_suites() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7000);
    let rand_matrix = |n: usize, rng: &mut ChaCha8Rng| -> Matrix {
        let data = (0..n * n).map(|_| rng.random_range(-2.0..2.0)).collect();
        Matrix::new(n, data).unwrap()
    };

    for trial in 0..1000 {
        let n = if trial % 2 == 0 { 2 } else { 3 };
        let (a, b) = (rand_matrix(n, &mut rng), rand_matrix(n, &mut rng));
        let (c, d) = (rand_matrix(n, &mut rng), rand_matrix(n, &mut rng));
        let left = a.kron(&b).unwrap().mul(&c.kron(&d).unwrap());
        let right = a.mul(&c).kron(&b.mul(&d)).unwrap();
        let scale = right.max_abs().max(1.0);
        assert!(
            left.sub(&right).max_abs() <= 1e-10 * scale,
            "mixed-product identity failed at trial {trial}"
        );

        let k = 2 + trial % 2;
        let lifted = a.kron_power(k, 4096).unwrap();
        let expected = a.trace().powi(k as i32);
        assert!(
            (lifted.trace() - expected).abs() <= 1e-10 * expected.abs().max(1.0),
            "trace power identity failed at trial {trial}"
        );
    }

    // Traceless integer fixture: odd Kronecker powers have exactly zero
    // trace under exact integer arithmetic.
    let traceless = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, -1.0]]).unwrap();
    assert_eq!(traceless.kron_power(3, 4096).unwrap().trace(), 0.0);

    let mut holds = 0usize;
    for trial in 0..200 {
        let k = 1 + trial % 3;
        let t = 1 + trial % 4;
        let data = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..4).map(|_| rng.random_range(0.0..2.0)).collect()
        };
        let sigma = MatrixSet::new(vec![
            Matrix::new(2, data(&mut rng)).unwrap(),
            Matrix::new(2, data(&mut rng)).unwrap(),
        ])
        .unwrap();
        let check = trace_kron_inequality(&sigma, k, t, 4096, 1e-9).unwrap();
        assert_ne!(
            check.holds,
            Some(false),
            "lifted-trace inequality violated at trial {trial} (k={k}, t={t})"
        );
        if check.holds == Some(true) {
            holds += 1;
        }
    }
    assert!(
        holds >= 190,
        "only {holds}/200 inequality instances were defined"
    );

    let elapsed = start.elapsed();
    assert_runtime(elapsed, Duration::from_secs(30), "criterion 7");
    println!(
        "acceptance 7 (identity suites): PASS  1000 Kronecker identity trials, {holds}/200 \
         lifted-trace instances in {elapsed:?}"
    );
}

#[test]
fn criterion_8_primitivity_and_dominant_eigenvalue() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8000);
    let mut found = 0usize;
    let mut attempts = 0usize;
    while found < 100 {
        attempts += 1;
        assert!(
            attempts <= 2000,
            "only {found} primitive patterns in {attempts} draws"
        );
        let n = 2 + attempts % 4;
        let data: Vec<f64> = (0..n * n)
            .map(|_| if rng.random::<f64>() < 0.5 { 1.0 } else { 0.0 })
            .collect();
        let a = Matrix::new(n, data).unwrap();
        let orthant = PolyhedralCone::orthant(n);
        let wielandt = (n - 1) * (n - 1) + 1;
        match is_primitive(&a, &orthant, Some(wielandt), 1e-9).unwrap() {
            Primitivity::NotFoundWithin(_) => continue,
            Primitivity::Primitive(t) => {
                assert!(t <= wielandt);
                let dom = dominant_eigenvalue(&a, 1e-8).unwrap();
                assert!(
                    dom.unique,
                    "pattern {attempts}: dominant eigenvalue not unique"
                );
                assert!(
                    dom.real_positive,
                    "pattern {attempts}: dominant eigenvalue {:?} not real positive",
                    dom.value
                );

                let lifted = a.kron_power(2, 4096).unwrap();
                let lifted_orthant = PolyhedralCone::orthant(n * n);
                match is_primitive(&lifted, &lifted_orthant, Some(wielandt), 1e-9).unwrap() {
                    Primitivity::Primitive(lt) => assert!(lt <= wielandt),
                    Primitivity::NotFoundWithin(h) => {
                        panic!("lifted pattern {attempts} not primitive within {h}")
                    }
                }
                found += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert_runtime(elapsed, Duration::from_secs(30), "criterion 8");
    println!(
        "acceptance 8 (primitivity and dominant eigenvalue): PASS  100 patterns from \
         {attempts} draws in {elapsed:?}"
    );
}

/// Scripted counterexample: perturbing the limit pair along the family
/// direction collapses the subradius interval from [1,1] to [0,0], while
/// the realized set distance shrinks like 1/k.
#[test]
fn discontinuity_counterexample_script() {
    let limit = parse_input(&fixture("limit_pair.txt")).unwrap();
    let cone = limit.cone.unwrap();
    let base = subradius_bounds(
        &limit.sigma,
        8,
        Some(&cone),
        NormKind::Two,
        1e-9,
        &EnumConfig::default(),
    )
    .unwrap();
    assert!((base.interval.lower - 1.0).abs() <= 1e-8);
    assert!((base.interval.upper - 1.0).abs() <= 1e-8);

    for k in 1..=3usize {
        let family = load(&format!("sigma_k{k}.txt"));
        let dist = hausdorff_distance(&family, &limit.sigma, SetNorm::MaxEntry).unwrap();
        assert!((dist - 1.0 / k as f64).abs() <= 1e-15);
        let outcome = subradius_bounds(
            &family,
            2 * (k + 1),
            Some(&cone),
            NormKind::Two,
            1e-9,
            &EnumConfig::default(),
        )
        .unwrap();
        assert_eq!(outcome.cone_invariant, Some(false));
        assert_eq!(outcome.interval.upper, 0.0);
    }
    println!(
        "discontinuity counterexample: PASS  subradius drops 1 -> 0 under arbitrarily small \
         perturbations"
    );
}
