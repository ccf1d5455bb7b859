//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line with its wall time. Time budgets are enforced in release builds
//! (debug-mode exact arithmetic is slower by a constant factor); run
//! `cargo test --release --test acceptance -- --nocapture` for the
//! timed report.

use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shiftbundle::cases;
use shiftbundle::geometry::{
    curvature_diagonal, curvature_fd, jet_condition_check, metric_ratio_extrema, GridSpec,
    HermitianMetric, JetConditionVerdict,
};
use shiftbundle::kernels::{
    bivariate_cofactor, frame_from_gram, psd_check, standard_coeffs, DiagonalKernel, PolyFactor,
    StandardFamily,
};
use shiftbundle::multiplier::{
    frame_summability_check, monomial_mult_norm, mult_norm_bruteforce, MonomialSymbol,
};
use shiftbundle::shift::{
    cofactor_diagonal, defect_coeffs, hypercontraction_sum, mueller_diagonal_check, power_norm,
    shields_ratio_extrema, weights_from_kernel, MuellerVerdict, ShieldsVerdict,
};
use shiftbundle::{cauchy_product, CoeffSeq, Mode, Scalar};

fn finish(criterion: &str, start: Instant, budget_s: Option<f64>) {
    let elapsed = start.elapsed().as_secs_f64();
    println!("[PASS] {criterion} ({elapsed:.3} s)");
    if let Some(budget) = budget_s {
        if cfg!(not(debug_assertions)) {
            assert!(
                elapsed < budget,
                "{criterion}: {elapsed:.3} s exceeded the {budget} s budget"
            );
        }
    }
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

#[test]
fn criterion_01_quintic_product_exact_suite() {
    let start = Instant::now();
    let order = 64usize;
    let kernel = cases::quintic_product(order, Mode::Exact).unwrap();

    assert_eq!(kernel.coeffs().get(1), q(129, 256));
    assert_eq!(kernel.coeffs().get(2), q(515, 1536));

    let mueller = mueller_diagonal_check(&kernel, 1.0, order).unwrap();
    assert_eq!(mueller.deltas.get(2), q(-1, 4));
    assert_eq!(mueller.verdict, MuellerVerdict::ViolationAt(2));

    let cof = cofactor_diagonal(&kernel, 1.0, order).unwrap();
    assert_eq!(cof.coeffs, cases::quintic_factor(order, Mode::Exact));
    assert!(cof.first_negative.is_none());

    let family = cases::quintic_frame_family(20);
    let grid = GridSpec::default_disk();
    let report = frame_summability_check(&family, 1.0, &grid, 1.0).unwrap();
    assert!(report.lower >= 1.0, "lower = {}", report.lower);
    assert!(
        report.upper <= std::f64::consts::PI.powi(2) / 3.0 + 1e-6,
        "upper = {}",
        report.upper
    );
    assert!(report.verdict);

    finish("criterion 1: quintic-product exact suite", start, Some(1.0));
}

#[test]
fn criterion_02_harmonic_square_limit() {
    let start = Instant::now();
    let n = 100_000usize;
    let kernel = cases::harmonic_square_product(n);
    let coeffs = kernel.coeffs().floats().unwrap();

    let limit = std::f64::consts::PI.powi(2) / 6.0;
    let scaled_last = (n as f64 + 1.0) * coeffs[n];
    assert!(
        (scaled_last - limit).abs() < 2e-3,
        "(n+1) a_n = {scaled_last} vs pi^2/6 = {limit}"
    );

    for (i, &a) in coeffs.iter().enumerate() {
        let scaled = (i as f64 + 1.0) * a;
        assert!(scaled >= 1.0, "sqrt((n+1) a_n) < 1 at n = {i}: {scaled}");
    }

    // Full-prefix window ratios against the Dirichlet weights equal
    // 1/sqrt((l+1) a_l); cross-check the two routes and the upper bound
    // (which is clause two restated).
    let weights = weights_from_kernel(&kernel);
    let dirichlet = weights_from_kernel(&DiagonalKernel::dirichlet(n, Mode::Float));
    let mut prefix = 0.0_f64;
    for l in 1..=weights.len() {
        prefix += weights.get(l).ln() - dirichlet.get(l).ln();
        let full_prefix_ratio = prefix.exp();
        assert!(full_prefix_ratio <= 1.0 + 1e-12, "ratio > 1 at l = {l}");
        if l % 20_000 == 0 {
            let direct = 1.0 / ((l as f64 + 1.0) * coeffs[l]).sqrt();
            assert!((full_prefix_ratio - direct).abs() < 1e-8);
        }
    }

    finish("criterion 2: harmonic-square product limit", start, Some(5.0));
}

/// The remaining clause of criterion 2 exactly as stated: every
/// full-prefix window ratio against the Dirichlet weights lies in
/// [0.77, 1.0].
///
/// This clause is not attainable: it presumes `(l+1) a_l` climbs
/// monotonically to its limit pi^2/6 ~ 1.6449, but the sequence
/// overshoots (exact value 1.895005... at l = 8, checked in exact
/// rational arithmetic), so the ratio dips to ~0.7265 and stays below
/// 0.77 for 2 <= l <= 220 before settling at sqrt(6)/pi ~ 0.7797. Only
/// the lower bound `ratio <= 1` and the limit are backed by the
/// closed-form analysis; the test is kept faithful to the stated band
/// and is expected to fail at l = 2.
#[test]
fn criterion_02_window_ratio_band_as_stated() {
    let start = Instant::now();
    let n = 100_000usize;
    let kernel = cases::harmonic_square_product(n);
    let weights = weights_from_kernel(&kernel);
    let dirichlet = weights_from_kernel(&DiagonalKernel::dirichlet(n, Mode::Float));
    let mut prefix = 0.0_f64;
    for l in 1..=weights.len() {
        prefix += weights.get(l).ln() - dirichlet.get(l).ln();
        let full_prefix_ratio = prefix.exp();
        assert!(
            (0.77..=1.0).contains(&full_prefix_ratio),
            "full-prefix ratio {full_prefix_ratio} escapes [0.77, 1.0] at l = {l}: \
             (l+1) a_l overshoots its limit pi^2/6 (max 1.895005 at l = 8, exact), so the \
             stated band cannot hold below l ~ 221"
        );
    }
    finish("criterion 2 (band clause): window ratios in [0.77, 1.0]", start, None);
}

#[test]
fn criterion_03_poly_augmented_dirichlet_suite() {
    let start = Instant::now();
    let order = 202usize;
    let augmented = cases::poly_augmented_dirichlet(order, Mode::Exact).unwrap();
    let expanded = cases::poly_augmented_dirichlet_expanded(order, Mode::Exact).unwrap();
    assert_eq!(augmented, expanded, "banded closed form must match entrywise");

    let gram = cases::unit_quadratic_gram(Mode::Float);
    let grid = GridSpec::polar(48, 0.999, 64).unwrap();
    let report = jet_condition_check(&gram, &grid).unwrap();
    assert_eq!(report.verdict, JetConditionVerdict::SatisfiedOnGrid);
    assert!(report.metric.inf >= 1.0, "inf h = {}", report.metric.inf);
    assert!(report.trace.sup <= 19.0, "sup trace = {}", report.trace.sup);

    finish("criterion 3: polynomial-augmented Dirichlet suite", start, Some(5.0));
}

#[test]
fn criterion_04_defect_coefficients() {
    let start = Instant::now();
    let order = 200usize;

    let exact = defect_coeffs(1.0, order, Mode::Exact).unwrap();
    assert_eq!(exact.c.get(1), q(-1, 2));
    assert_eq!(exact.c.get(2), q(-1, 12));
    let conv = cauchy_product(&exact.b, &exact.c, order).unwrap();
    assert_eq!(conv, CoeffSeq::delta(order, Mode::Exact), "identity must be exact");
    let b = exact.b.rationals().unwrap();
    let c = exact.c.rationals().unwrap();
    for k in 1..=order {
        assert!(c[k] <= BigRational::from_integer(BigInt::from(0)));
        assert!(c[k] >= -&b[k], "envelope fails at k = {k}");
    }

    for &alpha in &[0.25, 0.5, 0.75] {
        let d = defect_coeffs(alpha, order, Mode::Float).unwrap();
        let residual = d.convolution_residual().unwrap();
        assert!(residual < 1e-12, "alpha = {alpha}: residual {residual}");
    }

    finish("criterion 4: defect coefficients", start, None);
}

#[test]
fn criterion_05_cofactor_round_trip() {
    let start = Instant::now();
    let order = 40usize;
    let eval_order = 400usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let d1_exact = DiagonalKernel::dirichlet(order, Mode::Exact);
    let d1_float = DiagonalKernel::dirichlet(eval_order, Mode::Float);
    let grid = GridSpec::polar(16, 0.95, 16).unwrap();

    for round in 0..100 {
        // Non-negative exact rationals with g_0 = 1; zeros allowed.
        let mut g = vec![BigRational::from_integer(BigInt::from(1))];
        for _ in 0..order {
            let num = rng.gen_range(0i64..=12);
            let den = rng.gen_range(1i64..=12);
            g.push(BigRational::new(BigInt::from(num), BigInt::from(den)));
        }
        let g = CoeffSeq::from_rationals(g);

        let product = cauchy_product(d1_exact.coeffs(), &g, order).unwrap();
        let kernel = DiagonalKernel::new(product, format!("round {round}")).unwrap();
        let recovered = cofactor_diagonal(&kernel, 1.0, order).unwrap();
        assert_eq!(recovered.coeffs, g, "round trip must be exact (round {round})");

        // Pointwise ratio against eval(g) within 1e-10 on the grid; the
        // product is evaluated at a deep truncation so the tail is
        // negligible at r = 0.95.
        let mut padded = g.to_floats();
        padded.resize(eval_order + 1, 0.0);
        let g_float = CoeffSeq::from_floats(padded);
        let product_float = cauchy_product(d1_float.coeffs(), &g_float, eval_order).unwrap();
        let product_kernel = DiagonalKernel::new(product_float, "float product").unwrap();
        let mut pointwise_sup = f64::NEG_INFINITY;
        let mut pointwise_inf = f64::INFINITY;
        for pt in grid.points() {
            let w = pt.to_complex();
            let ratio = product_kernel.metric_at(w).unwrap() / d1_float.metric_at(w).unwrap();
            let expect = g_float.metric_at(w).unwrap();
            assert!(
                (ratio - expect).abs() < 1e-10,
                "round {round}: ratio {ratio} vs eval {expect}"
            );
            pointwise_sup = pointwise_sup.max(ratio);
            pointwise_inf = pointwise_inf.min(ratio);
        }
        let extrema = metric_ratio_extrema(&product_kernel, &d1_float, &grid).unwrap();
        assert!((extrema.sup - pointwise_sup).abs() < 1e-12);
        assert!((extrema.inf - pointwise_inf).abs() < 1e-12);
    }

    finish("criterion 5: cofactor round-trip property", start, None);
}

#[test]
fn criterion_06_curvature_oracle() {
    let start = Instant::now();
    let order = 2048usize;
    let kernels = [
        DiagonalKernel::szego(order, Mode::Float),
        standard_coeffs(StandardFamily::Binomial { n: 2 }, order, Mode::Float).unwrap(),
        DiagonalKernel::dirichlet(order, Mode::Float),
        standard_coeffs(StandardFamily::DirichletAlpha { alpha: 0.5 }, order, Mode::Float).unwrap(),
    ];

    for kernel in &kernels {
        for ri in 1..=9 {
            let r = ri as f64 / 10.0;
            for ti in 0..16 {
                let theta = 2.0 * std::f64::consts::PI * ti as f64 / 16.0;
                let w = Complex64::from_polar(r, theta);
                let closed = curvature_diagonal(kernel.coeffs(), w.norm_sqr()).unwrap();
                let fd = curvature_fd(|z| kernel.metric_at(z), w, 1e-4).unwrap();
                assert!(
                    (closed - fd).abs() / closed.abs() < 1e-5,
                    "{}: r = {r}, theta = {theta}: {closed} vs {fd}",
                    kernel.label()
                );
            }
        }
    }

    let szego = &kernels[0];
    for ri in 1..=9 {
        let x = (ri as f64 / 10.0).powi(2);
        let closed = -1.0 / ((1.0 - x) * (1.0 - x));
        let series = curvature_diagonal(szego.coeffs(), x).unwrap();
        assert!((series - closed).abs() < 1e-8, "x = {x}: {series} vs {closed}");
    }

    finish("criterion 6: curvature oracle", start, None);
}

#[test]
fn criterion_07_multiplier_norms() {
    let start = Instant::now();

    for &alpha in &[0.5, 1.0] {
        for &m in &[1usize, 2, 10, 32] {
            let mut coeffs = vec![0i64; m + 1];
            coeffs[m] = 1;
            let p = PolyFactor::from_ints(&coeffs, Mode::Float);
            let brute = mult_norm_bruteforce(&p, alpha, 2000).unwrap();
            let expect = (m as f64 + 1.0).powf(alpha / 2.0);
            assert!(
                (brute.value - expect).abs() / expect < 1e-3,
                "m = {m}, alpha = {alpha}: {} vs {expect}",
                brute.value
            );
        }
    }

    for k in 0usize..=20 {
        let phi = MonomialSymbol::new(Scalar::Float((k as f64 + 1.0).powi(-4)), k.pow(5));
        let norm_sq = monomial_mult_norm(&phi, 1.0).unwrap().powi(2);
        let bound = (k as f64 + 1.0).powi(-8) + (k as f64 + 1.0).powi(-3);
        assert!(norm_sq <= bound + 1e-18, "k = {k}: {norm_sq} > {bound}");
    }

    finish("criterion 7: multiplier norms", start, None);
}

#[test]
fn criterion_08_shields_exclusion() {
    let start = Instant::now();
    let n = 100_000usize;
    let dirichlet = weights_from_kernel(&DiagonalKernel::dirichlet(n, Mode::Float));
    let hardy = weights_from_kernel(&DiagonalKernel::szego(n, Mode::Float));

    let report = shields_ratio_extrema(&dirichlet, &hardy, n).unwrap();
    assert!(report.sup_ratio >= 10.0, "sup = {}", report.sup_ratio);
    match report.verdict(0.1, 10.0) {
        ShieldsVerdict::SimilarityExcluded { ratio, .. } => assert!(ratio >= 10.0),
        v => panic!("expected certified exclusion at C_2 = 10, got {v:?}"),
    }

    let same = shields_ratio_extrema(&dirichlet, &dirichlet, n).unwrap();
    assert_eq!((same.inf_ratio, same.sup_ratio), (1.0, 1.0));

    finish("criterion 8: window-ratio exclusion", start, None);
}

#[test]
fn criterion_09_cubic_banded_pipeline() {
    let start = Instant::now();

    let order = 60usize;
    let kernel = cases::cubic_banded_kernel(order, Mode::Exact).unwrap();
    for m in 0..=order {
        for n in 0..=order {
            assert_eq!(kernel.get(m, n), kernel.get(n, m), "Hermitian symmetry at ({m},{n})");
        }
    }

    let d1 = DiagonalKernel::dirichlet(order, Mode::Exact);
    let cofactor = bivariate_cofactor(&kernel, &d1, order).unwrap();
    assert_eq!(cofactor.get(0, 0), Scalar::from_int(1));
    assert_eq!(cofactor.get(1, 1), q(1, 8));

    let cofactor_float = cofactor.to_float_mode();
    assert!(psd_check(&cofactor_float, 1e-9).is_positive());

    let frame = frame_from_gram(&cofactor_float, 1e-9).unwrap();
    assert!(frame.residual <= 1e-9, "reconstruction residual {}", frame.residual);

    let ratio_order = 200usize;
    let deep = cases::cubic_banded_kernel(ratio_order, Mode::Float).unwrap();
    let d1_deep = DiagonalKernel::dirichlet(ratio_order, Mode::Float);
    let grid = GridSpec::polar(16, 0.99, 16).unwrap();
    let ratio = metric_ratio_extrema(&deep, &d1_deep, &grid).unwrap();
    assert!(
        ratio.inf >= 0.9 && ratio.sup <= 4.0,
        "ratio extrema ({}, {}) escape [0.9, 4]",
        ratio.inf,
        ratio.sup
    );

    finish("criterion 9: cubic banded kernel pipeline", start, None);
}

#[test]
fn criterion_10_hypercontraction_divergence() {
    let start = Instant::now();
    let order = 200usize;
    let kernel = DiagonalKernel::dirichlet(order, Mode::Float);

    for s in 1..=100usize {
        let pn = power_norm(&kernel, s, order).unwrap();
        assert!(
            (pn.norm * pn.norm - (s as f64 + 1.0)).abs() < 1e-12,
            "||T^{s}||^2 = {} vs {}",
            pn.norm * pn.norm,
            s + 1
        );
    }

    let report = hypercontraction_sum(&kernel, 1.0, 100, order).unwrap();
    assert!((report.partial - 100.0).abs() < 1e-8, "partial = {}", report.partial);
    assert!(report.diverging);

    finish("criterion 10: hypercontraction divergence", start, None);
}
