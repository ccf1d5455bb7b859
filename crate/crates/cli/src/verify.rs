//! The worked-case verification registry behind `shiftbundle verify`.
//!
//! Each case runs its full check list and reports one claim per line:
//! label, expected vs computed, provenance (pinned value vs derived
//! oracle), tolerance (0 for exact claims), and pass/fail.

use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use shiftbundle::cases;
use shiftbundle::geometry::{
    jet_condition_check, jet_metric, metric_ratio_extrema, GridSpec, JetConditionVerdict,
};
use shiftbundle::kernels::{bivariate_cofactor, frame_from_gram, psd_check, DiagonalKernel};
use shiftbundle::multiplier::frame_summability_check;
use shiftbundle::shift::{
    cofactor_diagonal, mueller_diagonal_check, weights_from_kernel, MuellerVerdict,
};
use shiftbundle::{Mode, Scalar};

#[derive(Debug, Serialize)]
pub struct Claim {
    pub label: String,
    pub expected: String,
    pub computed: String,
    /// "paper" for values pinned from the source material, "derived"
    /// for independently computed oracles, "trivial" for definitional
    /// identities.
    pub provenance: &'static str,
    pub tolerance: f64,
    pub mode: String,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct ExampleReport {
    pub id: String,
    pub order: usize,
    pub claims: Vec<Claim>,
    pub wall_time_ms: u128,
}

fn exact_claim(label: &str, expected: &Scalar, computed: &Scalar, provenance: &'static str) -> Claim {
    Claim {
        label: label.to_string(),
        expected: expected.to_string(),
        computed: computed.to_string(),
        provenance,
        tolerance: 0.0,
        mode: "exact".into(),
        pass: expected == computed,
    }
}

fn float_claim(
    label: &str,
    expected: f64,
    computed: f64,
    tolerance: f64,
    provenance: &'static str,
) -> Claim {
    Claim {
        label: label.to_string(),
        expected: format!("{expected}"),
        computed: format!("{computed}"),
        provenance,
        tolerance,
        mode: "float".into(),
        pass: (computed - expected).abs() <= tolerance,
    }
}

fn bound_claim(
    label: &str,
    bound_text: &str,
    computed: f64,
    pass: bool,
    provenance: &'static str,
) -> Claim {
    Claim {
        label: label.to_string(),
        expected: bound_text.to_string(),
        computed: format!("{computed}"),
        provenance,
        tolerance: 0.0,
        mode: "float".into(),
        pass,
    }
}

pub fn run_case(id: &str, order: Option<usize>) -> anyhow::Result<ExampleReport> {
    let start = Instant::now();
    let (order, claims) = match id {
        "ex4.10" => {
            let order = order.unwrap_or(64);
            (order, quintic_product_case(order)?)
        }
        "ex4.91" => {
            let order = order.unwrap_or(100_000);
            (order, harmonic_square_case(order)?)
        }
        "ex4.6" => {
            let order = order.unwrap_or(202);
            (order, poly_augmented_case(order)?)
        }
        "ex4.9" => {
            let order = order.unwrap_or(60);
            (order, cubic_banded_case(order)?)
        }
        other => anyhow::bail!("unknown case id {other:?}; expected ex4.6|ex4.91|ex4.10|ex4.9"),
    };
    Ok(ExampleReport {
        id: id.to_string(),
        order,
        claims,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

fn quintic_product_case(order: usize) -> anyhow::Result<Vec<Claim>> {
    let mut claims = Vec::new();
    let kernel = cases::quintic_product(order, Mode::Exact)?;

    claims.push(exact_claim("a_1", &Scalar::ratio(129, 256), &kernel.coeffs().get(1), "paper"));
    claims.push(exact_claim("a_2", &Scalar::ratio(515, 1536), &kernel.coeffs().get(2), "paper"));

    let mueller = mueller_diagonal_check(&kernel, 1.0, order)?;
    claims.push(exact_claim(
        "diagonal deficiency d'_2",
        &Scalar::ratio(-1, 4),
        &mueller.deltas.get(2),
        "paper",
    ));
    claims.push(Claim {
        label: "deficiency verdict".into(),
        expected: "violation at n = 2".into(),
        computed: format!("{:?}", mueller.verdict),
        provenance: "paper",
        tolerance: 0.0,
        mode: "exact".into(),
        pass: mueller.verdict == MuellerVerdict::ViolationAt(2),
    });

    let cof = cofactor_diagonal(&kernel, 1.0, order)?;
    let expected_factor = cases::quintic_factor(order, Mode::Exact);
    claims.push(Claim {
        label: format!("cofactor recovers quintic factor through order {order}"),
        expected: "g supported on fifth powers with g_(j^5) = 1/(j+1)^8".into(),
        computed: if cof.coeffs == expected_factor { "identical".into() } else { "mismatch".into() },
        provenance: "paper",
        tolerance: 0.0,
        mode: "exact".into(),
        pass: cof.coeffs == expected_factor,
    });

    let family = cases::quintic_frame_family(20);
    let summability = frame_summability_check(&family, 1.0, &GridSpec::default_disk(), 1.0)?;
    claims.push(bound_claim(
        "frame lower bound",
        ">= 1",
        summability.lower,
        summability.lower >= 1.0,
        "paper",
    ));
    let pi_sq_third = std::f64::consts::PI.powi(2) / 3.0;
    claims.push(bound_claim(
        "frame upper bound",
        "<= pi^2/3 + 1e-6",
        summability.upper,
        summability.upper <= pi_sq_third + 1e-6,
        "paper",
    ));
    Ok(claims)
}

fn harmonic_square_case(order: usize) -> anyhow::Result<Vec<Claim>> {
    let mut claims = Vec::new();
    let kernel = cases::harmonic_square_product(order);
    let coeffs = kernel.coeffs().floats().expect("float mode");

    let limit = std::f64::consts::PI.powi(2) / 6.0;
    claims.push(float_claim(
        &format!("(n+1) a_n at n = {order}"),
        limit,
        (order as f64 + 1.0) * coeffs[order],
        2e-3,
        "paper",
    ));

    let min_scaled = coeffs
        .iter()
        .enumerate()
        .map(|(n, &a)| (n as f64 + 1.0) * a)
        .fold(f64::INFINITY, f64::min);
    claims.push(bound_claim(
        "min over n of (n+1) a_n",
        ">= 1",
        min_scaled,
        min_scaled >= 1.0,
        "paper",
    ));

    // Cross-route check of the closed form against the direct
    // convolution at a prefix order.
    let cross = order.min(200);
    let exact_route = cases::harmonic_square_product_exact(cross)?;
    let mut worst = 0.0_f64;
    for n in 0..=cross {
        let diff = (coeffs[n] - exact_route.coeffs().coeff_f64(n)).abs();
        worst = worst.max(diff);
    }
    claims.push(bound_claim(
        &format!("closed form vs exact convolution through order {cross}"),
        "max abs deviation <= 1e-13",
        worst,
        worst <= 1e-13,
        "derived",
    ));

    // Full-prefix window ratios against the Dirichlet weights never
    // exceed 1 (same content as the lower bound, through the weights
    // route).
    let weights = weights_from_kernel(&kernel);
    let dirichlet = weights_from_kernel(&DiagonalKernel::dirichlet(order, Mode::Float));
    let mut prefix = 0.0_f64;
    let mut max_ratio = f64::NEG_INFINITY;
    for l in 1..=weights.len() {
        prefix += weights.get(l).ln() - dirichlet.get(l).ln();
        max_ratio = max_ratio.max(prefix.exp());
    }
    claims.push(bound_claim(
        "max full-prefix weight ratio vs Dirichlet",
        "<= 1",
        max_ratio,
        max_ratio <= 1.0 + 1e-12,
        "derived",
    ));
    Ok(claims)
}

fn poly_augmented_case(order: usize) -> anyhow::Result<Vec<Claim>> {
    let mut claims = Vec::new();

    let augmented = cases::poly_augmented_dirichlet(order, Mode::Exact)?;
    let expanded = cases::poly_augmented_dirichlet_expanded(order, Mode::Exact)?;
    claims.push(Claim {
        label: format!("banded closed form matches augmentation entrywise to order {order}"),
        expected: "identical coefficient matrices".into(),
        computed: if augmented == expanded { "identical".into() } else { "mismatch".into() },
        provenance: "paper",
        tolerance: 0.0,
        mode: "exact".into(),
        pass: augmented == expanded,
    });

    let gram = cases::unit_quadratic_gram(Mode::Float);
    let jet0 = jet_metric(&gram, Complex64::new(0.0, 0.0), 1)?;
    let expect = [[2.0, 1.0], [1.0, 1.0]];
    let mut jet_ok = true;
    for i in 0..2 {
        for j in 0..2 {
            jet_ok &= (jet0.matrix[(i, j)].re - expect[i][j]).abs() < 1e-14
                && jet0.matrix[(i, j)].im.abs() < 1e-14;
        }
    }
    claims.push(Claim {
        label: "first-jet matrix of the cofactor at w = 0".into(),
        expected: "[[2, 1], [1, 1]]".into(),
        computed: format!(
            "[[{:.1}, {:.1}], [{:.1}, {:.1}]]",
            jet0.matrix[(0, 0)].re,
            jet0.matrix[(0, 1)].re,
            jet0.matrix[(1, 0)].re,
            jet0.matrix[(1, 1)].re
        ),
        provenance: "derived",
        tolerance: 1e-14,
        mode: "float".into(),
        pass: jet_ok,
    });

    let grid = GridSpec::polar(48, 0.999, 64)?;
    let report = jet_condition_check(&gram, &grid)?;
    claims.push(bound_claim(
        "inf of the cofactor metric on the grid",
        ">= 1",
        report.metric.inf,
        report.metric.inf >= 1.0,
        "paper",
    ));
    claims.push(bound_claim(
        "sup of the first-jet trace on the grid",
        "<= 19",
        report.trace.sup,
        report.trace.sup <= 19.0,
        "paper",
    ));
    claims.push(Claim {
        label: "strict sandwich h < trace on the grid".into(),
        expected: "satisfied on grid".into(),
        computed: format!("{:?}", report.verdict),
        provenance: "paper",
        tolerance: 0.0,
        mode: "float".into(),
        pass: report.verdict == JetConditionVerdict::SatisfiedOnGrid,
    });
    Ok(claims)
}

fn cubic_banded_case(order: usize) -> anyhow::Result<Vec<Claim>> {
    let mut claims = Vec::new();
    let kernel = cases::cubic_banded_kernel(order, Mode::Exact)?;

    // Hermitian symmetry is enforced at construction; record it as a
    // claim since the case is property-based.
    claims.push(Claim {
        label: "coefficient matrix is Hermitian".into(),
        expected: "construction succeeds with symmetric bands".into(),
        computed: "constructed".into(),
        provenance: "trivial",
        tolerance: 0.0,
        mode: "exact".into(),
        pass: true,
    });

    let d1 = DiagonalKernel::dirichlet(order, Mode::Exact);
    let cofactor = bivariate_cofactor(&kernel, &d1, order)?;
    claims.push(exact_claim("cofactor g_(0,0)", &Scalar::from_int(1), &cofactor.get(0, 0), "derived"));
    claims.push(exact_claim("cofactor g_(1,1)", &Scalar::ratio(1, 8), &cofactor.get(1, 1), "derived"));

    let float_cof = cofactor.to_float_mode();
    let psd = psd_check(&float_cof, 1e-9);
    claims.push(Claim {
        label: format!("cofactor positive semidefinite at order {order} (tol 1e-9)"),
        expected: "positive".into(),
        computed: format!("{psd:?}"),
        provenance: "derived",
        tolerance: 1e-9,
        mode: "float".into(),
        pass: psd.is_positive(),
    });

    let frame = frame_from_gram(&float_cof, 1e-9)?;
    claims.push(bound_claim(
        "frame reconstruction residual on the test grid",
        "<= 1e-9",
        frame.residual,
        frame.residual <= 1e-9,
        "derived",
    ));

    let ratio_order = 200.max(order);
    let deep = cases::cubic_banded_kernel(ratio_order, Mode::Float)?;
    let d1_deep = DiagonalKernel::dirichlet(ratio_order, Mode::Float);
    let grid = GridSpec::polar(16, 0.99, 16)?;
    let ratio = metric_ratio_extrema(&deep, &d1_deep, &grid)?;
    claims.push(bound_claim(
        "metric ratio inf on grid r <= 0.99",
        ">= 0.9",
        ratio.inf,
        ratio.inf >= 0.9,
        "derived",
    ));
    claims.push(bound_claim(
        "metric ratio sup on grid r <= 0.99",
        "<= 4",
        ratio.sup,
        ratio.sup <= 4.0,
        "derived",
    ));
    Ok(claims)
}
