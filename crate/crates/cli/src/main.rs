//! Command-line front end: pipeline subcommands wrapping single library
//! operations, and a `verify` registry reproducing the worked cases
//! end to end.
//!
//! Exit codes: 0 all checks pass, 1 claim failure, 2 usage or input
//! error. Exact-mode runs are bit-for-bit reproducible; float runs use
//! fixed summation orders, so identical flag sets give identical bytes.

mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use shiftbundle::cases;
use shiftbundle::geometry::{
    jet_condition_check, jet_metric, metric_ratio_extrema, curvature_diagonal, GridSpec,
    HermitianMetric,
};
use shiftbundle::io::{grid_csv, kernel_from_json, kernel_to_json, KernelInput};
use shiftbundle::kernels::{
    bivariate_cofactor, frame_from_gram, psd_check, standard_coeffs, BivariateKernel,
    DiagonalKernel, PolyFactor, PsdVerdict, StandardFamily,
};
use shiftbundle::multiplier::{
    frame_summability_check, monomial_mult_norm, mult_norm_bruteforce, poly_mult_norm_upper,
    MonomialSymbol, POWER_ITERATION_MAX, POWER_ITERATION_TOL,
};
use shiftbundle::shift::{
    cofactor_diagonal, defect_coeffs, mueller_diagonal_check,
    shields_ratio_extrema, weights_from_kernel, MuellerVerdict, ShieldsVerdict,
    DIVERGENCE_FLOOR, FLOAT_SIGN_TOL,
};
use shiftbundle::{Mode, Scalar};

#[derive(Parser)]
#[command(name = "shiftbundle", version, about = "Similarity diagnostics for weighted backward shifts on diagonal kernel spaces")]
struct Cli {
    /// Print the table of default tolerances and grids, then exit.
    #[arg(long, global = true)]
    show_config: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Truncation order N.
    #[arg(long, default_value_t = 64)]
    order: usize,

    /// Arithmetic mode: exact | float.
    #[arg(long, default_value = "float")]
    mode: ModeArg,

    /// Output format: json | csv.
    #[arg(long, default_value = "json")]
    output: OutputFormat,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

impl FromStr for ModeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(ModeArg::Exact),
            "float" => Ok(ModeArg::Float),
            other => Err(format!("mode must be exact or float, got {other:?}")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("output must be json or csv, got {other:?}")),
        }
    }
}

#[derive(Clone, Copy)]
struct GridArg {
    radii: usize,
    angles: usize,
}

impl FromStr for GridArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (r, t) = s
            .split_once(',')
            .ok_or_else(|| format!("grid must be RADII,ANGLES, got {s:?}"))?;
        Ok(GridArg {
            radii: r.trim().parse().map_err(|e| format!("grid radii: {e}"))?,
            angles: t.trim().parse().map_err(|e| format!("grid angles: {e}"))?,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Construct a kernel and emit it in the JSON interchange schema.
    Kernel {
        /// Kernel spec: szego | hardy | dirichlet | dalpha:A | hk:K |
        /// mn:N | quintic-product | harmonic-square | poly-augmented |
        /// cubic-banded | quadratic-gram | @FILE.json
        #[arg(long)]
        kernel: String,
        /// Also run the positivity check on the coefficient matrix.
        #[arg(long)]
        psd: bool,
        /// Positivity tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Weight sequence of the backward shift realized by a kernel.
    Weights {
        #[arg(long)]
        kernel: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Window-ratio extrema of two weight sequences.
    Shields {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Lower similarity bound C_1.
        #[arg(long, default_value_t = 0.1)]
        c1: f64,
        /// Upper similarity bound C_2.
        #[arg(long, default_value_t = 10.0)]
        c2: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Defect coefficient pair b, c for an exponent alpha.
    Defect {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Diagonal hypercontraction deficiencies of a kernel.
    Mueller {
        #[arg(long)]
        kernel: String,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Cofactor of a kernel over the D_alpha base: diagonal kernels get
    /// the sequence route, matrix kernels the bivariate deconvolution.
    Cofactor {
        #[arg(long)]
        kernel: String,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Curvature of the line-bundle metric of a diagonal kernel.
    Curvature {
        #[arg(long)]
        kernel: String,
        /// Radial coordinate x = |w|^2; omit to sweep a grid.
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, default_value = "24,64")]
        grid: GridArg,
        #[arg(long, default_value_t = 0.999)]
        rmax: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Jet metric at a point, or the first-jet condition over a grid.
    Jet {
        #[arg(long)]
        kernel: String,
        /// Jet order k.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Evaluation point "re,im"; omit to run the grid condition.
        #[arg(long)]
        w: Option<String>,
        #[arg(long, default_value = "24,64")]
        grid: GridArg,
        #[arg(long, default_value_t = 0.999)]
        rmax: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Pointwise metric-ratio extrema of two kernels over a grid.
    Ratio {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "24,64")]
        grid: GridArg,
        #[arg(long, default_value_t = 0.999)]
        rmax: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Multiplier norms on D_alpha: exact monomial norm, triangle upper
    /// bound, and the truncated-operator oracle.
    Multnorm {
        /// Monomial degree (with --coeff), or use --poly.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        coeff: f64,
        /// Dense polynomial coefficients "c0,c1,...".
        #[arg(long)]
        poly: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Truncation for the brute-force oracle; 0 skips it.
        #[arg(long, default_value_t = 2000)]
        bruteforce: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Frame summability certificate, or frame extraction from a Gram
    /// coefficient matrix.
    Frame {
        /// Built-in family: quintic | harmonic.
        #[arg(long)]
        family: Option<String>,
        /// Number of explicit components.
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Lower-bound target delta.
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Extract a frame from this Gram kernel instead: @FILE.json or
        /// a kernel token.
        #[arg(long)]
        gram: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value = "24,64")]
        grid: GridArg,
        #[arg(long, default_value_t = 0.999)]
        rmax: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Re-run the checks of a worked verification case.
    Verify {
        /// Case id: ex4.6 | ex4.91 | ex4.10 | ex4.9
        id: String,
        /// Override the default truncation order of the case.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.show_config {
        println!("{}", serde_json::to_string_pretty(&config_table()).expect("static table"));
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(2);
    };
    match run(command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn config_table() -> serde_json::Value {
    json!({
        "power_iteration": { "tol": POWER_ITERATION_TOL, "max_iterations": POWER_ITERATION_MAX },
        "divergence_floor": DIVERGENCE_FLOOR,
        "float_sign_tol": FLOAT_SIGN_TOL,
        "frame_rank_tol": "1e-12 * max diagonal",
        "psd_tol_default": 1e-9,
        "fd_step_default": 1e-4,
        "default_grid": { "radii": 24, "r_max": 0.999, "angles": 64 },
        "shields_bounds_default": { "c1": 0.1, "c2": 10.0 },
        "verify_default_orders": { "ex4.6": 202, "ex4.91": 100000, "ex4.10": 64, "ex4.9": 60 },
        "tail_bound_policy": "geometric tail bounds use caller-supplied coefficient bounds and are flagged in reports"
    })
}

fn emit(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content.as_bytes())?,
        None => println!("{content}"),
    }
    Ok(())
}

/// Parse a kernel token into a diagonal or bivariate kernel.
fn parse_kernel(spec: &str, order: usize, mode: Mode) -> anyhow::Result<KernelInput> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("reading {path}: {e}"))?;
        return Ok(kernel_from_json(&text)?);
    }
    let diagonal = |k: DiagonalKernel| Ok(KernelInput::Diagonal(k));
    match spec {
        "szego" | "hardy" => diagonal(DiagonalKernel::szego(order, mode)),
        "dirichlet" => diagonal(DiagonalKernel::dirichlet(order, mode)),
        "quintic-product" => diagonal(cases::quintic_product(order, mode)?),
        "harmonic-square" => {
            if mode == Mode::Exact {
                diagonal(cases::harmonic_square_product_exact(order)?)
            } else {
                diagonal(cases::harmonic_square_product(order))
            }
        }
        "poly-augmented" => Ok(KernelInput::Bivariate(cases::poly_augmented_dirichlet(order, mode)?)),
        "cubic-banded" => Ok(KernelInput::Bivariate(cases::cubic_banded_kernel(order, mode)?)),
        "quadratic-gram" => Ok(KernelInput::Bivariate(cases::unit_quadratic_gram(mode))),
        other => {
            if let Some(a) = other.strip_prefix("dalpha:") {
                let alpha: f64 = a.parse().map_err(|e| anyhow::anyhow!("dalpha: {e}"))?;
                diagonal(standard_coeffs(StandardFamily::DirichletAlpha { alpha }, order, mode)?)
            } else if let Some(k) = other.strip_prefix("hk:") {
                let k: f64 = k.parse().map_err(|e| anyhow::anyhow!("hk: {e}"))?;
                diagonal(standard_coeffs(StandardFamily::PowerWeight { k }, order, mode)?)
            } else if let Some(n) = other.strip_prefix("mn:") {
                let n: u32 = n.parse().map_err(|e| anyhow::anyhow!("mn: {e}"))?;
                diagonal(standard_coeffs(StandardFamily::Binomial { n }, order, mode)?)
            } else {
                anyhow::bail!(
                    "unknown kernel {other:?}; expected szego|hardy|dirichlet|dalpha:A|hk:K|mn:N|\
                     quintic-product|harmonic-square|poly-augmented|cubic-banded|quadratic-gram|@FILE"
                )
            }
        }
    }
}

fn parse_diagonal(spec: &str, order: usize, mode: Mode) -> anyhow::Result<DiagonalKernel> {
    match parse_kernel(spec, order, mode)? {
        KernelInput::Diagonal(k) => Ok(k),
        KernelInput::Bivariate(_) => {
            anyhow::bail!("kernel {spec:?} is not diagonal; this operation needs a diagonal kernel")
        }
    }
}

fn scalar_strings(seq: &shiftbundle::CoeffSeq) -> Vec<String> {
    (0..=seq.order()).map(|n| seq.get(n).to_string()).collect()
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Kernel { kernel, psd, tolerance, common } => {
            let k = parse_kernel(&kernel, common.order, common.mode.into())?;
            let mut value = kernel_to_json(&k);
            if psd {
                let biv = match &k {
                    KernelInput::Bivariate(b) => b.clone(),
                    KernelInput::Diagonal(d) => BivariateKernel::from_diagonal(d),
                };
                let verdict = match psd_check(&biv, tolerance) {
                    PsdVerdict::Positive => json!({ "verdict": "positive" }),
                    PsdVerdict::Indefinite { witness } => {
                        json!({ "verdict": "indefinite", "witness": witness })
                    }
                };
                value["psd_check"] = verdict;
            }
            emit(&common.out, &serde_json::to_string_pretty(&value)?)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Weights { kernel, common } => {
            let k = parse_diagonal(&kernel, common.order, common.mode.into())?;
            let w = weights_from_kernel(&k);
            let report = json!({
                "source": w.source(),
                "count": w.len(),
                "nonincreasing": w.is_nonincreasing(),
                "weights": w.as_slice(),
            });
            emit(&common.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Shields { a, b, c1, c2, common } => {
            let ka = parse_diagonal(&a, common.order, common.mode.into())?;
            let kb = parse_diagonal(&b, common.order, common.mode.into())?;
            let wa = weights_from_kernel(&ka);
            let wb = weights_from_kernel(&kb);
            let r = shields_ratio_extrema(&wa, &wb, common.order)?;
            let (verdict, witness) = match r.verdict(c1, c2) {
                ShieldsVerdict::ConsistentWithSimilarity => {
                    ("consistent with similarity", r.sup_window)
                }
                ShieldsVerdict::SimilarityExcluded { witness_k, witness_l, .. } => {
                    ("similarity excluded", (witness_k, witness_l))
                }
            };
            let report = json!({
                "inf": r.inf_ratio,
                "sup": r.sup_ratio,
                "witness_k": witness.0,
                "witness_l": witness.1,
                "horizon": r.horizon,
                "verdict": verdict,
                "c1": c1,
                "c2": c2,
            });
            emit(&common.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Defect { alpha, common } => {
            let d = defect_coeffs(alpha, common.order, common.mode.into())?;
            let report = json!({
                "alpha": alpha,
                "order": common.order,
                "mode": Mode::from(common.mode).to_string(),
                "b": scalar_strings(&d.b),
                "c": scalar_strings(&d.c),
                "convolution_residual": d.convolution_residual()?,
            });
            emit(&common.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Mueller { kernel, alpha, common } => {
            let k = parse_diagonal(&kernel, common.order, common.mode.into())?;
            let r = mueller_diagonal_check(&k, alpha, common.order)?;
            let verdict = match r.verdict {
                MuellerVerdict::AllNonNegative => json!("all non-negative"),
                MuellerVerdict::ViolationAt(n) => json!({ "violation_at": n }),
            };
            let report = json!({
                "kernel": k.label(),
                "alpha": alpha,
                "deltas": scalar_strings(&r.deltas),
                "verdict": verdict,
                "weights_nonincreasing": r.weights_nonincreasing,
            });
            emit(&common.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Cofactor { kernel, alpha, common } => {
            let report = match parse_kernel(&kernel, common.order, common.mode.into())? {
                KernelInput::Diagonal(k) => {
                    let c = cofactor_diagonal(&k, alpha, common.order)?;
                    json!({
                        "kernel": k.label(),
                        "alpha": alpha,
                        "route": "diagonal",
                        "cofactor": scalar_strings(&c.coeffs),
                        "normalized": scalar_strings(&c.normalized),
                        "first_negative": c.first_negative,
                        "note": c.first_negative.map(|n| format!(
                            "coefficient {n} is negative: defect not positive -- tensor splitting over D_alpha fails at this order"
                        )),
                    })
                }
                KernelInput::Bivariate(k) => {
                    if alpha != 1.0 && Mode::from(common.mode) == Mode::Exact {
                        anyhow::bail!("bivariate cofactor in exact mode requires alpha = 1");
                    }
                    let base = standard_coeffs(
                        StandardFamily::DirichletAlpha { alpha },
                        common.order,
                        common.mode.into(),
                    )?;
                    let g = bivariate_cofactor(&k, &base, common.order.min(k.order()))?;
                    json!({
                        "alpha": alpha,
                        "route": "bivariate",
                        "cofactor": kernel_to_json(&KernelInput::Bivariate(g)),
                    })
                }
            };
            emit(&common.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Curvature { kernel, x, grid, rmax, common } => {
            let k = parse_diagonal(&kernel, common.order, common.mode.into())?;
            match x {
                Some(x) => {
                    let value = curvature_diagonal(k.coeffs(), x)?;
                    let report = json!({ "kernel": k.label(), "x": x, "curvature": value });
                    emit(&common.out, &serde_json::to_string_pretty(&report)?)?;
                }
                None => {
                    let spec = GridSpec::polar(grid.radii, rmax, grid.angles)?;
                    let rows = spec
                        .points()
                        .map(|pt| {
                            curvature_diagonal(k.coeffs(), pt.r * pt.r).map(|v| (pt.r, pt.theta, v))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    match common.output {
                        OutputFormat::Csv => emit(&common.out, grid_csv(rows).trim_end())?,
                        OutputFormat::Json => {
                            let report = json!({
                                "kernel": k.label(),
                                "grid": { "radii": grid.radii, "r_max": rmax, "angles": grid.angles },
                                "values": rows.iter().map(|(r, t, v)| json!([r, t, v])).collect::<Vec<_>>(),
                            });
                            emit(&common.out, &serde_json::to_string_pretty(&report)?)?;
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Jet { kernel, k, w, grid, rmax, common } => {
            let kernel = parse_kernel(&kernel, common.order, common.mode.into())?;
            let metric: &dyn HermitianMetric = match &kernel {
                KernelInput::Diagonal(d) => d,
                KernelInput::Bivariate(b) => b,
            };
            match w {
                Some(wtext) => {
                    let (re, im) = wtext
                        .split_once(',')
                        .ok_or_else(|| anyhow::anyhow!("point must be RE,IM, got {wtext:?}"))?;
                    let w = Complex64::new(re.trim().parse()?, im.trim().parse()?);
                    let jm = jet_metric_dyn(metric, w, k)?;
                    let rows: Vec<Vec<serde_json::Value>> = (0..=k)
                        .map(|i| {
                            (0..=k)
                                .map(|j| {
                                    let e = jm.matrix[(i, j)];
                                    json!([e.re, e.im])
                                })
                                .collect()
                        })
                        .collect();
                    let report = json!({
                        "k": k,
                        "point": [w.re, w.im],
                        "matrix_re_im": rows,
                        "trace": jm.trace(),
                        "hermitian_residual": jm.hermitian_residual(),
                        "min_eigenvalue": jm.eigenvalues().first(),
                    });
                    emit(&common.out, &serde_json::to_string_pretty(&report)?)?;
                }
                None => {
                    let spec = GridSpec::polar(grid.radii, rmax, grid.angles)?;
                    let report = jet_condition_check_dyn(metric, &spec)?;
                    emit(&common.out, &serde_json::to_string_pretty(&report)?)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Ratio { a, b, grid, rmax, common } => {
            let ka = parse_kernel(&a, common.order, common.mode.into())?;
            let kb = parse_diagonal(&b, common.order, common.mode.into())?;
            let spec = GridSpec::polar(grid.radii, rmax, grid.angles)?;
            let report = match &ka {
                KernelInput::Diagonal(d) => metric_ratio_extrema(d, &kb, &spec)?,
                KernelInput::Bivariate(bv) => metric_ratio_extrema(bv, &kb, &spec)?,
            };
            emit(&common.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Multnorm { degree, coeff, poly, alpha, bruteforce, common } => {
            let report = match (degree, poly) {
                (Some(m), None) => {
                    let phi = MonomialSymbol::new(Scalar::Float(coeff), m);
                    let exact = monomial_mult_norm(&phi, alpha)?;
                    let brute = if bruteforce > 0 && m <= bruteforce {
                        let mut coeffs = vec![0.0; m + 1];
                        coeffs[m] = coeff;
                        Some(mult_norm_bruteforce(&PolyFactor::from_floats(coeffs), alpha, bruteforce)?)
                    } else {
                        None
                    };
                    json!({
                        "symbol": format!("{coeff} z^{m}"),
                        "alpha": alpha,
                        "monomial_norm": exact,
                        "bruteforce": brute,
                    })
                }
                (None, Some(ptext)) => {
                    let coeffs: Vec<f64> = ptext
                        .split(',')
                        .map(|c| c.trim().parse::<f64>())
                        .collect::<Result<_, _>>()?;
                    let p = PolyFactor::from_floats(coeffs);
                    let upper = poly_mult_norm_upper(&p, alpha)?;
                    let brute = if bruteforce > 0 {
                        Some(mult_norm_bruteforce(&p, alpha, bruteforce)?)
                    } else {
                        None
                    };
                    json!({
                        "degree": p.degree(),
                        "alpha": alpha,
                        "triangle_upper_bound": upper,
                        "bruteforce": brute,
                    })
                }
                _ => anyhow::bail!("provide exactly one of --degree or --poly"),
            };
            emit(&common.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Frame { family, count, alpha, delta, gram, tolerance, grid, rmax, common } => {
            let report = match (family, gram) {
                (Some(name), None) => {
                    let fam = match name.as_str() {
                        "quintic" => cases::quintic_frame_family(count),
                        "harmonic" => cases::harmonic_frame_family(count),
                        other => anyhow::bail!("unknown family {other:?}; expected quintic|harmonic"),
                    };
                    let spec = GridSpec::polar(grid.radii, rmax, grid.angles)?;
                    let r = frame_summability_check(&fam, alpha, &spec, delta)?;
                    serde_json::to_value(&r)?
                }
                (None, Some(gtext)) => {
                    let k = parse_kernel(&gtext, common.order, common.mode.into())?;
                    let biv = match k {
                        KernelInput::Bivariate(b) => b.to_float_mode(),
                        KernelInput::Diagonal(d) => {
                            BivariateKernel::from_diagonal(&d.to_float_mode())
                        }
                    };
                    let f = frame_from_gram(&biv, tolerance)?;
                    json!({
                        "rank": f.rank,
                        "reconstruction_residual": f.residual,
                        "components": f.components.iter().map(|c| c.coeffs().to_floats()).collect::<Vec<_>>(),
                    })
                }
                _ => anyhow::bail!("provide exactly one of --family or --gram"),
            };
            emit(&common.out, &serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify { id, order, out } => {
            let report = verify::run_case(&id, order)?;
            let all_pass = report.claims.iter().all(|c| c.pass);
            emit(&out, &serde_json::to_string_pretty(&report)?)?;
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn jet_metric_dyn(
    metric: &dyn HermitianMetric,
    w: Complex64,
    k: usize,
) -> anyhow::Result<shiftbundle::geometry::JetMetric> {
    struct Dyn<'a>(&'a dyn HermitianMetric);
    impl HermitianMetric for Dyn<'_> {
        fn jet_entry(&self, i: usize, j: usize, w: Complex64) -> shiftbundle::Result<Complex64> {
            self.0.jet_entry(i, j, w)
        }
    }
    Ok(jet_metric(&Dyn(metric), w, k)?)
}

fn jet_condition_check_dyn(
    metric: &dyn HermitianMetric,
    grid: &GridSpec,
) -> anyhow::Result<shiftbundle::geometry::JetConditionReport> {
    struct Dyn<'a>(&'a dyn HermitianMetric);
    impl HermitianMetric for Dyn<'_> {
        fn jet_entry(&self, i: usize, j: usize, w: Complex64) -> shiftbundle::Result<Complex64> {
            self.0.jet_entry(i, j, w)
        }
    }
    Ok(jet_condition_check(&Dyn(metric), grid)?)
}
