//! Diagnostics for the weighted backward shift realized by a diagonal
//! kernel: weight sequences, operator power norms, window-ratio
//! (Shields-type) similarity probes, hypercontraction sums, defect
//! coefficient recursions, and diagonal cofactor extraction.
//!
//! Window-ratio checks over a finite horizon are necessary-condition
//! probes: a bounded finite report is only "consistent with similarity",
//! while an exceeded bound conclusively excludes it. Divergence flags on
//! partial sums are heuristics and are reported as such — finite data
//! carries no certificate.

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{standard_coeffs, DiagonalKernel, StandardFamily};
use crate::scalar::Mode;
use crate::series::{cauchy_product, series_reciprocal, CoeffSeq};

/// Heuristic floor for the divergence flag on partial sums: the flag is
/// raised when the last ten summands all stay above this value.
pub const DIVERGENCE_FLOOR: f64 = 1e-6;

/// Tolerance used for sign decisions on float-mode diagnostics.
pub const FLOAT_SIGN_TOL: f64 = 1e-12;

/// Positive weight sequence `alpha_1..alpha_N` of a weighted shift.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    weights: Vec<f64>,
    source: String,
}

impl WeightSequence {
    pub fn new(weights: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInput("weight sequence"));
        }
        if let Some(i) = weights.iter().position(|w| !(*w > 0.0)) {
            return Err(Error::NonPositiveCoefficient { index: i + 1 });
        }
        Ok(WeightSequence { weights, source: source.into() })
    }

    /// `alpha_n` for `n = 1..=len`.
    pub fn get(&self, n: usize) -> f64 {
        self.weights[n - 1]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    /// Whether `alpha_1 >= alpha_2 >= ...` within a small slack; several
    /// model-theorem hypotheses assume this, so reports carry the flag.
    pub fn is_nonincreasing(&self) -> bool {
        self.weights.windows(2).all(|w| w[1] <= w[0] + FLOAT_SIGN_TOL)
    }
}

/// Weight sequence `alpha_n = sqrt(a_{n-1}/a_n)` of the backward shift
/// on the space with diagonal kernel coefficients `a_n`.
pub fn weights_from_kernel(k: &DiagonalKernel) -> WeightSequence {
    let n = k.order();
    let weights = match k.coeffs().rationals() {
        Some(v) => (1..=n)
            .map(|i| crate::scalar::Scalar::Exact(&v[i - 1] / &v[i]).to_float().sqrt())
            .collect(),
        None => {
            let v = k.coeffs().floats().expect("float mode");
            (1..=n).map(|i| (v[i - 1] / v[i]).sqrt()).collect()
        }
    };
    WeightSequence { weights, source: k.label().to_string() }
}

/// Extrema of the window products
/// `|alpha_k ... alpha_l / (beta_k ... beta_l)|` over `1 <= k <= l <= N`,
/// with the windows that witnessed them.
#[derive(Debug, Clone, Serialize)]
pub struct ShieldsReport {
    pub inf_ratio: f64,
    pub sup_ratio: f64,
    /// `(k, l)` attaining the infimum; lexicographically smallest on ties.
    pub inf_window: (usize, usize),
    pub sup_window: (usize, usize),
    pub horizon: usize,
}

/// Verdict of a window-ratio probe against bounds `c1 <= ratio <= c2`.
///
/// Only the exceeded direction is conclusive on a finite horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ShieldsVerdict {
    ConsistentWithSimilarity,
    SimilarityExcluded { witness_k: usize, witness_l: usize, ratio: f64 },
}

impl ShieldsReport {
    pub fn verdict(&self, c1: f64, c2: f64) -> ShieldsVerdict {
        if self.sup_ratio > c2 {
            ShieldsVerdict::SimilarityExcluded {
                witness_k: self.sup_window.0,
                witness_l: self.sup_window.1,
                ratio: self.sup_ratio,
            }
        } else if self.inf_ratio < c1 {
            ShieldsVerdict::SimilarityExcluded {
                witness_k: self.inf_window.0,
                witness_l: self.inf_window.1,
                ratio: self.inf_ratio,
            }
        } else {
            ShieldsVerdict::ConsistentWithSimilarity
        }
    }
}

/// Running-extrema scan of all window products in `O(N)` using prefix
/// sums of `log alpha_i - log beta_i`.
pub fn shields_ratio_extrema(a: &WeightSequence, b: &WeightSequence, horizon: usize) -> Result<ShieldsReport> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("shields horizon must be >= 1".into()));
    }
    if a.len() < horizon || b.len() < horizon {
        return Err(Error::OrderExceeded { requested: horizon, available: a.len().min(b.len()) });
    }

    // prefix[l] = sum_{i<=l} (ln alpha_i - ln beta_i); prefix[0] = 0.
    let mut min_prefix = 0.0_f64;
    let mut max_prefix = 0.0_f64;
    let mut min_prefix_at = 0usize;
    let mut max_prefix_at = 0usize;
    let mut s = 0.0_f64;

    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    let mut sup_window = (1, 1);
    let mut inf_window = (1, 1);

    for l in 1..=horizon {
        s += a.get(l).ln() - b.get(l).ln();

        let cand_sup = s - min_prefix;
        let cand_sup_window = (min_prefix_at + 1, l);
        if cand_sup > sup || (cand_sup == sup && cand_sup_window < sup_window) {
            sup = cand_sup;
            sup_window = cand_sup_window;
        }

        let cand_inf = s - max_prefix;
        let cand_inf_window = (max_prefix_at + 1, l);
        if cand_inf < inf || (cand_inf == inf && cand_inf_window < inf_window) {
            inf = cand_inf;
            inf_window = cand_inf_window;
        }

        if s < min_prefix {
            min_prefix = s;
            min_prefix_at = l;
        }
        if s > max_prefix {
            max_prefix = s;
            max_prefix_at = l;
        }
    }

    Ok(ShieldsReport {
        inf_ratio: inf.exp(),
        sup_ratio: sup.exp(),
        inf_window,
        sup_window,
        horizon,
    })
}

/// Power norm of the backward shift via the telescoped closed form
/// `||T^s|| = sup_{s <= i <= N} sqrt(a_{i-s}/a_i)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerNormReport {
    pub norm: f64,
    /// Index attaining the supremum (smallest on ties).
    pub attained_at: usize,
    /// True when the supremum sits at the truncation edge `i = N`, in
    /// which case finite data cannot certify the supremum over all `i`.
    pub boundary: bool,
}

pub fn power_norm(k: &DiagonalKernel, s: usize, horizon: usize) -> Result<PowerNormReport> {
    if s == 0 {
        return Err(Error::InvalidParameter("power must be >= 1".into()));
    }
    if s > horizon {
        return Err(Error::OrderExceeded { requested: s, available: horizon });
    }
    if horizon > k.order() {
        return Err(Error::OrderExceeded { requested: horizon, available: k.order() });
    }
    let coeffs = k.coeffs();
    let mut best = f64::NEG_INFINITY;
    let mut at = s;
    for i in s..=horizon {
        let ratio = coeffs.coeff_f64(i - s) / coeffs.coeff_f64(i);
        if ratio > best {
            best = ratio;
            at = i;
        }
    }
    Ok(PowerNormReport { norm: best.sqrt(), attained_at: at, boundary: at == horizon })
}

/// Partial hypercontraction-type sum
/// `sum_{s=1}^{S} ||T^s||^2 / (s+1)^alpha` with a heuristic divergence
/// flag. The flag carries no finite certificate and is reported as such.
#[derive(Debug, Clone, Serialize)]
pub struct HypercontractionReport {
    pub partial: f64,
    pub summands: Vec<f64>,
    pub diverging: bool,
    /// Any summand whose power-norm sup sat at the truncation edge.
    pub boundary_terms: usize,
    /// The model hypothesis behind this sum assumes nonincreasing shift
    /// weights; false here means the hypothesis shape is not met.
    pub weights_nonincreasing: bool,
    pub note: &'static str,
}

pub fn hypercontraction_sum(k: &DiagonalKernel, alpha: f64, terms: usize, horizon: usize) -> Result<HypercontractionReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if terms == 0 {
        return Err(Error::InvalidParameter("term count must be >= 1".into()));
    }
    if terms > horizon {
        return Err(Error::OrderExceeded { requested: terms, available: horizon });
    }
    let mut summands = Vec::with_capacity(terms);
    let mut boundary_terms = 0usize;
    for s in 1..=terms {
        let pn = power_norm(k, s, horizon)?;
        if pn.boundary {
            boundary_terms += 1;
        }
        summands.push(pn.norm * pn.norm / (s as f64 + 1.0).powf(alpha));
    }
    let partial = summands.iter().sum();
    let window = summands.len().min(10);
    let diverging = summands[summands.len() - window..]
        .iter()
        .all(|&t| t >= DIVERGENCE_FLOOR);
    Ok(HypercontractionReport {
        partial,
        summands,
        diverging,
        boundary_terms,
        weights_nonincreasing: weights_from_kernel(k).is_nonincreasing(),
        note: "divergence flag is heuristic; no finite certificate",
    })
}

/// Paired sequences of the defect recursion: `b_k = 1/(k+1)^alpha` and
/// its convolution inverse `c`, with `c_0 = 1` and `-b_k <= c_k <= 0`.
#[derive(Debug, Clone)]
pub struct DefectCoeffs {
    pub alpha: f64,
    pub b: CoeffSeq,
    pub c: CoeffSeq,
}

impl DefectCoeffs {
    /// Largest deviation of `(b * c)_l` from the delta sequence, rounded
    /// to f64; exactly zero in exact mode.
    pub fn convolution_residual(&self) -> Result<f64> {
        let conv = cauchy_product(&self.b, &self.c, self.b.order())?;
        let mut worst = 0.0_f64;
        for l in 0..=conv.order() {
            let target = if l == 0 { 1.0 } else { 0.0 };
            worst = worst.max((conv.coeff_f64(l) - target).abs());
        }
        Ok(worst)
    }
}

/// Builds the defect coefficient pair for `alpha` through `order` and
/// verifies the sign envelope `-b_k <= c_k <= 0`.
pub fn defect_coeffs(alpha: f64, order: usize, mode: Mode) -> Result<DefectCoeffs> {
    let b_kernel = standard_coeffs(StandardFamily::DirichletAlpha { alpha }, order, mode)?;
    let b = b_kernel.coeffs().clone();
    let c = series_reciprocal(&b, order)?;
    match (b.rationals(), c.rationals()) {
        (Some(bv), Some(cv)) => {
            for k in 1..=order {
                if cv[k].is_positive() || -&bv[k] > cv[k] {
                    return Err(Error::InvalidParameter(format!(
                        "defect coefficient c_{k} escapes the sign envelope"
                    )));
                }
            }
        }
        _ => {
            let bv = b.floats().expect("float mode");
            let cv = c.floats().expect("float mode");
            for k in 1..=order {
                if cv[k] > FLOAT_SIGN_TOL || cv[k] < -bv[k] - FLOAT_SIGN_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "defect coefficient c_{k} escapes the sign envelope"
                    )));
                }
            }
        }
    }
    Ok(DefectCoeffs { alpha, b, c })
}

/// Verdict of the diagonal hypercontraction inequality
/// `a_n - sum_{s=1}^{n} a_{n-s}/(s+1)^alpha >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MuellerVerdict {
    AllNonNegative,
    ViolationAt(usize),
}

#[derive(Debug, Clone)]
pub struct MuellerReport {
    /// The deficiency sequence `d'_n`.
    pub deltas: CoeffSeq,
    pub verdict: MuellerVerdict,
    pub weights_nonincreasing: bool,
}

pub fn mueller_diagonal_check(k: &DiagonalKernel, alpha: f64, order: usize) -> Result<MuellerReport> {
    if order > k.order() {
        return Err(Error::OrderExceeded { requested: order, available: k.order() });
    }
    let b_kernel = standard_coeffs(StandardFamily::DirichletAlpha { alpha }, order, k.mode())?;
    let deltas = match (k.coeffs().rationals(), b_kernel.coeffs().rationals()) {
        (Some(a), Some(b)) => {
            let mut out = Vec::with_capacity(order + 1);
            for n in 0..=order {
                let mut d = a[n].clone();
                for s in 1..=n {
                    d -= &b[s] * &a[n - s];
                }
                out.push(d);
            }
            CoeffSeq::from_rationals(out)
        }
        _ => {
            let a = k.coeffs().floats().expect("float mode");
            let b = b_kernel.coeffs().floats().expect("float mode");
            let mut out = Vec::with_capacity(order + 1);
            for n in 0..=order {
                let mut d = a[n];
                for s in 1..=n {
                    d -= b[s] * a[n - s];
                }
                out.push(d);
            }
            CoeffSeq::from_floats(out)
        }
    };
    let verdict = first_negative(&deltas)
        .map(MuellerVerdict::ViolationAt)
        .unwrap_or(MuellerVerdict::AllNonNegative);
    Ok(MuellerReport {
        deltas,
        verdict,
        weights_nonincreasing: weights_from_kernel(k).is_nonincreasing(),
    })
}

/// Diagonal cofactor of a kernel over the `D_alpha` base:
/// `g_n = sum_k c_k a_{n-k}` together with the normalized entries
/// `g_n / a_n` (the squared-defect diagonal in the orthonormal basis).
#[derive(Debug, Clone)]
pub struct CofactorDiagonal {
    pub coeffs: CoeffSeq,
    pub normalized: CoeffSeq,
    /// First index with `g_n < 0`, if any; a negative entry means the
    /// tensor splitting over `D_alpha` fails at this order.
    pub first_negative: Option<usize>,
}

pub fn cofactor_diagonal(k: &DiagonalKernel, alpha: f64, order: usize) -> Result<CofactorDiagonal> {
    if order > k.order() {
        return Err(Error::OrderExceeded { requested: order, available: k.order() });
    }
    let defect = defect_coeffs(alpha, order, k.mode())?;
    let coeffs = cauchy_product(&defect.c, k.coeffs(), order)?;
    let normalized = match (coeffs.rationals(), k.coeffs().rationals()) {
        (Some(g), Some(a)) => {
            CoeffSeq::from_rationals((0..=order).map(|n| &g[n] / &a[n]).collect())
        }
        _ => {
            let g = coeffs.floats().expect("float mode");
            let a = k.coeffs().floats().expect("float mode");
            CoeffSeq::from_floats((0..=order).map(|n| g[n] / a[n]).collect())
        }
    };
    let first_negative = first_negative(&coeffs);
    Ok(CofactorDiagonal { coeffs, normalized, first_negative })
}

fn first_negative(seq: &CoeffSeq) -> Option<usize> {
    match seq.rationals() {
        Some(v) => v.iter().position(BigRational::is_negative),
        None => {
            let v = seq.floats().expect("float mode");
            v.iter().position(|&x| x < -FLOAT_SIGN_TOL)
        }
    }
}
