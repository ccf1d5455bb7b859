//! Multiplier norms on the weighted Dirichlet scale `D_alpha`
//! (`||f||^2 = sum (n+1)^alpha |f_n|^2`, `alpha` in `(0,1]`).
//!
//! Monomial norms are exact: the shifted-weight ratio
//! `((n+m+1)/(n+1))^alpha` is decreasing in `n`, so the supremum sits at
//! `n = 0` and `||c z^m|| = |c| (m+1)^{alpha/2}`. Polynomials get a
//! certified triangle-inequality upper bound plus a brute-force oracle:
//! the spectral norm of the truncated multiplication matrix in the
//! orthonormal monomial basis, by power iteration.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{GridPoint, GridSpec};
use crate::kernels::PolyFactor;
use crate::scalar::Scalar;

/// Power-iteration convergence threshold on successive norm estimates.
pub const POWER_ITERATION_TOL: f64 = 1e-8;
pub const POWER_ITERATION_MAX: usize = 10_000;

/// Symbol `phi(z) = c z^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialSymbol {
    pub coefficient: Scalar,
    pub degree: usize,
}

impl MonomialSymbol {
    pub fn new(coefficient: Scalar, degree: usize) -> Self {
        MonomialSymbol { coefficient, degree }
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coefficient.to_float() * w.powi(self.degree as i32)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(())
}

/// Exact multiplier norm of a monomial: `|c| (m+1)^{alpha/2}`.
pub fn monomial_mult_norm(phi: &MonomialSymbol, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(phi.coefficient.to_float().abs() * (phi.degree as f64 + 1.0).powf(alpha / 2.0))
}

/// Triangle-inequality upper bound for a polynomial symbol:
/// `sum_m |p_m| (m+1)^{alpha/2}`.
pub fn poly_mult_norm_upper(p: &PolyFactor, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(p.coeffs()
        .to_floats()
        .iter()
        .enumerate()
        .map(|(m, c)| c.abs() * (m as f64 + 1.0).powf(alpha / 2.0))
        .sum())
}

/// Result of the truncated-operator spectral-norm oracle.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BruteforceNorm {
    pub value: f64,
    pub iterations: usize,
    pub truncation: usize,
}

/// Spectral norm of the `(N+1) x (N+1)` truncation of the multiplication
/// matrix `M_{m,n} = p_{m-n} ((m+1)/(n+1))^{alpha/2}` (`m >= n`) in the
/// orthonormal basis `z^n / (n+1)^{alpha/2}`, via power iteration on
/// `M^T M` seeded with the all-ones vector.
pub fn mult_norm_bruteforce(p: &PolyFactor, alpha: f64, truncation: usize) -> Result<BruteforceNorm> {
    check_alpha(alpha)?;
    let coeffs = p.coeffs().to_floats();
    let dim = truncation + 1;
    let apply = |v: &[f64], out: &mut Vec<f64>| {
        // y = M v, then out = M^T y.
        let mut y = vec![0.0; dim];
        for (d, &pd) in coeffs.iter().enumerate() {
            if pd == 0.0 {
                continue;
            }
            for n in 0..dim.saturating_sub(d) {
                let m = n + d;
                y[m] += pd * ((m as f64 + 1.0) / (n as f64 + 1.0)).powf(alpha / 2.0) * v[n];
            }
        }
        out.iter_mut().for_each(|x| *x = 0.0);
        for (d, &pd) in coeffs.iter().enumerate() {
            if pd == 0.0 {
                continue;
            }
            for n in 0..dim.saturating_sub(d) {
                let m = n + d;
                out[n] += pd * ((m as f64 + 1.0) / (n as f64 + 1.0)).powf(alpha / 2.0) * y[m];
            }
        }
    };

    let mut v = vec![1.0_f64; dim];
    let norm = (dim as f64).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let mut next = vec![0.0; dim];
    let mut estimate = 0.0_f64;
    for it in 1..=POWER_ITERATION_MAX {
        apply(&v, &mut next);
        let lambda = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if lambda == 0.0 {
            return Ok(BruteforceNorm { value: 0.0, iterations: it, truncation });
        }
        next.iter_mut().for_each(|x| *x /= lambda);
        std::mem::swap(&mut v, &mut next);
        let sigma = lambda.sqrt();
        if (sigma - estimate).abs() < POWER_ITERATION_TOL {
            return Ok(BruteforceNorm { value: sigma, iterations: it, truncation });
        }
        estimate = sigma;
    }
    Err(Error::PowerIterationDiverged { iterations: POWER_ITERATION_MAX })
}

/// One member of a frame family: a sparse monomial (arbitrary degree) or
/// a dense polynomial.
#[derive(Debug, Clone)]
pub enum FrameComponent {
    Monomial(MonomialSymbol),
    Poly(PolyFactor),
}

impl FrameComponent {
    pub fn eval(&self, w: Complex64) -> Complex64 {
        match self {
            FrameComponent::Monomial(m) => m.eval(w),
            FrameComponent::Poly(p) => p.eval(w),
        }
    }

    /// Certified upper bound on the `Mult(D_alpha)` norm (exact for
    /// monomials).
    pub fn mult_norm_upper(&self, alpha: f64) -> Result<f64> {
        match self {
            FrameComponent::Monomial(m) => monomial_mult_norm(m, alpha),
            FrameComponent::Poly(p) => poly_mult_norm_upper(p, alpha),
        }
    }
}

/// A frame family: explicitly stored components plus an explicit bound
/// on the multiplier-norm-squared tail of the members beyond the
/// truncation. `tail_note` records the formula behind the bound.
#[derive(Debug, Clone)]
pub struct FrameFamily {
    pub components: Vec<FrameComponent>,
    pub tail_norm_sq_bound: f64,
    pub tail_note: String,
}

impl FrameFamily {
    pub fn finite(components: Vec<FrameComponent>) -> Self {
        FrameFamily {
            components,
            tail_norm_sq_bound: 0.0,
            tail_note: "finite family; no tail".into(),
        }
    }
}

/// Two-sided summability certificate for a frame family.
#[derive(Debug, Clone, Serialize)]
pub struct FrameSummabilityReport {
    /// Grid infimum of `sum_i |gamma_i(w)|^2` (the value at `w = 0` is
    /// always included).
    pub lower: f64,
    pub lower_witness: GridPoint,
    /// `sum_i` of per-component multiplier-norm-squared upper bounds
    /// plus the family tail bound.
    pub upper: f64,
    pub truncated_norm_sq_sum: f64,
    pub tail_bound: f64,
    pub tail_note: String,
    pub delta_target: f64,
    pub components: usize,
    pub verdict: bool,
}

/// Checks `delta <= sum |gamma_i(w)|^2` on the grid and
/// `sum ||gamma_i||^2_{Mult} < infinity` via the certified upper bounds.
pub fn frame_summability_check(
    family: &FrameFamily,
    alpha: f64,
    grid: &GridSpec,
    delta_target: f64,
) -> Result<FrameSummabilityReport> {
    check_alpha(alpha)?;
    if family.components.is_empty() {
        return Err(Error::EmptyInput("frame component list"));
    }

    let origin = GridPoint { r: 0.0, theta: 0.0 };
    let mut lower = f64::INFINITY;
    let mut lower_witness = origin;
    for pt in std::iter::once(origin).chain(grid.points()) {
        let w = pt.to_complex();
        let value: f64 = family.components.iter().map(|c| c.eval(w).norm_sqr()).sum();
        if value < lower {
            lower = value;
            lower_witness = pt;
        }
    }

    let mut truncated_norm_sq_sum = 0.0;
    for c in &family.components {
        let n = c.mult_norm_upper(alpha)?;
        truncated_norm_sq_sum += n * n;
    }
    let upper = truncated_norm_sq_sum + family.tail_norm_sq_bound;

    Ok(FrameSummabilityReport {
        lower,
        lower_witness,
        upper,
        truncated_norm_sq_sum,
        tail_bound: family.tail_norm_sq_bound,
        tail_note: family.tail_note.clone(),
        delta_target,
        components: family.components.len(),
        verdict: lower >= delta_target && upper.is_finite(),
    })
}

/// Truncated row- and column-operator norms of a finite multiplier
/// family: `||R||^2 = lambda_max(sum M_i M_i^T)` and
/// `||C||^2 = lambda_max(sum M_i^T M_i)`, each by power iteration.
pub fn row_column_norms(
    components: &[FrameComponent],
    alpha: f64,
    truncation: usize,
) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if components.is_empty() {
        return Err(Error::EmptyInput("multiplier family"));
    }
    let dim = truncation + 1;

    // (degree, coefficient) pairs of every component's dense form.
    let terms: Vec<Vec<(usize, f64)>> = components
        .iter()
        .map(|c| match c {
            FrameComponent::Monomial(m) => vec![(m.degree, m.coefficient.to_float())],
            FrameComponent::Poly(p) => p
                .coeffs()
                .to_floats()
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0.0)
                .collect(),
        })
        .collect();

    let ratio = |m: usize, n: usize| ((m as f64 + 1.0) / (n as f64 + 1.0)).powf(alpha / 2.0);

    // column: out = sum_i M_i^T (M_i v); row: out = sum_i M_i (M_i^T v).
    let gram_apply = |v: &[f64], out: &mut Vec<f64>, row_side: bool| {
        out.iter_mut().for_each(|x| *x = 0.0);
        let mut y = vec![0.0; dim];
        for t in &terms {
            y.iter_mut().for_each(|x| *x = 0.0);
            for &(d, c) in t {
                for n in 0..dim.saturating_sub(d) {
                    let m = n + d;
                    if row_side {
                        y[n] += c * ratio(m, n) * v[m];
                    } else {
                        y[m] += c * ratio(m, n) * v[n];
                    }
                }
            }
            for &(d, c) in t {
                for n in 0..dim.saturating_sub(d) {
                    let m = n + d;
                    if row_side {
                        out[m] += c * ratio(m, n) * y[n];
                    } else {
                        out[n] += c * ratio(m, n) * y[m];
                    }
                }
            }
        }
    };

    let mut norms = [0.0_f64; 2];
    for (slot, row_side) in [(0usize, true), (1usize, false)] {
        let mut v = vec![1.0 / (dim as f64).sqrt(); dim];
        let mut next = vec![0.0; dim];
        let mut estimate = 0.0;
        let mut converged = false;
        for _ in 0..POWER_ITERATION_MAX {
            gram_apply(&v, &mut next, row_side);
            let lambda = next.iter().map(|x| x * x).sum::<f64>().sqrt();
            if lambda == 0.0 {
                estimate = 0.0;
                converged = true;
                break;
            }
            next.iter_mut().for_each(|x| *x /= lambda);
            std::mem::swap(&mut v, &mut next);
            let sigma = lambda.sqrt();
            if (sigma - estimate).abs() < POWER_ITERATION_TOL {
                estimate = sigma;
                converged = true;
                break;
            }
            estimate = sigma;
        }
        if !converged {
            return Err(Error::PowerIterationDiverged { iterations: POWER_ITERATION_MAX });
        }
        norms[slot] = estimate;
    }
    Ok((norms[0], norms[1]))
}
