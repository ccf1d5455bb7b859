//! Pointwise differential geometry of the line bundles attached to
//! kernels: metric evaluation, curvature (closed form and a
//! finite-difference oracle), jet-bundle metrics, the first-jet trace
//! condition, metric-ratio extrema, and matrix-metric bound checks.
//!
//! "For all w in the disk" statements are probed on polar grids and the
//! report always carries the grid: a grid sup is a lower bound for the
//! disk-wide sup, never a certificate of it. For kernels with
//! non-negative coefficients the radial quantities are monotone in `r`,
//! so the `r = r_max` circle dominates the closed sub-disk it bounds.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{BivariateKernel, DiagonalKernel};
use crate::series::CoeffSeq;

/// Fraction of the metric scale below which the derivative block of a
/// first-jet matrix counts as identically zero (constant section).
const DEGENERATE_TOL: f64 = 1e-14;

/// Polar evaluation grid: `radii x angles` points `r e^{i theta}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    radii: Vec<f64>,
    angles: usize,
}

impl GridSpec {
    /// Equispaced radii `r_max (j+1)/count` and `angles` equispaced
    /// angles; `r_max` must stay inside the open disk.
    pub fn polar(radii_count: usize, r_max: f64, angles: usize) -> Result<Self> {
        if radii_count == 0 || angles == 0 {
            return Err(Error::InvalidParameter("grid counts must be >= 1".into()));
        }
        if !(0.0 < r_max && r_max < 1.0) {
            return Err(Error::OutsideDisk { modulus: r_max });
        }
        let radii = (0..radii_count)
            .map(|j| r_max * (j as f64 + 1.0) / radii_count as f64)
            .collect();
        Ok(GridSpec { radii, angles })
    }

    pub fn from_radii(radii: Vec<f64>, angles: usize) -> Result<Self> {
        if radii.is_empty() || angles == 0 {
            return Err(Error::InvalidParameter("grid counts must be >= 1".into()));
        }
        let mut prev = -1.0;
        for &r in &radii {
            if !(0.0..1.0).contains(&r) || r <= prev {
                return Err(Error::InvalidParameter(
                    "radii must be strictly increasing inside [0, 1)".into(),
                ));
            }
            prev = r;
        }
        Ok(GridSpec { radii, angles })
    }

    /// 24 radii up to 0.999 with 64 angles.
    pub fn default_disk() -> Self {
        GridSpec::polar(24, 0.999, 64).expect("default grid parameters are valid")
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().expect("non-empty radii")
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        let angles = self.angles;
        self.radii.iter().flat_map(move |&r| {
            (0..angles).map(move |t| GridPoint {
                r,
                theta: 2.0 * std::f64::consts::PI * t as f64 / angles as f64,
            })
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub r: f64,
    pub theta: f64,
}

impl GridPoint {
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }
}

/// Extrema of a scalar field over a grid, with the points that
/// witnessed them.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub quantity: String,
    pub inf: f64,
    pub sup: f64,
    pub inf_witness: GridPoint,
    pub sup_witness: GridPoint,
    pub grid: GridSpec,
}

/// Anything that exposes the mixed derivatives of a pointwise metric
/// `h(w)` on the disk.
///
/// `jet_entry(i, j, w)` is `d^{i+j} h / dw^i dwbar^j`. Diagonal kernels
/// override the curvature with the closed-form radial reduction; the
/// default goes through the finite-difference oracle. Exact-mode kernels
/// evaluate by converting entries on the fly — convert with
/// `to_float_mode` before large grid sweeps.
pub trait HermitianMetric {
    fn jet_entry(&self, i: usize, j: usize, w: Complex64) -> Result<Complex64>;

    fn metric_at(&self, w: Complex64) -> Result<f64> {
        Ok(self.jet_entry(0, 0, w)?.re)
    }

    fn curvature_at(&self, w: Complex64, fd_step: f64) -> Result<f64> {
        curvature_fd(|z| self.metric_at(z), w, fd_step)
    }
}

impl HermitianMetric for CoeffSeq {
    fn jet_entry(&self, i: usize, j: usize, w: Complex64) -> Result<Complex64> {
        CoeffSeq::jet_entry(self, i, j, w)
    }

    fn curvature_at(&self, w: Complex64, _fd_step: f64) -> Result<f64> {
        curvature_diagonal(self, w.norm_sqr())
    }
}

impl HermitianMetric for DiagonalKernel {
    fn jet_entry(&self, i: usize, j: usize, w: Complex64) -> Result<Complex64> {
        self.coeffs().jet_entry(i, j, w)
    }

    fn curvature_at(&self, w: Complex64, _fd_step: f64) -> Result<f64> {
        curvature_diagonal(self.coeffs(), w.norm_sqr())
    }
}

impl HermitianMetric for BivariateKernel {
    /// `sum_{m>=i, n>=j} a_{m,n} m!/(m-i)! n!/(n-j)! w^{m-i} wbar^{n-j}`.
    fn jet_entry(&self, i: usize, j: usize, w: Complex64) -> Result<Complex64> {
        if w.norm() >= 1.0 {
            return Err(Error::OutsideDisk { modulus: w.norm() });
        }
        let order = self.order();
        if i > order && j > order {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let wb = w.conj();
        let mut wpow = Vec::with_capacity(order + 1);
        let mut wbpow = Vec::with_capacity(order + 1);
        let (mut p, mut q) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        for _ in 0..=order {
            wpow.push(p);
            wbpow.push(q);
            p *= w;
            q *= wb;
        }
        let mut ff_j = vec![0.0; order + 1];
        for n in j..=order {
            ff_j[n] = falling_f64(n, j);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for m in i..=order {
            let ff_i = falling_f64(m, i);
            for n in j..=order {
                let a = self.coeff_f64(m, n);
                if a != 0.0 {
                    acc += a * ff_i * ff_j[n] * wpow[m - i] * wbpow[n - j];
                }
            }
        }
        Ok(acc)
    }
}

fn falling_f64(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for t in 0..k {
        acc *= (n - t) as f64;
    }
    acc
}

/// Curvature of the diagonal metric `h(|w|^2) = sum a_n |w|^{2n}` at
/// `x = |w|^2`, via the radial reduction of `-d dbar log h`:
/// `-(h'/h + x (h'' h - h'^2) / h^2)` with primes in `x`.
pub fn curvature_diagonal(a: &CoeffSeq, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::OutsideDisk { modulus: x });
    }
    let coeffs = a.to_floats();
    let (mut h, mut hp, mut hpp) = (0.0, 0.0, 0.0);
    for (n, &c) in coeffs.iter().enumerate().rev() {
        let nf = n as f64;
        // Horner on all three series simultaneously.
        h = h * x + c;
        if n >= 1 {
            hp = hp * x + nf * c;
        }
        if n >= 2 {
            hpp = hpp * x + nf * (nf - 1.0) * c;
        }
    }
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "metric must be positive at x = {x}, got {h}"
        )));
    }
    Ok(-(hp / h + x * (hpp * h - hp * hp) / (h * h)))
}

/// Finite-difference curvature oracle: `-1/4` times the 5-point
/// Laplacian of `log h`, using `d dbar = (d^2/du^2 + d^2/dv^2)/4`.
pub fn curvature_fd<F>(h: F, w: Complex64, step: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    if !(step > 0.0) {
        return Err(Error::InvalidParameter("finite-difference step must be positive".into()));
    }
    let log_h = |z: Complex64| -> Result<f64> {
        let v = h(z)?;
        if !(v > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "metric must be positive at {z}, got {v}"
            )));
        }
        Ok(v.ln())
    };
    let c = log_h(w)?;
    let e = log_h(w + Complex64::new(step, 0.0))?;
    let ww = log_h(w - Complex64::new(step, 0.0))?;
    let n = log_h(w + Complex64::new(0.0, step))?;
    let s = log_h(w - Complex64::new(0.0, step))?;
    Ok(-0.25 * (e + ww + n + s - 4.0 * c) / (step * step))
}

/// Metric of the order-`k` jet bundle at a point: the `(k+1) x (k+1)`
/// matrix with row `i`, column `j` holding
/// `d^{i+j} h / dw^j dwbar^i (w)`.
#[derive(Debug, Clone)]
pub struct JetMetric {
    pub k: usize,
    pub point: Complex64,
    pub matrix: DMatrix<Complex64>,
}

impl JetMetric {
    /// Real trace; the imaginary parts of the diagonal vanish up to
    /// rounding.
    pub fn trace(&self) -> f64 {
        (0..self.matrix.nrows()).map(|i| self.matrix[(i, i)].re).sum()
    }

    pub fn hermitian_residual(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn determinant(&self) -> f64 {
        self.eigenvalues().iter().product()
    }
}

/// Jet order cap; first-order jets are all any hypothesis in scope uses.
pub const MAX_JET_ORDER: usize = 8;

/// Assembles the jet metric from mixed derivatives; Hermitian symmetry
/// holds by construction of the entries.
pub fn jet_metric(metric: &impl HermitianMetric, w: Complex64, k: usize) -> Result<JetMetric> {
    if k > MAX_JET_ORDER {
        return Err(Error::InvalidParameter(format!(
            "jet order is capped at {MAX_JET_ORDER}, got {k}"
        )));
    }
    let mut m = DMatrix::from_element(k + 1, k + 1, Complex64::new(0.0, 0.0));
    for i in 0..=k {
        for j in 0..=k {
            m[(i, j)] = metric.jet_entry(j, i, w)?;
        }
    }
    Ok(JetMetric { k, point: w, matrix: m })
}

/// Trace of the first-jet metric: `h(w) + d^2 h / dw dwbar (w)`.
pub fn jet1_trace(metric: &impl HermitianMetric, w: Complex64) -> Result<f64> {
    Ok(metric.jet_entry(0, 0, w)?.re + metric.jet_entry(1, 1, w)?.re)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum JetConditionVerdict {
    /// `inf h > 0`, `h < trace` strictly at every grid point.
    SatisfiedOnGrid,
    /// The derivative block vanishes on the whole grid (constant
    /// section): the strict inequality is void, not violated.
    Degenerate,
    FailedAt(GridPoint),
}

/// Grid probe of the sandwich `c_1 <= h(w) < trace J_1(h)(w) <= c_2`.
#[derive(Debug, Clone, Serialize)]
pub struct JetConditionReport {
    pub metric: BoundsReport,
    pub trace: BoundsReport,
    pub verdict: JetConditionVerdict,
    pub note: &'static str,
}

pub fn jet_condition_check(metric: &impl HermitianMetric, grid: &GridSpec) -> Result<JetConditionReport> {
    let mut h_inf = f64::INFINITY;
    let mut h_sup = f64::NEG_INFINITY;
    let mut t_inf = f64::INFINITY;
    let mut t_sup = f64::NEG_INFINITY;
    let first = grid.points().next().expect("grid is non-empty");
    let (mut h_inf_at, mut h_sup_at, mut t_inf_at, mut t_sup_at) = (first, first, first, first);
    let mut max_deriv = 0.0_f64;
    let mut violation: Option<GridPoint> = None;

    for pt in grid.points() {
        let w = pt.to_complex();
        let h = metric.jet_entry(0, 0, w)?.re;
        let deriv = metric.jet_entry(1, 1, w)?.re;
        let trace = h + deriv;
        if h < h_inf {
            h_inf = h;
            h_inf_at = pt;
        }
        if h > h_sup {
            h_sup = h;
            h_sup_at = pt;
        }
        if trace < t_inf {
            t_inf = trace;
            t_inf_at = pt;
        }
        if trace > t_sup {
            t_sup = trace;
            t_sup_at = pt;
        }
        max_deriv = max_deriv.max(deriv.abs());
        if deriv <= 0.0 && violation.is_none() {
            violation = Some(pt);
        }
    }

    let degenerate = max_deriv <= DEGENERATE_TOL * h_sup.abs().max(1.0);
    let verdict = if degenerate {
        JetConditionVerdict::Degenerate
    } else if let Some(pt) = violation {
        JetConditionVerdict::FailedAt(pt)
    } else if h_inf > 0.0 {
        JetConditionVerdict::SatisfiedOnGrid
    } else {
        JetConditionVerdict::FailedAt(h_inf_at)
    };

    Ok(JetConditionReport {
        metric: BoundsReport {
            quantity: "metric h".into(),
            inf: h_inf,
            sup: h_sup,
            inf_witness: h_inf_at,
            sup_witness: h_sup_at,
            grid: grid.clone(),
        },
        trace: BoundsReport {
            quantity: "trace of first-jet metric".into(),
            inf: t_inf,
            sup: t_sup,
            inf_witness: t_inf_at,
            sup_witness: t_sup_at,
            grid: grid.clone(),
        },
        verdict,
        note: "grid extrema only; a grid sup bounds the disk-wide sup from below",
    })
}

/// Extrema of the pointwise metric ratio `h_num(w) / h_den(w)` over a
/// grid.
pub fn metric_ratio_extrema(
    num: &impl HermitianMetric,
    den: &impl HermitianMetric,
    grid: &GridSpec,
) -> Result<BoundsReport> {
    let first = grid.points().next().expect("grid is non-empty");
    let (mut inf, mut sup) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut inf_at, mut sup_at) = (first, first);
    for pt in grid.points() {
        let w = pt.to_complex();
        let hn = num.metric_at(w)?;
        let hd = den.metric_at(w)?;
        if !(hd > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "denominator metric must be positive, got {hd} at r = {}, theta = {}",
                pt.r, pt.theta
            )));
        }
        let ratio = hn / hd;
        if ratio < inf {
            inf = ratio;
            inf_at = pt;
        }
        if ratio > sup {
            sup = ratio;
            sup_at = pt;
        }
    }
    Ok(BoundsReport {
        quantity: "metric ratio".into(),
        inf,
        sup,
        inf_witness: inf_at,
        sup_witness: sup_at,
        grid: grid.clone(),
    })
}

/// Eigenvalue and determinant extrema of a family of Hermitian metric
/// matrices, with boundedness verdicts against one positive threshold.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixBoundsReport {
    pub lambda_min_inf: f64,
    pub lambda_max_sup: f64,
    pub det_inf: f64,
    pub det_sup: f64,
    pub max_diag_sup: f64,
    /// `0 < threshold I <= h(w) <= (sup) I` held on every matrix.
    pub eigenvalue_bounds_ok: bool,
    /// Components uniformly bounded and `det h` bounded below.
    pub determinant_bounds_ok: bool,
}

pub fn matrix_metric_bounds(mats: &[JetMetric], threshold: f64) -> Result<MatrixBoundsReport> {
    if mats.is_empty() {
        return Err(Error::EmptyInput("matrix family"));
    }
    let mut lambda_min_inf = f64::INFINITY;
    let mut lambda_max_sup = f64::NEG_INFINITY;
    let mut det_inf = f64::INFINITY;
    let mut det_sup = f64::NEG_INFINITY;
    let mut max_diag_sup = f64::NEG_INFINITY;
    for m in mats {
        let ev = m.eigenvalues();
        lambda_min_inf = lambda_min_inf.min(ev[0]);
        lambda_max_sup = lambda_max_sup.max(ev[ev.len() - 1]);
        let det: f64 = ev.iter().product();
        det_inf = det_inf.min(det);
        det_sup = det_sup.max(det);
        for i in 0..m.matrix.nrows() {
            max_diag_sup = max_diag_sup.max(m.matrix[(i, i)].re);
        }
    }
    Ok(MatrixBoundsReport {
        lambda_min_inf,
        lambda_max_sup,
        det_inf,
        det_sup,
        max_diag_sup,
        eigenvalue_bounds_ok: lambda_min_inf >= threshold,
        determinant_bounds_ok: det_inf >= threshold && max_diag_sup.is_finite(),
    })
}

/// Maximal grid residual of the curvature additivity identity for a
/// tensor factorization `h_product = h_base * h_cofactor`:
/// `[K_base - K_product] - d dbar log h_cofactor = 0`.
///
/// Base and product curvatures use their own `curvature_at` routes
/// (closed form for diagonal kernels); the cofactor term always goes
/// through the finite-difference oracle, keeping the two sides of the
/// check on independent paths.
pub fn trace_curvature_identity_check(
    base: &DiagonalKernel,
    product: &impl HermitianMetric,
    cofactor: &impl HermitianMetric,
    grid: &GridSpec,
    step: f64,
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for pt in grid.points() {
        let w = pt.to_complex();
        let k_base = base.curvature_at(w, step)?;
        let k_prod = product.curvature_at(w, step)?;
        // d dbar log h_g is minus the finite-difference curvature of g.
        let dd_log_g = -curvature_fd(|z| cofactor.metric_at(z), w, step)?;
        worst = worst.max(((k_base - k_prod) - dd_log_g).abs());
    }
    Ok(worst)
}
