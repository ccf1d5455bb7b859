//! Reproducing kernels on the unit disk: diagonal families, diagonal
//! products, rank-one polynomial augmentation, cofactor extraction by
//! bivariate deconvolution, positivity checks, and frame extraction
//! from positive coefficient matrices.
//!
//! Diagonal kernels `K(z,w) = sum a_n z^n wbar^n` require `a_n > 0` so
//! that monomial norms `1/a_n` and the shift weight sequence exist.
//! Non-diagonal kernels are dense Hermitian coefficient matrices up to
//! a truncation order; positivity is a reported check, not a type
//! invariant.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, Mode, Scalar};
use crate::series::{cauchy_product, CoeffSeq};

/// Diagonal kernel `K(z,w) = sum a_n z^n wbar^n` with strictly positive
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalKernel {
    coeffs: CoeffSeq,
    label: String,
}

impl DiagonalKernel {
    pub fn new(coeffs: CoeffSeq, label: impl Into<String>) -> Result<Self> {
        if let Some(v) = coeffs.rationals() {
            for (n, a) in v.iter().enumerate() {
                if !a.is_positive() {
                    return Err(Error::NonPositiveCoefficient { index: n });
                }
            }
        } else if let Some(v) = coeffs.floats() {
            for (n, a) in v.iter().enumerate() {
                if !(*a > 0.0) {
                    return Err(Error::NonPositiveCoefficient { index: n });
                }
            }
        }
        Ok(DiagonalKernel { coeffs, label: label.into() })
    }

    pub fn coeffs(&self) -> &CoeffSeq {
        &self.coeffs
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.coeffs.order()
    }

    pub fn mode(&self) -> Mode {
        self.coeffs.mode()
    }

    pub fn to_float_mode(&self) -> DiagonalKernel {
        DiagonalKernel {
            coeffs: CoeffSeq::from_floats(self.coeffs.to_floats()),
            label: self.label.clone(),
        }
    }

    /// Szego kernel (Hardy space): `a_n = 1`.
    pub fn szego(order: usize, mode: Mode) -> DiagonalKernel {
        standard_coeffs(StandardFamily::Binomial { n: 1 }, order, mode)
            .expect("geometric kernel is always constructible")
    }

    /// Dirichlet kernel: `a_n = 1/(n+1)`.
    pub fn dirichlet(order: usize, mode: Mode) -> DiagonalKernel {
        standard_coeffs(StandardFamily::DirichletAlpha { alpha: 1.0 }, order, mode)
            .expect("Dirichlet kernel is always constructible")
    }
}

/// The three standard diagonal families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StandardFamily {
    /// `a_j = (j+1)^{-k}` for a real exponent `k` (the `H_k` scale).
    PowerWeight { k: f64 },
    /// `a_j = (j+1)^{-alpha}` with `alpha` restricted to `(0, 1]`.
    DirichletAlpha { alpha: f64 },
    /// `a_j = binom(n+j-1, j)`, the kernel `1/(1 - wbar z)^n`, `n >= 1`.
    Binomial { n: u32 },
}

/// Coefficients of a standard-family kernel up to `order`.
///
/// Exact mode requires integer exponents; fractional powers only exist
/// in float mode.
pub fn standard_coeffs(family: StandardFamily, order: usize, mode: Mode) -> Result<DiagonalKernel> {
    match family {
        StandardFamily::PowerWeight { k } => {
            let label = format!("H_k({k})");
            power_weight_coeffs(k, order, mode, label)
        }
        StandardFamily::DirichletAlpha { alpha } => {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "alpha must lie in (0, 1], got {alpha}"
                )));
            }
            let label = format!("D_alpha({alpha})");
            power_weight_coeffs(alpha, order, mode, label)
        }
        StandardFamily::Binomial { n } => {
            if n < 1 {
                return Err(Error::InvalidParameter("M_n requires n >= 1".into()));
            }
            let label = format!("M_n({n})");
            let coeffs = match mode {
                Mode::Exact => CoeffSeq::from_rationals(
                    (0..=order)
                        .map(|j| {
                            BigRational::from_integer(binomial(
                                BigInt::from(n as usize + j) - 1,
                                BigInt::from(j),
                            ))
                        })
                        .collect(),
                ),
                Mode::Float => {
                    let mut v = Vec::with_capacity(order + 1);
                    let mut a = 1.0;
                    v.push(a);
                    for j in 1..=order {
                        a *= (n as f64 + j as f64 - 1.0) / j as f64;
                        v.push(a);
                    }
                    CoeffSeq::from_floats(v)
                }
            };
            DiagonalKernel::new(coeffs, label)
        }
    }
}

fn power_weight_coeffs(k: f64, order: usize, mode: Mode, label: String) -> Result<DiagonalKernel> {
    let coeffs = match mode {
        Mode::Exact => {
            if k.fract() != 0.0 || !k.is_finite() {
                return Err(Error::ExactUnsupported(format!(
                    "(j+1)^(-{k}) is irrational for non-integer exponents"
                )));
            }
            let ik = k as i64;
            CoeffSeq::from_rationals(
                (0..=order)
                    .map(|j| {
                        let base = BigInt::from(j as i64 + 1);
                        if ik >= 0 {
                            BigRational::new(BigInt::one(), base.pow(ik as u32))
                        } else {
                            BigRational::from_integer(base.pow((-ik) as u32))
                        }
                    })
                    .collect(),
            )
        }
        Mode::Float => CoeffSeq::from_floats(
            (0..=order).map(|j| (j as f64 + 1.0).powf(-k)).collect(),
        ),
    };
    DiagonalKernel::new(coeffs, label)
}

/// Coefficientwise Cauchy product of two diagonal kernels; positivity of
/// the product is re-verified at construction.
pub fn diag_product(k1: &DiagonalKernel, k2: &DiagonalKernel, order: usize) -> Result<DiagonalKernel> {
    let coeffs = cauchy_product(&k1.coeffs, &k2.coeffs, order)?;
    DiagonalKernel::new(coeffs, format!("({})*({})", k1.label, k2.label))
}

/// Real polynomial factor `p(z) = sum p_m z^m`.
///
/// Trailing zero coefficients are trimmed so that the leading
/// coefficient is nonzero unless the polynomial is constant.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFactor {
    coeffs: CoeffSeq,
}

impl PolyFactor {
    pub fn new(coeffs: CoeffSeq) -> Self {
        let mut last = coeffs.order();
        while last > 0 && coeffs.get(last).is_zero() {
            last -= 1;
        }
        PolyFactor { coeffs: coeffs.truncated(last).expect("prefix exists") }
    }

    pub fn from_ints(coeffs: &[i64], mode: Mode) -> Self {
        let seq = match mode {
            Mode::Exact => CoeffSeq::from_rationals(
                coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect(),
            ),
            Mode::Float => CoeffSeq::from_floats(coeffs.iter().map(|&c| c as f64).collect()),
        };
        PolyFactor::new(seq)
    }

    pub fn from_floats(coeffs: Vec<f64>) -> Self {
        PolyFactor::new(CoeffSeq::from_floats(coeffs))
    }

    pub fn coeffs(&self) -> &CoeffSeq {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.order()
    }

    pub fn mode(&self) -> Mode {
        self.coeffs.mode()
    }

    pub fn is_zero(&self) -> bool {
        self.degree() == 0 && self.coeffs.get(0).is_zero()
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let c = self.coeffs.to_floats();
        let mut acc = Complex64::new(0.0, 0.0);
        for p in c.iter().rev() {
            acc = acc * w + p;
        }
        acc
    }

    /// Derivative evaluated at a complex point.
    pub fn eval_deriv(&self, w: Complex64) -> Complex64 {
        let c = self.coeffs.to_floats();
        let mut acc = Complex64::new(0.0, 0.0);
        for m in (1..c.len()).rev() {
            acc = acc * w + m as f64 * c[m];
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
enum MatData {
    Exact(Vec<Vec<BigRational>>),
    Float(Vec<Vec<f64>>),
}

/// Hermitian coefficient matrix `(a_{m,n})` of a bivariate kernel
/// `K(z,w) = sum a_{m,n} z^m wbar^n` truncated at `order`.
///
/// All kernels in scope have real coefficients, so Hermitian symmetry is
/// plain symmetry of the matrix. Positivity is NOT an invariant; it is
/// checked by [`psd_check`] and reported.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateKernel {
    data: MatData,
}

impl BivariateKernel {
    pub fn from_rationals(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        check_square(rows.len(), rows.iter().map(|r| r.len()))?;
        for m in 0..rows.len() {
            for n in 0..m {
                if rows[m][n] != rows[n][m] {
                    return Err(Error::NonHermitian { row: m, col: n });
                }
            }
        }
        Ok(BivariateKernel { data: MatData::Exact(rows) })
    }

    pub fn from_floats(rows: Vec<Vec<f64>>) -> Result<Self> {
        check_square(rows.len(), rows.iter().map(|r| r.len()))?;
        for m in 0..rows.len() {
            for n in 0..m {
                if rows[m][n] != rows[n][m] {
                    return Err(Error::NonHermitian { row: m, col: n });
                }
            }
        }
        Ok(BivariateKernel { data: MatData::Float(rows) })
    }

    /// A diagonal kernel embedded as a coefficient matrix.
    pub fn from_diagonal(k: &DiagonalKernel) -> Self {
        let order = k.order();
        let data = match k.coeffs().rationals() {
            Some(v) => {
                let mut rows = vec![vec![BigRational::zero(); order + 1]; order + 1];
                for (n, a) in v.iter().enumerate() {
                    rows[n][n] = a.clone();
                }
                MatData::Exact(rows)
            }
            None => {
                let v = k.coeffs().floats().expect("float mode");
                let mut rows = vec![vec![0.0; order + 1]; order + 1];
                for (n, a) in v.iter().enumerate() {
                    rows[n][n] = *a;
                }
                MatData::Float(rows)
            }
        };
        BivariateKernel { data }
    }

    pub fn order(&self) -> usize {
        match &self.data {
            MatData::Exact(r) => r.len() - 1,
            MatData::Float(r) => r.len() - 1,
        }
    }

    pub fn mode(&self) -> Mode {
        match &self.data {
            MatData::Exact(_) => Mode::Exact,
            MatData::Float(_) => Mode::Float,
        }
    }

    pub fn get(&self, m: usize, n: usize) -> Scalar {
        match &self.data {
            MatData::Exact(r) => Scalar::Exact(r[m][n].clone()),
            MatData::Float(r) => Scalar::Float(r[m][n]),
        }
    }

    pub fn coeff_f64(&self, m: usize, n: usize) -> f64 {
        match &self.data {
            MatData::Exact(r) => rational_to_f64(&r[m][n]),
            MatData::Float(r) => r[m][n],
        }
    }

    pub fn to_float_rows(&self) -> Vec<Vec<f64>> {
        match &self.data {
            MatData::Exact(r) => r.iter().map(|row| row.iter().map(rational_to_f64).collect()).collect(),
            MatData::Float(r) => r.clone(),
        }
    }

    pub fn to_float_mode(&self) -> BivariateKernel {
        BivariateKernel { data: MatData::Float(self.to_float_rows()) }
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        let n = self.order() + 1;
        let rows = self.to_float_rows();
        DMatrix::from_fn(n, n, |i, j| rows[i][j])
    }

    /// The diagonal `a_{n,n}` as a sequence.
    pub fn diagonal(&self) -> CoeffSeq {
        match &self.data {
            MatData::Exact(r) => {
                CoeffSeq::from_rationals((0..r.len()).map(|n| r[n][n].clone()).collect())
            }
            MatData::Float(r) => CoeffSeq::from_floats((0..r.len()).map(|n| r[n][n]).collect()),
        }
    }
}

fn check_square(n: usize, row_lens: impl Iterator<Item = usize>) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyInput("coefficient matrix"));
    }
    for len in row_lens {
        if len != n {
            return Err(Error::KernelSchema(format!(
                "matrix rows must all have length {n}"
            )));
        }
    }
    Ok(())
}

/// Coefficients of `Kdiag(z,w) * (1 + p(z) conj(p)(w))`:
/// `a_{m,n} = d_m [m=n] + sum_i d_i p_{m-i} p_{n-i}`.
pub fn rank_one_augment(kdiag: &DiagonalKernel, p: &PolyFactor, order: usize) -> Result<BivariateKernel> {
    if kdiag.mode() != p.mode() {
        return Err(Error::ModeMismatch(kdiag.mode(), p.mode()));
    }
    if order > kdiag.order() {
        return Err(Error::OrderExceeded { requested: order, available: kdiag.order() });
    }
    let deg = p.degree();
    // Fill the lower triangle and mirror it, so symmetry holds bitwise
    // in float mode regardless of rounding.
    match kdiag.coeffs().rationals() {
        Some(d) => {
            let pc: Vec<BigRational> = p.coeffs().rationals().expect("mode checked").to_vec();
            let mut rows = vec![vec![BigRational::zero(); order + 1]; order + 1];
            for m in 0..=order {
                for n in 0..=m {
                    let mut acc = if m == n { d[m].clone() } else { BigRational::zero() };
                    let lo = m.saturating_sub(deg);
                    for i in lo..=n {
                        acc += &d[i] * &pc[m - i] * &pc[n - i];
                    }
                    rows[m][n] = acc.clone();
                    rows[n][m] = acc;
                }
            }
            BivariateKernel::from_rationals(rows)
        }
        None => {
            let d = kdiag.coeffs().floats().expect("float mode");
            let pc: Vec<f64> = p.coeffs().floats().expect("mode checked").to_vec();
            let mut rows = vec![vec![0.0; order + 1]; order + 1];
            for m in 0..=order {
                for n in 0..=m {
                    let mut acc = if m == n { d[m] } else { 0.0 };
                    let lo = m.saturating_sub(deg);
                    for i in lo..=n {
                        acc += d[i] * pc[m - i] * pc[n - i];
                    }
                    rows[m][n] = acc;
                    rows[n][m] = acc;
                }
            }
            BivariateKernel::from_floats(rows)
        }
    }
}

/// Deconvolves a diagonal base kernel out of a bivariate kernel:
/// returns `G` with `K = base * G`, solved by
/// `g_{m,n} = a_{m,n} - sum_{i>=1} b_i g_{m-i,n-i}`.
///
/// Requires `b_0 = 1`, which holds for every `D_alpha` base; the
/// restriction preserves exactness instead of dividing through.
pub fn bivariate_cofactor(k: &BivariateKernel, base: &DiagonalKernel, order: usize) -> Result<BivariateKernel> {
    if k.mode() != base.mode() {
        return Err(Error::ModeMismatch(k.mode(), base.mode()));
    }
    if order > k.order() || order > base.order() {
        return Err(Error::OrderExceeded {
            requested: order,
            available: k.order().min(base.order()),
        });
    }
    match &k.data {
        MatData::Exact(a) => {
            let b = base.coeffs().rationals().expect("mode checked");
            if !b[0].is_one() {
                return Err(Error::InvalidParameter(
                    "bivariate cofactor requires base coefficient b_0 = 1".into(),
                ));
            }
            let mut g = vec![vec![BigRational::zero(); order + 1]; order + 1];
            for m in 0..=order {
                for n in 0..=order {
                    let mut acc = a[m][n].clone();
                    for i in 1..=m.min(n) {
                        acc -= &b[i] * &g[m - i][n - i];
                    }
                    g[m][n] = acc;
                }
            }
            BivariateKernel::from_rationals(g)
        }
        MatData::Float(a) => {
            let b = base.coeffs().floats().expect("mode checked");
            if b[0] != 1.0 {
                return Err(Error::InvalidParameter(
                    "bivariate cofactor requires base coefficient b_0 = 1".into(),
                ));
            }
            let mut g = vec![vec![0.0; order + 1]; order + 1];
            for m in 0..=order {
                for n in 0..=order {
                    let mut acc = a[m][n];
                    for i in 1..=m.min(n) {
                        acc -= b[i] * g[m - i][n - i];
                    }
                    g[m][n] = acc;
                }
            }
            BivariateKernel::from_floats(g)
        }
    }
}

/// Outcome of a positive-semidefiniteness check of a coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsdVerdict {
    Positive,
    /// `witness` is the most negative eigenvalue estimate.
    Indefinite { witness: f64 },
}

impl PsdVerdict {
    pub fn is_positive(&self) -> bool {
        matches!(self, PsdVerdict::Positive)
    }
}

/// Tests the coefficient matrix for positive semidefiniteness via a
/// symmetric eigendecomposition; eigenvalues above `-tol` count as
/// non-negative.
pub fn psd_check(g: &BivariateKernel, tol: f64) -> PsdVerdict {
    let m = g.to_dmatrix();
    let eig = m.symmetric_eigen();
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min >= -tol {
        PsdVerdict::Positive
    } else {
        PsdVerdict::Indefinite { witness: min }
    }
}

/// Frame extracted from a positive coefficient matrix: component
/// polynomials of a pivoted factorization `G = L L*`, the revealed rank,
/// and the worst reconstruction residual of `G(w,w)` on the test grid.
#[derive(Debug, Clone)]
pub struct FrameFactorization {
    pub components: Vec<PolyFactor>,
    pub rank: usize,
    pub residual: f64,
}

/// Extracts frame components `gamma_i` with
/// `sum_i gamma_i(z) conj(gamma_i(w)) = G(z,w)` by pivoted Cholesky.
///
/// Columns are ordered by decreasing pivot; the rank tolerance is
/// `1e-12 * max diagonal`. The reconstruction of `G(w,w)` is verified
/// within `tol` on an internal polar grid before returning.
pub fn frame_from_gram(g: &BivariateKernel, tol: f64) -> Result<FrameFactorization> {
    if let PsdVerdict::Indefinite { witness } = psd_check(g, 1e-9) {
        return Err(Error::IndefiniteKernel { witness });
    }
    let n = g.order() + 1;
    let a = g.to_float_rows();
    let max_diag = (0..n).map(|i| a[i][i]).fold(0.0_f64, f64::max);
    let rank_tol = 1e-12 * max_diag.max(f64::MIN_POSITIVE);

    // Pivoted Cholesky: rows stay in original index order, columns are
    // produced in pivot order.
    let mut low = vec![vec![0.0_f64; n]; n];
    let mut diag: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    let mut piv: Vec<usize> = (0..n).collect();
    let mut rank = n;
    for k in 0..n {
        let mut best_j = k;
        for j in k + 1..n {
            if diag[piv[j]] > diag[piv[best_j]] {
                best_j = j;
            }
        }
        let best = diag[piv[best_j]];
        if best <= rank_tol {
            rank = k;
            break;
        }
        piv.swap(k, best_j);
        let pk = piv[k];
        let lkk = best.sqrt();
        low[pk][k] = lkk;
        for &pj in piv[k + 1..].iter() {
            let mut s = a[pj][pk];
            for t in 0..k {
                s -= low[pj][t] * low[pk][t];
            }
            let l = s / lkk;
            low[pj][k] = l;
            diag[pj] -= l * l;
        }
    }

    let components: Vec<PolyFactor> = (0..rank)
        .map(|k| PolyFactor::from_floats((0..n).map(|m| low[m][k]).collect()))
        .collect();

    // Verify sum_i |gamma_i(w)|^2 against G(w,w) on a polar test grid.
    let mut residual = 0.0_f64;
    for ri in 1..=8 {
        let r = 0.95 * ri as f64 / 8.0;
        for ti in 0..16 {
            let th = 2.0 * std::f64::consts::PI * ti as f64 / 16.0;
            let w = Complex64::from_polar(r, th);
            let frame_sum: f64 = components.iter().map(|c| c.eval(w).norm_sqr()).sum();
            let direct = bivariate_metric_f64(&a, w);
            residual = residual.max((frame_sum - direct).abs());
        }
    }
    if residual > tol {
        return Err(Error::IndefiniteKernel { witness: -residual });
    }
    Ok(FrameFactorization { components, rank, residual })
}

/// `sum a_{m,n} w^m wbar^n` for a real coefficient matrix; the result is
/// real by Hermitian symmetry, up to rounding.
pub(crate) fn bivariate_metric_f64(rows: &[Vec<f64>], w: Complex64) -> f64 {
    let n = rows.len();
    let wb = w.conj();
    let mut wpow = Vec::with_capacity(n);
    let mut wbpow = Vec::with_capacity(n);
    let (mut p, mut q) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    for _ in 0..n {
        wpow.push(p);
        wbpow.push(q);
        p *= w;
        q *= wb;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, row) in rows.iter().enumerate() {
        for (k, &c) in row.iter().enumerate() {
            if c != 0.0 {
                acc += c * wpow[m] * wbpow[k];
            }
        }
    }
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::TailBound;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn standard_family_values() {
        let m1 = standard_coeffs(StandardFamily::Binomial { n: 1 }, 5, Mode::Exact).unwrap();
        assert!((0..=5).all(|j| m1.coeffs().get(j) == Scalar::from_int(1)));

        let m2 = standard_coeffs(StandardFamily::Binomial { n: 2 }, 5, Mode::Exact).unwrap();
        assert!((0..=5).all(|j| m2.coeffs().get(j) == Scalar::from_int(j as i64 + 1)));

        let d1 = standard_coeffs(StandardFamily::DirichletAlpha { alpha: 1.0 }, 5, Mode::Exact).unwrap();
        assert!((0..=5).all(|j| d1.coeffs().get(j) == Scalar::ratio(1, j as i64 + 1)));

        let h2 = standard_coeffs(StandardFamily::PowerWeight { k: 2.0 }, 3, Mode::Exact).unwrap();
        assert_eq!(h2.coeffs().get(3), Scalar::ratio(1, 16));
    }

    #[test]
    fn standard_family_rejects_bad_parameters() {
        assert!(standard_coeffs(StandardFamily::Binomial { n: 0 }, 3, Mode::Float).is_err());
        assert!(standard_coeffs(StandardFamily::DirichletAlpha { alpha: 0.0 }, 3, Mode::Float).is_err());
        assert!(standard_coeffs(StandardFamily::DirichletAlpha { alpha: 1.5 }, 3, Mode::Float).is_err());
        // Fractional exponents have no exact representation.
        assert!(matches!(
            standard_coeffs(StandardFamily::DirichletAlpha { alpha: 0.5 }, 3, Mode::Exact),
            Err(Error::ExactUnsupported(_))
        ));
        assert!(standard_coeffs(StandardFamily::DirichletAlpha { alpha: 0.5 }, 3, Mode::Float).is_ok());
    }

    #[test]
    fn diag_product_matches_double_sum() {
        let d1 = DiagonalKernel::dirichlet(8, Mode::Exact);
        let sq = standard_coeffs(StandardFamily::PowerWeight { k: 2.0 }, 8, Mode::Exact).unwrap();
        let prod = diag_product(&d1, &sq, 8).unwrap();
        for n in 0..=8usize {
            let mut expect = BigRational::zero();
            for i in 0..=n {
                expect += q(1, (i as i64 + 1) * ((n - i) as i64 + 1).pow(2));
            }
            assert_eq!(prod.coeffs().get(n), Scalar::Exact(expect));
        }
    }

    #[test]
    fn diag_product_with_constant_one_kernel_is_identity() {
        let d1 = DiagonalKernel::dirichlet(6, Mode::Exact);
        let product = cauchy_product(d1.coeffs(), &CoeffSeq::delta(6, Mode::Exact), 6).unwrap();
        assert_eq!(&product, d1.coeffs());
    }

    #[test]
    fn rank_one_augment_zero_polynomial_embeds_diagonal() {
        let d1 = DiagonalKernel::dirichlet(4, Mode::Exact);
        let zero = PolyFactor::from_ints(&[0], Mode::Exact);
        assert!(zero.is_zero());
        let k = rank_one_augment(&d1, &zero, 4).unwrap();
        assert_eq!(k, BivariateKernel::from_diagonal(&d1));
    }

    #[test]
    fn rank_one_augment_quadratic_entry() {
        // entry (2,2) of D_1 * [1 + (1+z+z^2)(1+wbar+wbar^2)]:
        // 1/3 * 2 + 1/2 + 1 = 13/6.
        let d1 = DiagonalKernel::dirichlet(8, Mode::Exact);
        let p = PolyFactor::from_ints(&[1, 1, 1], Mode::Exact);
        let k = rank_one_augment(&d1, &p, 8).unwrap();
        assert_eq!(k.get(2, 2), Scalar::Exact(q(13, 6)));
        assert_eq!(k.get(0, 0), Scalar::from_int(2));
        assert_eq!(k.get(1, 0), Scalar::from_int(1));
        assert_eq!(k.get(1, 1), Scalar::from_int(2));
        // Bandwidth of the augmentation equals deg p.
        assert_eq!(k.get(5, 1), Scalar::from_int(0));
    }

    #[test]
    fn rank_one_augment_matches_banded_closed_form() {
        let order = 40usize;
        let d1 = DiagonalKernel::dirichlet(order, Mode::Exact);
        let p = PolyFactor::from_ints(&[1, 1, 1], Mode::Exact);
        let k = rank_one_augment(&d1, &p, order).unwrap();
        for n in 0..=(order as i64 - 2) {
            // diagonal (n+2, n+2): (4n^2+15n+13)/((n+1)(n+2)(n+3))
            let expect = q(4 * n * n + 15 * n + 13, (n + 1) * (n + 2) * (n + 3));
            assert_eq!(k.get(n as usize + 2, n as usize + 2), Scalar::Exact(expect));
        }
        for n in 1..=(order as i64 - 1) {
            // first off-diagonal (n+1, n): (2n+1)/(n(n+1))
            let expect = q(2 * n + 1, n * (n + 1));
            assert_eq!(k.get(n as usize + 1, n as usize), Scalar::Exact(expect));
        }
        for n in 0..=(order as i64 - 2) {
            // second off-diagonal (n+2, n): 1/(n+1)
            assert_eq!(k.get(n as usize + 2, n as usize), Scalar::Exact(q(1, n + 1)));
        }
    }

    #[test]
    fn cofactor_of_base_itself_is_delta_matrix() {
        let d1 = DiagonalKernel::dirichlet(6, Mode::Exact);
        let k = BivariateKernel::from_diagonal(&d1);
        let g = bivariate_cofactor(&k, &d1, 6).unwrap();
        for m in 0..=6 {
            for n in 0..=6 {
                let expect = if (m, n) == (0, 0) { Scalar::from_int(1) } else { Scalar::from_int(0) };
                assert_eq!(g.get(m, n), expect);
            }
        }
    }

    #[test]
    fn cofactor_requires_unit_leading_base_coefficient() {
        let m2 = standard_coeffs(StandardFamily::Binomial { n: 2 }, 4, Mode::Exact).unwrap();
        let half = DiagonalKernel::new(
            CoeffSeq::from_rationals(vec![q(1, 2); 5]),
            "b0=1/2",
        )
        .unwrap();
        let k = BivariateKernel::from_diagonal(&m2);
        assert!(bivariate_cofactor(&k, &half, 4).is_err());
    }

    #[test]
    fn cofactor_recovers_polynomial_gram_factor() {
        // K = D_1 * [1 + p(z) conj(p)(w)] deconvolves back to the Gram
        // coefficients of 1 + p p*: g_{0,0} = 2 and g_{m,n} = p_m p_n.
        let order = 12usize;
        let d1 = DiagonalKernel::dirichlet(order, Mode::Exact);
        let p = PolyFactor::from_ints(&[1, 1, 1], Mode::Exact);
        let k = rank_one_augment(&d1, &p, order).unwrap();
        let g = bivariate_cofactor(&k, &d1, order).unwrap();
        for m in 0..=order {
            for n in 0..=order {
                let pm = if m <= 2 { 1 } else { 0 };
                let pn = if n <= 2 { 1 } else { 0 };
                let mut expect = q(pm * pn, 1);
                if (m, n) == (0, 0) {
                    expect += BigRational::one();
                }
                assert_eq!(g.get(m, n), Scalar::Exact(expect), "entry ({m},{n})");
            }
        }
    }

    #[test]
    fn psd_check_trivial_cases() {
        let id = BivariateKernel::from_floats(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(psd_check(&id, 1e-12).is_positive());
        let indef = BivariateKernel::from_floats(vec![vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        match psd_check(&indef, 1e-12) {
            PsdVerdict::Indefinite { witness } => assert!((witness + 1.0).abs() < 1e-12),
            PsdVerdict::Positive => panic!("diag(1,-1) must be indefinite"),
        }
    }

    #[test]
    fn hermitian_violation_is_rejected() {
        assert!(matches!(
            BivariateKernel::from_floats(vec![vec![1.0, 2.0], vec![0.5, 1.0]]),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn frame_from_delta_matrix_is_constant_one() {
        let delta = BivariateKernel::from_floats(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let f = frame_from_gram(&delta, 1e-10).unwrap();
        assert_eq!(f.rank, 1);
        assert_eq!(f.components.len(), 1);
        let w = Complex64::new(0.4, 0.3);
        assert!((f.components[0].eval(w) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn frame_from_diagonal_gram_is_scaled_monomials() {
        let n = 6usize;
        let mut rows = vec![vec![0.0; n + 1]; n + 1];
        for k in 0..=n {
            rows[k][k] = 1.0 / ((k as f64 + 1.0) * (k as f64 + 1.0));
        }
        let g = BivariateKernel::from_floats(rows).unwrap();
        let f = frame_from_gram(&g, 1e-10).unwrap();
        assert_eq!(f.rank, n + 1);
        // Pivots decrease along the diagonal, so component k is w^k/(k+1).
        for (k, c) in f.components.iter().enumerate() {
            assert_eq!(c.degree(), k);
            let w = Complex64::new(0.5, -0.2);
            let expect = w.powi(k as i32) / (k as f64 + 1.0);
            assert!((c.eval(w) - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn frame_reproduces_polynomial_gram_metric() {
        // G = 1 + p(z) conj(p)(w) with p = 1 + z + z^2: two components
        // whose square sum is 1 + |p(w)|^2.
        let g = BivariateKernel::from_floats(vec![
            vec![2.0, 1.0, 1.0],
            vec![1.0, 1.0, 1.0],
            vec![1.0, 1.0, 1.0],
        ])
        .unwrap();
        let f = frame_from_gram(&g, 1e-10).unwrap();
        assert_eq!(f.rank, 2);
        let p = PolyFactor::from_ints(&[1, 1, 1], Mode::Float);
        for &(re, im) in &[(0.0, 0.0), (0.3, 0.4), (-0.7, 0.1), (0.0, -0.9)] {
            let w = Complex64::new(re, im);
            let sum: f64 = f.components.iter().map(|c| c.eval(w).norm_sqr()).sum();
            let expect = 1.0 + p.eval(w).norm_sqr();
            assert!((sum - expect).abs() < 1e-10, "w = {w}");
        }
    }

    #[test]
    fn frame_rejects_indefinite_input() {
        let indef = BivariateKernel::from_floats(vec![vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert!(matches!(frame_from_gram(&indef, 1e-10), Err(Error::IndefiniteKernel { .. })));
    }

    #[test]
    fn diagonal_kernel_requires_positive_coefficients() {
        let bad = CoeffSeq::from_floats(vec![1.0, 0.0, 1.0]);
        assert!(matches!(
            DiagonalKernel::new(bad, "bad"),
            Err(Error::NonPositiveCoefficient { index: 1 })
        ));
    }

    #[test]
    fn float_mode_conversion_preserves_values() {
        let d1 = DiagonalKernel::dirichlet(10, Mode::Exact);
        let f = d1.to_float_mode();
        assert_eq!(f.mode(), Mode::Float);
        let x = 0.3;
        let a = d1.coeffs().eval_radial(x, TailBound::None).unwrap().value;
        let b = f.coeffs().eval_radial(x, TailBound::None).unwrap().value;
        assert!((a - b).abs() < 1e-15);
    }
}
