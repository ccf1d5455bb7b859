//! Finite power-series prefixes and the convolution/evaluation kernel
//! used throughout the crate.
//!
//! A [`CoeffSeq`] stores the prefix `a_0..a_N` of a series in one
//! arithmetic mode. Binary operations require equal modes; the
//! convolution inverse is computed by the forward recursion
//! `r_l = -(1/b_0) * sum_{j<l} r_j b_{l-j}`, which stays exact in exact
//! mode.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, Mode, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum SeqData {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// Finite prefix `a_0..a_N` of a power-series coefficient sequence.
/// All entries share one arithmetic mode by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq {
    data: SeqData,
}

/// Tail-bound policy for radial evaluation.
///
/// The geometric variant is a caller-supplied uniform coefficient bound
/// `a_n <= C` for `n` beyond the stored prefix; no kernel in this crate
/// certifies its own tail decay, so every report quoting the bound flags
/// it as an assumption.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailBound {
    None,
    Geometric { bound: f64 },
}

/// Result of a radial evaluation: the partial sum and the tail bound
/// (zero when no tail policy was supplied).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialEval {
    pub value: f64,
    pub tail_bound: f64,
}

impl CoeffSeq {
    pub fn from_rationals(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "coefficient sequence must be non-empty");
        CoeffSeq { data: SeqData::Exact(coeffs) }
    }

    pub fn from_floats(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "coefficient sequence must be non-empty");
        CoeffSeq { data: SeqData::Float(coeffs) }
    }

    /// Builds a sequence from scalars, all of which must share one mode.
    pub fn from_scalars(coeffs: Vec<Scalar>) -> Result<Self> {
        let first = coeffs.first().ok_or(Error::EmptyInput("coefficient list"))?;
        let mode = first.mode();
        match mode {
            Mode::Exact => {
                let mut out = Vec::with_capacity(coeffs.len());
                for c in &coeffs {
                    match c {
                        Scalar::Exact(q) => out.push(q.clone()),
                        Scalar::Float(_) => return Err(Error::ModeMismatch(Mode::Exact, Mode::Float)),
                    }
                }
                Ok(CoeffSeq::from_rationals(out))
            }
            Mode::Float => {
                let mut out = Vec::with_capacity(coeffs.len());
                for c in &coeffs {
                    match c {
                        Scalar::Float(x) => out.push(*x),
                        Scalar::Exact(_) => return Err(Error::ModeMismatch(Mode::Float, Mode::Exact)),
                    }
                }
                Ok(CoeffSeq::from_floats(out))
            }
        }
    }

    /// Convolution identity: `1, 0, 0, ...` up to `order`.
    pub fn delta(order: usize, mode: Mode) -> Self {
        match mode {
            Mode::Exact => {
                let mut v = vec![BigRational::zero(); order + 1];
                v[0] = BigRational::one();
                CoeffSeq::from_rationals(v)
            }
            Mode::Float => {
                let mut v = vec![0.0; order + 1];
                v[0] = 1.0;
                CoeffSeq::from_floats(v)
            }
        }
    }

    pub fn mode(&self) -> Mode {
        match &self.data {
            SeqData::Exact(_) => Mode::Exact,
            SeqData::Float(_) => Mode::Float,
        }
    }

    pub fn len(&self) -> usize {
        match &self.data {
            SeqData::Exact(v) => v.len(),
            SeqData::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Highest stored index `N`.
    pub fn order(&self) -> usize {
        self.len() - 1
    }

    pub fn get(&self, n: usize) -> Scalar {
        match &self.data {
            SeqData::Exact(v) => Scalar::Exact(v[n].clone()),
            SeqData::Float(v) => Scalar::Float(v[n]),
        }
    }

    pub fn rationals(&self) -> Option<&[BigRational]> {
        match &self.data {
            SeqData::Exact(v) => Some(v),
            SeqData::Float(_) => None,
        }
    }

    pub fn floats(&self) -> Option<&[f64]> {
        match &self.data {
            SeqData::Float(v) => Some(v),
            SeqData::Exact(_) => None,
        }
    }

    /// Coefficients rounded to f64 regardless of mode.
    pub fn to_floats(&self) -> Vec<f64> {
        match &self.data {
            SeqData::Exact(v) => v.iter().map(rational_to_f64).collect(),
            SeqData::Float(v) => v.clone(),
        }
    }

    pub fn coeff_f64(&self, n: usize) -> f64 {
        match &self.data {
            SeqData::Exact(v) => rational_to_f64(&v[n]),
            SeqData::Float(v) => v[n],
        }
    }

    /// Prefix of the first `order + 1` coefficients.
    pub fn truncated(&self, order: usize) -> Result<CoeffSeq> {
        if order > self.order() {
            return Err(Error::OrderExceeded { requested: order, available: self.order() });
        }
        Ok(match &self.data {
            SeqData::Exact(v) => CoeffSeq::from_rationals(v[..=order].to_vec()),
            SeqData::Float(v) => CoeffSeq::from_floats(v[..=order].to_vec()),
        })
    }

    /// Entrywise scaling by a same-mode scalar.
    pub fn scaled(&self, factor: &Scalar) -> Result<CoeffSeq> {
        match (&self.data, factor) {
            (SeqData::Exact(v), Scalar::Exact(q)) => {
                Ok(CoeffSeq::from_rationals(v.iter().map(|a| a * q).collect()))
            }
            (SeqData::Float(v), Scalar::Float(x)) => {
                Ok(CoeffSeq::from_floats(v.iter().map(|a| a * x).collect()))
            }
            _ => Err(Error::ModeMismatch(self.mode(), factor.mode())),
        }
    }

    /// Radial partial sum `sum_n a_n x^n` with an optional geometric
    /// tail bound `C x^{N+1} / (1 - x)`.
    pub fn eval_radial(&self, x: f64, tail: TailBound) -> Result<RadialEval> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::OutsideDisk { modulus: x });
        }
        let coeffs = self.to_floats();
        // Horner from the top keeps the summation order fixed.
        let mut value = 0.0;
        for a in coeffs.iter().rev() {
            value = value * x + a;
        }
        let tail_bound = match tail {
            TailBound::None => 0.0,
            TailBound::Geometric { bound } => bound * x.powi(self.len() as i32) / (1.0 - x),
        };
        Ok(RadialEval { value, tail_bound })
    }

    /// Mixed derivative `d^{i+j} h / dw^i dwbar^j` at `w` of the diagonal
    /// metric `h(w) = sum_n a_n w^n wbar^n`, i.e.
    /// `sum_{n >= max(i,j)} a_n n!/(n-i)! n!/(n-j)! w^{n-i} wbar^{n-j}`.
    ///
    /// In exact mode the falling-factorial weights are exact integers;
    /// in float mode they are accumulated incrementally in f64.
    pub fn jet_entry(&self, i: usize, j: usize, w: Complex64) -> Result<Complex64> {
        if w.norm() >= 1.0 {
            return Err(Error::OutsideDisk { modulus: w.norm() });
        }
        if i > self.order() || j > self.order() {
            return Err(Error::OrderExceeded {
                requested: i.max(j),
                available: self.order(),
            });
        }
        let n0 = i.max(j);
        let wb = w.conj();
        let mut w_pow = w.powi((n0 - i) as i32);
        let mut wb_pow = wb.powi((n0 - j) as i32);
        let mut sum = Complex64::new(0.0, 0.0);
        match &self.data {
            SeqData::Exact(v) => {
                for n in n0..=self.order() {
                    let weight = falling(n, i) * falling(n, j);
                    let c = rational_to_f64(&(&v[n] * BigRational::from_integer(weight)));
                    sum += c * w_pow * wb_pow;
                    w_pow *= w;
                    wb_pow *= wb;
                }
            }
            SeqData::Float(v) => {
                let mut ff_i = falling_f64(n0, i);
                let mut ff_j = falling_f64(n0, j);
                for n in n0..=self.order() {
                    sum += v[n] * ff_i * ff_j * w_pow * wb_pow;
                    w_pow *= w;
                    wb_pow *= wb;
                    let m = (n + 1) as f64;
                    ff_i *= m / (m - i as f64);
                    ff_j *= m / (m - j as f64);
                }
            }
        }
        Ok(sum)
    }
}

fn falling(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for t in 0..k {
        acc *= BigInt::from(n - t);
    }
    acc
}

fn falling_f64(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for t in 0..k {
        acc *= (n - t) as f64;
    }
    acc
}

fn convolve<T>(a: &[T], b: &[T], order: usize) -> Vec<T>
where
    T: Clone + Zero,
    for<'x> &'x T: std::ops::Mul<&'x T, Output = T>,
{
    (0..=order)
        .map(|n| {
            let mut acc = T::zero();
            for i in 0..=n {
                acc = acc + &a[i] * &b[n - i];
            }
            acc
        })
        .collect()
}

fn reciprocal_rec<T>(b: &[T], order: usize) -> Vec<T>
where
    T: Clone + Zero + One + std::ops::Div<Output = T> + std::ops::Neg<Output = T>,
    for<'x> &'x T: std::ops::Mul<&'x T, Output = T>,
{
    let mut r = Vec::with_capacity(order + 1);
    r.push(T::one() / b[0].clone());
    for l in 1..=order {
        let mut acc = T::zero();
        for (j, rj) in r.iter().enumerate() {
            acc = acc + rj * &b[l - j];
        }
        r.push(-(acc / b[0].clone()));
    }
    r
}

/// Truncated Cauchy product `c_n = sum_{i=0}^{n} a_i b_{n-i}`, `n <= order`.
pub fn cauchy_product(a: &CoeffSeq, b: &CoeffSeq, order: usize) -> Result<CoeffSeq> {
    if order > a.order() || order > b.order() {
        return Err(Error::OrderExceeded {
            requested: order,
            available: a.order().min(b.order()),
        });
    }
    match (&a.data, &b.data) {
        (SeqData::Exact(x), SeqData::Exact(y)) => {
            Ok(CoeffSeq::from_rationals(convolve(x, y, order)))
        }
        (SeqData::Float(x), SeqData::Float(y)) => {
            Ok(CoeffSeq::from_floats(convolve(x, y, order)))
        }
        _ => Err(Error::ModeMismatch(a.mode(), b.mode())),
    }
}

/// Convolution inverse of `b` through `order`: the returned `r` satisfies
/// `(b * r)_0 = 1` and `(b * r)_l = 0` for `1 <= l <= order`.
pub fn series_reciprocal(b: &CoeffSeq, order: usize) -> Result<CoeffSeq> {
    if order > b.order() {
        return Err(Error::OrderExceeded { requested: order, available: b.order() });
    }
    match &b.data {
        SeqData::Exact(v) => {
            if v[0].is_zero() {
                return Err(Error::ZeroLeadingCoefficient);
            }
            Ok(CoeffSeq::from_rationals(reciprocal_rec(v, order)))
        }
        SeqData::Float(v) => {
            if v[0] == 0.0 {
                return Err(Error::ZeroLeadingCoefficient);
            }
            Ok(CoeffSeq::from_floats(reciprocal_rec(v, order)))
        }
    }
}
