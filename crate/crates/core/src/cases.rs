//! Constructors for the worked verification cases shipped with the CLI
//! registry: product kernels with quintic-gap and inverse-square
//! factors, the polynomial-augmented Dirichlet kernel and its banded
//! expansion, and the banded cubic kernel.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::kernels::{
    rank_one_augment, BivariateKernel, DiagonalKernel, PolyFactor,
};
use crate::multiplier::{FrameComponent, FrameFamily, MonomialSymbol};
use crate::scalar::{Mode, Scalar};
use crate::series::{cauchy_product, CoeffSeq};

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Factor sequence `1/(j+1)^8` supported on the fifth powers `n = j^5`,
/// zero elsewhere.
pub fn quintic_factor(order: usize, mode: Mode) -> CoeffSeq {
    match mode {
        Mode::Exact => {
            let mut v = vec![BigRational::zero(); order + 1];
            let mut j = 0usize;
            while j.pow(5) <= order {
                v[j.pow(5)] = BigRational::new(BigInt::one(), BigInt::from(j as i64 + 1).pow(8));
                j += 1;
            }
            CoeffSeq::from_rationals(v)
        }
        Mode::Float => {
            let mut v = vec![0.0; order + 1];
            let mut j = 0usize;
            while j.pow(5) <= order {
                v[j.pow(5)] = (j as f64 + 1.0).powi(-8);
                j += 1;
            }
            CoeffSeq::from_floats(v)
        }
    }
}

/// Product of the Dirichlet kernel with the quintic-gap factor:
/// `a_n = sum_{i + j^5 = n} 1/((i+1)(j+1)^8)`.
pub fn quintic_product(order: usize, mode: Mode) -> Result<DiagonalKernel> {
    let d1 = DiagonalKernel::dirichlet(order, mode);
    let coeffs = cauchy_product(d1.coeffs(), &quintic_factor(order, mode), order)?;
    DiagonalKernel::new(coeffs, "dirichlet * quintic-gap")
}

/// The frame family `gamma_k(w) = w^{k^5} / (k+1)^4` truncated to
/// `count` components, with the zeta-tail bound
/// `sum_{k >= count} 2/(k+1)^2 = pi^2/3 - 2 sum_{k < count} 1/(k+1)^2`
/// on the multiplier-norm-squared tail.
pub fn quintic_frame_family(count: usize) -> FrameFamily {
    let components = (0..count)
        .map(|k| {
            FrameComponent::Monomial(MonomialSymbol::new(
                Scalar::Float((k as f64 + 1.0).powi(-4)),
                k.pow(5),
            ))
        })
        .collect();
    let partial: f64 = (0..count).map(|k| 2.0 / ((k as f64 + 1.0) * (k as f64 + 1.0))).sum();
    FrameFamily {
        components,
        tail_norm_sq_bound: std::f64::consts::PI.powi(2) / 3.0 - partial,
        tail_note: format!(
            "norm^2 of component k is bounded by 2/(k+1)^2; tail over k >= {count} \
             equals pi^2/3 minus the stored partial sum"
        ),
    }
}

/// The frame family `gamma_i(w) = w^{i-1} / i`, `i = 1..=count`. Each
/// component already has multiplier norm squared `1/i`, so the family
/// sum dominates the harmonic series and no finite tail bound exists.
pub fn harmonic_frame_family(count: usize) -> FrameFamily {
    let components = (1..=count)
        .map(|i| {
            FrameComponent::Monomial(MonomialSymbol::new(Scalar::Float(1.0 / i as f64), i - 1))
        })
        .collect();
    FrameFamily {
        components,
        tail_norm_sq_bound: f64::INFINITY,
        tail_note: "component norm^2 is exactly 1/i; the series diverges".into(),
    }
}

/// Factor sequence `1/(n+1)^2`.
pub fn inverse_square_factor(order: usize, mode: Mode) -> CoeffSeq {
    match mode {
        Mode::Exact => CoeffSeq::from_rationals(
            (0..=order)
                .map(|n| BigRational::new(BigInt::one(), BigInt::from(n as i64 + 1).pow(2)))
                .collect(),
        ),
        Mode::Float => CoeffSeq::from_floats(
            (0..=order).map(|n| (n as f64 + 1.0).powi(-2)).collect(),
        ),
    }
}

/// Product of the Dirichlet kernel with the inverse-square factor,
/// `a_n = sum_{i=0}^{n} 1/((i+1)(n-i+1)^2)`, computed in `O(order)` via
/// the partial-fraction identity
/// `a_n = 2 H_{n+1}/(n+2)^2 + H^{(2)}_{n+1}/(n+2)`.
pub fn harmonic_square_product(order: usize) -> DiagonalKernel {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut h = 0.0_f64; // H_{n+1}
    let mut h2 = 0.0_f64; // H^{(2)}_{n+1}
    for n in 0..=order {
        let m = n as f64 + 1.0;
        h += 1.0 / m;
        h2 += 1.0 / (m * m);
        coeffs.push(2.0 * h / ((m + 1.0) * (m + 1.0)) + h2 / (m + 1.0));
    }
    DiagonalKernel::new(CoeffSeq::from_floats(coeffs), "dirichlet * inverse-squares")
        .expect("coefficients are positive")
}

/// Exact-mode cross-check route for [`harmonic_square_product`]: the
/// direct Cauchy product, `O(order^2)`.
pub fn harmonic_square_product_exact(order: usize) -> Result<DiagonalKernel> {
    let d1 = DiagonalKernel::dirichlet(order, Mode::Exact);
    let coeffs = cauchy_product(d1.coeffs(), &inverse_square_factor(order, Mode::Exact), order)?;
    DiagonalKernel::new(coeffs, "dirichlet * inverse-squares (exact)")
}

/// The augmenting polynomial `1 + z + z^2`.
pub fn unit_quadratic(mode: Mode) -> PolyFactor {
    PolyFactor::from_ints(&[1, 1, 1], mode)
}

/// `D_1(z,w) * [1 + (1+z+z^2)(1+wbar+wbar^2)]` via rank-one
/// augmentation.
pub fn poly_augmented_dirichlet(order: usize, mode: Mode) -> Result<BivariateKernel> {
    let d1 = DiagonalKernel::dirichlet(order, mode);
    rank_one_augment(&d1, &unit_quadratic(mode), order)
}

/// The same kernel assembled from its banded closed form:
/// `2 + z + wbar + 2 z wbar`, first off-diagonals `(2n+1)/(n(n+1))`,
/// second off-diagonals `1/(n+1)`, and diagonal tail
/// `(4n^2 + 15n + 13)/((n+1)(n+2)(n+3))` at `(n+2, n+2)`.
///
/// This is an independent construction route used to pin the closed
/// form against [`poly_augmented_dirichlet`] entrywise.
pub fn poly_augmented_dirichlet_expanded(order: usize, mode: Mode) -> Result<BivariateKernel> {
    let mut rows = vec![vec![BigRational::zero(); order + 1]; order + 1];
    rows[0][0] = ratio(2, 1);
    if order >= 1 {
        rows[1][0] = BigRational::one();
        rows[0][1] = BigRational::one();
        rows[1][1] = ratio(2, 1);
    }
    for n in 1..order as i64 {
        let v = ratio(2 * n + 1, n * (n + 1));
        rows[(n + 1) as usize][n as usize] = v.clone();
        rows[n as usize][(n + 1) as usize] = v;
    }
    for n in 0..=(order as i64 - 2) {
        let v = ratio(1, n + 1);
        rows[(n + 2) as usize][n as usize] = v.clone();
        rows[n as usize][(n + 2) as usize] = v;
        let d = ratio(4 * n * n + 15 * n + 13, (n + 1) * (n + 2) * (n + 3));
        rows[(n + 2) as usize][(n + 2) as usize] = d;
    }
    let exact = BivariateKernel::from_rationals(rows)?;
    Ok(match mode {
        Mode::Exact => exact,
        Mode::Float => exact.to_float_mode(),
    })
}

/// The Gram coefficient matrix of `1 + p(z) conj(p)(w)` with
/// `p = 1 + z + z^2`: the cofactor of [`poly_augmented_dirichlet`] over
/// the Dirichlet base.
pub fn unit_quadratic_gram(mode: Mode) -> BivariateKernel {
    let rows = vec![
        vec![ratio(2, 1), BigRational::one(), BigRational::one()],
        vec![BigRational::one(), BigRational::one(), BigRational::one()],
        vec![BigRational::one(), BigRational::one(), BigRational::one()],
    ];
    let exact = BivariateKernel::from_rationals(rows).expect("symmetric by construction");
    match mode {
        Mode::Exact => exact,
        Mode::Float => exact.to_float_mode(),
    }
}

/// Banded cubic kernel: `1 + (5/8) z wbar`, off-diagonals `1/(8n)` at
/// `(n+1, n)` for `n >= 1`, and diagonal
/// `sum_{i=1}^{n+1} 1/(i (n+2-i)^3) + 1/(8(n-1))` from `n = 2` on.
///
/// The diagonal sum is the Cauchy product of `1/(i+1)` with
/// `1/(j+1)^3`, which is how it is assembled here.
pub fn cubic_banded_kernel(order: usize, mode: Mode) -> Result<BivariateKernel> {
    let cubes = CoeffSeq::from_rationals(
        (0..=order)
            .map(|n| BigRational::new(BigInt::one(), BigInt::from(n as i64 + 1).pow(3)))
            .collect(),
    );
    let d1 = DiagonalKernel::dirichlet(order, Mode::Exact);
    let diag = cauchy_product(d1.coeffs(), &cubes, order)?;
    let diag = diag.rationals().expect("exact mode").to_vec();

    let mut rows = vec![vec![BigRational::zero(); order + 1]; order + 1];
    for (n, d) in diag.iter().enumerate() {
        rows[n][n] = d.clone();
        if n >= 2 {
            rows[n][n] += ratio(1, 8 * (n as i64 - 1));
        }
    }
    for n in 1..order {
        let v = ratio(1, 8 * n as i64);
        rows[n + 1][n] = v.clone();
        rows[n][n + 1] = v;
    }
    let exact = BivariateKernel::from_rationals(rows)?;
    Ok(match mode {
        Mode::Exact => exact,
        Mode::Float => exact.to_float_mode(),
    })
}
