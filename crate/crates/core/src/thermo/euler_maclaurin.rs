//! Euler–Maclaurin summation of Σ_{n≥0} f(n).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_to_infinity, QuadOptions};

/// Bernoulli number Bₙ (with B₁ = +1/2) by the Akiyama–Tanigawa algorithm.
pub fn bernoulli(n: usize) -> BigRational {
    let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * BigInt::from(j);
        }
    }
    a.swap_remove(0)
}

/// Weights of the d-th derivative at 0 on the integer nodes 0, 1, …, len−1.
fn forward_weights(d: usize, len: usize) -> Vec<f64> {
    // Fornberg's recursion, specialized to expansion point 0.
    let x: Vec<f64> = (0..len).map(|k| k as f64).collect();
    let mut c = vec![vec![0.0; d + 1]; len];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0];
    for i in 1..len {
        let mn = i.min(d);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i];
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] *= c4 / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[d]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerMaclaurinOptions {
    pub p_max: usize,
    /// Node spacing of the one-sided derivative stencils.
    pub step: f64,
    /// Extra stencil points beyond the minimum d + 1.
    pub extra_points: usize,
    /// Length scale of f, used to segment the semi-infinite integral.
    pub scale: f64,
    pub quad: QuadOptions,
}

impl EulerMaclaurinOptions {
    pub fn new(p_max: usize) -> Self {
        Self {
            p_max,
            step: 0.1,
            extra_points: 10,
            scale: 1.0,
            quad: QuadOptions {
                abs_tol: 1e-13,
                rel_tol: 1e-12,
                max_intervals: 4000,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerMaclaurin {
    pub value: f64,
    pub half_f0: f64,
    pub integral: f64,
    /// −B_{2p}/(2p)! · f^{(2p−1)}(0) for p = 1..=p_max.
    pub corrections: Vec<f64>,
}

pub fn euler_maclaurin(f: impl Fn(f64) -> f64, p_max: usize) -> Result<EulerMaclaurin> {
    euler_maclaurin_with(f, &EulerMaclaurinOptions::new(p_max))
}

/// ½f(0) + ∫₀^∞ f − Σ_{p=1}^{p_max} B_{2p}/(2p)! · f^{(2p−1)}(0).
///
/// Odd derivatives come from one-sided stencils on [0, ∞) so f is never
/// evaluated at negative arguments.
pub fn euler_maclaurin_with(f: impl Fn(f64) -> f64, opts: &EulerMaclaurinOptions) -> Result<EulerMaclaurin> {
    let f0 = f(0.0);
    let integral = integrate_to_infinity(&f, 0.0, opts.scale, &opts.quad)?.value;
    let mut corrections = Vec::with_capacity(opts.p_max);
    let mut factorial = BigInt::one();
    for p in 1..=opts.p_max {
        let d = 2 * p - 1;
        factorial *= BigInt::from(d) * BigInt::from(d + 1);
        let coeff = (bernoulli(2 * p) / BigRational::from_integer(factorial.clone()))
            .to_f64()
            .unwrap_or(0.0);
        let deriv = derivative_at_zero(&f, d, opts)?;
        corrections.push(-coeff * deriv);
    }
    let value = 0.5 * f0 + integral + corrections.iter().sum::<f64>();
    Ok(EulerMaclaurin {
        value,
        half_f0: 0.5 * f0,
        integral,
        corrections,
    })
}

fn derivative_at_zero(f: &impl Fn(f64) -> f64, d: usize, opts: &EulerMaclaurinOptions) -> Result<f64> {
    let estimate = |h: f64| -> f64 {
        let w = forward_weights(d, d + 1 + opts.extra_points);
        let sum: f64 = w.iter().enumerate().map(|(k, wk)| wk * f(h * k as f64)).sum();
        sum / h.powi(d as i32)
    };
    let coarse = estimate(opts.step);
    let fine = estimate(0.5 * opts.step);
    // Stencils of this order should agree closely; a large gap means noise or
    // a non-smooth f at the origin.
    let scale = coarse.abs().max(fine.abs()).max(1e-300);
    if !fine.is_finite() || (coarse - fine).abs() > 1e-4 * scale.max(1.0) {
        return Err(Error::DerivativeNoise { at: 0.0 });
    }
    Ok(fine)
}

/// Σ_{n≥0} f(n) by direct summation, for comparison in tests.
#[cfg(test)]
fn direct_sum(f: impl Fn(f64) -> f64, terms: usize) -> f64 {
    (0..terms).map(|n| f(n as f64)).sum()
}
