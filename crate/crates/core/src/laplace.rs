//! Numerical inversion of Laplace transforms by the Fourier-series method
//! with Euler summation (Abate–Whitt EULER algorithm).
//!
//! For a transform `F(p)` of a real function `f(t)`,
//!
//! ```text
//! f(t) ≈ e^{A/2}/t · [ ½ Re F(A/2t) + Σ_{k≥1} (−1)^k Re F((A + 2kπi)/2t) ]
//! ```
//!
//! with the alternating tail accelerated by binomial (Euler) averaging of
//! partial sums `n .. n+m`. The aliasing error is bounded by `e^{−A}` for
//! bounded `f`; roundoff grows like `e^{A/2}` times machine epsilon relative
//! to the magnitude of the transform.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerInversion<T> {
    /// Discretization parameter `A`.
    pub discretization: T,
    /// Number of plain terms `n` before averaging.
    pub base_terms: usize,
    /// Number of Euler-averaged partial sums `m`.
    pub averaging_terms: usize,
    /// Relative tolerance applied to the truncation estimate.
    pub tolerance: T,
}

impl<T: Real> Default for EulerInversion<T> {
    /// `A = 30` in double precision; narrower types get the `A` that balances
    /// aliasing against `e^{A/2}` roundoff amplification.
    fn default() -> Self {
        let balanced = T::lit(2.0 / 3.0) * (-T::epsilon().ln());
        EulerInversion {
            discretization: T::lit(30.0).min(balanced),
            base_terms: 20,
            averaging_terms: 15,
            tolerance: T::lit(1e-6).max(T::lit(1e4) * T::epsilon()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inverted<T> {
    pub value: T,
    /// Difference between the Euler averages started at `n` and `n + 1`.
    pub error_estimate: T,
}

impl<T: Real> EulerInversion<T> {
    /// Inverts `transform` at `t > 0` without a tolerance check.
    pub fn invert_raw<F>(&self, mut transform: F, t: T) -> Result<Inverted<T>>
    where
        F: FnMut(Complex<T>) -> Complex<T>,
    {
        if !(t > T::zero()) || !t.is_finite() {
            return Err(Error::domain(
                "EulerInversion",
                format!("t = {t} must be positive"),
            ));
        }
        let n = self.base_terms;
        let m = self.averaging_terms;
        let a = self.discretization;
        let two = T::lit(2.0);
        let x = a / (two * t);
        let h = T::PI() / t;

        // partial sums s_0 ..= s_{n+m+1}
        let mut partial = Vec::with_capacity(n + m + 2);
        let mut acc = transform(Complex::new(x, T::zero())).re / two;
        partial.push(acc);
        let mut sign = -T::one();
        for k in 1..=(n + m + 1) {
            let p = Complex::new(x, h * T::from_usize_lossy(k));
            acc = acc + sign * transform(p).re;
            partial.push(acc);
            sign = -sign;
        }

        let euler_average = |start: usize| {
            let mut coeff = T::one();
            let mut total = T::zero();
            for k in 0..=m {
                if k > 0 {
                    coeff = coeff * T::from_usize_lossy(m - k + 1) / T::from_usize_lossy(k);
                }
                total = total + coeff * partial[start + k];
            }
            total / two.powi(m as i32)
        };

        let scale = (a / two).exp() / t;
        let value = scale * euler_average(n);
        let shifted = scale * euler_average(n + 1);
        if !value.is_finite() {
            return Err(Error::numerical(
                "EulerInversion",
                format!("non-finite result at t = {t}"),
            ));
        }
        Ok(Inverted {
            value,
            error_estimate: (value - shifted).abs(),
        })
    }

    /// Inverts `transform` at `t` and fails if the truncation estimate exceeds
    /// `tolerance · |value| + floor`.
    pub fn invert<F>(&self, transform: F, t: T, floor: T) -> Result<Inverted<T>>
    where
        F: FnMut(Complex<T>) -> Complex<T>,
    {
        let out = self.invert_raw(transform, t)?;
        if out.error_estimate > self.tolerance * out.value.abs() + floor {
            return Err(Error::numerical(
                "EulerInversion",
                format!(
                    "t = {t}: value {} with truncation estimate {} exceeds tolerance {} (A = {}, n = {}, m = {})",
                    out.value,
                    out.error_estimate,
                    self.tolerance,
                    self.discretization,
                    self.base_terms,
                    self.averaging_terms
                ),
            ));
        }
        Ok(out)
    }
}
