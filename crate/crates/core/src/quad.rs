//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol·|I|)`.

use crate::error::{Error, Result};
use crate::real::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for QuadOptions<T> {
    fn default() -> Self {
        QuadOptions {
            abs_tol: T::lit(1e-12),
            rel_tol: T::lit(1e-10),
            max_intervals: 2_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod<T: Real, F>(f: &mut F, a: T, b: T) -> Result<Segment<T>>
where
    F: FnMut(T) -> Result<T>,
{
    let half = T::lit(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let fc = f(center)?;
    let mut kron = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = radius * T::lit(XGK[j]);
        let pair = f(center - dx)? + f(center + dx)?;
        kron = kron + T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * pair;
        }
    }
    let value = kron * radius;
    let error = ((kron - gauss) * radius).abs();
    if !value.is_finite() {
        return Err(Error::numerical(
            "quadrature",
            format!("non-finite integrand on [{a}, {b}]"),
        ));
    }
    Ok(Segment { a, b, value, error })
}

/// Integrates a fallible integrand over `[a, b]`.
pub fn try_integrate<T: Real, F>(mut f: F, a: T, b: T, opts: &QuadOptions<T>) -> Result<Quadrature<T>>
where
    F: FnMut(T) -> Result<T>,
{
    if a == b {
        return Ok(Quadrature {
            value: T::zero(),
            error: T::zero(),
            evaluations: 0,
        });
    }
    let mut segments = vec![kronrod(&mut f, a, b)?];
    let mut evaluations = 15;
    loop {
        let total: T = segments.iter().fold(T::zero(), |s, g| s + g.value);
        let error: T = segments.iter().fold(T::zero(), |s, g| s + g.error);
        if error <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok(Quadrature {
                value: total,
                error,
                evaluations,
            });
        }
        if segments.len() >= opts.max_intervals {
            return Err(Error::numerical(
                "quadrature",
                format!(
                    "tolerance not met on [{a}, {b}] after {} subintervals: estimate {total}, error {error}",
                    segments.len()
                ),
            ));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, g)| {
                if g.error > be {
                    (i, g.error)
                } else {
                    (bi, be)
                }
            });
        let seg = segments.swap_remove(worst);
        let mid = T::lit(0.5) * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) {
            return Err(Error::numerical(
                "quadrature",
                format!("interval [{}, {}] cannot be bisected further", seg.a, seg.b),
            ));
        }
        segments.push(kronrod(&mut f, seg.a, mid)?);
        segments.push(kronrod(&mut f, mid, seg.b)?);
        evaluations += 30;
    }
}

pub fn integrate<T: Real, F>(mut f: F, a: T, b: T, opts: &QuadOptions<T>) -> Result<Quadrature<T>>
where
    F: FnMut(T) -> T,
{
    try_integrate(|x| Ok(f(x)), a, b, opts)
}

/// Integrates over `[a, ∞)` with the map `x = a + t / (1 − t)`.
pub fn try_integrate_to_infinity<T: Real, F>(mut f: F, a: T, opts: &QuadOptions<T>) -> Result<Quadrature<T>>
where
    F: FnMut(T) -> Result<T>,
{
    try_integrate(
        |t| {
            let one_minus = T::one() - t;
            if one_minus <= T::zero() {
                return Ok(T::zero());
            }
            let jac = (one_minus * one_minus).recip();
            let v = f(a + t / one_minus)?;
            Ok(if v == T::zero() { v } else { v * jac })
        },
        T::zero(),
        T::one(),
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let q = integrate(|x: f64| 3.0 * x * x - x + 2.0, -1.0, 2.0, &QuadOptions::default()).unwrap();
        assert!((q.value - (9.0 - 1.5 + 6.0)).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity_adapts() {
        // ∫_0^1 x^{−1/2} dx = 2
        let q = integrate(
            |x: f64| if x > 0.0 { x.powf(-0.5) } else { 0.0 },
            0.0,
            1.0,
            &QuadOptions {
                abs_tol: 1e-10,
                rel_tol: 1e-10,
                max_intervals: 5_000,
            },
        )
        .unwrap();
        assert!((q.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn semi_infinite() {
        let q = try_integrate_to_infinity(|x: f64| Ok((-x).exp()), 1.0, &QuadOptions::default()).unwrap();
        assert!((q.value - (-1.0_f64).exp()).abs() < 1e-12);
        let q = try_integrate_to_infinity(|x: f64| Ok((1.0 + x * x).recip()), 0.0, &QuadOptions::default())
            .unwrap();
        assert!((q.value - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn reports_failure_when_budget_exhausted() {
        let opts = QuadOptions {
            abs_tol: 1e-14,
            rel_tol: 0.0,
            max_intervals: 4,
        };
        let err = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &opts).unwrap_err();
        assert!(matches!(err, Error::Numerical { .. }));
    }

    #[test]
    fn propagates_integrand_errors() {
        let r = try_integrate(
            |x: f64| {
                if x > 0.5 {
                    Err(Error::numerical("f", "boom"))
                } else {
                    Ok(x)
                }
            },
            0.0,
            1.0,
            &QuadOptions::default(),
        );
        assert!(r.is_err());
    }
}
