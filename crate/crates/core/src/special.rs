//! Scalar special functions used by the secrecy closed forms.
//!
//! Everything here is a pure function over [`Real`]. Incomplete gammas use the
//! usual split: power series below `x < s + 1`, modified Lentz continued
//! fraction above. The Gaussian tail is computed from the same kernel with the
//! exact `ln Γ(1/2)`, which keeps relative accuracy deep into the tail.

use crate::error::{Error, Result};
use crate::real::Real;

const MAX_ITER: usize = 100_000;

/// A value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability<T>(T);

impl<T: Real> Probability<T> {
    pub fn new(value: T) -> Result<Self> {
        if value >= T::zero() && value <= T::one() {
            Ok(Probability(value))
        } else {
            Err(Error::domain(
                "Probability::new",
                format!("{value} is outside [0, 1]"),
            ))
        }
    }

    /// Clamps a computed value into `[0, 1]`. NaN is rejected.
    pub(crate) fn clamped(func: &'static str, value: T) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::numerical(func, "probability evaluated to NaN"));
        }
        Ok(Probability(value.max(T::zero()).min(T::one())))
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    pub fn complement(self) -> Self {
        Probability(T::one() - self.0)
    }
}

// ---------------------------------------------------------------------------
// Gamma function family
// ---------------------------------------------------------------------------

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("x = {x} must be positive")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos<T: Real>(x: T) -> T {
    if x < T::lit(0.5) {
        // reflection
        let pi = T::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma_pos(T::one() - x);
    }
    if x >= T::lit(10.0) {
        // Stirling series
        let inv = x.recip();
        let inv2 = inv * inv;
        let series = inv
            * (T::lit(1.0 / 12.0)
                - inv2
                    * (T::lit(1.0 / 360.0)
                        - inv2
                            * (T::lit(1.0 / 1260.0)
                                - inv2 * (T::lit(1.0 / 1680.0) - inv2 * T::lit(1.0 / 1188.0)))));
        return (x - T::lit(0.5)) * x.ln() - x + T::lit(0.5) * (T::TAU()).ln() + series;
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::from_usize_lossy(i));
    }
    let t = x + T::lit(LANCZOS_G + 0.5);
    T::lit(0.5) * T::TAU().ln() + (x + T::lit(0.5)) * t.ln() - t + acc.ln()
}

/// Digamma `ψ(x)` for `x > 0`.
pub fn digamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain("digamma", format!("x = {x} must be positive")));
    }
    let mut x = x;
    let mut shift = T::zero();
    while x < T::lit(10.0) {
        shift = shift - x.recip();
        x = x + T::one();
    }
    let inv2 = (x * x).recip();
    // Bernoulli terms B_2k / (2k x^2k), Horner from the highest order
    let coeffs = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
    ];
    let tail = coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| (acc + T::lit(c)) * inv2);
    Ok(shift + x.ln() - T::lit(0.5) / x - tail)
}

fn check_gamma_args<T: Real>(func: &'static str, s: T, x: T) -> Result<()> {
    if !(s > T::zero()) || !s.is_finite() {
        return Err(Error::domain(func, format!("shape s = {s} must be positive")));
    }
    if !(x >= T::zero()) || x.is_nan() {
        return Err(Error::domain(func, format!("x = {x} must be nonnegative")));
    }
    Ok(())
}

/// Returns `(P(s,x), Q(s,x))` given `ln Γ(s)`.
fn reg_gamma_pair<T: Real>(s: T, x: T, ln_gamma_s: T) -> Result<(T, T)> {
    if x == T::zero() {
        return Ok((T::zero(), T::one()));
    }
    if x.is_infinite() {
        return Ok((T::one(), T::zero()));
    }
    Ok(match reg_gamma_log(s, x, ln_gamma_s)? {
        GammaLog::LnLower(lp) => {
            let p = lp.exp().min(T::one());
            (p, T::one() - p)
        }
        GammaLog::LnUpper(lq) => {
            let q = lq.exp().min(T::one());
            (T::one() - q, q)
        }
    })
}

enum GammaLog<T> {
    LnLower(T),
    LnUpper(T),
}

/// Logarithm of whichever of `P`, `Q` is computed directly for `(s, x)`.
fn reg_gamma_log<T: Real>(s: T, x: T, ln_gamma_s: T) -> Result<GammaLog<T>> {
    let eps = T::epsilon();
    let log_prefactor = s * x.ln() - x - ln_gamma_s;
    if x < s + T::one() {
        let mut ap = s;
        let mut term = s.recip();
        let mut sum = term;
        let mut converged = false;
        for _ in 0..MAX_ITER {
            ap = ap + T::one();
            term = term * x / ap;
            sum = sum + term;
            if term.abs() < sum.abs() * eps {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::numerical(
                "reg_gamma",
                format!("series did not converge for s = {s}, x = {x}"),
            ));
        }
        Ok(GammaLog::LnLower(log_prefactor + sum.ln()))
    } else {
        // modified Lentz
        let tiny = T::min_positive_value() / eps;
        let mut b = x + T::one() - s;
        let mut c = tiny.recip();
        let mut d = b.recip();
        let mut h = d;
        let mut converged = false;
        for i in 1..MAX_ITER {
            let fi = T::from_usize_lossy(i);
            let an = -fi * (fi - s);
            b = b + T::lit(2.0);
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = d.recip();
            let delta = d * c;
            h = h * delta;
            if (delta - T::one()).abs() < eps {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::numerical(
                "reg_gamma",
                format!("continued fraction did not converge for s = {s}, x = {x}"),
            ));
        }
        Ok(GammaLog::LnUpper(log_prefactor + h.ln()))
    }
}

/// Regularized upper incomplete gamma `Γ(s, x) / Γ(s)`.
pub fn reg_gamma_upper<T: Real>(s: T, x: T) -> Result<Probability<T>> {
    check_gamma_args("reg_gamma_upper", s, x)?;
    let (_, q) = reg_gamma_pair(s, x, ln_gamma_pos(s))?;
    Probability::clamped("reg_gamma_upper", q)
}

/// `ln Q(s, x)`, finite far beyond the underflow of `Q` itself.
pub(crate) fn ln_reg_gamma_upper<T: Real>(s: T, x: T) -> Result<T> {
    check_gamma_args("ln_reg_gamma_upper", s, x)?;
    if x == T::zero() {
        return Ok(T::zero());
    }
    if x.is_infinite() {
        return Ok(T::neg_infinity());
    }
    Ok(match reg_gamma_log(s, x, ln_gamma_pos(s))? {
        GammaLog::LnUpper(lq) => lq.min(T::zero()),
        GammaLog::LnLower(lp) => (-lp.exp().min(T::one())).ln_1p(),
    })
}

/// Regularized lower incomplete gamma `γ(s, x) / Γ(s)`.
pub fn reg_gamma_lower<T: Real>(s: T, x: T) -> Result<Probability<T>> {
    check_gamma_args("reg_gamma_lower", s, x)?;
    let (p, _) = reg_gamma_pair(s, x, ln_gamma_pos(s))?;
    Probability::clamped("reg_gamma_lower", p)
}

// ---------------------------------------------------------------------------
// Gaussian tail and Marcum Q of order 1/2
// ---------------------------------------------------------------------------

/// `erfc(x)` for `x >= 0`, via `Q(1/2, x²)`.
fn erfc_nonneg<T: Real>(x: T) -> T {
    let ln_gamma_half = T::lit(0.5) * T::PI().ln();
    match reg_gamma_pair(T::lit(0.5), x * x, ln_gamma_half) {
        Ok((_, q)) => q,
        // Both branches converge for s = 1/2; an error here means x is huge.
        Err(_) => T::zero(),
    }
}

pub(crate) fn q_unchecked<T: Real>(x: T) -> T {
    if x.is_infinite() {
        return if x > T::zero() { T::zero() } else { T::one() };
    }
    let half = T::lit(0.5);
    let tail = half * erfc_nonneg(x.abs() * T::FRAC_1_SQRT_2());
    if x >= T::zero() {
        tail
    } else {
        T::one() - tail
    }
}

/// `ln Q(x)` for the Gaussian tail.
pub(crate) fn ln_q_unchecked<T: Real>(x: T) -> T {
    if x <= T::zero() {
        return q_unchecked(x).ln();
    }
    if x.is_infinite() {
        return T::neg_infinity();
    }
    let half = T::lit(0.5);
    let lq = match reg_gamma_log(half, half * x * x, half * T::PI().ln()) {
        Ok(GammaLog::LnUpper(lq)) => lq,
        Ok(GammaLog::LnLower(lp)) => (-lp.exp()).ln_1p(),
        Err(_) => T::neg_infinity(),
    };
    half.ln() + lq
}

/// `ln Q_{1/2}(a, b)`.
pub(crate) fn ln_marcum_q_half<T: Real>(a: T, b: T) -> T {
    let lo = ln_q_unchecked(b - a);
    let hi = ln_q_unchecked(b + a);
    if lo == T::neg_infinity() {
        return lo;
    }
    lo + (hi - lo).exp().ln_1p()
}

/// Gaussian tail `Q(x) = 1 − Φ(x)`.
pub fn gaussian_q<T: Real>(x: T) -> Result<Probability<T>> {
    if !x.is_finite() {
        return Err(Error::domain("gaussian_q", format!("x = {x} is not finite")));
    }
    Ok(Probability(q_unchecked(x)))
}

/// Marcum Q function of order 1/2: `Q(b − a) + Q(b + a)`.
pub fn marcum_q_half<T: Real>(a: T, b: T) -> Result<Probability<T>> {
    if !(a >= T::zero()) || !(b >= T::zero()) {
        return Err(Error::domain(
            "marcum_q_half",
            format!("arguments must be nonnegative, got a = {a}, b = {b}"),
        ));
    }
    Probability::clamped("marcum_q_half", marcum_q_half_unchecked(a, b))
}

pub(crate) fn marcum_q_half_unchecked<T: Real>(a: T, b: T) -> T {
    q_unchecked(b - a) + q_unchecked(b + a)
}

/// `1 − Q_{1/2}(a, b) = Q(a − b) − Q(a + b)`, without the cancellation of the
/// naive complement when the result is small.
pub(crate) fn marcum_q_half_complement<T: Real>(a: T, b: T) -> T {
    (q_unchecked(a - b) - q_unchecked(a + b)).max(T::zero())
}

// ---------------------------------------------------------------------------
// Exponential integral
// ---------------------------------------------------------------------------

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `e^x E1(x)`, finite for all `x > 0`.
pub fn exp_scaled_e1<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || x.is_nan() {
        return Err(Error::domain(
            "exp_scaled_e1",
            format!("x = {x} must be positive"),
        ));
    }
    if x.is_infinite() {
        return Ok(T::zero());
    }
    if x <= T::one() {
        return Ok(x.exp() * e1_series(x));
    }
    Ok(e1_fraction(x))
}

/// Exponential integral `E1(x) = ∫_x^∞ e^{−t}/t dt` for `x > 0`.
pub fn exp_integral_e1<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || x.is_nan() {
        return Err(Error::domain(
            "exp_integral_e1",
            format!("x = {x} must be positive"),
        ));
    }
    if x.is_infinite() {
        return Ok(T::zero());
    }
    if x <= T::one() {
        return Ok(e1_series(x));
    }
    Ok(e1_fraction(x) * (-x).exp())
}

fn e1_series<T: Real>(x: T) -> T {
    let eps = T::epsilon();
    let mut sum = T::zero();
    let mut fact = T::one();
    for k in 1..MAX_ITER {
        let fk = T::from_usize_lossy(k);
        fact = -fact * x / fk;
        let term = -fact / fk;
        sum = sum + term;
        if term.abs() < sum.abs() * eps {
            break;
        }
    }
    -T::lit(EULER_GAMMA) - x.ln() + sum
}

/// Continued fraction for `e^x E1(x)`, `x > 1`.
fn e1_fraction<T: Real>(x: T) -> T {
    let eps = T::epsilon();
    let tiny = T::min_positive_value() / eps;
    let mut b = x + T::one();
    let mut c = tiny.recip();
    let mut d = b.recip();
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = T::from_usize_lossy(i);
        let an = -fi * fi;
        b = b + T::lit(2.0);
        d = (an * d + b).recip();
        c = b + an / c;
        let delta = c * d;
        h = h * delta;
        if (delta - T::one()).abs() < eps {
            break;
        }
    }
    h
}

// ---------------------------------------------------------------------------
// Kummer confluent hypergeometric function
// ---------------------------------------------------------------------------

/// `₁F₁(a; b; z)` by direct Taylor summation.
///
/// Intended for moderate `|z|` (the fading models only need `z ∈ [−K, 0]`).
pub fn kummer_1f1<T: Real>(a: T, b: T, z: T) -> Result<T> {
    if b <= T::zero() && b == b.round() {
        return Err(Error::domain(
            "kummer_1f1",
            format!("b = {b} is a nonpositive integer"),
        ));
    }
    if !z.is_finite() || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("kummer_1f1", "arguments must be finite"));
    }
    let stop = T::lit(1e-16).max(T::epsilon());
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..MAX_ITER {
        let fk = T::from_usize_lossy(k);
        term = term * (a + fk) / (b + fk) * z / (fk + T::one());
        sum = sum + term;
        if term == T::zero() || (term.abs() <= stop * sum.abs() && fk > z.abs() + a.abs()) {
            return Ok(sum);
        }
    }
    Err(Error::numerical(
        "kummer_1f1",
        format!("series did not converge for a = {a}, b = {b}, z = {z}"),
    ))
}
