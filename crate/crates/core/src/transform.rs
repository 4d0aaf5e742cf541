//! MGF machinery for the legitimate SNR laws.
//!
//! Every law exposes its complex MGF and cumulant slope; the CDF and the
//! upper-incomplete MGF are obtained from one Laplace-inversion kernel.
//!
//! The kernel inverts `∫_0^z e^{sx} f(x) dx`, whose transform in `z` is
//! `M(s − p)/p`. Before inverting, the target is exponentially damped by
//! `c = t* − s` where `K'(t*) = z` (saddlepoint of the tilted law). Without
//! damping the inversion error is absolute in units of `M(s)`, which destroys
//! relative accuracy in both tails. When `c > 0` the upper part is inverted
//! directly and the lower one recovered as the complement, and vice versa.

use num_complex::Complex;

use crate::channel::{Beckmann, FoldedNormal, LegitimateDist, Nakagami};
use crate::error::{Error, Result};
use crate::laplace::EulerInversion;
use crate::real::Real;
use crate::special::Probability;

/// A nonnegative SNR law described by its moment generating function.
pub trait SnrLaw<T: Real> {
    /// `E[e^{sγ}]` for `Re s` below [`SnrLaw::abscissa`].
    fn mgf_complex(&self, s: Complex<T>) -> Complex<T>;

    /// Right end of the convergence strip.
    fn abscissa(&self) -> T;

    /// Cumulant slope `K'(t) = E_t[γ]` of the law tilted by `e^{tγ}`.
    fn cumulant_slope(&self, t: T) -> T;

    fn mean_snr(&self) -> T;

    fn mgf(&self, s: T) -> Result<T> {
        if !(s < self.abscissa()) {
            return Err(Error::domain(
                "mgf",
                format!("s = {s} outside the convergence strip (< {})", self.abscissa()),
            ));
        }
        Ok(self.mgf_complex(Complex::new(s, T::zero())).re)
    }

    fn ln_mgf(&self, s: T) -> Result<T> {
        Ok(self.mgf(s)?.ln())
    }

    /// `∫_z^∞ e^{sx} f(x) dx` for `s ≤ 0`, `z ≥ 0`.
    fn incomplete_mgf_upper(&self, s: T, z: T) -> Result<T> {
        self.incomplete_mgf_upper_with(&EulerInversion::default(), s, z)
    }

    fn incomplete_mgf_upper_with(&self, inv: &EulerInversion<T>, s: T, z: T) -> Result<T> {
        Ok(split_incomplete(self, inv, s, z)?.upper)
    }

    fn cdf(&self, z: T) -> Result<Probability<T>> {
        self.cdf_with(&EulerInversion::default(), z)
    }

    fn cdf_with(&self, inv: &EulerInversion<T>, z: T) -> Result<Probability<T>> {
        Probability::clamped("cdf", split_incomplete(self, inv, T::zero(), z)?.lower)
    }

    /// `1 − F(z)`, accurate in the upper tail.
    fn survival(&self, z: T) -> Result<Probability<T>> {
        Probability::clamped(
            "survival",
            split_incomplete(self, &EulerInversion::default(), T::zero(), z)?.upper,
        )
    }
}

/// Both halves of `M(s) = ∫_0^z + ∫_z^∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncompleteSplit<T> {
    pub lower: T,
    pub upper: T,
}

fn saddlepoint<T: Real, L: SnrLaw<T> + ?Sized>(law: &L, s: T, z: T) -> T {
    let (mut lo, mut hi);
    if law.cumulant_slope(s) >= z {
        hi = s;
        let mut step = z.recip().max(T::one());
        lo = s - step;
        while law.cumulant_slope(lo) >= z {
            step = step + step;
            lo = s - step;
            if !lo.is_finite() {
                return s;
            }
        }
    } else {
        lo = s;
        hi = law.abscissa();
    }
    for _ in 0..400 {
        let mid = T::lit(0.5) * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if law.cumulant_slope(mid) < z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `e^{−sz} ∫_z^∞ e^{sx} f(x) dx`, which stays in `[0, 1]` even when the two
/// factors separately overflow and underflow.
pub fn shifted_incomplete_upper<T: Real, L: SnrLaw<T> + ?Sized>(
    law: &L,
    inv: &EulerInversion<T>,
    s: T,
    z: T,
) -> Result<T> {
    let parts = damped_inversion(law, inv, s, z)?;
    let out = match parts {
        Damped::Zero { total } => total,
        Damped::Upper { value, t_star, .. } => value * (-t_star * z).exp(),
        Damped::Lower {
            value,
            t_star,
            ln_total,
        } => (ln_total - s * z).exp() - value * (-t_star * z).exp(),
    };
    if !out.is_finite() {
        return Err(Error::numerical(
            "shifted_incomplete_upper",
            format!("non-finite result for s = {s}, z = {z}"),
        ));
    }
    Ok(out.max(T::zero()))
}

enum Damped<T> {
    Zero {
        total: T,
    },
    /// `value = e^{cz}·upper`
    Upper {
        value: T,
        t_star: T,
        c: T,
        total: T,
    },
    /// `value = e^{cz}·lower`
    Lower {
        value: T,
        t_star: T,
        ln_total: T,
    },
}

fn damped_inversion<T: Real, L: SnrLaw<T> + ?Sized>(
    law: &L,
    inv: &EulerInversion<T>,
    s: T,
    z: T,
) -> Result<Damped<T>> {
    if !(s <= T::zero()) || !s.is_finite() {
        return Err(Error::domain(
            "incomplete_mgf",
            format!("s = {s} must be finite and <= 0"),
        ));
    }
    if !(z >= T::zero()) || !z.is_finite() {
        return Err(Error::domain(
            "incomplete_mgf",
            format!("z = {z} must be finite and >= 0"),
        ));
    }
    let total = law.mgf(s)?;
    if z == T::zero() {
        return Ok(Damped::Zero { total });
    }
    let mut c = saddlepoint(law, s, z) - s;
    // keep the removable point p = c off the real contour node
    let x = inv.discretization / (T::lit(2.0) * z);
    if (c - x).abs() < T::lit(1e-3) * x {
        c = x * T::lit(0.99);
    }
    let cc = Complex::new(c, T::zero());
    let sc = Complex::new(s, T::zero());
    let ln_total = law.ln_mgf(s)?;
    let floor = T::lit(16.0) * T::epsilon() * (ln_total + c * z).exp();
    if c > T::zero() {
        let target = |p: Complex<T>| {
            let shifted = sc - p + cc;
            (Complex::new(total, T::zero()) - law.mgf_complex(shifted)) / (p - cc)
        };
        let value = inv.invert(target, z, floor)?.value;
        Ok(Damped::Upper {
            value,
            t_star: s + c,
            c,
            total,
        })
    } else {
        let target = |p: Complex<T>| law.mgf_complex(sc - p + cc) / (p - cc);
        let value = inv.invert(target, z, floor)?.value;
        Ok(Damped::Lower {
            value,
            t_star: s + c,
            ln_total,
        })
    }
}

/// Splits `M(s)` at `z` with the damped inversion kernel.
pub fn split_incomplete<T: Real, L: SnrLaw<T> + ?Sized>(
    law: &L,
    inv: &EulerInversion<T>,
    s: T,
    z: T,
) -> Result<IncompleteSplit<T>> {
    Ok(match damped_inversion(law, inv, s, z)? {
        Damped::Zero { total } => IncompleteSplit {
            lower: T::zero(),
            upper: total,
        },
        Damped::Upper { value, c, total, .. } => {
            let upper = value * (-c * z).exp();
            IncompleteSplit {
                lower: total - upper,
                upper,
            }
        }
        Damped::Lower {
            value,
            t_star,
            ln_total,
        } => {
            let lower = value * (-(t_star - s) * z).exp();
            IncompleteSplit {
                lower,
                upper: ln_total.exp() - lower,
            }
        }
    })
}

fn chi_mgf<T: Real>(mu2: T, var_x: T, var_y: T, s: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let two = T::lit(2.0);
    let dx = one - s * (two * var_x);
    let dy = one - s * (two * var_y);
    // separate square roots stay on the principal branch inside the strip
    (s * mu2 / dx).exp() / (dx.sqrt() * dy.sqrt())
}

fn chi_ln_mgf<T: Real>(mu2: T, var_x: T, var_y: T, s: T) -> T {
    let two = T::lit(2.0);
    let dx = T::one() - two * s * var_x;
    let dy = T::one() - two * s * var_y;
    s * mu2 / dx - T::lit(0.5) * (dx.ln() + dy.ln())
}

fn chi_slope<T: Real>(mu2: T, var_x: T, var_y: T, t: T) -> T {
    let two = T::lit(2.0);
    let dx = T::one() - two * t * var_x;
    let dy = T::one() - two * t * var_y;
    mu2 / (dx * dx) + var_x / dx + var_y / dy
}

/// Squared Beckmann SNR as `(μ + X)² + Y²` with independent zero-mean
/// Gaussians of variances `var_x`, `var_y`, all in SNR units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeckmannComponents<T> {
    pub mu_x: T,
    pub var_x: T,
    pub var_y: T,
}

impl<T: Real> BeckmannComponents<T> {
    pub fn new(mu_x: T, var_x: T, var_y: T) -> Result<Self> {
        if !(var_x > T::zero() && var_y > T::zero())
            || !mu_x.is_finite()
            || !var_x.is_finite()
            || !var_y.is_finite()
        {
            return Err(Error::Config(format!(
                "Beckmann components need finite mu_x and positive variances, got ({mu_x}, {var_x}, {var_y})"
            )));
        }
        Ok(BeckmannComponents { mu_x, var_x, var_y })
    }

    pub fn from_kq(k: T, q: T, mean_snr: T) -> Result<Self> {
        if !(k >= T::zero()) || !(q > T::zero()) || !(mean_snr > T::zero()) {
            return Err(Error::Config(format!(
                "need K >= 0, q > 0, mean > 0, got K = {k}, q = {q}, mean = {mean_snr}"
            )));
        }
        let diffuse = mean_snr / (T::one() + k);
        let q2 = q * q;
        Self::new(
            (mean_snr * k / (T::one() + k)).sqrt(),
            diffuse * q2 / (T::one() + q2),
            diffuse / (T::one() + q2),
        )
    }

    /// `(K, q, mean_snr)`.
    pub fn to_kq(&self) -> (T, T, T) {
        let diffuse = self.var_x + self.var_y;
        let mu2 = self.mu_x * self.mu_x;
        (mu2 / diffuse, (self.var_x / self.var_y).sqrt(), mu2 + diffuse)
    }

    /// `E[γ²]`.
    pub fn second_moment(&self) -> T {
        let mu2 = self.mu_x * self.mu_x;
        let d = self.var_x + self.var_y;
        let two = T::lit(2.0);
        mu2 * mu2
            + d * d
            + two * self.var_x * self.var_x
            + two * self.var_y * self.var_y
            + two * mu2 * (two * self.var_x + d)
    }

    /// Components of the law tilted by `e^{sγ}`, normalized by `M(s)`.
    pub fn tilted(&self, s: T) -> Result<Self> {
        if !(s < self.abscissa()) {
            return Err(Error::domain(
                "BeckmannComponents::tilted",
                format!("s = {s} outside the strip"),
            ));
        }
        let two = T::lit(2.0);
        let dx = T::one() - two * s * self.var_x;
        let dy = T::one() - two * s * self.var_y;
        Self::new(self.mu_x / dx, self.var_x / dx, self.var_y / dy)
    }
}

impl<T: Real> From<&Beckmann<T>> for BeckmannComponents<T> {
    fn from(b: &Beckmann<T>) -> Self {
        // Beckmann::new already validated the parameters
        Self::from_kq(b.k, b.q, b.mean_snr).expect("validated Beckmann parameters")
    }
}

impl<T: Real> SnrLaw<T> for BeckmannComponents<T> {
    fn mgf_complex(&self, s: Complex<T>) -> Complex<T> {
        chi_mgf(self.mu_x * self.mu_x, self.var_x, self.var_y, s)
    }

    fn abscissa(&self) -> T {
        (T::lit(2.0) * self.var_x.max(self.var_y)).recip()
    }

    fn ln_mgf(&self, s: T) -> Result<T> {
        self.mgf(s)?;
        Ok(chi_ln_mgf(self.mu_x * self.mu_x, self.var_x, self.var_y, s))
    }

    fn cumulant_slope(&self, t: T) -> T {
        chi_slope(self.mu_x * self.mu_x, self.var_x, self.var_y, t)
    }

    fn mean_snr(&self) -> T {
        self.mu_x * self.mu_x + self.var_x + self.var_y
    }
}

impl<T: Real> SnrLaw<T> for FoldedNormal<T> {
    fn mgf_complex(&self, s: Complex<T>) -> Complex<T> {
        let diffuse = self.mean_snr / (T::one() + self.k);
        chi_mgf(self.k * diffuse, diffuse, T::zero(), s)
    }

    fn abscissa(&self) -> T {
        (T::one() + self.k) / (T::lit(2.0) * self.mean_snr)
    }

    fn ln_mgf(&self, s: T) -> Result<T> {
        self.mgf(s)?;
        let diffuse = self.mean_snr / (T::one() + self.k);
        Ok(chi_ln_mgf(self.k * diffuse, diffuse, T::zero(), s))
    }

    fn cumulant_slope(&self, t: T) -> T {
        let diffuse = self.mean_snr / (T::one() + self.k);
        chi_slope(self.k * diffuse, diffuse, T::zero(), t)
    }

    fn mean_snr(&self) -> T {
        self.mean_snr
    }
}

/// Gamma law with shape `m` and mean `mean_snr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaLaw<T> {
    pub shape: T,
    pub mean_snr: T,
}

impl<T: Real> GammaLaw<T> {
    pub fn new(shape: T, mean_snr: T) -> Result<Self> {
        if !(shape > T::zero()) || !(mean_snr > T::zero()) || !shape.is_finite() || !mean_snr.is_finite() {
            return Err(Error::Config(format!(
                "gamma law needs positive shape and mean, got ({shape}, {mean_snr})"
            )));
        }
        Ok(GammaLaw { shape, mean_snr })
    }
}

impl<T: Real> From<&Nakagami<T>> for GammaLaw<T> {
    fn from(d: &Nakagami<T>) -> Self {
        GammaLaw {
            shape: d.m,
            mean_snr: d.mean_snr,
        }
    }
}

impl<T: Real> SnrLaw<T> for GammaLaw<T> {
    fn mgf_complex(&self, s: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        ((one - s * (self.mean_snr / self.shape)).ln() * (-self.shape)).exp()
    }

    fn abscissa(&self) -> T {
        self.shape / self.mean_snr
    }

    fn ln_mgf(&self, s: T) -> Result<T> {
        self.mgf(s)?;
        Ok(-self.shape * (-s * self.mean_snr / self.shape).ln_1p())
    }

    fn cumulant_slope(&self, t: T) -> T {
        self.mean_snr / (T::one() - t * self.mean_snr / self.shape)
    }

    fn mean_snr(&self) -> T {
        self.mean_snr
    }
}

impl<T: Real> SnrLaw<T> for Nakagami<T> {
    fn mgf_complex(&self, s: Complex<T>) -> Complex<T> {
        GammaLaw::from(self).mgf_complex(s)
    }

    fn abscissa(&self) -> T {
        self.m / self.mean_snr
    }

    fn ln_mgf(&self, s: T) -> Result<T> {
        GammaLaw::from(self).ln_mgf(s)
    }

    fn cumulant_slope(&self, t: T) -> T {
        GammaLaw::from(self).cumulant_slope(t)
    }

    fn mean_snr(&self) -> T {
        self.mean_snr
    }
}

impl<T: Real> SnrLaw<T> for Beckmann<T> {
    fn mgf_complex(&self, s: Complex<T>) -> Complex<T> {
        BeckmannComponents::from(self).mgf_complex(s)
    }

    fn abscissa(&self) -> T {
        BeckmannComponents::from(self).abscissa()
    }

    fn ln_mgf(&self, s: T) -> Result<T> {
        BeckmannComponents::from(self).ln_mgf(s)
    }

    fn cumulant_slope(&self, t: T) -> T {
        BeckmannComponents::from(self).cumulant_slope(t)
    }

    fn mean_snr(&self) -> T {
        self.mean_snr
    }
}

impl<T: Real> SnrLaw<T> for LegitimateDist<T> {
    fn mgf_complex(&self, s: Complex<T>) -> Complex<T> {
        match self {
            LegitimateDist::FoldedNormal(d) => d.mgf_complex(s),
            LegitimateDist::Beckmann(d) => d.mgf_complex(s),
            LegitimateDist::Nakagami(d) => d.mgf_complex(s),
        }
    }

    fn abscissa(&self) -> T {
        match self {
            LegitimateDist::FoldedNormal(d) => d.abscissa(),
            LegitimateDist::Beckmann(d) => d.abscissa(),
            LegitimateDist::Nakagami(d) => d.abscissa(),
        }
    }

    fn ln_mgf(&self, s: T) -> Result<T> {
        match self {
            LegitimateDist::FoldedNormal(d) => d.ln_mgf(s),
            LegitimateDist::Beckmann(d) => d.ln_mgf(s),
            LegitimateDist::Nakagami(d) => d.ln_mgf(s),
        }
    }

    fn cumulant_slope(&self, t: T) -> T {
        match self {
            LegitimateDist::FoldedNormal(d) => d.cumulant_slope(t),
            LegitimateDist::Beckmann(d) => d.cumulant_slope(t),
            LegitimateDist::Nakagami(d) => d.cumulant_slope(t),
        }
    }

    fn mean_snr(&self) -> T {
        LegitimateDist::mean_snr(self)
    }
}
