//! Secrecy outage probability and average secrecy capacity for the three
//! legitimate/eavesdropper pairings, exact and high-SNR asymptotic.
//!
//! Throughout, `τ = 2^{R_S}`, `z = τ − 1` and `s = −1/(τγ̄e)`; the outage
//! event `C_S < R_S` is `γ_b < z + τγ_e`.

use std::fmt;
use std::str::FromStr;

use crate::channel::{
    eavesdropper_params, legitimate_params, Beckmann, EveDist, FoldedNormal, LegitimateDist, LegitimateModel,
    MomentSet, Nakagami, SystemConfig,
};
use crate::error::{Error, Result};
use crate::laplace::EulerInversion;
use crate::quad::{try_integrate, QuadOptions};
use crate::real::Real;
use crate::special::{
    exp_scaled_e1, ln_marcum_q_half, ln_reg_gamma_upper, marcum_q_half_complement, reg_gamma_lower,
    Probability,
};
use crate::transform::{shifted_incomplete_upper, BeckmannComponents, SnrLaw};

/// Legitimate/eavesdropper pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    /// Folded normal / Rayleigh (no phase errors).
    FR,
    /// Beckmann / Rayleigh.
    BR,
    /// Nakagami / Rayleigh.
    NR,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::FR, Scenario::BR, Scenario::NR];

    pub fn model(self) -> LegitimateModel {
        match self {
            Scenario::FR => LegitimateModel::FoldedNormal,
            Scenario::BR => LegitimateModel::Beckmann,
            Scenario::NR => LegitimateModel::Nakagami,
        }
    }

    pub fn of(dist: &LegitimateDist<impl Real>) -> Scenario {
        match dist {
            LegitimateDist::FoldedNormal(_) => Scenario::FR,
            LegitimateDist::Beckmann(_) => Scenario::BR,
            LegitimateDist::Nakagami(_) => Scenario::NR,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::FR => "FR",
            Scenario::BR => "BR",
            Scenario::NR => "NR",
        })
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "FR" => Ok(Scenario::FR),
            "BR" => Ok(Scenario::BR),
            "NR" => Ok(Scenario::NR),
            other => Err(Error::Config(format!(
                "unknown scenario '{other}' (expected FR, BR or NR)"
            ))),
        }
    }
}

/// Builds both SNR laws of `scenario` from a physical configuration.
pub fn scenario_laws<T: Real>(
    cfg: &SystemConfig<T>,
    scenario: Scenario,
) -> Result<(LegitimateDist<T>, EveDist<T>)> {
    let mom = MomentSet::from_config(cfg)?;
    Ok((
        legitimate_params(cfg, &mom, scenario.model())?,
        eavesdropper_params(cfg)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyPoint<T> {
    pub sop: Option<Probability<T>>,
    pub asc: Option<T>,
    pub scenario: Scenario,
    pub asymptotic: bool,
}

/// `C̄_S = C̄_B − C̄_E + G_Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscBreakdown<T> {
    /// Ergodic capacity of the legitimate link.
    pub legitimate: T,
    /// Ergodic capacity of the eavesdropper link.
    pub eavesdropper: T,
    /// Nonnegative correction `G_Z`.
    pub correction: T,
}

impl<T: Real> AscBreakdown<T> {
    pub fn raw(&self) -> T {
        self.legitimate - self.eavesdropper + self.correction
    }

    /// Clamped at zero.
    pub fn value(&self) -> T {
        self.raw().max(T::zero())
    }
}

struct RateTerms<T> {
    tau: T,
    z: T,
    s: T,
    /// `z / (τγ̄e) = −s·z`
    x: T,
}

fn rate_terms<T: Real>(rate_rs: T, eve: &EveDist<T>) -> Result<RateTerms<T>> {
    if !(rate_rs >= T::zero()) || !rate_rs.is_finite() {
        return Err(Error::domain(
            "sop",
            format!("rate_rs = {rate_rs} must be finite and >= 0"),
        ));
    }
    if !(eve.mean_snr > T::zero()) {
        return Err(Error::domain(
            "sop",
            format!("eavesdropper mean SNR {} must be positive", eve.mean_snr),
        ));
    }
    let tau = T::lit(2.0).powf(rate_rs);
    let z = (rate_rs * T::LN_2()).exp_m1();
    let s = -(tau * eve.mean_snr).recip();
    Ok(RateTerms { tau, z, s, x: -s * z })
}

/// Exact SOP with a folded normal legitimate link.
pub fn sop_fr<T: Real>(leg: &FoldedNormal<T>, eve: &EveDist<T>, rate_rs: T) -> Result<Probability<T>> {
    let RateTerms { z, s, x, .. } = rate_terms(rate_rs, eve)?;
    let (k, gb) = (leg.k, leg.mean_snr);
    let k1 = k + T::one();
    let two = T::lit(2.0);
    let first = marcum_q_half_complement(k.sqrt(), (k1 * z / gb).sqrt());
    let denom = k1 - two * gb * s;
    let a_s = (k * k1 / denom).sqrt();
    let b_s = (two * (k1 / (two * gb) - s) * z).sqrt();
    let c_s = k * gb * s / denom;
    let ln_second = x + c_s + T::lit(0.5) * (k1 / denom).ln() + ln_marcum_q_half(a_s, b_s);
    Probability::clamped("sop_fr", first + ln_second.exp())
}

/// High-SNR SOP with a folded normal legitimate link; decays as `γ̄b^{−1/2}`.
/// Not clamped, so it may exceed one far from the asymptotic regime.
pub fn sop_fr_asymptotic<T: Real>(leg: &FoldedNormal<T>, eve: &EveDist<T>, rate_rs: T) -> Result<T> {
    let RateTerms { tau, x, .. } = rate_terms(rate_rs, eve)?;
    let k = leg.k;
    let half = T::lit(0.5);
    let ln = -half * k
        + x
        + half * (tau * eve.mean_snr * (T::one() + k) / (T::lit(2.0) * leg.mean_snr)).ln()
        + ln_reg_gamma_upper(T::lit(1.5), x)?;
    Ok(ln.exp())
}

/// Exact SOP with a Beckmann legitimate link, through the inversion kernel.
pub fn sop_br<T: Real>(leg: &Beckmann<T>, eve: &EveDist<T>, rate_rs: T) -> Result<Probability<T>> {
    sop_br_with(
        &BeckmannComponents::from(leg),
        eve,
        rate_rs,
        &EulerInversion::default(),
    )
}

/// [`sop_br`] on explicit components and inversion parameters.
pub fn sop_br_with<T: Real>(
    comp: &BeckmannComponents<T>,
    eve: &EveDist<T>,
    rate_rs: T,
    inv: &EulerInversion<T>,
) -> Result<Probability<T>> {
    let RateTerms { z, s, .. } = rate_terms(rate_rs, eve)?;
    let below = comp.cdf_with(inv, z)?.value();
    let above = shifted_incomplete_upper(comp, inv, s, z)?;
    Probability::clamped("sop_br", below + above)
}

/// High-SNR SOP with a Beckmann legitimate link; decays as `γ̄b^{−1}`.
pub fn sop_br_asymptotic<T: Real>(leg: &Beckmann<T>, eve: &EveDist<T>, rate_rs: T) -> Result<T> {
    let RateTerms { tau, z, .. } = rate_terms(rate_rs, eve)?;
    let (k, q) = (leg.k, leg.q);
    let q2 = q * q;
    let one = T::one();
    let two = T::lit(2.0);
    Ok(
        (-k * (one + q2) / (two * q2)).exp() * (one + k) * (one + q2) * (eve.mean_snr * tau + z)
            / (two * q * leg.mean_snr),
    )
}

/// SOP with the gamma (Nakagami power) approximation of the legitimate link.
pub fn sop_nr<T: Real>(leg: &Nakagami<T>, eve: &EveDist<T>, rate_rs: T) -> Result<Probability<T>> {
    let RateTerms { tau, z, s, x } = rate_terms(rate_rs, eve)?;
    let (m, gb) = (leg.m, leg.mean_snr);
    let below = reg_gamma_lower(m, z * m / gb)?.value();
    let ln_above = x + ln_reg_gamma_upper(m, z * (m / gb - s))? - m * (gb / (m * tau * eve.mean_snr)).ln_1p();
    Probability::clamped("sop_nr", below + ln_above.exp())
}

/// High-SNR SOP with the gamma approximation; decays as `γ̄b^{−m}`.
pub fn sop_nr_asymptotic<T: Real>(leg: &Nakagami<T>, eve: &EveDist<T>, rate_rs: T) -> Result<T> {
    let RateTerms { tau, x, .. } = rate_terms(rate_rs, eve)?;
    let m = leg.m;
    let ln = x + m * (tau * m * eve.mean_snr / leg.mean_snr).ln() + ln_reg_gamma_upper(m + T::one(), x)?;
    Ok(ln.exp())
}

/// Exact SOP for whichever law `leg` carries.
pub fn sop<T: Real>(leg: &LegitimateDist<T>, eve: &EveDist<T>, rate_rs: T) -> Result<Probability<T>> {
    match leg {
        LegitimateDist::FoldedNormal(d) => sop_fr(d, eve, rate_rs),
        LegitimateDist::Beckmann(d) => sop_br(d, eve, rate_rs),
        LegitimateDist::Nakagami(d) => sop_nr(d, eve, rate_rs),
    }
}

pub fn sop_asymptotic<T: Real>(leg: &LegitimateDist<T>, eve: &EveDist<T>, rate_rs: T) -> Result<T> {
    match leg {
        LegitimateDist::FoldedNormal(d) => sop_fr_asymptotic(d, eve, rate_rs),
        LegitimateDist::Beckmann(d) => sop_br_asymptotic(d, eve, rate_rs),
        LegitimateDist::Nakagami(d) => sop_nr_asymptotic(d, eve, rate_rs),
    }
}

fn asc_quad<T: Real>() -> QuadOptions<T> {
    QuadOptions {
        abs_tol: T::lit(1e-10),
        rel_tol: T::lit(1e-9),
        max_intervals: 1_000,
    }
}

/// Ergodic capacity of an exponential link with mean `mean_snr`, bits/s/Hz.
pub fn exponential_capacity<T: Real>(mean_snr: T) -> Result<T> {
    Ok(exp_scaled_e1(mean_snr.recip())? / T::LN_2())
}

/// `(1/ln2)∫_0^∞ (1 − F(γ))/(1 + γ) dγ`, integrated in `v = ln γ`.
pub fn ergodic_capacity<T: Real, L: SnrLaw<T> + ?Sized>(leg: &L) -> Result<T> {
    let mean = leg.mean_snr();
    // below γ_lo the survival function is 1 to within γ_lo
    let gamma_lo = T::lit(1e-10) * mean.min(T::one());
    let head = gamma_lo.ln_1p();
    let mut gamma_hi = mean + mean;
    while leg.survival(gamma_hi)?.value() > T::lit(1e-18) {
        gamma_hi = gamma_hi + gamma_hi;
        if !gamma_hi.is_finite() {
            return Err(Error::numerical(
                "ergodic_capacity",
                "survival function does not decay",
            ));
        }
    }
    let body = try_integrate(
        |v: T| {
            let g = v.exp();
            Ok(leg.survival(g)?.value() * g / (T::one() + g))
        },
        gamma_lo.ln(),
        gamma_hi.ln(),
        &asc_quad(),
    )?;
    Ok((head + body.value) / T::LN_2())
}

/// `G_Z = (1/ln2)∫_a^∞ e^{a−w} M(−w)/w dw` with `a = 1/γ̄e`, in `w = a·e^v`.
pub fn capacity_correction<T: Real, L: SnrLaw<T> + ?Sized>(leg: &L, eve: &EveDist<T>) -> Result<T> {
    let a = eve.mean_snr.recip();
    let v_hi = (T::lit(45.0) / a).ln_1p();
    let q = try_integrate(
        |v: T| {
            let w = a * v.exp();
            Ok((a - w).exp() * leg.mgf(-w)?)
        },
        T::zero(),
        v_hi,
        &asc_quad(),
    )?;
    Ok(q.value.max(T::zero()) / T::LN_2())
}

/// Three-term ASC decomposition.
pub fn asc<T: Real>(leg: &LegitimateDist<T>, eve: &EveDist<T>) -> Result<AscBreakdown<T>> {
    Ok(AscBreakdown {
        legitimate: ergodic_capacity(leg)?,
        eavesdropper: exponential_capacity(eve.mean_snr)?,
        correction: capacity_correction(leg, eve)?,
    })
}

/// Fading loss `t_Z = −(1/ln2)·E[ln(γ/γ̄)]` in bits.
///
/// `E[ln Y] = ∫_0^∞ (e^{−t} − M_Y(−t))/t dt` for `Y = γ/γ̄`, integrated in
/// `v = ln t`.
pub fn fading_loss<T: Real, L: SnrLaw<T> + ?Sized>(leg: &L) -> Result<T> {
    let mean = leg.mean_snr();
    let integrand = |v: T| -> Result<T> {
        let t = v.exp();
        Ok((-t).exp() - leg.mgf(-t / mean)?)
    };
    let v_lo = T::lit(-40.0);
    let mut v_hi = T::lit(5.0);
    while integrand(v_hi)?.abs() > T::lit(1e-17) {
        v_hi = v_hi + T::lit(5.0);
        if v_hi > T::lit(300.0) {
            return Err(Error::numerical("fading_loss", "MGF tail decays too slowly"));
        }
    }
    let q = try_integrate(integrand, v_lo, v_hi, &asc_quad())?;
    Ok(-q.value / T::LN_2())
}

/// `log2 γ̄b − t_Z − C̄_E`.
pub fn asc_asymptotic<T: Real>(leg: &LegitimateDist<T>, eve: &EveDist<T>) -> Result<T> {
    Ok(leg.mean_snr().log2() - fading_loss(leg)? - exponential_capacity(eve.mean_snr)?)
}
