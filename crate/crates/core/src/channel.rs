//! Physical scenario and the equivalent scalar SNR laws it induces.
//!
//! All SNRs are linear. Hop fading coefficients have unit total power; a
//! Rician hop with factor `K` therefore has specular amplitude
//! `√(K/(K+1))` and per-component diffuse variance `1/(2(K+1))`.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::special::kummer_1f1;

/// Residual phase error model of the reflecting elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseErrorModel {
    /// Perfect compensation.
    None,
    /// Phase shifts quantized with `bits` bits; the error is uniform on
    /// `[−u, u]` with `u = 2^{−bits}·π`.
    UniformQuantized { bits: u32 },
}

impl PhaseErrorModel {
    pub fn quantized(bits: u32) -> Result<Self> {
        if bits == 0 {
            return Err(Error::Config("quantization needs at least one bit".into()));
        }
        Ok(PhaseErrorModel::UniformQuantized { bits })
    }

    /// Half-width `u` of the uniform error interval.
    pub fn half_width<T: Real>(&self) -> Option<T> {
        match *self {
            PhaseErrorModel::None => None,
            PhaseErrorModel::UniformQuantized { bits } => Some(T::PI() * T::lit(2.0).powi(-(bits as i32))),
        }
    }

    pub fn has_errors(&self) -> bool {
        !matches!(self, PhaseErrorModel::None)
    }
}

/// Returns the first two circular moments `(φ1, φ2)` of the phase error.
pub fn circular_moments<T: Real>(model: PhaseErrorModel) -> (T, T) {
    match model.half_width::<T>() {
        None => (T::one(), T::one()),
        Some(u) => {
            let two_u = u + u;
            (u.sin() / u, two_u.sin() / two_u)
        }
    }
}

/// Small-scale fading of one hop, normalized to unit power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HopFading<T> {
    Rician {
        k: T,
    },
    Rayleigh,
    /// Unit magnitude with uniform phase (no fading).
    Deterministic,
}

impl<T: Real> HopFading<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            HopFading::Rician { k } if !(k >= T::zero()) || !k.is_finite() => Err(Error::Config(format!(
                "Rician factor must be finite and >= 0, got {k}"
            ))),
            _ => Ok(()),
        }
    }
}

/// Mean magnitude `E|H|` of a unit-power hop.
pub fn mean_magnitude<T: Real>(hop: &HopFading<T>) -> Result<T> {
    hop.validate()?;
    match *hop {
        HopFading::Rayleigh => Ok(T::PI().sqrt() / T::lit(2.0)),
        HopFading::Deterministic => Ok(T::one()),
        HopFading::Rician { k } => {
            let prefactor = (T::PI() / (T::lit(4.0) * (k + T::one()))).sqrt();
            let hyp = if k <= T::lit(10.0) {
                kummer_1f1(T::lit(-0.5), T::one(), -k)?
            } else {
                // Kummer transformation keeps the series positive for large K.
                (-k).exp() * kummer_1f1(T::lit(1.5), T::one(), k)?
            };
            Ok(prefactor * hyp)
        }
    }
}

/// Scenario description: element count, phase errors, hop fading, reference
/// SNRs of a single reflector and the target secrecy rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig<T> {
    pub n: usize,
    pub phase_model: PhaseErrorModel,
    pub hop_a_r: HopFading<T>,
    pub hop_r_b: HopFading<T>,
    pub hop_r_e: HopFading<T>,
    pub gamma0_b: T,
    pub gamma0_e: T,
    pub rate_rs: T,
}

impl<T: Real> SystemConfig<T> {
    /// Rician(K = 1) source and legitimate hops, Rayleigh eavesdropper hop.
    pub fn reference(n: usize, phase_model: PhaseErrorModel, gamma0_b: T, gamma0_e: T) -> Self {
        SystemConfig {
            n,
            phase_model,
            hop_a_r: HopFading::Rician { k: T::one() },
            hop_r_b: HopFading::Rician { k: T::one() },
            hop_r_e: HopFading::Rayleigh,
            gamma0_b,
            gamma0_e,
            rate_rs: T::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("element count n must be >= 1".into()));
        }
        if let PhaseErrorModel::UniformQuantized { bits: 0 } = self.phase_model {
            return Err(Error::Config("quantization needs at least one bit".into()));
        }
        for hop in [&self.hop_a_r, &self.hop_r_b, &self.hop_r_e] {
            hop.validate()?;
        }
        if !(self.gamma0_b > T::zero()) || !(self.gamma0_e > T::zero()) {
            return Err(Error::Config(format!(
                "reference SNRs must be positive, got gamma0_b = {}, gamma0_e = {}",
                self.gamma0_b, self.gamma0_e
            )));
        }
        if !(self.rate_rs >= T::zero()) || !self.rate_rs.is_finite() {
            return Err(Error::Config(format!(
                "secrecy rate must be finite and >= 0, got {}",
                self.rate_rs
            )));
        }
        Ok(())
    }

    /// `τ = 2^{R_S}`.
    pub fn tau(&self) -> T {
        T::lit(2.0).powf(self.rate_rs)
    }
}

/// Circular and magnitude moments shared by every element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet<T> {
    pub phi1: T,
    pub phi2: T,
    pub a1: T,
    pub a2b: T,
    pub a2e: T,
    pub a_b: T,
    pub a_e: T,
}

impl<T: Real> MomentSet<T> {
    pub fn from_config(cfg: &SystemConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let (phi1, phi2) = circular_moments(cfg.phase_model);
        let a1 = mean_magnitude(&cfg.hop_a_r)?;
        let a2b = mean_magnitude(&cfg.hop_r_b)?;
        let a2e = mean_magnitude(&cfg.hop_r_e)?;
        Ok(MomentSet {
            phi1,
            phi2,
            a1,
            a2b,
            a2e,
            a_b: (a1 * a2b).sqrt(),
            a_e: (a1 * a2e).sqrt(),
        })
    }

    /// `φ1² a_b⁴`: power of the coherent part of the legitimate channel.
    pub fn coherent_power(&self) -> T {
        let ab2 = self.a_b * self.a_b;
        self.phi1 * self.phi1 * ab2 * ab2
    }

    /// Mean of `Re(H_b)`.
    pub fn mean_in_phase(&self) -> T {
        self.phi1 * self.a_b * self.a_b
    }

    /// Variances of `Re(H_b)` and `Im(H_b)` for `n` elements.
    pub fn component_variances(&self, n: usize) -> (T, T) {
        let two_n = T::lit(2.0) * T::from_usize_lossy(n);
        let c = self.coherent_power();
        (
            (T::one() + self.phi2 - T::lit(2.0) * c) / two_n,
            (T::one() - self.phi2) / two_n,
        )
    }
}

/// Squared folded normal legitimate SNR (no phase errors).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldedNormal<T> {
    pub k: T,
    pub mean_snr: T,
}

/// Squared Beckmann legitimate SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beckmann<T> {
    pub k: T,
    pub q: T,
    pub mean_snr: T,
}

/// Gamma (Nakagami-m power) approximation of the legitimate SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nakagami<T> {
    pub m: T,
    pub mean_snr: T,
}

fn positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl<T: Real> FoldedNormal<T> {
    pub fn new(k: T, mean_snr: T) -> Result<Self> {
        positive("K", k)?;
        positive("mean SNR", mean_snr)?;
        Ok(FoldedNormal { k, mean_snr })
    }
}

impl<T: Real> Beckmann<T> {
    pub fn new(k: T, q: T, mean_snr: T) -> Result<Self> {
        positive("K", k)?;
        positive("mean SNR", mean_snr)?;
        // q < 1 is legitimate: one-bit quantization leaves φ2 < φ1²a_b⁴.
        positive("q", q)?;
        Ok(Beckmann { k, q, mean_snr })
    }
}

impl<T: Real> Nakagami<T> {
    pub fn new(m: T, mean_snr: T) -> Result<Self> {
        positive("m", m)?;
        positive("mean SNR", mean_snr)?;
        Ok(Nakagami { m, mean_snr })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LegitimateDist<T> {
    FoldedNormal(FoldedNormal<T>),
    Beckmann(Beckmann<T>),
    Nakagami(Nakagami<T>),
}

impl<T: Real> LegitimateDist<T> {
    pub fn mean_snr(&self) -> T {
        match self {
            LegitimateDist::FoldedNormal(d) => d.mean_snr,
            LegitimateDist::Beckmann(d) => d.mean_snr,
            LegitimateDist::Nakagami(d) => d.mean_snr,
        }
    }

    pub fn model(&self) -> LegitimateModel {
        match self {
            LegitimateDist::FoldedNormal(_) => LegitimateModel::FoldedNormal,
            LegitimateDist::Beckmann(_) => LegitimateModel::Beckmann,
            LegitimateDist::Nakagami(_) => LegitimateModel::Nakagami,
        }
    }

    /// Same law with the mean SNR replaced (shape parameters unchanged).
    pub fn with_mean_snr(&self, mean_snr: T) -> Self {
        match *self {
            LegitimateDist::FoldedNormal(d) => LegitimateDist::FoldedNormal(FoldedNormal { mean_snr, ..d }),
            LegitimateDist::Beckmann(d) => LegitimateDist::Beckmann(Beckmann { mean_snr, ..d }),
            LegitimateDist::Nakagami(d) => LegitimateDist::Nakagami(Nakagami { mean_snr, ..d }),
        }
    }
}

/// Which legitimate-link law to build from a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LegitimateModel {
    FoldedNormal,
    Beckmann,
    Nakagami,
}

/// Parameters of the legitimate SNR law for `cfg`.
pub fn legitimate_params<T: Real>(
    cfg: &SystemConfig<T>,
    mom: &MomentSet<T>,
    model: LegitimateModel,
) -> Result<LegitimateDist<T>> {
    cfg.validate()?;
    let n = T::from_usize_lossy(cfg.n);
    let c = mom.coherent_power();
    if !(c < T::one()) {
        return Err(Error::Config(format!(
            "coherent power φ1²a_b⁴ = {c} must be < 1 (a_b = 1 is the no-fading limit)"
        )));
    }
    let full_mean = n * n * cfg.gamma0_b * (c + (T::one() - c) / n);
    match model {
        LegitimateModel::FoldedNormal => {
            if cfg.phase_model.has_errors() {
                return Err(Error::Config(
                    "folded normal law requires phase_model = None".into(),
                ));
            }
            Ok(LegitimateDist::FoldedNormal(FoldedNormal::new(
                n * c / (T::one() - c),
                full_mean,
            )?))
        }
        LegitimateModel::Beckmann => {
            if !cfg.phase_model.has_errors() || !(mom.phi2 < T::one()) {
                return Err(Error::Config(
                    "Beckmann law needs phase errors (q diverges without them); use FoldedNormal".into(),
                ));
            }
            let q = ((T::one() + mom.phi2 - T::lit(2.0) * c) / (T::one() - mom.phi2)).sqrt();
            Ok(LegitimateDist::Beckmann(Beckmann::new(
                n * c / (T::one() - c),
                q,
                full_mean,
            )?))
        }
        LegitimateModel::Nakagami => {
            let denom = T::one() + mom.phi2 - T::lit(2.0) * c;
            if !(denom > T::zero()) {
                return Err(Error::Config(format!(
                    "Nakagami shape undefined: 1 + φ2 − 2φ1²a_b⁴ = {denom}"
                )));
            }
            let m = n / T::lit(2.0) * c / denom;
            Ok(LegitimateDist::Nakagami(Nakagami::new(
                m,
                n * n * cfg.gamma0_b * c,
            )?))
        }
    }
}

/// Exponential eavesdropper SNR with mean `n·γ0e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EveDist<T> {
    pub mean_snr: T,
}

impl<T: Real> EveDist<T> {
    pub fn new(mean_snr: T) -> Result<Self> {
        positive("eavesdropper mean SNR", mean_snr)?;
        Ok(EveDist { mean_snr })
    }
}

pub fn eavesdropper_params<T: Real>(cfg: &SystemConfig<T>) -> Result<EveDist<T>> {
    cfg.validate()?;
    EveDist::new(T::from_usize_lossy(cfg.n) * cfg.gamma0_e)
}

/// Ratio of legitimate to eavesdropper mean SNR.
pub fn snr_ratio_scaling<T: Real>(cfg: &SystemConfig<T>, mom: &MomentSet<T>) -> T {
    let n = T::from_usize_lossy(cfg.n);
    let c = mom.coherent_power();
    n * (cfg.gamma0_b / cfg.gamma0_e) * (c + (T::one() - c) / n)
}
