//! Per-element simulation of the composite channels and the empirical
//! statistics computed from it.
//!
//! Each trial draws `n` independent triples of hop coefficients, applies the
//! phase design with a residual error `Θ_i`, and forms
//!
//! ```text
//! H_b = (1/n) Σ |H_{i,1}||H_{i,b}| e^{jΘ_i}
//! H_e = (1/n) Σ |H_{i,1}||H_{i,e}| e^{jΨ_i},   Ψ_i = ∠H_{i,e} − ∠H_{i,b} + Θ_i
//! ```
//!
//! Trials are generated in fixed-size chunks, each with its own ChaCha
//! stream keyed by `(seed, chunk index)`, so results do not depend on the
//! thread count.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::{HopFading, SystemConfig};
use crate::error::{Error, Result};

const CHUNK: usize = 1024;

/// Simulated channel realizations together with the reference SNRs used to
/// turn them into instantaneous SNRs.
#[derive(Debug, Clone)]
pub struct TrialBatch {
    pub seed: u64,
    pub n: usize,
    pub gamma0_b: f64,
    pub gamma0_e: f64,
    hb: Arc<Vec<Complex64>>,
    he: Arc<Vec<Complex64>>,
}

impl TrialBatch {
    pub fn trials(&self) -> usize {
        self.hb.len()
    }

    pub fn hb(&self) -> &[Complex64] {
        &self.hb
    }

    pub fn he(&self) -> &[Complex64] {
        &self.he
    }

    /// Same realizations at other reference SNRs (shares storage).
    pub fn at_snr(&self, gamma0_b: f64, gamma0_e: f64) -> TrialBatch {
        TrialBatch {
            gamma0_b,
            gamma0_e,
            ..self.clone()
        }
    }

    /// Replaces the eavesdropper channel, e.g. for positive controls.
    pub fn with_eavesdropper(&self, he: Vec<Complex64>) -> Result<TrialBatch> {
        if he.len() != self.trials() {
            return Err(Error::Config(format!(
                "eavesdropper samples ({}) do not match trial count ({})",
                he.len(),
                self.trials()
            )));
        }
        Ok(TrialBatch {
            he: Arc::new(he),
            ..self.clone()
        })
    }

    pub fn power_b(&self) -> impl Iterator<Item = f64> + '_ {
        self.hb.iter().map(|h| h.norm_sqr())
    }

    pub fn power_e(&self) -> impl Iterator<Item = f64> + '_ {
        self.he.iter().map(|h| h.norm_sqr())
    }

    pub fn gamma_b(&self) -> impl Iterator<Item = f64> + '_ {
        let scale = (self.n * self.n) as f64 * self.gamma0_b;
        self.power_b().map(move |p| scale * p)
    }

    pub fn gamma_e(&self) -> impl Iterator<Item = f64> + '_ {
        let scale = (self.n * self.n) as f64 * self.gamma0_e;
        self.power_e().map(move |p| scale * p)
    }
}

struct HopSampler {
    mean: f64,
    sigma: f64,
    deterministic: bool,
}

impl HopSampler {
    fn new(hop: &HopFading<f64>) -> Self {
        match *hop {
            HopFading::Rician { k } => HopSampler {
                mean: (k / (k + 1.0)).sqrt(),
                sigma: (0.5 / (k + 1.0)).sqrt(),
                deterministic: false,
            },
            HopFading::Rayleigh => HopSampler {
                mean: 0.0,
                sigma: std::f64::consts::FRAC_1_SQRT_2,
                deterministic: false,
            },
            HopFading::Deterministic => HopSampler {
                mean: 1.0,
                sigma: 0.0,
                deterministic: true,
            },
        }
    }

    /// Coefficient before its uniform specular phase rotation.
    fn unrotated(&self, rng: &mut ChaCha8Rng) -> Complex64 {
        if self.deterministic {
            return Complex64::new(1.0, 0.0);
        }
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        Complex64::new(self.mean + self.sigma * x, self.sigma * y)
    }
}

/// Simulates `trials` independent channel uses of `cfg`.
pub fn simulate_batch(cfg: &SystemConfig<f64>, seed: u64, trials: usize) -> Result<TrialBatch> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::Config("trials must be >= 1".into()));
    }
    let n = cfg.n;
    let half_width = cfg.phase_model.half_width::<f64>();
    let s1 = HopSampler::new(&cfg.hop_a_r);
    let sb = HopSampler::new(&cfg.hop_r_b);
    let se = HopSampler::new(&cfg.hop_r_e);
    let chunks = trials.div_ceil(CHUNK);
    let inv_n = 1.0 / n as f64;

    // Each hop carries a uniform specular phase φ. Only φ_e − φ_b reaches the
    // eavesdropper term, and a Rayleigh H_e is circularly symmetric, so the
    // rotation leaves its law unchanged and is skipped.
    let rotate = !matches!(cfg.hop_r_e, HopFading::Rayleigh);

    let parts: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let len = CHUNK.min(trials - chunk * CHUNK);
            let mut hb = Vec::with_capacity(len);
            let mut he = Vec::with_capacity(len);
            for _ in 0..len {
                let mut acc_b = Complex64::new(0.0, 0.0);
                let mut acc_e = Complex64::new(0.0, 0.0);
                for _ in 0..n {
                    let g1 = s1.unrotated(&mut rng).norm_sqr().sqrt();
                    let h_b = sb.unrotated(&mut rng);
                    let h_e = se.unrotated(&mut rng);
                    let theta = match half_width {
                        Some(u) => u * (2.0 * rng.random::<f64>() - 1.0),
                        None => 0.0,
                    };
                    let mag_b = h_b.norm_sqr().sqrt();
                    let (e_b, e_e) = if rotate {
                        let diff = std::f64::consts::TAU * (rng.random::<f64>() - rng.random::<f64>());
                        (
                            Complex64::from_polar(1.0, theta),
                            Complex64::from_polar(1.0, theta + diff),
                        )
                    } else if half_width.is_some() {
                        let e = Complex64::from_polar(1.0, theta);
                        (e, e)
                    } else {
                        (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
                    };
                    acc_b += e_b * (g1 * mag_b);
                    // |H_e| e^{jΨ} = H_e · conj(H_b)/|H_b| · e^{jΘ}
                    if mag_b > 0.0 {
                        acc_e += h_e * h_b.conj() * e_e * (g1 / mag_b);
                    } else {
                        acc_e += h_e * e_e * g1;
                    }
                }
                hb.push(acc_b * inv_n);
                he.push(acc_e * inv_n);
            }
            (hb, he)
        })
        .collect();

    let mut hb = Vec::with_capacity(trials);
    let mut he = Vec::with_capacity(trials);
    for (b, e) in parts {
        hb.extend(b);
        he.extend(e);
    }
    log::debug!("simulated {trials} trials, n = {n}, seed = {seed}");
    Ok(TrialBatch {
        seed,
        n,
        gamma0_b: cfg.gamma0_b,
        gamma0_e: cfg.gamma0_e,
        hb: Arc::new(hb),
        he: Arc::new(he),
    })
}

/// Sample estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    /// Number of indicator hits; equals `trials` for mean estimates.
    pub events: usize,
    pub trials: usize,
}

impl Estimate {
    /// Half-width of the normal-approximation interval at two-sided level
    /// given by the quantile `z`.
    pub fn half_width(&self, z: f64) -> f64 {
        z * self.stderr
    }
}

/// Fraction of trials with `log2(1+γ_b) − log2(1+γ_e) < rate_rs`.
///
/// Zero rate gives zero: the clamped secrecy capacity is never negative.
pub fn empirical_sop(batch: &TrialBatch, rate_rs: f64) -> Result<Estimate> {
    if !(rate_rs >= 0.0) || !rate_rs.is_finite() {
        return Err(Error::domain(
            "empirical_sop",
            format!("rate_rs = {rate_rs} must be finite and >= 0"),
        ));
    }
    let trials = batch.trials();
    if rate_rs == 0.0 {
        return Ok(Estimate {
            value: 0.0,
            stderr: 0.0,
            events: 0,
            trials,
        });
    }
    let tau = 2f64.powf(rate_rs);
    let events = batch
        .gamma_b()
        .zip(batch.gamma_e())
        .filter(|&(b, e)| 1.0 + b < tau * (1.0 + e))
        .count();
    let p = events as f64 / trials as f64;
    Ok(Estimate {
        value: p,
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        events,
        trials,
    })
}

/// Sample mean of `max{log2(1+γ_b) − log2(1+γ_e), 0}`.
pub fn empirical_asc(batch: &TrialBatch) -> Estimate {
    mean_estimate(
        batch
            .gamma_b()
            .zip(batch.gamma_e())
            .map(|(b, e)| ((b.ln_1p() - e.ln_1p()) / std::f64::consts::LN_2).max(0.0)),
    )
}

/// Sample mean with standard error (Welford).
pub fn mean_estimate(values: impl Iterator<Item = f64>) -> Estimate {
    let (mut count, mut mean, mut m2) = (0usize, 0.0, 0.0);
    for v in values {
        count += 1;
        let d = v - mean;
        mean += d / count as f64;
        m2 += d * (v - mean);
    }
    let var = if count > 1 { m2 / (count - 1) as f64 } else { 0.0 };
    Estimate {
        value: mean,
        stderr: (var / count.max(1) as f64).sqrt(),
        events: count,
        trials: count,
    }
}

/// Outcome of a statistical gate.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
    pub description: String,
}

impl TestReport {
    pub fn new(statistic: f64, threshold: f64, description: impl Into<String>) -> Self {
        TestReport {
            statistic,
            threshold,
            passed: statistic <= threshold,
            description: description.into(),
        }
    }
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "pearson: length mismatch");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    sxy / (sxx * syy).sqrt()
}

/// `|ρ(|H_b|², |H_e|²)|` against `3/√trials`.
pub fn independence_test(batch: &TrialBatch) -> TestReport {
    let pb: Vec<f64> = batch.power_b().collect();
    let pe: Vec<f64> = batch.power_e().collect();
    let rho = pearson(&pb, &pe);
    TestReport::new(
        rho.abs(),
        3.0 / (batch.trials() as f64).sqrt(),
        format!(
            "|pearson(|H_b|^2, |H_e|^2)|, n = {}, trials = {}",
            batch.n,
            batch.trials()
        ),
    )
}

/// Kolmogorov–Smirnov distance between `samples` and a continuous `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// KS test of magnitudes against Rayleigh with `E{R²} = mean_square`, 1% level.
pub fn rayleigh_ks_report(
    magnitudes: &[f64],
    mean_square: f64,
    description: impl Into<String>,
) -> TestReport {
    let d = ks_statistic(magnitudes, |r| -(-r * r / mean_square).exp_m1());
    TestReport::new(d, 1.63 / (magnitudes.len() as f64).sqrt(), description)
}

/// `|H_e|` against Rayleigh with `E{R_e²} = 1/n`.
pub fn rayleigh_gof_test(batch: &TrialBatch) -> TestReport {
    let mags: Vec<f64> = batch.he.iter().map(|h| h.norm()).collect();
    rayleigh_ks_report(
        &mags,
        1.0 / batch.n as f64,
        format!(
            "KS |H_e| vs Rayleigh(1/n), n = {}, trials = {}",
            batch.n,
            batch.trials()
        ),
    )
}

/// Sample mean of `Re H_b` and variances of `Re H_b`, `Im H_b`.
pub fn component_moments(batch: &TrialBatch) -> (Estimate, f64, f64) {
    let re = mean_estimate(batch.hb.iter().map(|h| h.re));
    let im = mean_estimate(batch.hb.iter().map(|h| h.im));
    let n = batch.trials() as f64;
    let var_re = re.stderr * re.stderr * n;
    let var_im = im.stderr * im.stderr * n;
    (re, var_re, var_im)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFormat {
    /// Header `gamma_b,gamma_e`, one pair per line.
    Csv,
    /// Little-endian `f64` pairs, no header.
    Binary,
}

/// Writes the `(γ_b, γ_e)` pairs of `batch`.
pub fn write_samples<W: Write>(batch: &TrialBatch, format: SampleFormat, mut out: W) -> std::io::Result<()> {
    match format {
        SampleFormat::Csv => {
            writeln!(out, "gamma_b,gamma_e")?;
            for (b, e) in batch.gamma_b().zip(batch.gamma_e()) {
                writeln!(out, "{b:e},{e:e}")?;
            }
        }
        SampleFormat::Binary => {
            for (b, e) in batch.gamma_b().zip(batch.gamma_e()) {
                out.write_all(&b.to_le_bytes())?;
                out.write_all(&e.to_le_bytes())?;
            }
        }
    }
    out.flush()
}
