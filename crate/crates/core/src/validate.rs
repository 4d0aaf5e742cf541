//! Self-check gates: special-function identities, transform oracles,
//! closed form against simulation, and the distributional tests.
//!
//! Every gate reduces to one or more [`TestReport`]s of the form
//! `statistic ≤ threshold`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{MomentSet, PhaseErrorModel, SystemConfig};
use crate::error::{Error, Result};
use crate::laplace::EulerInversion;
use crate::metrics::{asc, asc_asymptotic, scenario_laws, sop, sop_asymptotic, sop_br_with, Scenario};
use crate::montecarlo::{
    component_moments, empirical_asc, empirical_sop, independence_test, rayleigh_gof_test, simulate_batch,
    TestReport, TrialBatch,
};
use crate::quad::{try_integrate_to_infinity, QuadOptions};
use crate::special::{marcum_q_half, reg_gamma_upper};
use crate::sweep::DbGrid;
use crate::transform::{BeckmannComponents, GammaLaw, SnrLaw};
use crate::{db_to_linear, EveDist, LegitimateDist, Nakagami};

/// Normal quantile for a two-sided 99% interval.
const Z99: f64 = 2.575_829_303_548_901;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gate {
    Special,
    Transform,
    Reduction,
    Moments,
    SopMc,
    AscMc,
    Scaling,
    Independence,
    Gof,
    Diversity,
    Asymptotes,
}

impl Gate {
    pub const ALL: [Gate; 11] = [
        Gate::Special,
        Gate::Transform,
        Gate::Reduction,
        Gate::Moments,
        Gate::SopMc,
        Gate::AscMc,
        Gate::Scaling,
        Gate::Independence,
        Gate::Gof,
        Gate::Diversity,
        Gate::Asymptotes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Gate::Special => "special",
            Gate::Transform => "transform",
            Gate::Reduction => "reduction",
            Gate::Moments => "moments",
            Gate::SopMc => "sop-mc",
            Gate::AscMc => "asc-mc",
            Gate::Scaling => "scaling",
            Gate::Independence => "independence",
            Gate::Gof => "gof",
            Gate::Diversity => "diversity",
            Gate::Asymptotes => "asymptotes",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        Gate::ALL
            .into_iter()
            .find(|g| g.name() == t)
            .ok_or_else(|| Error::Config(format!("unknown gate '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateOptions {
    pub seed: u64,
    /// Trials per simulated configuration.
    pub trials: usize,
    pub gates: Vec<Gate>,
    /// Offset added to `φ2` in the analytic moments (negative control).
    pub phi2_fault: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            seed: 1,
            trials: 1_000_000,
            gates: Gate::ALL.to_vec(),
            phi2_fault: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    pub gate: Gate,
    pub report: TestReport,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub entries: Vec<GateReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.report.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &GateReport> {
        self.entries.iter().filter(|e| !e.report.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "{} {:<12} statistic = {:.6e}  threshold = {:.6e}  {}",
                if e.report.passed { "PASS" } else { "FAIL" },
                e.gate,
                e.report.statistic,
                e.report.threshold,
                e.report.description
            )?;
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} of {} checks passed",
            self.entries.len() - failed,
            self.entries.len()
        )
    }
}

/// Simulated batches keyed by `(n, bits)`, built on first use.
pub struct BatchCache {
    seed: u64,
    trials: usize,
    batches: BTreeMap<(usize, Option<u32>), TrialBatch>,
}

impl BatchCache {
    pub fn new(seed: u64, trials: usize) -> Self {
        BatchCache {
            seed,
            trials,
            batches: BTreeMap::new(),
        }
    }

    /// Batch at unit reference SNRs; rescale with [`TrialBatch::at_snr`].
    pub fn get(&mut self, n: usize, bits: Option<u32>) -> Result<&TrialBatch> {
        if !self.batches.contains_key(&(n, bits)) {
            let cfg = reference(n, bits, 1.0, 1.0);
            let seed = self.seed ^ ((n as u64) << 32 | bits.map_or(0xffff, u64::from));
            log::info!("simulating n = {n}, bits = {bits:?}, {} trials", self.trials);
            self.batches
                .insert((n, bits), simulate_batch(&cfg, seed, self.trials)?);
        }
        Ok(&self.batches[&(n, bits)])
    }
}

fn reference(n: usize, bits: Option<u32>, g0b: f64, g0e: f64) -> SystemConfig<f64> {
    let model = bits.map_or(PhaseErrorModel::None, |b| PhaseErrorModel::UniformQuantized {
        bits: b,
    });
    SystemConfig::reference(n, model, g0b, g0e)
}

fn closed_scenario(bits: Option<u32>) -> Scenario {
    if bits.is_some() {
        Scenario::BR
    } else {
        Scenario::FR
    }
}

fn bits_label(bits: Option<u32>) -> String {
    crate::sweep::format_bits(bits)
}

/// Runs the selected gates in a fixed order.
pub fn validate(opts: &ValidateOptions) -> Result<ValidationReport> {
    if opts.trials < 2 {
        return Err(Error::Config("validate needs at least 2 trials".into()));
    }
    let mut cache = BatchCache::new(opts.seed, opts.trials);
    let mut out = ValidationReport::default();
    let mut gates = opts.gates.clone();
    gates.sort();
    gates.dedup();
    for gate in gates {
        let reports = match gate {
            Gate::Special => vec![special_gate(opts.seed)?],
            Gate::Transform => vec![transform_gate()?],
            Gate::Reduction => reduction_gate()?,
            Gate::Moments => vec![moments_gate(&mut cache, opts.phi2_fault)?],
            Gate::SopMc => vec![sop_mc_gate(&mut cache)?],
            Gate::AscMc => asc_mc_gate(&mut cache)?,
            Gate::Scaling => scaling_gate(&mut cache)?,
            Gate::Independence => [4, 64]
                .into_iter()
                .map(|n| Ok(independence_test(cache.get(n, Some(2))?)))
                .collect::<Result<_>>()?,
            Gate::Gof => [16, 64, 256]
                .into_iter()
                .map(|n| Ok(rayleigh_gof_test(cache.get(n, Some(2))?)))
                .collect::<Result<_>>()?,
            Gate::Diversity => diversity_gate()?,
            Gate::Asymptotes => asymptote_gate()?,
        };
        out.entries
            .extend(reports.into_iter().map(|report| GateReport { gate, report }));
    }
    Ok(out)
}

/// Half-order Marcum Q through its defining integral, which reduces to
/// `√(2/π) ∫_b^∞ e^{−(x²+a²)/2} cosh(ax) dx`.
fn marcum_half_by_quadrature(a: f64, b: f64) -> Result<f64> {
    let opts = QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        max_intervals: 4_000,
    };
    let norm = (2.0 / std::f64::consts::PI).sqrt();
    let q = try_integrate_to_infinity(
        |x| {
            let (d, s) = (x - a, x + a);
            Ok(0.5 * norm * ((-0.5 * d * d).exp() + (-0.5 * s * s).exp()))
        },
        b,
        &opts,
    )?;
    Ok(q.value)
}

fn special_gate(seed: u64) -> Result<TestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let a = 5.0 * rng.random::<f64>();
        let b = 5.0 * rng.random::<f64>();
        let err = (marcum_q_half(a, b)?.value() - marcum_half_by_quadrature(a, b)?).abs();
        worst = worst.max(err);
    }
    Ok(TestReport::new(
        worst,
        1e-10,
        "max |Q_0.5(a,b) - defining integral| over 100 random (a,b) in [0,5]^2",
    ))
}

fn transform_gate() -> Result<TestReport> {
    let mean = 12.0_f64;
    let mut worst = 0.0_f64;
    for m in [0.5_f64, 1.0, 2.0, 8.0] {
        let law = GammaLaw::new(m, mean)?;
        for s in [0.0, -0.01, -0.05, -0.2, -2.0] {
            for z in [0.1, 0.5, 1.0, 3.0, 6.0, 12.0, 20.0, 30.0, 60.0, 100.0] {
                let want = (1.0 - s * mean / m).powf(-m) * reg_gamma_upper(m, z * (m / mean - s))?.value();
                let got = law.incomplete_mgf_upper(s, z)?;
                worst = worst.max(((got - want) / want).abs());
            }
        }
    }
    Ok(TestReport::new(
        worst,
        1e-8,
        "max relative error of the inverted gamma incomplete MGF, m in {0.5,1,2,8}, 50 (s,z) points",
    ))
}

fn rayleigh_sop(gb: f64, ge: f64, tau: f64) -> f64 {
    1.0 - gb / (gb + tau * ge) * (-(tau - 1.0) / gb).exp()
}

fn reduction_gate() -> Result<Vec<TestReport>> {
    let (ge, rate) = (db_to_linear(10.0), 1.0);
    let tau = 2f64.powf(rate);
    let eve = EveDist::new(ge)?;
    let (mut worst_br, mut worst_nr) = (0.0_f64, 0.0_f64);
    for i in 0..20 {
        let gb = db_to_linear(-20.0 + 3.0 * i as f64);
        let want = rayleigh_sop(gb, ge, tau);
        let comp = BeckmannComponents::from_kq(0.0, 1.0, gb)?;
        let br = sop_br_with(&comp, &eve, rate, &EulerInversion::default())?.value();
        let nr = sop(&LegitimateDist::Nakagami(Nakagami::new(1.0, gb)?), &eve, rate)?.value();
        worst_br = worst_br.max((br - want).abs());
        worst_nr = worst_nr.max((nr - want).abs());
    }
    Ok(vec![
        TestReport::new(
            worst_br,
            1e-8,
            "max |sop_br(K=0, q=1) - Rayleigh SOP| over 20 mean SNRs",
        ),
        TestReport::new(
            worst_nr,
            1e-8,
            "max |sop_nr(m=1) - Rayleigh SOP| over 20 mean SNRs",
        ),
    ])
}

fn moments_gate(cache: &mut BatchCache, phi2_fault: f64) -> Result<TestReport> {
    let (n, bits) = (64, Some(2));
    let mut mom = MomentSet::from_config(&reference(n, bits, 1.0, 1.0))?;
    mom.phi2 += phi2_fault;
    let (var_x, var_y) = mom.component_variances(n);
    let batch = cache.get(n, bits)?;
    let (mean, v_re, v_im) = component_moments(batch);
    let scale = (2.0 / batch.trials() as f64).sqrt();
    let z = [
        (mean.value - mom.mean_in_phase()).abs() / mean.stderr,
        (v_re - var_x).abs() / (var_x * scale),
        (v_im - var_y).abs() / (var_y * scale),
    ];
    Ok(TestReport::new(
        z.into_iter().fold(0.0, f64::max),
        4.0,
        format!(
            "max standard score of Re/Im moments of H_b vs analytic (n = {n}, bits = 2{})",
            if phi2_fault != 0.0 {
                format!(", phi2 offset {phi2_fault}")
            } else {
                String::new()
            }
        ),
    ))
}

fn sop_mc_gate(cache: &mut BatchCache) -> Result<TestReport> {
    let (n, bits, rate) = (64, Some(2), 1.0);
    let ge = db_to_linear(10.0);
    let batch = cache.get(n, bits)?.clone();
    let mut worst = 0.0_f64;
    let mut checked = 0;
    for g in DbGrid::new(-30.0, 10.0, 2.5)?.points() {
        let gb = db_to_linear(g);
        let (leg, eve) = scenario_laws(&reference(n, bits, gb, ge), Scenario::BR)?;
        let closed = sop(&leg, &eve, rate)?.value();
        if closed < 1e-3 {
            continue;
        }
        let est = empirical_sop(&batch.at_snr(gb, ge), rate)?;
        worst = worst.max((closed - est.value).abs() / est.half_width(Z99));
        checked += 1;
    }
    Ok(TestReport::new(
        worst,
        1.0,
        format!("max |sop_br - MC| in 99% CI half-widths over {checked} points with SOP >= 1e-3 (n = 64, bits = 2)"),
    ))
}

fn asc_mc_gate(cache: &mut BatchCache) -> Result<Vec<TestReport>> {
    let ge = db_to_linear(10.0);
    let grid = DbGrid::new(-20.0, 20.0, 5.0)?.points();
    let mut out = Vec::new();
    for n in [16, 64, 256] {
        for bits in [Some(2), None] {
            let batch = cache.get(n, bits)?.clone();
            let sc = closed_scenario(bits);
            let mut worst = 0.0_f64;
            for &g in &grid {
                let gb = db_to_linear(g);
                let (leg, eve) = scenario_laws(&reference(n, bits, gb, ge), sc)?;
                let est = empirical_asc(&batch.at_snr(gb, ge));
                worst = worst.max((asc(&leg, &eve)?.value() - est.value).abs());
            }
            out.push(TestReport::new(
                worst,
                0.05,
                format!(
                    "max |asc {sc} - MC| in bit/s/Hz, n = {n}, bits = {}",
                    bits_label(bits)
                ),
            ));
        }
    }
    for bits in [Some(2), None] {
        let batch = cache.get(4, bits)?.clone();
        let mut worst = f64::NEG_INFINITY;
        for &g in &grid {
            let gb = db_to_linear(g);
            let (leg, eve) = scenario_laws(&reference(4, bits, gb, ge), Scenario::NR)?;
            let est = empirical_asc(&batch.at_snr(gb, ge));
            worst = worst.max(asc(&leg, &eve)?.value() - est.value - 2.0 * est.stderr);
        }
        out.push(TestReport::new(
            worst,
            0.0,
            format!("max (asc NR - MC - 2 stderr), n = 4, bits = {}", bits_label(bits)),
        ));
    }
    Ok(out)
}

fn mean_powers(batch: &TrialBatch) -> (f64, f64) {
    let t = batch.trials() as f64;
    (batch.power_b().sum::<f64>() / t, batch.power_e().sum::<f64>() / t)
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn scaling_gate(cache: &mut BatchCache) -> Result<Vec<TestReport>> {
    // with unit reference SNRs, γ = n²|H|²
    let ratio = |batch: &TrialBatch| {
        let (pb, pe) = mean_powers(batch);
        pb / pe
    };
    let r64 = ratio(cache.get(64, Some(2))?);
    let r256 = ratio(cache.get(256, Some(2))?);
    let growth = r256 / r64;

    let ns = [4usize, 16, 64, 256];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for n in ns {
        let (_, pe) = mean_powers(cache.get(n, Some(2))?);
        xs.push((n as f64).ln());
        ys.push((pe * (n * n) as f64).ln());
    }
    let slope = fit_slope(&xs, &ys);
    Ok(vec![
        TestReport::new(
            (growth / 4.0 - 1.0).abs(),
            0.05,
            format!("|ratio(256)/ratio(64)/4 - 1| for mean SNR ratio b/e (growth {growth:.4})"),
        ),
        TestReport::new(
            (slope - 1.0).abs(),
            0.02,
            format!("|slope - 1| of log mean eavesdropper SNR vs log n (slope {slope:.4})"),
        ),
    ])
}

/// Cases for the high-SNR checks: FR without phase errors, BR and NR with
/// two-bit quantization, all at `n = 64`, `γ0e = 10 dB`.
fn high_snr_cases() -> [(Scenario, Option<u32>); 3] {
    [
        (Scenario::FR, None),
        (Scenario::BR, Some(2)),
        (Scenario::NR, Some(2)),
    ]
}

fn laws_at_mean(sc: Scenario, bits: Option<u32>, mean_b: f64) -> Result<(LegitimateDist<f64>, EveDist<f64>)> {
    let (leg, eve) = scenario_laws(&reference(64, bits, 1.0, db_to_linear(10.0)), sc)?;
    Ok((leg.with_mean_snr(mean_b), eve))
}

fn diversity_gate() -> Result<Vec<TestReport>> {
    let mut out = Vec::new();
    for (sc, bits) in high_snr_cases() {
        let (leg, eve) = laws_at_mean(sc, bits, 1.0)?;
        let ge = eve.mean_snr;
        let order = match &leg {
            LegitimateDist::FoldedNormal(_) => 0.5,
            LegitimateDist::Beckmann(_) => 1.0,
            LegitimateDist::Nakagami(d) => d.m,
        };
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in 0..5 {
            let gb = ge * 10f64.powf(5.0 + 0.5 * k as f64);
            xs.push(gb.ln());
            ys.push(sop_asymptotic(&leg.with_mean_snr(gb), &eve, 1.0)?.ln());
        }
        let slope = fit_slope(&xs, &ys);
        out.push(TestReport::new(
            ((-slope - order) / order).abs(),
            0.01,
            format!("relative error of asymptotic {sc} SOP slope {slope:.4} vs -{order:.4}"),
        ));
    }
    Ok(out)
}

fn asymptote_gate() -> Result<Vec<TestReport>> {
    let mut out = Vec::new();
    for (sc, bits) in high_snr_cases() {
        let (leg, eve) = laws_at_mean(sc, bits, 1.0)?;
        let leg = leg.with_mean_snr(1e6 * eve.mean_snr);
        let r = sop(&leg, &eve, 1.0)?.value() / sop_asymptotic(&leg, &eve, 1.0)?;
        out.push(TestReport::new(
            (r - 1.0).abs(),
            0.01,
            format!("|exact/asymptotic - 1| for {sc} SOP at mean SNR ratio 1e6 (ratio {r:.6})"),
        ));
        let r = asc(&leg, &eve)?.value() / asc_asymptotic(&leg, &eve)?;
        out.push(TestReport::new(
            (r - 1.0).abs(),
            0.01,
            format!("|exact/asymptotic - 1| for {sc} ASC at mean SNR ratio 1e6 (ratio {r:.6})"),
        ));
    }
    for (sc, bits) in high_snr_cases() {
        let (leg, eve) = scenario_laws(&reference(64, bits, db_to_linear(60.0), db_to_linear(10.0)), sc)?;
        let gap = (asc(&leg, &eve)?.value() - asc_asymptotic(&leg, &eve)?).abs();
        out.push(TestReport::new(
            gap,
            0.02,
            format!("|asc - asc_asymptotic| for {sc} at g0b = 60 dB"),
        ));
    }
    Ok(out)
}
