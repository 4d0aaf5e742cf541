//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so the lines print in order.
//! The numerical oracles here are written independently of the library:
//! exp-sinh quadrature, a direct KS distance, Pearson correlation and
//! least-squares slopes.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use lrs_secrecy::metrics::{asc, asc_asymptotic, scenario_laws, sop, sop_asymptotic, sop_br_with, sop_nr};
use lrs_secrecy::montecarlo::{empirical_asc, empirical_sop, simulate_batch};
use lrs_secrecy::special::marcum_q_half;
use lrs_secrecy::{
    db_to_linear, BeckmannComponents, EulerInversion, EveDist, GammaLaw, LegitimateDist, Nakagami,
    PhaseErrorModel, Scenario, SnrLaw, SystemConfig, TrialBatch,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRIALS: usize = 1_000_000;
const SEED: u64 = 20_240_601;
const Z99: f64 = 2.575_829_303_548_901;

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Outcome {
            passed,
            summary: summary.into(),
            details: Vec::new(),
        }
    }
}

/// `∫_a^∞ f` by the exp-sinh rule `x = a + w·exp(π/2 · sinh t)`.
fn exp_sinh(f: impl Fn(f64) -> f64, a: f64, w: f64) -> f64 {
    let h = 1.0 / 128.0;
    let mut sum = 0.0;
    let k_max = (5.5 / h) as i64;
    for k in -k_max..=k_max {
        let t = k as f64 * h;
        let e = (0.5 * PI * t.sinh()).exp();
        let dx = w * e * 0.5 * PI * t.cosh();
        let v = f(a + w * e);
        if v != 0.0 {
            sum += v * dx;
        }
    }
    sum * h
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Sup distance between the empirical CDF of `x` and `cdf`.
fn ks_distance(x: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = x.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = s.len() as f64;
    let mut d = 0.0_f64;
    for (i, &v) in s.iter().enumerate() {
        let f = cdf(v);
        d = d.max(f - i as f64 / k).max((i + 1) as f64 / k - f);
    }
    d
}

fn model(bits: Option<u32>) -> PhaseErrorModel {
    bits.map_or(PhaseErrorModel::None, |b| PhaseErrorModel::UniformQuantized {
        bits: b,
    })
}

fn config(n: usize, bits: Option<u32>, g0b: f64, g0e: f64) -> SystemConfig<f64> {
    SystemConfig::reference(n, model(bits), g0b, g0e)
}

fn label(bits: Option<u32>) -> String {
    bits.map_or("inf".into(), |b| b.to_string())
}

/// One batch per `(n, bits)` at unit reference SNRs.
struct Batches(BTreeMap<(usize, Option<u32>), TrialBatch>);

impl Batches {
    fn get(&mut self, n: usize, bits: Option<u32>) -> &TrialBatch {
        self.0.entry((n, bits)).or_insert_with(|| {
            let seed = SEED + 1000 * n as u64 + bits.map_or(99, u64::from);
            simulate_batch(&config(n, bits, 1.0, 1.0), seed, TRIALS).unwrap()
        })
    }
}

fn c1_marcum() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let a: f64 = 5.0 * rng.random::<f64>();
        let b: f64 = 5.0 * rng.random::<f64>();
        // Q_ν(a,b) = ∫_b^∞ x (x/a)^{ν−1} e^{−(x²+a²)/2} I_{ν−1}(ax) dx with
        // I_{−1/2}(y) = √(2/(πy)) cosh y
        let oracle = exp_sinh(
            |x| (2.0 / PI).sqrt() * 0.5 * ((-0.5 * (x - a).powi(2)).exp() + (-0.5 * (x + a).powi(2)).exp()),
            b,
            1.0,
        );
        worst = worst.max((marcum_q_half(a, b).unwrap().value() - oracle).abs());
    }
    Outcome::new(
        worst < 1e-10,
        format!("max abs error {worst:.2e} < 1e-10 over 100 points"),
    )
}

fn c2_gamma_incomplete() -> Outcome {
    let mean = 12.0;
    let mut worst = 0.0_f64;
    for (m, gamma_m) in [(0.5, PI.sqrt()), (1.0, 1.0), (2.0, 1.0), (8.0, 5040.0)] {
        let theta: f64 = mean / m;
        let law = GammaLaw::new(m, mean).unwrap();
        for s in [0.0, -0.01, -0.05, -0.2, -2.0] {
            let rate = 1.0 / theta - s;
            for z in [0.1, 0.5, 1.0, 3.0, 6.0, 12.0, 20.0, 30.0, 60.0, 100.0] {
                // factor e^{−rate·z} out so deep tails stay representable
                let body = exp_sinh(
                    |x| ((m - 1.0) * x.ln() - rate * (x - z) - m * theta.ln()).exp() / gamma_m,
                    z,
                    1.0 / rate,
                );
                let want_ln = body.ln() - rate * z;
                let got = law.incomplete_mgf_upper(s, z).unwrap();
                worst = worst.max(((got.ln() - want_ln).exp() - 1.0).abs());
            }
        }
    }
    Outcome::new(
        worst < 1e-8,
        format!("max relative error {worst:.2e} < 1e-8 over 4 shapes x 50 points"),
    )
}

fn c3_rayleigh_reduction() -> Outcome {
    let (ge, rate) = (8.0, 1.0);
    let tau: f64 = 2.0_f64.powf(rate);
    let eve = EveDist::new(ge).unwrap();
    let mut worst = 0.0_f64;
    for i in 0..20 {
        let gb = 10f64.powf(-2.0 + 0.3 * i as f64);
        let want = 1.0 - gb / (gb + tau * ge) * (-(tau - 1.0) / gb).exp();
        let comp = BeckmannComponents::from_kq(0.0, 1.0, gb).unwrap();
        let br = sop_br_with(&comp, &eve, rate, &EulerInversion::default())
            .unwrap()
            .value();
        let nr = sop_nr(&Nakagami::new(1.0, gb).unwrap(), &eve, rate)
            .unwrap()
            .value();
        worst = worst.max((br - want).abs()).max((nr - want).abs());
    }
    Outcome::new(
        worst < 1e-8,
        format!("max abs deviation {worst:.2e} < 1e-8 over 20 mean SNRs"),
    )
}

fn c4_sop_vs_mc(batches: &mut Batches) -> Outcome {
    let (n, bits, rate) = (64, Some(2), 1.0);
    let ge = db_to_linear(10.0);
    let batch = batches.get(n, bits).clone();
    let mut details = Vec::new();
    let mut worst = 0.0_f64;
    let mut bad = 0;
    for i in 0..=16 {
        let g = -30.0 + 2.5 * i as f64;
        let gb = db_to_linear(g);
        let (leg, eve) = scenario_laws(&config(n, bits, gb, ge), Scenario::BR).unwrap();
        let closed = sop(&leg, &eve, rate).unwrap().value();
        if closed < 1e-3 {
            continue;
        }
        let est = empirical_sop(&batch.at_snr(gb, ge), rate).unwrap();
        let units = (closed - est.value).abs() / (Z99 * est.stderr);
        worst = worst.max(units);
        if units > 1.0 {
            bad += 1;
        }
        details.push(format!(
            "g0b {g:>5} dB: closed {closed:.5e}  MC {:.5e}  |diff|/CI99 {units:.2}",
            est.value
        ));
    }
    let mut o = Outcome::new(
        worst <= 1.0,
        format!(
            "{bad} of {} points outside the 99% CI (worst {worst:.2} half-widths)",
            details.len()
        ),
    );
    o.details = details;
    o
}

fn c5_asc_vs_mc(batches: &mut Batches) -> Outcome {
    let ge = db_to_linear(10.0);
    let grid: Vec<f64> = (0..=8).map(|i| -20.0 + 5.0 * i as f64).collect();
    let mut worst = 0.0_f64;
    let mut details = Vec::new();
    for n in [16, 64, 256] {
        for bits in [Some(2), None] {
            let sc = if bits.is_some() {
                Scenario::BR
            } else {
                Scenario::FR
            };
            let batch = batches.get(n, bits).clone();
            let mut w = 0.0_f64;
            for &g in &grid {
                let gb = db_to_linear(g);
                let (leg, eve) = scenario_laws(&config(n, bits, gb, ge), sc).unwrap();
                let mc = empirical_asc(&batch.at_snr(gb, ge)).value;
                w = w.max((asc(&leg, &eve).unwrap().value() - mc).abs());
            }
            details.push(format!(
                "n {n:>3}, bits {:>3}: max |asc {sc} - MC| = {w:.4}",
                label(bits)
            ));
            worst = worst.max(w);
        }
    }
    let mut nr_excess = f64::NEG_INFINITY;
    for bits in [Some(2), None] {
        let batch = batches.get(4, bits).clone();
        for &g in &grid {
            let gb = db_to_linear(g);
            let (leg, eve) = scenario_laws(&config(4, bits, gb, ge), Scenario::NR).unwrap();
            let est = empirical_asc(&batch.at_snr(gb, ge));
            nr_excess = nr_excess.max(asc(&leg, &eve).unwrap().value() - est.value - 2.0 * est.stderr);
        }
    }
    details.push(format!("n 4: max (asc NR - MC - 2 stderr) = {nr_excess:.3e}"));
    let mut o = Outcome::new(
        worst <= 0.05 && nr_excess <= 0.0,
        format!("max gap {worst:.4} <= 0.05 bit/s/Hz; NR at n=4 excess {nr_excess:.3e} <= 0"),
    );
    o.details = details;
    o
}

fn mean_powers(batch: &TrialBatch) -> (f64, f64) {
    let t = batch.trials() as f64;
    let b = batch.hb().iter().map(|h| h.norm_sqr()).sum::<f64>() / t;
    let e = batch.he().iter().map(|h| h.norm_sqr()).sum::<f64>() / t;
    (b, e)
}

fn c6_scaling(batches: &mut Batches) -> Outcome {
    // at unit reference SNRs the SNR ratio is |H_b|²/|H_e|² on average
    let (b64, e64) = mean_powers(batches.get(64, Some(2)));
    let (b256, e256) = mean_powers(batches.get(256, Some(2)));
    let growth = (b256 / e256) / (b64 / e64);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for n in [4usize, 16, 64, 256] {
        let (_, e) = mean_powers(batches.get(n, Some(2)));
        xs.push((n as f64).ln());
        ys.push((e * (n * n) as f64).ln());
    }
    let slope = fit_slope(&xs, &ys);
    Outcome::new(
        (growth / 4.0 - 1.0).abs() <= 0.05 && (slope - 1.0).abs() <= 0.02,
        format!(
            "SNR-ratio growth 64->256 = {growth:.4} (4 +/- 5%); eavesdropper slope {slope:.4} (1 +/- 0.02)"
        ),
    )
}

fn c7_independence(batches: &mut Batches) -> Outcome {
    let threshold = 3.0 / (TRIALS as f64).sqrt();
    let mut details = Vec::new();
    let mut ok = true;
    for n in [4, 64] {
        let batch = batches.get(n, Some(2));
        let pb: Vec<f64> = batch.hb().iter().map(|h| h.norm_sqr()).collect();
        let pe: Vec<f64> = batch.he().iter().map(|h| h.norm_sqr()).collect();
        let rho = pearson(&pb, &pe);
        ok &= rho.abs() < threshold;
        details.push(format!("n {n:>3}: |rho| = {:.4}", rho.abs()));
    }
    let mut o = Outcome::new(ok, format!("|rho| < {threshold:.4} at n = 4 and 64"));
    o.details = details;
    o
}

fn c8_rayleigh_ks(batches: &mut Batches) -> Outcome {
    let threshold = 1.63 / (TRIALS as f64).sqrt();
    let mut details = Vec::new();
    let mut ok = true;
    for n in [16, 64, 256] {
        let mags: Vec<f64> = batches.get(n, Some(2)).he().iter().map(|h| h.norm()).collect();
        let omega = 1.0 / n as f64;
        let d = ks_distance(&mags, |r| 1.0 - (-r * r / omega).exp());
        ok &= d <= threshold;
        details.push(format!("n {n:>3}: D = {d:.5}"));
    }
    let mut o = Outcome::new(ok, format!("KS D <= {threshold:.5} for n = 16, 64, 256"));
    o.details = details;
    o
}

/// Deep-SNR fixtures at `n = 64`, `γ0e = 10 dB` with their nominal orders.
fn deep_snr_laws() -> Vec<(Scenario, LegitimateDist<f64>, EveDist<f64>, f64)> {
    [
        (Scenario::FR, None),
        (Scenario::BR, Some(2)),
        (Scenario::NR, Some(2)),
    ]
    .into_iter()
    .map(|(sc, bits)| {
        let (leg, eve) = scenario_laws(&config(64, bits, 1.0, db_to_linear(10.0)), sc).unwrap();
        let order = match &leg {
            LegitimateDist::FoldedNormal(_) => 0.5,
            LegitimateDist::Beckmann(_) => 1.0,
            LegitimateDist::Nakagami(d) => d.m,
        };
        (sc, leg, eve, order)
    })
    .collect()
}

fn c9_diversity() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (sc, leg, eve, order) in deep_snr_laws() {
        let xs: Vec<f64> = (0..6)
            .map(|k| (eve.mean_snr * 10f64.powf(5.0 + 0.5 * k as f64)).ln())
            .collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| {
                sop_asymptotic(&leg.with_mean_snr(x.exp()), &eve, 1.0)
                    .unwrap()
                    .ln()
            })
            .collect();
        let slope = fit_slope(&xs, &ys);
        ok &= ((-slope - order) / order).abs() <= 0.01;
        parts.push(format!("{sc} {slope:.4} (-{order:.4})"));
    }
    Outcome::new(ok, format!("slopes {}", parts.join(", ")))
}

fn c10_asymptotes() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for (sc, leg, eve, _) in deep_snr_laws() {
        let leg = leg.with_mean_snr(1e6 * eve.mean_snr);
        let r_sop = sop(&leg, &eve, 1.0).unwrap().value() / sop_asymptotic(&leg, &eve, 1.0).unwrap();
        let r_asc = asc(&leg, &eve).unwrap().value() / asc_asymptotic(&leg, &eve).unwrap();
        ok &= (0.99..=1.01).contains(&r_sop) && (0.99..=1.01).contains(&r_asc);
        details.push(format!("{sc}: SOP ratio {r_sop:.5}, ASC ratio {r_asc:.7}"));
    }
    for (sc, bits) in [
        (Scenario::FR, None),
        (Scenario::BR, Some(2)),
        (Scenario::NR, Some(2)),
    ] {
        let (leg, eve) =
            scenario_laws(&config(64, bits, db_to_linear(60.0), db_to_linear(10.0)), sc).unwrap();
        let gap = (asc(&leg, &eve).unwrap().value() - asc_asymptotic(&leg, &eve).unwrap()).abs();
        ok &= gap < 0.02;
        details.push(format!("{sc}: ASC gap at 60 dB {gap:.2e}"));
    }
    let mut o = Outcome::new(ok, "exact/asymptotic ratios in [0.99, 1.01]; ASC gaps < 0.02 bit");
    o.details = details;
    o
}

type Criterion = Box<dyn FnOnce(&mut Batches) -> Outcome>;

fn main() -> ExitCode {
    // `cargo test` passes harness flags; a name filter other than ours skips the suite
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return ExitCode::SUCCESS;
    }
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }

    let mut batches = Batches(BTreeMap::new());
    let criteria: Vec<(&str, Criterion)> = vec![
        ("special-function identity", Box::new(|_| c1_marcum())),
        (
            "gamma incomplete MGF by inversion",
            Box::new(|_| c2_gamma_incomplete()),
        ),
        ("Rayleigh reduction", Box::new(|_| c3_rayleigh_reduction())),
        ("SOP closed form vs simulation", Box::new(c4_sop_vs_mc)),
        ("ASC closed forms vs simulation", Box::new(c5_asc_vs_mc)),
        ("mean SNR scaling", Box::new(c6_scaling)),
        ("independence of |H_b|^2 and |H_e|^2", Box::new(c7_independence)),
        ("Rayleigh eavesdropper (KS)", Box::new(c8_rayleigh_ks)),
        ("diversity orders", Box::new(|_| c9_diversity())),
        ("asymptote consistency", Box::new(|_| c10_asymptotes())),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let t0 = Instant::now();
        let o = run(&mut batches);
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} | {} ({:.1} s)",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            name,
            o.summary,
            t0.elapsed().as_secs_f64()
        );
        for d in &o.details {
            println!("    {d}");
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
