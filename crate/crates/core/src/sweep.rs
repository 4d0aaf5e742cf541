//! Parameter sweeps over element count, quantization and legitimate SNR.
//!
//! The sweep specification is expressed in dB; conversion to linear SNR
//! happens once, when each grid point's [`SystemConfig`] is built.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{PhaseErrorModel, SystemConfig};
use crate::error::{Error, Result};
use crate::metrics::{asc, asc_asymptotic, scenario_laws, sop, sop_asymptotic, Scenario};
use crate::montecarlo::{empirical_asc, empirical_sop, simulate_batch, TrialBatch};
use crate::{db_to_linear, Real};

/// Minimum number of outage events for a resolvable MC estimate.
pub const MC_EVENT_FLOOR: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Sop,
    Asc,
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sop" => Ok(Metric::Sop),
            "asc" => Ok(Metric::Asc),
            other => Err(Error::Config(format!(
                "unknown metric '{other}' (expected sop or asc)"
            ))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Sop => "sop",
            Metric::Asc => "asc",
        })
    }
}

/// One curve family of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Exact(Scenario),
    Asymptotic(Scenario),
    MonteCarlo,
}

impl Variant {
    /// Remaps FR and BR to whichever one applies to the phase model.
    fn resolve(self, ideal: bool) -> Variant {
        let fix = |sc: Scenario| match (sc, ideal) {
            (Scenario::BR, true) => Scenario::FR,
            (Scenario::FR, false) => Scenario::BR,
            (other, _) => other,
        };
        match self {
            Variant::Exact(sc) => Variant::Exact(fix(sc)),
            Variant::Asymptotic(sc) => Variant::Asymptotic(fix(sc)),
            Variant::MonteCarlo => Variant::MonteCarlo,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Exact(sc) => write!(f, "{sc}"),
            Variant::Asymptotic(sc) => write!(f, "asymptotic-{sc}"),
            Variant::MonteCarlo => f.write_str("MC"),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("mc") {
            return Ok(Variant::MonteCarlo);
        }
        let lower = t.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("asymptotic-") {
            return Ok(Variant::Asymptotic(rest.parse()?));
        }
        Ok(Variant::Exact(t.parse()?))
    }
}

/// Parses `"inf"` or a positive bit count.
pub fn parse_bits(s: &str) -> Result<Option<u32>> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Ok(None);
    }
    match t.parse::<u32>() {
        Ok(b) if b >= 1 => Ok(Some(b)),
        _ => Err(Error::Config(format!(
            "bits must be a positive integer or 'inf', got '{t}'"
        ))),
    }
}

pub fn format_bits(bits: Option<u32>) -> String {
    bits.map_or_else(|| "inf".to_string(), |b| b.to_string())
}

fn phase_model(bits: Option<u32>) -> PhaseErrorModel {
    bits.map_or(PhaseErrorModel::None, |b| PhaseErrorModel::UniformQuantized {
        bits: b,
    })
}

/// Inclusive dB grid `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl DbGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let g = DbGrid { start, stop, step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Config(format!(
                "dB grid needs finite bounds and step > 0, got {self}"
            )));
        }
        if self.stop < self.start {
            return Err(Error::Config(format!("dB grid is empty: {self}")));
        }
        Ok(())
    }

    /// Points `start + i·step`, rounded to 1e-9 dB so they print cleanly.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((self.start + i as f64 * self.step) * 1e9).round() / 1e9)
            .collect()
    }
}

impl fmt::Display for DbGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

impl FromStr for DbGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| Error::Config(format!("bad number '{p}' in dB grid '{s}'")))
        };
        match parts.as_slice() {
            [single] => {
                let v = num(single)?;
                DbGrid::new(v, v, 1.0)
            }
            [a, b, c] => DbGrid::new(num(a)?, num(b)?, num(c)?),
            _ => Err(Error::Config(format!(
                "dB grid must be start:stop:step, got '{s}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub metric: Metric,
    pub variants: Vec<Variant>,
    pub n_list: Vec<usize>,
    pub bits_list: Vec<Option<u32>>,
    pub g0b_db: DbGrid,
    pub g0e_db: f64,
    pub rate_rs: f64,
    pub trials: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            metric: Metric::Sop,
            variants: vec![Variant::Exact(Scenario::BR), Variant::MonteCarlo],
            n_list: vec![64],
            bits_list: vec![Some(2)],
            g0b_db: DbGrid {
                start: -20.0,
                stop: 20.0,
                step: 5.0,
            },
            g0e_db: 10.0,
            rate_rs: 1.0,
            trials: 1_000_000,
            seed: 1,
            out: None,
        }
    }
}

fn all_variants() -> Vec<Variant> {
    let mut v: Vec<Variant> = Scenario::ALL.iter().map(|&s| Variant::Exact(s)).collect();
    v.push(Variant::MonteCarlo);
    v.extend(Scenario::ALL.iter().map(|&s| Variant::Asymptotic(s)));
    v
}

impl SweepSpec {
    /// ASC curves over `n ∈ {4,16,64,256}`, `bits ∈ {1,2,∞}`.
    pub fn fig1() -> Self {
        SweepSpec {
            metric: Metric::Asc,
            variants: all_variants(),
            n_list: vec![4, 16, 64, 256],
            bits_list: vec![Some(1), Some(2), None],
            g0b_db: DbGrid {
                start: -20.0,
                stop: 20.0,
                step: 5.0,
            },
            ..Self::default()
        }
    }

    /// SOP curves over `n ∈ {4,16,64,256}`, `bits ∈ {2,∞}`, `R_S = 1`.
    pub fn fig2() -> Self {
        SweepSpec {
            metric: Metric::Sop,
            variants: all_variants(),
            n_list: vec![4, 16, 64, 256],
            bits_list: vec![Some(2), None],
            g0b_db: DbGrid {
                start: -30.0,
                stop: 10.0,
                step: 2.5,
            },
            rate_rs: 1.0,
            ..Self::default()
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "fig1" => Ok(Self::fig1()),
            "fig2" => Ok(Self::fig2()),
            other => Err(Error::Config(format!(
                "unknown preset '{other}' (expected fig1 or fig2)"
            ))),
        }
    }

    /// Applies one `key = value` setting; keys match the long CLI flags.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let list = |v: &str| -> Vec<String> {
            v.split(',')
                .map(|p| p.trim().to_string())
                .filter(|p| !p.is_empty())
                .collect()
        };
        let number = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: bad number '{v}'")))
        };
        match key.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "preset" => {
                let out = self.out.take();
                *self = Self::preset(value)?;
                self.out = out;
            }
            "metric" => self.metric = value.parse()?,
            "variants" => {
                self.variants = list(value).iter().map(|v| v.parse()).collect::<Result<_>>()?;
            }
            "n" => {
                self.n_list = list(value)
                    .iter()
                    .map(|v| match v.parse::<usize>() {
                        Ok(n) if n >= 1 => Ok(n),
                        _ => Err(Error::Config(format!("n: expected positive integers, got '{v}'"))),
                    })
                    .collect::<Result<_>>()?;
            }
            "bits" => self.bits_list = list(value).iter().map(|v| parse_bits(v)).collect::<Result<_>>()?,
            "g0b-db" => self.g0b_db = value.parse()?,
            "g0e-db" => self.g0e_db = number(value)?,
            "rs" => self.rate_rs = number(value)?,
            "trials" => {
                self.trials = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("trials: bad count '{value}'")))?
            }
            "seed" => {
                self.seed = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("seed: bad integer '{value}'")))?
            }
            "out" => self.out = Some(PathBuf::from(value.trim())),
            other => return Err(Error::Config(format!("unknown setting '{other}'"))),
        }
        Ok(())
    }

    /// Parses a `key = value` file. A `preset` line, wherever it appears, is
    /// applied first so the remaining keys override it. `#` starts a comment.
    pub fn from_config_text(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        let mut spec = SweepSpec::default();
        if let Some((_, p)) = pairs.iter().find(|(k, _)| k.eq_ignore_ascii_case("preset")) {
            spec = SweepSpec::preset(p)?;
        }
        for (k, v) in pairs.iter().filter(|(k, _)| !k.eq_ignore_ascii_case("preset")) {
            spec.set(k, v)?;
        }
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.variants.is_empty() || self.n_list.is_empty() || self.bits_list.is_empty() {
            return Err(Error::Config(
                "variants, n and bits lists must be nonempty".into(),
            ));
        }
        self.g0b_db.validate()?;
        if !self.g0e_db.is_finite() {
            return Err(Error::Config("g0e_dB must be finite".into()));
        }
        if !(self.rate_rs >= 0.0) || !self.rate_rs.is_finite() {
            return Err(Error::Config(format!(
                "rs must be finite and >= 0, got {}",
                self.rate_rs
            )));
        }
        if self.trials == 0 && self.variants.contains(&Variant::MonteCarlo) {
            return Err(Error::Config("trials must be >= 1 when MC is requested".into()));
        }
        Ok(())
    }

    /// Variants that apply to `bits`, in request order without duplicates.
    pub fn resolved_variants(&self, bits: Option<u32>) -> Vec<Variant> {
        let mut out: Vec<Variant> = Vec::new();
        for v in &self.variants {
            let r = v.resolve(bits.is_none());
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub bits: Option<u32>,
    pub g0b_db: f64,
    pub variant: Variant,
    pub value: Option<f64>,
    pub stderr: Option<f64>,
    /// Set when the row could not be resolved cleanly.
    pub flag: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

pub const CSV_HEADER: &str = "n,bits,g0b_dB,variant,value,stderr";

impl SweepResult {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map_or_else(String::new, |x| format!("{x:e}"));
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.n,
                format_bits(r.bits),
                r.g0b_db,
                r.variant,
                opt(r.value),
                opt(r.stderr)
            )?;
        }
        out.flush()
    }

    pub fn flagged(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.flag.is_some())
    }
}

fn batch_seed(seed: u64, n: usize, bits: Option<u32>) -> u64 {
    // distinct, order-independent seed per (n, bits)
    let key = (n as u64) << 8 | bits.map_or(0xff, u64::from);
    seed ^ key.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn closed_row<T: Real>(metric: Metric, variant: Variant, cfg: &SystemConfig<T>, rate_rs: T) -> Result<f64> {
    let (sc, asymptotic) = match variant {
        Variant::Exact(sc) => (sc, false),
        Variant::Asymptotic(sc) => (sc, true),
        Variant::MonteCarlo => unreachable!("MC rows are not closed forms"),
    };
    let (leg, eve) = scenario_laws(cfg, sc)?;
    let v = match (metric, asymptotic) {
        (Metric::Sop, false) => sop(&leg, &eve, rate_rs)?.value(),
        (Metric::Sop, true) => sop_asymptotic(&leg, &eve, rate_rs)?,
        (Metric::Asc, false) => asc(&leg, &eve)?.value(),
        (Metric::Asc, true) => asc_asymptotic(&leg, &eve)?,
    };
    Ok(v.to_f64_lossy())
}

/// Evaluates every requested curve at every grid point.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let g0e = db_to_linear(spec.g0e_db);
    let grid = spec.g0b_db.points();

    let mut batches: HashMap<(usize, Option<u32>), TrialBatch> = HashMap::new();
    for &n in &spec.n_list {
        for &bits in &spec.bits_list {
            if spec.resolved_variants(bits).contains(&Variant::MonteCarlo) {
                let cfg = SystemConfig::reference(n, phase_model(bits), 1.0, g0e);
                let batch = simulate_batch(&cfg, batch_seed(spec.seed, n, bits), spec.trials)?;
                batches.insert((n, bits), batch);
            }
        }
    }

    let mut points = Vec::new();
    for &n in &spec.n_list {
        for &bits in &spec.bits_list {
            for &g in &grid {
                points.push((n, bits, g));
            }
        }
    }

    let rows: Vec<Vec<SweepRow>> = points
        .par_iter()
        .map(|&(n, bits, g0b_db)| {
            let g0b = db_to_linear(g0b_db);
            let cfg = SystemConfig::reference(n, phase_model(bits), g0b, g0e);
            let mut cfg = cfg;
            cfg.rate_rs = spec.rate_rs;
            spec.resolved_variants(bits)
                .into_iter()
                .map(|variant| {
                    let mut row = SweepRow {
                        n,
                        bits,
                        g0b_db,
                        variant,
                        value: None,
                        stderr: None,
                        flag: None,
                    };
                    if variant == Variant::MonteCarlo {
                        let batch = batches[&(n, bits)].at_snr(g0b, g0e);
                        match spec.metric {
                            Metric::Sop => match empirical_sop(&batch, spec.rate_rs) {
                                Ok(est) => {
                                    row.value = Some(est.value);
                                    row.stderr = Some(est.stderr);
                                    if spec.rate_rs > 0.0 && est.events < MC_EVENT_FLOOR {
                                        row.flag = Some(format!(
                                            "below MC floor: {} events in {} trials",
                                            est.events, est.trials
                                        ));
                                    }
                                }
                                Err(e) => row.flag = Some(e.to_string()),
                            },
                            Metric::Asc => {
                                let est = empirical_asc(&batch);
                                row.value = Some(est.value);
                                row.stderr = Some(est.stderr);
                            }
                        }
                    } else {
                        match closed_row(spec.metric, variant, &cfg, spec.rate_rs) {
                            Ok(v) => row.value = Some(v),
                            Err(e) => row.flag = Some(e.to_string()),
                        }
                    }
                    row
                })
                .collect()
        })
        .collect();

    let result = SweepResult {
        rows: rows.into_iter().flatten().collect(),
    };
    for r in result.flagged() {
        log::warn!(
            "n = {}, bits = {}, g0b = {} dB, {}: {}",
            r.n,
            format_bits(r.bits),
            r.g0b_db,
            r.variant,
            r.flag.as_deref().unwrap_or("")
        );
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(metric: Metric) -> SweepSpec {
        SweepSpec {
            metric,
            variants: vec![
                Variant::Exact(Scenario::BR),
                Variant::Exact(Scenario::NR),
                Variant::MonteCarlo,
            ],
            n_list: vec![4, 16],
            bits_list: vec![Some(2), None],
            g0b_db: DbGrid::new(-10.0, 0.0, 5.0).unwrap(),
            trials: 20_000,
            ..SweepSpec::default()
        }
    }

    #[test]
    fn parsing_round_trips() {
        for s in ["FR", "BR", "NR", "MC", "asymptotic-FR", "asymptotic-NR"] {
            assert_eq!(s.parse::<Variant>().unwrap().to_string(), s);
        }
        assert_eq!(
            "Asymptotic-br".parse::<Variant>().unwrap(),
            Variant::Asymptotic(Scenario::BR)
        );
        assert!("ZZ".parse::<Variant>().is_err());
        assert_eq!(parse_bits("inf").unwrap(), None);
        assert_eq!(parse_bits("3").unwrap(), Some(3));
        assert!(parse_bits("0").is_err());
        assert!(parse_bits("x").is_err());
        assert_eq!("sop".parse::<Metric>().unwrap(), Metric::Sop);
    }

    #[test]
    fn grids() {
        assert_eq!(
            DbGrid::new(-1.0, 1.0, 0.5).unwrap().points(),
            vec![-1.0, -0.5, 0.0, 0.5, 1.0]
        );
        assert_eq!(
            "0:0.3:0.1".parse::<DbGrid>().unwrap().points(),
            vec![0.0, 0.1, 0.2, 0.3]
        );
        assert_eq!("7".parse::<DbGrid>().unwrap().points(), vec![7.0]);
        assert!("0:1:0".parse::<DbGrid>().is_err());
        assert!("1:0:1".parse::<DbGrid>().is_err());
        assert!("1:2".parse::<DbGrid>().is_err());
    }

    #[test]
    fn variant_resolution() {
        let spec = SweepSpec {
            variants: vec![
                Variant::Exact(Scenario::FR),
                Variant::Exact(Scenario::BR),
                Variant::Asymptotic(Scenario::BR),
                Variant::MonteCarlo,
            ],
            ..SweepSpec::default()
        };
        assert_eq!(
            spec.resolved_variants(None),
            vec![
                Variant::Exact(Scenario::FR),
                Variant::Asymptotic(Scenario::FR),
                Variant::MonteCarlo
            ]
        );
        assert_eq!(
            spec.resolved_variants(Some(2)),
            vec![
                Variant::Exact(Scenario::BR),
                Variant::Asymptotic(Scenario::BR),
                Variant::MonteCarlo
            ]
        );
    }

    #[test]
    fn config_text_with_preset_override() {
        let text = "# comment\nn = 16, 64\npreset = fig2\nbits = inf\ng0b_dB = -5:5:5\ntrials=100 # inline\n";
        let spec = SweepSpec::from_config_text(text).unwrap();
        assert_eq!(spec.metric, Metric::Sop);
        assert_eq!(spec.n_list, vec![16, 64]);
        assert_eq!(spec.bits_list, vec![None]);
        assert_eq!(spec.trials, 100);
        assert!(SweepSpec::from_config_text("bogus = 1").is_err());
        assert!(SweepSpec::from_config_text("no equals sign").is_err());
    }

    #[test]
    fn one_row_per_point_and_variant_in_grid_order() {
        let spec = small(Metric::Sop);
        let res = run_sweep(&spec).unwrap();
        // bits=inf maps BR→FR, so three variants for each (n, bits)
        assert_eq!(res.rows.len(), 2 * 2 * 3 * 3);
        let keys: Vec<(usize, Option<u32>, f64)> = res.rows.iter().map(|r| (r.n, r.bits, r.g0b_db)).collect();
        assert_eq!(keys[0], (4, Some(2), -10.0));
        assert_eq!(keys[3], (4, Some(2), -5.0));
        assert_eq!(keys.last().copied(), Some((16, None, 0.0)));
        assert!(res
            .rows
            .iter()
            .filter(|r| r.variant == Variant::MonteCarlo)
            .all(|r| r.stderr.is_some()));
        assert!(res
            .rows
            .iter()
            .filter(|r| r.variant != Variant::MonteCarlo)
            .all(|r| r.stderr.is_none()));
    }

    #[test]
    fn csv_is_byte_stable() {
        let spec = small(Metric::Asc);
        let mut a = Vec::new();
        run_sweep(&spec).unwrap().write_csv(&mut a).unwrap();
        let mut b = Vec::new();
        run_sweep(&spec).unwrap().write_csv(&mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert_eq!(text.lines().next(), Some(CSV_HEADER));
        assert!(text.lines().nth(1).unwrap().starts_with("4,2,-10,"));
    }

    #[test]
    fn mc_floor_is_flagged() {
        let spec = SweepSpec {
            variants: vec![Variant::MonteCarlo],
            n_list: vec![16],
            g0b_db: DbGrid::new(20.0, 20.0, 1.0).unwrap(),
            trials: 2_000,
            ..SweepSpec::default()
        };
        let res = run_sweep(&spec).unwrap();
        assert_eq!(res.rows.len(), 1);
        assert!(res.rows[0].flag.as_deref().unwrap().contains("below MC floor"));
        assert!(res.rows[0].value.is_some());
    }

    #[test]
    fn asc_grows_with_n() {
        let spec = SweepSpec {
            metric: Metric::Asc,
            variants: vec![Variant::Exact(Scenario::BR)],
            n_list: vec![4, 16, 64, 256],
            g0b_db: DbGrid::new(0.0, 0.0, 1.0).unwrap(),
            ..SweepSpec::default()
        };
        let res = run_sweep(&spec).unwrap();
        let vals: Vec<f64> = res.rows.iter().map(|r| r.value.unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]), "{vals:?}");
    }

    #[test]
    fn single_reflector_mc_mean_snr() {
        let cfg = SystemConfig::reference(
            1,
            PhaseErrorModel::UniformQuantized { bits: 2 },
            db_to_linear(3.0),
            1.0,
        );
        let batch = simulate_batch(&cfg, 1, 100_000).unwrap();
        let est = crate::montecarlo::mean_estimate(batch.gamma_b());
        assert!((est.value - db_to_linear(3.0)).abs() < 4.0 * est.stderr);
    }

    #[test]
    fn invalid_specs() {
        let mut spec = SweepSpec::default();
        spec.variants.clear();
        assert!(run_sweep(&spec).is_err());
        let spec = SweepSpec {
            rate_rs: -1.0,
            ..SweepSpec::default()
        };
        assert!(spec.validate().is_err());
        let mut spec = SweepSpec::default();
        assert!(spec.set("n", "0").is_err());
        assert!(spec.set("bits", "inf,2").is_ok());
        assert_eq!(spec.bits_list, vec![None, Some(2)]);
    }
}
