//! Seeded Monte Carlo harness for random square-tiled surfaces.
//!
//! Trials are reproducible and worker-count independent: trial `t` draws
//! everything it needs from its own [`RngStream`] with stream id `t`, so a
//! run is a pure function of `(seed, n, model, trials)` no matter how the
//! trials are divided among threads. Records stream to a caller-provided
//! sink in trial order; aggregate statistics come back in an
//! [`ExperimentSummary`].

use std::collections::BTreeMap;
use std::io;
use std::time::Instant;

use thiserror::Error;

use crate::partition::{BoundedPartitionTable, Partition, PartitionError};
use crate::perm::{sample_conjugacy_class, sample_uniform, PermGroup};
use crate::rng::RngStream;
use crate::surface::{Holonomy, SquareTiledSurface, StratumSignature};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Trials are dispatched to workers in blocks of this many.
const BLOCK: u64 = 4096;

/// The stratum histogram keeps at most this many distinct keys; further new
/// keys are counted in `stratum_overflow` instead.
const MAX_STRATUM_KEYS: usize = 1_000_000;

/// Exact CSV header emitted and expected by this module.
pub const CSV_HEADER: &str =
    "trial,n,model,mu,connected,num_components,vertices,genus,stratum,holonomy,num_cylinders";

#[derive(Debug, Error)]
pub enum McError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("invalid experiment: {reason}")]
    InvalidConfig { reason: String },
    #[error("CSV line {line}: {reason}")]
    Csv { line: usize, reason: String },
    #[error("vertex count {vertices} has the wrong parity for {n} squares")]
    ParityMismatch { n: u32, vertices: u32 },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// How the gluing pair of each trial is drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    /// Both permutations uniform on `S_n`.
    Standard,
    /// Horizontal permutation uniform on the class of the given cycle type.
    HrFixed(Partition),
    /// The cycle type itself is redrawn each trial, uniformly among
    /// partitions of `n` with at most `max_parts` parts.
    HrRandom { max_parts: u32 },
}

/// Model discriminant as it appears in the CSV `model` column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Standard,
    HrFixed,
    HrRandom,
}

impl ModelKind {
    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Standard => "standard",
            ModelKind::HrFixed => "hr-fixed",
            ModelKind::HrRandom => "hr-random",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "standard" => Some(ModelKind::Standard),
            "hr-fixed" => Some(ModelKind::HrFixed),
            "hr-random" => Some(ModelKind::HrRandom),
            _ => None,
        }
    }
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Standard => ModelKind::Standard,
            ModelSpec::HrFixed(_) => ModelKind::HrFixed,
            ModelSpec::HrRandom { .. } => ModelKind::HrRandom,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n: u32,
    pub model: ModelSpec,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

/// One trial's observables, in CSV column order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub n: u32,
    pub model: ModelKind,
    /// Cycle type of the horizontal permutation for the HR models, `None`
    /// for the standard model.
    pub mu: Option<Partition>,
    pub connected: bool,
    pub num_components: u32,
    pub vertices: u32,
    pub genus: u32,
    /// Cone-point orders in dot notation, `-` if none.
    pub stratum: String,
    pub holonomy: Holonomy,
    pub num_cylinders: u32,
}

impl TrialRecord {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.trial,
            self.n,
            self.model.tag(),
            self.mu.as_ref().map_or_else(|| "-".to_string(), Partition::to_string),
            u8::from(self.connected),
            self.num_components,
            self.vertices,
            self.genus,
            self.stratum,
            self.holonomy.letter(),
            self.num_cylinders,
        )
    }
}

/// Parse a CSV document produced by [`run_experiment`] sinks (header line
/// included) back into records.
pub fn parse_csv(text: &str) -> Result<Vec<TrialRecord>, McError> {
    let bad = |line: usize, reason: &str| McError::Csv { line, reason: reason.to_string() };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, _)) => return Err(bad(1, "unexpected header")),
        None => return Err(bad(1, "empty document")),
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(bad(lineno, "expected 11 fields"));
        }
        let int = |s: &str, what: &str| {
            s.parse::<u64>().map_err(|_| McError::Csv {
                line: lineno,
                reason: format!("bad {what} value `{s}`"),
            })
        };
        let mu = if fields[3] == "-" {
            None
        } else {
            Some(fields[3].parse::<Partition>().map_err(|e| McError::Csv {
                line: lineno,
                reason: format!("bad mu: {e}"),
            })?)
        };
        let connected = match fields[4] {
            "0" => false,
            "1" => true,
            other => return Err(McError::Csv {
                line: lineno,
                reason: format!("bad connected flag `{other}`"),
            }),
        };
        let model = ModelKind::from_tag(fields[2])
            .ok_or_else(|| bad(lineno, "unknown model tag"))?;
        let holonomy = match fields[9] {
            "H" => Holonomy::Torus,
            "V" => Holonomy::VisibilityCertified,
            "U" => Holonomy::Undetermined,
            other => return Err(McError::Csv {
                line: lineno,
                reason: format!("bad holonomy letter `{other}`"),
            }),
        };
        records.push(TrialRecord {
            trial: int(fields[0], "trial")?,
            n: int(fields[1], "n")? as u32,
            model,
            mu,
            connected,
            num_components: int(fields[5], "num_components")? as u32,
            vertices: int(fields[6], "vertices")? as u32,
            genus: int(fields[7], "genus")? as u32,
            stratum: fields[8].to_string(),
            holonomy,
            num_cylinders: int(fields[10], "num_cylinders")? as u32,
        });
    }
    Ok(records)
}

/// Aggregate statistics of a finished run. Fractions and moments are `None`
/// when there were no trials (and the variance also needs at least two).
#[derive(Clone, Debug)]
pub struct ExperimentSummary {
    pub n: u32,
    pub model: ModelKind,
    pub mu: Option<Partition>,
    pub max_parts: Option<u32>,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub connected_fraction: Option<f64>,
    /// Binomial standard error `sqrt(p (1-p) / trials)`.
    pub connected_se: Option<f64>,
    pub genus_mean: Option<f64>,
    pub genus_mean_se: Option<f64>,
    pub genus_variance: Option<f64>,
    /// Normal-approximation standard error `s^2 sqrt(2 / (trials - 1))`.
    pub genus_variance_se: Option<f64>,
    pub genus_mean_reference: Option<f64>,
    pub genus_variance_reference: Option<f64>,
    pub vertex_histogram: BTreeMap<u32, u64>,
    pub stratum_histogram: BTreeMap<String, u64>,
    /// Trials whose stratum key was dropped because the histogram was full.
    pub stratum_overflow: u64,
    pub modal_stratum: Option<String>,
    /// True when another stratum matched the modal count.
    pub modal_tied: bool,
    pub holonomy_h_fraction: Option<f64>,
    pub holonomy_hv_fraction: Option<f64>,
    pub holonomy_u_fraction: Option<f64>,
    pub elapsed_seconds: f64,
}

/// Reference mean and variance of the genus of the `HrFixed((n))` model,
/// valid for `n >= 2`: the vertex count behaves like the cycle count of a
/// uniform permutation (`E = ln n + gamma`, `Var = ln n + gamma - pi^2/6`)
/// and genus is the linear image `(n - V)/2 + 1`.
pub fn genus_reference(n: u32) -> Option<(f64, f64)> {
    if n < 2 {
        return None;
    }
    let ln = f64::from(n).ln();
    let mean = f64::from(n) / 2.0 - ln / 2.0 - EULER_GAMMA / 2.0 + 1.0;
    let variance = ln / 4.0 + EULER_GAMMA / 4.0 - std::f64::consts::PI.powi(2) / 24.0;
    Some((mean, variance))
}

/// Local limit approximation for the vertex count of the `HrFixed((n))`
/// model: `Pr(V = l) ~ 2 phi(z) / sd` at `z = (l - m) / sd` with
/// `m = ln n + gamma` and `sd^2 = ln n + gamma - pi^2/6`. The factor 2
/// accounts for the parity constraint `l = n (mod 2)`; other parities are
/// rejected.
pub fn gaussian_vertex_profile(n: u32, vertices: u32) -> Result<f64, McError> {
    if vertices % 2 != n % 2 {
        return Err(McError::ParityMismatch { n, vertices });
    }
    let mean = f64::from(n).ln() + EULER_GAMMA;
    let variance = mean - std::f64::consts::PI.powi(2) / 6.0;
    let z = (f64::from(vertices) - mean) / variance.sqrt();
    let phi = (-z * z / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    Ok(2.0 * phi / variance.sqrt())
}

/// The modal stratum of a run, decoded back into orders and marked points
/// (`None` when no trials ran). Ties are broken toward the
/// lexicographically larger order sequence before the summary is built.
pub fn stratum_mode(summary: &ExperimentSummary) -> Option<StratumSignature> {
    let key = summary.modal_stratum.as_ref()?;
    let orders = parse_orders(key)?;
    let used: u32 = orders.iter().map(|o| o + 1).sum();
    Some(StratumSignature { orders, marked_points: summary.n - used })
}

fn parse_orders(key: &str) -> Option<Vec<u32>> {
    if key == "-" {
        return Some(Vec::new());
    }
    key.split('.').map(|s| s.parse().ok()).collect()
}

struct Accumulator {
    connected: u64,
    genus_sum: f64,
    genus_sq_sum: f64,
    vertex_histogram: BTreeMap<u32, u64>,
    stratum_histogram: BTreeMap<String, u64>,
    stratum_overflow: u64,
    holonomy: [u64; 3],
}

impl Accumulator {
    fn new() -> Self {
        Accumulator {
            connected: 0,
            genus_sum: 0.0,
            genus_sq_sum: 0.0,
            vertex_histogram: BTreeMap::new(),
            stratum_histogram: BTreeMap::new(),
            stratum_overflow: 0,
            holonomy: [0; 3],
        }
    }

    fn push(&mut self, record: &TrialRecord) {
        self.connected += u64::from(record.connected);
        let g = f64::from(record.genus);
        self.genus_sum += g;
        self.genus_sq_sum += g * g;
        *self.vertex_histogram.entry(record.vertices).or_insert(0) += 1;
        if let Some(count) = self.stratum_histogram.get_mut(&record.stratum) {
            *count += 1;
        } else if self.stratum_histogram.len() < MAX_STRATUM_KEYS {
            self.stratum_histogram.insert(record.stratum.clone(), 1);
        } else {
            self.stratum_overflow += 1;
        }
        let h = match record.holonomy {
            Holonomy::Torus => 0,
            Holonomy::VisibilityCertified => 1,
            Holonomy::Undetermined => 2,
        };
        self.holonomy[h] += 1;
    }

    fn finish(self, config: &ExperimentConfig, elapsed_seconds: f64) -> ExperimentSummary {
        let t = config.trials;
        let tf = t as f64;
        let fraction = |count: u64| (t > 0).then(|| count as f64 / tf);
        let connected_fraction = fraction(self.connected);
        let connected_se =
            connected_fraction.map(|p| (p * (1.0 - p) / tf).sqrt());
        let genus_mean = (t > 0).then(|| self.genus_sum / tf);
        let genus_variance = (t > 1)
            .then(|| (self.genus_sq_sum - self.genus_sum * self.genus_sum / tf) / (tf - 1.0));
        let genus_mean_se = genus_variance.map(|v| (v / tf).sqrt());
        let genus_variance_se = genus_variance.map(|v| v * (2.0 / (tf - 1.0)).sqrt());
        let reference = genus_reference(config.n);

        // modal stratum, ties resolved toward the larger order sequence
        let mut modal: Option<(&String, u64)> = None;
        let mut modal_tied = false;
        for (key, &count) in &self.stratum_histogram {
            match modal {
                None => modal = Some((key, count)),
                Some((best_key, best_count)) => {
                    if count > best_count {
                        modal = Some((key, count));
                        modal_tied = false;
                    } else if count == best_count {
                        modal_tied = true;
                        if parse_orders(key) > parse_orders(best_key) {
                            modal = Some((key, count));
                        }
                    }
                }
            }
        }

        let (mu, max_parts) = match &config.model {
            ModelSpec::Standard => (None, None),
            ModelSpec::HrFixed(mu) => (Some(mu.clone()), None),
            ModelSpec::HrRandom { max_parts } => (None, Some(*max_parts)),
        };
        ExperimentSummary {
            n: config.n,
            model: config.model.kind(),
            mu,
            max_parts,
            trials: t,
            seed: config.seed,
            workers: config.workers,
            connected_fraction,
            connected_se,
            genus_mean,
            genus_mean_se,
            genus_variance,
            genus_variance_se,
            genus_mean_reference: reference.map(|r| r.0),
            genus_variance_reference: reference.map(|r| r.1),
            vertex_histogram: self.vertex_histogram,
            modal_stratum: modal.map(|(key, _)| key.clone()),
            modal_tied,
            stratum_histogram: self.stratum_histogram,
            stratum_overflow: self.stratum_overflow,
            holonomy_h_fraction: fraction(self.holonomy[0]),
            holonomy_hv_fraction: fraction(self.holonomy[0] + self.holonomy[1]),
            holonomy_u_fraction: fraction(self.holonomy[2]),
            elapsed_seconds,
        }
    }
}

fn run_trial(
    trial: u64,
    config: &ExperimentConfig,
    table: Option<&BoundedPartitionTable>,
) -> TrialRecord {
    let mut rng = RngStream::new(config.seed, trial);
    let n = config.n;
    // draw order is part of the reproducibility contract: mu, sigma, tau
    let (mu, sigma) = match &config.model {
        ModelSpec::Standard => (None, sample_uniform(PermGroup::Symmetric, n, &mut rng)),
        ModelSpec::HrFixed(mu) => {
            (Some(mu.clone()), sample_conjugacy_class(mu, &mut rng))
        }
        ModelSpec::HrRandom { .. } => {
            let mu = table
                .expect("table prepared for hr-random")
                .sample(&mut rng)
                .expect("bounded partition table is nonempty");
            let sigma = sample_conjugacy_class(&mu, &mut rng);
            (Some(mu), sigma)
        }
    };
    let tau = sample_uniform(PermGroup::Symmetric, n, &mut rng);
    let report = SquareTiledSurface::new(sigma, tau)
        .expect("samplers produce equal degrees")
        .analyze();
    TrialRecord {
        trial,
        n,
        model: config.model.kind(),
        mu,
        connected: report.connected,
        num_components: report.num_components,
        vertices: report.vertex_count,
        genus: report.genus,
        stratum: report.stratum.orders_string(),
        holonomy: report.holonomy,
        num_cylinders: report.cylinders.len() as u32,
    }
}

/// Run the experiment, feeding every record to `sink` in trial order.
///
/// Results are a function of `(n, model, trials, seed)` only; `workers`
/// changes the wall-clock time, never the records.
pub fn run_experiment<F>(
    config: &ExperimentConfig,
    mut sink: F,
) -> Result<ExperimentSummary, McError>
where
    F: FnMut(&TrialRecord) -> io::Result<()>,
{
    if config.n == 0 {
        return Err(McError::InvalidConfig { reason: "n must be at least 1".into() });
    }
    if config.workers == 0 {
        return Err(McError::InvalidConfig { reason: "workers must be at least 1".into() });
    }
    match &config.model {
        ModelSpec::HrFixed(mu) if mu.n() != config.n => {
            return Err(McError::InvalidConfig {
                reason: format!("cycle type {mu} does not partition {}", config.n),
            });
        }
        ModelSpec::HrRandom { max_parts: 0 } => {
            return Err(McError::InvalidConfig {
                reason: "hr-random needs max_parts >= 1".into(),
            });
        }
        _ => {}
    }
    let table = match &config.model {
        ModelSpec::HrRandom { max_parts } => {
            Some(BoundedPartitionTable::new(config.n, *max_parts))
        }
        _ => None,
    };

    let start = Instant::now();
    let mut acc = Accumulator::new();
    let workers = config.workers;
    let mut next = 0u64;
    while next < config.trials {
        let block_end = (next + BLOCK).min(config.trials);
        let len = block_end - next;
        let chunk = len.div_ceil(workers as u64);
        let block: Vec<Vec<TrialRecord>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|w| {
                    let lo = next + w * chunk;
                    let hi = (lo + chunk).min(block_end);
                    let table = table.as_ref();
                    scope.spawn(move || {
                        (lo..hi.max(lo))
                            .map(|t| run_trial(t, config, table))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for record in block.iter().flatten() {
            sink(record)?;
            acc.push(record);
        }
        next = block_end;
    }
    Ok(acc.finish(config, start.elapsed().as_secs_f64()))
}

/// Serialize a summary as a JSON object. Statistical fields sit at the top
/// level; run metadata that legitimately varies between identical runs
/// (timing, thread count) is confined to a `meta` object.
pub fn summary_to_json(summary: &ExperimentSummary) -> serde_json::Value {
    let vertex_histogram: serde_json::Map<String, serde_json::Value> = summary
        .vertex_histogram
        .iter()
        .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
        .collect();
    serde_json::json!({
        "n": summary.n,
        "model": summary.model.tag(),
        "mu": summary.mu.as_ref().map(Partition::to_string),
        "max_parts": summary.max_parts,
        "trials": summary.trials,
        "seed": summary.seed,
        "connected_fraction": summary.connected_fraction,
        "connected_se": summary.connected_se,
        "genus_mean": summary.genus_mean,
        "genus_mean_se": summary.genus_mean_se,
        "genus_variance": summary.genus_variance,
        "genus_variance_se": summary.genus_variance_se,
        "genus_mean_reference": summary.genus_mean_reference,
        "genus_variance_reference": summary.genus_variance_reference,
        "vertex_histogram": vertex_histogram,
        "stratum_histogram": summary.stratum_histogram,
        "stratum_overflow": summary.stratum_overflow,
        "modal_stratum": summary.modal_stratum,
        "modal_tied": summary.modal_tied,
        "holonomy_h_fraction": summary.holonomy_h_fraction,
        "holonomy_hv_fraction": summary.holonomy_hv_fraction,
        "holonomy_u_fraction": summary.holonomy_u_fraction,
        "meta": {
            "workers": summary.workers,
            "elapsed_seconds": summary.elapsed_seconds,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect_csv(config: &ExperimentConfig) -> (String, ExperimentSummary) {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let summary = run_experiment(config, |record| {
            out.push_str(&record.to_csv_line());
            out.push('\n');
            Ok(())
        })
        .unwrap();
        (out, summary)
    }

    #[test]
    fn identical_runs_regardless_of_worker_count() {
        let mut config = ExperimentConfig {
            n: 30,
            model: ModelSpec::HrRandom { max_parts: 3 },
            trials: 2000,
            seed: 7,
            workers: 1,
        };
        let (csv1, sum1) = collect_csv(&config);
        config.workers = 4;
        let (csv4, sum4) = collect_csv(&config);
        assert_eq!(csv1, csv4);
        assert_eq!(sum1.vertex_histogram, sum4.vertex_histogram);
        assert_eq!(sum1.stratum_histogram, sum4.stratum_histogram);
        assert_eq!(sum1.genus_mean, sum4.genus_mean);
        assert_eq!(sum1.connected_fraction, sum4.connected_fraction);
    }

    #[test]
    fn csv_round_trip() {
        let config = ExperimentConfig {
            n: 9,
            model: ModelSpec::HrFixed("4.3.2".parse().unwrap()),
            trials: 50,
            seed: 11,
            workers: 2,
        };
        let mut records = Vec::new();
        let (csv, _) = {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            let summary = run_experiment(&config, |r| {
                records.push(r.clone());
                out.push_str(&r.to_csv_line());
                out.push('\n');
                Ok(())
            })
            .unwrap();
            (out, summary)
        };
        let parsed = parse_csv(&csv).unwrap();
        assert_eq!(parsed, records);
        assert_eq!(records.len(), 50);
        assert!(records.iter().enumerate().all(|(i, r)| r.trial == i as u64));
    }

    #[test]
    fn csv_parse_rejects_malformed_input() {
        assert!(matches!(parse_csv(""), Err(McError::Csv { line: 1, .. })));
        assert!(matches!(
            parse_csv("wrong,header\n"),
            Err(McError::Csv { line: 1, .. })
        ));
        let good_header = format!("{CSV_HEADER}\n");
        assert!(parse_csv(&good_header).unwrap().is_empty());
        let bad_row = format!("{CSV_HEADER}\n0,5,standard,-,2,1,3,2,2,H,1\n");
        assert!(matches!(parse_csv(&bad_row), Err(McError::Csv { line: 2, .. })));
        let short_row = format!("{CSV_HEADER}\n0,5,standard,-\n");
        assert!(matches!(parse_csv(&short_row), Err(McError::Csv { line: 2, .. })));
    }

    #[test]
    fn empty_run_has_no_statistics() {
        let config = ExperimentConfig {
            n: 5,
            model: ModelSpec::Standard,
            trials: 0,
            seed: 1,
            workers: 1,
        };
        let mut called = false;
        let summary = run_experiment(&config, |_| {
            called = true;
            Ok(())
        })
        .unwrap();
        assert!(!called);
        assert_eq!(summary.connected_fraction, None);
        assert_eq!(summary.genus_mean, None);
        assert_eq!(summary.genus_variance, None);
        assert_eq!(summary.modal_stratum, None);
        assert!(summary.vertex_histogram.is_empty());
        assert!(stratum_mode(&summary).is_none());
    }

    #[test]
    fn config_validation() {
        let base = ExperimentConfig {
            n: 6,
            model: ModelSpec::Standard,
            trials: 1,
            seed: 0,
            workers: 1,
        };
        let sink = |_: &TrialRecord| Ok(());
        let mut bad = base.clone();
        bad.n = 0;
        assert!(matches!(run_experiment(&bad, sink), Err(McError::InvalidConfig { .. })));
        let mut bad = base.clone();
        bad.workers = 0;
        assert!(matches!(run_experiment(&bad, sink), Err(McError::InvalidConfig { .. })));
        let mut bad = base.clone();
        bad.model = ModelSpec::HrFixed("4.1".parse().unwrap());
        assert!(matches!(run_experiment(&bad, sink), Err(McError::InvalidConfig { .. })));
        let mut bad = base;
        bad.model = ModelSpec::HrRandom { max_parts: 0 };
        assert!(matches!(run_experiment(&bad, sink), Err(McError::InvalidConfig { .. })));
    }

    #[test]
    fn genus_reference_values() {
        let (mean, variance) = genus_reference(1000).unwrap();
        assert!((mean - 497.257_514_5).abs() < 1e-6, "mean {mean}");
        assert!((variance - 1.460_009_2).abs() < 1e-6, "variance {variance}");
        assert!(genus_reference(1).is_none());
    }

    #[test]
    fn vertex_profile_is_a_density() {
        // summed over the right parity the local limit profile integrates
        // to 1 (Riemann sum of the Gaussian with step 2/sd)
        let n = 1000u32;
        let mut total = 0.0;
        for vertices in (2u32..=60).step_by(2) {
            total += gaussian_vertex_profile(n, vertices).unwrap();
        }
        assert!((total - 1.0).abs() < 0.01, "total {total}");
        assert!(matches!(
            gaussian_vertex_profile(1000, 7),
            Err(McError::ParityMismatch { .. })
        ));
    }

    #[test]
    fn records_satisfy_surface_identities() {
        let config = ExperimentConfig {
            n: 12,
            model: ModelSpec::HrRandom { max_parts: 3 },
            trials: 200,
            seed: 3,
            workers: 2,
        };
        let mut records = Vec::new();
        let summary = run_experiment(&config, |r| {
            records.push(r.clone());
            Ok(())
        })
        .unwrap();
        for r in &records {
            assert_eq!(r.vertices % 2, r.n % 2);
            assert_eq!(r.genus, (r.n - r.vertices) / 2 + 1);
            let mu = r.mu.as_ref().expect("hr-random records carry mu");
            assert_eq!(mu.n(), r.n);
            assert!(mu.num_parts() <= 3);
            assert!(r.num_cylinders >= 1);
            // stratum decodes consistently with the vertex count
            let orders = parse_orders(&r.stratum).unwrap();
            let used: u32 = orders.iter().map(|o| o + 1).sum();
            assert_eq!(orders.len() as u32 + (r.n - used), r.vertices);
        }
        let mode = stratum_mode(&summary).unwrap();
        let used: u32 = mode.orders.iter().map(|o| o + 1).sum();
        assert_eq!(used + mode.marked_points, summary.n);
    }

    #[test]
    fn full_cycle_horizontal_is_always_connected() {
        let config = ExperimentConfig {
            n: 9,
            model: ModelSpec::HrFixed(Partition::new(vec![9])),
            trials: 300,
            seed: 5,
            workers: 3,
        };
        let summary = run_experiment(&config, |_| Ok(())).unwrap();
        assert_eq!(summary.connected_fraction, Some(1.0));
        assert_eq!(summary.connected_se, Some(0.0));
        let (mean_ref, var_ref) = genus_reference(9).unwrap();
        assert_eq!(summary.genus_mean_reference, Some(mean_ref));
        assert_eq!(summary.genus_variance_reference, Some(var_ref));
    }

    #[test]
    fn summary_json_layout() {
        let config = ExperimentConfig {
            n: 8,
            model: ModelSpec::Standard,
            trials: 40,
            seed: 2,
            workers: 1,
        };
        let summary = run_experiment(&config, |_| Ok(())).unwrap();
        let json = summary_to_json(&summary);
        assert_eq!(json["n"], 8);
        assert_eq!(json["model"], "standard");
        assert!(json["mu"].is_null());
        assert_eq!(json["trials"], 40);
        assert!(json["connected_fraction"].is_number());
        assert!(json["meta"]["elapsed_seconds"].is_number());
        assert!(json["meta"]["workers"].is_number());
        // timing never leaks into the stable top level
        assert!(json.get("elapsed_seconds").is_none());
    }

    #[test]
    fn modal_tie_detection() {
        // craft a summary through the accumulator by running two trials
        // known to produce distinct strata is fragile; instead check the
        // tie-break ordering helper directly
        assert!(parse_orders("2.1") > parse_orders("1.1.1"));
        assert!(parse_orders("-").unwrap().is_empty());
        assert_eq!(parse_orders("3.2.2"), Some(vec![3, 2, 2]));
        assert_eq!(parse_orders("x"), None);
    }
}
