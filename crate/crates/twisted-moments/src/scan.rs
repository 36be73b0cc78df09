//! Grid scans of twisted second moments over (level, twist-modulus) pairs.
//!
//! A scan walks every admissible pair (q, p) from the configured prime
//! lists, every selected primitive character χ mod p, and records the
//! natural and harmonic second moments of L(1/2, f×χ) over the weight-2
//! newform basis of level q — one CSV row per (q, p, χ) cell, with cell
//! failures isolated into an errors column rather than aborting the run.
//! Output is byte-deterministic for a fixed config regardless of worker
//! count: cells are enumerated in sorted order and merged by index.
//!
//! The pair window follows the subconvexity hypothesis p^ε ≤ q ≤ p^{2+ε}
//! read at a fixed desk-scale ε (see [`SCAN_WINDOW_EPSILON`]); the trend
//! diagnostic then rank-correlates the per-form moment ratio against
//! q + p on the central band q ≈ p, where an upward drift would contradict
//! the uniform bound the moment estimate asserts (see [`diagonal_trend`]
//! for why the statistic is aggregated per cell and normalized per form).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::characters::{primitive_characters, DirichletCharacter};
use crate::error::Error;
use crate::lfunctions::{afe_required_length, cell_moments, prepare_level, LevelData};
use crate::tolerances::{C_MAX_CAP, SCAN_C_MAX};
use crate::Result;

/// Desk-scale ε in the pair window p^ε ≤ q ≤ p^{2+ε}. The strict reading
/// q ≤ p² would reject (q, p) = (11, 3), the canonical single-cell
/// configuration; ε = 1/4 admits it (3^{2.25} ≈ 11.8) while keeping the
/// window shape of the theorem hypothesis.
pub const SCAN_WINDOW_EPSILON: f64 = 0.25;

/// Normal-distribution 95th percentile: one-sided significance threshold
/// for the trend z-statistic.
const TREND_Z_CRITICAL: f64 = 1.6449;

/// Environment variable overriding the configured worker count.
pub const WORKERS_ENV_VAR: &str = "TWISTED_MOMENTS_WORKERS";

/// Is (q, p) inside the desk-scale scan window?
pub fn in_scan_window(q: u64, p: u64) -> bool {
    let (qf, pf) = (q as f64, p as f64);
    q != p && pf.powf(SCAN_WINDOW_EPSILON) <= qf && qf <= pf.powf(2.0 + SCAN_WINDOW_EPSILON)
}

/// Which characters mod p a scan includes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CharacterSelection {
    /// Every primitive character mod p.
    #[default]
    All,
    /// Only the characters with these exponent indices (see
    /// [`DirichletCharacter::label`]).
    Indices(Vec<u64>),
}

fn default_k() -> u32 {
    2
}
fn default_multiplier() -> f64 {
    1.0
}
fn default_c_max() -> u64 {
    SCAN_C_MAX
}
fn default_tolerance() -> f64 {
    1e-6
}

/// One scan experiment, deserializable from a single JSON document so a run
/// is reproducible from one artifact. CLI flags may override single fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Levels to scan (primes; composites are rejected).
    pub q_list: Vec<u64>,
    /// Twist moduli to scan (primes).
    pub p_list: Vec<u64>,
    /// Weight of the forms; only 2 is computable on demand.
    #[serde(default = "default_k")]
    pub k: u32,
    /// Which primitive characters mod each p to include.
    #[serde(default)]
    pub characters: CharacterSelection,
    /// Stretch factor for the AFE truncation (≥ 1).
    #[serde(default = "default_multiplier")]
    pub afe_length_multiplier: f64,
    /// Geometric-side truncation for the harmonic-weight calibration.
    #[serde(default = "default_c_max")]
    pub c_max: u64,
    /// A cell whose dropped-tail estimate exceeds this is flagged in the
    /// errors column (its values are still recorded).
    #[serde(default = "default_tolerance")]
    pub tolerance_budget: f64,
    /// Worker threads; [`WORKERS_ENV_VAR`] overrides, default 1.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Default CSV output path; the CLI --out flag overrides it.
    #[serde(default)]
    pub output: Option<String>,
    /// Record wall-clock per cell. Off by default: timing breaks the
    /// byte-identical-output determinism contract.
    #[serde(default)]
    pub record_runtime: bool,
}

impl ScanConfig {
    /// Minimal config for one (q, p) grid over all primitive characters.
    pub fn new(q_list: Vec<u64>, p_list: Vec<u64>) -> Self {
        ScanConfig {
            q_list,
            p_list,
            k: default_k(),
            characters: CharacterSelection::default(),
            afe_length_multiplier: default_multiplier(),
            c_max: default_c_max(),
            tolerance_budget: default_tolerance(),
            workers: None,
            output: None,
            record_runtime: false,
        }
    }

    /// Parse a config from a JSON string.
    ///
    /// # Errors
    /// [`Error::Config`] on malformed JSON or an invalid field value.
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ScanConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("bad scan config JSON: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    /// Parse a config from a JSON file.
    ///
    /// # Errors
    /// [`Error::Io`] on read failure; otherwise as [`ScanConfig::from_json`].
    pub fn from_json_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Check every field invariant.
    ///
    /// # Errors
    /// [`Error::Config`] naming the offending field.
    pub fn validate(&self) -> Result<()> {
        if self.q_list.is_empty() || self.p_list.is_empty() {
            return Err(Error::Config("q_list and p_list must be nonempty".into()));
        }
        for &q in self.q_list.iter().chain(&self.p_list) {
            if !is_prime(q) {
                return Err(Error::Config(format!("scan lists must hold primes, got {q}")));
            }
        }
        if self.k != 2 {
            return Err(Error::Config(format!(
                "scans support weight 2 only (on-demand eigendata), got k = {}",
                self.k
            )));
        }
        if !(self.afe_length_multiplier >= 1.0) {
            return Err(Error::Config(format!(
                "afe_length_multiplier must be ≥ 1, got {}",
                self.afe_length_multiplier
            )));
        }
        if self.c_max == 0 || self.c_max > C_MAX_CAP {
            return Err(Error::Config(format!(
                "c_max must lie in [1, {C_MAX_CAP}], got {}",
                self.c_max
            )));
        }
        if !(self.tolerance_budget > 0.0) {
            return Err(Error::Config(format!(
                "tolerance_budget must be positive, got {}",
                self.tolerance_budget
            )));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// One scan cell: a (q, p, χ) triple with both moment weightings and the
/// extremal central value, plus diagnostics. Cells that failed carry their
/// error text in `errors` and zeros elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    /// Character label, `p:a` (modulus and exponent index).
    pub character: String,
    pub dim: usize,
    pub moment_natural: f64,
    pub moment_harmonic: f64,
    /// moment_natural / (q + p): the uniform-bound surrogate.
    pub moment_ratio: f64,
    pub max_central_sq: f64,
    /// max_f |L(1/2, f×χ)| / (√q + √p): the subconvexity surrogate.
    pub max_l_ratio: f64,
    /// 0 unless the config set `record_runtime`.
    pub runtime_ms: u64,
    /// Empty on success; otherwise the cell's failure or warning text.
    pub errors: String,
}

/// CSV column order — the stable external schema.
pub const CSV_COLUMNS: [&str; 12] = [
    "q",
    "p",
    "k",
    "character",
    "dim",
    "moment_natural",
    "moment_harmonic",
    "moment_ratio",
    "max_central_sq",
    "max_l_ratio",
    "runtime_ms",
    "errors",
];

impl ExperimentRecord {
    fn csv_row(&self) -> [String; 12] {
        [
            self.q.to_string(),
            self.p.to_string(),
            self.k.to_string(),
            self.character.clone(),
            self.dim.to_string(),
            self.moment_natural.to_string(),
            self.moment_harmonic.to_string(),
            self.moment_ratio.to_string(),
            self.max_central_sq.to_string(),
            self.max_l_ratio.to_string(),
            self.runtime_ms.to_string(),
            self.errors.clone(),
        ]
    }
}

/// Whole-scan aggregates for the summary footer.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSummary {
    pub cells: usize,
    /// Cells whose errors column is nonempty.
    pub failures: usize,
    /// Largest moment_natural / (q + p) over clean cells.
    pub max_moment_ratio: f64,
    /// Largest max_f |L| / (√q + √p) over clean cells.
    pub max_l_ratio: f64,
}

/// Rank-correlation trend diagnostic along the q ≈ p diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport {
    /// Number of clean diagonal-band (q, p) cells entering the test.
    pub n: usize,
    /// Spearman rank correlation of the per-form moment ratio (mean over
    /// characters of moment_ratio / dim) against q + p.
    pub rho: f64,
    /// Normal approximation z = ρ √(n − 1).
    pub z: f64,
    /// One-sided test at α = 0.05: is there a significant upward trend?
    pub significant_upward: bool,
}

/// A completed scan: sorted records plus the summary and trend diagnostics.
#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub records: Vec<ExperimentRecord>,
    pub summary: ScanSummary,
    pub trend: TrendReport,
}

/// Effective worker count: the environment override wins over the config
/// field, which wins over the default of 1.
///
/// # Errors
/// [`Error::Config`] when the override is not a positive integer.
pub fn resolve_worker_count(configured: Option<usize>, env_value: Option<&str>) -> Result<usize> {
    let n = match env_value {
        Some(text) => text.trim().parse::<usize>().map_err(|_| {
            Error::Config(format!("{WORKERS_ENV_VAR} must be a positive integer, got {text:?}"))
        })?,
        None => configured.unwrap_or(1),
    };
    if n == 0 {
        return Err(Error::Config(format!(
            "worker count must be ≥ 1 ({WORKERS_ENV_VAR} or config)"
        )));
    }
    Ok(n)
}

struct CellSpec {
    q: u64,
    p: u64,
    exponent: u64,
    label: String,
}

fn empty_record(spec: &CellSpec, k: u32, errors: String) -> ExperimentRecord {
    ExperimentRecord {
        q: spec.q,
        p: spec.p,
        k,
        character: spec.label.clone(),
        dim: 0,
        moment_natural: 0.0,
        moment_harmonic: 0.0,
        moment_ratio: 0.0,
        max_central_sq: 0.0,
        max_l_ratio: 0.0,
        runtime_ms: 0,
        errors,
    }
}

fn run_cell(
    spec: &CellSpec,
    level: &std::result::Result<LevelData, String>,
    config: &ScanConfig,
) -> ExperimentRecord {
    let start = config.record_runtime.then(Instant::now);
    let mut record = match level {
        Err(msg) => empty_record(spec, config.k, format!("level preparation failed: {msg}")),
        Ok(level) => {
            let cell = DirichletCharacter::new(spec.p, spec.exponent)
                .and_then(|chi| cell_moments(level, &chi));
            match cell {
                Err(e) => empty_record(spec, config.k, e.to_string()),
                Ok(cell) => {
                    let errors = if cell.max_error_estimate > config.tolerance_budget {
                        format!(
                            "tail estimate {:.3e} exceeds tolerance budget {:.3e}",
                            cell.max_error_estimate, config.tolerance_budget
                        )
                    } else {
                        String::new()
                    };
                    ExperimentRecord {
                        q: spec.q,
                        p: spec.p,
                        k: config.k,
                        character: spec.label.clone(),
                        dim: cell.dim,
                        moment_natural: cell.natural,
                        moment_harmonic: cell.harmonic,
                        moment_ratio: cell.natural / (spec.q + spec.p) as f64,
                        max_central_sq: cell.max_central_sq,
                        max_l_ratio: cell.max_central_sq.sqrt()
                            / ((spec.q as f64).sqrt() + (spec.p as f64).sqrt()),
                        runtime_ms: 0,
                        errors,
                    }
                }
            }
        }
    };
    if let Some(t0) = start {
        record.runtime_ms = t0.elapsed().as_millis() as u64;
    }
    record
}

/// Run a scan: prepare each level once, then evaluate every (q, p, χ) cell
/// on a worker pool, isolating per-cell failures into their records.
///
/// # Errors
/// [`Error::Config`] for invalid configuration, a bad worker override, or a
/// window/selection combination yielding no cells at all (per-cell failures
/// do not fail the run).
pub fn run_scan(config: &ScanConfig) -> Result<ScanOutcome> {
    config.validate()?;
    let workers = resolve_worker_count(
        config.workers,
        std::env::var(WORKERS_ENV_VAR).ok().as_deref(),
    )?;

    let mut q_sorted = config.q_list.clone();
    q_sorted.sort_unstable();
    q_sorted.dedup();
    let mut p_sorted = config.p_list.clone();
    p_sorted.sort_unstable();
    p_sorted.dedup();

    // Eigendata length each level must reach: the longest AFE over its
    // admissible twist moduli.
    let mut level_needs: BTreeMap<u64, u64> = BTreeMap::new();
    for &q in &q_sorted {
        for &p in &p_sorted {
            if !in_scan_window(q, p) {
                continue;
            }
            let need = afe_required_length(q, p, config.k, config.afe_length_multiplier)?;
            let slot = level_needs.entry(q).or_insert(0);
            *slot = (*slot).max(need);
        }
    }

    let levels: BTreeMap<u64, std::result::Result<LevelData, String>> = level_needs
        .iter()
        .map(|(&q, &need)| {
            let prepared = prepare_level(q, config.k, need.max(30), config.c_max)
                .map_err(|e| e.to_string());
            (q, prepared)
        })
        .collect();

    let mut cells: Vec<CellSpec> = Vec::new();
    for &q in &q_sorted {
        for &p in &p_sorted {
            if !in_scan_window(q, p) {
                continue;
            }
            let mut chars = primitive_characters(p)?;
            if let CharacterSelection::Indices(wanted) = &config.characters {
                chars.retain(|chi| wanted.contains(&chi.exponent()));
            }
            let mut specs: Vec<CellSpec> = chars
                .iter()
                .map(|chi| CellSpec {
                    q,
                    p,
                    exponent: chi.exponent(),
                    label: chi.label(),
                })
                .collect();
            specs.sort_by_key(|s| s.exponent);
            cells.extend(specs);
        }
    }
    if cells.is_empty() {
        return Err(Error::Config(
            "scan window and character selection admit no cells".into(),
        ));
    }

    let slots: Vec<Mutex<Option<ExperimentRecord>>> =
        cells.iter().map(|_| Mutex::new(None)).collect();
    let cursor = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers.min(cells.len()) {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= cells.len() {
                    break;
                }
                let spec = &cells[i];
                let record = run_cell(spec, &levels[&spec.q], config);
                *slots[i].lock().expect("no panics hold this lock") = Some(record);
            });
        }
    });
    let records: Vec<ExperimentRecord> = slots
        .into_iter()
        .map(|slot| slot.into_inner().expect("scope joined").expect("every cell ran"))
        .collect();

    let failures = records.iter().filter(|r| !r.errors.is_empty()).count();
    let clean = records.iter().filter(|r| r.errors.is_empty());
    let mut max_moment_ratio = 0.0f64;
    let mut max_l_ratio = 0.0f64;
    for r in clean {
        max_moment_ratio = max_moment_ratio.max(r.moment_ratio);
        max_l_ratio = max_l_ratio.max(r.max_l_ratio);
    }
    let trend = diagonal_trend(&records);
    Ok(ScanOutcome {
        summary: ScanSummary {
            cells: records.len(),
            failures,
            max_moment_ratio,
            max_l_ratio,
        },
        trend,
        records,
    })
}

/// Write the records in [`CSV_COLUMNS`] order followed by a `#`-prefixed
/// summary footer (cell counts, max ratios, trend line).
///
/// # Errors
/// [`Error::Io`] on write failure.
pub fn write_csv<W: Write>(outcome: &ScanOutcome, mut sink: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(CSV_COLUMNS)
        .and_then(|()| {
            outcome
                .records
                .iter()
                .try_for_each(|r| writer.write_record(r.csv_row()))
        })
        .map_err(|e| Error::Config(format!("CSV encoding failed: {e}")))?;
    let body = writer
        .into_inner()
        .map_err(|e| Error::Config(format!("CSV encoding failed: {e}")))?;
    sink.write_all(&body)?;
    let s = &outcome.summary;
    writeln!(sink, "# cells={} failures={}", s.cells, s.failures)?;
    writeln!(sink, "# max_moment_ratio={}", s.max_moment_ratio)?;
    writeln!(sink, "# max_l_ratio={}", s.max_l_ratio)?;
    let t = &outcome.trend;
    writeln!(
        sink,
        "# diagonal_trend n={} rho={} z={} significant_upward={}",
        t.n, t.rho, t.z, t.significant_upward
    )?;
    Ok(())
}

/// [`write_csv`] to a file path.
///
/// # Errors
/// As [`write_csv`].
pub fn write_csv_file(outcome: &ScanOutcome, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(outcome, std::io::BufWriter::new(file))
}

/// Average-rank (ties shared) ranking of a sample, 1-based.
fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite samples"));
    let mut out = vec![0.0f64; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            out[idx] = shared;
        }
        i = j + 1;
    }
    out
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

/// Spearman rank-correlation test for an upward trend of the per-form
/// moment ratio against the diagonal position q + p, restricted to clean
/// records with nonempty spectrum on the band 0.5 ≤ q/p ≤ 2.
///
/// Two normalizations keep the statistic honest at desk scale:
///
/// * **Cell aggregation.** Every character mod p of a pair (q, p) shares
///   the same diagonal coordinate q + p, so the characters of one cell are
///   not independent samples of the diagonal; feeding them to the normal
///   approximation individually would overstate n. Records are averaged
///   into one sample per (q, p) first.
/// * **Per-form normalization.** The natural moment is a sum over the
///   newform basis, so it scales with the exactly known dimension (the
///   genus of X₀(q)), which climbs a staircase over any desk-scale range
///   of q. The trend question is whether typical central values grow along
///   the diagonal, not whether larger levels carry larger families, so the
///   cell statistic is the mean over characters of moment_ratio / dim.
///   Boundedness of the raw moment_ratio is asserted separately via the
///   recorded-constant maxima in [`ScanSummary`].
///
/// Uses the normal approximation z = ρ √(n − 1), one-sided at α = 0.05;
/// fewer than four band cells never count as significant.
pub fn diagonal_trend(records: &[ExperimentRecord]) -> TrendReport {
    let mut cells: BTreeMap<(u64, u64), (f64, usize)> = BTreeMap::new();
    for r in records {
        if !r.errors.is_empty() || r.dim == 0 {
            continue;
        }
        let ratio = r.q as f64 / r.p as f64;
        if !(0.5..=2.0).contains(&ratio) {
            continue;
        }
        let entry = cells.entry((r.q, r.p)).or_insert((0.0, 0));
        entry.0 += r.moment_ratio / r.dim as f64;
        entry.1 += 1;
    }
    let samples: Vec<(f64, f64)> = cells
        .into_iter()
        .map(|((q, p), (sum, count))| ((q + p) as f64, sum / count as f64))
        .collect();
    let n = samples.len();
    if n < 4 {
        return TrendReport {
            n,
            rho: 0.0,
            z: 0.0,
            significant_upward: false,
        };
    }
    let x: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let rho = pearson(&ranks(&x), &ranks(&y));
    let z = rho * ((n - 1) as f64).sqrt();
    TrendReport {
        n,
        rho,
        z,
        significant_upward: z > TREND_Z_CRITICAL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// [TRIVIAL] Minimal JSON parses with defaults; field violations are
    /// configuration errors.
    #[test]
    fn config_parsing_and_validation() {
        let config = ScanConfig::from_json(r#"{"q_list": [11], "p_list": [3]}"#).expect("minimal");
        assert_eq!(config.k, 2);
        assert_eq!(config.characters, CharacterSelection::All);
        assert_eq!(config.c_max, SCAN_C_MAX);
        assert_eq!(config.afe_length_multiplier, 1.0);
        assert!(!config.record_runtime);

        let full = ScanConfig::from_json(
            r#"{
                "q_list": [11, 23],
                "p_list": [3, 5],
                "k": 2,
                "characters": {"indices": [1, 3]},
                "afe_length_multiplier": 1.5,
                "c_max": 4000,
                "tolerance_budget": 1e-5,
                "workers": 4,
                "output": "scan.csv",
                "record_runtime": true
            }"#,
        )
        .expect("full");
        assert_eq!(full.characters, CharacterSelection::Indices(vec![1, 3]));
        assert_eq!(full.workers, Some(4));

        for bad in [
            r#"{"q_list": [], "p_list": [3]}"#,
            r#"{"q_list": [12], "p_list": [3]}"#,
            r#"{"q_list": [11], "p_list": [3], "k": 4}"#,
            r#"{"q_list": [11], "p_list": [3], "afe_length_multiplier": 0.5}"#,
            r#"{"q_list": [11], "p_list": [3], "workers": 0}"#,
            r#"{"q_list": [11], "p_list": [3]"#,
        ] {
            match ScanConfig::from_json(bad) {
                Err(Error::Config(_)) => {}
                other => panic!("expected Config error for {bad}: {other:?}"),
            }
        }
    }

    /// [TRIVIAL] The window keeps q ≠ p pairs inside p^ε ≤ q ≤ p^{2+ε},
    /// admitting the canonical (11, 3) cell.
    #[test]
    fn window_admits_canonical_cell() {
        assert!(in_scan_window(11, 3));
        assert!(in_scan_window(3, 11));
        assert!(!in_scan_window(11, 11));
        assert!(!in_scan_window(13, 3), "13 > 3^2.25");
        assert!(!in_scan_window(2, 59), "2 < 59^0.25");
        assert!(in_scan_window(59, 53));
    }

    /// [TRIVIAL] The canonical single-cell config yields exactly one record
    /// (p = 3 has a single primitive character), with the documented
    /// columns populated.
    #[test]
    fn single_cell_scan() {
        let outcome = run_scan(&ScanConfig::new(vec![11], vec![3])).expect("scan runs");
        assert_eq!(outcome.records.len(), 1);
        let r = &outcome.records[0];
        assert_eq!((r.q, r.p, r.k, r.dim), (11, 3, 2, 1));
        assert_eq!(r.character, "3:1");
        assert!(r.errors.is_empty());
        assert!(r.moment_natural > 0.0);
        assert!(r.moment_harmonic > 0.0);
        assert!((r.moment_ratio - r.moment_natural / 14.0).abs() < 1e-15);
        assert!(
            (r.max_l_ratio - r.max_central_sq.sqrt() / (11f64.sqrt() + 3f64.sqrt())).abs() < 1e-15
        );
        assert_eq!(r.runtime_ms, 0);
        assert_eq!(outcome.summary.cells, 1);
        assert_eq!(outcome.summary.failures, 0);
        assert!(outcome.summary.max_moment_ratio > 0.0);
    }

    /// [TRIVIAL] Byte-identical CSV output for 1 worker vs 4 workers — the
    /// determinism contract.
    #[test]
    fn worker_count_does_not_change_output() {
        let mut config = ScanConfig::new(vec![11, 13], vec![3, 5]);
        config.workers = Some(1);
        let mut one = Vec::new();
        write_csv(&run_scan(&config).expect("scan"), &mut one).expect("write");
        config.workers = Some(4);
        let mut four = Vec::new();
        write_csv(&run_scan(&config).expect("scan"), &mut four).expect("write");
        assert!(!one.is_empty());
        assert_eq!(one, four, "CSV bytes differ between worker counts");
        let text = String::from_utf8(one).expect("utf8");
        assert!(text.starts_with("q,p,k,character,dim,"));
        assert!(text.contains("# cells="));
        // (11,3): 1 char; (11,5): 3 chars; (13,5): 3 chars (dim 0). (13,3)
        // is outside the window.
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 7);
    }

    /// [TRIVIAL] Genus-0 levels produce dim-0 rows with zero moments and no
    /// error, and dim matches the genus oracle on every row.
    #[test]
    fn genus_zero_rows_recorded() {
        let outcome = run_scan(&ScanConfig::new(vec![13], vec![5])).expect("scan");
        assert_eq!(outcome.records.len(), 3);
        for r in &outcome.records {
            assert_eq!(r.dim, 0);
            assert_eq!(r.moment_natural, 0.0);
            assert!(r.errors.is_empty());
        }
        assert_eq!(outcome.summary.max_moment_ratio, 0.0);
    }

    /// [TRIVIAL] An impossible tolerance budget flags every nonempty cell in
    /// the errors column without aborting the scan — per-cell isolation.
    #[test]
    fn per_cell_failure_isolation() {
        let mut config = ScanConfig::new(vec![11], vec![3]);
        config.tolerance_budget = 1e-300;
        let outcome = run_scan(&config).expect("scan still completes");
        assert_eq!(outcome.records.len(), 1);
        assert!(outcome.records[0].errors.contains("tolerance budget"));
        assert_eq!(outcome.summary.failures, 1);
        // Flagged cells keep their computed values but drop out of maxima.
        assert!(outcome.records[0].moment_natural > 0.0);
        assert_eq!(outcome.summary.max_moment_ratio, 0.0);
    }

    /// [TRIVIAL] Empty window ⇒ configuration error, not an empty file.
    #[test]
    fn empty_grid_is_an_error() {
        match run_scan(&ScanConfig::new(vec![13], vec![3])) {
            Err(Error::Config(msg)) => assert!(msg.contains("no cells")),
            other => panic!("expected Config error, got {other:?}"),
        }
    }

    /// [TRIVIAL] Worker resolution: env beats config beats default; bad env
    /// is a configuration error.
    #[test]
    fn worker_resolution_precedence() {
        assert_eq!(resolve_worker_count(None, None).unwrap(), 1);
        assert_eq!(resolve_worker_count(Some(3), None).unwrap(), 3);
        assert_eq!(resolve_worker_count(Some(3), Some("8")).unwrap(), 8);
        assert!(resolve_worker_count(Some(3), Some("zero")).is_err());
        assert!(resolve_worker_count(Some(3), Some("0")).is_err());
    }

    fn synthetic_record(q: u64, p: u64, ratio: f64) -> ExperimentRecord {
        ExperimentRecord {
            q,
            p,
            k: 2,
            character: format!("{p}:1"),
            dim: 1,
            moment_natural: ratio * (q + p) as f64,
            moment_harmonic: 0.0,
            moment_ratio: ratio,
            max_central_sq: 0.0,
            max_l_ratio: 0.0,
            runtime_ms: 0,
            errors: String::new(),
        }
    }

    /// [DERIVED] The trend statistic: a strictly increasing diagonal is
    /// flagged (ρ = 1, z = √(n−1) > 1.645 for n ≥ 4); a decreasing one and
    /// a tiny sample are not; off-band and failed cells are excluded.
    #[test]
    fn trend_statistic_behaviour() {
        let up: Vec<ExperimentRecord> = [(11u64, 7u64), (13, 11), (17, 13), (19, 17), (23, 19)]
            .iter()
            .enumerate()
            .map(|(i, &(q, p))| synthetic_record(q, p, 0.1 * (i + 1) as f64))
            .collect();
        let t = diagonal_trend(&up);
        assert_eq!(t.n, 5);
        assert!((t.rho - 1.0).abs() < 1e-12);
        assert!(t.significant_upward);

        let down: Vec<ExperimentRecord> = up
            .iter()
            .rev()
            .zip(&up)
            .map(|(src, dst)| synthetic_record(dst.q, dst.p, src.moment_ratio))
            .collect();
        assert!(!diagonal_trend(&down).significant_upward);

        let mut with_outliers = up.clone();
        // Far off the diagonal band and an errored cell: both ignored.
        with_outliers.push(synthetic_record(47, 3, 99.0));
        let mut failed = synthetic_record(29, 23, 99.0);
        failed.errors = "boom".into();
        with_outliers.push(failed);
        assert_eq!(diagonal_trend(&with_outliers).n, 5);

        assert!(!diagonal_trend(&up[..3]).significant_upward);
        let flat: Vec<ExperimentRecord> = up
            .iter()
            .map(|r| synthetic_record(r.q, r.p, 0.5))
            .collect();
        let t_flat = diagonal_trend(&flat);
        assert_eq!(t_flat.rho, 0.0);
    }

    /// [DERIVED] Trend aggregation: characters of one (q, p) pair collapse
    /// to a single cell sample (n counts cells, and the cell value is the
    /// character mean), and a drift carried entirely by the family size is
    /// normalized away (moment_ratio ∝ dim gives ρ = 0).
    #[test]
    fn trend_aggregates_cells_and_normalizes_dimension() {
        let mut records = Vec::new();
        for (i, &(q, p)) in [(11u64, 7u64), (13, 11), (17, 13), (19, 17)].iter().enumerate() {
            // Two characters per cell whose mean is the same flat 0.5…
            let mut a = synthetic_record(q, p, 0.4 + 0.05 * i as f64);
            a.character = format!("{p}:1");
            let mut b = synthetic_record(q, p, 0.6 - 0.05 * i as f64);
            b.character = format!("{p}:2");
            records.push(a);
            records.push(b);
        }
        let t = diagonal_trend(&records);
        assert_eq!(t.n, 4, "four cells, not eight records");
        assert!(t.rho.abs() < 1e-12, "character means are flat, got ρ = {}", t.rho);

        // …and a moment that only grows because dim grows is not a trend.
        let dims = [1usize, 2, 3, 5];
        let staircase: Vec<ExperimentRecord> = [(11u64, 7u64), (13, 11), (17, 13), (19, 17)]
            .iter()
            .zip(dims)
            .map(|(&(q, p), d)| {
                let mut r = synthetic_record(q, p, 0.3 * d as f64);
                r.dim = d;
                r
            })
            .collect();
        let t = diagonal_trend(&staircase);
        assert!(t.rho.abs() < 1e-12, "dim-proportional growth must cancel, got ρ = {}", t.rho);
        assert!(!t.significant_upward);
    }
}
