//! Reproducible experiment campaigns: key generation with filtering, cycle
//! statistics, decoding-failure-rate estimation, dataset ingestion, and the
//! Welch two-sample test used to compare key populations.
//!
//! # Determinism
//!
//! Every campaign is a pure function of its [`CampaignSpec`]. Randomness
//! derives from the 64-bit `master_seed` through the SplitMix64 finalizer
//! (`mix64`): candidate key `i` uses [`key_seed`]`(master, i)` and decoding
//! trial `j` of accepted key `k` uses [`trial_seed`]`(master, k, j)`. Each
//! derived seed feeds a fresh ChaCha12 generator, so results never depend on
//! execution order and a rerun with the same spec is byte-identical.
//!
//! # Key file format
//!
//! One JSON object per line:
//! `{"r": 587, "d": 15, "h0": [..sorted..], "h1": [..sorted..]}` with
//! optional `"seed"`, `"accepted"`, `"filter"` fields. Readers reject
//! unsorted or duplicate supports. A hex variant is accepted on input: `h0`
//! and `h1` may instead be hex strings (optionally `0x`-prefixed) encoding
//! the coefficient bitmap as an integer, bit `e` holding the coefficient of
//! `x^e`.

use crate::cycles::{count_cross, count_total_bike, count_within, mci_cross};
use crate::decoder::{bgf_decode, syndrome, DecodeOutcome, DecoderConfig, ErrorVector};
use crate::errors::{Error, Result};
use crate::gf2ring::SparsePoly;
use crate::keys::{
    filter_key, generate_key, sample_support, BikeParams, FilterConfig, FilterMode, QcKey,
};
use crate::spectrum::compute_spectrum;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use std::io::{BufRead, Write};
use std::path::Path;

/// Which analyses a campaign performs on its accepted keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tasks {
    /// Record per-key maximum multiplicities and cross intersection.
    pub spectrum: bool,
    /// Aggregate 4-cycle statistics.
    pub cycles: bool,
    /// Run decoding trials (via [`dfr_estimate`]).
    pub dfr: bool,
}

impl Default for Tasks {
    fn default() -> Self {
        Tasks { spectrum: false, cycles: true, dfr: false }
    }
}

/// Full description of a campaign.
#[derive(Debug, Clone)]
pub struct CampaignSpec {
    pub params: BikeParams,
    /// Number of accepted keys to produce.
    pub n_keys: usize,
    /// Optional weak-key filter; rejected candidates are resampled.
    pub filter: Option<FilterConfig>,
    pub master_seed: u64,
    pub tasks: Tasks,
    /// Decoding trials per accepted key (dfr task).
    pub dfr_trials_per_key: usize,
}

/// SplitMix64 finalizer: the documented bit-mixing step behind all derived
/// seeds.
fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

const KEY_STREAM: u64 = 0x9E37_79B9_7F4A_7C15;
const TRIAL_STREAM: u64 = 0xD1B5_4A32_D192_ED03;

/// Seed of candidate key `candidate_index` (counting every draw, including
/// filtered-out ones): `mix64(master ⊕ KEY_STREAM ⊕ mix64(candidate_index))`.
pub fn key_seed(master_seed: u64, candidate_index: u64) -> u64 {
    mix64(master_seed ^ KEY_STREAM ^ mix64(candidate_index))
}

/// Seed of decoding trial `trial_index` against accepted key `key_index`:
/// `mix64(mix64(master ⊕ TRIAL_STREAM ⊕ mix64(key_index)) ⊕ mix64(trial_index))`.
pub fn trial_seed(master_seed: u64, key_index: u64, trial_index: u64) -> u64 {
    mix64(mix64(master_seed ^ TRIAL_STREAM ^ mix64(key_index)) ^ mix64(trial_index))
}

/// One line of the key file format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyRecord {
    pub r: usize,
    pub d: usize,
    pub h0: Vec<usize>,
    pub h1: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accepted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
}

impl KeyRecord {
    /// Snapshot of a key, with optional provenance fields.
    pub fn from_key(key: &QcKey, seed: Option<u64>, accepted: Option<bool>, filter: Option<String>) -> Self {
        KeyRecord {
            r: key.params().r,
            d: key.params().d,
            h0: key.h0().support().to_vec(),
            h1: key.h1().support().to_vec(),
            seed,
            accepted,
            filter,
        }
    }

    /// One serialized line (no trailing newline).
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("key records serialize")
    }
}

/// Aggregated 4-cycle statistics over a set of keys. Within-circulant
/// numbers pool both circulants of every key (`2n` samples); cross and total
/// numbers are per key.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleStats {
    pub n_keys: usize,
    pub within_avg: f64,
    pub within_min: u64,
    pub within_max: u64,
    pub cross_avg: f64,
    pub cross_min: u64,
    pub cross_max: u64,
    pub total_avg: f64,
    pub total_min: u64,
    pub total_max: u64,
}

/// Computes pooled cycle statistics; `None` for an empty slice.
pub fn cycle_stats(keys: &[QcKey]) -> Option<CycleStats> {
    if keys.is_empty() {
        return None;
    }
    let mut within = Vec::with_capacity(2 * keys.len());
    let mut cross = Vec::with_capacity(keys.len());
    let mut total = Vec::with_capacity(keys.len());
    for key in keys {
        within.push(count_within(key.h0()));
        within.push(count_within(key.h1()));
        let c = count_cross(key.h0(), key.h1()).expect("key moduli agree");
        cross.push(c);
        total.push(within[within.len() - 2] + within[within.len() - 1] + c);
    }
    let avg = |v: &[u64]| v.iter().sum::<u64>() as f64 / v.len() as f64;
    Some(CycleStats {
        n_keys: keys.len(),
        within_avg: avg(&within),
        within_min: *within.iter().min().unwrap(),
        within_max: *within.iter().max().unwrap(),
        cross_avg: avg(&cross),
        cross_min: *cross.iter().min().unwrap(),
        cross_max: *cross.iter().max().unwrap(),
        total_avg: avg(&total),
        total_min: *total.iter().min().unwrap(),
        total_max: *total.iter().max().unwrap(),
    })
}

/// Per-key spectrum summary recorded when the spectrum task is enabled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumSummary {
    pub max_mu_h0: usize,
    pub max_mu_h1: usize,
    pub mci_cross: usize,
}

/// Output of [`run_campaign`].
#[derive(Debug, Clone)]
pub struct CampaignResult {
    /// One record per accepted key, in generation order.
    pub records: Vec<KeyRecord>,
    /// The accepted keys themselves.
    pub keys: Vec<QcKey>,
    /// Cycle statistics (when the cycles task is on).
    pub stats: Option<CycleStats>,
    /// Spectrum summaries (when the spectrum task is on).
    pub spectrum_summary: Option<Vec<SpectrumSummary>>,
    /// Total candidates drawn, including rejected ones.
    pub candidates_drawn: u64,
    /// Candidates rejected by the filter.
    pub rejected: u64,
}

impl CampaignResult {
    /// The full record file as a string, one JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for record in &self.records {
            out.push_str(&record.to_json_line());
            out.push('\n');
        }
        out
    }

    /// Streams the record file to a writer.
    pub fn write_jsonl<W: Write>(&self, mut w: W, path_for_errors: &str) -> Result<()> {
        w.write_all(self.to_jsonl().as_bytes())
            .map_err(|e| Error::io(path_for_errors, e))
    }
}

/// Compact one-line summary of a filter, stored in record files.
pub fn describe_filter(cfg: &FilterConfig) -> String {
    let mode = match cfg.mode {
        FilterMode::PerMultiplicity => "per",
        FilterMode::Cumulative => "cum",
    };
    format!("mode={mode} s={} w={:?}", cfg.threshold, cfg.weights)
}

/// Candidates tried per requested key before concluding the filter accepts
/// almost nothing.
const MAX_ATTEMPTS_PER_KEY: u64 = 10_000;

/// Generates `n_keys` accepted keys and the requested analyses.
///
/// Candidate `i` (for `i = 0, 1, 2, …`, counting rejected candidates too) is
/// `generate_key(params, key_seed(master_seed, i))`; the filter, when
/// present, decides acceptance. Identical specs produce identical results,
/// byte for byte.
pub fn run_campaign(spec: &CampaignSpec) -> Result<CampaignResult> {
    if spec.n_keys < 1 {
        return Err(Error::ParameterError("n_keys must be at least 1".into()));
    }
    let filter_desc = spec.filter.as_ref().map(describe_filter);
    let attempt_cap = spec.n_keys as u64 * MAX_ATTEMPTS_PER_KEY;
    let mut records = Vec::with_capacity(spec.n_keys);
    let mut keys = Vec::with_capacity(spec.n_keys);
    let mut candidate = 0u64;
    let mut rejected = 0u64;
    while keys.len() < spec.n_keys {
        if candidate >= attempt_cap {
            return Err(Error::ParameterError(format!(
                "filter accepted {} of {candidate} candidates; giving up",
                keys.len()
            )));
        }
        let seed = key_seed(spec.master_seed, candidate);
        candidate += 1;
        let key = generate_key(&spec.params, seed)?;
        let accepted = match &spec.filter {
            Some(cfg) => filter_key(&key, cfg)?.is_accept(),
            None => true,
        };
        if !accepted {
            rejected += 1;
            continue;
        }
        records.push(KeyRecord::from_key(
            &key,
            Some(seed),
            spec.filter.as_ref().map(|_| true),
            filter_desc.clone(),
        ));
        keys.push(key);
    }
    let stats = if spec.tasks.cycles { cycle_stats(&keys) } else { None };
    let spectrum_summary = if spec.tasks.spectrum {
        Some(
            keys.iter()
                .map(|key| SpectrumSummary {
                    max_mu_h0: compute_spectrum(key.h0()).max_multiplicity(),
                    max_mu_h1: compute_spectrum(key.h1()).max_multiplicity(),
                    mci_cross: mci_cross(key.h0(), key.h1()).expect("key moduli agree"),
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(CampaignResult {
        records,
        keys,
        stats,
        spectrum_summary,
        candidates_drawn: candidate,
        rejected,
    })
}

/// One failed decoding trial, with everything needed to study the key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureRecord {
    pub key_index: usize,
    pub trial_index: usize,
    pub r: usize,
    pub d: usize,
    pub h0: Vec<usize>,
    pub h1: Vec<usize>,
    /// Support of the planted error pattern (length-2r indexing).
    pub error: Vec<usize>,
    /// True when the decoder returned a *different* pattern with the same
    /// syndrome instead of failing outright.
    pub miscorrection: bool,
}

/// Decoding-failure-rate estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DfrReport {
    pub r: usize,
    pub d: usize,
    pub t: usize,
    pub n_keys: usize,
    pub trials_per_key: usize,
    pub trials: u64,
    pub failures: u64,
    pub failure_rate: f64,
    pub failing: Vec<FailureRecord>,
}

/// Runs `dfr_trials_per_key` decoding trials against each accepted key of
/// the campaign. A trial plants a fresh uniform weight-`t` error, computes
/// its syndrome and decodes; it counts as a failure unless the decoder
/// returns exactly the planted pattern (a syndrome-consistent but different
/// pattern is recorded as a miscorrection).
pub fn dfr_estimate(spec: &CampaignSpec, decoder_cfg: &DecoderConfig) -> Result<DfrReport> {
    let campaign = run_campaign(spec)?;
    let params = &spec.params;
    let two_r = 2 * params.r;
    let mut failures = 0u64;
    let mut failing = Vec::new();
    for (key_index, key) in campaign.keys.iter().enumerate() {
        for trial_index in 0..spec.dfr_trials_per_key {
            let seed = trial_seed(spec.master_seed, key_index as u64, trial_index as u64);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let e = ErrorVector::new(two_r, sample_support(&mut rng, two_r, params.t))
                .expect("sampled support is sorted and in range");
            let s = syndrome(key, &e)?;
            let outcome = bgf_decode(key, &s, decoder_cfg)?;
            let (failed, miscorrection) = match &outcome {
                DecodeOutcome::Success(recovered) if *recovered == e => (false, false),
                DecodeOutcome::Success(_) => (true, true),
                DecodeOutcome::Failure => (true, false),
            };
            if failed {
                failures += 1;
                failing.push(FailureRecord {
                    key_index,
                    trial_index,
                    r: params.r,
                    d: params.d,
                    h0: key.h0().support().to_vec(),
                    h1: key.h1().support().to_vec(),
                    error: e.support().to_vec(),
                    miscorrection,
                });
            }
        }
    }
    let trials = (campaign.keys.len() * spec.dfr_trials_per_key) as u64;
    Ok(DfrReport {
        r: params.r,
        d: params.d,
        t: params.t,
        n_keys: campaign.keys.len(),
        trials_per_key: spec.dfr_trials_per_key,
        trials,
        failures,
        failure_rate: if trials == 0 { 0.0 } else { failures as f64 / trials as f64 },
        failing,
    })
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    r: usize,
    d: usize,
    h0: serde_json::Value,
    h1: serde_json::Value,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    #[allow(dead_code)]
    accepted: Option<bool>,
    #[serde(default)]
    #[allow(dead_code)]
    filter: Option<String>,
}

/// Decodes a support field: either a sorted array of indices or a hex
/// bitmap string.
fn support_from_value(value: &serde_json::Value, r: usize, line: usize, name: &str) -> Result<Vec<usize>> {
    match value {
        serde_json::Value::Array(items) => {
            let mut support = Vec::with_capacity(items.len());
            for item in items {
                let idx = item.as_u64().ok_or_else(|| Error::ParseError {
                    line,
                    message: format!("{name} entries must be nonnegative integers"),
                })? as usize;
                support.push(idx);
            }
            for (pos, &e) in support.iter().enumerate() {
                if e >= r {
                    return Err(Error::InvariantViolation {
                        line,
                        message: format!("{name} index {e} out of range for r={r}"),
                    });
                }
                if pos > 0 && support[pos - 1] >= e {
                    return Err(Error::InvariantViolation {
                        line,
                        message: format!("{name} support must be sorted and duplicate-free"),
                    });
                }
            }
            Ok(support)
        }
        serde_json::Value::String(hex) => {
            let digits = hex.strip_prefix("0x").or_else(|| hex.strip_prefix("0X")).unwrap_or(hex);
            if digits.is_empty() {
                return Err(Error::ParseError { line, message: format!("{name} hex string is empty") });
            }
            let mut support = Vec::new();
            // Hex digits read least-significant last: digit at offset p from
            // the end covers bits 4p..4p+3.
            for (p, ch) in digits.chars().rev().enumerate() {
                let nibble = ch.to_digit(16).ok_or_else(|| Error::ParseError {
                    line,
                    message: format!("{name} has non-hex digit {ch:?}"),
                })?;
                for bit in 0..4 {
                    if nibble >> bit & 1 == 1 {
                        let e = 4 * p + bit;
                        if e >= r {
                            return Err(Error::InvariantViolation {
                                line,
                                message: format!("{name} hex bit {e} out of range for r={r}"),
                            });
                        }
                        support.push(e);
                    }
                }
            }
            Ok(support)
        }
        _ => Err(Error::ParseError {
            line,
            message: format!("{name} must be an index array or a hex string"),
        }),
    }
}

/// One validated key together with where it came from.
#[derive(Debug, Clone)]
pub struct IngestedKey {
    /// 1-based line number in the source file.
    pub line: usize,
    /// Generation seed, when the record carried one.
    pub seed: Option<u64>,
    pub key: QcKey,
}

/// Result of loading a key file.
#[derive(Debug)]
pub struct Ingest {
    pub entries: Vec<IngestedKey>,
    /// Human-readable notes about lines that lax mode repaired.
    pub warnings: Vec<String>,
}

impl Ingest {
    /// Drops provenance and keeps the keys, in file order.
    pub fn into_keys(self) -> Vec<QcKey> {
        self.entries.into_iter().map(|e| e.key).collect()
    }
}

/// Loads and validates a key file (array or hex support variants, blank
/// lines skipped).
///
/// In strict mode any inconsistency aborts with its line number. Lax mode
/// tolerates exactly one defect — a declared `d` disagreeing with the actual
/// support weights while the two weights still match — by adopting the
/// actual weight and recording a warning. Unsorted or duplicate supports
/// are rejected in both modes.
pub fn ingest_keys(path: impl AsRef<Path>, lax: bool) -> Result<Ingest> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(&display, e))?;
    let reader = std::io::BufReader::new(file);
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let text = line.map_err(|e| Error::io(&display, e))?;
        if text.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = serde_json::from_str(&text).map_err(|e| Error::ParseError {
            line: line_no,
            message: e.to_string(),
        })?;
        let h0 = support_from_value(&raw.h0, raw.r, line_no, "h0")?;
        let h1 = support_from_value(&raw.h1, raw.r, line_no, "h1")?;
        let mut d = raw.d;
        if h0.len() != raw.d || h1.len() != raw.d {
            if lax && h0.len() == h1.len() {
                warnings.push(format!(
                    "line {line_no}: declared d={} but supports have weight {}; using the actual weight",
                    raw.d,
                    h0.len()
                ));
                d = h0.len();
            } else {
                return Err(Error::InvariantViolation {
                    line: line_no,
                    message: format!(
                        "declared d={} but weights are {} and {}",
                        raw.d,
                        h0.len(),
                        h1.len()
                    ),
                });
            }
        }
        let build = || -> Result<QcKey> {
            let params = BikeParams::new(raw.r, d, 1)?;
            let h0 = SparsePoly::new(raw.r, h0.clone())?;
            let h1 = SparsePoly::new(raw.r, h1.clone())?;
            QcKey::new(params, h0, h1)
        };
        let key = build().map_err(|e| Error::InvariantViolation {
            line: line_no,
            message: e.to_string(),
        })?;
        entries.push(IngestedKey { line: line_no, seed: raw.seed, key });
    }
    Ok(Ingest { entries, warnings })
}

/// Two-sided Welch two-sample t-test.
///
/// Returns the p-value for the difference in means under unequal variances,
/// with Welch–Satterthwaite degrees of freedom:
///
/// `t = (ā - b̄) / √(s²_a/n_a + s²_b/n_b)`,
/// `ν = (s²_a/n_a + s²_b/n_b)² / ((s²_a/n_a)²/(n_a-1) + (s²_b/n_b)²/(n_b-1))`,
/// `p = 2·(1 - F_ν(|t|))`.
///
/// Identical samples give `p = 1`; two constant (zero-variance) samples are
/// rejected as [`Error::DegenerateSample`].
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::DegenerateSample(
            "both samples need at least two observations".into(),
        ));
    }
    if a == b {
        return Ok(1.0);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let var = |v: &[f64], m: f64| v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64;
    let (ma, mb) = (mean(a), mean(b));
    let (va, vb) = (var(a, ma), var(b, mb));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let sea = va / na;
    let seb = vb / nb;
    let se2 = sea + seb;
    if se2 == 0.0 {
        return Err(Error::DegenerateSample(
            "zero variance in both samples".into(),
        ));
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (sea * sea / (na - 1.0) + seb * seb / (nb - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df)
        .map_err(|e| Error::DegenerateSample(format!("t distribution: {e}")))?;
    Ok((2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0))
}

/// Which per-key statistic feeds a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatColumn {
    /// Within-circulant counts, two samples per key.
    Within,
    /// Cross-block count, one sample per key.
    Cross,
    /// Total count, one sample per key.
    Total,
}

impl std::str::FromStr for StatColumn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "within" => Ok(StatColumn::Within),
            "cross" => Ok(StatColumn::Cross),
            "total" => Ok(StatColumn::Total),
            other => Err(Error::ConfigError(format!(
                "unknown column {other:?}; expected within, cross or total"
            ))),
        }
    }
}

/// Extracts the named cycle-count column from a key set as a sample.
pub fn column_samples(keys: &[QcKey], column: StatColumn) -> Vec<f64> {
    let mut out = Vec::new();
    for key in keys {
        match column {
            StatColumn::Within => {
                out.push(count_within(key.h0()) as f64);
                out.push(count_within(key.h1()) as f64);
            }
            StatColumn::Cross => {
                out.push(count_cross(key.h0(), key.h1()).expect("key moduli agree") as f64);
            }
            StatColumn::Total => {
                out.push(count_total_bike(key.h0(), key.h1()).expect("key moduli agree") as f64);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_deterministic_and_distinct() {
        assert_eq!(key_seed(1, 0), key_seed(1, 0));
        assert_ne!(key_seed(1, 0), key_seed(1, 1));
        assert_ne!(key_seed(1, 0), key_seed(2, 0));
        assert_ne!(key_seed(1, 0), trial_seed(1, 0, 0));
        assert_ne!(trial_seed(1, 0, 0), trial_seed(1, 0, 1));
        assert_ne!(trial_seed(1, 0, 1), trial_seed(1, 1, 0));
    }

    #[test]
    fn welch_known_value() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0, 3.0, 4.0, 5.0, 6.0];
        // t = -1, ν = 8 for these samples; two-sided p ≈ 0.3466.
        let p = welch_t_test(&a, &b).unwrap();
        assert!((p - 0.346_593_507_087_334).abs() < 1e-10, "p = {p}");
        assert_eq!(welch_t_test(&a, &a).unwrap(), 1.0);
        assert!((welch_t_test(&a, &b).unwrap() - welch_t_test(&b, &a).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn welch_degenerate_samples() {
        assert!(welch_t_test(&[1.0], &[1.0, 2.0]).is_err());
        assert!(welch_t_test(&[3.0, 3.0], &[4.0, 4.0]).is_err());
        // Identical constants short-circuit to p = 1 before the variance check.
        assert_eq!(welch_t_test(&[3.0, 3.0], &[3.0, 3.0]).unwrap(), 1.0);
    }

    #[test]
    fn small_campaign_is_reproducible() {
        let spec = CampaignSpec {
            params: BikeParams::new(61, 5, 3).unwrap(),
            n_keys: 8,
            filter: None,
            master_seed: 99,
            tasks: Tasks { spectrum: true, ..Tasks::default() },
            dfr_trials_per_key: 0,
        };
        let a = run_campaign(&spec).unwrap();
        let b = run_campaign(&spec).unwrap();
        assert_eq!(a.to_jsonl(), b.to_jsonl());
        assert_eq!(a.keys, b.keys);
        assert_eq!(a.candidates_drawn, 8);
        assert_eq!(a.rejected, 0);
        let stats = a.stats.expect("cycles task on");
        assert_eq!(stats.n_keys, 8);
        assert!(stats.within_min <= stats.within_avg.round() as u64);
        assert!(stats.within_avg <= stats.within_max as f64);
        assert_eq!(a.spectrum_summary.unwrap().len(), 8);
    }

    #[test]
    fn filtered_campaign_counts_rejections() {
        let spec = CampaignSpec {
            params: BikeParams::new(61, 5, 3).unwrap(),
            n_keys: 4,
            filter: Some(FilterConfig::t_equivalent(5, 3)),
            master_seed: 5,
            tasks: Tasks::default(),
            dfr_trials_per_key: 0,
        };
        let result = run_campaign(&spec).unwrap();
        assert_eq!(result.keys.len(), 4);
        assert_eq!(result.candidates_drawn, 4 + result.rejected);
        for record in &result.records {
            assert_eq!(record.accepted, Some(true));
            assert!(record.filter.as_deref().unwrap().starts_with("mode=per"));
            // The recorded seed regenerates the key exactly.
            let key = generate_key(&spec.params, record.seed.unwrap()).unwrap();
            assert_eq!(key.h0().support(), record.h0.as_slice());
        }
    }

    #[test]
    fn ingest_round_trip() {
        let spec = CampaignSpec {
            params: BikeParams::new(101, 5, 3).unwrap(),
            n_keys: 6,
            filter: None,
            master_seed: 12,
            tasks: Tasks::default(),
            dfr_trials_per_key: 0,
        };
        let result = run_campaign(&spec).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("keys.jsonl");
        std::fs::write(&path, result.to_jsonl()).unwrap();
        let loaded = ingest_keys(&path, false).unwrap();
        assert!(loaded.warnings.is_empty());
        assert_eq!(loaded.entries.len(), 6);
        for (entry, original) in loaded.entries.iter().zip(&result.keys) {
            assert_eq!(entry.key.h0(), original.h0());
            assert_eq!(entry.key.h1(), original.h1());
            assert!(entry.seed.is_some());
        }
        assert_eq!(loaded.entries[2].line, 3);
    }

    #[test]
    fn ingest_rejects_malformed_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");

        std::fs::write(&path, r#"{"r": 11, "d": 2, "h0": [3, 3], "h1": [0, 1]}"#).unwrap();
        assert!(matches!(
            ingest_keys(&path, false),
            Err(Error::InvariantViolation { line: 1, .. })
        ));
        // Duplicate and unsorted supports stay fatal even in lax mode.
        assert!(ingest_keys(&path, true).is_err());

        std::fs::write(&path, r#"{"r": 11, "d": 2, "h0": [5, 2], "h1": [0, 1]}"#).unwrap();
        assert!(matches!(
            ingest_keys(&path, false),
            Err(Error::InvariantViolation { line: 1, .. })
        ));
        assert!(ingest_keys(&path, true).is_err());

        std::fs::write(&path, "not json").unwrap();
        assert!(matches!(
            ingest_keys(&path, false),
            Err(Error::ParseError { line: 1, .. })
        ));

        std::fs::write(&path, r#"{"r": 11, "d": 3, "h0": [0, 1], "h1": [0, 1]}"#).unwrap();
        assert!(ingest_keys(&path, false).is_err());
        let lax = ingest_keys(&path, true).unwrap();
        assert_eq!(lax.entries.len(), 1);
        assert_eq!(lax.entries[0].key.params().d, 2);
        assert_eq!(lax.warnings.len(), 1);
    }

    #[test]
    fn ingest_hex_variant() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hex.jsonl");
        // 0x303 = bits 0, 1, 8, 9; the array form of h1 mixes the variants.
        std::fs::write(
            &path,
            r#"{"r": 11, "d": 4, "h0": "0x303", "h1": [0, 2, 3, 5]}"#,
        )
        .unwrap();
        let keys = ingest_keys(&path, false).unwrap().into_keys();
        assert_eq!(keys[0].h0().support(), &[0, 1, 8, 9]);
        assert_eq!(keys[0].h1().support(), &[0, 2, 3, 5]);

        std::fs::write(&path, r#"{"r": 11, "d": 1, "h0": "800", "h1": [0]}"#).unwrap();
        // Bit 11 is out of range for r = 11.
        assert!(matches!(
            ingest_keys(&path, false),
            Err(Error::InvariantViolation { line: 1, .. })
        ));
    }

    #[test]
    fn dfr_smoke_with_single_bit_errors() {
        let spec = CampaignSpec {
            params: BikeParams::new(101, 5, 1).unwrap(),
            n_keys: 5,
            filter: None,
            master_seed: 33,
            tasks: Tasks { cycles: false, ..Tasks::default() },
            dfr_trials_per_key: 20,
        };
        let report = dfr_estimate(&spec, &DecoderConfig::defaults(101, 5)).unwrap();
        assert_eq!(report.trials, 100);
        assert_eq!(report.failures, 0, "single-bit errors must decode");
        assert!(report.failing.is_empty());
    }

    #[test]
    fn dfr_zero_iterations_fails_everything() {
        let spec = CampaignSpec {
            params: BikeParams::new(101, 5, 3).unwrap(),
            n_keys: 3,
            filter: None,
            master_seed: 7,
            tasks: Tasks { cycles: false, ..Tasks::default() },
            dfr_trials_per_key: 10,
        };
        let mut cfg = DecoderConfig::defaults(101, 5);
        cfg.max_iterations = 0;
        let report = dfr_estimate(&spec, &cfg).unwrap();
        // A weight-3 error essentially never has a zero syndrome.
        assert_eq!(report.failures, report.trials);
        assert_eq!(report.failing.len(), report.trials as usize);
    }

    #[test]
    fn column_samples_shapes() {
        let spec = CampaignSpec {
            params: BikeParams::new(61, 5, 3).unwrap(),
            n_keys: 4,
            filter: None,
            master_seed: 2,
            tasks: Tasks::default(),
            dfr_trials_per_key: 0,
        };
        let result = run_campaign(&spec).unwrap();
        assert_eq!(column_samples(&result.keys, StatColumn::Within).len(), 8);
        assert_eq!(column_samples(&result.keys, StatColumn::Cross).len(), 4);
        let totals = column_samples(&result.keys, StatColumn::Total);
        assert_eq!(totals.len(), 4);
        let stats = result.stats.unwrap();
        let avg = totals.iter().sum::<f64>() / totals.len() as f64;
        assert!((avg - stats.total_avg).abs() < 1e-9);
    }
}
