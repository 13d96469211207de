//! Command-line front end for the qcmdpc library: spectrum and cycle
//! reports, weak-key filtering, key generation, decoding-failure-rate
//! estimation, probability tables, and two-population comparisons.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use qcmdpc::cycles::{census_general, prob_max_below, GeneralQcMatrix};
use qcmdpc::decoder::{DecoderConfig, DecoderConfigOverrides};
use qcmdpc::harness::{
    column_samples, describe_filter, dfr_estimate, ingest_keys, run_campaign, welch_t_test,
    CampaignSpec, IngestedKey, KeyRecord, StatColumn, Tasks,
};
use qcmdpc::keys::{filter_key, BikeParams, FilterConfig, FilterMode, Verdict};
use qcmdpc::spectrum::{compute_spectrum, SpectrumReport};
use qcmdpc::tanner;
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "qcmdpc", version, about = "QC-MDPC key analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print distance-spectrum reports for the keys in a file.
    Spectrum {
        /// Key file, one JSON record per line.
        #[arg(long)]
        key: PathBuf,
        /// Report only the key at this 0-based position.
        #[arg(long)]
        index: Option<usize>,
        /// Tolerate a wrong declared weight (warn and use the actual one).
        #[arg(long)]
        lax: bool,
    },
    /// Print a 4-cycle census for each key, optionally cross-checked
    /// against the brute-force Tanner-graph oracle.
    Cycles {
        /// Key file, one JSON record per line.
        #[arg(long)]
        key: PathBuf,
        /// Recount on the expanded graph and exit nonzero on any mismatch.
        #[arg(long)]
        oracle: bool,
        /// Tolerate a wrong declared weight (warn and use the actual one).
        #[arg(long)]
        lax: bool,
    },
    /// Run the column-intersection filter over a key file.
    Filter {
        /// Block size every key must have.
        #[arg(long)]
        r: usize,
        /// Column weight every key must have.
        #[arg(long)]
        d: usize,
        /// Comma-separated weights w_0,w_1,...  indexed by multiplicity.
        #[arg(long)]
        weights: String,
        /// Rejection threshold s.
        #[arg(long)]
        threshold: u64,
        /// Score comparison mode.
        #[arg(long, value_name = "per|cum")]
        mode: FilterMode,
        /// Input key file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Where accepted keys are written.
        #[arg(long)]
        out: PathBuf,
        /// Tolerate a wrong declared weight (warn and use the actual one).
        #[arg(long)]
        lax: bool,
    },
    /// Generate keys deterministically, printing one record per line.
    Keygen {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
        /// Number of accepted keys to emit.
        #[arg(long)]
        count: usize,
        /// Master seed; identical invocations are byte-identical.
        #[arg(long)]
        seed: u64,
        /// Reject keys with any column intersection of T or more.
        #[arg(long)]
        filter_t: Option<usize>,
        /// Custom filter weights (comma-separated, indexed by multiplicity).
        #[arg(long)]
        filter_weights: Option<String>,
        /// Threshold for --filter-weights.
        #[arg(long)]
        filter_threshold: Option<u64>,
        /// Mode for --filter-weights.
        #[arg(long, value_name = "per|cum")]
        filter_mode: Option<FilterMode>,
    },
    /// Estimate the decoding failure rate over fresh keys and errors.
    Dfr {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
        /// Planted error weight.
        #[arg(long)]
        t: usize,
        /// Number of keys to generate.
        #[arg(long)]
        keys: usize,
        /// Decoding trials per key.
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// JSON file overriding decoder defaults field by field.
        #[arg(long)]
        decoder_cfg: Option<PathBuf>,
    },
    /// Print the probability that a random weight-d block is 4-cycle free,
    /// as CSV over a range of d.
    ProbTable {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        dmin: usize,
        #[arg(long)]
        dmax: usize,
    },
    /// Welch two-sample test on a cycle-count column of two key files.
    Stats {
        /// First key file.
        #[arg(long)]
        a: PathBuf,
        /// Second key file.
        #[arg(long)]
        b: PathBuf,
        /// One of: within, cross, total.
        #[arg(long)]
        column: StatColumn,
        /// Tolerate a wrong declared weight (warn and use the actual one).
        #[arg(long)]
        lax: bool,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Spectrum { key, index, lax } => cmd_spectrum(&key, index, lax),
        Command::Cycles { key, oracle, lax } => cmd_cycles(&key, oracle, lax),
        Command::Filter { r, d, weights, threshold, mode, input, out, lax } => {
            let cfg = FilterConfig { weights: parse_weights(&weights)?, threshold, mode };
            cmd_filter(r, d, &cfg, &input, &out, lax)
        }
        Command::Keygen { r, d, count, seed, filter_t, filter_weights, filter_threshold, filter_mode } => {
            let filter =
                build_filter(d, filter_t, filter_weights.as_deref(), filter_threshold, filter_mode)?;
            cmd_keygen(r, d, count, seed, filter)
        }
        Command::Dfr { r, d, t, keys, trials, seed, decoder_cfg } => {
            cmd_dfr(r, d, t, keys, trials, seed, decoder_cfg.as_deref())
        }
        Command::ProbTable { r, dmin, dmax } => cmd_prob_table(r, dmin, dmax),
        Command::Stats { a, b, column, lax } => cmd_stats(&a, &b, column, lax),
    }
}

fn load_keys(path: &PathBuf, lax: bool) -> Result<Vec<IngestedKey>> {
    let ingest =
        ingest_keys(path, lax).with_context(|| format!("reading {}", path.display()))?;
    for warning in &ingest.warnings {
        eprintln!("warning: {warning}");
    }
    Ok(ingest.entries)
}

fn parse_weights(csv: &str) -> Result<Vec<u64>> {
    csv.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .with_context(|| format!("invalid weight {tok:?}"))
        })
        .collect()
}

/// Serializes a report together with its derived mSpec pairs.
fn report_json(report: &SpectrumReport) -> serde_json::Value {
    let mut value = serde_json::to_value(report).expect("reports serialize");
    value["mspec"] = json!(report.mspec());
    value
}

fn cmd_spectrum(key: &PathBuf, index: Option<usize>, lax: bool) -> Result<()> {
    let entries = load_keys(key, lax)?;
    let selected: Vec<(usize, &IngestedKey)> = match index {
        Some(i) => {
            let entry = entries.get(i).with_context(|| {
                format!("--index {i} out of range; the file holds {} keys", entries.len())
            })?;
            vec![(i, entry)]
        }
        None => entries.iter().enumerate().collect(),
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (i, entry) in selected {
        let line = json!({
            "index": i,
            "line": entry.line,
            "h0": report_json(&compute_spectrum(entry.key.h0())),
            "h1": report_json(&compute_spectrum(entry.key.h1())),
        });
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn cmd_cycles(key: &PathBuf, oracle: bool, lax: bool) -> Result<()> {
    let entries = load_keys(key, lax)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut mismatches = 0usize;
    for (i, entry) in entries.iter().enumerate() {
        let matrix = GeneralQcMatrix::from_bike(entry.key.h0(), entry.key.h1())?;
        let census = census_general(&matrix)?;
        let mut value = serde_json::to_value(&census)?;
        value["index"] = json!(i);
        if oracle {
            let count = tanner::oracle_count(&tanner::from_general_qc(&matrix));
            value["oracle"] = json!(count);
            value["oracle_match"] = json!(count == census.total);
            if count != census.total {
                mismatches += 1;
            }
        }
        writeln!(out, "{value}")?;
    }
    if mismatches > 0 {
        bail!("closed-form census disagrees with the graph oracle on {mismatches} key(s)");
    }
    Ok(())
}

fn cmd_filter(
    r: usize,
    d: usize,
    cfg: &FilterConfig,
    input: &PathBuf,
    out_path: &PathBuf,
    lax: bool,
) -> Result<()> {
    let entries = load_keys(input, lax)?;
    let file = std::fs::File::create(out_path)
        .with_context(|| format!("creating {}", out_path.display()))?;
    let mut out = std::io::BufWriter::new(file);
    let description = describe_filter(cfg);
    let (mut accepted, mut rejected) = (0usize, 0usize);
    for entry in &entries {
        let params = entry.key.params();
        if params.r != r || params.d != d {
            bail!(
                "line {}: key has (r={}, d={}), expected (r={r}, d={d})",
                entry.line,
                params.r,
                params.d
            );
        }
        match filter_key(&entry.key, cfg)? {
            Verdict::Accept => {
                let record =
                    KeyRecord::from_key(&entry.key, entry.seed, Some(true), Some(description.clone()));
                writeln!(out, "{}", record.to_json_line())?;
                accepted += 1;
            }
            Verdict::Reject { multiplicity, statistic } => {
                rejected += 1;
                match multiplicity {
                    Some(m) => eprintln!(
                        "line {}: rejected at multiplicity {m} (score {statistic})",
                        entry.line
                    ),
                    None => eprintln!(
                        "line {}: rejected (cumulative score {statistic})",
                        entry.line
                    ),
                }
            }
        }
    }
    out.flush().with_context(|| format!("writing {}", out_path.display()))?;
    eprintln!("accepted {accepted}, rejected {rejected}");
    Ok(())
}

fn build_filter(
    d: usize,
    filter_t: Option<usize>,
    filter_weights: Option<&str>,
    filter_threshold: Option<u64>,
    filter_mode: Option<FilterMode>,
) -> Result<Option<FilterConfig>> {
    match (filter_t, filter_weights) {
        (Some(_), Some(_)) => bail!("--filter-t conflicts with --filter-weights"),
        (Some(t), None) => {
            if filter_threshold.is_some() || filter_mode.is_some() {
                bail!("--filter-t already fixes the threshold and mode");
            }
            Ok(Some(FilterConfig::t_equivalent(d, t)))
        }
        (None, Some(csv)) => {
            let threshold =
                filter_threshold.context("--filter-weights requires --filter-threshold")?;
            let mode = filter_mode.context("--filter-weights requires --filter-mode")?;
            Ok(Some(FilterConfig { weights: parse_weights(csv)?, threshold, mode }))
        }
        (None, None) => {
            if filter_threshold.is_some() || filter_mode.is_some() {
                bail!("--filter-threshold/--filter-mode require --filter-weights");
            }
            Ok(None)
        }
    }
}

fn cmd_keygen(r: usize, d: usize, count: usize, seed: u64, filter: Option<FilterConfig>) -> Result<()> {
    let spec = CampaignSpec {
        params: BikeParams::new(r, d, 1)?,
        n_keys: count,
        filter,
        master_seed: seed,
        tasks: Tasks { spectrum: false, cycles: false, dfr: false },
        dfr_trials_per_key: 0,
    };
    let result = run_campaign(&spec)?;
    print!("{}", result.to_jsonl());
    eprintln!(
        "drew {} candidates, rejected {}",
        result.candidates_drawn, result.rejected
    );
    Ok(())
}

fn cmd_dfr(
    r: usize,
    d: usize,
    t: usize,
    keys: usize,
    trials: usize,
    seed: u64,
    decoder_cfg: Option<&std::path::Path>,
) -> Result<()> {
    let mut cfg = DecoderConfig::defaults(r, d);
    if let Some(path) = decoder_cfg {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let overrides: DecoderConfigOverrides = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        cfg = cfg.with_overrides(&overrides);
    }
    let spec = CampaignSpec {
        params: BikeParams::new(r, d, t)?,
        n_keys: keys,
        filter: None,
        master_seed: seed,
        tasks: Tasks { spectrum: false, cycles: false, dfr: true },
        dfr_trials_per_key: trials,
    };
    let report = dfr_estimate(&spec, &cfg)?;
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}

/// Formats with `sig` significant digits, plain decimal notation.
fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn cmd_prob_table(r: usize, dmin: usize, dmax: usize) -> Result<()> {
    if dmin > dmax {
        bail!("--dmin must not exceed --dmax");
    }
    println!("d,p_max_mu_lt_2");
    for d in dmin..=dmax {
        let p = prob_max_below(r, d, 2)?;
        println!("{d},{}", fmt_sig(p, 6));
    }
    Ok(())
}

fn cmd_stats(a: &PathBuf, b: &PathBuf, column: StatColumn, lax: bool) -> Result<()> {
    let keys_a: Vec<_> = load_keys(a, lax)?.into_iter().map(|e| e.key).collect();
    let keys_b: Vec<_> = load_keys(b, lax)?.into_iter().map(|e| e.key).collect();
    let sample_a = column_samples(&keys_a, column);
    let sample_b = column_samples(&keys_b, column);
    let p = welch_t_test(&sample_a, &sample_b)?;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
    eprintln!(
        "column {column:?}: n_a={} mean_a={:.2}, n_b={} mean_b={:.2}",
        sample_a.len(),
        mean(&sample_a),
        sample_b.len(),
        mean(&sample_b)
    );
    println!("{}", fmt_sig(p, 6));
    Ok(())
}
