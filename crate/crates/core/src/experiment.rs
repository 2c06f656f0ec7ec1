//! Sweeps behind the `experiment` subcommand.
//!
//! Every mode expands into a fixed list of trials, runs them on a rayon pool
//! and gathers the outcomes in list order, so a report depends only on its
//! configuration and seed, never on the number of workers.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{enumerate_errors, random_error_with, trial_rng, ErrorSpec};
use crate::codebook::params_r;
use crate::composition::{fragment, sigma_direct, BinaryString};
use crate::ecc::{decode_c, is_codeword_c, params_c, CodeParamsC, MIN_LENGTH};
use crate::error::{Error, Result};
use crate::reconstruct::decode_r;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "COMPOSITION_CODEC_THREADS";

/// Largest `k` whose messages are swept exhaustively when no trial count is given.
pub const EXHAUSTIVE_K_LIMIT: usize = 20;

/// Largest length `distance_check` will enumerate.
pub const DISTANCE_LIMIT: usize = 23;

/// Minimum multiset distance between codewords sharing their pair weights.
pub const MIN_DISTANCE: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[value(name = "roundtrip")]
    Roundtrip,
    #[value(name = "ecc_sweep")]
    EccSweep,
    #[value(name = "redundancy_table")]
    RedundancyTable,
    #[value(name = "distance_check")]
    DistanceCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub ecc: bool,
    pub k_min: usize,
    pub k_max: usize,
    pub seed: u64,
    /// Random trials per `k`; `None` sweeps exhaustively.
    pub trials: Option<u64>,
    /// Code length for `distance_check`.
    pub max_n: Option<usize>,
}

impl ExperimentConfig {
    /// Defaults matching the acceptance sweeps.
    pub fn new(mode: Mode) -> Self {
        let (k_min, k_max) = match mode {
            Mode::Roundtrip => (1, 10),
            Mode::EccSweep => (1, 5),
            Mode::RedundancyTable => (1, 4096),
            Mode::DistanceCheck => (1, 1),
        };
        ExperimentConfig {
            mode,
            ecc: mode == Mode::EccSweep,
            k_min,
            k_max,
            seed: 0,
            trials: None,
            max_n: None,
        }
    }
}

/// Everything needed to replay one failed trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codeword: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Generator stream of a randomized trial, seeded with the report seed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stream: Option<u64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RedundancyRow {
    pub k: usize,
    pub n: usize,
    pub redundancy: usize,
    /// `n - k - log2(k) / 2`.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub mode: Mode,
    pub parameters: ExperimentConfig,
    pub trials: u64,
    pub successes: u64,
    pub failures: u64,
    pub failure_cases: Vec<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<RedundancyRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_excess: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codewords: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_distance: Option<u64>,
}

impl ExperimentReport {
    fn new(config: &ExperimentConfig, outcomes: Vec<std::result::Result<(), Failure>>) -> Self {
        let trials = outcomes.len() as u64;
        let failure_cases: Vec<Failure> = outcomes.into_iter().filter_map(|o| o.err()).collect();
        let failures = failure_cases.len() as u64;
        ExperimentReport {
            mode: config.mode,
            parameters: config.clone(),
            trials,
            successes: trials - failures,
            failures,
            failure_cases,
            rows: Vec::new(),
            bound: None,
            max_excess: None,
            codewords: None,
            groups: None,
            min_distance: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "mode={} trials={} successes={} failures={}\n",
            serde_json::to_value(self.mode).unwrap().as_str().unwrap(),
            self.trials,
            self.successes,
            self.failures
        );
        if let (Some(bound), Some(max)) = (self.bound, self.max_excess) {
            out += &format!("max_excess={max:.6} bound={bound}\n");
        }
        if let (Some(c), Some(g)) = (self.codewords, self.groups) {
            out += &format!("codewords={c} groups={g}");
            if let Some(d) = self.min_distance {
                out += &format!(" min_distance={d}");
            }
            out.push('\n');
        }
        for f in &self.failure_cases {
            out += &format!("FAIL k={}", f.k);
            if let Some(m) = &f.message {
                out += &format!(" message={m}");
            }
            if let Some(e) = &f.error {
                out += &format!(" error=[{e}]");
            }
            if let Some(s) = f.stream {
                out += &format!(" stream={s}");
            }
            out += &format!(": {}\n", f.reason);
        }
        out
    }
}

/// Worker count from the environment, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.k_min == 0 || config.k_min > config.k_max {
        return Err(Error::InvalidMessage(format!(
            "empty or invalid k range {}..{}",
            config.k_min, config.k_max
        )));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_cap() {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidMessage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match config.mode {
        Mode::Roundtrip => roundtrip(config),
        Mode::EccSweep => ecc_sweep(config),
        Mode::RedundancyTable => redundancy_table(config),
        Mode::DistanceCheck => distance_check(config),
    })
}

/// Messages of one `k`: all of them, or `trials` random ones with their streams.
fn messages(
    config: &ExperimentConfig,
    k: usize,
    first_stream: u64,
) -> Result<Vec<(BinaryString, Option<u64>)>> {
    match config.trials {
        Some(t) => Ok((0..t)
            .map(|i| {
                let stream = first_stream + i;
                let mut rng = trial_rng(config.seed, stream);
                let bits = (0..k).map(|_| rng.random_range(0..2u8)).collect();
                (BinaryString::new(bits).expect("k >= 1"), Some(stream))
            })
            .collect()),
        None if k <= EXHAUSTIVE_K_LIMIT => Ok((0..1u64 << k)
            .map(|v| (BinaryString::from_u64(v, k).expect("k >= 1"), None))
            .collect()),
        None => Err(Error::TooLarge {
            n: k,
            limit: EXHAUSTIVE_K_LIMIT,
        }),
    }
}

/// All `(k, message, stream)` work items of the configured range.
fn work(config: &ExperimentConfig) -> Result<Vec<(usize, BinaryString, Option<u64>)>> {
    let mut items = Vec::new();
    for k in config.k_min..=config.k_max {
        let first = items.len() as u64;
        items.extend(
            messages(config, k, first)?
                .into_iter()
                .map(|(m, s)| (k, m, s)),
        );
    }
    Ok(items)
}

fn failure(
    k: usize,
    message: &BinaryString,
    stream: Option<u64>,
    reason: impl Into<String>,
) -> Failure {
    Failure {
        k,
        message: Some(message.to_string()),
        codeword: None,
        error: None,
        stream,
        reason: reason.into(),
    }
}

fn roundtrip(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let items = work(config)?;
    let outcomes = items
        .par_iter()
        .map(|(k, m, stream)| {
            let fail = |reason: String| failure(*k, m, *stream, reason);
            let decoded = if config.ecc {
                let p = params_c(*k).map_err(|e| fail(e.to_string()))?;
                let c = p.encode(m).map_err(|e| fail(e.to_string()))?;
                let out = decode_c(&p, &fragment(&c)).map_err(|e| fail(e.to_string()))?;
                if let Some(corr) = out.correction {
                    return Err(fail(format!("spurious correction in class {}", corr.class)));
                }
                out.message
            } else {
                let p = params_r(*k).map_err(|e| fail(e.to_string()))?;
                let c = p.encode(m).map_err(|e| fail(e.to_string()))?;
                decode_r(&p, &fragment(&c)).map_err(|e| fail(e.to_string()))?
            };
            if decoded == *m {
                Ok(())
            } else {
                Err(fail(format!("decoded {decoded}")))
            }
        })
        .collect();
    Ok(ExperimentReport::new(config, outcomes))
}

fn check_correction(
    p: &CodeParamsC,
    m: &BinaryString,
    e: &ErrorSpec,
    received: &crate::CompositionMultiset,
) -> std::result::Result<(), String> {
    let out = decode_c(p, received).map_err(|err| err.to_string())?;
    if out.message != *m {
        return Err(format!("decoded {}", out.message));
    }
    match out.correction {
        Some(c) if c.class == e.class => Ok(()),
        Some(c) => Err(format!("reported class {} instead of {}", c.class, e.class)),
        None => Err("error went undetected".into()),
    }
}

fn ecc_sweep(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let items = work(config)?;
    let per_message: Vec<Vec<std::result::Result<(), Failure>>> = items
        .par_iter()
        .map(|(k, m, stream)| {
            let setup = params_c(*k).and_then(|p| {
                let c = p.encode(m)?;
                Ok((p, c))
            });
            let (p, c) = match setup {
                Ok(pc) => pc,
                Err(e) => return vec![Err(failure(*k, m, *stream, e.to_string()))],
            };
            let clean = fragment(&c);
            let cases: Vec<(ErrorSpec, crate::CompositionMultiset)> = match stream {
                Some(s) => {
                    // stream s drew the message; its errors come from a disjoint stream
                    let mut rng = trial_rng(config.seed, s | 1 << 63);
                    match random_error_with(&clean, &mut rng) {
                        Ok(one) => vec![one],
                        Err(e) => return vec![Err(failure(*k, m, *stream, e.to_string()))],
                    }
                }
                None => enumerate_errors(&clean).collect(),
            };
            cases
                .iter()
                .map(|(e, received)| {
                    check_correction(&p, m, e, received).map_err(|reason| Failure {
                        codeword: Some(c.to_string()),
                        error: Some(e.to_string()),
                        ..failure(*k, m, *stream, reason)
                    })
                })
                .collect()
        })
        .collect();
    Ok(ExperimentReport::new(
        config,
        per_message.into_iter().flatten().collect(),
    ))
}

/// Additive constant in the redundancy bound of each code.
pub fn redundancy_constant(ecc: bool) -> f64 {
    if ecc {
        12.0
    } else {
        6.0
    }
}

fn redundancy_table(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let constant = redundancy_constant(config.ecc);
    let rows: Vec<std::result::Result<RedundancyRow, Failure>> = (config.k_min..=config.k_max)
        .into_par_iter()
        .map(|k| {
            let n = if config.ecc {
                params_c(k).map(|p| p.n)
            } else {
                params_r(k).map(|p| p.n)
            };
            let n = n.map_err(|e| Failure {
                k,
                message: None,
                codeword: None,
                error: None,
                stream: None,
                reason: e.to_string(),
            })?;
            Ok(RedundancyRow {
                k,
                n,
                redundancy: n - k,
                excess: (n - k) as f64 - 0.5 * (k as f64).log2(),
            })
        })
        .collect();
    let outcomes = rows
        .iter()
        .map(|r| match r {
            Ok(row) if row.excess <= constant => Ok(()),
            Ok(row) => Err(Failure {
                k: row.k,
                message: None,
                codeword: None,
                error: None,
                stream: None,
                reason: format!(
                    "redundancy {} exceeds log2(k)/2 + {constant}",
                    row.redundancy
                ),
            }),
            Err(f) => Err(f.clone()),
        })
        .collect();
    let mut report = ExperimentReport::new(config, outcomes);
    report.rows = rows.into_iter().filter_map(|r| r.ok()).collect();
    report.bound = Some(constant);
    report.max_excess = report.rows.iter().map(|r| r.excess).reduce(f64::max);
    Ok(report)
}

/// Every codeword of the error correcting code of length `n`, by filtering all strings.
pub fn enumerate_c(n: usize) -> Result<Vec<BinaryString>> {
    if n > DISTANCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: DISTANCE_LIMIT,
        });
    }
    Ok((0..1u64 << n)
        .into_par_iter()
        .map(|v| BinaryString::from_u64(v, n).expect("n >= 1"))
        .filter(is_codeword_c)
        .collect())
}

fn distance_check(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let n = config.max_n.unwrap_or(MIN_LENGTH);
    if n < MIN_LENGTH || n % 6 != 5 {
        return Err(Error::InvalidMessage(format!(
            "code length {n} must be at least {MIN_LENGTH} and congruent to 5 mod 6"
        )));
    }
    let codewords = enumerate_c(n)?;
    let mut groups: BTreeMap<Vec<u8>, Vec<BinaryString>> = BTreeMap::new();
    for c in &codewords {
        groups.entry(sigma_direct(c)).or_default().push(c.clone());
    }
    let pairs: Vec<(&BinaryString, &BinaryString)> = groups
        .values()
        .flat_map(|g| (0..g.len()).flat_map(move |i| (i + 1..g.len()).map(move |j| (&g[i], &g[j]))))
        .collect();
    let distances: Vec<u64> = pairs
        .par_iter()
        .map(|(a, b)| {
            fragment(a)
                .difference_size(&fragment(b))
                .expect("same length")
        })
        .collect();
    let outcomes = pairs
        .iter()
        .zip(&distances)
        .map(|((a, b), &d)| {
            if d >= MIN_DISTANCE {
                Ok(())
            } else {
                Err(Failure {
                    k: 0,
                    message: None,
                    codeword: Some(format!("{a} {b}")),
                    error: None,
                    stream: None,
                    reason: format!("multiset distance {d} below {MIN_DISTANCE}"),
                })
            }
        })
        .collect();
    let mut report = ExperimentReport::new(config, outcomes);
    report.codewords = Some(codewords.len() as u64);
    report.groups = Some(groups.len() as u64);
    report.min_distance = distances.iter().copied().min();
    Ok(report)
}
