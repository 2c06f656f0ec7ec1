//! The `composition-codec` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 parse or validation error, 3 decode
//! failure (including failed experiment trials), 4 internal error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::Num;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::channel::{apply_error, error_specs, random_error, ErrorSpec};
use crate::codebook::{message_bits, params_r};
use crate::composition::{fragment, BinaryString, CompositionMultiset};
use crate::ecc::{decode_c, params_c};
use crate::error::Error;
use crate::experiment::{run_experiment, ExperimentConfig, Mode};
use crate::format::{parse_any, to_json, to_text};
use crate::reconstruct::{backtrack_all, decode_r, ORACLE_LIMIT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DECODE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "composition-codec",
    version,
    about = "Composition reconstruction codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Code length, redundancy and capacity for a message length.
    Params {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Encode a message into a codeword.
    Encode {
        #[arg(long)]
        k: Option<usize>,
        /// Message as bits, or hexadecimal with a 0x prefix.
        #[arg(long)]
        message: String,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        io: Io,
    },
    /// Composition multiset of a binary string.
    Fragment {
        /// The string; read from --in or stdin when absent.
        #[arg(long)]
        message: Option<String>,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        io: Io,
    },
    /// Apply one random composition error to a multiset.
    Corrupt {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict the error to one class.
        #[arg(long)]
        class: Option<usize>,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        io: Io,
    },
    /// Recover a message from a multiset.
    Decode {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        io: Io,
    },
    /// List every string with the given multiset (exhaustive, small lengths only).
    Reconstruct {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        io: Io,
    },
    /// Run a sweep and print its report.
    Experiment {
        #[arg(value_enum)]
        mode: Mode,
        /// Inclusive range `A..B`.
        #[arg(long, value_parser = parse_range)]
        k_range: Option<(usize, usize)>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Code length for distance_check.
        #[arg(long)]
        max_n: Option<usize>,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Use the single error correcting code.
    #[arg(long)]
    ecc: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct Io {
    /// Input file; stdin when absent or `-`.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start {a:?}"))?;
    let b: usize = b
        .trim_start_matches('=')
        .trim()
        .parse()
        .map_err(|_| format!("bad range end {b:?}"))?;
    Ok((a, b))
}

/// A failure carrying its exit code and single-line diagnostic.
struct Failure {
    exit: i32,
    code: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = if e.is_decode_failure() {
            EXIT_DECODE
        } else if e.is_internal() {
            EXIT_INTERNAL
        } else {
            EXIT_INVALID
        };
        Failure {
            exit,
            code: e.code(),
            message: e.to_string(),
        }
    }
}

fn io_failure(what: &str, e: io::Error) -> Failure {
    Failure {
        exit: EXIT_INVALID,
        code: "io",
        message: format!("{what}: {e}"),
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs the command line and returns the process exit code.
pub fn run<S: AsRef<str>>(argv: &[S]) -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<S: AsRef<str>>(argv: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error[{}]: {}", f.code, f.message);
            f.exit
        }
    }
}

fn read_input(input: &Option<PathBuf>) -> std::result::Result<String, Failure> {
    match input {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| io_failure(&p.display().to_string(), e))
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| io_failure("stdin", e))?;
            Ok(s)
        }
    }
}

fn write_output(
    path: &Option<PathBuf>,
    out: &mut dyn Write,
    text: &str,
) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(&p.display().to_string(), e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| io_failure("stdout", e)),
    }
}

fn read_multiset(io: &Io) -> std::result::Result<CompositionMultiset, Failure> {
    let c = parse_any(&read_input(&io.input)?)?;
    c.validate()?;
    Ok(c)
}

fn render_multiset(c: &CompositionMultiset, as_json: bool) -> String {
    if as_json {
        to_json(c) + "\n"
    } else {
        to_text(c)
    }
}

/// Parses `BITS` or `0xHEX` into a message of `k` bits.
pub fn parse_message(text: &str, k: Option<usize>) -> crate::Result<BinaryString> {
    let text = text.trim();
    if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        let value = BigUint::from_str_radix(hex, 16)
            .map_err(|_| Error::InvalidMessage(format!("{text:?} is not hexadecimal")))?;
        let k = k.unwrap_or(4 * hex.len());
        return message_bits(&value, k);
    }
    let m: BinaryString = text.parse()?;
    match k {
        Some(k) if k != m.len() => Err(Error::InvalidMessage(format!(
            "message has {} bits but --k is {k}",
            m.len()
        ))),
        _ => Ok(m),
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Params { k, common } => {
            let (n, capacity) = if common.ecc {
                let p = params_c(k)?;
                (p.n, p.capacity)
            } else {
                let p = params_r(k)?;
                (p.n, p.capacity)
            };
            let text = if common.json {
                json!({
                    "code": if common.ecc { "ecc" } else { "reconstruction" },
                    "k": k,
                    "n": n,
                    "redundancy": n - k,
                    "capacity": capacity.to_string(),
                })
                .to_string()
                    + "\n"
            } else {
                format!("k={k}\nn={n}\nredundancy={}\ncapacity={capacity}\n", n - k)
            };
            write_output(&None, out, &text)?;
        }
        Command::Encode {
            k,
            message,
            common,
            io,
        } => {
            let m = parse_message(&message, k)?;
            let (n, c) = if common.ecc {
                let p = params_c(m.len())?;
                (p.n, p.encode(&m)?)
            } else {
                let p = params_r(m.len())?;
                (p.n, p.encode(&m)?)
            };
            let text = if common.json {
                json!({ "k": m.len(), "n": n, "message": m.to_string(), "codeword": c.to_string() })
                    .to_string()
                    + "\n"
            } else {
                format!("{c}\n")
            };
            write_output(&io.out, out, &text)?;
        }
        Command::Fragment {
            message,
            common,
            io,
        } => {
            let s: BinaryString = match message {
                Some(m) => m.trim().parse()?,
                None => read_input(&io.input)?.trim().parse()?,
            };
            write_output(&io.out, out, &render_multiset(&fragment(&s), common.json))?;
        }
        Command::Corrupt {
            seed,
            class,
            common,
            io,
        } => {
            let c = read_multiset(&io)?;
            let (e, corrupted) = match class {
                None => random_error(&c, seed)?,
                Some(l) => {
                    let specs: Vec<ErrorSpec> = error_specs(&c).filter(|e| e.class == l).collect();
                    if specs.is_empty() {
                        return Err(
                            Error::InvalidError(format!("class {l} admits no error")).into()
                        );
                    }
                    let e = specs[ChaCha8Rng::seed_from_u64(seed).random_range(0..specs.len())];
                    (e, apply_error(&c, &e)?)
                }
            };
            let _ = writeln!(err, "applied {e}");
            write_output(&io.out, out, &render_multiset(&corrupted, common.json))?;
        }
        Command::Decode { k, common, io } => {
            let c = read_multiset(&io)?;
            let text = if common.ecc {
                let outcome = decode_c(&params_c(k)?, &c)?;
                let diagnostic = match &outcome.correction {
                    Some(x) => format!(
                        "corrected class {}: observed {}^0{}^1 restored {}^0{}^1",
                        x.class,
                        x.observed.zeros,
                        x.observed.ones,
                        x.corrected.zeros,
                        x.corrected.ones
                    ),
                    None => "no error detected".to_string(),
                };
                if common.json {
                    let correction = outcome.correction.map(|x| {
                        json!({
                            "class": x.class,
                            "observed": [x.observed.zeros, x.observed.ones],
                            "corrected": [x.corrected.zeros, x.corrected.ones],
                        })
                    });
                    json!({
                        "message": outcome.message.to_string(),
                        "codeword": outcome.codeword.to_string(),
                        "correction": correction,
                    })
                    .to_string()
                        + "\n"
                } else {
                    let _ = writeln!(err, "{diagnostic}");
                    format!("{}\n", outcome.message)
                }
            } else {
                let m = decode_r(&params_r(k)?, &c)?;
                if common.json {
                    json!({ "message": m.to_string() }).to_string() + "\n"
                } else {
                    format!("{m}\n")
                }
            };
            write_output(&io.out, out, &text)?;
        }
        Command::Reconstruct { common, io } => {
            let c = read_multiset(&io)?;
            let set = backtrack_all(&c, ORACLE_LIMIT)?;
            let strings: Vec<String> = set.strings.iter().map(|s| s.to_string()).collect();
            let text = if common.json {
                json!({ "n": c.n(), "strings": strings }).to_string() + "\n"
            } else {
                strings.iter().map(|s| format!("{s}\n")).collect()
            };
            write_output(&io.out, out, &text)?;
            if strings.is_empty() {
                return Err(
                    Error::InconsistentMultiset("no string has this multiset".into()).into(),
                );
            }
        }
        Command::Experiment {
            mode,
            k_range,
            trials,
            seed,
            max_n,
            common,
            out: path,
        } => {
            let mut config = ExperimentConfig::new(mode);
            if let Some((a, b)) = k_range {
                config.k_min = a;
                config.k_max = b;
            }
            config.ecc |= common.ecc;
            config.trials = trials;
            config.seed = seed;
            config.max_n = max_n;
            let start = Instant::now();
            let report = run_experiment(&config)?;
            let _ = writeln!(err, "wall time {:.3}s", start.elapsed().as_secs_f64());
            let text = if common.json {
                report.to_json() + "\n"
            } else {
                report.summary()
            };
            write_output(&path, out, &text)?;
            if !report.passed() {
                return Ok(EXIT_DECODE);
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv: Vec<&str> = std::iter::once("composition-codec")
            .chain(args.iter().copied())
            .collect();
        let code = run_with(&argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn messages_parse() {
        assert_eq!(
            parse_message("0x0f", Some(6)).unwrap().to_string(),
            "001111"
        );
        assert_eq!(parse_message("0xA", None).unwrap().to_string(), "1010");
        assert!(parse_message("0x1f", Some(3)).is_err());
        assert!(parse_message("101", Some(4)).is_err());
        assert!(parse_message("1021", None).is_err());
    }

    #[test]
    fn ranges_parse() {
        assert_eq!(parse_range("2..4096"), Ok((2, 4096)));
        assert_eq!(parse_range("1..=5"), Ok((1, 5)));
        assert!(parse_range("7").is_err());
    }

    #[test]
    fn params_and_encode() {
        let (code, out, _) = run_capture(&["params", "--k", "5", "--ecc"]);
        assert_eq!(code, 0);
        assert_eq!(out, "k=5\nn=11\nredundancy=6\ncapacity=35\n");
        let (code, out, _) = run_capture(&["encode", "--ecc", "--k", "2", "--message", "00"]);
        assert_eq!((code, out.as_str()), (0, "00000100001\n"));
    }

    #[test]
    fn usage_and_validation_codes() {
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["decode"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
        let (code, _, err) = run_capture(&["encode", "--k", "2", "--message", "0a"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.starts_with("error[invalid-string]"), "{err}");
    }
}
