//! Command-line front end: compute leakage for explicit inputs, evaluate
//! the ensemble formulas, run simulations, emit plot-ready data.
//!
//! Results go to stdout as CSV (metadata in `#`-prefixed comments) or as a
//! JSON envelope `{"metadata": ..., "payload": ...}`. Both formats render
//! every number as its shortest round-trip decimal, so they carry identical
//! values. Outputs are pure functions of the flags; worker count only
//! changes how fast the answer arrives.
//!
//! Exit codes: 0 success, 2 input error, 3 resource cap, 4 internal
//! invariant violation.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use leakage::{
    average_leakage_pmf, bec_posterior_summary, bsc_average_leakage, compare_histogram_to_pmf,
    parse_channel_spec, posterior_given_observation, simulate_leakage_histogram,
    BinaryInputChannel, ChannelKind, Error, ErrorClass, GF2Matrix, MatrixMode, Observation,
    SimulationConfig, DEFAULT_M_CAP,
};

#[derive(Parser)]
#[command(
    name = "leakage",
    version,
    about = "Exact information leakage of coset-coded transmission over binary-input wiretap channels"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Conditional leakage of the secret given one observed sequence.
    Leak(LeakArgs),
    /// Observation-independent average leakage over a BSC.
    AvgBsc(AvgBscArgs),
    /// Average leakage PMF over uniformly random matrices on the BEC.
    Ensemble(EnsembleArgs),
    /// Monte Carlo histogram of the conditional leakage.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct LeakArgs {
    /// Parity-check matrix file: a header line `m n`, then m rows of n
    /// unseparated 0/1 characters.
    #[arg(long)]
    matrix: PathBuf,
    /// Channel spec: `bsc:P`, `bec:P`, or `dmc:FILE`.
    #[arg(long)]
    channel: String,
    /// Observation file: whitespace-separated output symbols.
    #[arg(long)]
    observation: PathBuf,
    /// `rank` uses the erasure-pattern rank (BEC only); `auto` picks it for
    /// the BEC unless a posterior is requested.
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Also emit the posterior over all 2^m syndromes (pgf method only).
    #[arg(long)]
    emit_posterior: bool,
    /// Refuse posterior tables beyond 2^CAP entries.
    #[arg(long, default_value_t = DEFAULT_M_CAP)]
    m_cap: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    Pgf,
    Rank,
    Auto,
}

#[derive(Args)]
struct AvgBscArgs {
    /// Parity-check matrix file (same format as `leak`).
    #[arg(long)]
    matrix: PathBuf,
    /// Crossover probability of the eavesdropper's BSC.
    #[arg(long)]
    delta: f64,
    /// Refuse syndrome tables beyond 2^CAP entries.
    #[arg(long, default_value_t = DEFAULT_M_CAP)]
    m_cap: usize,
}

#[derive(Args)]
struct EnsembleArgs {
    /// Secret length in bits.
    #[arg(long)]
    m: usize,
    /// Code length; must exceed m.
    #[arg(long)]
    n: usize,
    /// Erasure probability of the eavesdropper's BEC.
    #[arg(long)]
    epsilon: f64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Secret length in bits.
    #[arg(long)]
    m: usize,
    /// Code length; must exceed m.
    #[arg(long)]
    n: usize,
    /// Channel spec: `bsc:P`, `bec:P`, or `dmc:FILE`.
    #[arg(long)]
    channel: String,
    /// Number of samples.
    #[arg(long)]
    samples: u64,
    /// Seed for the reproducible sample streams.
    #[arg(long)]
    seed: u64,
    /// `random` draws one systematic matrix from the seed and keeps it;
    /// `resample` draws a fresh uniform matrix per sample (BEC only);
    /// anything else is read as a matrix file.
    #[arg(long, default_value = "random")]
    matrix: String,
    /// Worker threads; 0 means one per core. Affects speed only.
    #[arg(long, env = "LEAKAGE_WORKERS", default_value_t = 0)]
    workers: usize,
    /// Compare against the random-matrix average PMF (BEC only).
    #[arg(long)]
    compare_ensemble: bool,
    /// Refuse posterior tables beyond 2^CAP entries (non-BEC channels).
    #[arg(long, default_value_t = DEFAULT_M_CAP)]
    m_cap: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Leak(args) => run_leak(args),
        Command::AvgBsc(args) => run_avg_bsc(args),
        Command::Ensemble(args) => run_ensemble(args),
        Command::Simulate(args) => run_simulate(args),
    };
    match result {
        Ok(envelope) => {
            print!("{}", envelope.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e.class() {
                ErrorClass::Input => ExitCode::from(2),
                ErrorClass::Resource => ExitCode::from(3),
                ErrorClass::Invariant => ExitCode::from(4),
            }
        }
    }
}

// ===== Output envelope =====

struct Envelope {
    /// Insertion-ordered; JSON re-sorts keys, CSV keeps this order.
    metadata: Vec<(&'static str, Value)>,
    payload: Payload,
}

enum Payload {
    /// One `leakage_bits,entropy_bits` row.
    Scalars { leakage_bits: f64, entropy_bits: f64 },
    /// `s_index,probability` rows over all syndromes.
    Posterior(Vec<f64>),
    /// `ell,probability` rows for ell = 0..=m.
    Pmf(Vec<f64>),
    /// `leakage_bits,count,frequency[,ensemble_probability]` rows.
    Histogram(Vec<HistogramRow>),
}

struct HistogramRow {
    leakage_bits: f64,
    count: u64,
    frequency: f64,
    ensemble_probability: Option<f64>,
}

fn fmt_f64(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

/// Metadata value as it appears after `# key: ` in CSV; strings unquoted,
/// everything else in JSON rendering (which is also shortest round-trip).
fn fmt_meta(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Envelope {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.metadata {
            writeln!(out, "# {key}: {}", fmt_meta(value)).unwrap();
        }
        match &self.payload {
            Payload::Scalars {
                leakage_bits,
                entropy_bits,
            } => {
                out.push_str("leakage_bits,entropy_bits\n");
                writeln!(out, "{},{}", fmt_f64(*leakage_bits), fmt_f64(*entropy_bits)).unwrap();
            }
            Payload::Posterior(probs) => {
                out.push_str("s_index,probability\n");
                for (s, &p) in probs.iter().enumerate() {
                    writeln!(out, "{s},{}", fmt_f64(p)).unwrap();
                }
            }
            Payload::Pmf(probs) => {
                out.push_str("ell,probability\n");
                for (ell, &p) in probs.iter().enumerate() {
                    writeln!(out, "{ell},{}", fmt_f64(p)).unwrap();
                }
            }
            Payload::Histogram(rows) => {
                if rows.iter().any(|r| r.ensemble_probability.is_some()) {
                    out.push_str("leakage_bits,count,frequency,ensemble_probability\n");
                } else {
                    out.push_str("leakage_bits,count,frequency\n");
                }
                for row in rows {
                    write!(
                        out,
                        "{},{},{}",
                        fmt_f64(row.leakage_bits),
                        row.count,
                        fmt_f64(row.frequency)
                    )
                    .unwrap();
                    if let Some(p) = row.ensemble_probability {
                        write!(out, ",{}", fmt_f64(p)).unwrap();
                    }
                    out.push('\n');
                }
            }
        }
        out
    }

    fn render_json(&self) -> String {
        let metadata: Map<String, Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        let payload = match &self.payload {
            Payload::Scalars {
                leakage_bits,
                entropy_bits,
            } => json!({ "leakage_bits": leakage_bits, "entropy_bits": entropy_bits }),
            Payload::Posterior(probs) => json!({ "posterior": probs }),
            Payload::Pmf(probs) => {
                let rows: Vec<Value> = probs
                    .iter()
                    .enumerate()
                    .map(|(ell, p)| json!({ "ell": ell, "probability": p }))
                    .collect();
                json!({ "pmf": rows })
            }
            Payload::Histogram(rows) => {
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|r| {
                        let mut row = json!({
                            "leakage_bits": r.leakage_bits,
                            "count": r.count,
                            "frequency": r.frequency,
                        });
                        if let Some(p) = r.ensemble_probability {
                            row["ensemble_probability"] = json!(p);
                        }
                        row
                    })
                    .collect();
                json!({ "histogram": rows })
            }
        };
        let mut out = serde_json::to_string_pretty(&json!({
            "metadata": metadata,
            "payload": payload,
        }))
        .expect("envelope serializes");
        out.push('\n');
        out
    }
}

// ===== Commands =====

fn read_file(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_matrix(path: &Path) -> Result<GF2Matrix, Error> {
    GF2Matrix::parse_text(&read_file(path)?)
}

fn path_str(path: &Path) -> Value {
    Value::String(path.display().to_string())
}

fn common_metadata(command: &str) -> Vec<(&'static str, Value)> {
    vec![
        ("command", json!(command)),
        ("tool_version", json!(env!("CARGO_PKG_VERSION"))),
    ]
}

fn run_leak(args: &LeakArgs) -> Result<Envelope, Error> {
    let a = read_matrix(&args.matrix)?;
    let channel = parse_channel_spec(&args.channel)?;
    let z = Observation::parse(&read_file(&args.observation)?)?;

    let method = match (args.method, channel.kind()) {
        (Method::Rank, kind) if !matches!(kind, ChannelKind::Bec(_)) => {
            return Err(Error::InvalidInput(
                "the rank method applies only to the erasure channel".into(),
            ));
        }
        (Method::Rank, _) if args.emit_posterior => {
            return Err(Error::InvalidInput(
                "the rank method does not tabulate the posterior; use --method pgf".into(),
            ));
        }
        (Method::Rank, _) => Method::Rank,
        (Method::Pgf, _) => Method::Pgf,
        (Method::Auto, ChannelKind::Bec(_)) if !args.emit_posterior => Method::Rank,
        (Method::Auto, _) => Method::Pgf,
    };

    let mut metadata = common_metadata("leak");
    metadata.push(("matrix", path_str(&args.matrix)));
    metadata.push(("channel", json!(args.channel)));
    metadata.push(("observation", path_str(&args.observation)));
    metadata.push(("m", json!(a.rows())));
    metadata.push(("n", json!(a.cols())));
    metadata.push((
        "method",
        json!(match method {
            Method::Pgf => "pgf",
            Method::Rank => "rank",
            Method::Auto => unreachable!(),
        }),
    ));

    if method == Method::Rank {
        let summary = bec_posterior_summary(&a, &z)?;
        return Ok(Envelope {
            metadata,
            payload: Payload::Scalars {
                leakage_bits: summary.leakage_bits as f64,
                entropy_bits: summary.w as f64,
            },
        });
    }

    let table = posterior_given_observation(&a, &channel, &z, args.m_cap)?;
    let entropy_bits = table.entropy_bits();
    let leakage_bits = (a.rows() as f64 - entropy_bits).clamp(0.0, a.rows() as f64);
    if args.emit_posterior {
        metadata.push(("leakage_bits", json!(leakage_bits)));
        metadata.push(("entropy_bits", json!(entropy_bits)));
        Ok(Envelope {
            metadata,
            payload: Payload::Posterior(table.probs().to_vec()),
        })
    } else {
        Ok(Envelope {
            metadata,
            payload: Payload::Scalars {
                leakage_bits,
                entropy_bits,
            },
        })
    }
}

fn run_avg_bsc(args: &AvgBscArgs) -> Result<Envelope, Error> {
    let a = read_matrix(&args.matrix)?;
    let result = bsc_average_leakage(&a, args.delta, args.m_cap)?;
    let mut metadata = common_metadata("avg-bsc");
    metadata.push(("matrix", path_str(&args.matrix)));
    metadata.push(("delta", json!(args.delta)));
    metadata.push(("m", json!(a.rows())));
    metadata.push(("n", json!(a.cols())));
    Ok(Envelope {
        metadata,
        payload: Payload::Scalars {
            leakage_bits: result.leakage_bits,
            entropy_bits: result.entropy_bits,
        },
    })
}

fn run_ensemble(args: &EnsembleArgs) -> Result<Envelope, Error> {
    if args.m >= args.n {
        return Err(Error::InvalidInput(format!(
            "coset coding needs m < n, got m = {}, n = {}",
            args.m, args.n
        )));
    }
    let pmf = average_leakage_pmf(args.m, args.n, args.epsilon)?;
    let mut metadata = common_metadata("ensemble");
    metadata.push(("m", json!(args.m)));
    metadata.push(("n", json!(args.n)));
    metadata.push(("epsilon", json!(args.epsilon)));
    metadata.push(("mean_bits", json!(pmf.mean())));
    Ok(Envelope {
        metadata,
        payload: Payload::Pmf(pmf.probs().to_vec()),
    })
}

fn run_simulate(args: &SimulateArgs) -> Result<Envelope, Error> {
    let channel: BinaryInputChannel = parse_channel_spec(&args.channel)?;
    let matrix_mode = match args.matrix.as_str() {
        "random" => MatrixMode::FreshSystematic,
        "resample" => MatrixMode::ResampleUniform,
        path => MatrixMode::Explicit(read_matrix(Path::new(path))?),
    };
    if args.compare_ensemble && !matches!(channel.kind(), ChannelKind::Bec(_)) {
        return Err(Error::InvalidInput(
            "--compare-ensemble needs an erasure channel; the reference PMF is only defined there"
                .into(),
        ));
    }

    let mut config = SimulationConfig::new(args.m, args.n, channel, args.samples, args.seed);
    config.matrix = matrix_mode;
    config.workers = args.workers;
    config.m_cap = args.m_cap;
    let hist = simulate_leakage_histogram(&config)?;

    let mut metadata = common_metadata("simulate");
    metadata.push(("channel", json!(args.channel)));
    metadata.push(("m", json!(args.m)));
    metadata.push(("n", json!(args.n)));
    metadata.push(("samples", json!(args.samples)));
    metadata.push(("seed", json!(args.seed)));
    metadata.push(("matrix", json!(args.matrix)));

    let reference = if args.compare_ensemble {
        let epsilon = match config.channel.kind() {
            ChannelKind::Bec(e) => e,
            _ => unreachable!(),
        };
        let pmf = average_leakage_pmf(args.m, args.n, epsilon)?;
        let report = compare_histogram_to_pmf(&hist, &pmf)?;
        metadata.push(("tv_distance", json!(report.tv_distance)));
        Some(pmf)
    } else {
        None
    };

    let total = hist.total() as f64;
    let rows = hist
        .bins()
        .map(|(leakage_bits, count)| HistogramRow {
            leakage_bits,
            count,
            frequency: count as f64 / total,
            ensemble_probability: reference.as_ref().map(|pmf| {
                if leakage_bits.fract() == 0.0 && (0.0..=args.m as f64).contains(&leakage_bits) {
                    pmf.prob(leakage_bits as usize)
                } else {
                    0.0
                }
            }),
        })
        .collect();
    Ok(Envelope {
        metadata,
        payload: Payload::Histogram(rows),
    })
}
