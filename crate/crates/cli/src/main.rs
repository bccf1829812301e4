use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use quiverkit::checks::{run_check, VerifyConfig, CHECK_NAMES};
use quiverkit::mutation::{enumerate_cluster_variables, ExchangeMatrix, Seed};
use quiverkit::orbit::classify_components_with;
use quiverkit::polygon::enumerate_angulations_with;
use quiverkit::power::components_json;
use quiverkit::{decompose, gamma, power, Limits, QuiverError, TranslationQuiver, SCHEMA};

const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_CHECK_FAILED: u8 = 4;

#[derive(Parser)]
#[command(author, version, about = "Diagonal quivers of polygons, their powers, and cluster mutation", long_about = None)]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// The quiver of m-diagonals of the (n*m + 2)-gon.
    Gamma {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
    /// The m-th power of the diagonal quiver of the (n + 2)-gon.
    Power {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        /// Split the power into connected components.
        #[arg(long)]
        components: bool,
    },
    /// Identify the components of the m-th power of the diagonal quiver of
    /// the (n*m + 2)-gon with orbit quivers.
    Classify {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Report::Json)]
        report: Report,
    },
    /// Mutate an exchange matrix and its initial seed.
    Mutate {
        /// Matrix rows as JSON, e.g. "[[0,1],[-1,0]]".
        #[arg(long)]
        matrix: String,
        /// Comma-separated mutation directions, counted from 1.
        #[arg(long)]
        steps: Option<String>,
        /// Enumerate every cluster variable reachable by mutation.
        #[arg(long)]
        enumerate: bool,
        /// Maximum number of distinct seeds visited by --enumerate.
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
    /// All maximal sets of pairwise non-crossing m-diagonals of the
    /// (n*m + 2)-gon.
    Angulations {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Report::Json)]
        report: Report,
    },
    /// Run the named verification checks.
    Verify {
        /// Comma-separated subset of checks to run.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = VerifyConfig::default().seed)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Report::Text)]
        report: Report,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Dot,
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Json,
    Text,
}

/// Outcome of a subcommand: rendered output plus the exit status.
struct Rendered {
    text: String,
    status: u8,
}

impl From<String> for Rendered {
    fn from(text: String) -> Self {
        Rendered { text, status: 0 }
    }
}

fn with_schema(body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), json!(SCHEMA));
    match body {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("data".into(), other);
        }
    }
    Value::Object(map)
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&with_schema(v)).expect("JSON values serialize");
    s.push('\n');
    s
}

fn check_gamma_size(n: u32, m: u32, limits: &Limits) -> Result<()> {
    if n < 2 || m < 1 {
        bail!(QuiverError::InvalidArgument(format!(
            "need n >= 2 and m >= 1, got n = {n}, m = {m}"
        )));
    }
    let size = (n as usize - 1) * (n as usize * m as usize + 2) / 2;
    if size > limits.vertex_cap {
        bail!(QuiverError::SizeLimit {
            what: format!("quiver ({n},{m})"),
            size,
            cap: limits.vertex_cap,
        });
    }
    Ok(())
}

fn render_quiver(tq: &TranslationQuiver, name: &str, emit: Emit, extra: Value) -> String {
    match emit {
        Emit::Dot => tq.to_dot(name),
        Emit::Json => {
            let mut body = extra;
            if let (Value::Object(map), Value::Object(q)) = (&mut body, tq.to_json()) {
                map.extend(q);
            }
            pretty(body)
        }
        Emit::Text => quiver_text(tq),
    }
}

fn quiver_text(tq: &TranslationQuiver) -> String {
    let q = tq.quiver();
    let mut out = format!("{} vertices, {} arrows\n", q.len(), q.arrow_count());
    for (s, t, c) in q.arrows() {
        let times = if c > 1 {
            format!(" (x{c})")
        } else {
            String::new()
        };
        out.push_str(&format!("{} -> {}{times}\n", q.label(s), q.label(t)));
    }
    for v in q.vertices() {
        if let Some(t) = tq.tau(v) {
            out.push_str(&format!("tau {} = {}\n", q.label(v), q.label(t)));
        }
    }
    out
}

fn cmd_gamma(n: u32, m: u32, emit: Emit, limits: &Limits) -> Result<Rendered> {
    check_gamma_size(n, m, limits)?;
    let g = gamma(n, m)?;
    Ok(render_quiver(&g, &format!("gamma_{n}_{m}"), emit, json!({"n": n, "m": m})).into())
}

fn cmd_power(n: u32, m: u32, emit: Emit, components: bool, limits: &Limits) -> Result<Rendered> {
    check_gamma_size(n, 1, limits)?;
    let pq = power(&gamma(n, 1)?, m)?;
    if !components {
        let name = format!("gamma_{n}_1_power_{m}");
        return Ok(render_quiver(&pq.result, &name, emit, json!({"n": n, "m": m})).into());
    }
    let parts = decompose(&pq);
    let text = match emit {
        Emit::Json => pretty(components_json(&pq, &parts)),
        Emit::Dot => parts
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.quiver
                    .to_dot(&format!("gamma_{n}_1_power_{m}_component_{i}"))
            })
            .collect(),
        Emit::Text => parts
            .iter()
            .enumerate()
            .map(|(i, c)| format!("component {i}: {}", quiver_text(&c.quiver)))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok(text.into())
}

fn cmd_classify(n: u32, m: u32, report: Report, limits: &Limits) -> Result<Rendered> {
    check_gamma_size(n, m, limits)?;
    let r = classify_components_with(n, m, limits)?;
    Ok(match report {
        Report::Json => pretty(r.to_json()),
        Report::Text => r.to_text(),
    }
    .into())
}

fn parse_steps(raw: &str, rank: usize) -> Result<Vec<usize>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let k: usize = s
                .parse()
                .map_err(|_| anyhow!(QuiverError::InvalidArgument(format!("bad step {s:?}"))))?;
            if k == 0 || k > rank {
                bail!(QuiverError::InvalidArgument(format!(
                    "step {k} outside 1..={rank}"
                )));
            }
            Ok(k - 1)
        })
        .collect()
}

fn seed_json(seed: &Seed) -> Value {
    json!({
        "cluster": seed.cluster.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "matrix": seed.matrix.rows(),
    })
}

fn cmd_mutate(matrix: &str, steps: Option<&str>, enumerate: bool, cap: usize) -> Result<Rendered> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(matrix)
        .map_err(|e| anyhow!(QuiverError::InvalidArgument(format!("--matrix: {e}"))))?;
    let m0 = ExchangeMatrix::new(rows)
        .map_err(|e| anyhow!(QuiverError::InvalidArgument(e.to_string())))?;
    if cap == 0 {
        bail!(QuiverError::InvalidArgument(
            "--cap must be positive".into()
        ));
    }
    let mut body = Map::new();
    body.insert("matrix".into(), json!(m0.rows()));
    if let Some(raw) = steps {
        let ks = parse_steps(raw, m0.rank())?;
        let mut seed = Seed::initial(m0.clone());
        let mut trail = vec![json!({"step": Value::Null, "seed": seed_json(&seed)})];
        for k in ks {
            seed = seed
                .mutate(k)
                .map_err(|e| anyhow!(QuiverError::InvalidArgument(e.to_string())))?;
            trail.push(json!({"step": k + 1, "seed": seed_json(&seed)}));
        }
        body.insert("seeds".into(), Value::Array(trail));
    }
    if enumerate {
        let found = enumerate_cluster_variables(&m0, cap);
        body.insert(
            "cluster_variables".into(),
            json!({
                "count": found.variables.len(),
                "seeds": found.seeds,
                "cap_reached": found.cap_reached,
                "variables": found.variables.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(pretty(Value::Object(body)).into())
}

fn cmd_angulations(n: u32, m: u32, report: Report, limits: &Limits) -> Result<Rendered> {
    let all = enumerate_angulations_with(n, m, limits)?;
    Ok(match report {
        Report::Json => {
            let sets: Vec<Vec<[u32; 2]>> = all
                .iter()
                .map(|set| {
                    set.iter()
                        .map(|d| {
                            let (i, j) = d.endpoints();
                            [i, j]
                        })
                        .collect()
                })
                .collect();
            pretty(json!({"n": n, "m": m, "count": sets.len(), "angulations": sets}))
        }
        Report::Text => {
            let mut out = format!("{} angulations\n", all.len());
            for set in &all {
                let labels: Vec<String> = set.iter().map(ToString::to_string).collect();
                out.push_str(&labels.join(" "));
                out.push('\n');
            }
            out
        }
    }
    .into())
}

fn cmd_verify(only: &[String], seed: u64, report: Report, limits: &Limits) -> Result<Rendered> {
    let names: Vec<&str> = if only.is_empty() {
        CHECK_NAMES.to_vec()
    } else {
        only.iter().map(String::as_str).collect()
    };
    let cfg = VerifyConfig {
        seed,
        limits: *limits,
    };
    let mut outcomes = Vec::new();
    for name in names {
        outcomes.push(run_check(name, &cfg)?);
    }
    let hard_failed = outcomes.iter().any(|o| o.hard && !o.passed);
    let text = match report {
        Report::Json => pretty(json!({
            "seed": seed,
            "passed": !hard_failed,
            "checks": outcomes.iter().map(|o| json!({
                "name": o.name,
                "hard": o.hard,
                "passed": o.passed,
                "details": o.lines,
            })).collect::<Vec<_>>(),
        })),
        Report::Text => {
            let mut out = String::new();
            for o in &outcomes {
                let verdict = match (o.passed, o.hard) {
                    (true, _) => "PASS",
                    (false, true) => "FAIL",
                    (false, false) => "WARN",
                };
                let kind = if o.hard { "" } else { " (report only)" };
                out.push_str(&format!("{verdict} {}{kind}\n", o.name));
                for line in &o.lines {
                    out.push_str(&format!("    {line}\n"));
                }
            }
            out
        }
    };
    Ok(Rendered {
        text,
        status: if hard_failed { EXIT_CHECK_FAILED } else { 0 },
    })
}

fn run(args: &Args) -> Result<Rendered> {
    let limits = Limits::from_env()?;
    if let Some(threads) = args.threads {
        if threads == 0 {
            bail!(QuiverError::InvalidArgument(
                "--threads must be positive".into()
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match &args.command {
        Command::Gamma { n, m, emit } => cmd_gamma(*n, *m, *emit, &limits),
        Command::Power {
            n,
            m,
            emit,
            components,
        } => cmd_power(*n, *m, *emit, *components, &limits),
        Command::Classify { n, m, report } => cmd_classify(*n, *m, *report, &limits),
        Command::Mutate {
            matrix,
            steps,
            enumerate,
            cap,
        } => cmd_mutate(matrix, steps.as_deref(), *enumerate, *cap),
        Command::Angulations { n, m, report } => cmd_angulations(*n, *m, *report, &limits),
        Command::Verify { only, seed, report } => cmd_verify(only, *seed, *report, &limits),
    }
}

fn exit_status(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<QuiverError>() {
        Some(QuiverError::SizeLimit { .. }) => EXIT_CAP,
        Some(_) => EXIT_USAGE,
        None => 1,
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(rendered) => {
            let written = match &args.output {
                Some(path) => fs::write(path, &rendered.text)
                    .with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{}", rendered.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            ExitCode::from(rendered.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_status(&e))
        }
    }
}
