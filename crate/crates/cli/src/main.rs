use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use grassclique::classify::{run_algorithm1, table, verify_certificate, Certificate, ClassifyOptions, FixedProfile, Instance};
use grassclique::{gaussian_binomial, Exec, FieldParams, OrbitCache};

const EXIT_ERROR: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "grassclique", version, about = "Classify cyclic Grassmannian codes by exact clique search")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Orbit cache directory
    #[arg(long, global = true, env = "GRASSCLIQUE_CACHE")]
    cache_dir: Option<PathBuf>,

    /// Always enumerate orbits from scratch
    #[arg(long, global = true)]
    no_cache: bool,

    /// Seconds allowed per clique search (0 = unlimited)
    #[arg(long, global = true, default_value_t = 600.0)]
    time_budget: f64,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Refuse enumerations needing more than this many subspace spans
    #[arg(long, global = true)]
    enumerate_cap: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// -v info, -vv debug
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute C_q(n,d,k) with bounds and a certificate
    Classify {
        /// q n k d
        #[arg(value_name = "PARAMS", num_args = 0..=4)]
        positional: Vec<u32>,
        #[command(flatten)]
        params: Params,
        /// Conditional bound t:count[:targets], e.g. 4:1:1,2
        #[arg(long = "fix", value_name = "PROFILE")]
        fix: Vec<FixedProfile>,
        /// Write the best code's certificate here
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// List the cyclic orbits of G_q(n,k)
    Orbits {
        /// q n k
        #[arg(value_name = "PARAMS", num_args = 0..=3)]
        positional: Vec<u32>,
        #[command(flatten)]
        params: Params,
    },
    /// Re-check a certificate JSON file from scratch
    Verify { file: PathBuf },
    /// Tabulate C_q(n,d,k) over d and k
    Table {
        /// q n
        #[arg(value_name = "PARAMS", num_args = 0..=2)]
        positional: Vec<u32>,
        #[command(flatten)]
        params: Params,
        /// Distances (default: even values 4..=2·max k)
        #[arg(long, value_delimiter = ',')]
        ds: Vec<u32>,
        /// Dimensions (default: 2..=n/2)
        #[arg(long, value_delimiter = ',')]
        ks: Vec<u32>,
    },
    /// Write the compatibility graph
    GraphExport {
        /// q n k d
        #[arg(value_name = "PARAMS", num_args = 0..=4)]
        positional: Vec<u32>,
        #[command(flatten)]
        params: Params,
        /// DIMACS instead of JSON
        #[arg(long)]
        dimacs: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Default)]
struct Params {
    #[arg(short = 'q', long = "q")]
    q: Option<u32>,
    #[arg(short = 'n', long = "n")]
    n: Option<u32>,
    #[arg(short = 'k', long = "k")]
    k: Option<u32>,
    #[arg(short = 'd', long = "d")]
    d: Option<u32>,
    /// Primitive polynomial, e.g. "x^8+x^4+x^3+x^2+1"
    #[arg(long)]
    poly: Option<String>,
}

struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::fmt::Debug for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

/// Merge positional `q n k d` with flags; flags win on agreement only.
fn resolve(positional: &[u32], p: &Params, names: &[&str]) -> Result<Vec<u32>> {
    let flags = [p.q, p.n, p.k, p.d];
    let mut out = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let v = match (positional.get(i), flags[i]) {
            (Some(&a), Some(b)) if a != b => return usage(format!("conflicting values for {name}: {a} and {b}")),
            (Some(&a), _) => a,
            (None, Some(b)) => b,
            (None, None) if *name == "q" => 2,
            (None, None) => return usage(format!("missing parameter {name}")),
        };
        out.push(v);
    }
    Ok(out)
}

fn options(g: &Global, q: u32, n: u32, poly: Option<&str>) -> Result<ClassifyOptions> {
    let field = match poly {
        Some(text) => {
            let p = FieldParams::parse(q, text).with_context(|| format!("bad polynomial {text:?}"))?;
            if p.n != n {
                return usage(format!("polynomial {text} has degree {}, expected {n}", p.n));
            }
            Some(p)
        }
        None => None,
    };
    let cache = if g.no_cache { None } else { cache_dir(g).map(OrbitCache::new) };
    Ok(ClassifyOptions {
        field,
        exec: if g.threads == Some(1) { Exec::Sequential } else { Exec::Parallel },
        time_budget: (g.time_budget > 0.0).then(|| Duration::from_secs_f64(g.time_budget)),
        span_cap: g.enumerate_cap,
        cache,
        conditional: Vec::new(),
    })
}

fn cache_dir(g: &Global) -> Option<PathBuf> {
    if let Some(d) = &g.cache_dir {
        return Some(d.clone());
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("grassclique"))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let g = &cli.global;
    if let Some(t) = g.threads {
        if t == 0 {
            return usage("--threads must be positive");
        }
        #[cfg(feature = "parallel")]
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    match &cli.command {
        Command::Classify { positional, params, fix, out } => {
            let v = resolve(positional, params, &["q", "n", "k", "d"])?;
            let (q, n, k, d) = (v[0], v[1], v[2], v[3]);
            let mut opts = options(g, q, n, params.poly.as_deref())?;
            opts.conditional = fix.clone();
            let report = run_algorithm1(q, n, k, d, &opts)?;
            match g.format {
                Format::Text => print!("{report}"),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                Format::Csv => {
                    println!("q,n,k,d,M,optimal,upper_bound");
                    let ub = report.upper_bound.map(|u| u.to_string()).unwrap_or_default();
                    println!("{q},{n},{k},{},{},{},{ub}", report.d, report.m, report.optimal);
                }
            }
            if let Some(path) = out {
                emit(Some(path), &serde_json::to_string_pretty(&report.best_code)?)?;
            }
            Ok(if report.optimal { 0 } else { EXIT_PARTIAL })
        }
        Command::Orbits { positional, params } => {
            let v = resolve(positional, params, &["q", "n", "k"])?;
            let (q, n, k) = (v[0], v[1], v[2]);
            let opts = options(g, q, n, params.poly.as_deref())?;
            let ctx = opts.field_ctx(q, n)?;
            let enum_opts = grassclique::EnumOptions {
                exec: opts.exec,
                span_cap: opts.span_cap.unwrap_or(grassclique::orbits::DEFAULT_SPAN_CAP),
            };
            let set = grassclique::cache::load_or_enumerate(&ctx, k, &enum_opts, opts.cache.as_ref())?;
            match g.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&grassclique::cache::OrbitFile::from_set(&set))?
                ),
                Format::Csv => {
                    println!("rep,period,t,min_dist");
                    for o in &set.orbits {
                        let rep: Vec<String> = o.rep.elems().iter().map(|e| e.to_string()).collect();
                        let md = o.min_dist.map(|m| m.to_string()).unwrap_or_default();
                        println!("{},{},{},{md}", rep.join(" "), o.period, o.t);
                    }
                }
                Format::Text => {
                    println!("G_{q}({n},{k}) over GF({q}^{n}) mod {}", ctx.params().poly_string());
                    for o in &set.orbits {
                        let md = o.min_dist.map(|m| m.to_string()).unwrap_or_else(|| "-".into());
                        println!("{}  size {}  t={}  min_dist {md}", o.rep, o.period, o.t);
                    }
                    let parts: Vec<String> = set
                        .counts_by_t
                        .iter()
                        .map(|(t, c)| format!("{c}×t={t}"))
                        .collect();
                    println!(
                        "{} orbits ({}), {} subspaces = [{n} choose {k}]_{q} = {}",
                        set.len(),
                        parts.join(", "),
                        set.total_subspaces(),
                        gaussian_binomial(n, k, q)
                    );
                }
            }
            Ok(0)
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let cert: Certificate =
                serde_json::from_str(&text).with_context(|| format!("parsing certificate {}", file.display()))?;
            let exec = if g.threads == Some(1) { Exec::Sequential } else { Exec::Parallel };
            let verdict = verify_certificate(&cert, exec)?;
            match g.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&verdict)?),
                Format::Csv => println!("pass,M,min_distance\n{},{},{}", verdict.pass, verdict.m, verdict.min_distance.map(|d| d.to_string()).unwrap_or_default()),
                Format::Text => {
                    if verdict.pass {
                        println!("PASS {}-cyclic code", cert.parameter_string());
                        if let Some(d) = verdict.min_distance {
                            println!("minimum distance {d}");
                        }
                    }
                }
            }
            if let Some(v) = &verdict.violation {
                eprintln!("FAIL: {v}");
                return Ok(EXIT_ERROR);
            }
            Ok(0)
        }
        Command::Table { positional, params, ds, ks } => {
            let v = resolve(positional, params, &["q", "n"])?;
            let (q, n) = (v[0], v[1]);
            let ks: Vec<u32> = if ks.is_empty() { (2..=n / 2).collect() } else { ks.clone() };
            if ks.is_empty() {
                return usage("no dimensions to tabulate; pass --ks");
            }
            let ds: Vec<u32> = if ds.is_empty() {
                let top = 2 * ks.iter().max().copied().unwrap_or(2);
                (4..=top.max(4)).step_by(2).collect()
            } else {
                ds.clone()
            };
            let opts = options(g, q, n, params.poly.as_deref())?;
            let t = table(q, n, &ds, &ks, &opts)?;
            match g.format {
                Format::Text => print!("{t}"),
                Format::Json => println!("{}", serde_json::to_string_pretty(&t)?),
                Format::Csv => print!("{}", t.to_csv()),
            }
            let errors = t.cells.iter().flatten().any(|c| c.error.is_some());
            Ok(if errors {
                EXIT_ERROR
            } else if t.all_optimal() {
                0
            } else {
                EXIT_PARTIAL
            })
        }
        Command::GraphExport { positional, params, dimacs, out } => {
            let v = resolve(positional, params, &["q", "n", "k", "d"])?;
            let (q, n, k, d) = (v[0], v[1], v[2], v[3]);
            let opts = options(g, q, n, params.poly.as_deref())?;
            let inst = Instance::build(q, n, k, d, &opts)?;
            let text = if *dimacs {
                inst.graph.to_dimacs()
            } else {
                serde_json::to_string_pretty(&inst.graph.to_export())? + "\n"
            };
            emit(out.as_ref(), &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
