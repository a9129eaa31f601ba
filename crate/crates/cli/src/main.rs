use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptree_core::codec::{decode, encode};
use ptree_core::par::map_slice;
use ptree_core::report::monte_carlo_report;
use ptree_core::sampler::{for_each_tree_sequence, sample_subdivision, sample_uniform, DEFAULT_ENUM_CAP};
use ptree_core::selfcheck::{run_all, SelfcheckConfig};
use ptree_core::stats::profile;
use ptree_core::{ChildSequence, McConfig, OrderKind, PlaneTree, RandomStream};

const EXIT_INVALID: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "ptree", version, about = "Uniform random plane trees with a given child sequence")]
struct Cli {
    /// Worker threads for parallel stages (0 = all cores). Output does not depend on it.
    #[arg(long, global = true, env = "PTREE_WORKERS", default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SeqSource {
    /// Child sequence, e.g. "2,2,0,0,0" or "2^500,0^501".
    #[arg(long)]
    seq: Option<String>,
    /// File holding the sequence; `-` reads stdin.
    #[arg(long)]
    seq_file: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Trees,
    Stats,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Uniform,
    Subdivision,
}

#[derive(Subcommand)]
enum Command {
    /// Print the number of plane trees with this child sequence.
    Count {
        #[command(flatten)]
        source: SeqSource,
    },
    /// Print every tree's lex-DFS code, one per line.
    Enumerate {
        #[command(flatten)]
        source: SeqSource,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Draw uniform trees; print their codes or their height and width.
    Sample {
        #[command(flatten)]
        source: SeqSource,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Codec used to decode the rotated sequence and to print trees.
        #[arg(long, default_value = "bfs")]
        kind: OrderKind,
        #[arg(long, value_enum, default_value_t = Emit::Trees)]
        emit: Emit,
        #[arg(long, value_enum, default_value_t = Method::Uniform)]
        method: Method,
        #[command(flatten)]
        out: Output,
    },
    /// Profile, height and width of one tree.
    Stats {
        /// Tree given by its code under `--kind`.
        #[arg(long, conflicts_with = "tree_file", required_unless_present = "tree_file")]
        tree: Option<String>,
        /// File with `i:p` parent lines or a code; `-` reads stdin.
        #[arg(long)]
        tree_file: Option<PathBuf>,
        #[arg(long, default_value = "lex_dfs")]
        kind: OrderKind,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Monte Carlo tail report against the width, height and path bounds.
    Verify {
        #[command(flatten)]
        source: SeqSource,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "bfs")]
        kind: OrderKind,
        #[command(flatten)]
        out: Output,
    },
    /// Exhaustive small-size property checks.
    Selfcheck {
        #[arg(long, default_value_t = 9)]
        max_n: usize,
        #[arg(long, default_value_t = 8)]
        max_tree_n: usize,
        #[arg(long, default_value_t = 7)]
        max_perm_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// An error that carries its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl ToString) -> Self {
        Self { code: EXIT_INVALID, message: message.to_string() }
    }
}

impl From<ptree_core::Error> for Failure {
    fn from(e: ptree_core::Error) -> Self {
        let code = match e {
            ptree_core::Error::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_INVALID,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::invalid(e)
    }
}

type CmdResult = Result<u8, Failure>;

fn read_text(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
    }
}

impl SeqSource {
    fn load(&self) -> Result<ChildSequence, Failure> {
        let text = match (&self.seq, &self.seq_file) {
            (Some(s), _) => s.clone(),
            (None, Some(p)) => read_text(p)?,
            (None, None) => unreachable!("clap requires one source"),
        };
        Ok(text.parse::<ChildSequence>()?)
    }
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).map_err(|e| Failure::invalid(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_count(source: &SeqSource) -> CmdResult {
    println!("{}", source.load()?.count_trees());
    Ok(0)
}

fn cmd_enumerate(source: &SeqSource, cap: u64, output: &Option<PathBuf>) -> CmdResult {
    let c = source.load()?;
    // fail before printing anything when the count is known to exceed the cap
    if c.count_trees() > cap.into() {
        return Err(ptree_core::Error::CapExceeded { cap }.into());
    }
    let mut out = sink(output)?;
    let mut io_err = None;
    for_each_tree_sequence(&c, |code| {
        let line: Vec<String> = code.iter().map(usize::to_string).collect();
        if let Err(e) = writeln!(out, "{}", line.join(",")) {
            io_err.get_or_insert(e);
        }
        Ok(())
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    out.flush()?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    source: &SeqSource,
    trials: u64,
    seed: u64,
    kind: OrderKind,
    emit: Emit,
    method: Method,
    out: &Output,
    workers: usize,
) -> CmdResult {
    let c = source.load()?;
    if method == Method::Subdivision {
        c.one_reduce()?;
    }
    let master = RandomStream::new(seed);
    let ids: Vec<u64> = (0..trials).collect();
    let trees = map_slice(&ids, workers, |&i| {
        let mut rng = master.substream(i);
        match method {
            Method::Uniform => sample_uniform(&c, &mut rng, kind),
            Method::Subdivision => sample_subdivision(&c, &mut rng).expect("checked above"),
        }
    });
    let mut w = sink(&out.output)?;
    match (emit, out.format) {
        (Emit::Trees, Format::Json) => {
            let codes: Vec<Vec<usize>> =
                trees.iter().map(|t| encode(kind, t).counts.into_entries()).collect();
            writeln!(w, "{}", serde_json::to_string(&codes).expect("plain data"))?;
        }
        (Emit::Trees, _) => {
            for t in &trees {
                writeln!(w, "{}", encode(kind, t).counts)?;
            }
        }
        (Emit::Stats, Format::Json) => {
            let rows: Vec<serde_json::Value> = trees
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let p = profile(t);
                    serde_json::json!({ "trial": i, "height": p.height(), "width": p.width() })
                })
                .collect();
            writeln!(w, "{}", serde_json::to_string_pretty(&rows).expect("plain data"))?;
        }
        (Emit::Stats, fmt) => {
            if fmt == Format::Csv {
                writeln!(w, "trial,height,width")?;
            }
            for (i, t) in trees.iter().enumerate() {
                let p = profile(t);
                if fmt == Format::Csv {
                    writeln!(w, "{i},{},{}", p.height(), p.width())?;
                } else {
                    writeln!(w, "{i}\th={}\tw={}", p.height(), p.width())?;
                }
            }
        }
    }
    w.flush()?;
    Ok(0)
}

fn load_tree(tree: &Option<String>, file: &Option<PathBuf>, kind: OrderKind) -> Result<PlaneTree, Failure> {
    let text = match (tree, file) {
        (Some(s), _) => s.clone(),
        (None, Some(p)) => read_text(p)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    if text.lines().any(|l| l.contains(':')) {
        return Ok(PlaneTree::parse_parent_listing(&text)?);
    }
    Ok(decode(kind, &text.parse::<ChildSequence>()?)?)
}

fn cmd_stats(tree: &Option<String>, file: &Option<PathBuf>, kind: OrderKind, format: Format) -> CmdResult {
    let t = load_tree(tree, file, kind)?;
    let p = profile(&t);
    let levels: Vec<String> = p.z.iter().map(usize::to_string).collect();
    match format {
        Format::Json => {
            let v = serde_json::json!({
                "n": t.len(),
                "height": p.height(),
                "width": p.width(),
                "profile": p.z,
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("plain data"));
        }
        Format::Csv => {
            println!("n,height,width,profile");
            println!("{},{},{},{}", t.len(), p.height(), p.width(), levels.join(" "));
        }
        Format::Text => {
            println!("n       {}", t.len());
            println!("height  {}", p.height());
            println!("width   {}", p.width());
            println!("profile {}", levels.join(" "));
        }
    }
    Ok(0)
}

fn cmd_verify(
    source: &SeqSource,
    trials: u64,
    seed: u64,
    kind: OrderKind,
    out: &Output,
    workers: usize,
) -> CmdResult {
    let c = source.load()?;
    let start = Instant::now();
    let report = monte_carlo_report(&c, &McConfig { trials, seed, kind, workers })?;
    eprintln!("wall time {:.3} s", start.elapsed().as_secs_f64());
    let mut w = sink(&out.output)?;
    match out.format {
        Format::Json => writeln!(w, "{}", report.to_json())?,
        _ => write!(w, "{}", report.to_csv())?,
    }
    w.flush()?;
    let violations = report.violations();
    for v in &violations {
        eprintln!(
            "violation: {} at m={}: empirical {} (sigma {}) vs bound {}",
            v.column, v.m, v.empirical, v.sigma, v.bound
        );
    }
    Ok(if violations.is_empty() { 0 } else { EXIT_VIOLATION })
}

fn cmd_selfcheck(cfg: SelfcheckConfig, format: Format) -> CmdResult {
    let results = run_all(&cfg);
    match format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = results
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "name": r.name,
                        "checked": r.checked,
                        "violations": r.violations,
                        "passed": r.passed(),
                        "example": r.example,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows).expect("plain data"));
        }
        Format::Csv => {
            println!("property,checked,violations,passed");
            for r in &results {
                println!("{},{},{},{}", r.name, r.checked, r.violations, r.passed());
            }
        }
        Format::Text => {
            for r in &results {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                print!("{status} {:<28} checked={} violations={}", r.name, r.checked, r.violations);
                match &r.example {
                    Some(e) => println!(" first: {e}"),
                    None => println!(),
                }
            }
        }
    }
    Ok(if results.iter().all(|r| r.passed()) { 0 } else { EXIT_VIOLATION })
}

fn run(cli: Cli) -> CmdResult {
    let workers = cli.workers;
    match &cli.command {
        Command::Count { source } => cmd_count(source),
        Command::Enumerate { source, cap, output } => cmd_enumerate(source, *cap, output),
        Command::Sample { source, trials, seed, kind, emit, method, out } => {
            cmd_sample(source, *trials, *seed, *kind, *emit, *method, out, workers)
        }
        Command::Stats { tree, tree_file, kind, format } => cmd_stats(tree, tree_file, *kind, *format),
        Command::Verify { source, trials, seed, kind, out } => {
            cmd_verify(source, *trials, *seed, *kind, out, workers)
        }
        Command::Selfcheck { max_n, max_tree_n, max_perm_n, format } => cmd_selfcheck(
            SelfcheckConfig { max_n: *max_n, max_tree_n: *max_tree_n, max_perm_n: *max_perm_n, workers },
            *format,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
