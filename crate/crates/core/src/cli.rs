//! Command-line front end.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::anchors::{build_anchor_map, build_eval_samples, write_samples};
use crate::config::PipelineConfig;
use crate::dataset::{write_remap, Dataset, REMAP_FILE};
use crate::error::{Error, Result};
use crate::eval::{read_report, run_eval};
use crate::graph::{network_stats, personalized_pagerank, topk_subgraph, PprParams};
use crate::ingest::{build_dataset, parse_dump};
use crate::predictors::Mode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "anchorlink", version, about = "Wikipedia hyperlink prediction from anchor texts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a MediaWiki XML dump (.xml, .xml.bz2 or .xml.gz) into a dataset.
    Ingest(IngestArgs),
    /// Extract the top-k personalized PageRank neighborhood of a seed article.
    Subgraph(SubgraphArgs),
    /// Print network and candidate-sample statistics of a dataset.
    DatasetStats(StatsArgs),
    /// Evaluate link predictors over repeated transductive/inductive splits.
    Eval(EvalArgs),
    /// Print the Markdown table of a finished evaluation.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Dump file to read.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    /// Output dataset directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML pipeline config supplying `dump` and `out`.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SubgraphArgs {
    /// Input dataset directory.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Seed article title or redirect alias; repeat for several subgraphs.
    #[arg(long = "seed-article")]
    pub seed_article: Vec<String>,
    /// Number of articles to keep.
    #[arg(long)]
    pub k: Option<usize>,
    /// Output directory; with several seeds, one subdirectory per seed.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML pipeline config supplying dataset, seeds, k, damping and out.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Dataset directory.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Also write labelled anchor candidates to this samples.tsv path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Transductive,
    Inductive,
    Both,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Dataset directory.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// TOML pipeline config with methods and hyperparameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Evaluation setting(s) to run.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Number of repeated runs.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Seed of run 0; run i uses base-seed + i.
    #[arg(long = "base-seed")]
    pub base_seed: Option<u64>,
    /// Output directory for splits, predictions and reports.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Evaluation output directory holding report.json.
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (program name first) and runs the command; returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Ingest(a) => cmd_ingest(a),
        Command::Subgraph(a) => cmd_subgraph(a),
        Command::DatasetStats(a) => cmd_dataset_stats(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Report(a) => cmd_report(a),
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<PipelineConfig> {
    match path {
        Some(p) => PipelineConfig::load(p),
        None => Ok(PipelineConfig::default()),
    }
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::invalid(format!("--{flag} is required (or set it in --config)")))
}

/// Opens a dump, decompressing by file extension.
pub fn open_dump(path: &Path) -> Result<Box<dyn BufRead>> {
    let file = File::open(path).map_err(|e| Error::invalid(format!("cannot open {}: {e}", path.display())))?;
    let reader: Box<dyn Read> = match path.extension().and_then(|e| e.to_str()) {
        Some("bz2") => Box::new(bzip2::read::MultiBzDecoder::new(file)),
        Some("gz") => Box::new(flate2::read::MultiGzDecoder::new(file)),
        _ => Box::new(file),
    };
    Ok(Box::new(BufReader::with_capacity(1 << 20, reader)))
}

fn cmd_ingest(a: IngestArgs) -> Result<i32> {
    let cfg = load_config(&a.config)?;
    let dump = required(a.dump.or(cfg.dump), "dump")?;
    let out = required(a.out.or(cfg.out), "out")?;
    let (dataset, report) = build_dataset(parse_dump(open_dump(&dump)?))?;
    dataset.write(&out)?;
    fs::write(out.join("ingest_report.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    println!(
        "pages: {}  articles: {}  redirects: {}  links: {}  unresolved links: {}  markup warnings: {}",
        report.pages, report.articles, report.redirects, report.edges, report.unresolved_links, report.markup_warnings
    );
    Ok(EXIT_OK)
}

fn slug(title: &str) -> String {
    title
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect()
}

fn cmd_subgraph(a: SubgraphArgs) -> Result<i32> {
    let cfg = load_config(&a.config)?;
    let dir = required(a.dataset.or(cfg.dataset.clone()), "dataset")?;
    let out = required(a.out.or(cfg.out.clone()), "out")?;
    let seeds = if a.seed_article.is_empty() { cfg.seed_articles.clone() } else { a.seed_article };
    if seeds.is_empty() {
        return Err(Error::invalid("--seed-article is required (or set seed_articles in --config)"));
    }
    let k = a.k.unwrap_or(cfg.k);
    let dataset = Dataset::read(&dir)?;
    let mut resolved = Vec::new();
    for title in &seeds {
        match dataset.resolve_title(title) {
            Some(id) => resolved.push((title, id)),
            None => {
                let near = dataset.near_misses(title, 5);
                eprintln!("error: no article titled {title:?}");
                if !near.is_empty() {
                    eprintln!("did you mean: {}", near.join(", "));
                }
                return Ok(EXIT_USAGE);
            }
        }
    }
    let params = PprParams {
        damping: cfg.damping,
        ..PprParams::default()
    };
    let titles = dataset.titles();
    for (title, id) in resolved {
        let target = if seeds.len() == 1 { out.clone() } else { out.join(slug(&dataset.articles[id].title)) };
        let scores = personalized_pagerank(&dataset.network, id, &params)?;
        if !scores.converged {
            log::warn!("PageRank for {title:?} stopped after {} iterations", scores.iterations);
        }
        let sub = topk_subgraph(&dataset.network, &scores, &titles, k)?;
        let ds = dataset.subgraph(&sub);
        ds.write(&target)?;
        write_remap(&sub, &target.join(REMAP_FILE))?;
        println!(
            "{}: {} articles, {} links -> {}",
            dataset.articles[id].title,
            ds.articles.len(),
            ds.network.edge_count(),
            target.display()
        );
    }
    Ok(EXIT_OK)
}

fn cmd_dataset_stats(a: StatsArgs) -> Result<i32> {
    let dataset = Dataset::read(&a.dataset)?;
    let map = build_anchor_map(&dataset.network)?;
    let samples = build_eval_samples(&dataset.network, &map, &dataset.articles);
    let stats = network_stats(&dataset.network, &dataset.articles, Some(&samples));
    if let Some(p) = &a.out {
        write_samples(p, &samples)?;
    }
    println!("{}", serde_json::to_string_pretty(&stats)?);
    Ok(EXIT_OK)
}

fn cmd_eval(a: EvalArgs) -> Result<i32> {
    let cfg = load_config(&a.config)?;
    let dir = required(a.dataset.or(cfg.dataset.clone()), "dataset")?;
    let out = required(a.out.or(cfg.out.clone()), "out")?;
    let mut ec = cfg.eval_config()?;
    if let Some(m) = a.mode {
        ec.modes = match m {
            ModeArg::Transductive => vec![Mode::Transductive],
            ModeArg::Inductive => vec![Mode::Inductive],
            ModeArg::Both => vec![Mode::Transductive, Mode::Inductive],
        };
    }
    if let Some(r) = a.runs {
        if r == 0 {
            return Err(Error::invalid("--runs must be at least 1"));
        }
        ec.runs = r;
    }
    if let Some(s) = a.base_seed {
        ec.base_seed = s;
    }
    let name = cfg.name.clone().unwrap_or_else(|| {
        dir.canonicalize()
            .ok()
            .and_then(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
            .unwrap_or_else(|| "dataset".into())
    });
    let dataset = Dataset::read(&dir)?;
    let report = run_eval(&dataset, &name, &ec, Some(&out))?;
    print!("{}", report.markdown());
    if report.has_failures() {
        for r in report.rows.iter().filter(|r| r.error.is_some()) {
            eprintln!("{} ({}) failed: {}", r.method, r.mode, r.error.as_deref().unwrap_or(""));
        }
        return Ok(EXIT_PARTIAL);
    }
    Ok(EXIT_OK)
}

fn cmd_report(a: ReportArgs) -> Result<i32> {
    let report = read_report(&a.out)?;
    let md = report.markdown();
    io::Write::write_all(&mut io::stdout(), md.as_bytes())?;
    Ok(if report.has_failures() { EXIT_PARTIAL } else { EXIT_OK })
}
