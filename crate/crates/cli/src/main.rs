//! `sqfree`: classify words, certify the block-digraph construction,
//! generate certified extremal words, run the greedy insertion process, and
//! search for shortest extremal words.
//!
//! Exit codes: 0 = success / property verified, 1 = a property failed or
//! nothing was found, 2 = usage or input error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use sqfree::construction::{
    certify_with, load_fixture_files, Construction, MIN_EXTREMAL_LENGTH,
    MIN_NEARLY_EXTREMAL_LENGTH,
};
use sqfree::explorer::{
    census_square_free, finish_report, probe_extremal, search_subtree, split_prefixes,
    ProbeStrategy, SearchPrefix, SearchReport, SubReport, DEFAULT_PROBE_SEED,
};
use sqfree::nonchalant::{extend_run, run_statistics, Checkpoint, NonchalantRun};
use sqfree::word::WordError;
use sqfree::{Alphabet, Status, Word};

const EXIT_OK: u8 = 0;
const EXIT_UNSATISFIED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "sqfree", version, about = "Square-free word toolkit")]
struct Cli {
    /// Output format for results
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for parallel kernels (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Classify words: square-free or not, and extendable / nearly extremal
    /// / extremal
    Check(CheckArgs),
    /// Verify the shipped construction fixtures end to end
    Certify(CertifyArgs),
    /// Generate a certified extremal or nearly extremal word
    Generate(GenerateArgs),
    /// Run the greedy rightmost-insertion sequence
    Nonchalant(NonchalantArgs),
    /// Exhaustive canonical search or randomized probe for extremal words
    Search(SearchArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// The word to classify
    word: Option<String>,

    /// Read words from a file, one per line
    #[arg(long, conflicts_with = "word")]
    file: Option<PathBuf>,

    /// Force a canonical alphabet of this size instead of inferring one
    #[arg(short = 'k', long)]
    alphabet: Option<u8>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Fixture directory (default: $SQFREE_FIXTURES or ./fixtures)
    #[arg(long)]
    fixtures: Option<PathBuf>,

    /// Use this digraph file instead of the fixture
    #[arg(long)]
    digraph: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: GenerateKind,

    /// Minimum length of the generated word
    #[arg(long)]
    min_length: usize,

    /// Re-classify the generated word and print the verdict
    #[arg(long)]
    verify: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenerateKind {
    Extremal,
    NearlyExtremal,
}

#[derive(Args)]
struct NonchalantArgs {
    /// Alphabet size
    #[arg(short = 'k', long, default_value_t = 3)]
    alphabet: u8,

    /// Total number of words in the sequence (including the seed)
    #[arg(long)]
    steps: usize,

    /// Resume from / save to this checkpoint file
    #[arg(long)]
    checkpoint: Option<PathBuf>,

    /// Print a compact `position symbol` log instead of the words
    #[arg(long, conflicts_with = "summary")]
    log: bool,

    /// Print run statistics only
    #[arg(long)]
    summary: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// Alphabet size
    #[arg(short = 'k', long)]
    alphabet: u8,

    /// Maximum word length to explore
    #[arg(long)]
    max_len: usize,

    /// Probe strategy (random-walk, nonchalant-seeded, dfs-sampling)
    /// instead of exhaustive search
    #[arg(long)]
    probe: Option<String>,

    /// Extension-check budget for probes
    #[arg(long, requires = "probe")]
    budget: Option<u64>,

    /// Random seed for probes
    #[arg(long, requires = "probe")]
    seed: Option<u64>,

    /// Count square-free words per length instead of searching for
    /// extremal ones
    #[arg(long, conflicts_with = "probe")]
    census: bool,

    /// Checkpoint file for resumable exhaustive search
    #[arg(long, conflicts_with = "probe")]
    resume: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) =
            rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let outcome = match &cli.command {
        Command::Check(args) => cmd_check(&cli, args),
        Command::Certify(args) => cmd_certify(&cli, args),
        Command::Generate(args) => cmd_generate(&cli, args),
        Command::Nonchalant(args) => cmd_nonchalant(&cli, args),
        Command::Search(args) => cmd_search(&cli, args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

#[derive(Serialize)]
struct CheckRecord {
    word: String,
    length: usize,
    square_free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    status: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extensions: Option<Vec<serde_json::Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    square: Option<sqfree::SquareWitness>,
}

fn cmd_check(cli: &Cli, args: &CheckArgs) -> Result<u8> {
    let inputs: Vec<String> = match (&args.word, &args.file) {
        (Some(word), None) => vec![word.clone()],
        (None, Some(path)) => std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?
            .lines()
            .map(str::to_string)
            .collect(),
        _ => return Err(anyhow!("pass a word or --file")),
    };

    let mut records = Vec::new();
    let mut all_square_free = true;
    for text in &inputs {
        let (alphabet, word) = parse_word(text, args.alphabet)?;
        let record = match word.find_square() {
            Some(square) => {
                all_square_free = false;
                CheckRecord {
                    word: text.clone(),
                    length: word.len(),
                    square_free: false,
                    status: None,
                    extensions: None,
                    square: Some(square),
                }
            }
            None => {
                let report = word.classify(alphabet.k()).expect("word is square-free");
                let extensions = report
                    .extensions
                    .iter()
                    .map(|e| {
                        json!({
                            "position": e.position,
                            "symbol": alphabet.symbol(e.symbol).to_string(),
                        })
                    })
                    .collect();
                CheckRecord {
                    word: text.clone(),
                    length: word.len(),
                    square_free: true,
                    status: Some(report.status),
                    extensions: Some(extensions),
                    square: None,
                }
            }
        };
        records.push(record);
    }

    match cli.format {
        Format::Json if records.len() == 1 => print_json(&records[0])?,
        Format::Json => print_json(&records)?,
        Format::Text => {
            for r in &records {
                match (&r.status, &r.square) {
                    (Some(status), _) => {
                        let extensions = r
                            .extensions
                            .as_ref()
                            .unwrap()
                            .iter()
                            .map(|e| {
                                format!("{}:{}", e["position"], e["symbol"].as_str().unwrap())
                            })
                            .collect::<Vec<_>>()
                            .join(" ");
                        if extensions.is_empty() {
                            println!("{status}");
                        } else {
                            println!("{status}, extensions: {extensions}");
                        }
                    }
                    (None, Some(square)) => {
                        println!(
                            "NOT SQUARE-FREE, square at {} with half-length {}",
                            square.start, square.half_len
                        );
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
    Ok(if all_square_free { EXIT_OK } else { EXIT_UNSATISFIED })
}

fn parse_word(text: &str, forced_k: Option<u8>) -> Result<(Alphabet, Word)> {
    let alphabet = match forced_k {
        Some(k) => {
            if k == 0 || k as usize > sqfree::word::MAX_ALPHABET {
                return Err(anyhow!("alphabet size must be between 1 and 26"));
            }
            Alphabet::canonical(k as usize)
        }
        None => {
            if text.is_empty() {
                Alphabet::canonical(1)
            } else {
                Alphabet::infer(text).map_err(|e| anyhow!("{e}"))?
            }
        }
    };
    let word = alphabet.parse(text).map_err(|e: WordError| anyhow!("{e}"))?;
    Ok((alphabet, word))
}

fn cmd_certify(cli: &Cli, args: &CertifyArgs) -> Result<u8> {
    let dir = args
        .fixtures
        .clone()
        .or_else(|| std::env::var_os("SQFREE_FIXTURES").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("fixtures"));
    let (words, mut digraph) = load_fixture_files(&dir)
        .with_context(|| format!("loading fixtures from {}", dir.display()))?;
    if let Some(path) = &args.digraph {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        digraph = sqfree::BlockDigraph::parse(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
    }
    let certificate = certify_with(&words, &digraph)?;
    match cli.format {
        Format::Json => print_json(&certificate)?,
        Format::Text => print!("{}", certificate.summary()),
    }
    Ok(if certificate.passed() { EXIT_OK } else { EXIT_UNSATISFIED })
}

fn cmd_generate(cli: &Cli, args: &GenerateArgs) -> Result<u8> {
    let (minimum, kind_name, expected) = match args.kind {
        GenerateKind::Extremal => (MIN_EXTREMAL_LENGTH, "extremal", Status::Extremal),
        GenerateKind::NearlyExtremal => {
            (MIN_NEARLY_EXTREMAL_LENGTH, "nearly-extremal", Status::NearlyExtremal)
        }
    };
    if args.min_length < minimum {
        return Err(anyhow!("--min-length must be at least {minimum} for {kind_name} words"));
    }
    let construction = Construction::new()?;
    let word = match args.kind {
        GenerateKind::Extremal => construction.generate_extremal(args.min_length)?,
        GenerateKind::NearlyExtremal => {
            construction.generate_nearly_extremal(args.min_length)?
        }
    };
    let verified = if args.verify {
        Some(word.classify(3).map_err(|e| anyhow!("{e}"))?.status)
    } else {
        None
    };
    match cli.format {
        Format::Json => print_json(&json!({
            "kind": kind_name,
            "min_length": args.min_length,
            "length": word.len(),
            "word": word.to_string(),
            "verified_status": verified.map(|s| s.to_string()),
        }))?,
        Format::Text => {
            println!("{word}");
            if let Some(status) = verified {
                println!("{status}");
            }
        }
    }
    Ok(if verified.is_some_and(|s| s != expected) { EXIT_UNSATISFIED } else { EXIT_OK })
}

fn cmd_nonchalant(cli: &Cli, args: &NonchalantArgs) -> Result<u8> {
    if args.alphabet == 0 || args.alphabet as usize > sqfree::word::MAX_ALPHABET {
        return Err(anyhow!("alphabet size must be between 1 and 26"));
    }
    if args.steps == 0 {
        return Err(anyhow!("--steps must be at least 1"));
    }

    let run: NonchalantRun = match &args.checkpoint {
        Some(path) if path.exists() => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let checkpoint: Checkpoint = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            if checkpoint.k != args.alphabet {
                return Err(anyhow!(
                    "checkpoint alphabet size {} does not match -k {}",
                    checkpoint.k,
                    args.alphabet
                ));
            }
            let restored =
                checkpoint.restore().map_err(|e| anyhow!("corrupt checkpoint: {e}"))?;
            extend_run(restored, args.steps)
        }
        _ => sqfree::nonchalant::run_nonchalant(args.alphabet, args.steps),
    };

    if let Some(path) = &args.checkpoint {
        let text = serde_json::to_string(&run.checkpoint())?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }

    let summary = run_statistics(&run);
    match cli.format {
        Format::Json => print_json(&json!({
            "k": run.k,
            "words": run.word_count(),
            "terminated": run.terminated,
            "final_length": run.final_word().len(),
            "final_word": run.final_word().to_string(),
            "summary": summary,
        }))?,
        Format::Text => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            if args.summary {
                writeln!(
                    out,
                    "{} words over {} letters, final length {}, terminated: {}",
                    run.word_count(),
                    run.k,
                    run.final_word().len(),
                    run.terminated
                )?;
                writeln!(out, "suffix length histogram: {:?}", summary.suffix_length_histogram)?;
                writeln!(out, "letter counts: {:?}", summary.letter_counts)?;
            } else if args.log {
                for step in &run.steps {
                    writeln!(out, "{} {}", step.position, (b'a' + step.symbol) as char)?;
                }
            } else {
                for word in run.words() {
                    writeln!(out, "{word}")?;
                }
            }
        }
    }
    Ok(if run.terminated { EXIT_UNSATISFIED } else { EXIT_OK })
}

/// Completed subtree reports keyed by canonical prefix, for `--resume`.
#[derive(Serialize, Deserialize)]
struct SearchCheckpoint {
    alphabet_size: u8,
    max_len: usize,
    done: BTreeMap<String, SubReport>,
}

fn cmd_search(cli: &Cli, args: &SearchArgs) -> Result<u8> {
    if args.alphabet == 0 || args.alphabet as usize > sqfree::word::MAX_ALPHABET {
        return Err(anyhow!("alphabet size must be between 1 and 26"));
    }
    if args.max_len == 0 {
        return Err(anyhow!("--max-len must be at least 1"));
    }

    if args.census {
        let counts = census_square_free(args.alphabet, args.max_len);
        match cli.format {
            Format::Json => print_json(&json!({
                "alphabet_size": args.alphabet,
                "max_len": args.max_len,
                "counts": counts,
            }))?,
            Format::Text => {
                for (i, count) in counts.iter().enumerate() {
                    println!("{:>4} {count}", i + 1);
                }
            }
        }
        return Ok(EXIT_OK);
    }

    let report = match &args.probe {
        Some(strategy) => {
            let strategy: ProbeStrategy = strategy.parse().map_err(|e| anyhow!("{e}"))?;
            let budget = args.budget.unwrap_or(1_000_000);
            let seed = args.seed.unwrap_or(DEFAULT_PROBE_SEED);
            probe_extremal(args.alphabet, args.max_len, strategy, budget, seed)
        }
        None => match &args.resume {
            Some(path) => resumable_search(args.alphabet, args.max_len, path)?,
            None => sqfree::explorer::search_extremal(args.alphabet, args.max_len),
        },
    };

    match cli.format {
        Format::Json => print_json(&report)?,
        Format::Text => print_search_report(&report),
    }
    Ok(if report.extremal.is_empty() { EXIT_UNSATISFIED } else { EXIT_OK })
}

fn resumable_search(k: u8, max_len: usize, path: &Path) -> Result<SearchReport> {
    let start = std::time::Instant::now();
    let mut checkpoint = if path.exists() {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let cp: SearchCheckpoint = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        if cp.alphabet_size != k || cp.max_len != max_len {
            return Err(anyhow!("checkpoint was created for different search parameters"));
        }
        cp
    } else {
        SearchCheckpoint { alphabet_size: k, max_len, done: BTreeMap::new() }
    };

    let mut shallow = SubReport::new(max_len);
    let prefixes = split_prefixes(k, max_len, &mut shallow);
    let pending: Vec<&SearchPrefix> = prefixes
        .iter()
        .filter(|p| !checkpoint.done.contains_key(&p.word.to_string()))
        .collect();

    // work through pending prefixes in batches, checkpointing between them
    for batch in pending.chunks(64.max(rayon::current_num_threads() * 8)) {
        use rayon::prelude::*;
        let results: Vec<(String, SubReport)> = batch
            .par_iter()
            .map(|prefix| (prefix.word.to_string(), search_subtree(prefix, k, max_len)))
            .collect();
        checkpoint.done.extend(results);
        std::fs::write(path, serde_json::to_string(&checkpoint)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }

    let mut merged = shallow;
    for prefix in &prefixes {
        let sub = checkpoint
            .done
            .get(&prefix.word.to_string())
            .ok_or_else(|| anyhow!("checkpoint lost prefix {}", prefix.word))?;
        merged.absorb(sub);
    }
    Ok(finish_report(k, max_len, true, merged, start))
}

fn print_search_report(report: &SearchReport) {
    println!(
        "alphabet size {}, max length {}, {}",
        report.alphabet_size,
        report.max_len,
        if report.exhaustive { "exhaustive canonical search" } else { "randomized probe" }
    );
    println!("{:>6} {:>12}", "length", if report.exhaustive { "canonical" } else { "visited" });
    for (i, count) in report.counts.iter().enumerate() {
        if *count > 0 {
            println!("{:>6} {count:>12}", i + 1);
        }
    }
    println!("nodes: {}, extension checks: {}", report.nodes, report.extension_checks);
    if report.extremal.is_empty() {
        println!("no extremal word found");
    } else {
        for hit in &report.extremal {
            println!("extremal at length {}: {}", hit.length, hit.word);
        }
        if let Some((len, witnesses)) = report.shortest_extremal() {
            println!("shortest: length {len} with {} witness(es)", witnesses.len());
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
