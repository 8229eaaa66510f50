//! `gclist`: encode, corrupt and list decode with Guess & Check codes, and
//! run the list-size experiments.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 empty result
//! (no candidate survived, or zero trials requested).

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use gclist::bits::{format_bits, parse_bits};
use gclist::channel::{sample_uniform, DeletionPattern};
use gclist::harness::{
    run_compare, run_table2, trial_seed, write_compare_csv, write_table2_csv, CRule, CellResult,
    DecoderKind, EllRule, ExperimentConfig, Mode,
};
use gclist::oracle::{Oracle, OracleBudget};
use gclist::{GcCode, GcParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Relative `--output` paths are resolved against this directory when set.
const OUT_DIR_ENV: &str = "GCLIST_OUT_DIR";

#[derive(Parser)]
#[command(name = "gclist", version, about = "Guess & Check codes for deletion channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode messages, one per line, into codewords.
    Encode(CodeIo),
    /// Delete bits from each line, at fixed positions or sampled.
    Corrupt(CorruptArgs),
    /// List decode each received line.
    Decode(CodeIo),
    /// Average and maximum list size over a (k, delta) grid.
    Table2(ExperimentArgs),
    /// GC against the VT baseline.
    Compare(ExperimentArgs),
    /// Exact worst-case list size over all deletion patterns.
    Adversarial(AdversarialArgs),
}

#[derive(Args)]
struct CodeArgs {
    /// Message length in bits.
    #[arg(long)]
    k: usize,
    /// Number of deletions.
    #[arg(long)]
    delta: usize,
    /// Block length; defaults to ceil(log2 k).
    #[arg(long)]
    ell: Option<usize>,
    /// Number of parity symbols; defaults to delta + 1.
    #[arg(long)]
    c: Option<usize>,
}

impl CodeArgs {
    fn code(&self) -> Result<GcCode> {
        let ell = self.ell.unwrap_or_else(|| EllRule::CeilLog2.apply(self.k));
        let c = self.c.unwrap_or(self.delta + 1);
        Ok(GcCode::new(GcParams::new(self.k, ell, c, self.delta).map_err(usage)?)?)
    }
}

#[derive(Args)]
struct CodeIo {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct IoArgs {
    /// Input file; standard input when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CorruptArgs {
    /// Comma-separated 1-indexed positions to delete.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["delta", "seed"])]
    positions: Option<Vec<usize>>,
    /// Number of uniformly sampled deletions per line.
    #[arg(long, requires = "seed")]
    delta: Option<usize>,
    /// Seed for sampled deletions; line i uses trial seed i.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Comma-separated message lengths.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    /// Comma-separated deletion counts.
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<usize>>,
    /// Fixed block length instead of ceil(log2 k).
    #[arg(long)]
    ell: Option<usize>,
    /// Fixed parity count instead of delta + 1.
    #[arg(long)]
    c: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// uniform or adversarial.
    #[arg(long, default_value = "uniform")]
    mode: String,
    /// gc, vt-a17 or naive (table2 only).
    #[arg(long, default_value = "gc")]
    decoder: String,
    /// CSV file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AdversarialArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Message bits; every message when absent.
    #[arg(long)]
    message: Option<String>,
}

/// Errors reported with exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// Errors reported with exit code 3.
#[derive(Debug)]
struct Empty(String);

impl std::fmt::Display for Empty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Empty {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    Usage(e.to_string()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else if e.is::<Empty>() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Encode(args) => encode(args),
        Command::Corrupt(args) => corrupt(args),
        Command::Decode(args) => decode(args),
        Command::Table2(args) => experiment(args, false),
        Command::Compare(args) => experiment(args, true),
        Command::Adversarial(args) => adversarial(args),
    }
}

fn output_path(path: PathBuf) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path,
    }
}

fn open_output(path: Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            let p = output_path(p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
            }
            let f = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Non-empty input lines parsed as bit strings.
fn read_lines(path: Option<&PathBuf>) -> Result<Vec<Vec<u8>>> {
    let reader: Box<dyn BufRead> = match path {
        Some(p) => Box::new(BufReader::new(
            File::open(p).with_context(|| format!("opening {}", p.display()))?,
        )),
        None => Box::new(io::stdin().lock()),
    };
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_bits(line).map_err(|e| usage(format!("line {}: {e}", i + 1)))?);
    }
    Ok(out)
}

fn encode(args: CodeIo) -> Result<()> {
    let code = args.code.code()?;
    let mut out = open_output(args.io.output)?;
    for msg in read_lines(args.io.input.as_ref())? {
        let x = code.encode(&msg).map_err(usage)?;
        writeln!(out, "{}", format_bits(x.bits()))?;
    }
    out.flush()?;
    Ok(())
}

fn corrupt(args: CorruptArgs) -> Result<()> {
    let fixed = match args.positions {
        Some(p) => Some(DeletionPattern::new(p).map_err(usage)?),
        None if args.delta.is_some() => None,
        None => return Err(usage("either --positions or --delta with --seed is required")),
    };
    let mut out = open_output(args.io.output)?;
    for (i, x) in read_lines(args.io.input.as_ref())?.into_iter().enumerate() {
        let pattern = match &fixed {
            Some(p) => p.clone(),
            None => {
                let seed = trial_seed(args.seed.expect("clap requires seed"), i as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                sample_uniform(x.len(), args.delta.expect("checked above"), &mut rng).map_err(usage)?
            }
        };
        writeln!(out, "{}", format_bits(&pattern.apply(&x).map_err(usage)?))?;
    }
    out.flush()?;
    Ok(())
}

/// Writes each list as one codeword per line, lists separated by a blank
/// line; list sizes go to standard error.
fn decode(args: CodeIo) -> Result<()> {
    let code = args.code.code()?;
    let expected = code.params().n() - code.params().delta();
    let mut out = open_output(args.io.output)?;
    for (i, y) in read_lines(args.io.input.as_ref())?.into_iter().enumerate() {
        if y.len() != expected {
            return Err(usage(format!(
                "line {}: received length {} but n - delta = {expected}",
                i + 1,
                y.len()
            )));
        }
        if i > 0 {
            writeln!(out)?;
        }
        let list = match code.list_decode(&y) {
            Ok(list) => list,
            Err(gclist::Error::DecodeFailure(msg)) => {
                out.flush()?;
                return Err(Empty(format!("line {}: {msg}", i + 1)).into());
            }
            Err(e) => return Err(e.into()),
        };
        for cand in &list {
            writeln!(out, "{}", format_bits(cand.codeword.bits()))?;
        }
        eprintln!("list size: {}", list.len());
    }
    out.flush()?;
    Ok(())
}

fn experiment(args: ExperimentArgs, compare: bool) -> Result<()> {
    let defaults = ExperimentConfig::default();
    let config = ExperimentConfig {
        k_list: args.k.unwrap_or(defaults.k_list),
        delta_list: args
            .delta
            .unwrap_or(if compare { vec![2] } else { defaults.delta_list }),
        c_rule: args.c.map_or(CRule::DeltaPlus(1), CRule::Fixed),
        ell_rule: args.ell.map_or(EllRule::CeilLog2, EllRule::Fixed),
        trials: args.trials,
        base_seed: args.seed,
        mode: args.mode.parse::<Mode>().map_err(usage)?,
        decoder: args.decoder.parse::<DecoderKind>().map_err(usage)?,
        budget: OracleBudget::default(),
    };
    if compare && config.decoder != DecoderKind::Gc {
        return Err(usage("compare always runs gc against vt-a17; drop --decoder"));
    }
    let rows = if compare {
        run_compare(&config)
    } else {
        run_table2(&config)
    }
    .map_err(|e| match e {
        gclist::Error::MembershipViolation { .. } => anyhow::Error::from(e),
        other => usage(other),
    })?;
    if rows.is_empty() {
        return Err(Empty("no trials were run".into()).into());
    }
    report(&rows);
    let mut out = open_output(args.output)?;
    if compare {
        write_compare_csv(&rows, &mut out)?;
    } else {
        write_table2_csv(&rows, &mut out)?;
    }
    out.flush()?;
    Ok(())
}

fn report(rows: &[CellResult]) {
    for r in rows {
        eprintln!(
            "k={} delta={} {}: L_av={:.5} (se {:.1e}) L_max={} in {:.2?}",
            r.k, r.delta, r.decoder, r.l_av, r.l_av_stderr, r.l_max, r.wall
        );
    }
}

fn adversarial(args: AdversarialArgs) -> Result<()> {
    let oracle = Oracle::new(args.code.code()?, OracleBudget::default());
    let value = match &args.message {
        Some(m) => {
            let u = parse_bits(m).map_err(usage)?;
            oracle.exact_worst_case_list(&u).map_err(usage)?
        }
        None => oracle.exact_max_list().map_err(usage)?,
    };
    println!("{value}");
    Ok(())
}
