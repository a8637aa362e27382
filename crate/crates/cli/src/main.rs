use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use spinhodge_core::integrate::cache_stats;

mod commands;
mod problem;
mod record;

use commands::{cmd_cache, cmd_calibrate, cmd_problem, failed_with, Outcome, RunOptions, VariantChoice};
use problem::{Mode, ProblemSpec};
use record::ErrorRecord;

#[derive(Parser, Debug)]
#[command(name = "spinhodge", version, about = "Exact Hodge integrals of spin and Landau-Ginzburg moduli via the t -> 1 limit")]
struct Cli {
    /// Directory of the persistent correlator table.
    #[arg(long, global = true, env = "SPINHODGE_CACHE_DIR", default_value = ".spinhodge-cache")]
    cache_dir: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Also write a flat CSV of the results to this path.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = VariantArg::Twisted)]
    variant: VariantArg,
    /// Verify every value against independent expansions.
    #[arg(long, global = true)]
    truncation_check: bool,
    /// Include the Laurent expansion and the exact value before the limit.
    #[arg(long, global = true)]
    verbose_prelimit: bool,
    #[arg(long, global = true, hide = true)]
    corrupt_constant: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Twisted,
    BroadCorrected,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Limit values of the ψ-pairings of a problem.
    Integral { file: PathBuf },
    /// Relation certificates for the negative coefficients.
    Relations { file: PathBuf },
    /// Compare genus-zero values with the concavity formula.
    #[command(name = "genus0-check")]
    Genus0Check { file: PathBuf },
    /// Pin the gluing constants against the oracle suite.
    Calibrate,
    /// Inspect or maintain the correlator table.
    Cache {
        #[arg(value_parser = ["stats", "verify", "clear"])]
        action: String,
    },
    /// Run a problem file in the mode it declares.
    Run { file: PathBuf },
}

fn load(file: &PathBuf, command: &str) -> Result<ProblemSpec, Box<Outcome>> {
    let parse_error = |message: String| Box::new(failed_with(command, ErrorRecord { kind: "parse".into(), exit_code: 2, message }));
    let text = fs::read_to_string(file).map_err(|e| parse_error(format!("cannot read {}: {e}", file.display())))?;
    ProblemSpec::parse(&text).map_err(|e| parse_error(format!("{}: {e}", file.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global().ok();
    }
    let opts = RunOptions {
        cache_dir: cli.cache_dir.clone(),
        variant: match cli.variant {
            VariantArg::Twisted => VariantChoice::Twisted,
            VariantArg::BroadCorrected => VariantChoice::BroadCorrected,
            VariantArg::Both => VariantChoice::Both,
        },
        truncation_check: cli.truncation_check,
        verbose_prelimit: cli.verbose_prelimit,
        corrupt_constant: cli.corrupt_constant,
    };
    let start = Instant::now();
    let with_file = |file: &PathBuf, mode: Option<Mode>, name: &str| match load(file, name) {
        Ok(spec) => cmd_problem(mode.unwrap_or(spec.mode), &spec, &opts),
        Err(o) => *o,
    };
    let outcome = match &cli.command {
        Command::Integral { file } => with_file(file, Some(Mode::Integral), "integral"),
        Command::Relations { file } => with_file(file, Some(Mode::Relations), "relations"),
        Command::Genus0Check { file } => with_file(file, Some(Mode::Genus0Check), "genus0-check"),
        Command::Run { file } => with_file(file, None, "run"),
        Command::Calibrate => cmd_calibrate(&opts),
        Command::Cache { action } => cmd_cache(action, &cli.cache_dir),
    };
    let json = serde_json::to_string_pretty(&outcome.record).expect("records serialize");
    println!("{json}");
    if let Some(path) = &cli.csv {
        let written = csv::Writer::from_path(path).and_then(|mut w| {
            for row in &outcome.csv {
                w.serialize(row)?;
            }
            w.flush().map_err(csv::Error::from)
        });
        if let Err(e) = written {
            eprintln!("spinhodge: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    // timing and cache counters vary between runs, so they stay off stdout
    let rec = &outcome.record;
    eprintln!("spinhodge {}: {} ({} sectors) in {:.2?}", rec.command, rec.status, rec.sectors.len(), start.elapsed());
    if let Some(e) = &rec.error {
        eprintln!("  {} error: {}", e.kind, e.message);
    }
    for s in &rec.sectors {
        let what = if let Some(e) = &s.error {
            format!("{}: {}", e.kind, e.message)
        } else if let Some(why) = &s.skipped {
            format!("skipped ({why})")
        } else {
            let vals: Vec<String> = s
                .variants
                .iter()
                .map(|v| match &v.relations {
                    Some(r) => format!("{} {} ({} certificates)", v.variant, r.verdict, r.certificates.len()),
                    None => format!("{} {} values", v.variant, v.integrals.len()),
                })
                .collect();
            vals.join(", ")
        };
        eprintln!("  {} g={} k={:?} degvir={} p={}: {what}", s.shape, s.genus, s.monodromies, s.degvir, s.p);
    }
    if let Ok(stats) = cache_stats(&cli.cache_dir) {
        eprintln!(
            "  cache {}: {} on disk, {} in memory, {} hits, {} misses",
            cli.cache_dir.display(),
            stats.file_entries,
            stats.memory_entries,
            stats.hits,
            stats.misses
        );
    }
    ExitCode::from(outcome.exit_code as u8)
}
