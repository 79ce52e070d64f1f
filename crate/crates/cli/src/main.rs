use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nilrep_cli::cache::{cache_gc, FileStore};
use nilrep_cli::catalog::Catalog;
use nilrep_cli::parse::{parse_catalog, parse_str, CatalogError};
use nilrep_cli::report::Budgets;
use nilrep_cli::run::run_suite;
use nilrep_cli::DEFAULT_CATALOG;

#[derive(Parser)]
#[command(name = "nilrep", version, about = "Property suites over nilpotent groups, Laurent ideals and induced modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run suites over a catalog.
    Check {
        /// Catalog file; `default` or a missing `default.catalog` selects the bundled one.
        catalog: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Directory for cached saturated bases.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Budget override, `key=value`; repeatable.
        #[arg(long = "budget", value_name = "KEY=VALUE")]
        budgets: Vec<String>,
    },
    /// Parse a catalog and print it back in canonical form.
    Parse { catalog: PathBuf },
    /// Evict least-recently-used cache entries.
    CacheGc {
        dir: PathBuf,
        #[arg(long)]
        max_bytes: u64,
    },
}

fn load(path: &Path) -> Result<Catalog, CatalogError> {
    let bundled = path.as_os_str() == "default" || (!path.exists() && path.file_name().is_some_and(|n| n == "default.catalog"));
    if bundled {
        parse_str(DEFAULT_CATALOG)
    } else {
        parse_catalog(path)
    }
}

fn check(
    catalog: &Path,
    suite: &str,
    seed: u64,
    jobs: usize,
    report: Option<&Path>,
    cache: Option<&Path>,
    overrides: &[String],
) -> Result<bool, String> {
    let mut budgets = Budgets::default();
    for b in overrides {
        budgets.set(b)?;
    }
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().map_err(|e| e.to_string())?;
    }
    if let Some(dir) = cache {
        let store = FileStore::open(dir).map_err(|e| format!("cache {}: {e}", dir.display()))?;
        nilrep_core::laurent::set_basis_store(Box::new(store));
    }
    let cat = load(catalog).map_err(|e| format!("{}: {e}", catalog.display()))?;
    let r = run_suite(&cat, suite, budgets, seed).map_err(|e| e.to_string())?;
    print!("{}", r.human());
    if let Some(path) = report {
        std::fs::write(path, r.to_json()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(r.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { catalog, suite, seed, jobs, report, cache, budgets } => {
            check(catalog, suite, *seed, *jobs, report.as_deref(), cache.as_deref(), budgets)
        }
        Command::Parse { catalog } => load(catalog).map_err(|e| format!("{}: {e}", catalog.display())).map(|c| {
            print!("{}", c.render());
            eprintln!("{} entries, {} cases", c.len(), c.cases().count());
            true
        }),
        Command::CacheGc { dir, max_bytes } => cache_gc(dir, *max_bytes).map_err(|e| format!("{}: {e}", dir.display())).map(|s| {
            println!("{}", serde_json::to_string(&s).expect("stats serialize"));
            true
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("nilrep: {e}");
            ExitCode::from(2)
        }
    }
}
