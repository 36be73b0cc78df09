//! Thin command-line front end over the library: identity-verification
//! suites, eigendata management, single-cell twisted moments, and grid
//! scans.  All numerics live in the library; this binary only parses
//! arguments, wires files, and maps errors to exit codes (0 success,
//! 1 verification/runtime failure, 2 configuration error).

use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use twisted_moments::characters::{primitive_characters, DirichletCharacter};
use twisted_moments::eigendata::{export_eigendata, ingest_eigendata, newform_eigendata};
use twisted_moments::lfunctions::{afe_required_length, cell_moments, prepare_level};
use twisted_moments::modsym::build_space;
use twisted_moments::scan::{run_scan, write_csv_file, ScanConfig};
use twisted_moments::tolerances::SCAN_C_MAX;
use twisted_moments::verify::{run_suite, Suite};
use twisted_moments::{Error, Result};

#[derive(Parser)]
#[command(
    name = "twisted-moments",
    version,
    about = "Twisted modular L-functions: verification suites, eigendata, moments, grid scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an oracle/identity verification suite and report residuals.
    Verify {
        /// Suite: all, characters, exp-sums, special, petersson, lfunctions.
        #[arg(default_value = "all")]
        suite: String,
        /// Write the report CSV here ("-" writes CSV to stdout instead of
        /// the human-readable table).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute or validate exact-integer Hecke eigendata files.
    Eigendata {
        #[command(subcommand)]
        action: EigendataAction,
    },
    /// Twisted central-value moments for one (q, p) cell.
    Moment {
        /// Prime level.
        #[arg(long)]
        q: u64,
        /// Prime twist modulus.
        #[arg(long)]
        p: u64,
        /// Weight (only 2 is computable on demand).
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Single character label "p:a"; default is every primitive χ mod p.
        #[arg(long = "char")]
        character: Option<String>,
        /// Geometric-side truncation for the harmonic-weight calibration.
        #[arg(long, default_value_t = SCAN_C_MAX)]
        c_max: u64,
    },
    /// Grid scan driven by a JSON config; writes the experiment CSV.
    Scan {
        /// Path to the JSON scan config.
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (overrides the config's output field).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (overrides the config; the TWISTED_MOMENTS_WORKERS
        /// environment variable overrides both).
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Subcommand)]
enum EigendataAction {
    /// Build weight-2 eigendata at a prime level and write it to a file.
    Compute {
        /// Prime level.
        #[arg(long)]
        q: u64,
        /// Tabulate λ(n) for n up to this bound (≥ 30).
        #[arg(long)]
        nmax: u64,
        /// Output path for the exact-integer eigendata file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Read an eigendata file and run the full invariant battery on it.
    Ingest {
        /// Path to the eigendata file.
        path: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Verify { suite, out } => cmd_verify(&suite, out.as_deref()),
        Command::Eigendata { action } => match action {
            EigendataAction::Compute { q, nmax, out } => cmd_eigendata_compute(q, nmax, &out),
            EigendataAction::Ingest { path } => cmd_eigendata_ingest(&path),
        },
        Command::Moment {
            q,
            p,
            k,
            character,
            c_max,
        } => cmd_moment(q, p, k, character.as_deref(), c_max),
        Command::Scan {
            config,
            out,
            workers,
        } => cmd_scan(&config, out, workers),
    }
}

fn cmd_verify(suite_name: &str, out: Option<&Path>) -> Result<()> {
    let suite = Suite::parse(suite_name)?;
    let report = run_suite(suite)?;
    match out {
        Some(path) if path == Path::new("-") => {
            report.write_csv(std::io::stdout().lock())?;
        }
        Some(path) => {
            report.write_csv(File::create(path)?)?;
            print!("{}", report.render_text());
            println!("report written to {}", path.display());
        }
        None => print!("{}", report.render_text()),
    }
    report.ensure_passed()
}

fn cmd_eigendata_compute(q: u64, nmax: u64, out: &Path) -> Result<()> {
    let space = build_space(q)?;
    let forms = newform_eigendata(&space, nmax)?;
    export_eigendata(&forms, out)?;
    println!(
        "level {q}: {} newform(s), a(n) for n ≤ {nmax} written to {}",
        forms.len(),
        out.display()
    );
    for form in &forms {
        println!("  form {} (fricke {:+})", form.label(), form.fricke_sign());
    }
    Ok(())
}

fn cmd_eigendata_ingest(path: &Path) -> Result<()> {
    let forms = ingest_eigendata(path)?;
    println!(
        "{}: {} form(s) pass the invariant battery",
        path.display(),
        forms.len()
    );
    for form in &forms {
        println!(
            "  form {}: level {}, weight {}, n ≤ {}, fricke {:+}",
            form.label(),
            form.level(),
            form.weight(),
            form.n_max(),
            form.fricke_sign()
        );
    }
    Ok(())
}

fn cmd_moment(q: u64, p: u64, k: u32, character: Option<&str>, c_max: u64) -> Result<()> {
    let characters = match character {
        Some(label) => {
            let chi = DirichletCharacter::from_label(label)?;
            if chi.modulus() != p {
                return Err(Error::Config(format!(
                    "character modulus {} does not match --p {p}",
                    chi.modulus()
                )));
            }
            vec![chi]
        }
        None => primitive_characters(p)?,
    };
    let n_needed = afe_required_length(q, p, k, 1.0)?;
    let level = prepare_level(q, k, n_needed.max(30), c_max)?;
    for chi in &characters {
        let cell = cell_moments(&level, chi)?;
        println!(
            "q={q} p={p} k={k} chi={} dim={} natural={:.12e} harmonic={:.12e} max_central_sq={:.12e}",
            chi.label(),
            cell.dim,
            cell.natural,
            cell.harmonic,
            cell.max_central_sq
        );
    }
    Ok(())
}

fn cmd_scan(config_path: &Path, out: Option<PathBuf>, workers: Option<usize>) -> Result<()> {
    let mut config = ScanConfig::from_json_file(config_path)?;
    if let Some(w) = workers {
        config.workers = Some(w);
    }
    if let Some(o) = out {
        config.output = Some(o.display().to_string());
    }
    config.validate()?;
    let output = config
        .output
        .clone()
        .ok_or_else(|| Error::Config("no output path: pass --out or set output in the config".into()))?;
    let outcome = run_scan(&config)?;
    write_csv_file(&outcome, Path::new(&output))?;
    println!(
        "{} record(s) written to {output} ({} flagged in the errors column)",
        outcome.summary.cells, outcome.summary.failures
    );
    println!(
        "max moment ratio {:.6e}, max central-value ratio {:.6e}",
        outcome.summary.max_moment_ratio, outcome.summary.max_l_ratio
    );
    println!(
        "diagonal trend (per-form, cell means): n={} cells, rho={:.4}, z={:.4}, significant_upward={}",
        outcome.trend.n, outcome.trend.rho, outcome.trend.z, outcome.trend.significant_upward
    );
    Ok(())
}
