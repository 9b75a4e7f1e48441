use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use strip_core::ehrhart::{
    analyse_polytope, load_directory, scan_maximum, LatticePolytope, PolytopeReport,
};
use strip_core::hypotheses::analyse;
use strip_core::numfmt::format_sig;
use strip_core::report::{
    analysis_json, check_thresholds, display_within, emit_figure_data, figure_csv, generate_table,
    invariant_json, verdict_json, DEFAULT_TARGET_ERROR,
};
use strip_core::verlinde::default_trig_precision;
use strip_core::{construct, solve, verlinde_det, verlinde_trig, ConstructionKind, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTATION: u8 = 2;
const EXIT_THRESHOLD: u8 = 3;

#[derive(Parser)]
#[command(
    name = "canonical-strip",
    version,
    about = "Hilbert polynomial roots of moduli spaces of rank-2 bundles and related varieties"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Det,
    Trig,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Verlinde numbers for levels 0..=K, one per line.
    Verlinde {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        max_level: u32,
        #[arg(long, value_enum, default_value = "det")]
        method: Method,
    },
    /// Hilbert polynomial of a construction, as JSON.
    Hilbert {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value = "moduli")]
        construction: ConstructionKind,
    },
    /// Certified roots of a Hilbert polynomial, as JSON.
    Roots {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value = "moduli")]
        construction: ConstructionKind,
        #[arg(long, default_value_t = DEFAULT_TARGET_ERROR)]
        target_error: f64,
    },
    /// CL / NCS / CS verdict with margins and bounds, as JSON.
    Check {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value = "moduli")]
        construction: ConstructionKind,
        #[arg(long, default_value_t = DEFAULT_TARGET_ERROR)]
        target_error: f64,
    },
    /// Maximal real parts for every construction over a genus range.
    Table {
        #[arg(long, default_value_t = 2)]
        genus_min: u32,
        #[arg(long, default_value_t = 25)]
        genus_max: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_TARGET_ERROR)]
        target_error: f64,
    },
    /// All roots of the moduli Hilbert polynomial over a genus range.
    PlotData {
        #[arg(long, default_value_t = 2)]
        genus_min: u32,
        #[arg(long, default_value_t = 30)]
        genus_max: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_TARGET_ERROR)]
        target_error: f64,
    },
    /// Check the genus thresholds of the NCS, CS and CL violations.
    Thresholds {
        #[arg(long, default_value_t = DEFAULT_TARGET_ERROR)]
        target_error: f64,
    },
    /// Ehrhart polynomial and verdict of a reflexive polytope, or the maximum
    /// over a directory of them.
    Ehrhart {
        #[arg(long, conflicts_with = "scan", required_unless_present = "scan")]
        polytope: Option<PathBuf>,
        #[arg(long)]
        scan: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TARGET_ERROR)]
        target_error: f64,
    },
}

enum Failure {
    Core(Error),
    Cells(usize),
    Thresholds,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_)
        | Error::InvalidGenus(_)
        | Error::Parse(_)
        | Error::Io(_)
        | Error::NotFullDimensional(_)
        | Error::OriginNotInterior
        | Error::FacetsRequired(_) => EXIT_USAGE,
        _ => EXIT_COMPUTATION,
    }
}

/// Writes to standard output; a closed pipe ends the output quietly.
fn emit(text: &str) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json(value: &Value) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialise");
    text.push('\n');
    emit(&text)
}

fn polytope_json(report: &PolytopeReport) -> Value {
    json!({
        "name": report.name,
        "invariant": invariant_json(&report.invariant),
        "roots": analysis_json(&report.analysis),
        "verdict": verdict_json(&report.verdict),
    })
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Verlinde {
            genus,
            max_level,
            method,
        } => {
            let mut text = String::new();
            for k in 0..=max_level {
                let n = match method {
                    Method::Det => verlinde_det(genus, k)?,
                    Method::Trig => verlinde_trig(genus, k, default_trig_precision(genus, k))?,
                };
                text.push_str(&format!("{n}\n"));
            }
            emit(&text)?;
        }
        Command::Hilbert {
            genus,
            construction,
        } => {
            let inv = construct(construction, genus)?;
            let mut v = invariant_json(&inv);
            v["genus"] = json!(genus);
            v["construction"] = json!(construction.name());
            print_json(&v)?;
        }
        Command::Roots {
            genus,
            construction,
            target_error,
        } => {
            let inv = construct(construction, genus)?;
            let analysis = solve(&inv.hilbert, target_error)?;
            let mut v = analysis_json(&analysis);
            v["genus"] = json!(genus);
            v["construction"] = json!(construction.name());
            print_json(&v)?;
        }
        Command::Check {
            genus,
            construction,
            target_error,
        } => {
            let inv = construct(construction, genus)?;
            let (analysis, verdict) = analyse(&inv, target_error)?;
            print_json(&json!({
                "genus": genus,
                "construction": construction.name(),
                "dimension": inv.dimension,
                "index": inv.index,
                "max_real_part": format_sig(&analysis.max_real_part),
                "max_real_error": analysis.max_real_error,
                "verdict": verdict_json(&verdict),
            }))?;
        }
        Command::Table {
            genus_min,
            genus_max,
            format,
            target_error,
        } => {
            let table = generate_table(genus_min, genus_max, target_error)?;
            match format {
                Format::Csv => emit(&table.to_csv())?,
                Format::Json => print_json(&table.to_json())?,
            }
            let failed: Vec<_> = table
                .rows
                .iter()
                .flat_map(|r| r.cells.iter().map(move |c| (r.genus, c)))
                .filter_map(|(g, c)| c.value.as_ref().err().map(|e| (g, c.kind, e)))
                .collect();
            for (g, kind, e) in &failed {
                eprintln!("g={g} {kind}: {e}");
            }
            if !failed.is_empty() {
                return Err(Failure::Cells(failed.len()));
            }
        }
        Command::PlotData {
            genus_min,
            genus_max,
            format,
            target_error,
        } => {
            let records = emit_figure_data(genus_min, genus_max, target_error)?;
            match format {
                Format::Csv => emit(&figure_csv(&records))?,
                Format::Json => print_json(&Value::Array(
                    records
                        .iter()
                        .map(|r| {
                            json!({
                                "genus": r.genus,
                                "re": display_within(&r.re, r.radius),
                                "im": display_within(&r.im, r.radius),
                                "deflated": r.deflated,
                                "multiplicity": r.multiplicity,
                            })
                        })
                        .collect(),
                ))?,
            }
        }
        Command::Thresholds { target_error } => {
            let report = check_thresholds(target_error);
            emit(&report.to_text())?;
            if !report.all_confirmed() {
                return Err(Failure::Thresholds);
            }
        }
        Command::Ehrhart {
            polytope,
            scan,
            target_error,
        } => {
            if let Some(path) = polytope {
                let p = LatticePolytope::from_file(&path)?;
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                print_json(&polytope_json(&analyse_polytope(&name, &p, target_error)?))?;
            } else if let Some(dir) = scan {
                let polytopes = load_directory(&dir)?;
                let result = scan_maximum(&polytopes, target_error)?;
                print_json(&json!({
                    "max_real_part": format_sig(&result.max_real_part),
                    "max_real_error": result.max_real_error,
                    "argmax": result.argmax,
                    "polytopes": result.reports.iter().map(polytope_json).collect::<Vec<_>>(),
                }))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_COMPUTATION);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Cells(n)) => {
            eprintln!("error: {n} table cell(s) failed");
            ExitCode::from(EXIT_COMPUTATION)
        }
        Err(Failure::Thresholds) => {
            eprintln!("threshold claims not confirmed");
            ExitCode::from(EXIT_THRESHOLD)
        }
    }
}
