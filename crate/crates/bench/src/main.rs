use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qae_lab::bounds::{self, BOUNDS_FILE};
use qae_lab::sweep::{self, RowKey, SweepRow, SWEEP_FILE};
use qae_lab::tables::{self, TABLES_JSON, TABLES_TEXT};
use qae_lab::{plot, write_file, LabError, LabResult, Plan};

const DEFAULT_OUT: &str = "qae-lab-out";

#[derive(Parser, Debug)]
#[command(name = "qae-lab", version, about = "Amplitude-estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Plan file (JSON). Without it the built-in default plan is used.
    #[arg(long, global = true)]
    plan: Option<PathBuf>,
    /// Output directory; overrides the plan's output_dir.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed; overrides the plan's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for sweep and tables.
    #[arg(long, global = true, env = "QAE_LAB_WORKERS")]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form sample-complexity curves → bounds.csv
    Bounds,
    /// Error-versus-budget sweep → sweep.csv
    Sweep,
    /// Mean / VaR / CVaR tables → tables.json, tables.txt
    Tables,
    /// SVG charts from bounds.csv / sweep.csv
    Plot {
        /// CSV to plot; defaults to every known CSV in the output directory.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Recompute sweep rows and compare them with a CSV
    Replay {
        /// Row id such as d0-s1-p2-r3; all rows of --csv when omitted.
        #[arg(long)]
        row: Option<String>,
        /// Sweep CSV to compare against.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the default plan as JSON
    DefaultPlan,
}

fn load_plan(cli: &Cli) -> LabResult<Plan> {
    let mut plan = match &cli.plan {
        Some(p) => Plan::load(p)?,
        None => Plan::default(),
    };
    if let Some(seed) = cli.seed {
        plan.seed = seed;
    }
    if let Some(out) = &cli.out {
        plan.output_dir = Some(out.clone());
    }
    Ok(plan)
}

fn out_dir(plan: &Plan) -> PathBuf {
    plan.output_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn workers(cli: &Cli) -> usize {
    cli.workers
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn row_csv(row: &SweepRow) -> LabResult<String> {
    let bytes = sweep::to_csv(std::slice::from_ref(row))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn run(cli: &Cli) -> LabResult<bool> {
    let plan = load_plan(cli)?;
    let out = out_dir(&plan);
    match &cli.command {
        Command::DefaultPlan => {
            println!("{}", serde_json::to_string_pretty(&Plan::default())?);
            Ok(true)
        }
        Command::Bounds => {
            let rows = bounds::run_bounds(&plan.bounds)?;
            let path = out.join(BOUNDS_FILE);
            write_file(&path, &bounds::to_csv(&rows)?)?;
            for r in &rows {
                println!(
                    "eps={:<8} mlae_lower={:.2} cp={:.1} iqae={:.1} fae={:.1} cmc={:.1}",
                    r.epsilon, r.mlae_lower, r.cp_upper, r.iqae_upper, r.fae_upper, r.cmc
                );
            }
            eprintln!("wrote {}", path.display());
            Ok(true)
        }
        Command::Sweep => {
            let rows = sweep::run_sweep(&plan, workers(cli))?;
            let path = out.join(SWEEP_FILE);
            write_file(&path, &sweep::to_csv(&rows)?)?;
            let failed = rows.iter().filter(|r| r.is_error()).count();
            eprintln!("wrote {} ({} rows, {} with errors)", path.display(), rows.len(), failed);
            Ok(failed == 0)
        }
        Command::Tables => {
            let report = tables::run_tables(&plan, workers(cli))?;
            let json = serde_json::to_string_pretty(&report)? + "\n";
            let text = tables::render_text(&report);
            write_file(&out.join(TABLES_JSON), json.as_bytes())?;
            write_file(&out.join(TABLES_TEXT), text.as_bytes())?;
            print!("{text}");
            Ok(!report.has_errors())
        }
        Command::Plot { csv } => {
            let inputs: Vec<PathBuf> = match csv {
                Some(p) => vec![p.clone()],
                None => [BOUNDS_FILE, SWEEP_FILE]
                    .iter()
                    .map(|f| out.join(f))
                    .filter(|p| p.exists())
                    .collect(),
            };
            if inputs.is_empty() {
                return Err(LabError::Usage(format!("no CSV to plot in {}", out.display())));
            }
            for input in inputs {
                for written in plot::plot_csv(&input, &out)? {
                    eprintln!("wrote {}", written.display());
                }
            }
            Ok(true)
        }
        Command::Replay { row, csv } => {
            let recorded: Vec<SweepRow> = match csv {
                Some(p) => sweep::read_csv(p)?,
                None => Vec::new(),
            };
            let ids: Vec<String> = match row {
                Some(id) => vec![id.clone()],
                None if !recorded.is_empty() => recorded.iter().map(|r| r.row_id.clone()).collect(),
                None => return Err(LabError::Usage("replay needs --row or a non-empty --csv".into())),
            };
            let mut all_match = true;
            for id in ids {
                let fresh = sweep::run_row(&plan, RowKey::parse(&id)?)?;
                if let Some(old) = recorded.iter().find(|r| r.row_id == id) {
                    if row_csv(old)? == row_csv(&fresh)? {
                        eprintln!("{id}: identical");
                    } else {
                        eprintln!("{id}: MISMATCH");
                        all_match = false;
                    }
                } else if csv.is_some() {
                    eprintln!("{id}: not present in the CSV");
                    all_match = false;
                }
                if row.is_some() {
                    print!("{}", row_csv(&fresh)?);
                }
                all_match &= !fresh.is_error();
            }
            Ok(all_match)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
