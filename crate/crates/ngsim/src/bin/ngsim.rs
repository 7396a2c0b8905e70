use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ngsim::apps::{boson_sampling_csv, report_table};
use ngsim::fock::oracle_born;
use ngsim::program::{parse_program, run, Cx, InitialState, Program, ProgramError, ResultDoc, Task, SCHEMA_VERSION};
use ngsim::states::BREEDING_TABLE;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "ngsim", version, allow_negative_numbers = true, about = "Simulate non-Gaussian optics with Gaussian superpositions")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sparsification precision; `born` switches to the sparsified estimator when set.
    #[arg(long, global = true)]
    delta: Option<f64>,
    #[arg(long, global = true, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, global = true, default_value_t = 0.05)]
    pfail: f64,
    /// Width of the coherent-state ensemble for norm estimation.
    #[arg(long = "ensemble-n", global = true)]
    ensemble_n: Option<f64>,
    /// Fock cutoff per mode for the oracle cross-check of `born`.
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a program file.
    Run { file: String },
    /// Rank, l1 and extent bound of a state given as JSON, e.g. '{"kind":"cat","alpha":1}'.
    Extent { state: String },
    /// Fast norm estimate of a state.
    Norm { state: String },
    /// Heterodyne density of a single-mode state at an outcome.
    #[command(allow_negative_numbers = true)]
    Born {
        state: String,
        #[arg(long, default_value_t = 0.0)]
        re: f64,
        #[arg(long, default_value_t = 0.0)]
        im: f64,
    },
    #[command(allow_negative_numbers = true)]
    BreedBound { xi: f64 },
    BsBound { m: u32 },
    OptimizeFidelity {
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
    },
    Table1,
}

fn state_arg(s: &str) -> Result<InitialState, ProgramError> {
    serde_json::from_str(s).map_err(|e| ProgramError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

fn program(cli: &Cli, initial: InitialState, task: Task) -> Program {
    Program { schema_version: SCHEMA_VERSION, modes: 1, seed: cli.seed, initial, ops: vec![], task }
}

fn emit(doc: &ResultDoc, f: Format) {
    let text = match f {
        Format::Json => serde_json::to_string_pretty(doc).expect("result serialises") + "\n",
        Format::Csv => doc.to_csv(),
    };
    // a closed pipe is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main_inner(cli: &Cli) -> Result<(), ProgramError> {
    let doc = match &cli.cmd {
        Cmd::Run { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| ProgramError::Validation { field: "file".into(), message: e.to_string() })?;
            run(&parse_program(&text)?)?
        }
        Cmd::Extent { state } => run(&program(cli, state_arg(state)?, Task::Extent { approx_delta: cli.delta }))?,
        Cmd::Norm { state } => run(&program(
            cli,
            state_arg(state)?,
            Task::Norm { epsilon: cli.epsilon, pfail: cli.pfail, ensemble_n: cli.ensemble_n },
        ))?,
        Cmd::Born { state, re, im } => {
            let x = vec![Cx::Pair([*re, *im])];
            let task = match cli.delta {
                Some(delta) => Task::ApproxBorn {
                    modes: vec![0],
                    outcome: x,
                    delta,
                    epsilon: cli.epsilon,
                    pfail: cli.pfail,
                    ensemble_n: cli.ensemble_n,
                },
                None => Task::ExactBorn { modes: vec![0], outcome: x },
            };
            let p = program(cli, state_arg(state)?, task);
            let mut doc = run(&p)?;
            if let Some(k) = cli.cutoff {
                let sup = ngsim::program::initial_superposition(&p)?;
                let v = sup.to_fock(&[k])?;
                let o = oracle_born(&v, &[0], &[ngsim::linalg::c(*re, *im)])?;
                doc.details["oracle_value"] = serde_json::json!(o);
                doc.details["oracle_leakage"] = serde_json::json!(v.leakage());
            }
            doc
        }
        Cmd::BreedBound { xi } => run(&program(cli, InitialState::Vacuum, Task::BreedBound { xi: *xi }))?,
        Cmd::BsBound { m } => {
            if let Format::Csv = cli.format {
                print!("{}", boson_sampling_csv(*m));
                return Ok(());
            }
            run(&program(cli, InitialState::Vacuum, Task::BsBound { m: *m }))?
        }
        Cmd::OptimizeFidelity { restarts, budget } => run(&program(
            cli,
            InitialState::Vacuum,
            Task::OptimizeFidelity { restarts: *restarts, budget: *budget },
        ))?,
        Cmd::Table1 => {
            if let Format::Csv = cli.format {
                let rows = report_table(&BREEDING_TABLE.iter().map(|r| r.0).collect::<Vec<_>>())?;
                println!("delta,naive_extent,table_extent,table_n,breeding_from_table,breeding_from_naive");
                for r in rows {
                    println!(
                        "{},{:.6},{},{},{},{}",
                        r.delta,
                        r.naive_extent,
                        r.table_extent.map(|x| x.to_string()).unwrap_or_default(),
                        r.table_n.map(|x| x.to_string()).unwrap_or_default(),
                        r.breeding_from_table.map(|x| x.to_string()).unwrap_or_default(),
                        r.breeding_from_naive
                    );
                }
                return Ok(());
            }
            run(&program(cli, InitialState::Vacuum, Task::Table1 { deltas: None }))?
        }
    };
    emit(&doc, cli.format);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match main_inner(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
