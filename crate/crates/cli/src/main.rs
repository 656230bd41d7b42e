//! Command-line front end: runs scenario configs, dumps the generator
//! algebra, and executes the verification suite.
//!
//! Exit status: 0 on success, 1 for config errors, 2 for numeric failures.

mod config;
mod output;
mod scenarios;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use octet_core::generators::{gell_mann_set, pauli_set, structure_constants, GeneratorSet};
use octet_core::verify::{run as run_verify, Mutation};

use config::{OutputFormat, Scenario, ScenarioConfig};
use output::fmt_float;
use scenarios::{run_berry_loop, run_dephasing3, run_polarization};

#[derive(Parser)]
#[command(
    name = "octet",
    about = "Three-level open quantum systems on the eight-dimensional Bloch sphere",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct ScenarioArgs {
    /// Path to a JSON scenario configuration.
    config: PathBuf,
    /// Write the table here instead of the config's output_path / stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the config's output format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Suppress the run report on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the qutrit dephasing model (scenario "dephasing3").
    Evolve(ScenarioArgs),
    /// Compute geometric phases around a closed loop (scenario "berry_loop").
    Phase(ScenarioArgs),
    /// Run a depolarization model (scenario "polarization").
    Polarization(ScenarioArgs),
    /// Run the invariant self-check suite.
    Verify {
        /// Suppress the per-group report; only the exit status remains.
        #[arg(long)]
        quiet: bool,
        /// Corrupt the λ₂ fixture to exercise the failure path.
        #[arg(long, hide = true)]
        inject_lambda2_sign_flip: bool,
    },
    /// Generator-algebra utilities.
    Generators {
        #[command(subcommand)]
        command: GeneratorsCommand,
    },
}

#[derive(Subcommand)]
enum GeneratorsCommand {
    /// Emit the Pauli and Gell-Mann matrices and the nonzero f/d structure
    /// constants as JSON.
    Dump {
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERIC: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Evolve(args) => run_scenario_command(args, Scenario::Dephasing3),
        Command::Phase(args) => run_scenario_command(args, Scenario::BerryLoop),
        Command::Polarization(args) => run_scenario_command(args, Scenario::Polarization),
        Command::Verify {
            quiet,
            inject_lambda2_sign_flip,
        } => verify_command(quiet, inject_lambda2_sign_flip),
        Command::Generators {
            command: GeneratorsCommand::Dump { output },
        } => dump_generators(output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

type CommandResult = Result<(), (u8, String)>;

fn run_scenario_command(args: ScenarioArgs, expected: Scenario) -> CommandResult {
    let text = fs::read_to_string(&args.config).map_err(|err| {
        (
            EXIT_CONFIG,
            format!("cannot read {}: {err}", args.config.display()),
        )
    })?;
    let config = ScenarioConfig::parse(&text).map_err(|err| (EXIT_CONFIG, err))?;
    if config.scenario != expected {
        return Err((
            EXIT_CONFIG,
            format!(
                "this subcommand runs scenario {expected}, but the config declares {}",
                config.scenario
            ),
        ));
    }

    let (table, report) = match config.scenario {
        Scenario::Dephasing3 => run_dephasing3(&config),
        Scenario::BerryLoop => run_berry_loop(&config),
        Scenario::Polarization => run_polarization(&config),
    }
    .map_err(|err| (EXIT_NUMERIC, err.to_string()))?;

    let format = match args.format {
        Some(FormatArg::Csv) => OutputFormat::Csv,
        Some(FormatArg::Json) => OutputFormat::Json,
        None => config.format,
    };
    let rendered = match format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => table.to_json(&config.scenario.to_string()),
    }
    .map_err(|err| (EXIT_NUMERIC, err.to_string()))?;

    let destination = args
        .output
        .or_else(|| config.output_path.as_ref().map(PathBuf::from));
    write_output(destination, &rendered)?;
    if !args.quiet {
        eprint!("{}", report.render());
    }
    Ok(())
}

fn verify_command(quiet: bool, mutate: bool) -> CommandResult {
    let mutation = mutate.then_some(Mutation::FlipLambda2Sign);
    let report = run_verify(mutation);
    if !quiet {
        print!("{}", report.render());
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err((EXIT_NUMERIC, "verification failed".to_string()))
    }
}

fn write_output(destination: Option<PathBuf>, rendered: &str) -> CommandResult {
    match destination {
        Some(path) => fs::write(&path, rendered).map_err(|err| {
            (
                EXIT_NUMERIC,
                format!("cannot write {}: {err}", path.display()),
            )
        }),
        None => {
            print!("{rendered}");
            std::io::stdout()
                .flush()
                .map_err(|err| (EXIT_NUMERIC, format!("cannot write stdout: {err}")))
        }
    }
}

fn json_matrix(m: &octet_core::ComplexMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols())
                .map(|j| {
                    let e = m[(i, j)];
                    format!("[{}, {}]", fmt_float(e.re), fmt_float(e.im))
                })
                .collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn json_generator_list(set: &GeneratorSet) -> String {
    let matrices: Vec<String> = set.matrices().iter().map(json_matrix).collect();
    format!("[\n    {}\n  ]", matrices.join(",\n    "))
}

fn json_tensor_entries(entries: &[(usize, usize, usize, f64)]) -> String {
    if entries.is_empty() {
        return "[]".to_string();
    }
    let rendered: Vec<String> = entries
        .iter()
        .map(|&(r, s, t, value)| {
            format!(
                "{{\"indices\": [{r}, {s}, {t}], \"value\": {}}}",
                fmt_float(value)
            )
        })
        .collect();
    format!("[\n    {}\n  ]", rendered.join(",\n    "))
}

fn dump_generators(output: Option<PathBuf>) -> CommandResult {
    let constants = structure_constants();
    let rendered = format!(
        "{{\n  \"pauli\": {},\n  \"gell_mann\": {},\n  \"f\": {},\n  \"d\": {}\n}}\n",
        json_generator_list(&pauli_set()),
        json_generator_list(&gell_mann_set()),
        json_tensor_entries(&constants.nonzero_f(1e-14)),
        json_tensor_entries(&constants.nonzero_d(1e-14)),
    );
    write_output(output, &rendered)
}
