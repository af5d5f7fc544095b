//! Command-line front end: parse state, code, and channel files, dispatch
//! to the library, and print text or JSON reports.
//!
//! Exit codes: 0 for success or a pass verdict, 1 for a fail verdict, 2
//! for unusable input. In JSON mode every command writes exactly one
//! object to standard output; errors go to standard error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use clap::{Parser, Subcommand};

use qrev_core::channel::QuantumChannel;
use qrev_core::densemath::ComplexMatrix;
use qrev_core::entropy::{
    channel_mutual_information, coherent_information, entanglement_fidelity, relative_entropy,
    vn_entropy, EntropyValue,
};
use qrev_core::json;
use qrev_core::qstate::{CodeSubspace, DensityOperator};
use qrev_core::verify::{
    check_kl, check_reversible, check_tradeoff, check_vanishing, petz_recovery, CheckReport,
    DEFAULT_TOL,
};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qrev",
    version,
    about = "Decide whether a quantum channel is reversible on a code subspace",
    arg_required_else_help = true
)]
struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Tolerance for verdicts and deviation checks.
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,

    /// Run one command per line from a job file; each line is
    /// `<command> <args...>` and may carry its own --tol.
    #[arg(long, value_name = "PATH")]
    batch: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

/// One job line of a batch file: the same grammar as the top level, minus
/// the program name and the batch flag.
#[derive(Parser)]
#[command(name = "job", no_binary_name = true, disable_help_flag = true)]
struct JobLine {
    #[arg(long)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse files and report what each one contains.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print a channel in Choi form.
    Choi { channel: PathBuf },
    /// Print a channel through its Kraus operators.
    Kraus { channel: PathBuf },
    /// Print the complementary channel into the environment.
    Complement { channel: PathBuf },
    /// Print the Stinespring dilation isometry of a channel.
    Stinespring { channel: PathBuf },
    /// Von Neumann entropy of a state, in bits.
    Entropy { state: PathBuf },
    /// Relative entropy D(rho || sigma), in bits.
    Relent { rho: PathBuf, sigma: PathBuf },
    /// Mutual information the channel retains with a reference purifying
    /// the state, in bits.
    Mutinfo { channel: PathBuf, state: PathBuf },
    /// Coherent information of the state through the channel, in bits.
    Coherent { channel: PathBuf, state: PathBuf },
    /// Entanglement fidelity of the state through the channel.
    Fidelity { channel: PathBuf, state: PathBuf },
    /// Petz transpose channel of a channel with respect to a prior state.
    Petz { channel: PathBuf, state: PathBuf },
    /// Check the Knill-Laflamme condition of a channel on a code.
    CheckKl { channel: PathBuf, code: PathBuf },
    /// Check reversibility of a channel on a code by the
    /// mutual-information criterion, corroborated by Petz recovery.
    CheckReversible { channel: PathBuf, code: PathBuf },
    /// Check that a channel carries no code information at all.
    CheckVanishing { channel: PathBuf, code: PathBuf },
    /// Check the information tradeoff between the two output factors
    /// (of dimensions DB and DC) of a channel on a code.
    Tradeoff {
        channel: PathBuf,
        code: PathBuf,
        db: usize,
        dc: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        eprintln!("error: --tol must be a positive finite number, got {tol}");
        return ExitCode::from(EXIT_INPUT);
    }
    match (cli.batch, cli.command) {
        (Some(path), None) => run_batch(&path, tol, cli.json),
        (None, Some(command)) => match run_command(&command, tol, cli.json) {
            Ok((output, code)) => {
                print!("{output}");
                ExitCode::from(code)
            }
            Err(message) => {
                eprintln!("error: {message}");
                ExitCode::from(EXIT_INPUT)
            }
        },
        (Some(_), Some(_)) => {
            eprintln!("error: --batch replaces the command; give one or the other");
            ExitCode::from(EXIT_INPUT)
        }
        (None, None) => {
            eprintln!("error: nothing to do; give a command or --batch FILE");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run_batch(path: &Path, default_tol: f64, json_mode: bool) -> ExitCode {
    let text = match read_file(path) {
        Ok(text) => text,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let jobs: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
        .collect();

    // All library calls are pure, so jobs fan out across worker threads;
    // output is reassembled in input order.
    let mut outcomes: Vec<Option<(String, String, u8)>> = Vec::new();
    outcomes.resize_with(jobs.len(), || None);
    let next = AtomicUsize::new(0);
    let (sender, receiver) = mpsc::channel();
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let sender = sender.clone();
            let jobs = &jobs;
            let next = &next;
            scope.spawn(move || loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= jobs.len() {
                    break;
                }
                let (line_no, line) = jobs[index];
                let _ = sender.send((index, run_job_line(line_no, line, default_tol, json_mode)));
            });
        }
    });
    drop(sender);
    for (index, outcome) in receiver {
        outcomes[index] = Some(outcome);
    }

    let mut exit = EXIT_PASS;
    for ((line_no, line), outcome) in jobs.iter().zip(outcomes) {
        let (output, errors, code) = outcome.expect("every job reports back");
        if !json_mode && !output.is_empty() {
            println!("# line {line_no}: {line}");
        }
        print!("{output}");
        if !errors.is_empty() {
            eprintln!("{errors}");
        }
        exit = exit.max(code);
    }
    ExitCode::from(exit)
}

fn run_job_line(
    line_no: usize,
    line: &str,
    default_tol: f64,
    json_mode: bool,
) -> (String, String, u8) {
    let job = match JobLine::try_parse_from(line.split_whitespace()) {
        Ok(job) => job,
        Err(err) => {
            return (
                String::new(),
                format!("line {line_no}: {err}"),
                EXIT_INPUT,
            )
        }
    };
    let tol = job.tol.unwrap_or(default_tol);
    if !(tol.is_finite() && tol > 0.0) {
        return (
            String::new(),
            format!("line {line_no}: --tol must be a positive finite number, got {tol}"),
            EXIT_INPUT,
        );
    }
    match run_command(&job.command, tol, json_mode) {
        Ok((output, code)) => (output, String::new(), code),
        Err(message) => (String::new(), format!("line {line_no}: {message}"), EXIT_INPUT),
    }
}

/// Runs one command, returning its standard output and exit code, or an
/// error message destined for standard error.
fn run_command(command: &Command, tol: f64, json_mode: bool) -> Result<(String, u8), String> {
    match command {
        Command::Validate { files } => validate_files(files, json_mode),
        Command::Choi { channel } => {
            let ch = load_channel(channel)?;
            let output = if json_mode {
                line(json::choi_to_json(&ch))
            } else {
                format!(
                    "channel {} -> {}, choi matrix (unit trace):\n{}",
                    ch.in_dim(),
                    ch.out_dim(),
                    format_matrix(ch.choi())
                )
            };
            Ok((output, EXIT_PASS))
        }
        Command::Kraus { channel } => {
            let ch = load_channel(channel)?;
            Ok((render_channel(&ch, json_mode), EXIT_PASS))
        }
        Command::Complement { channel } => {
            let ch = load_channel(channel)?;
            Ok((render_channel(&ch.complement(), json_mode), EXIT_PASS))
        }
        Command::Stinespring { channel } => {
            let ch = load_channel(channel)?;
            let output = if json_mode {
                line(json::stinespring_to_json(&ch))
            } else {
                format!(
                    "isometry from {} into {} x {} (output x environment):\n{}",
                    ch.in_dim(),
                    ch.out_dim(),
                    ch.env_dim(),
                    format_matrix(&ch.stinespring())
                )
            };
            Ok((output, EXIT_PASS))
        }
        Command::Entropy { state } => {
            let rho = load_state(state)?;
            Ok((render_bits(&vn_entropy(&rho), json_mode), EXIT_PASS))
        }
        Command::Relent { rho, sigma } => {
            let rho_op = load_state(rho)?;
            let sigma_op = load_state(sigma)?;
            let value = relative_entropy(&rho_op, &sigma_op).map_err(|e| e.to_string())?;
            Ok((render_bits(&value, json_mode), EXIT_PASS))
        }
        Command::Mutinfo { channel, state } => {
            let ch = load_channel(channel)?;
            let rho = load_state(state)?;
            let value = channel_mutual_information(&rho, &ch).map_err(|e| e.to_string())?;
            Ok((render_bits(&value, json_mode), EXIT_PASS))
        }
        Command::Coherent { channel, state } => {
            let ch = load_channel(channel)?;
            let rho = load_state(state)?;
            let value = coherent_information(&rho, &ch).map_err(|e| e.to_string())?;
            Ok((render_bits(&value, json_mode), EXIT_PASS))
        }
        Command::Fidelity { channel, state } => {
            let ch = load_channel(channel)?;
            let rho = load_state(state)?;
            let value = entanglement_fidelity(&rho, &ch).map_err(|e| e.to_string())?;
            let output = if json_mode {
                line(serde_json::json!({ "value": value }).to_string())
            } else {
                format!("{value:.12}\n")
            };
            Ok((output, EXIT_PASS))
        }
        Command::Petz { channel, state } => {
            let ch = load_channel(channel)?;
            let sigma = load_state(state)?;
            let recovery = petz_recovery(&ch, &sigma).map_err(|e| e.to_string())?;
            Ok((render_channel(&recovery, json_mode), EXIT_PASS))
        }
        Command::CheckKl { channel, code } => {
            let ch = load_channel(channel)?;
            let code = load_code(code)?;
            let (report, _) = check_kl(&ch, &code, tol).map_err(|e| e.to_string())?;
            Ok(render_report(&report, json_mode))
        }
        Command::CheckReversible { channel, code } => {
            let ch = load_channel(channel)?;
            let code = load_code(code)?;
            let report = check_reversible(&ch, &code, tol).map_err(|e| e.to_string())?;
            Ok(render_report(&report, json_mode))
        }
        Command::CheckVanishing { channel, code } => {
            let ch = load_channel(channel)?;
            let code = load_code(code)?;
            let report = check_vanishing(&ch, &code, tol).map_err(|e| e.to_string())?;
            Ok(render_report(&report, json_mode))
        }
        Command::Tradeoff {
            channel,
            code,
            db,
            dc,
        } => {
            let ch = load_channel(channel)?;
            let code = load_code(code)?;
            let report = check_tradeoff(&ch, (*db, *dc), &code, tol).map_err(|e| e.to_string())?;
            Ok(render_report(&report, json_mode))
        }
    }
}

fn validate_files(files: &[PathBuf], json_mode: bool) -> Result<(String, u8), String> {
    let mut entries = Vec::new();
    for path in files {
        let parsed = json::parse_any(&read_file(path)?)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        entries.push((path, parsed));
    }
    if json_mode {
        let described: Vec<serde_json::Value> = entries
            .iter()
            .map(|(path, parsed)| {
                let mut entry = serde_json::json!({
                    "path": path.display().to_string(),
                    "kind": parsed.kind(),
                });
                let extra = match parsed {
                    json::ParsedInput::State(rho) => serde_json::json!({
                        "dim": rho.dim(),
                        "rank": rho.rank(),
                    }),
                    json::ParsedInput::Code(code) => serde_json::json!({
                        "ambient_dim": code.ambient_dim(),
                        "logical_dim": code.logical_dim(),
                    }),
                    json::ParsedInput::Channel(ch) => serde_json::json!({
                        "in_dim": ch.in_dim(),
                        "out_dim": ch.out_dim(),
                        "kraus_count": ch.kraus().len(),
                    }),
                };
                entry
                    .as_object_mut()
                    .unwrap()
                    .extend(extra.as_object().unwrap().clone());
                entry
            })
            .collect();
        Ok((
            line(serde_json::json!({ "files": described }).to_string()),
            EXIT_PASS,
        ))
    } else {
        let mut output = String::new();
        for (path, parsed) in &entries {
            let description = match parsed {
                json::ParsedInput::State(rho) => {
                    format!("state, dim {}, rank {}", rho.dim(), rho.rank())
                }
                json::ParsedInput::Code(code) => format!(
                    "code, {} logical in {} ambient",
                    code.logical_dim(),
                    code.ambient_dim()
                ),
                json::ParsedInput::Channel(ch) => format!(
                    "channel, {} -> {}, {} kraus operators",
                    ch.in_dim(),
                    ch.out_dim(),
                    ch.kraus().len()
                ),
            };
            output.push_str(&format!("{}: {description}\n", path.display()));
        }
        Ok((output, EXIT_PASS))
    }
}

fn render_channel(ch: &QuantumChannel, json_mode: bool) -> String {
    if json_mode {
        return line(json::channel_to_json(ch));
    }
    let mut output = format!(
        "channel {} -> {}, {} kraus operators:\n",
        ch.in_dim(),
        ch.out_dim(),
        ch.kraus().len()
    );
    for (index, k) in ch.kraus().iter().enumerate() {
        output.push_str(&format!("K{index}:\n{}", format_matrix(k)));
    }
    output
}

fn render_bits(value: &EntropyValue, json_mode: bool) -> String {
    if json_mode {
        let encoded = match value.bits() {
            Some(v) => serde_json::json!(v),
            None => serde_json::json!("inf"),
        };
        line(serde_json::json!({ "value": encoded, "unit": "bits" }).to_string())
    } else {
        match value.bits() {
            Some(v) => format!("{v:.12} bits\n"),
            None => "inf\n".to_string(),
        }
    }
}

fn render_report(report: &CheckReport, json_mode: bool) -> (String, u8) {
    let code = if report.pass() { EXIT_PASS } else { EXIT_FAIL };
    if json_mode {
        return (line(json::report_to_json(report)), code);
    }
    let mut output = format!(
        "verdict: {}\nmethod: {}\ntolerance: {:e}\n",
        report.verdict().as_str(),
        report.method(),
        report.tolerance()
    );
    for (name, value) in report.quantities() {
        output.push_str(&format!("  {name}: {value:.12e}\n"));
    }
    (output, code)
}

fn format_matrix(m: &ComplexMatrix) -> String {
    let mut output = String::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let z = m.get(r, c);
            output.push_str(&format!("  {:>12.8}{:+.8}i", z.re, z.im));
        }
        output.push('\n');
    }
    output
}

fn line(mut text: String) -> String {
    text.push('\n');
    text
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_channel(path: &Path) -> Result<QuantumChannel, String> {
    json::parse_channel(&read_file(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_state(path: &Path) -> Result<DensityOperator, String> {
    json::parse_state(&read_file(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_code(path: &Path) -> Result<CodeSubspace, String> {
    json::parse_code(&read_file(path)?).map_err(|e| format!("{}: {e}", path.display()))
}
