use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use scpkit_cli::{format_report, run_bytes, Format, Report};

#[derive(Clone, Copy, ValueEnum)]
enum Command {
    Check,
    Complete,
    Translate,
    Relations,
    Obstruct,
    Hypo,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

/// Exact subnormal completion and moment-problem solver.
///
/// Exit codes: 0 solved/feasible, 1 no completion or obstructed, 2 input error or
/// unsupported input, 3 internal consistency failure.
#[derive(Parser)]
#[command(name = "scpkit", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Instance JSON file; stdin when absent or `-`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: OutFormat,
    /// Completion depth, overriding the instance.
    #[arg(long)]
    depth: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_input(path: &Option<PathBuf>) -> io::Result<Vec<u8>> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read(p),
        _ => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.to_possible_value().expect("no skipped variants").get_name().to_string();
    let report = match read_input(&cli.input) {
        Ok(bytes) => run_bytes(&command, &bytes, cli.depth),
        Err(e) => {
            let mut r = Report::new(&command, "unknown", "input_error");
            r.message = Some(format!("cannot read input: {e}"));
            r
        }
    };
    let mode = match cli.format {
        OutFormat::Json => Format::Json,
        OutFormat::Text => Format::Text,
    };
    let text = format_report(&report, mode);
    let written = match &cli.out {
        Some(p) => fs::write(p, &text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("scpkit: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code() as u8)
}
