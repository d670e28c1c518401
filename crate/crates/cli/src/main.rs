mod args;
mod commands;
mod output;
mod params;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use params::{load_config, Axis, CliError, CliResult, FileConfig, Params};

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("LOTTO_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("LOTTO_LAB_THREADS={raw} is not a count")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

fn default_format(command: &str, out: Option<&PathBuf>) -> Format {
    match out.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        _ if matches!(command, "sweep" | "level-curve") => Format::Csv,
        _ => Format::Json,
    }
}

fn run() -> CliResult<()> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                print!("{e}");
                return Ok(());
            }
            _ => return Err(CliError::Validation(e.to_string())),
        },
    };
    configure_threads()?;
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => FileConfig::default(),
    };

    let (name, flags, sweep) = match &cli.command {
        Some(Command::Sweep(s)) => ("sweep".to_string(), s.params.given(), Some(s)),
        Some(Command::Stage2(a))
        | Some(Command::Spe(a))
        | Some(Command::LevelCurve(a))
        | Some(Command::Ratio(a))
        | Some(Command::Invest(a))
        | Some(Command::Stackelberg(a))
        | Some(Command::Verify(a)) => (
            cli.command.as_ref().unwrap().name().to_string(),
            a.given(),
            None,
        ),
        None => match &file.command {
            Some(c) => (c.clone(), Vec::new(), None),
            None => return Err(CliError::Validation("no command given".into())),
        },
    };
    let mut flags = flags;
    if let Some(cmd) = sweep.and_then(|s| s.cmd.clone()) {
        flags.push(("cmd", serde_json::Value::String(cmd)));
    }
    let params = Params::merge(&file.params, flags)?;

    let table = if name == "sweep" {
        let cmd = params.strings("cmd")?;
        let [cmd] = cmd.as_slice() else {
            return Err(CliError::Validation("sweep needs --cmd".into()));
        };
        let flag_axes = sweep.map(|s| s.axis.as_slice()).unwrap_or(&[]);
        let axes = if flag_axes.is_empty() {
            file.sweep.clone()
        } else {
            flag_axes
                .iter()
                .map(|a| Axis::parse(a))
                .collect::<CliResult<Vec<_>>>()?
        };
        commands::sweep(cmd, &axes, &params)?
    } else {
        commands::dispatch(&name, &params)?
    };

    let file_out = file.output.unwrap_or_default();
    let out = cli.out.or(file_out.path);
    let format = cli
        .format
        .or(file_out.format)
        .unwrap_or_else(|| default_format(&name, out.as_ref()));
    let bytes = output::render(&table, format)?;
    match &out {
        Some(path) => output::write_atomic(path, &bytes)?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io(e.to_string()))?,
    }

    let failed = commands::failed_checks(&table);
    if name == "verify" && failed > 0 {
        return Err(CliError::Verification(failed));
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
