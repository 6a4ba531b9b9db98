mod args;
mod commands;
mod output;
mod sweep;
mod validate;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, OutputFormat};
use commands::CliError;
use output::{write_csv, Record};

fn emit(record: &Record, format: OutputFormat) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        OutputFormat::Json => writeln!(out, "{}", record.to_json()),
        OutputFormat::Csv => {
            let header: Vec<String> = record.keys().map(str::to_string).collect();
            write_csv(&mut out, &header, std::slice::from_ref(record)).map_err(io::Error::other)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let single = |r: Result<Record, CliError>, format| -> Result<u8, CliError> {
        emit(&r?, format).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(0)
    };
    match cli.command {
        Command::PlatesForce(a) => single(commands::plates_force(&commands::planar_point(&a)?, a.common.tol), a.common.output),
        Command::PlatesEnergy(a) => single(commands::plates_energy(&commands::planar_point(&a)?, a.common.tol), a.common.output),
        Command::ParticlePotential(a) => {
            let p = commands::planar_point(&a.planar)?;
            single(commands::particle(&p, a.alpha, a.planar.common.tol), a.planar.common.output)
        }
        Command::SpheresEnergy(a) => single(commands::spheres(&commands::resolve_sphere(&a)?, a.common.tol), a.common.output),
        Command::Correlation(a) => single(commands::correlation(&a), a.planar.common.output),
        Command::Sweep(a) => {
            let (header, rows) = sweep::run(&a)?;
            let stdout = io::stdout();
            let mut out = stdout.lock();
            let written = match a.output {
                OutputFormat::Csv => write_csv(&mut out, &header, &rows).map_err(io::Error::other),
                OutputFormat::Json => {
                    let list: Vec<_> = rows.iter().map(Record::to_json).collect();
                    writeln!(out, "{}", serde_json::Value::Array(list))
                }
            };
            written.map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(0)
        }
        Command::Validate(a) => {
            let checks = validate::run(&validate::Options {
                quick: a.quick,
                perturb_reflection: a.perturb_reflection,
            });
            if a.json {
                let list: Vec<_> = checks.iter().map(|c| c.record().to_json()).collect();
                println!("{}", serde_json::Value::Array(list));
            } else {
                print!("{}", validate::table(&checks));
            }
            Ok(if checks.iter().all(|c| c.passed) { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
