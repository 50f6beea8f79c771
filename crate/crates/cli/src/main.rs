use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sgzeta_cli::{
    closed_form, compute, groups_listing, load_group_file, render_csv, render_json, resolve,
    verify, verify_all, CliError, Format, Mode, ResolvedGroup, TableOutput, VerifyReport,
    ENUMERATE_WARN_LIMIT,
};

/// Subgroup and normal subgroup counts for the space groups with point group of order 2.
#[derive(Debug, Parser)]
#[command(name = "sgzeta", version)]
struct Cli {
    /// JSON group definition (name, rank, row-major action, square_word) used
    /// in place of --group.
    #[arg(long, global = true, value_name = "PATH")]
    group_file: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the builtin groups and the family syntax.
    Groups,
    /// Tabulate a_n (or c_n with --normal) for n = 1..=max.
    Table {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        max: usize,
        #[arg(long)]
        normal: bool,
        #[arg(long, value_enum, default_value_t = Mode::Formula)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare formula, series and enumeration; exit 1 on any mismatch.
    Verify {
        /// A group id, or `all` for the eight builtins.
        #[arg(long, default_value = "all")]
        group: String,
        #[arg(long, default_value_t = 48)]
        max: usize,
        #[arg(long)]
        normal: bool,
    },
    /// Print the closed-form zeta (or normal zeta) function.
    ClosedForm {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        normal: bool,
    },
}

fn select(group: Option<&str>, file: Option<&PathBuf>) -> Result<ResolvedGroup, CliError> {
    match (group, file) {
        (_, Some(path)) => load_group_file(path),
        (Some(name), None) => resolve(name),
        (None, None) => Err(CliError::Usage(
            "either --group or --group-file is required".to_string(),
        )),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let file = cli.group_file.as_ref();
    let mut stdout = std::io::stdout().lock();
    let mut emit = |text: &str| {
        // a closed pipe is not worth a panic
        let _ = stdout.write_all(text.as_bytes());
    };
    match cli.command {
        Command::Groups => emit(&groups_listing()),
        Command::Table {
            group,
            max,
            normal,
            mode,
            format,
        } => {
            let resolved = select(group.as_deref(), file)?;
            if mode == Mode::Enumerate && max > ENUMERATE_WARN_LIMIT {
                eprintln!(
                    "warning: enumerating up to n = {max} may take a long time (suggested limit {ENUMERATE_WARN_LIMIT})"
                );
            }
            let counts = compute(&resolved, max, normal, mode)?;
            match format {
                Format::Csv => emit(&render_csv(&counts)),
                Format::Json => emit(&render_json(&TableOutput {
                    group: resolved.label().to_string(),
                    normal,
                    mode,
                    max,
                    counts,
                })),
            }
        }
        Command::Verify { group, max, normal } => {
            if max == 0 {
                return Err(CliError::ZeroMax);
            }
            let reports: Vec<VerifyReport> = if file.is_none() && group == "all" {
                verify_all(max, normal)?
            } else {
                vec![verify(&select(Some(&group), file)?, max, normal)?]
            };
            for report in &reports {
                emit(&report.to_string());
            }
            if !reports.iter().all(VerifyReport::success) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::ClosedForm { group, normal } => {
            let resolved = select(group.as_deref(), file)?;
            let id = resolved
                .reference
                .ok_or_else(|| CliError::NoReference(resolved.label().to_string()))?;
            emit(&format!("{}\n", closed_form(id, normal)?));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
