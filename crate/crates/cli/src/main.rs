use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use ssmach::api::{self, Outcome, RenderFormat, Reply};
use ssmach::validator::Mode;

mod serve;
mod template;

/// Parse, validate, render and diff ßMACH protocols.
#[derive(Parser)]
#[command(name = "ssmach", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Html,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a protocol and print one line per diagnostic.
    Check {
        path: PathBuf,
        /// Fail on open findings too.
        #[arg(long)]
        strict: bool,
        /// Print the report as JSON (same as POST /validate).
        #[arg(long)]
        json: bool,
    },
    /// Render a protocol as HTML or SVG.
    Render {
        path: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        /// Write here instead of standard output.
        #[arg(long)]
        out_path: Option<PathBuf>,
    },
    /// Compare two versions of a protocol. Exit 2 if they differ.
    Diff {
        old: PathBuf,
        new: PathBuf,
        /// Print the change set as JSON (same as POST /diff).
        #[arg(long)]
        json: bool,
    },
    /// Print the canonical form of a protocol.
    Fmt {
        path: PathBuf,
        #[arg(long)]
        write_in_place: bool,
    },
    /// Write an empty protocol template.
    Init { out_path: PathBuf },
    /// Serve the wire API on 127.0.0.1.
    Serve {
        #[arg(long, default_value_t = 7878)]
        port: u16,
    },
    /// Print the parsed protocol as JSON (same as POST /parse).
    Parse { path: PathBuf },
    /// Print rows, columns, statuses, rules and palette as JSON.
    Schema,
    /// Describe a validation rule.
    Explain { rule: String },
}

/// Failure before any document could be processed.
struct UsageError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.into())
    }
}

fn read(path: &Path) -> Result<String, UsageError> {
    Ok(fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?)
}

fn print(body: &str) -> Result<(), UsageError> {
    let mut out = std::io::stdout().lock();
    out.write_all(body.as_bytes())?;
    out.flush()?;
    Ok(())
}

/// Prints a reply the way the matching endpoint would send it.
fn emit(reply: Reply) -> Result<Outcome, UsageError> {
    print(&reply.body)?;
    Ok(reply.outcome)
}

/// Prints parse errors of `text` to standard error.
fn report_parse_errors(path: &Path, text: &str) -> Outcome {
    if let Err(errors) = ssmach::dsl::parse(text) {
        for e in errors {
            eprintln!("{}:{e}", path.display());
        }
    }
    Outcome::ParseErrors
}

fn run(command: Command) -> Result<Outcome, UsageError> {
    match command {
        Command::Check { path, strict, json } => {
            let text = read(&path)?;
            let mode = if strict { Mode::Strict } else { Mode::Default };
            if json {
                emit(api::validate(&text, mode))
            } else {
                let reply = api::check_lines(&text, mode);
                if reply.outcome == Outcome::ParseErrors {
                    return Ok(report_parse_errors(&path, &text));
                }
                emit(reply)
            }
        }
        Command::Render {
            path,
            format,
            out_path,
        } => {
            let text = read(&path)?;
            let format = match format {
                Format::Html => RenderFormat::Html,
                Format::Svg => RenderFormat::Svg,
            };
            let reply = api::render(&text, format);
            if reply.outcome == Outcome::ParseErrors {
                return Ok(report_parse_errors(&path, &text));
            }
            match out_path {
                Some(out) => {
                    fs::write(&out, &reply.body)
                        .with_context(|| format!("cannot write {}", out.display()))?;
                    Ok(reply.outcome)
                }
                None => emit(reply),
            }
        }
        Command::Diff { old, new, json } => {
            let (a, b) = (read(&old)?, read(&new)?);
            if json {
                return emit(api::diff(&a, &b));
            }
            let reply = api::diff_text(&a, &b);
            if reply.outcome == Outcome::ParseErrors {
                report_parse_errors(&old, &a);
                return Ok(report_parse_errors(&new, &b));
            }
            emit(reply)
        }
        Command::Fmt {
            path,
            write_in_place,
        } => {
            let text = read(&path)?;
            let Ok(formatted) = ssmach::dsl::format(&text) else {
                return Ok(report_parse_errors(&path, &text));
            };
            if write_in_place {
                if formatted != text {
                    fs::write(&path, formatted)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                }
            } else {
                print(&formatted)?;
            }
            Ok(Outcome::Ok)
        }
        Command::Init { out_path } => {
            let mut file = fs::OpenOptions::new()
                .write(true)
                .create_new(true)
                .open(&out_path)
                .with_context(|| format!("cannot create {}", out_path.display()))?;
            file.write_all(template::template().as_bytes())?;
            Ok(Outcome::Ok)
        }
        Command::Serve { port } => {
            serve::run(port).with_context(|| format!("cannot serve on port {port}"))?;
            Ok(Outcome::Ok)
        }
        Command::Parse { path } => emit(api::parse(&read(&path)?)),
        Command::Schema => emit(api::schema()),
        Command::Explain { rule } => {
            let text = ssmach::validator::explain(&rule)?;
            print(&format!("{text}\n"))?;
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(UsageError(e)) => {
            eprintln!("ssmach: {e:#}");
            ExitCode::from(Outcome::BadRequest.exit_code() as u8)
        }
    }
}
