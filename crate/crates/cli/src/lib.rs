//! The `cmapx` command-line front end: input documents, command dispatch and
//! reports.
//!
//! Exit codes: 0 on success, 1 for validation errors, unmet preconditions or
//! failed verification identities, 2 when a computation limit was reached.

#![allow(clippy::type_complexity)]

pub mod commands;
pub mod doc;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::Parser;
use serde_json::Value;

use cmapx_core::error::Error as CoreError;
use cmapx_core::exec::Exec;
use cmapx_core::field::{FieldSpec, PrimeField, Rationals};
use cmapx_core::suite::{self, SuiteReport};

use commands::{Cli, Command, Format, Suite};
use doc::{Document, Source};
use report::{Obj, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;

/// Exit code for an error: 2 for computation limits, 1 otherwise.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if let Some(CoreError::Limit(_)) = cause.downcast_ref::<CoreError>() {
            return EXIT_LIMIT;
        }
    }
    EXIT_INVALID
}

fn echo(args: &[OsString]) -> String {
    args.iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ")
}

fn suite_value(reports: &[SuiteReport]) -> Value {
    let suites: Vec<Value> = reports
        .iter()
        .map(|r| {
            let ids: Vec<Value> = r
                .identities
                .iter()
                .map(|i| {
                    Obj::new()
                        .set("name", i.name.clone())
                        .set("lhs", i.lhs.clone())
                        .set("rhs", i.rhs.clone())
                        .set("pass", i.pass)
                        .build()
                })
                .collect();
            Obj::new()
                .set("suite", r.suite.clone())
                .set("passed", r.passed())
                .set("identities", ids)
                .build()
        })
        .collect();
    let total: usize = reports.iter().map(|r| r.identities.len()).sum();
    let failed: usize = reports.iter().map(|r| r.failures().len()).sum();
    Obj::new()
        .set("identities", total)
        .set("failed", failed)
        .set("suites", suites)
        .build()
}

/// One line per identity, both sides printed.
fn suite_text(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("suite {}\n", r.suite));
        for i in &r.identities {
            let tag = if i.pass { "ok  " } else { "FAIL" };
            let lhs = i.lhs.replace('\n', "; ");
            out.push_str(&format!("  [{tag}] {}: {lhs} | {}\n", i.name, i.rhs));
        }
    }
    let total: usize = reports.iter().map(|r| r.identities.len()).sum();
    let failed: usize = reports.iter().map(|r| r.failures().len()).sum();
    out.push_str(&format!("{} of {total} identities hold\n", total - failed));
    out
}

fn verify(suite: &Suite, exec: Exec) -> anyhow::Result<Vec<SuiteReport>> {
    Ok(match suite {
        Suite::Veronese { m } => vec![suite::veronese(*m, exec)?],
        Suite::Knorrer => suite::knorrer_suite(exec)?,
        Suite::Obstruction { cap } => vec![suite::obstruction_suite(*cap, exec)?],
        Suite::Omap => vec![suite::omap_suite(exec)?],
    })
}

/// Runs a parsed command line and returns its report.
pub fn execute(cli: &Cli, command_echo: String) -> anyhow::Result<Report> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Verify { suite } => {
            if cli.field.is_some() || cli.order.is_some() {
                anyhow::bail!("verification suites run over GF(32003) with grevlex; --field and --order do not apply");
            }
            let reports = verify(suite, exec)?;
            let passed = reports.iter().all(|r| r.passed());
            let mut r = Report::new(
                command_echo,
                FieldSpec::Prime(FieldSpec::DEFAULT_PRIME).to_string(),
                "grevlex".into(),
                suite_value(&reports),
            );
            r.passed = passed;
            r.text = Some(suite_text(&reports));
            r
        }
        cmd => {
            let path = cmd.input().expect("document commands take a file");
            let src = Source::load(path)?;
            let spec = src.field_spec(cli.field.as_deref())?;
            let order = src.order(cli.order.as_deref())?;
            let order_name = order.to_string();
            let results = match &spec {
                FieldSpec::Prime(p) => {
                    let d = Document::new(src, PrimeField::new(*p)?, order, exec);
                    commands::evaluate(&d, cmd, exec)?
                }
                FieldSpec::Rationals => {
                    let d = Document::new(src, Rationals, order, exec);
                    commands::evaluate(&d, cmd, exec)?
                }
            };
            Report::new(command_echo, spec.to_string(), order_name, results)
        }
    };
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Entry point: parses `args`, runs, writes the report, returns the exit code.
pub fn run(args: Vec<OsString>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, echo(&args)) {
        Ok(report) => {
            let text = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &text).map_err(|e| format!("cannot write {}: {e}", p.display())),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return EXIT_INVALID;
            }
            if report.passed {
                EXIT_OK
            } else {
                EXIT_INVALID
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}
