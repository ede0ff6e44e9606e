//! Library side of the `quadclass` command-line tool.
//!
//! [`run`] turns parsed arguments into a [`Table`] of records; the binary
//! renders it and derives the exit status from the worst row.

pub mod args;
pub mod commands;
pub mod table;

use thiserror::Error;

pub use args::{Cli, Command, GlobalOpts};
pub use commands::Context;
pub use table::{Cell, Column, Format, Kind, Status, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_RED_FLAG: i32 = 2;
pub const EXIT_SKIPPED: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] quadclass_core::Error),
    #[error(transparent)]
    Db(#[from] quadclass_dbcheck::DbError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("parse: {0}")]
    Parse(String),
}

pub fn run(cli: &Cli) -> Result<Table, CliError> {
    let ctx = Context::new(&cli.global)?;
    commands::run_command(&cli.command, &ctx)
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Ok => EXIT_OK,
        Status::RedFlag => EXIT_RED_FLAG,
        Status::Skipped => EXIT_SKIPPED,
    }
}
