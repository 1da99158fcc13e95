use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use crate::failure::{Failure, InputContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Writes rows as CSV with a header, or as a JSON array, to `out` or stdout.
pub fn emit<T: Serialize>(rows: &[T], format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path).input(format!("creating {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut sink);
            for row in rows {
                w.serialize(row).input("writing table")?;
            }
            w.flush().input("writing table")?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, rows).input("writing table")?;
            writeln!(sink).input("writing table")?;
        }
    }
    sink.flush().input("writing table")
}
