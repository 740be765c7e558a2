use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A finished report in all three renderings, plus the exit code it implies.
pub struct Output {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub text: String,
    pub code: u8,
}

pub fn emit(out: &Output, format: Format) -> anyhow::Result<()> {
    let stdout = io::stdout();
    let mut w = stdout.lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &out.json)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(&out.header)?;
            for row in &out.rows {
                csv.write_record(row)?;
            }
            csv.flush()?;
        }
        Format::Text => write!(w, "{}", out.text)?,
    }
    w.flush()?;
    Ok(())
}

pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn modulus_text(m: &[u64]) -> String {
    m.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}
