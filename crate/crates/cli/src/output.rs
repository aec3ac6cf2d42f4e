use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::Result;
use serde_json::Value;

use crate::args::Format;

/// A rendered command result in all three formats.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub exit: i32,
}

impl Output {
    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        Ok(match format {
            Format::Json => {
                let mut s = serde_json::to_vec_pretty(&self.json)?;
                s.push(b'\n');
                s
            }
            Format::Text => self.text.clone().into_bytes(),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.csv_header)?;
                for r in &self.csv_rows {
                    w.write_record(r)?;
                }
                w.into_inner()?
            }
        })
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<()> {
        let bytes = self.render(format)?;
        match out {
            Some(p) => File::create(p)?.write_all(&bytes)?,
            None => io::stdout().lock().write_all(&bytes)?,
        }
        Ok(())
    }
}
