use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use serde_json::Value;

use crate::Format;

/// Collects a command's report in the selected format and writes it once the
/// command has finished.
pub struct Output {
    format: Format,
    text: String,
    json: Value,
}

impl Output {
    pub fn new(format: Format) -> Self {
        Output {
            format,
            text: String::new(),
            json: Value::Null,
        }
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn raw(&mut self, s: &str) {
        self.text.push_str(s);
    }

    /// A `key  value` line with the key padded to `width`.
    pub fn field(&mut self, width: usize, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{key:<width$}  {value}");
    }

    pub fn set_json(&mut self, value: Value) {
        self.json = value;
    }

    pub fn flush(self, path: Option<&Path>) -> anyhow::Result<()> {
        let body = match self.format {
            Format::Text => self.text,
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)?;
                s.push('\n');
                s
            }
        };
        match path {
            Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}
