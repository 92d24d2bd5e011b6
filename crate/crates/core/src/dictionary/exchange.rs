//! CSV / JSON / plain seed-list serialization of a [`Dictionary`].

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Dictionary, EntityEntry, Label};
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 7] = [
    "surface",
    "label",
    "origin",
    "score",
    "active",
    "model",
    "iteration",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImportFormat {
    Csv,
    Json,
    /// One surface per line; `#` comments and blank lines ignored.
    Seed,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(format!("unknown export format {other:?}")),
        }
    }
}

impl FromStr for ImportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ImportFormat::Csv),
            "json" => Ok(ImportFormat::Json),
            "seed" | "txt" | "text" => Ok(ImportFormat::Seed),
            other => Err(format!("unknown import format {other:?}")),
        }
    }
}

#[derive(Serialize)]
struct ExportView<'a> {
    entries: &'a [EntityEntry],
}

#[derive(Deserialize)]
struct ImportView {
    entries: Vec<EntityEntry>,
}

impl Dictionary {
    /// Serializes every entry, inactive and negative ones included, in
    /// insertion order.
    pub fn export(&self, format: ExportFormat) -> Vec<u8> {
        match format {
            ExportFormat::Csv => self.export_csv(),
            ExportFormat::Json => {
                let mut out = serde_json::to_vec(&ExportView {
                    entries: &self.entries,
                })
                .expect("dictionary entries always serialize");
                out.push(b'\n');
                out
            }
        }
    }

    fn export_csv(&self) -> Vec<u8> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        // Writes to a Vec cannot fail.
        writer.write_record(CSV_HEADER).unwrap();
        for e in &self.entries {
            let score = e.score.map(|s| format!("{s:.6}")).unwrap_or_default();
            let iteration = e.iteration.to_string();
            writer
                .write_record([
                    e.surface.as_str(),
                    e.label.as_str(),
                    e.origin.as_deref().unwrap_or(""),
                    score.as_str(),
                    if e.active { "true" } else { "false" },
                    e.model.as_deref().unwrap_or(""),
                    iteration.as_str(),
                ])
                .unwrap();
        }
        writer.into_inner().unwrap()
    }

    pub fn import(bytes: &[u8], format: ImportFormat) -> Result<Dictionary> {
        let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
        match format {
            ImportFormat::Csv => import_csv(bytes),
            ImportFormat::Json => import_json(bytes),
            ImportFormat::Seed => import_seed(bytes),
        }
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn utf8(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| {
        let offset = e.valid_up_to();
        let line = 1 + bytes[..offset].iter().filter(|&&b| b == b'\n').count();
        parse_error(line, format!("invalid UTF-8 at byte offset {offset}"))
    })
}

fn import_seed(bytes: &[u8]) -> Result<Dictionary> {
    let text = utf8(bytes)?;
    let mut dict = Dictionary::new();
    for line in text.lines() {
        let surface = line.trim();
        if surface.is_empty() || surface.starts_with('#') {
            continue;
        }
        dict.add_entity(surface, Label::Positive, 0)?;
    }
    Ok(dict)
}

fn import_json(bytes: &[u8]) -> Result<Dictionary> {
    let view: ImportView =
        serde_json::from_slice(bytes).map_err(|e| parse_error(e.line(), e.to_string()))?;
    let mut dict = Dictionary::new();
    for entry in view.entries {
        dict.insert(entry)?;
    }
    Ok(dict)
}

fn import_csv(bytes: &[u8]) -> Result<Dictionary> {
    utf8(bytes)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes);
    let header = reader
        .headers()
        .map_err(|e| parse_error(csv_line(&e), e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(parse_error(
            1,
            format!("expected header {:?}", CSV_HEADER.join(",")),
        ));
    }

    let mut dict = Dictionary::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(csv_line(&e), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| record.get(i).unwrap_or("");
        let optional = |i: usize| Some(field(i).to_owned()).filter(|s| !s.is_empty());

        let label = Label::from_str(field(1)).map_err(|m| parse_error(line, m))?;
        let score = match field(3) {
            "" => None,
            s => Some(
                s.parse::<f64>()
                    .map_err(|_| parse_error(line, format!("bad score {s:?}")))?,
            ),
        };
        let active = match field(4) {
            "true" => true,
            "false" => false,
            s => return Err(parse_error(line, format!("bad active flag {s:?}"))),
        };
        let iteration = field(6)
            .parse::<u32>()
            .map_err(|_| parse_error(line, format!("bad iteration {:?}", field(6))))?;

        dict.insert(EntityEntry {
            surface: field(0).to_owned(),
            label,
            origin: optional(2),
            score,
            active,
            model: optional(5),
            iteration,
        })?;
    }
    Ok(dict)
}

fn csv_line(err: &csv::Error) -> usize {
    err.position().map_or(0, |p| p.line() as usize)
}
