//! The 207 strongly s-regular forms representing one, as shipped in
//! `data/tables207.jsonl`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{Discriminant4, TernaryForm};

pub const EMBEDDED: &str = include_str!("../data/tables207.jsonl");

/// Discriminant conditions labelling the table blocks, in table order.
pub const BLOCKS: [&str; 4] = ["3∤dL", "3|dL,5∤dL", "15|dL,7∤dL", "105|dL,11∤dL"];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub form: TernaryForm,
    pub table: u8,
    pub block: String,
    pub class_number: u8,
    pub mark: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TableEntry {
    /// The `S_i`/`T_i` partner named by the mark, if any.
    pub fn partner_mark(&self) -> Option<String> {
        let mark = self.mark.as_deref()?;
        let (letter, index) = mark.split_at(1);
        match letter {
            "S" => Some(format!("T{index}")),
            "T" => Some(format!("S{index}")),
            _ => None,
        }
    }
}

/// The block tag for a discriminant: the first of 3, 5, 7, 11 not dividing `D`.
pub fn block_tag(d: Discriminant4) -> Option<&'static str> {
    [3, 5, 7, 11].iter().position(|p| d.value() % p != 0).map(|i| BLOCKS[i])
}

pub fn parse(text: &str) -> Result<Vec<TableEntry>, DatasetError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entry: TableEntry = serde_json::from_str(line).map_err(|source| DatasetError::Json { line: i + 1, source })?;
        let invalid = |message: String| DatasetError::Invalid { line: i + 1, message };
        if !(1..=2).contains(&entry.table) {
            return Err(invalid(format!("table {}", entry.table)));
        }
        if !(1..=3).contains(&entry.class_number) {
            return Err(invalid(format!("class number {}", entry.class_number)));
        }
        if block_tag(entry.form.discriminant4()) != Some(entry.block.as_str()) {
            return Err(invalid(format!("block {} does not match {}", entry.block, entry.form)));
        }
        out.push(entry);
    }
    Ok(out)
}

pub fn load_embedded() -> Vec<TableEntry> {
    parse(EMBEDDED).expect("embedded dataset is valid")
}

pub fn load_path(path: &Path) -> Result<Vec<TableEntry>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io { path: path.display().to_string(), source })?;
    parse(&text)
}

/// Entry counts per block of one table, in [`BLOCKS`] order (trailing empty blocks dropped).
pub fn block_counts(entries: &[TableEntry], table: u8) -> Vec<usize> {
    let mut counts: Vec<usize> = BLOCKS
        .iter()
        .map(|b| entries.iter().filter(|e| e.table == table && e.block == *b).count())
        .collect();
    while counts.last() == Some(&0) {
        counts.pop();
    }
    counts
}
