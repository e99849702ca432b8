//! Corpus input (CoNLL column files and JSON lines) and report output.

mod conll;
mod jsonl;
mod report;

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use conll::ConllReader;
pub use jsonl::{write_jsonl, JsonlReader};
pub use report::{csv_triple, emit_report, fmt4, OutputFormat, Report};

use crate::error::{Error, ParseError};
use crate::model::{Document, Partition, Role};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Conll,
    Jsonl,
}

impl InputFormat {
    /// `.jsonl`/`.json` files are JSON lines; anything else is CoNLL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => InputFormat::Jsonl,
            _ => InputFormat::Conll,
        }
    }
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "conll" => Ok(Self::Conll),
            "jsonl" => Ok(Self::Jsonl),
            other => Err(format!("unknown input format `{other}`")),
        }
    }
}

/// A parsed key or response corpus.
#[derive(Debug, Clone)]
pub struct CorpusSource {
    pub format: InputFormat,
    pub documents: Vec<(Document, Partition)>,
}

impl CorpusSource {
    fn collect(
        format: InputFormat,
        docs: impl Iterator<Item = Result<(Document, Partition), ParseError>>,
    ) -> Result<Self, Error> {
        let mut seen = std::collections::HashSet::new();
        let mut documents = Vec::new();
        for doc in docs {
            let doc = doc?;
            if !seen.insert(doc.0.doc_id.clone()) {
                return Err(Error::DuplicateDocument(doc.0.doc_id));
            }
            documents.push(doc);
        }
        Ok(Self { format, documents })
    }

    pub fn partitions(&self) -> impl Iterator<Item = &Partition> {
        self.documents.iter().map(|(_, p)| p)
    }
}

pub fn parse_conll<R: BufRead>(input: R, role: Role) -> Result<CorpusSource, Error> {
    CorpusSource::collect(InputFormat::Conll, ConllReader::new(input, role))
}

pub fn parse_jsonl<R: BufRead>(input: R, role: Role) -> Result<CorpusSource, Error> {
    CorpusSource::collect(InputFormat::Jsonl, JsonlReader::new(input, role))
}

pub fn read_corpus(path: &Path, format: InputFormat, role: Role) -> Result<CorpusSource, Error> {
    let reader = BufReader::new(File::open(path)?);
    match format {
        InputFormat::Conll => parse_conll(reader, role),
        InputFormat::Jsonl => parse_jsonl(reader, role),
    }
}
