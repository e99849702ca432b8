//! Line-delimited JSON corpora, one document per line:
//!
//! ```json
//! {"doc_id": "manon", "num_tokens": 12,
//!  "chains": [{"chain_id": "0", "mentions": [{"start": 0, "end": 1, "is_named": true}]}]}
//! ```
//!
//! `is_named` defaults to false and `surface` is optional. Chain ids may be
//! strings or non-negative integers.

use std::io::{BufRead, Write};

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{ParseError, ParseErrorKind};
use crate::model::{Chain, Document, Mention, Partition, Role};

#[derive(Debug, Serialize, Deserialize)]
struct DocRecord {
    doc_id: String,
    num_tokens: usize,
    chains: Vec<ChainRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ChainRecord {
    #[serde(deserialize_with = "string_or_number")]
    chain_id: String,
    mentions: Vec<MentionRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MentionRecord {
    start: usize,
    end: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    is_named: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    surface: Option<String>,
}

fn string_or_number<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Id {
        Text(String),
        Number(u64),
    }
    Ok(match Id::deserialize(d)? {
        Id::Text(s) => s,
        Id::Number(n) => n.to_string(),
    })
}

/// Streams one `(Document, Partition)` per non-blank line.
pub struct JsonlReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    role: Role,
}

impl<R: BufRead> JsonlReader<R> {
    pub fn new(reader: R, role: Role) -> Self {
        Self {
            lines: reader.lines(),
            line_no: 0,
            role,
        }
    }
}

impl<R: BufRead> Iterator for JsonlReader<R> {
    type Item = Result<(Document, Partition), ParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = self.lines.next()?;
            self.line_no += 1;
            let line = match line {
                Ok(line) => line,
                Err(e) => {
                    return Some(Err(ParseError::new(
                        self.line_no,
                        ParseErrorKind::Malformed(format!("read failed: {e}")),
                    )))
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            return Some(
                parse_record(&line, self.role).map_err(|kind| ParseError::new(self.line_no, kind)),
            );
        }
    }
}

fn parse_record(line: &str, role: Role) -> Result<(Document, Partition), ParseErrorKind> {
    let record: DocRecord = serde_json::from_str(line).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => ParseErrorKind::Schema(e.to_string()),
        _ => ParseErrorKind::Malformed(format!("invalid JSON: {e}")),
    })?;
    let doc_id = record.doc_id;
    let mut chains = Vec::with_capacity(record.chains.len());
    for c in record.chains {
        let mut mentions = Vec::with_capacity(c.mentions.len());
        for m in c.mentions {
            if m.start > m.end || m.end >= record.num_tokens {
                return Err(ParseErrorKind::Range(format!(
                    "mention ({}, {}) of chain {} outside 0..{} or inverted",
                    m.start, m.end, c.chain_id, record.num_tokens
                )));
            }
            let mut mention = Mention::new(doc_id.clone(), m.start, m.end).named(m.is_named);
            mention.surface = m.surface;
            mentions.push(mention);
        }
        if mentions.is_empty() {
            return Err(ParseErrorKind::Schema(format!(
                "chain {} has no mentions",
                c.chain_id
            )));
        }
        chains.push(Chain::new(c.chain_id, mentions)?);
    }
    let partition = Partition::new(doc_id.clone(), role, chains)?;
    Ok((Document::new(doc_id, record.num_tokens), partition))
}

/// One JSON line per document, chains in partition order and mentions in
/// span order.
pub fn write_jsonl<'a, W, I>(mut out: W, docs: I) -> std::io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = (&'a Document, &'a Partition)>,
{
    for (doc, partition) in docs {
        let record = DocRecord {
            doc_id: doc.doc_id.clone(),
            num_tokens: doc.num_tokens,
            chains: partition
                .chains()
                .iter()
                .map(|c| ChainRecord {
                    chain_id: c.id().to_string(),
                    mentions: c
                        .mentions()
                        .map(|m| MentionRecord {
                            start: m.start(),
                            end: m.end(),
                            is_named: m.is_named,
                            surface: m.surface.clone(),
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_writer(&mut out, &record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
