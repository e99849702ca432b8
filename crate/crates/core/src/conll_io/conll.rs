//! CoNLL-2012 style column files.
//!
//! Documents open with `#begin document <id>` and close with
//! `#end document`. Every other non-blank, non-`#` line is a token; only the
//! last whitespace-separated column is read, as a `|`-joined list of
//! `(N`, `N)`, `(N)` items or a lone `-`. Tokens are numbered from 0 across
//! the whole document, ignoring sentence breaks.

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{ParseError, ParseErrorKind};
use crate::model::{Chain, Document, Mention, Partition, Role, Span};

/// Streams one `(Document, Partition)` per `#begin document` block.
pub struct ConllReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    role: Role,
    done: bool,
}

impl<R: BufRead> ConllReader<R> {
    pub fn new(reader: R, role: Role) -> Self {
        Self {
            lines: reader.lines(),
            line_no: 0,
            role,
            done: false,
        }
    }

    fn next_line(&mut self) -> Option<Result<String, ParseError>> {
        let line = self.lines.next()?;
        self.line_no += 1;
        Some(line.map_err(|e| {
            ParseError::new(
                self.line_no,
                ParseErrorKind::Malformed(format!("read failed: {e}")),
            )
        }))
    }

    fn read_document(
        &mut self,
        doc_id: String,
        begin_line: usize,
    ) -> Result<(Document, Partition), ParseError> {
        let mut builder = DocBuilder::new(doc_id, begin_line);
        loop {
            let line = match self.next_line() {
                Some(line) => line?,
                None => {
                    return Err(ParseError::new(
                        self.line_no,
                        ParseErrorKind::Malformed(format!(
                            "document {} opened on line {} has no #end document",
                            builder.doc_id, begin_line
                        )),
                    ))
                }
            };
            let trimmed = line.trim();
            if trimmed.starts_with("#end document") {
                return builder.finish(self.line_no, self.role);
            }
            if trimmed.starts_with("#begin document") {
                return Err(ParseError::new(
                    self.line_no,
                    ParseErrorKind::Malformed("#begin document inside an open document".into()),
                ));
            }
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let column = trimmed.split_whitespace().last().expect("non-empty line");
            builder.token(column, self.line_no)?;
        }
    }
}

impl<R: BufRead> Iterator for ConllReader<R> {
    type Item = Result<(Document, Partition), ParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            let line = match self.next_line()? {
                Ok(line) => line,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            };
            let trimmed = line.trim();
            if let Some(rest) = trimmed.strip_prefix("#begin document") {
                let doc_id = rest.trim().to_string();
                let result = self.read_document(doc_id, self.line_no);
                if result.is_err() {
                    self.done = true;
                }
                return Some(result);
            }
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            self.done = true;
            let kind = if trimmed.starts_with("#end document") {
                ParseErrorKind::Malformed("#end document without #begin document".into())
            } else {
                ParseErrorKind::Malformed("token line outside any document".into())
            };
            return Some(Err(ParseError::new(self.line_no, kind)));
        }
    }
}

struct DocBuilder {
    doc_id: String,
    begin_line: usize,
    tokens: usize,
    /// chain id → stack of (start token, line) for open brackets
    open: HashMap<String, Vec<(usize, usize)>>,
    order: Vec<String>,
    chains: HashMap<String, Vec<Span>>,
    owner: HashMap<Span, String>,
}

impl DocBuilder {
    fn new(doc_id: String, begin_line: usize) -> Self {
        Self {
            doc_id,
            begin_line,
            tokens: 0,
            open: HashMap::new(),
            order: Vec::new(),
            chains: HashMap::new(),
            owner: HashMap::new(),
        }
    }

    fn token(&mut self, column: &str, line: usize) -> Result<(), ParseError> {
        let idx = self.tokens;
        self.tokens += 1;
        if column == "-" {
            return Ok(());
        }
        for item in column.split('|') {
            let malformed = || {
                ParseError::new(
                    line,
                    ParseErrorKind::Malformed(format!(
                        "bad coreference item `{item}` in `{column}`"
                    )),
                )
            };
            let (opens, rest) = match item.strip_prefix('(') {
                Some(rest) => (true, rest),
                None => (false, item),
            };
            let (closes, id) = match rest.strip_suffix(')') {
                Some(id) => (true, id),
                None => (false, rest),
            };
            if id.is_empty() || id.contains(['(', ')']) || !(opens || closes) {
                return Err(malformed());
            }
            match (opens, closes) {
                (true, true) => self.add(id, Span::new(idx, idx), line)?,
                (true, false) => self
                    .open
                    .entry(id.to_string())
                    .or_default()
                    .push((idx, line)),
                (false, true) => {
                    let start = self
                        .open
                        .get_mut(id)
                        .and_then(Vec::pop)
                        .ok_or_else(|| {
                            ParseError::new(
                                line,
                                ParseErrorKind::UnbalancedBracket(format!(
                                    "`{id})` closes chain {id} which has no open mention"
                                )),
                            )
                        })?
                        .0;
                    self.add(id, Span::new(start, idx), line)?;
                }
                (false, false) => unreachable!(),
            }
        }
        Ok(())
    }

    fn add(&mut self, id: &str, span: Span, line: usize) -> Result<(), ParseError> {
        if let Some(prev) = self.owner.get(&span) {
            if prev == id {
                return Ok(());
            }
            return Err(ParseError::new(
                line,
                ParseErrorKind::Model(crate::error::ModelError::DuplicateSpan {
                    doc_id: self.doc_id.clone(),
                    span,
                    first: prev.clone(),
                    second: id.to_string(),
                }),
            ));
        }
        self.owner.insert(span, id.to_string());
        if !self.chains.contains_key(id) {
            self.order.push(id.to_string());
        }
        self.chains.entry(id.to_string()).or_default().push(span);
        Ok(())
    }

    fn finish(mut self, line: usize, role: Role) -> Result<(Document, Partition), ParseError> {
        let mut unclosed: Vec<(usize, &String)> = self
            .open
            .iter()
            .flat_map(|(id, stack)| stack.iter().map(move |&(_, l)| (l, id)))
            .collect();
        unclosed.sort();
        if let Some((open_line, id)) = unclosed.first() {
            return Err(ParseError::new(
                line,
                ParseErrorKind::UnbalancedBracket(format!(
                    "chain {id} opened on line {open_line} is never closed"
                )),
            ));
        }
        let doc_id = self.doc_id.clone();
        let chains = self
            .order
            .iter()
            .map(|id| {
                let spans = self.chains.remove(id).expect("ordered ids have spans");
                Chain::new(
                    id.clone(),
                    spans
                        .into_iter()
                        .map(|s| Mention::new(doc_id.clone(), s.start, s.end)),
                )
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ParseError::new(self.begin_line, e.into()))?;
        let partition = Partition::new(doc_id.clone(), role, chains)
            .map_err(|e| ParseError::new(line, e.into()))?;
        Ok((Document::new(doc_id, self.tokens), partition))
    }
}
