use thiserror::Error;

use crate::metrics::MetricId;
use crate::model::Span;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("chain {chain_id} has no mentions")]
    EmptyChain { chain_id: String },
    #[error("chain {chain_id} mixes documents {expected} and {found}")]
    MixedDocuments {
        chain_id: String,
        expected: String,
        found: String,
    },
    #[error("document {doc_id}: chain id {chain_id} used twice")]
    DuplicateChainId { doc_id: String, chain_id: String },
    #[error("document {doc_id}: span {span} appears in chains {first} and {second}")]
    DuplicateSpan {
        doc_id: String,
        span: Span,
        first: String,
        second: String,
    },
    #[error("key document {key} scored against response document {response}")]
    DocMismatch { key: String, response: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unbalanced bracket: {0}")]
    UnbalancedBracket(String),
    #[error("{0}")]
    Malformed(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("range error: {0}")]
    Range(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(line: usize, kind: ParseErrorKind) -> Self {
        Self { line, kind }
    }

    pub fn is_duplicate_span(&self) -> bool {
        matches!(
            self.kind,
            ParseErrorKind::Model(ModelError::DuplicateSpan { .. })
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("metric {0} required for the CoNLL average is missing")]
    MissingMetric(MetricId),
    #[error("cannot fit an empty rank-size series")]
    EmptySeries,
    #[error("document {doc_id} present in {present} but missing from {missing}")]
    MissingDocument {
        doc_id: String,
        present: &'static str,
        missing: &'static str,
    },
    #[error("document {0} appears twice in one input")]
    DuplicateDocument(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
