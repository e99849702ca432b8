//! Coreference evaluation for long narrative texts.
//!
//! The classical metrics (MUC, B³, CEAF, BLANC, LEA) are always reported
//! side by side; the CoNLL average is available but printed as an average,
//! never as the score. On top of them, [`stratification`] scores main
//! characters, secondary characters and singletons separately, and
//! [`corpus_stats`] profiles chain-length distributions.
//!
//! ```
//! use litcoref::model::{Chain, Mention, Partition, Role};
//! use litcoref::metrics::{score_all, MetricId};
//!
//! let chain = |id: &str, toks: &[usize]| {
//!     Chain::new(id, toks.iter().map(|&t| Mention::new("doc", t, t))).unwrap()
//! };
//! let key = Partition::new("doc", Role::Key, [chain("a", &[0, 1, 2]), chain("b", &[3, 4])]).unwrap();
//! let response = Partition::new("doc", Role::Response, [chain("x", &[0, 1]), chain("y", &[2, 3, 4])]).unwrap();
//!
//! let report = score_all(&key, &response).unwrap();
//! assert!((report.get(MetricId::Lea).unwrap().f1 - 0.6).abs() < 1e-12);
//! ```

pub mod conll_io;
pub mod corpus;
pub mod corpus_stats;
pub mod error;
pub mod metrics;
pub mod model;
pub mod stratification;

#[cfg(test)]
mod testing;

pub use error::{Error, ModelError, ParseError, Result};
pub use model::{Chain, Document, Mention, Partition, Role, ScoreTriple, Span};
