//! Documents, mentions, chains and partitions.
//!
//! A [`Mention`] is identified by its `(doc_id, start, end)` triple only; the
//! surface string and the named-entity flag ride along but never take part in
//! equality, ordering or hashing. A [`Partition`] is a set of disjoint
//! [`Chain`]s over one document, validated at construction and immutable
//! afterwards.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// A document of the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub num_tokens: usize,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, num_tokens: usize) -> Self {
        Self {
            doc_id: doc_id.into(),
            num_tokens,
        }
    }
}

/// Inclusive token span inside one document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.end)
    }
}

/// A token span referring to an entity.
#[derive(Debug, Clone)]
pub struct Mention {
    pub doc_id: String,
    pub span: Span,
    pub is_named: bool,
    pub surface: Option<String>,
}

impl Mention {
    pub fn new(doc_id: impl Into<String>, start: usize, end: usize) -> Self {
        Self {
            doc_id: doc_id.into(),
            span: Span::new(start, end),
            is_named: false,
            surface: None,
        }
    }

    pub fn named(mut self, is_named: bool) -> Self {
        self.is_named = is_named;
        self
    }

    pub fn with_surface(mut self, surface: impl Into<String>) -> Self {
        self.surface = Some(surface.into());
        self
    }

    pub fn start(&self) -> usize {
        self.span.start
    }

    pub fn end(&self) -> usize {
        self.span.end
    }

    fn key(&self) -> (&str, Span) {
        (&self.doc_id, self.span)
    }
}

impl PartialEq for Mention {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Mention {}

impl Hash for Mention {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for Mention {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mention {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// A non-empty set of mentions referring to one entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    id: String,
    mentions: BTreeSet<Mention>,
}

impl Chain {
    /// Builds a chain; duplicate spans collapse into one mention.
    pub fn new(
        id: impl Into<String>,
        mentions: impl IntoIterator<Item = Mention>,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        let mentions: BTreeSet<Mention> = mentions.into_iter().collect();
        let first = match mentions.first() {
            Some(m) => m.doc_id.clone(),
            None => return Err(ModelError::EmptyChain { chain_id: id }),
        };
        if let Some(stray) = mentions.iter().find(|m| m.doc_id != first) {
            return Err(ModelError::MixedDocuments {
                chain_id: id,
                expected: first,
                found: stray.doc_id.clone(),
            });
        }
        Ok(Self { id, mentions })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn doc_id(&self) -> &str {
        // non-empty by construction
        &self.mentions.first().expect("chain is never empty").doc_id
    }

    pub fn mentions(&self) -> impl ExactSizeIterator<Item = &Mention> + '_ {
        self.mentions.iter()
    }

    pub fn spans(&self) -> impl ExactSizeIterator<Item = Span> + '_ {
        self.mentions.iter().map(|m| m.span)
    }

    pub fn len(&self) -> usize {
        self.mentions.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.mentions.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.mentions.len() == 1
    }

    pub fn contains(&self, m: &Mention) -> bool {
        self.mentions.contains(m)
    }

    pub fn has_named(&self) -> bool {
        self.mentions.iter().any(|m| m.is_named)
    }

    /// Keeps only mentions satisfying `keep`; `None` when nothing survives.
    pub fn retain(&self, mut keep: impl FnMut(&Mention) -> bool) -> Option<Chain> {
        let mentions: BTreeSet<Mention> =
            self.mentions.iter().filter(|m| keep(m)).cloned().collect();
        if mentions.is_empty() {
            None
        } else {
            Some(Chain {
                id: self.id.clone(),
                mentions,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Key,
    Response,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Key => f.write_str("key"),
            Role::Response => f.write_str("response"),
        }
    }
}

/// A set of disjoint chains over one document.
///
/// Chains keep their input order. Lookup from a span to its chain is O(1).
#[derive(Debug, Clone)]
pub struct Partition {
    doc_id: String,
    role: Role,
    chains: Vec<Chain>,
    index: HashMap<Span, usize>,
}

impl Partition {
    pub fn new(
        doc_id: impl Into<String>,
        role: Role,
        chains: impl IntoIterator<Item = Chain>,
    ) -> Result<Self, ModelError> {
        let doc_id = doc_id.into();
        let chains: Vec<Chain> = chains.into_iter().collect();
        let mut index: HashMap<Span, usize> = HashMap::new();
        let mut ids = HashSet::new();
        for (i, chain) in chains.iter().enumerate() {
            if chain.doc_id() != doc_id {
                return Err(ModelError::MixedDocuments {
                    chain_id: chain.id.clone(),
                    expected: doc_id,
                    found: chain.doc_id().to_string(),
                });
            }
            if !ids.insert(chain.id.as_str()) {
                return Err(ModelError::DuplicateChainId {
                    doc_id,
                    chain_id: chain.id.clone(),
                });
            }
            for span in chain.spans() {
                if let Some(&prev) = index.get(&span) {
                    return Err(ModelError::DuplicateSpan {
                        doc_id,
                        span,
                        first: chains[prev].id().to_string(),
                        second: chain.id.clone(),
                    });
                }
                index.insert(span, i);
            }
        }
        Ok(Self {
            doc_id,
            role,
            chains,
            index,
        })
    }

    pub fn empty(doc_id: impl Into<String>, role: Role) -> Self {
        Self {
            doc_id: doc_id.into(),
            role,
            chains: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// Same chains, relabelled role.
    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn num_chains(&self) -> usize {
        self.chains.len()
    }

    pub fn num_mentions(&self) -> usize {
        self.index.len()
    }

    pub fn num_singletons(&self) -> usize {
        self.chains.iter().filter(|c| c.is_singleton()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Union of all chain mention sets.
    pub fn mentions_of(&self) -> BTreeSet<Mention> {
        self.chains
            .iter()
            .flat_map(|c| c.mentions().cloned())
            .collect()
    }

    pub fn contains_span(&self, span: Span) -> bool {
        self.index.contains_key(&span)
    }

    /// Index into [`Partition::chains`] of the chain holding `span`.
    pub fn chain_index(&self, span: Span) -> Option<usize> {
        self.index.get(&span).copied()
    }

    /// The chain containing `m`, matched by span identity.
    pub fn chain_of(&self, m: &Mention) -> Option<&Chain> {
        if m.doc_id != self.doc_id {
            return None;
        }
        self.chain_index(m.span).map(|i| &self.chains[i])
    }

    pub fn chain_by_id(&self, id: &str) -> Option<&Chain> {
        self.chains.iter().find(|c| c.id == id)
    }

    /// Rebuilds the partition from a filtered copy of every chain.
    pub(crate) fn filter_mentions(&self, mut keep: impl FnMut(&Mention) -> bool) -> Partition {
        let chains = self.chains.iter().filter_map(|c| c.retain(&mut keep));
        Partition::new(self.doc_id.clone(), self.role, chains)
            .expect("a restriction of a valid partition is valid")
    }

    pub(crate) fn same_document(&self, other: &Partition) -> Result<(), ModelError> {
        if self.doc_id == other.doc_id {
            Ok(())
        } else {
            Err(ModelError::DocMismatch {
                key: self.doc_id.clone(),
                response: other.doc_id.clone(),
            })
        }
    }
}

/// Two partitions are equal when they hold the same chains, irrespective of
/// chain order or role.
impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        if self.doc_id != other.doc_id || self.chains.len() != other.chains.len() {
            return false;
        }
        let mut a: Vec<&Chain> = self.chains.iter().collect();
        let mut b: Vec<&Chain> = other.chains.iter().collect();
        a.sort_by(|x, y| x.id.cmp(&y.id));
        b.sort_by(|x, y| x.id.cmp(&y.id));
        a == b
    }
}

/// Recall, precision and their harmonic mean.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreTriple {
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

impl ScoreTriple {
    pub fn new(recall: f64, precision: f64) -> Self {
        Self {
            recall,
            precision,
            f1: harmonic_mean(recall, precision),
        }
    }

    pub const ZERO: ScoreTriple = ScoreTriple {
        recall: 0.0,
        precision: 0.0,
        f1: 0.0,
    };
}

pub(crate) fn harmonic_mean(a: f64, b: f64) -> f64 {
    if a + b > 0.0 {
        2.0 * a * b / (a + b)
    } else {
        0.0
    }
}
