use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::alignment::{solve_sparse, sum_weights};
use super::overlap::Overlap;
use super::{Ratio, Tally};
use crate::error::ModelError;
use crate::model::{Partition, ScoreTriple, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CeafVariant {
    /// φ3: shared mention count, normalised by mention totals.
    Mention,
    /// φ4: Dice overlap, normalised by chain totals.
    Entity,
}

pub fn ceaf(
    key: &Partition,
    response: &Partition,
    variant: CeafVariant,
) -> Result<ScoreTriple, ModelError> {
    ceaf_tally(key, response, variant).map(|t| t.score())
}

pub(crate) fn ceaf_tally(
    key: &Partition,
    response: &Partition,
    variant: CeafVariant,
) -> Result<Tally, ModelError> {
    key.same_document(response)?;
    let best = best_similarity(key, response, variant);
    let (key_den, resp_den) = match variant {
        CeafVariant::Mention => (key.num_mentions(), response.num_mentions()),
        CeafVariant::Entity => (key.num_chains(), response.num_chains()),
    };
    Ok(Tally::Ratios {
        recall: Ratio::new(best, key_den as f64),
        precision: Ratio::new(best, resp_den as f64),
    })
}

/// Φ*, the total similarity of an optimal one-to-one alignment.
///
/// The assignment is always solved with the same partition on the rows,
/// whichever role it plays, so swapping key and response returns a
/// bit-identical total.
pub(crate) fn best_similarity(a: &Partition, b: &Partition, variant: CeafVariant) -> f64 {
    let (rows, cols) = if canonical_cmp(a, b) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    };
    let overlap = Overlap::between(rows, cols);
    let mut edges = Vec::new();
    for (i, row) in overlap.rows.iter().enumerate() {
        let size_i = rows.chains()[i].len();
        for &(j, o) in row {
            let w = match variant {
                CeafVariant::Mention => o as f64,
                CeafVariant::Entity => 2.0 * o as f64 / (size_i + cols.chains()[j].len()) as f64,
            };
            edges.push((i, j, w));
        }
    }
    sum_weights(&solve_sparse(rows.num_chains(), cols.num_chains(), &edges))
}

fn canonical_cmp(a: &Partition, b: &Partition) -> Ordering {
    fn shape(p: &Partition) -> impl Iterator<Item = (&str, Vec<Span>)> {
        p.chains().iter().map(|c| (c.id(), c.spans().collect()))
    }
    (a.num_chains(), a.num_mentions())
        .cmp(&(b.num_chains(), b.num_mentions()))
        .then_with(|| shape(a).cmp(shape(b)))
}
