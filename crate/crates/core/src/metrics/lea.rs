use super::overlap::{pairs, Overlap};
use super::{Ratio, Tally};
use crate::error::ModelError;
use crate::model::{Partition, ScoreTriple};

/// Link-based entity-aware score.
///
/// Each entity is weighted by its size. A non-singleton entity is resolved
/// in proportion to its coreference links recovered by the other side;
/// overlaps of a single mention carry no link. A singleton has one
/// self-link and counts as resolved only when the other side also keeps it
/// as a singleton.
pub fn lea(key: &Partition, response: &Partition) -> Result<ScoreTriple, ModelError> {
    lea_tally(key, response).map(|t| t.score())
}

pub(crate) fn lea_tally(key: &Partition, response: &Partition) -> Result<Tally, ModelError> {
    key.same_document(response)?;
    Ok(Tally::Ratios {
        recall: side(key, response),
        precision: side(response, key),
    })
}

fn side(a: &Partition, b: &Partition) -> Ratio {
    let overlap = Overlap::between(a, b);
    let mut ratio = Ratio::default();
    for (chain, row) in a.chains().iter().zip(&overlap.rows) {
        let size = chain.len();
        let resolution = if size == 1 {
            match row.as_slice() {
                [(j, 1)] if b.chains()[*j].is_singleton() => 1.0,
                _ => 0.0,
            }
        } else {
            let common: u64 = row.iter().map(|&(_, o)| pairs(o)).sum();
            common as f64 / pairs(size) as f64
        };
        ratio.num += size as f64 * resolution;
        ratio.den += size as f64;
    }
    ratio
}
