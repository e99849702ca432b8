use super::overlap::Overlap;
use super::{Ratio, Tally};
use crate::error::ModelError;
use crate::model::{Partition, ScoreTriple};

/// Link-based MUC score. Singleton chains contribute no links and are ignored.
pub fn muc(key: &Partition, response: &Partition) -> Result<ScoreTriple, ModelError> {
    muc_tally(key, response).map(|t| t.score())
}

pub(crate) fn muc_tally(key: &Partition, response: &Partition) -> Result<Tally, ModelError> {
    key.same_document(response)?;
    Ok(Tally::Ratios {
        recall: side(key, response),
        precision: side(response, key),
    })
}

/// Σ (|a| − |p(a)|) / Σ (|a| − 1), where p(a) partitions `a` by the chains of
/// `b` and each mention of `a` missing from `b` is its own block.
fn side(a: &Partition, b: &Partition) -> Ratio {
    let overlap = Overlap::between(a, b);
    let mut ratio = Ratio::default();
    for (i, chain) in a.chains().iter().enumerate() {
        if chain.len() < 2 {
            continue;
        }
        let blocks = overlap.rows[i].len() + overlap.missing[i];
        ratio.num += (chain.len() - blocks) as f64;
        ratio.den += (chain.len() - 1) as f64;
    }
    ratio
}
