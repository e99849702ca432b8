use super::overlap::Overlap;
use super::{Ratio, Tally};
use crate::error::ModelError;
use crate::model::{Partition, ScoreTriple};

/// Mention-based B³. Every mention, singletons included, carries equal weight.
pub fn b_cubed(key: &Partition, response: &Partition) -> Result<ScoreTriple, ModelError> {
    b_cubed_tally(key, response).map(|t| t.score())
}

pub(crate) fn b_cubed_tally(key: &Partition, response: &Partition) -> Result<Tally, ModelError> {
    key.same_document(response)?;
    Ok(Tally::Ratios {
        recall: side(key, response),
        precision: side(response, key),
    })
}

// Each of the o mentions in a_i ∩ b_j contributes o/|a_i|, hence o²/|a_i|.
fn side(a: &Partition, b: &Partition) -> Ratio {
    let overlap = Overlap::between(a, b);
    let mut num = 0.0;
    for (chain, row) in a.chains().iter().zip(&overlap.rows) {
        let squares: usize = row.iter().map(|&(_, o)| o * o).sum();
        num += squares as f64 / chain.len() as f64;
    }
    Ratio::new(num, a.num_mentions() as f64)
}
