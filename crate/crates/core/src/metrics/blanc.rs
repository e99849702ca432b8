use super::overlap::{pairs, Overlap};
use super::{Ratio, Tally};
use crate::error::ModelError;
use crate::model::{Partition, ScoreTriple};

/// BLANC over coreferent and non-coreferent mention pairs.
///
/// Pair universes are drawn from each side's own mentions, so a response may
/// be scored on mentions the key never annotated. A link category that is
/// empty on both sides drops out and the other category's triple is
/// returned alone.
pub fn blanc(key: &Partition, response: &Partition) -> Result<ScoreTriple, ModelError> {
    blanc_tally(key, response).map(|t| t.score())
}

pub(crate) fn blanc_tally(key: &Partition, response: &Partition) -> Result<Tally, ModelError> {
    key.same_document(response)?;
    let overlap = Overlap::between(key, response);

    let coref_key: u64 = key.chains().iter().map(|c| pairs(c.len())).sum();
    let coref_resp: u64 = response.chains().iter().map(|c| pairs(c.len())).sum();
    let non_key = pairs(key.num_mentions()) - coref_key;
    let non_resp = pairs(response.num_mentions()) - coref_resp;

    // Pairs shared by both sides, counted over mentions present on both.
    let mut coref_common = 0u64;
    let mut same_key = 0u64;
    let mut resp_sizes = vec![0usize; response.num_chains()];
    let mut common = 0usize;
    for row in &overlap.rows {
        let mut in_key = 0;
        for &(j, o) in row {
            coref_common += pairs(o);
            resp_sizes[j] += o;
            in_key += o;
        }
        same_key += pairs(in_key);
        common += in_key;
    }
    let same_resp: u64 = resp_sizes.iter().map(|&n| pairs(n)).sum();
    // inclusion-exclusion over the pairs of common mentions
    let non_common = pairs(common) + coref_common - same_key - same_resp;

    Ok(Tally::Blanc {
        coref: [
            Ratio::new(coref_common as f64, coref_key as f64),
            Ratio::new(coref_common as f64, coref_resp as f64),
        ],
        non_coref: [
            Ratio::new(non_common as f64, non_key as f64),
            Ratio::new(non_common as f64, non_resp as f64),
        ],
    })
}

/// Combines the coreferent and non-coreferent triples.
pub(crate) fn combine(coref: [Ratio; 2], non_coref: [Ratio; 2]) -> ScoreTriple {
    let c = ScoreTriple::new(coref[0].value(), coref[1].value());
    let n = ScoreTriple::new(non_coref[0].value(), non_coref[1].value());
    let coref_absent = coref[0].den == 0.0 && coref[1].den == 0.0;
    let non_absent = non_coref[0].den == 0.0 && non_coref[1].den == 0.0;
    match (coref_absent, non_absent) {
        (true, true) => ScoreTriple::ZERO,
        (true, false) => n,
        (false, true) => c,
        (false, false) => ScoreTriple {
            recall: (c.recall + n.recall) / 2.0,
            precision: (c.precision + n.precision) / 2.0,
            f1: (c.f1 + n.f1) / 2.0,
        },
    }
}
