use crate::model::Partition;

/// Sparse contingency table between the chains of two partitions.
///
/// `rows[i]` lists `(j, |a_i ∩ b_j|)` for every chain `b_j` sharing at least
/// one mention with `a_i`, ordered by `j`. `missing[i]` counts the mentions of
/// `a_i` found in no chain of `b`.
#[derive(Debug, Clone)]
pub(crate) struct Overlap {
    pub rows: Vec<Vec<(usize, usize)>>,
    pub missing: Vec<usize>,
}

impl Overlap {
    pub fn between(a: &Partition, b: &Partition) -> Self {
        let mut rows = Vec::with_capacity(a.num_chains());
        let mut missing = Vec::with_capacity(a.num_chains());
        let mut hits = Vec::new();
        for chain in a.chains() {
            hits.clear();
            let mut absent = 0;
            for span in chain.spans() {
                match b.chain_index(span) {
                    Some(j) => hits.push(j),
                    None => absent += 1,
                }
            }
            hits.sort_unstable();
            let mut row: Vec<(usize, usize)> = Vec::new();
            for &j in &hits {
                match row.last_mut() {
                    Some((last, n)) if *last == j => *n += 1,
                    _ => row.push((j, 1)),
                }
            }
            rows.push(row);
            missing.push(absent);
        }
        Self { rows, missing }
    }
}

pub(crate) fn pairs(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}
