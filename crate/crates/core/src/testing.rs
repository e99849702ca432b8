//! Helpers shared by unit tests.

use crate::model::{Chain, Mention, Partition, Role};

/// Partition of document `d`; chain `i` gets id `i` and each token `t`
/// becomes the one-token mention `(t, t)`.
pub fn partition(chains: &[&[usize]]) -> Partition {
    Partition::new(
        "d",
        Role::Key,
        chains.iter().enumerate().map(|(i, toks)| {
            Chain::new(i.to_string(), toks.iter().map(|&t| Mention::new("d", t, t))).unwrap()
        }),
    )
    .unwrap()
}

/// Exhaustive maximum over all injective row → column assignments.
pub fn brute_force_assignment(w: &[Vec<f64>]) -> f64 {
    fn go(w: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
        if row == w.len() {
            return 0.0;
        }
        // leaving a row unassigned is allowed when rows outnumber columns
        let mut best = if w.len() > used.len() {
            go(w, row + 1, used)
        } else {
            f64::NEG_INFINITY
        };
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                best = best.max(w[row][c] + go(w, row + 1, used));
                used[c] = false;
            }
        }
        if best == f64::NEG_INFINITY {
            best = go(w, row + 1, used);
        }
        best
    }
    let cols = w.first().map_or(0, Vec::len);
    go(w, 0, &mut vec![false; cols])
}
