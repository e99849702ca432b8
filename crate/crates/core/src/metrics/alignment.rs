//! Maximum-similarity one-to-one alignment of key and response chains.
//!
//! The solver is the O(n²m) shortest-augmenting-path form of the
//! Kuhn–Munkres algorithm with row and column potentials. Positive-weight
//! edges are first split into connected components, since chains that
//! share no similarity with each other can never gain from being paired;
//! each component is then padded and solved on its own.

use serde::{Deserialize, Serialize};

use crate::model::{Chain, Partition};

/// A one-to-one pairing of key chain ids with response chain ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alignment {
    pub pairs: Vec<(String, String)>,
    pub total_similarity: f64,
}

/// Finds the alignment maximising Σ φ over the pairs.
///
/// φ is evaluated on every key × response combination; callers with sparse
/// similarities should prefer the CEAF entry points, which only visit
/// overlapping chains. Rows and columns are visited in chain-id order and
/// the solver is deterministic, so equal inputs always yield the same pairs.
/// Key and response chains left over after the optimal matching are paired
/// with each other in id order at zero similarity, keeping the matching
/// maximal.
pub fn optimal_alignment<F>(key: &Partition, response: &Partition, phi: F) -> Alignment
where
    F: Fn(&Chain, &Chain) -> f64,
{
    let rows = sorted_by_id(key);
    let cols = sorted_by_id(response);
    let mut edges = Vec::new();
    for (i, k) in rows.iter().enumerate() {
        for (j, r) in cols.iter().enumerate() {
            let w = phi(k, r);
            debug_assert!(w >= 0.0, "similarity must be non-negative");
            if w > 0.0 {
                edges.push((i, j, w));
            }
        }
    }
    let matched = solve_sparse(rows.len(), cols.len(), &edges);
    let total_similarity = sum_weights(&matched);
    let pairs = fill_maximal(rows.len(), cols.len(), &matched)
        .into_iter()
        .map(|(i, j)| (rows[i].id().to_string(), cols[j].id().to_string()))
        .collect();
    Alignment {
        pairs,
        total_similarity,
    }
}

pub(crate) fn sorted_by_id(p: &Partition) -> Vec<&Chain> {
    let mut chains: Vec<&Chain> = p.chains().iter().collect();
    chains.sort_by(|a, b| a.id().cmp(b.id()));
    chains
}

/// Σ of matched weights, added in ascending order so that equal multisets
/// of weights always give bit-identical totals.
pub(crate) fn sum_weights(matched: &[(usize, usize, f64)]) -> f64 {
    let mut ws: Vec<f64> = matched.iter().map(|&(_, _, w)| w).collect();
    ws.sort_by(f64::total_cmp);
    ws.into_iter().sum()
}

fn fill_maximal(
    n_rows: usize,
    n_cols: usize,
    matched: &[(usize, usize, f64)],
) -> Vec<(usize, usize)> {
    let mut row_used = vec![false; n_rows];
    let mut col_used = vec![false; n_cols];
    let mut out: Vec<(usize, usize)> = matched
        .iter()
        .map(|&(i, j, _)| {
            row_used[i] = true;
            col_used[j] = true;
            (i, j)
        })
        .collect();
    let free_rows = (0..n_rows).filter(|&i| !row_used[i]);
    let free_cols = (0..n_cols).filter(|&j| !col_used[j]);
    out.extend(free_rows.zip(free_cols));
    out.sort_unstable();
    out
}

/// Maximum-weight matching restricted to the given positive edges. Returns
/// matched `(row, col, weight)` triples, sorted by row; zero-weight pairs
/// are omitted.
pub(crate) fn solve_sparse(
    n_rows: usize,
    n_cols: usize,
    edges: &[(usize, usize, f64)],
) -> Vec<(usize, usize, f64)> {
    // union-find over rows [0, n_rows) and columns [n_rows, n_rows + n_cols)
    let mut parent: Vec<usize> = (0..n_rows + n_cols).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(i, j, _) in edges {
        let a = find(&mut parent, i);
        let b = find(&mut parent, n_rows + j);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }

    // group edges by component root, preserving edge order
    let mut by_root: std::collections::BTreeMap<usize, Vec<(usize, usize, f64)>> =
        std::collections::BTreeMap::new();
    for &(i, j, w) in edges {
        let root = find(&mut parent, i);
        by_root.entry(root).or_default().push((i, j, w));
    }

    let mut matched = Vec::new();
    for component in by_root.values() {
        if let [(i, j, w)] = component.as_slice() {
            matched.push((*i, *j, *w));
            continue;
        }
        let mut rows: Vec<usize> = component.iter().map(|e| e.0).collect();
        let mut cols: Vec<usize> = component.iter().map(|e| e.1).collect();
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        let mut weights = vec![vec![0.0; cols.len()]; rows.len()];
        for &(i, j, w) in component {
            let r = rows.binary_search(&i).expect("row in component");
            let c = cols.binary_search(&j).expect("col in component");
            weights[r][c] = w;
        }
        for (r, c) in max_weight_assignment(&weights) {
            let w = weights[r][c];
            if w > 0.0 {
                matched.push((rows[r], cols[c], w));
            }
        }
    }
    matched.sort_unstable_by_key(|&(i, j, _)| (i, j));
    matched
}

/// Dense maximum-weight assignment on a rectangular matrix. Every row of the
/// smaller dimension is assigned; returns `(row, col)` pairs sorted by row.
pub(crate) fn max_weight_assignment(weights: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let n_rows = weights.len();
    let n_cols = weights.first().map_or(0, Vec::len);
    if n_rows == 0 || n_cols == 0 {
        return Vec::new();
    }
    if n_rows <= n_cols {
        let cost: Vec<Vec<f64>> = weights
            .iter()
            .map(|row| row.iter().map(|w| -w).collect())
            .collect();
        hungarian(&cost)
    } else {
        let cost: Vec<Vec<f64>> = (0..n_cols)
            .map(|c| (0..n_rows).map(|r| -weights[r][c]).collect())
            .collect();
        let mut pairs: Vec<(usize, usize)> =
            hungarian(&cost).into_iter().map(|(c, r)| (r, c)).collect();
        pairs.sort_unstable();
        pairs
    }
}

/// Minimum-cost assignment for `n ≤ m` (rows ≤ columns).
fn hungarian(cost: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let n = cost.len();
    let m = cost[0].len();
    debug_assert!(n <= m);
    // 1-based potentials; index 0 is the virtual source
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut min_slack = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < min_slack[j] {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = (1..=m)
        .filter(|&j| owner[j] != 0)
        .map(|j| (owner[j] - 1, j - 1))
        .collect();
    pairs.sort_unstable();
    pairs
}
