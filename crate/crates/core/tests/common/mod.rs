//! Random partitions and naive reference implementations of every metric.
//!
//! The reference implementations work on plain sets of token ids and
//! enumerate pairs, links and permutations directly. They share no code with
//! the engine.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use litcoref::{Chain, Mention, Partition, Role};
use proptest::prelude::*;

pub type Sets = Vec<BTreeSet<usize>>;

pub fn to_partition(sets: &Sets, role: Role) -> Partition {
    Partition::new(
        "doc",
        role,
        sets.iter().enumerate().map(|(i, s)| {
            Chain::new(
                format!("c{i}"),
                s.iter().map(|&t| Mention::new("doc", t, t)),
            )
            .unwrap()
        }),
    )
    .unwrap()
}

/// Chains over tokens `0..universe`: each token is absent or gets one of
/// `max_chains` labels. Empty labels are dropped.
pub fn sets_strategy(universe: usize, max_chains: usize) -> impl Strategy<Value = Sets> {
    proptest::collection::vec(proptest::option::weighted(0.8, 0..max_chains), universe).prop_map(
        |labels| {
            let mut by_label: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
            for (tok, label) in labels.into_iter().enumerate() {
                if let Some(l) = label {
                    by_label.entry(l).or_default().insert(tok);
                }
            }
            by_label.into_values().collect()
        },
    )
}

pub fn pair_strategy(universe: usize, max_chains: usize) -> impl Strategy<Value = (Sets, Sets)> {
    (
        sets_strategy(universe, max_chains),
        sets_strategy(universe, max_chains),
    )
}

/// Response mentions absent from the key removed; empty chains dropped.
pub fn strip_spurious(response: &Sets, key: &Sets) -> Sets {
    let key_mentions: BTreeSet<usize> = key.iter().flatten().copied().collect();
    response
        .iter()
        .map(|r| {
            r.intersection(&key_mentions)
                .copied()
                .collect::<BTreeSet<_>>()
        })
        .filter(|r| !r.is_empty())
        .collect()
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn f1(r: f64, p: f64) -> f64 {
    if r + p > 0.0 {
        2.0 * r * p / (r + p)
    } else {
        0.0
    }
}

fn chain_of(sets: &Sets, m: usize) -> Option<&BTreeSet<usize>> {
    sets.iter().find(|s| s.contains(&m))
}

/// Link counting by explicit partition of each chain into blocks.
pub fn muc_recall(key: &Sets, response: &Sets) -> f64 {
    let (mut num, mut den) = (0usize, 0usize);
    for k in key.iter().filter(|k| k.len() >= 2) {
        let mut blocks: BTreeSet<(bool, usize)> = BTreeSet::new();
        for &m in k {
            match response.iter().position(|r| r.contains(&m)) {
                Some(j) => blocks.insert((true, j)),
                None => blocks.insert((false, m)),
            };
        }
        num += k.len() - blocks.len();
        den += k.len() - 1;
    }
    ratio(num as f64, den as f64)
}

/// Mean over mentions of |K(m) ∩ R(m)| / |K(m)|.
pub fn b3_recall(key: &Sets, response: &Sets) -> f64 {
    let empty = BTreeSet::new();
    let mut fractions = Vec::new();
    for k in key {
        for &m in k {
            let r = chain_of(response, m).unwrap_or(&empty);
            fractions.push(k.intersection(r).count() as f64 / k.len() as f64);
        }
    }
    ratio(fractions.iter().sum(), fractions.len() as f64)
}

/// Best total similarity over every injective assignment.
pub fn ceaf_best(key: &Sets, response: &Sets, entity: bool) -> f64 {
    let phi = |k: &BTreeSet<usize>, r: &BTreeSet<usize>| {
        let common = k.intersection(r).count() as f64;
        if entity {
            2.0 * common / (k.len() + r.len()) as f64
        } else {
            common
        }
    };
    let w: Vec<Vec<f64>> = key
        .iter()
        .map(|k| response.iter().map(|r| phi(k, r)).collect())
        .collect();
    brute_force_assignment(&w)
}

pub fn ceaf_scores(key: &Sets, response: &Sets, entity: bool) -> (f64, f64) {
    let best = ceaf_best(key, response, entity);
    if entity {
        (
            ratio(best, key.len() as f64),
            ratio(best, response.len() as f64),
        )
    } else {
        let km: usize = key.iter().map(BTreeSet::len).sum();
        let rm: usize = response.iter().map(BTreeSet::len).sum();
        (ratio(best, km as f64), ratio(best, rm as f64))
    }
}

/// Enumerates permutations of the larger side.
pub fn brute_force_assignment(w: &[Vec<f64>]) -> f64 {
    let rows = w.len();
    let cols = w.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let n = rows.max(cols);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::NEG_INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let total: f64 = (0..rows).filter(|&i| p[i] < cols).map(|i| w[i][p[i]]).sum();
        best = best.max(total);
    });
    best
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

fn mentions(sets: &Sets) -> Vec<usize> {
    sets.iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

type Links = BTreeSet<(usize, usize)>;

/// Coreferent and non-coreferent mention pairs.
fn link_sets(sets: &Sets) -> (Links, Links) {
    let ms = mentions(sets);
    let mut coref = BTreeSet::new();
    let mut non = BTreeSet::new();
    for (i, &a) in ms.iter().enumerate() {
        for &b in &ms[i + 1..] {
            if chain_of(sets, a).is_some_and(|c| c.contains(&b)) {
                coref.insert((a, b));
            } else {
                non.insert((a, b));
            }
        }
    }
    (coref, non)
}

/// (recall, precision, f1) by explicit pair enumeration.
pub fn blanc_scores(key: &Sets, response: &Sets) -> (f64, f64, f64) {
    let (ck, nk) = link_sets(key);
    let (cr, nr) = link_sets(response);
    let category = |k: &BTreeSet<(usize, usize)>, r: &BTreeSet<(usize, usize)>| {
        let common = k.intersection(r).count() as f64;
        let rec = ratio(common, k.len() as f64);
        let prec = ratio(common, r.len() as f64);
        (rec, prec, f1(rec, prec))
    };
    let c = category(&ck, &cr);
    let n = category(&nk, &nr);
    let coref_absent = ck.is_empty() && cr.is_empty();
    let non_absent = nk.is_empty() && nr.is_empty();
    match (coref_absent, non_absent) {
        (true, true) => (0.0, 0.0, 0.0),
        (true, false) => n,
        (false, true) => c,
        (false, false) => ((c.0 + n.0) / 2.0, (c.1 + n.1) / 2.0, (c.2 + n.2) / 2.0),
    }
}

fn links_of(set: &BTreeSet<usize>) -> BTreeSet<(usize, usize)> {
    let v: Vec<usize> = set.iter().copied().collect();
    let mut out = BTreeSet::new();
    for (i, &a) in v.iter().enumerate() {
        for &b in &v[i + 1..] {
            out.insert((a, b));
        }
    }
    out
}

/// Size-weighted resolution with explicit link sets and singleton self-links.
pub fn lea_recall(key: &Sets, response: &Sets) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for k in key {
        let resolution = if k.len() == 1 {
            let m = *k.iter().next().unwrap();
            match chain_of(response, m) {
                Some(r) if r.len() == 1 => 1.0,
                _ => 0.0,
            }
        } else {
            let kl = links_of(k);
            let found: usize = response
                .iter()
                .map(|r| kl.intersection(&links_of(r)).count())
                .sum();
            found as f64 / kl.len() as f64
        };
        num += k.len() as f64 * resolution;
        den += k.len() as f64;
    }
    ratio(num, den)
}
