//! Corpus profile: mention, chain and token counts, the chain-length
//! histogram, the rank-size series and a log-log least-squares fit of it.
//!
//! `num_chains` counts chains of two or more mentions; singletons are counted
//! separately. Both mentions-per-chain ratios are reported, with and without
//! singletons.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{Document, Partition};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CorpusStats {
    pub num_documents: usize,
    pub num_mentions: usize,
    /// Chains with at least two mentions.
    pub num_chains: usize,
    pub num_singletons: usize,
    pub num_tokens: usize,
    /// `num_mentions / (num_chains + num_singletons)`; `None` when undefined.
    pub mentions_per_chain_incl: Option<f64>,
    /// `(num_mentions − num_singletons) / num_chains`; `None` when undefined.
    pub mentions_per_chain_excl: Option<f64>,
    /// Chain size → number of chains of that size.
    pub length_histogram: BTreeMap<usize, usize>,
    pub rank_size: Vec<RankSize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankSize {
    pub rank: usize,
    pub size: usize,
}

pub fn compute_stats<'a, I>(docs: I) -> CorpusStats
where
    I: IntoIterator<Item = (&'a Document, &'a Partition)>,
{
    let mut stats = CorpusStats::default();
    // (size, doc_id, chain_id) for the rank-size ordering
    let mut sizes: Vec<(usize, &str, &str)> = Vec::new();
    for (doc, partition) in docs {
        stats.num_documents += 1;
        stats.num_tokens += doc.num_tokens;
        for chain in partition.chains() {
            let n = chain.len();
            stats.num_mentions += n;
            if n == 1 {
                stats.num_singletons += 1;
            } else {
                stats.num_chains += 1;
            }
            *stats.length_histogram.entry(n).or_insert(0) += 1;
            sizes.push((n, partition.doc_id(), chain.id()));
        }
    }
    sizes.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| (a.1, a.2).cmp(&(b.1, b.2))));
    stats.rank_size = sizes
        .iter()
        .enumerate()
        .map(|(i, &(size, _, _))| RankSize { rank: i + 1, size })
        .collect();

    let all_chains = stats.num_chains + stats.num_singletons;
    stats.mentions_per_chain_incl =
        (all_chains > 0).then(|| stats.num_mentions as f64 / all_chains as f64);
    stats.mentions_per_chain_excl = (stats.num_chains > 0)
        .then(|| (stats.num_mentions - stats.num_singletons) as f64 / stats.num_chains as f64);
    stats
}

/// Chains sorted by size, largest first; ties by document then chain id.
pub fn rank_size_series(stats: &CorpusStats) -> Vec<RankSize> {
    stats.rank_size.clone()
}

impl CorpusStats {
    /// Rank-size series without singletons, re-ranked from 1.
    pub fn rank_size_without_singletons(&self) -> Vec<RankSize> {
        self.rank_size
            .iter()
            .filter(|p| p.size > 1)
            .enumerate()
            .map(|(i, p)| RankSize {
                rank: i + 1,
                size: p.size,
            })
            .collect()
    }
}

/// Least-squares line through `(ln rank, ln size)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZipfFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination; `None` when the sizes have no variance.
    pub r_squared: Option<f64>,
    pub n_points: usize,
}

pub fn zipf_fit(series: &[RankSize]) -> Result<ZipfFit, Error> {
    let points: Vec<(f64, f64)> = series
        .iter()
        .map(|p| ((p.rank as f64).ln(), (p.size as f64).ln()))
        .collect();
    fit_log_points(&points)
}

/// Same fit on real-valued series (e.g. sizes before integer rounding).
pub fn zipf_fit_real(series: &[(f64, f64)]) -> Result<ZipfFit, Error> {
    let points: Vec<(f64, f64)> = series.iter().map(|&(r, s)| (r.ln(), s.ln())).collect();
    fit_log_points(&points)
}

fn fit_log_points(points: &[(f64, f64)]) -> Result<ZipfFit, Error> {
    if points.is_empty() {
        return Err(Error::EmptySeries);
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in points {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy > 0.0 && sxx > 0.0 {
        let ss_res: f64 = points
            .iter()
            .map(|&(x, y)| {
                let e = y - (intercept + slope * x);
                e * e
            })
            .sum();
        Some((1.0 - ss_res / syy).clamp(0.0, 1.0))
    } else {
        None
    };
    Ok(ZipfFit {
        slope,
        intercept,
        r_squared,
        n_points: points.len(),
    })
}

/// Corpus statistics with the rank-size fit, as printed by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub stats: CorpusStats,
    /// Absent when the corpus has no chains to fit.
    pub zipf: Option<ZipfFit>,
    /// Whether singletons were left out of the fitted series.
    pub exclude_singletons: bool,
}

impl StatsReport {
    pub fn new(stats: CorpusStats, exclude_singletons: bool) -> Self {
        let mut report = Self {
            stats,
            zipf: None,
            exclude_singletons,
        };
        report.zipf = zipf_fit(&report.series()).ok();
        report
    }

    /// The fitted rank-size series.
    pub fn series(&self) -> Vec<RankSize> {
        if self.exclude_singletons {
            self.stats.rank_size_without_singletons()
        } else {
            rank_size_series(&self.stats)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Chain, Mention, Role};

    fn corpus(doc: &str, sizes: &[usize]) -> (Document, Partition) {
        let mut start = 0;
        let chains: Vec<Chain> = sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let c = Chain::new(
                    format!("c{i:03}"),
                    (start..start + n).map(|t| Mention::new(doc, t, t)),
                )
                .unwrap();
                start += n;
                c
            })
            .collect();
        (
            Document::new(doc, start + 5),
            Partition::new(doc, Role::Key, chains).unwrap(),
        )
    }

    #[test]
    fn single_chain() {
        let (d, p) = corpus("d", &[2]);
        let s = compute_stats([(&d, &p)]);
        assert_eq!((s.num_mentions, s.num_chains, s.num_singletons), (2, 1, 0));
        assert_eq!(s.mentions_per_chain_incl, Some(2.0));
        assert_eq!(s.mentions_per_chain_excl, Some(2.0));
        assert_eq!(s.num_tokens, 7);
    }

    #[test]
    fn empty_corpus() {
        let s = compute_stats(std::iter::empty());
        assert_eq!(s.num_mentions, 0);
        assert_eq!(s.mentions_per_chain_incl, None);
        assert_eq!(s.mentions_per_chain_excl, None);
        assert!(s.rank_size.is_empty());
    }

    #[test]
    fn only_singletons_has_no_excl_ratio() {
        let (d, p) = corpus("d", &[1, 1, 1]);
        let s = compute_stats([(&d, &p)]);
        assert_eq!(s.mentions_per_chain_incl, Some(1.0));
        assert_eq!(s.mentions_per_chain_excl, None);
        assert_eq!(s.length_histogram[&1], 3);
    }

    #[test]
    fn rank_size_ordering() {
        let (d, p) = corpus("d", &[3, 5, 1, 3]);
        let s = compute_stats([(&d, &p)]);
        let got: Vec<(usize, usize)> = rank_size_series(&s)
            .iter()
            .map(|p| (p.rank, p.size))
            .collect();
        assert_eq!(got, vec![(1, 5), (2, 3), (3, 3), (4, 1)]);

        let (d, p) = corpus("d", &[4]);
        assert_eq!(
            compute_stats([(&d, &p)]).rank_size,
            vec![RankSize { rank: 1, size: 4 }]
        );

        let (d, p) = corpus("d", &[2, 2, 2]);
        let s = compute_stats([(&d, &p)]);
        assert!(s
            .rank_size
            .iter()
            .enumerate()
            .all(|(i, p)| p.rank == i + 1 && p.size == 2));

        let (d, p) = corpus("d", &[3, 1, 2, 1]);
        let no_single = compute_stats([(&d, &p)]).rank_size_without_singletons();
        assert_eq!(
            no_single,
            vec![RankSize { rank: 1, size: 3 }, RankSize { rank: 2, size: 2 }]
        );
    }

    #[test]
    fn zipf_examples() {
        let series: Vec<RankSize> = (1..=50)
            .map(|r| RankSize {
                rank: r,
                size: ((1000.0 / r as f64).round() as usize).max(1),
            })
            .collect();
        let fit = zipf_fit(&series).unwrap();
        assert!((fit.slope + 1.0).abs() < 0.05);
        assert!(fit.r_squared.unwrap() >= 0.99);
        assert_eq!(fit.n_points, 50);

        let flat: Vec<RankSize> = (1..=8).map(|r| RankSize { rank: r, size: 4 }).collect();
        let fit = zipf_fit(&flat).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.r_squared, None);

        let one = zipf_fit(&[RankSize { rank: 1, size: 9 }]).unwrap();
        assert_eq!(one.slope, 0.0);
        assert_eq!(one.r_squared, None);

        assert!(matches!(zipf_fit(&[]), Err(Error::EmptySeries)));
    }

    #[test]
    fn exact_power_law_recovers_exponent() {
        let series: Vec<(f64, f64)> = (1..=40)
            .map(|r| (r as f64, 250.0 * (r as f64).powf(-1.3)))
            .collect();
        let fit = zipf_fit_real(&series).unwrap();
        assert!((fit.slope + 1.3).abs() < 1e-9);
        assert!((fit.intercept - 250f64.ln()).abs() < 1e-9);
    }
}
