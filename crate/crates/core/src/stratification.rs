//! Stratified scoring for long narrative texts.
//!
//! Key chains fall into three strata: long chains (optionally required to
//! contain a named mention) for main characters, the remaining non-singleton
//! chains for secondary characters, and singletons. Each stratum is scored
//! on its own by projecting the response onto the stratum's key mentions.
//! Response chains that straddle strata are counted as leakage, since the
//! projection would otherwise hide them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ModelError};
use crate::metrics::{score_metrics, MetricId, MetricReport, Ratio};
use crate::model::{Chain, Mention, Partition, ScoreTriple, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stratum {
    Major,
    Secondary,
    Singleton,
}

impl Stratum {
    pub const ALL: [Stratum; 3] = [Stratum::Major, Stratum::Secondary, Stratum::Singleton];

    pub fn name(self) -> &'static str {
        match self {
            Stratum::Major => "major",
            Stratum::Secondary => "secondary",
            Stratum::Singleton => "singleton",
        }
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumConfig {
    long_threshold: usize,
    require_named: bool,
}

impl StratumConfig {
    pub const DEFAULT_LONG_THRESHOLD: usize = 10;

    pub fn new(long_threshold: usize, require_named: bool) -> Result<Self, Error> {
        if long_threshold < 2 {
            return Err(Error::Config(format!(
                "long threshold must be at least 2, got {long_threshold}"
            )));
        }
        Ok(Self {
            long_threshold,
            require_named,
        })
    }

    pub fn long_threshold(&self) -> usize {
        self.long_threshold
    }

    pub fn require_named(&self) -> bool {
        self.require_named
    }

    /// Drops the named-mention requirement when no mention of the corpus is
    /// flagged as named. Returns the adjusted config and whether it changed.
    pub fn degrade_for<'a>(
        self,
        partitions: impl IntoIterator<Item = &'a Partition>,
    ) -> (Self, bool) {
        if !self.require_named {
            return (self, false);
        }
        let any_named = partitions
            .into_iter()
            .any(|p| p.chains().iter().any(Chain::has_named));
        if any_named {
            (self, false)
        } else {
            (
                Self {
                    require_named: false,
                    ..self
                },
                true,
            )
        }
    }
}

impl Default for StratumConfig {
    fn default() -> Self {
        Self {
            long_threshold: Self::DEFAULT_LONG_THRESHOLD,
            require_named: true,
        }
    }
}

pub fn classify_chain(chain: &Chain, config: &StratumConfig) -> Stratum {
    if chain.is_singleton() {
        Stratum::Singleton
    } else if chain.len() >= config.long_threshold && (!config.require_named || chain.has_named()) {
        Stratum::Major
    } else {
        Stratum::Secondary
    }
}

/// Splits the key chains by stratum. All three strata are present in the
/// result, possibly empty.
pub fn stratify(key: &Partition, config: &StratumConfig) -> BTreeMap<Stratum, Vec<Chain>> {
    let mut out: BTreeMap<Stratum, Vec<Chain>> =
        Stratum::ALL.iter().map(|&s| (s, Vec::new())).collect();
    for chain in key.chains() {
        out.get_mut(&classify_chain(chain, config))
            .expect("every stratum present")
            .push(chain.clone());
    }
    out
}

/// Restricts every chain of `p` to `keep`, dropping chains left empty.
pub fn project(p: &Partition, keep: &BTreeSet<Mention>) -> Partition {
    p.filter_mentions(|m| keep.contains(m))
}

/// Recall: share of key singletons kept as response singletons. Precision:
/// share of response singletons that are key singletons.
pub fn singleton_detection(
    key: &Partition,
    response: &Partition,
) -> Result<ScoreTriple, ModelError> {
    let [r, p] = singleton_tally(key, response)?;
    Ok(ScoreTriple::new(r.value(), p.value()))
}

fn singleton_tally(key: &Partition, response: &Partition) -> Result<[Ratio; 2], ModelError> {
    key.same_document(response)?;
    let side = |a: &Partition, b: &Partition| {
        let mut ratio = Ratio::default();
        for chain in a.chains().iter().filter(|c| c.is_singleton()) {
            let span = chain.spans().next().expect("singleton has one mention");
            ratio.den += 1.0;
            if b.chain_index(span)
                .is_some_and(|j| b.chains()[j].is_singleton())
            {
                ratio.num += 1.0;
            }
        }
        ratio
    };
    Ok([side(key, response), side(response, key)])
}

/// Per-stratum metric reports with singleton detection and leakage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratifiedReport {
    /// Only strata holding at least one key chain appear.
    pub per_stratum: BTreeMap<Stratum, MetricReport>,
    pub singleton_detection: ScoreTriple,
    /// Response chains whose key mentions fall in two or more strata.
    pub leakage: usize,
    pub response_chains: usize,
    pub key_mentions: usize,
    /// Response mentions outside every key chain, excluded from all strata.
    pub spurious_mentions: usize,
    pub config: StratumConfig,
    #[serde(skip)]
    singletons: [Ratio; 2],
}

impl StratifiedReport {
    pub fn empty(config: StratumConfig) -> Self {
        Self {
            per_stratum: BTreeMap::new(),
            singleton_detection: ScoreTriple::ZERO,
            leakage: 0,
            response_chains: 0,
            key_mentions: 0,
            spurious_mentions: 0,
            config,
            singletons: [Ratio::default(); 2],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.per_stratum.is_empty()
    }

    fn combine<'a>(
        reports: &[&'a StratifiedReport],
        config: StratumConfig,
        merge: impl Fn(Vec<&'a MetricReport>) -> MetricReport,
    ) -> Self {
        let mut out = Self::empty(config);
        for stratum in Stratum::ALL {
            let parts: Vec<&MetricReport> = reports
                .iter()
                .filter_map(|r| r.per_stratum.get(&stratum))
                .collect();
            if !parts.is_empty() {
                out.per_stratum.insert(stratum, merge(parts));
            }
        }
        for r in reports {
            out.leakage += r.leakage;
            out.response_chains += r.response_chains;
            out.key_mentions += r.key_mentions;
            out.spurious_mentions += r.spurious_mentions;
            out.singletons[0] += r.singletons[0];
            out.singletons[1] += r.singletons[1];
        }
        out.singleton_detection =
            ScoreTriple::new(out.singletons[0].value(), out.singletons[1].value());
        out
    }

    /// Sums every stratum's tallies across documents before dividing.
    pub fn micro<'a>(
        reports: impl IntoIterator<Item = &'a StratifiedReport>,
        config: StratumConfig,
    ) -> Self {
        let reports: Vec<&StratifiedReport> = reports.into_iter().collect();
        Self::combine(&reports, config, MetricReport::micro)
    }

    /// Averages per-stratum triples over the documents holding that stratum.
    /// Singleton detection is averaged over all documents.
    pub fn macro_average<'a>(
        reports: impl IntoIterator<Item = &'a StratifiedReport>,
        config: StratumConfig,
    ) -> Self {
        let reports: Vec<&StratifiedReport> = reports.into_iter().collect();
        let mut out = Self::combine(&reports, config, MetricReport::macro_average);
        if !reports.is_empty() {
            let n = reports.len() as f64;
            let mut sum = ScoreTriple::ZERO;
            for r in &reports {
                sum.recall += r.singleton_detection.recall;
                sum.precision += r.singleton_detection.precision;
                sum.f1 += r.singleton_detection.f1;
            }
            out.singleton_detection = ScoreTriple {
                recall: sum.recall / n,
                precision: sum.precision / n,
                f1: sum.f1 / n,
            };
        }
        out
    }
}

pub fn stratified_score(
    key: &Partition,
    response: &Partition,
    config: &StratumConfig,
) -> Result<StratifiedReport, ModelError> {
    stratified_score_metrics(key, response, config, &MetricId::ALL)
}

pub fn stratified_score_metrics(
    key: &Partition,
    response: &Partition,
    config: &StratumConfig,
    metrics: &[MetricId],
) -> Result<StratifiedReport, ModelError> {
    key.same_document(response)?;
    let mut report = StratifiedReport::empty(*config);
    let mut label: HashMap<Span, Stratum> = HashMap::with_capacity(key.num_mentions());

    for (stratum, chains) in stratify(key, config) {
        if chains.is_empty() {
            continue;
        }
        let keep: BTreeSet<Mention> = chains.iter().flat_map(|c| c.mentions().cloned()).collect();
        for m in &keep {
            label.insert(m.span, stratum);
        }
        let key_part = Partition::new(key.doc_id(), key.role(), chains)?;
        let resp_part = project(response, &keep);
        report.per_stratum.insert(
            stratum,
            score_metrics(&key_part, &resp_part, metrics)?.without_vacuous(),
        );
    }

    report.leakage = response
        .chains()
        .iter()
        .filter(|chain| {
            let strata: BTreeSet<Stratum> = chain
                .spans()
                .filter_map(|s| label.get(&s).copied())
                .collect();
            strata.len() >= 2
        })
        .count();
    report.response_chains = response.num_chains();
    report.key_mentions = key.num_mentions();
    report.spurious_mentions = response
        .chains()
        .iter()
        .flat_map(|c| c.spans())
        .filter(|&s| !key.contains_span(s))
        .count();
    report.singletons = singleton_tally(key, response)?;
    report.singleton_detection =
        ScoreTriple::new(report.singletons[0].value(), report.singletons[1].value());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Role;
    use crate::testing::partition;

    fn sized_chain(id: &str, start: usize, len: usize, named: bool) -> Chain {
        Chain::new(
            id,
            (start..start + len).map(|t| Mention::new("d", t, t).named(named && t == start)),
        )
        .unwrap()
    }

    fn cfg(threshold: usize, named: bool) -> StratumConfig {
        StratumConfig::new(threshold, named).unwrap()
    }

    #[test]
    fn classify_examples() {
        let defaults = StratumConfig::default();
        assert_eq!(
            classify_chain(&sized_chain("a", 0, 1, false), &defaults),
            Stratum::Singleton
        );
        assert_eq!(
            classify_chain(&sized_chain("a", 0, 15, true), &defaults),
            Stratum::Major
        );
        assert_eq!(
            classify_chain(&sized_chain("a", 0, 15, false), &defaults),
            Stratum::Secondary
        );
        assert_eq!(
            classify_chain(&sized_chain("a", 0, 15, false), &cfg(10, false)),
            Stratum::Major
        );
    }

    #[test]
    fn threshold_below_two_rejected() {
        assert!(StratumConfig::new(1, false).is_err());
        assert!(StratumConfig::new(2, false).is_ok());
    }

    #[test]
    fn stratify_sizes() {
        let mut start = 0;
        let chains: Vec<Chain> = [83, 12, 3, 1, 1]
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let c = sized_chain(&i.to_string(), start, n, false);
                start += n;
                c
            })
            .collect();
        let key = Partition::new("d", Role::Key, chains).unwrap();
        let sizes = |s: &BTreeMap<Stratum, Vec<Chain>>, st| -> Vec<usize> {
            s[&st].iter().map(Chain::len).collect()
        };
        let s = stratify(&key, &cfg(10, false));
        assert_eq!(sizes(&s, Stratum::Major), vec![83, 12]);
        assert_eq!(sizes(&s, Stratum::Secondary), vec![3]);
        assert_eq!(sizes(&s, Stratum::Singleton), vec![1, 1]);

        let s = stratify(&key, &cfg(2, false));
        assert!(s[&Stratum::Secondary].is_empty());
        assert_eq!(s[&Stratum::Major].len(), 3);

        let s = stratify(&Partition::empty("d", Role::Key), &StratumConfig::default());
        assert!(s.values().all(Vec::is_empty));
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn project_examples() {
        let p = partition(&[&[1, 2], &[3]]);
        let keep: BTreeSet<Mention> = [1, 3].iter().map(|&t| Mention::new("d", t, t)).collect();
        let projected = project(&p, &keep);
        assert_eq!(projected.num_chains(), 2);
        assert_eq!(projected.chain_by_id("0").unwrap().len(), 1);

        assert_eq!(project(&p, &p.mentions_of()), p);

        let none: BTreeSet<Mention> = [Mention::new("d", 7, 7)].into_iter().collect();
        assert!(project(&p, &none).is_empty());
    }

    #[test]
    fn singleton_detection_examples() {
        let key = partition(&[&[1], &[2], &[3, 4]]);
        let resp = partition(&[&[1], &[2, 3, 4]]);
        let s = singleton_detection(&key, &resp).unwrap();
        assert_eq!((s.recall, s.precision), (0.5, 1.0));

        let none = partition(&[&[1, 2]]);
        assert_eq!(
            singleton_detection(&none, &none).unwrap(),
            ScoreTriple::ZERO
        );

        assert_eq!(
            singleton_detection(&key, &key).unwrap(),
            ScoreTriple::new(1.0, 1.0)
        );
    }

    #[test]
    fn merged_singleton_leaks() {
        let major = sized_chain("A", 0, 12, true);
        let single = sized_chain("s1", 100, 1, false);
        let key = Partition::new("d", Role::Key, [major.clone(), single]).unwrap();
        let merged = Chain::new(
            "R",
            major
                .mentions()
                .cloned()
                .chain([Mention::new("d", 100, 100)]),
        )
        .unwrap();
        let resp = Partition::new("d", Role::Response, [merged]).unwrap();
        let report = stratified_score(&key, &resp, &StratumConfig::default()).unwrap();
        assert_eq!(report.leakage, 1);
        assert_eq!(report.singleton_detection.recall, 0.0);
        assert!(report.leakage <= report.response_chains);
    }

    #[test]
    fn identity_is_perfect() {
        let key = Partition::new(
            "d",
            Role::Key,
            [
                sized_chain("a", 0, 12, true),
                sized_chain("b", 20, 3, false),
                sized_chain("c", 30, 1, false),
            ],
        )
        .unwrap();
        let report = stratified_score(&key, &key, &StratumConfig::default()).unwrap();
        assert_eq!(report.per_stratum.len(), 3);
        assert_eq!(report.leakage, 0);
        for (stratum, r) in &report.per_stratum {
            for (id, s) in &r.scores {
                assert_eq!(s.f1, 1.0, "{stratum} {id}");
            }
        }
        // a lone singleton offers MUC and BLANC nothing to measure
        let singles = &report.per_stratum[&Stratum::Singleton];
        assert!(singles.get(MetricId::Muc).is_none());
        assert!(singles.get(MetricId::Blanc).is_none());
        assert_eq!(singles.get(MetricId::Lea).unwrap().f1, 1.0);
        let total: usize = report
            .per_stratum
            .values()
            .map(|r| r.counts.key_mentions)
            .sum();
        assert_eq!(total, report.key_mentions);
    }

    #[test]
    fn spurious_mentions_reported() {
        let key = partition(&[&[1, 2]]);
        let resp = partition(&[&[1, 2, 9]]);
        let report = stratified_score(&key, &resp, &cfg(2, false)).unwrap();
        assert_eq!(report.spurious_mentions, 1);
        assert_eq!(
            report.per_stratum[&Stratum::Major].counts.spurious_mentions,
            0
        );
    }

    #[test]
    fn degrade_without_named_mentions() {
        let plain = partition(&[&[1, 2]]);
        let (c, changed) = StratumConfig::default().degrade_for([&plain]);
        assert!(changed);
        assert!(!c.require_named());

        let named = Partition::new("d", Role::Key, [sized_chain("a", 0, 3, true)]).unwrap();
        let (c, changed) = StratumConfig::default().degrade_for([&plain, &named]);
        assert!(!changed);
        assert!(c.require_named());
    }
}
