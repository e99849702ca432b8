//! Coreference metrics: MUC, B³, CEAF (φ3 and φ4), BLANC and LEA, side by
//! side, with the CoNLL average of MUC, B³ and CEAF-entity F1.
//!
//! Every metric is computed as a [`Tally`] of numerators and denominators so
//! that multi-document corpora can be micro-averaged before dividing. All
//! 0/0 ratios evaluate to 0.

mod alignment;
mod b_cubed;
mod blanc;
mod ceaf;
mod lea;
mod muc;
pub(crate) mod overlap;
mod pathology;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use alignment::{optimal_alignment, Alignment};
pub use b_cubed::b_cubed;
pub use blanc::blanc;
pub use ceaf::{ceaf, CeafVariant};
pub use lea::lea;
pub use muc::muc;
pub use pathology::{spurious_removal, spurious_removal_reports, Delta, PathologyReport};

use crate::error::{Error, ModelError};
use crate::model::{Partition, ScoreTriple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MetricId {
    #[serde(rename = "muc")]
    Muc,
    #[serde(rename = "b3")]
    BCubed,
    #[serde(rename = "ceaf_m")]
    CeafM,
    #[serde(rename = "ceaf_e")]
    CeafE,
    #[serde(rename = "blanc")]
    Blanc,
    #[serde(rename = "lea")]
    Lea,
}

impl MetricId {
    pub const ALL: [MetricId; 6] = [
        MetricId::Muc,
        MetricId::BCubed,
        MetricId::CeafM,
        MetricId::CeafE,
        MetricId::Blanc,
        MetricId::Lea,
    ];

    /// Metrics averaged into the CoNLL score.
    pub const CONLL: [MetricId; 3] = [MetricId::Muc, MetricId::BCubed, MetricId::CeafE];

    pub fn name(self) -> &'static str {
        match self {
            MetricId::Muc => "muc",
            MetricId::BCubed => "b3",
            MetricId::CeafM => "ceaf_m",
            MetricId::CeafE => "ceaf_e",
            MetricId::Blanc => "blanc",
            MetricId::Lea => "lea",
        }
    }

    pub(crate) fn tally(self, key: &Partition, response: &Partition) -> Result<Tally, ModelError> {
        match self {
            MetricId::Muc => muc::muc_tally(key, response),
            MetricId::BCubed => b_cubed::b_cubed_tally(key, response),
            MetricId::CeafM => ceaf::ceaf_tally(key, response, CeafVariant::Mention),
            MetricId::CeafE => ceaf::ceaf_tally(key, response, CeafVariant::Entity),
            MetricId::Blanc => blanc::blanc_tally(key, response),
            MetricId::Lea => lea::lea_tally(key, response),
        }
    }

    pub fn score(self, key: &Partition, response: &Partition) -> Result<ScoreTriple, ModelError> {
        self.tally(key, response).map(|t| t.score())
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "muc" => Ok(MetricId::Muc),
            "b3" | "bcub" | "b_cubed" | "bcubed" => Ok(MetricId::BCubed),
            "ceaf_m" | "ceafm" => Ok(MetricId::CeafM),
            "ceaf_e" | "ceafe" => Ok(MetricId::CeafE),
            "blanc" => Ok(MetricId::Blanc),
            "lea" => Ok(MetricId::Lea),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

/// A numerator over a denominator; 0/0 reads as 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Ratio {
    pub num: f64,
    pub den: f64,
}

impl Ratio {
    pub fn new(num: f64, den: f64) -> Self {
        Self { num, den }
    }

    pub fn value(self) -> f64 {
        if self.den == 0.0 {
            0.0
        } else {
            self.num / self.den
        }
    }
}

impl std::ops::AddAssign for Ratio {
    fn add_assign(&mut self, rhs: Ratio) {
        self.num += rhs.num;
        self.den += rhs.den;
    }
}

/// Accumulable counts behind one metric's score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tally {
    Ratios {
        recall: Ratio,
        precision: Ratio,
    },
    /// `[recall, precision]` for each link category.
    Blanc {
        coref: [Ratio; 2],
        non_coref: [Ratio; 2],
    },
}

impl Tally {
    pub fn score(&self) -> ScoreTriple {
        match *self {
            Tally::Ratios { recall, precision } => {
                ScoreTriple::new(recall.value(), precision.value())
            }
            Tally::Blanc { coref, non_coref } => blanc::combine(coref, non_coref),
        }
    }

    pub fn recall(&self) -> Option<Ratio> {
        match *self {
            Tally::Ratios { recall, .. } => Some(recall),
            Tally::Blanc { .. } => None,
        }
    }

    /// True when every denominator is zero, i.e. the metric has nothing to
    /// measure on this input.
    pub fn is_vacuous(&self) -> bool {
        match self {
            Tally::Ratios { recall, precision } => recall.den == 0.0 && precision.den == 0.0,
            Tally::Blanc { coref, non_coref } => {
                coref.iter().chain(non_coref).all(|r| r.den == 0.0)
            }
        }
    }

    pub fn merge(&mut self, other: &Tally) {
        match (self, other) {
            (
                Tally::Ratios { recall, precision },
                Tally::Ratios {
                    recall: r,
                    precision: p,
                },
            ) => {
                *recall += *r;
                *precision += *p;
            }
            (
                Tally::Blanc { coref, non_coref },
                Tally::Blanc {
                    coref: c,
                    non_coref: n,
                },
            ) => {
                for k in 0..2 {
                    coref[k] += c[k];
                    non_coref[k] += n[k];
                }
            }
            _ => unreachable!("tallies of different metrics are never merged"),
        }
    }
}

/// Mention and chain counts of a scored key/response pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counts {
    pub key_mentions: usize,
    pub response_mentions: usize,
    /// All key chains, singletons included.
    pub key_chains: usize,
    pub response_chains: usize,
    pub key_singletons: usize,
    pub response_singletons: usize,
    /// Response mentions absent from the key.
    pub spurious_mentions: usize,
}

impl Counts {
    pub fn of(key: &Partition, response: &Partition) -> Self {
        let spurious = response
            .chains()
            .iter()
            .flat_map(|c| c.spans())
            .filter(|&s| !key.contains_span(s))
            .count();
        Self {
            key_mentions: key.num_mentions(),
            response_mentions: response.num_mentions(),
            key_chains: key.num_chains(),
            response_chains: response.num_chains(),
            key_singletons: key.num_singletons(),
            response_singletons: response.num_singletons(),
            spurious_mentions: spurious,
        }
    }
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, rhs: Counts) {
        self.key_mentions += rhs.key_mentions;
        self.response_mentions += rhs.response_mentions;
        self.key_chains += rhs.key_chains;
        self.response_chains += rhs.response_chains;
        self.key_singletons += rhs.key_singletons;
        self.response_singletons += rhs.response_singletons;
        self.spurious_mentions += rhs.spurious_mentions;
    }
}

/// All requested metrics for one document or one aggregated corpus.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricReport {
    pub scores: BTreeMap<MetricId, ScoreTriple>,
    /// Mean F1 of MUC, B³ and CEAF-entity; absent unless all three are scored.
    pub conll_average: Option<f64>,
    pub counts: Counts,
    #[serde(skip)]
    tallies: BTreeMap<MetricId, Tally>,
}

impl MetricReport {
    fn from_tallies(tallies: BTreeMap<MetricId, Tally>, counts: Counts) -> Self {
        let scores = tallies.iter().map(|(&id, t)| (id, t.score())).collect();
        let mut report = Self {
            scores,
            conll_average: None,
            counts,
            tallies,
        };
        report.conll_average = conll_average(&report).ok();
        report
    }

    pub fn get(&self, id: MetricId) -> Option<ScoreTriple> {
        self.scores.get(&id).copied()
    }

    pub fn tally(&self, id: MetricId) -> Option<&Tally> {
        self.tallies.get(&id)
    }

    pub fn metrics(&self) -> impl Iterator<Item = MetricId> + '_ {
        self.scores.keys().copied()
    }

    /// Removes metrics with a vacuous tally.
    pub(crate) fn without_vacuous(mut self) -> Self {
        self.tallies.retain(|_, t| !t.is_vacuous());
        Self::from_tallies(self.tallies, self.counts)
    }

    /// Accumulates numerators and denominators across reports, then divides.
    pub fn micro<'a>(reports: impl IntoIterator<Item = &'a MetricReport>) -> MetricReport {
        let mut tallies: BTreeMap<MetricId, Tally> = BTreeMap::new();
        let mut counts = Counts::default();
        for report in reports {
            for (&id, tally) in &report.tallies {
                tallies
                    .entry(id)
                    .and_modify(|t| t.merge(tally))
                    .or_insert(*tally);
            }
            counts += report.counts;
        }
        Self::from_tallies(tallies, counts)
    }

    /// Unweighted mean of per-report triples, each metric averaged over the
    /// reports that carry it. The CoNLL average is the mean of the averaged
    /// F1 values; underlying tallies are still summed.
    pub fn macro_average<'a>(reports: impl IntoIterator<Item = &'a MetricReport>) -> MetricReport {
        let reports: Vec<&MetricReport> = reports.into_iter().collect();
        let mut report = Self::micro(reports.iter().copied());
        if reports.is_empty() {
            return report;
        }
        for (id, triple) in report.scores.iter_mut() {
            let mut sum = ScoreTriple::ZERO;
            let mut n = 0.0;
            for s in reports.iter().filter_map(|r| r.scores.get(id)) {
                sum.recall += s.recall;
                sum.precision += s.precision;
                sum.f1 += s.f1;
                n += 1.0;
            }
            *triple = ScoreTriple {
                recall: sum.recall / n,
                precision: sum.precision / n,
                f1: sum.f1 / n,
            };
        }
        report.conll_average = conll_average(&report).ok();
        report
    }
}

/// Scores the requested metrics, preserving `metrics` as a set.
pub fn score_metrics(
    key: &Partition,
    response: &Partition,
    metrics: &[MetricId],
) -> Result<MetricReport, ModelError> {
    key.same_document(response)?;
    let mut tallies = BTreeMap::new();
    for &id in metrics {
        if let std::collections::btree_map::Entry::Vacant(slot) = tallies.entry(id) {
            slot.insert(id.tally(key, response)?);
        }
    }
    Ok(MetricReport::from_tallies(
        tallies,
        Counts::of(key, response),
    ))
}

/// All six metrics, the CoNLL average and the mention/chain counts.
pub fn score_all(key: &Partition, response: &Partition) -> Result<MetricReport, ModelError> {
    score_metrics(key, response, &MetricId::ALL)
}

/// Arithmetic mean of the MUC, B³ and CEAF-entity F1 values.
pub fn conll_average(report: &MetricReport) -> Result<f64, Error> {
    let mut sum = 0.0;
    for id in MetricId::CONLL {
        sum += report.get(id).ok_or(Error::MissingMetric(id))?.f1;
    }
    Ok(sum / 3.0)
}

/// Drops every response mention missing from the key. Chains emptied by the
/// removal disappear; surviving chains keep their ids.
pub fn remove_spurious(response: &Partition, key: &Partition) -> Result<Partition, ModelError> {
    key.same_document(response)?;
    Ok(response.filter_mentions(|m| key.contains_span(m.span)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::partition;

    fn derived() -> (Partition, Partition) {
        (
            partition(&[&[1, 2, 3], &[4, 5]]),
            partition(&[&[1, 2], &[3, 4, 5]]),
        )
    }

    #[test]
    fn score_all_derived() {
        let (key, resp) = derived();
        let r = score_all(&key, &resp).unwrap();
        let f = |id| r.get(id).unwrap().f1;
        assert!((f(MetricId::Muc) - 2.0 / 3.0).abs() < 1e-12);
        assert!((f(MetricId::BCubed) - 11.0 / 15.0).abs() < 1e-12);
        assert!((f(MetricId::CeafM) - 0.8).abs() < 1e-12);
        assert!((f(MetricId::CeafE) - 0.8).abs() < 1e-12);
        assert!((f(MetricId::Blanc) - 7.0 / 12.0).abs() < 1e-12);
        assert!((f(MetricId::Lea) - 0.6).abs() < 1e-12);
        assert!((r.conll_average.unwrap() - 11.0 / 15.0).abs() < 1e-12);
        assert_eq!(r.counts.key_mentions, 5);
        assert_eq!(r.counts.response_chains, 2);
    }

    #[test]
    fn identity_all_ones() {
        let (key, _) = derived();
        let r = score_all(&key, &key).unwrap();
        for s in r.scores.values() {
            assert_eq!(s.f1, 1.0);
        }
    }

    #[test]
    fn empty_response_zero_recall() {
        let (key, _) = derived();
        let r = score_all(&key, &partition(&[])).unwrap();
        for s in r.scores.values() {
            assert_eq!(s.recall, 0.0);
        }
    }

    #[test]
    fn conll_average_of_printed_scores() {
        let mut report = MetricReport::default();
        report.scores.insert(
            MetricId::Muc,
            ScoreTriple {
                recall: 0.0,
                precision: 0.0,
                f1: 0.4,
            },
        );
        report.scores.insert(
            MetricId::BCubed,
            ScoreTriple {
                recall: 0.0,
                precision: 0.0,
                f1: 0.46,
            },
        );
        report.scores.insert(
            MetricId::CeafE,
            ScoreTriple {
                recall: 0.0,
                precision: 0.0,
                f1: 0.52,
            },
        );
        assert!((conll_average(&report).unwrap() - 0.46).abs() < 1e-12);

        for id in MetricId::CONLL {
            report.scores.insert(id, ScoreTriple::new(1.0, 1.0));
        }
        assert_eq!(conll_average(&report).unwrap(), 1.0);

        report.scores.remove(&MetricId::CeafE);
        assert!(matches!(
            conll_average(&report),
            Err(Error::MissingMetric(MetricId::CeafE))
        ));
    }

    #[test]
    fn subset_without_conll_metrics() {
        let (key, resp) = derived();
        let r = score_metrics(&key, &resp, &[MetricId::Lea, MetricId::Lea]).unwrap();
        assert_eq!(r.scores.len(), 1);
        assert_eq!(r.conll_average, None);
    }

    #[test]
    fn remove_spurious_cases() {
        let key = partition(&[&[1, 2]]);
        let cleaned = remove_spurious(&partition(&[&[1, 9]]), &key).unwrap();
        assert_eq!(cleaned, partition(&[&[1]]));

        let resp = partition(&[&[1], &[2]]);
        assert_eq!(remove_spurious(&resp, &key).unwrap(), resp);

        assert!(remove_spurious(&partition(&[&[8, 9]]), &key)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn doc_mismatch() {
        let key = partition(&[&[1, 2]]);
        let other = Partition::empty("elsewhere", crate::model::Role::Response);
        for id in MetricId::ALL {
            assert!(matches!(
                id.score(&key, &other),
                Err(ModelError::DocMismatch { .. })
            ));
        }
        assert!(remove_spurious(&other, &key).is_err());
    }

    #[test]
    fn micro_sums_before_dividing() {
        let (key, resp) = derived();
        let a = score_all(&key, &resp).unwrap();
        let b = score_all(&key, &key).unwrap();
        let micro = MetricReport::micro([&a, &b]);
        // MUC: recall (2 + 3) / (3 + 3)
        assert!((micro.get(MetricId::Muc).unwrap().recall - 5.0 / 6.0).abs() < 1e-12);
        let mac = MetricReport::macro_average([&a, &b]);
        assert!((mac.get(MetricId::Muc).unwrap().recall - (2.0 / 3.0 + 1.0) / 2.0).abs() < 1e-12);
        assert_eq!(micro.counts.key_mentions, 10);
    }

    #[test]
    fn metric_names_round_trip() {
        for id in MetricId::ALL {
            assert_eq!(id.name().parse::<MetricId>().unwrap(), id);
        }
        assert!("rouge".parse::<MetricId>().is_err());
    }
}
