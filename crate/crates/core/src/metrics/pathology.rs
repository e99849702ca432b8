use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{remove_spurious, score_metrics, MetricId, MetricReport};
use crate::error::ModelError;
use crate::model::Partition;

/// Change of one metric between two reports (`after − before`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Delta {
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

/// Scores before and after deleting the response's spurious mentions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathologyReport {
    pub before: MetricReport,
    pub after: MetricReport,
    pub deltas: BTreeMap<MetricId, Delta>,
}

impl PathologyReport {
    pub fn from_reports(before: MetricReport, after: MetricReport) -> Self {
        let deltas = before
            .scores
            .iter()
            .filter_map(|(id, b)| {
                after.scores.get(id).map(|a| {
                    (
                        *id,
                        Delta {
                            recall: a.recall - b.recall,
                            precision: a.precision - b.precision,
                            f1: a.f1 - b.f1,
                        },
                    )
                })
            })
            .collect();
        Self {
            before,
            after,
            deltas,
        }
    }

    pub fn recall_delta(&self, id: MetricId) -> Option<f64> {
        self.deltas.get(&id).map(|d| d.recall)
    }
}

/// Pairs of reports `(before, after)` for one document.
pub fn spurious_removal_reports(
    key: &Partition,
    response: &Partition,
    metrics: &[MetricId],
) -> Result<(MetricReport, MetricReport), ModelError> {
    let before = score_metrics(key, response, metrics)?;
    let cleaned = remove_spurious(response, key)?;
    let after = score_metrics(key, &cleaned, metrics)?;
    Ok((before, after))
}

/// Re-scores the response with its spurious mentions removed.
pub fn spurious_removal(
    key: &Partition,
    response: &Partition,
) -> Result<PathologyReport, ModelError> {
    let (before, after) = spurious_removal_reports(key, response, &MetricId::ALL)?;
    Ok(PathologyReport::from_reports(before, after))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::partition;

    #[test]
    fn no_spurious_no_change() {
        let key = partition(&[&[1, 2, 3], &[4, 5]]);
        let resp = partition(&[&[1, 2], &[3, 4, 5]]);
        let report = spurious_removal(&key, &resp).unwrap();
        for d in report.deltas.values() {
            assert_eq!(*d, Delta::default());
        }
    }

    #[test]
    fn ceaf_e_recall_moves_muc_does_not() {
        let key = partition(&[&[1, 2, 3]]);
        let resp = partition(&[&[1, 2, 8, 9]]);
        let report = spurious_removal(&key, &resp).unwrap();
        assert_eq!(report.recall_delta(MetricId::Muc), Some(0.0));
        assert!(report.recall_delta(MetricId::CeafE).unwrap() > 0.0);
    }
}
