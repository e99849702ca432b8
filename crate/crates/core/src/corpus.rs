//! Multi-document scoring: key and response documents are matched by id,
//! scored in parallel, and reduced in doc-id order.

use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conll_io::CorpusSource;
use crate::error::Error;
use crate::metrics::{
    score_metrics, spurious_removal_reports, MetricId, MetricReport, PathologyReport,
};
use crate::model::{Document, Partition};
use crate::stratification::{stratified_score_metrics, StratifiedReport, StratumConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    /// Sum numerators and denominators over documents, then divide.
    #[default]
    Micro,
    /// Mean of per-document scores.
    Macro,
}

impl FromStr for Averaging {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "micro" => Ok(Self::Micro),
            "macro" => Ok(Self::Macro),
            other => Err(format!("unknown averaging `{other}`")),
        }
    }
}

/// A key document with its response.
#[derive(Debug, Clone)]
pub struct DocPair {
    pub document: Document,
    pub key: Partition,
    pub response: Partition,
}

/// Matches documents by id; a document present on one side only is an error.
/// The result is sorted by doc id.
pub fn align_documents(key: CorpusSource, response: CorpusSource) -> Result<Vec<DocPair>, Error> {
    let mut responses: BTreeMap<String, Partition> = response
        .documents
        .into_iter()
        .map(|(d, p)| (d.doc_id, p))
        .collect();
    let mut pairs = Vec::with_capacity(key.documents.len());
    for (document, key) in key.documents {
        let response =
            responses
                .remove(&document.doc_id)
                .ok_or_else(|| Error::MissingDocument {
                    doc_id: document.doc_id.clone(),
                    present: "key",
                    missing: "response",
                })?;
        pairs.push(DocPair {
            document,
            key,
            response,
        });
    }
    if let Some(doc_id) = responses.into_keys().next() {
        return Err(Error::MissingDocument {
            doc_id,
            present: "response",
            missing: "key",
        });
    }
    pairs.sort_by(|a, b| a.document.doc_id.cmp(&b.document.doc_id));
    Ok(pairs)
}

fn per_document<T, F>(pairs: &[DocPair], f: F) -> Result<Vec<T>, Error>
where
    T: Send,
    F: Fn(&DocPair) -> Result<T, Error> + Sync + Send,
{
    // collect preserves input order
    pairs.par_iter().map(f).collect()
}

pub fn score_corpus(
    pairs: &[DocPair],
    metrics: &[MetricId],
    averaging: Averaging,
) -> Result<MetricReport, Error> {
    let reports = per_document(pairs, |p| Ok(score_metrics(&p.key, &p.response, metrics)?))?;
    Ok(match averaging {
        Averaging::Micro => MetricReport::micro(&reports),
        Averaging::Macro => MetricReport::macro_average(&reports),
    })
}

pub fn stratify_corpus(
    pairs: &[DocPair],
    config: &StratumConfig,
    metrics: &[MetricId],
    averaging: Averaging,
) -> Result<StratifiedReport, Error> {
    let reports = per_document(pairs, |p| {
        Ok(stratified_score_metrics(
            &p.key,
            &p.response,
            config,
            metrics,
        )?)
    })?;
    Ok(match averaging {
        Averaging::Micro => StratifiedReport::micro(&reports, *config),
        Averaging::Macro => StratifiedReport::macro_average(&reports, *config),
    })
}

pub fn pathology_corpus(
    pairs: &[DocPair],
    metrics: &[MetricId],
    averaging: Averaging,
) -> Result<PathologyReport, Error> {
    let reports = per_document(pairs, |p| {
        Ok(spurious_removal_reports(&p.key, &p.response, metrics)?)
    })?;
    let (before, after): (Vec<MetricReport>, Vec<MetricReport>) = reports.into_iter().unzip();
    let merge = match averaging {
        Averaging::Micro => MetricReport::micro::<'_>,
        Averaging::Macro => MetricReport::macro_average::<'_>,
    };
    Ok(PathologyReport::from_reports(merge(&before), merge(&after)))
}
