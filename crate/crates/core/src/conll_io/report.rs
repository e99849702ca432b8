//! Text table, JSON and CSV rendering of reports.
//!
//! CSV uses `,` separators, `.` decimals and four decimal places for every
//! score. JSON carries full precision.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus_stats::StatsReport;
use crate::metrics::{MetricReport, PathologyReport};
use crate::model::ScoreTriple;
use crate::stratification::StratifiedReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Self::Table),
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(format!("unknown output format `{other}`")),
        }
    }
}

pub trait Report: Serialize {
    fn write_table(&self, out: &mut String);
    fn write_csv(&self, out: &mut String);
}

pub fn emit_report<R: Report + ?Sized>(report: &R, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Table => report.write_table(&mut out),
        OutputFormat::Csv => report.write_csv(&mut out),
        OutputFormat::Json => {
            out = serde_json::to_string_pretty(report).expect("reports serialize");
            out.push('\n');
        }
    }
    out
}

/// Four-decimal fixed point; never prints `-0.0000`.
pub fn fmt4(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

/// `recall,precision,f1` at four decimals.
pub fn csv_triple(t: &ScoreTriple) -> String {
    format!("{},{},{}", fmt4(t.recall), fmt4(t.precision), fmt4(t.f1))
}

const CONLL_LABEL: &str = "conll_average";
const CONLL_NOTE: &str = "(mean F1 of muc, b3, ceaf_e; an average, not a score)";

fn table_rows(out: &mut String, label_width: usize, prefix: &str, report: &MetricReport) {
    for (id, s) in &report.scores {
        let _ = writeln!(
            out,
            "{prefix}{:<label_width$}  {:>9}  {:>9}  {:>9}",
            id.name(),
            fmt4(s.recall),
            fmt4(s.precision),
            fmt4(s.f1)
        );
    }
    if let Some(avg) = report.conll_average {
        let _ = writeln!(
            out,
            "{prefix}{CONLL_LABEL:<label_width$}  {:>9}  {:>9}  {:>9}  {CONLL_NOTE}",
            "",
            "",
            fmt4(avg)
        );
    }
}

impl Report for MetricReport {
    fn write_table(&self, out: &mut String) {
        let w = CONLL_LABEL.len();
        let _ = writeln!(
            out,
            "{:<w$}  {:>9}  {:>9}  {:>9}",
            "metric", "recall", "precision", "f1"
        );
        table_rows(out, w, "", self);
        let c = &self.counts;
        let _ = writeln!(
            out,
            "\nkey: {} mentions, {} chains ({} singletons); response: {} mentions, {} chains ({} singletons); spurious response mentions: {}",
            c.key_mentions,
            c.key_chains,
            c.key_singletons,
            c.response_mentions,
            c.response_chains,
            c.response_singletons,
            c.spurious_mentions
        );
    }

    fn write_csv(&self, out: &mut String) {
        out.push_str("metric,recall,precision,f1\n");
        for (id, s) in &self.scores {
            let _ = writeln!(out, "{},{}", id.name(), csv_triple(s));
        }
        if let Some(avg) = self.conll_average {
            let _ = writeln!(out, "{CONLL_LABEL},,,{}", fmt4(avg));
        }
    }
}

impl Report for StratifiedReport {
    fn write_table(&self, out: &mut String) {
        let w = CONLL_LABEL.len().max("singleton_detection".len());
        let _ = writeln!(
            out,
            "{:<10}  {:<w$}  {:>9}  {:>9}  {:>9}",
            "stratum", "metric", "recall", "precision", "f1"
        );
        if self.is_empty() {
            return;
        }
        for (stratum, report) in &self.per_stratum {
            let prefix = format!("{:<10}  ", stratum.name());
            table_rows(out, w, &prefix, report);
        }
        let s = &self.singleton_detection;
        let _ = writeln!(
            out,
            "{:<10}  {:<w$}  {:>9}  {:>9}  {:>9}",
            "all",
            "singleton_detection",
            fmt4(s.recall),
            fmt4(s.precision),
            fmt4(s.f1)
        );
        let _ = writeln!(
            out,
            "\nleakage: {} of {} response chains straddle strata; spurious response mentions: {}",
            self.leakage, self.response_chains, self.spurious_mentions
        );
        let _ = writeln!(
            out,
            "strata: major = chains of >= {} mentions{}; secondary = other chains; singleton = one mention",
            self.config.long_threshold(),
            if self.config.require_named() {
                " with a named mention"
            } else {
                ""
            }
        );
    }

    fn write_csv(&self, out: &mut String) {
        out.push_str("stratum,metric,recall,precision,f1\n");
        if self.is_empty() {
            return;
        }
        for (stratum, report) in &self.per_stratum {
            for (id, s) in &report.scores {
                let _ = writeln!(out, "{},{},{}", stratum.name(), id.name(), csv_triple(s));
            }
            if let Some(avg) = report.conll_average {
                let _ = writeln!(out, "{},{CONLL_LABEL},,,{}", stratum.name(), fmt4(avg));
            }
        }
        let _ = writeln!(
            out,
            "all,singleton_detection,{}",
            csv_triple(&self.singleton_detection)
        );
    }
}

impl Report for PathologyReport {
    fn write_table(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "{:<8}  {:>9}  {:>9}  {:>9}  {:>9}  {:>9}  {:>9}",
            "metric", "R before", "R after", "R delta", "P before", "P after", "P delta"
        );
        for (id, d) in &self.deltas {
            let b = self.before.scores[id];
            let a = self.after.scores[id];
            let _ = writeln!(
                out,
                "{:<8}  {:>9}  {:>9}  {:>9}  {:>9}  {:>9}  {:>9}",
                id.name(),
                fmt4(b.recall),
                fmt4(a.recall),
                fmt4(d.recall),
                fmt4(b.precision),
                fmt4(a.precision),
                fmt4(d.precision)
            );
        }
        let _ = writeln!(
            out,
            "\nspurious response mentions removed: {}",
            self.before.counts.spurious_mentions
        );
    }

    fn write_csv(&self, out: &mut String) {
        out.push_str("metric,recall_before,recall_after,recall_delta,precision_before,precision_after,precision_delta,f1_before,f1_after,f1_delta\n");
        for (id, d) in &self.deltas {
            let b = self.before.scores[id];
            let a = self.after.scores[id];
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                id.name(),
                fmt4(b.recall),
                fmt4(a.recall),
                fmt4(d.recall),
                fmt4(b.precision),
                fmt4(a.precision),
                fmt4(d.precision),
                fmt4(b.f1),
                fmt4(a.f1),
                fmt4(d.f1)
            );
        }
    }
}

fn display_ratio(r: Option<f64>) -> String {
    match r {
        Some(x) => format!("{}", x.round() as u64),
        None => "undefined".to_string(),
    }
}

impl Report for StatsReport {
    fn write_table(&self, out: &mut String) {
        let s = &self.stats;
        let rows: [(&str, String); 7] = [
            ("# of documents", s.num_documents.to_string()),
            ("# of mentions", s.num_mentions.to_string()),
            ("# of chains (without singletons)", s.num_chains.to_string()),
            (
                "# of mentions per chain (incl. singletons)",
                display_ratio(s.mentions_per_chain_incl),
            ),
            (
                "# of mentions per chain (without singletons)",
                display_ratio(s.mentions_per_chain_excl),
            ),
            ("# of singletons", s.num_singletons.to_string()),
            ("# of tokens", s.num_tokens.to_string()),
        ];
        let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        for (label, value) in rows {
            let _ = writeln!(out, "{label:<w$}  {value:>8}");
        }
        out.push('\n');
        out.push_str("chain length histogram (size: count)\n");
        for (size, count) in &s.length_histogram {
            let _ = writeln!(out, "  {size:>6}: {count}");
        }
        out.push('\n');
        match &self.zipf {
            Some(fit) => {
                let r2 = fit.r_squared.map_or_else(|| "undefined".to_string(), fmt4);
                let _ = writeln!(
                    out,
                    "log-log rank-size fit{}: slope {}, intercept {}, r^2 {}, {} points",
                    if self.exclude_singletons {
                        " (singletons excluded)"
                    } else {
                        ""
                    },
                    fmt4(fit.slope),
                    fmt4(fit.intercept),
                    r2,
                    fit.n_points
                );
            }
            None => out.push_str("log-log rank-size fit: no chains\n"),
        }
    }

    /// The rank-size series, for external plotting.
    fn write_csv(&self, out: &mut String) {
        out.push_str("rank,size\n");
        for p in self.series() {
            let _ = writeln!(out, "{},{}", p.rank, p.size);
        }
    }
}
