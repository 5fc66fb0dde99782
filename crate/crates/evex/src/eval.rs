//! Precision / recall / F-measure scoring of predicted event roles.
//!
//! The unit of comparison is the (document, surface, role) pair with
//! case-insensitive surfaces. Totals are micro-averaged: counts are summed
//! across documents first, then the formulas apply.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::{Add, AddAssign};

use indexmap::IndexMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("gold file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Gold (surface, role) pairs for one document.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoldAnnotation {
    pub document: String,
    pub items: Vec<(String, String)>,
}

/// Gold annotations grouped by document, in file order.
#[derive(Clone, Debug, Default)]
pub struct GoldAnnotations {
    docs: IndexMap<String, GoldAnnotation>,
}

impl GoldAnnotations {
    /// Parses `docid TAB surface TAB role` lines, `#` comments allowed.
    /// Duplicate pairs within one document are an error.
    pub fn parse(text: &str) -> Result<Self, EvalError> {
        let mut gold = GoldAnnotations::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [document, surface, role] = fields.as_slice() else {
                return Err(EvalError::Parse {
                    line: idx + 1,
                    message: "expected docid TAB surface TAB role".to_string(),
                });
            };
            if document.is_empty() || surface.is_empty() || role.is_empty() {
                return Err(EvalError::Parse {
                    line: idx + 1,
                    message: "empty field".to_string(),
                });
            }
            let annotation = gold
                .docs
                .entry(document.to_string())
                .or_insert_with(|| GoldAnnotation {
                    document: document.to_string(),
                    items: Vec::new(),
                });
            let pair = (surface.to_string(), role.to_string());
            if annotation.items.contains(&pair) {
                return Err(EvalError::Parse {
                    line: idx + 1,
                    message: format!("duplicate pair {pair:?} for document {document}"),
                });
            }
            annotation.items.push(pair);
        }
        Ok(gold)
    }

    pub fn documents(&self) -> impl Iterator<Item = &GoldAnnotation> {
        self.docs.values()
    }

    pub fn get(&self, document: &str) -> Option<&GoldAnnotation> {
        self.docs.get(document)
    }
}

/// TP/FP/FN/TN bookkeeping. TN is recorded for completeness but no metric
/// consumes it; in the open-universe setting it stays 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    pub true_negatives: u64,
}

impl Add for ConfusionCounts {
    type Output = ConfusionCounts;

    fn add(self, other: ConfusionCounts) -> ConfusionCounts {
        ConfusionCounts {
            true_positives: self.true_positives + other.true_positives,
            false_positives: self.false_positives + other.false_positives,
            false_negatives: self.false_negatives + other.false_negatives,
            true_negatives: self.true_negatives + other.true_negatives,
        }
    }
}

impl AddAssign for ConfusionCounts {
    fn add_assign(&mut self, other: ConfusionCounts) {
        *self = *self + other;
    }
}

/// Compares predicted (surface, role) pairs against one document's gold.
/// Surfaces compare case-insensitively; prediction order is irrelevant.
pub fn match_predictions(
    predicted: &[(String, String)],
    gold: &GoldAnnotation,
) -> ConfusionCounts {
    let normalize =
        |pairs: &[(String, String)]| -> BTreeSet<(String, String)> {
            pairs
                .iter()
                .map(|(s, r)| (s.to_lowercase(), r.clone()))
                .collect()
        };
    let predicted = normalize(predicted);
    let gold = normalize(&gold.items);
    ConfusionCounts {
        true_positives: predicted.intersection(&gold).count() as u64,
        false_positives: predicted.difference(&gold).count() as u64,
        false_negatives: gold.difference(&predicted).count() as u64,
        true_negatives: 0,
    }
}

/// TP / (TP + FP). An empty denominator is 1.0 when gold is also empty
/// (vacuous agreement) and 0.0 otherwise.
pub fn precision(counts: &ConfusionCounts) -> f64 {
    let denominator = counts.true_positives + counts.false_positives;
    if denominator == 0 {
        return if counts.false_negatives == 0 { 1.0 } else { 0.0 };
    }
    counts.true_positives as f64 / denominator as f64
}

/// TP / (TP + FN), with the symmetric zero-denominator convention.
pub fn recall(counts: &ConfusionCounts) -> f64 {
    let denominator = counts.true_positives + counts.false_negatives;
    if denominator == 0 {
        return if counts.false_positives == 0 { 1.0 } else { 0.0 };
    }
    counts.true_positives as f64 / denominator as f64
}

/// 2PR / (P + R), 0 when both are 0.
pub fn f_measure(counts: &ConfusionCounts) -> f64 {
    let p = precision(counts);
    let r = recall(counts);
    if p + r == 0.0 {
        return 0.0;
    }
    2.0 * p * r / (p + r)
}

/// A finished evaluation: per-file rows, per-role rows, micro total.
#[derive(Clone, Debug)]
pub struct EvalReport {
    pub per_file: Vec<(String, ConfusionCounts)>,
    pub per_role: Vec<(String, ConfusionCounts)>,
    pub total: ConfusionCounts,
}

/// Scores predictions against gold. `roles` lists every schema role so the
/// per-role table is complete even for roles nobody predicted.
pub fn score(
    predictions: &[(String, String, String)],
    gold: &GoldAnnotations,
    roles: &[String],
) -> EvalReport {
    let mut documents: Vec<String> = Vec::new();
    for (doc, _, _) in predictions {
        if !documents.contains(doc) {
            documents.push(doc.clone());
        }
    }
    for annotation in gold.documents() {
        if !documents.contains(&annotation.document) {
            documents.push(annotation.document.clone());
        }
    }
    documents.sort();

    let empty = GoldAnnotation::default();
    let mut per_file = Vec::new();
    let mut total = ConfusionCounts::default();
    for document in &documents {
        let predicted: Vec<(String, String)> = predictions
            .iter()
            .filter(|(d, _, _)| d == document)
            .map(|(_, s, r)| (s.clone(), r.clone()))
            .collect();
        let annotation = gold.get(document).unwrap_or(&empty);
        let counts = match_predictions(&predicted, annotation);
        total += counts;
        per_file.push((document.clone(), counts));
    }

    let mut role_names: Vec<String> = roles.to_vec();
    for (_, _, role) in predictions {
        if !role_names.contains(role) {
            role_names.push(role.clone());
        }
    }
    for annotation in gold.documents() {
        for (_, role) in &annotation.items {
            if !role_names.contains(role) {
                role_names.push(role.clone());
            }
        }
    }
    let mut per_role = Vec::new();
    for role in role_names {
        let mut counts = ConfusionCounts::default();
        for document in &documents {
            let predicted: Vec<(String, String)> = predictions
                .iter()
                .filter(|(d, _, r)| d == document && *r == role)
                .map(|(_, s, r)| (s.clone(), r.clone()))
                .collect();
            let annotation = gold.get(document).cloned().unwrap_or_default();
            let filtered = GoldAnnotation {
                document: annotation.document,
                items: annotation
                    .items
                    .into_iter()
                    .filter(|(_, r)| *r == role)
                    .collect(),
            };
            counts += match_predictions(&predicted, &filtered);
        }
        per_role.push((role, counts));
    }

    EvalReport {
        per_file,
        per_role,
        total,
    }
}

/// Renders a percentage at `decimals` places, rounding half up.
pub fn percent(value: f64, decimals: usize) -> String {
    let factor = 10f64.powi(decimals as i32);
    let rounded = (value * 100.0 * factor).round() / factor;
    format!("{rounded:.decimals$}%")
}

impl EvalReport {
    /// Human-readable tables: per-file P/R/F, per-role precision, total.
    pub fn render_text(&self, decimals: usize) -> String {
        let mut out = String::new();
        let width = self
            .per_file
            .iter()
            .map(|(f, _)| f.len())
            .chain(["File".len(), "Total".len()])
            .max()
            .unwrap_or(5);
        let _ = writeln!(
            out,
            "{:width$}  {:>9}  {:>7}  {:>9}",
            "File", "Precision", "Recall", "F-measure"
        );
        for (file, counts) in &self.per_file {
            let _ = writeln!(
                out,
                "{file:width$}  {:>9}  {:>7}  {:>9}",
                percent(precision(counts), decimals),
                percent(recall(counts), decimals),
                percent(f_measure(counts), decimals),
            );
        }
        let _ = writeln!(
            out,
            "{:width$}  {:>9}  {:>7}  {:>9}",
            "Total",
            percent(precision(&self.total), decimals),
            percent(recall(&self.total), decimals),
            percent(f_measure(&self.total), decimals),
        );

        let role_width = self
            .per_role
            .iter()
            .map(|(r, _)| r.len())
            .chain(["Role".len()])
            .max()
            .unwrap_or(4);
        let _ = writeln!(out);
        let _ = writeln!(out, "{:role_width$}  {:>9}", "Role", "Precision");
        for (role, counts) in &self.per_role {
            let touched = counts.true_positives + counts.false_positives + counts.false_negatives;
            let rendered = if touched == 0 {
                "—".to_string()
            } else {
                percent(precision(counts), decimals)
            };
            let _ = writeln!(out, "{role:role_width$}  {rendered:>9}");
        }
        out
    }

    /// CSV rows `file,tp,fp,fn,precision,recall,f` plus a TOTAL row.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("file,tp,fp,fn,precision,recall,f\n");
        let mut row = |name: &str, counts: &ConfusionCounts| {
            let _ = writeln!(
                out,
                "{name},{},{},{},{:.4},{:.4},{:.4}",
                counts.true_positives,
                counts.false_positives,
                counts.false_negatives,
                precision(counts),
                recall(counts),
                f_measure(counts),
            );
        };
        for (file, counts) in &self.per_file {
            row(file, counts);
        }
        row("TOTAL", &self.total);
        out
    }
}
