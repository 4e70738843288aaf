//! Precision, recall and their combined P&R measure against gold annotations.
//!
//! Pairing is one-to-one and maximizes the number of true positives: a system
//! and a gold annotation are compatible when their spans agree under the match
//! mode and every requested key agrees. The maximum is found with augmenting
//! paths, per document.
//!
//! Degenerate counts: precision with no system output is 0, recall with no
//! gold annotation is 0, except that empty system and empty gold agree
//! perfectly (all measures 1).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Focalisation, Mention, Span};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("ratio out of range [0, 1]: {0}")]
    OutOfRange(String),
    #[error("document `{0}` is not part of the evaluated document set")]
    MismatchedDocuments(String),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// `2pr / (p + r)`, or 0 when `p + r = 0`.
pub fn fmeasure<T: Scalar>(precision: T, recall: T) -> Result<T, EvalError> {
    let unit = |x: T| T::zero() <= x && x <= T::one();
    if !unit(precision) || !unit(recall) {
        return Err(EvalError::OutOfRange(format!(
            "p={precision:?}, r={recall:?}"
        )));
    }
    let sum = precision + recall;
    if sum == T::zero() {
        return Ok(T::zero());
    }
    let two = T::one() + T::one();
    Ok(two * precision * recall / sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    /// Identical spans.
    Exact,
    /// Intersecting spans.
    Overlap,
}

impl FromStr for MatchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(MatchMode::Exact),
            "overlap" => Ok(MatchMode::Overlap),
            _ => Err(format!("match mode must be exact or overlap, got `{s}`")),
        }
    }
}

impl fmt::Display for MatchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchMode::Exact => "exact",
            MatchMode::Overlap => "overlap",
        })
    }
}

/// Which fields must agree for a pair to count. Each level includes the
/// previous ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreKeys {
    Span,
    Type,
    Facet,
}

impl FromStr for ScoreKeys {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "span" => Ok(ScoreKeys::Span),
            "type" => Ok(ScoreKeys::Type),
            "facet" => Ok(ScoreKeys::Facet),
            _ => Err(format!("score keys must be span, type or facet, got `{s}`")),
        }
    }
}

impl fmt::Display for ScoreKeys {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScoreKeys::Span => "span",
            ScoreKeys::Type => "span+type",
            ScoreKeys::Facet => "span+type+facet",
        })
    }
}

/// One annotation in gold-file form. Used for both sides of a comparison.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GoldAnnotation {
    pub doc_id: String,
    pub span: Span,
    pub entity_type: String,
    /// Absent means `none`.
    pub focalisation: Option<Focalisation>,
}

impl GoldAnnotation {
    pub fn focus(&self) -> Focalisation {
        self.focalisation.clone().unwrap_or_default()
    }

    /// `doc_id<TAB>start<TAB>end<TAB>type<TAB>facet`
    pub fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.doc_id,
            self.span.start,
            self.span.end,
            self.entity_type,
            self.focus()
        )
    }
}

impl From<&Mention> for GoldAnnotation {
    fn from(m: &Mention) -> Self {
        GoldAnnotation {
            doc_id: m.doc_id.clone(),
            span: m.span,
            entity_type: m.sem.entity_type.clone(),
            focalisation: Some(m.sem.focalisation.clone()),
        }
    }
}

/// Parses `doc_id<TAB>start<TAB>end<TAB>type[<TAB>facet]` lines.
pub fn parse_gold(src: &str) -> Result<Vec<GoldAnnotation>, EvalError> {
    let mut out = Vec::new();
    for (line, fields) in crate::lexicon::records(src) {
        let malformed = |reason: String| EvalError::Malformed { line, reason };
        if !(4..=5).contains(&fields.len()) {
            return Err(malformed(format!(
                "expected 4 or 5 TAB-separated fields, found {}",
                fields.len()
            )));
        }
        let offset = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| malformed(format!("offset `{s}`: {e}")))
        };
        let start = offset(fields[1])?;
        let end = offset(fields[2])?;
        if start >= end {
            return Err(malformed(format!(
                "empty or reversed span [{start}, {end})"
            )));
        }
        if fields[0].is_empty() || fields[3].is_empty() {
            return Err(malformed("empty document id or type".into()));
        }
        out.push(GoldAnnotation {
            doc_id: fields[0].to_string(),
            span: Span::new(start, end),
            entity_type: fields[3].to_string(),
            focalisation: fields.get(4).map(|f| f.parse().unwrap()),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Counts {
    pub true_positive: usize,
    pub system_total: usize,
    pub gold_total: usize,
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        self.true_positive += o.true_positive;
        self.system_total += o.system_total;
        self.gold_total += o.gold_total;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrScores<T> {
    pub counts: Counts,
    pub precision: T,
    pub recall: T,
    pub combined: T,
}

impl<T: Scalar> PrScores<T> {
    pub fn from_counts(counts: Counts) -> Self {
        let Counts {
            true_positive: tp,
            system_total: sys,
            gold_total: gold,
        } = counts;
        debug_assert!(tp <= sys.min(gold));
        let (precision, recall) = if sys == 0 && gold == 0 {
            (T::one(), T::one())
        } else {
            let ratio = |n: usize, d: usize| {
                if d == 0 {
                    T::zero()
                } else {
                    T::from_count(n) / T::from_count(d)
                }
            };
            (ratio(tp, sys), ratio(tp, gold))
        };
        let combined = fmeasure(precision, recall).expect("count ratios lie in [0, 1]");
        PrScores {
            counts,
            precision,
            recall,
            combined,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrReport<T> {
    pub overall: PrScores<T>,
    /// Keyed by gold entity type.
    pub per_type: BTreeMap<String, PrScores<T>>,
    pub mode: MatchMode,
    pub keys: ScoreKeys,
}

fn compatible(s: &GoldAnnotation, g: &GoldAnnotation, mode: MatchMode, keys: ScoreKeys) -> bool {
    let spans = match mode {
        MatchMode::Exact => s.span == g.span,
        MatchMode::Overlap => s.span.overlaps(&g.span),
    };
    spans
        && (keys < ScoreKeys::Type || s.entity_type == g.entity_type)
        && (keys < ScoreKeys::Facet || s.focus() == g.focus())
}

/// Size of a maximum matching in the bipartite graph `edges[s]` (system to
/// gold indices), via augmenting paths.
pub(crate) fn max_matching(edges: &[Vec<usize>], gold_len: usize) -> usize {
    fn augment(
        s: usize,
        edges: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &g in &edges[s] {
            if seen[g] {
                continue;
            }
            seen[g] = true;
            if owner[g].is_none_or(|o| augment(o, edges, seen, owner)) {
                owner[g] = Some(s);
                return true;
            }
        }
        false
    }

    let mut owner = vec![None; gold_len];
    let mut size = 0;
    for s in 0..edges.len() {
        let mut seen = vec![false; gold_len];
        if augment(s, edges, &mut seen, &mut owner) {
            size += 1;
        }
    }
    size
}

fn count_all(
    system: &[&GoldAnnotation],
    gold: &[&GoldAnnotation],
    mode: MatchMode,
    keys: ScoreKeys,
) -> Counts {
    let mut by_doc: BTreeMap<&str, (Vec<&GoldAnnotation>, Vec<&GoldAnnotation>)> = BTreeMap::new();
    for s in system {
        by_doc.entry(&s.doc_id).or_default().0.push(s);
    }
    for g in gold {
        by_doc.entry(&g.doc_id).or_default().1.push(g);
    }
    let mut counts = Counts::default();
    for (sys, gold) in by_doc.values_mut() {
        sys.sort();
        gold.sort();
        let edges: Vec<Vec<usize>> = sys
            .iter()
            .map(|s| {
                (0..gold.len())
                    .filter(|&j| compatible(s, gold[j], mode, keys))
                    .collect()
            })
            .collect();
        counts += Counts {
            true_positive: max_matching(&edges, gold.len()),
            system_total: sys.len(),
            gold_total: gold.len(),
        };
    }
    counts
}

/// Scores system annotations against gold over the documents named by either.
pub fn score_annotations<T: Scalar>(
    system: &[GoldAnnotation],
    gold: &[GoldAnnotation],
    mode: MatchMode,
    keys: ScoreKeys,
) -> PrReport<T> {
    let sys: Vec<&GoldAnnotation> = system.iter().collect();
    let gld: Vec<&GoldAnnotation> = gold.iter().collect();
    let overall = PrScores::from_counts(count_all(&sys, &gld, mode, keys));

    let types: BTreeSet<&str> = gold.iter().map(|g| g.entity_type.as_str()).collect();
    let per_type = types
        .into_iter()
        .map(|t| {
            let sys: Vec<_> = system.iter().filter(|a| a.entity_type == t).collect();
            let gld: Vec<_> = gold.iter().filter(|a| a.entity_type == t).collect();
            (
                t.to_string(),
                PrScores::from_counts(count_all(&sys, &gld, mode, keys)),
            )
        })
        .collect();
    PrReport {
        overall,
        per_type,
        mode,
        keys,
    }
}

/// Like [`score_annotations`], but every annotation must belong to `documents`.
pub fn score_documents<T: Scalar>(
    documents: &BTreeSet<String>,
    system: &[GoldAnnotation],
    gold: &[GoldAnnotation],
    mode: MatchMode,
    keys: ScoreKeys,
) -> Result<PrReport<T>, EvalError> {
    if let Some(a) = system
        .iter()
        .chain(gold)
        .find(|a| !documents.contains(&a.doc_id))
    {
        return Err(EvalError::MismatchedDocuments(a.doc_id.clone()));
    }
    Ok(score_annotations(system, gold, mode, keys))
}

/// Scores recognized mentions against gold annotations.
pub fn score<T: Scalar>(
    system: &[Mention],
    gold: &[GoldAnnotation],
    mode: MatchMode,
    keys: ScoreKeys,
) -> PrReport<T> {
    let system: Vec<GoldAnnotation> = system.iter().map(GoldAnnotation::from).collect();
    score_annotations(&system, gold, mode, keys)
}
