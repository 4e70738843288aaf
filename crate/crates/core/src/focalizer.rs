//! Contextual focalization of entity mentions.
//!
//! A trigger rule fires for a mention when the rule applies to a supertype of
//! the mention's type and one of its forms occurs in the same sentence. The
//! winner is chosen by priority, then token distance to the mention, then rule
//! id. Two winners of equal rank naming different facets cancel out and the
//! focalisation stays `none`.

use serde::Serialize;

use crate::hierarchy::TypeHierarchy;
use crate::lexicon::{TriggerRule, TriggerRuleSet};
use crate::model::{Focalisation, Mention, SemFrame};
use crate::tokenizer::Token;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FocalizationTrace {
    pub lexical_unit: String,
    pub fired_rule: Option<String>,
    pub competing_rules: Vec<String>,
    pub facet: Focalisation,
}

/// Token distance between `[a_start, a_end)` and `[b_start, b_end)`, measured
/// between their nearest tokens. Adjacent ranges are at distance 1.
fn distance(a: (usize, usize), b: (usize, usize)) -> usize {
    if a.1 <= b.0 {
        b.0 - (a.1 - 1)
    } else {
        a.0 - (b.1 - 1)
    }
}

/// Smallest distance from the mention to an occurrence of any form of `rule`.
fn rule_distance(rule: &TriggerRule, folded: &[String], mention: (usize, usize)) -> Option<usize> {
    let mut best: Option<usize> = None;
    for pattern in rule.patterns() {
        if pattern.is_empty() || pattern.len() > folded.len() {
            continue;
        }
        for start in 0..=folded.len() - pattern.len() {
            let end = start + pattern.len();
            if start < mention.1 && mention.0 < end {
                continue;
            }
            if folded[start..end] == pattern[..] {
                let d = distance((start, end), mention);
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
    }
    best
}

/// Token index range of `mention` within `sentence`, if it is fully inside.
fn mention_tokens(mention: &Mention, sentence: &[Token]) -> Option<(usize, usize)> {
    let start = sentence
        .iter()
        .position(|t| t.span.start >= mention.span.start)?;
    let end = sentence
        .iter()
        .rposition(|t| t.span.end <= mention.span.end)
        .map(|i| i + 1)?;
    (start < end).then_some((start, end))
}

pub fn focalize(
    mention: &Mention,
    sentence: &[Token],
    rules: &TriggerRuleSet,
    h: &TypeHierarchy,
) -> (SemFrame, FocalizationTrace) {
    let entity_type = &mention.sem.entity_type;
    let mut matched: Vec<(&TriggerRule, usize)> = Vec::new();
    if let Some(range) = mention_tokens(mention, sentence) {
        let folded: Vec<String> = sentence.iter().map(Token::folded).collect();
        for rule in rules.rules() {
            if !h.is_subtype(entity_type, &rule.applies_to).unwrap_or(false) {
                continue;
            }
            if let Some(d) = rule_distance(rule, &folded, range) {
                matched.push((rule, d));
            }
        }
    }
    matched.sort_by(|(a, da), (b, db)| {
        b.priority
            .cmp(&a.priority)
            .then(da.cmp(db))
            .then_with(|| a.rule_id.cmp(&b.rule_id))
    });

    let ids = |skip: Option<&str>| -> Vec<String> {
        matched
            .iter()
            .map(|(r, _)| r.rule_id.clone())
            .filter(|id| Some(id.as_str()) != skip)
            .collect()
    };

    let (fired, competing, facet) = match matched.first() {
        None => (None, Vec::new(), Focalisation::Underspecified),
        Some((top, d)) => {
            let conflict = matched[1..]
                .iter()
                .any(|(r, dr)| r.priority == top.priority && dr == d && r.facet != top.facet);
            if conflict {
                (None, ids(None), Focalisation::Underspecified)
            } else {
                (
                    Some(top.rule_id.clone()),
                    ids(Some(&top.rule_id)),
                    Focalisation::Facet(top.facet.clone()),
                )
            }
        }
    };

    let frame = SemFrame {
        entity_type: entity_type.clone(),
        focalisation: facet.clone(),
    };
    let trace = FocalizationTrace {
        lexical_unit: mention.lexical_unit.clone(),
        fired_rule: fired,
        competing_rules: competing,
        facet,
    };
    (frame, trace)
}
