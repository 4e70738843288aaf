//! Surface-rule entity recognition.
//!
//! Two sources of mentions:
//! - gazetteer matches, typed by the gazetteer;
//! - marker rules: a run of capitalized unknown words right before or after
//!   a lexical marker (`Mr Dupont`, `Acme Inc.`) takes the marker's type.
//!
//! Gazetteer matches take precedence over marker candidates. Articles and
//! other elided clitics are never part of a mention.

use crate::hierarchy::TypeHierarchy;
use crate::lexicon::{MarkerPosition, WordList};
use crate::matcher::{PatternKind, PatternMatcher};
use crate::model::{Document, Mention, SemFrame, Span};
use crate::tokenizer::Token;

/// Longest run of words a marker can type.
pub const MAX_MARKER_RUN: usize = 4;

/// Span covering tokens `[start, end)`.
pub fn token_span(tokens: &[Token], start: usize, end: usize) -> Span {
    Span::new(tokens[start].span.start, tokens[end - 1].span.end)
}

pub fn recognize(
    doc: &Document,
    tokens: &[Token],
    matcher: &PatternMatcher,
    h: &TypeHierarchy,
    dictionary: Option<&WordList>,
) -> Vec<Mention> {
    let matches = matcher.find_all(tokens);
    let mut covered = vec![false; tokens.len()];
    for m in &matches {
        covered[m.start..m.end].iter_mut().for_each(|c| *c = true);
    }

    let mut taken: Vec<(usize, usize, String)> = matches
        .iter()
        .filter_map(|m| match &m.kind {
            PatternKind::Name { entity_type } => Some((m.start, m.end, entity_type.clone())),
            PatternKind::Marker { .. } => None,
        })
        .collect();

    let is_candidate = |i: usize, sentence: usize| {
        let t = &tokens[i];
        t.sentence_index == sentence
            && t.is_word
            && t.is_capitalized()
            && !t.is_clitic()
            && !covered[i]
            && !dictionary.is_some_and(|d| d.contains(&t.surface))
    };

    for m in &matches {
        let PatternKind::Marker {
            entity_type,
            position,
        } = &m.kind
        else {
            continue;
        };
        let sentence = tokens[m.start].sentence_index;
        let (start, end) = match position {
            MarkerPosition::Before => {
                let mut end = m.end;
                while end < tokens.len()
                    && end - m.end < MAX_MARKER_RUN
                    && is_candidate(end, sentence)
                {
                    end += 1;
                }
                (m.end, end)
            }
            MarkerPosition::After => {
                let mut start = m.start;
                while start > 0
                    && m.start - start < MAX_MARKER_RUN
                    && is_candidate(start - 1, sentence)
                {
                    start -= 1;
                }
                (start, m.start)
            }
        };
        if start == end || taken.iter().any(|(s, e, _)| start < *e && *s < end) {
            continue;
        }
        taken.push((start, end, entity_type.clone()));
    }

    taken.sort();
    taken
        .into_iter()
        .filter(|(_, _, t)| h.contains(t))
        .map(|(start, end, entity_type)| {
            let span = token_span(tokens, start, end);
            Mention {
                lexical_unit: doc.slice(span).unwrap_or_default().to_string(),
                span,
                doc_id: doc.id.clone(),
                sem: SemFrame::new(entity_type),
            }
        })
        .collect()
}
