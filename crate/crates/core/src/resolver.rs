//! Definite nominal descriptions resolved by attribute inversion.
//!
//! `L'organisation de Kofi Annan` is read as a head noun typed `organization`
//! plus a complement `Kofi Annan`; any organization whose template carries
//! that complement as an attribute value is a candidate referent.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::hierarchy::TypeHierarchy;
use crate::kb::{normalize, TemplateStore, IS_COMPOSED_OF, IS_LEADED_BY, IS_LOCATED_IN, KIND_OF};
use crate::lexicon::{records, LexiconError};
use crate::model::{Document, Span};
use crate::recognizer::token_span;
use crate::tokenizer::{fold, Token};

const DEFINITE_ARTICLES: &[&str] = &["le", "la", "l'", "les"];
const OF: &[&str] = &["de", "d'"];

/// Common nouns that can head a definite description, with their type.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HeadLexicon {
    heads: BTreeMap<String, String>,
}

impl HeadLexicon {
    /// Parses `noun<TAB>type` lines.
    pub fn parse(src: &str) -> Result<Self, LexiconError> {
        let mut heads: BTreeMap<String, String> = BTreeMap::new();
        for (line, fields) in records(src) {
            if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
                return Err(LexiconError::Malformed {
                    line,
                    reason: "expected `noun<TAB>type`".into(),
                });
            }
            let noun = fold(fields[0]);
            if let Some(existing) = heads.get(&noun) {
                if existing != fields[1] {
                    return Err(LexiconError::DuplicateConflict {
                        line,
                        surface: fields[0].to_string(),
                        existing: existing.clone(),
                        new: fields[1].to_string(),
                    });
                }
            }
            heads.insert(noun, fields[1].to_string());
        }
        Ok(HeadLexicon { heads })
    }

    pub fn get(&self, noun: &str) -> Option<&str> {
        self.heads.get(&fold(noun)).map(String::as_str)
    }

    pub fn bind(&self, h: &TypeHierarchy) -> Result<(), LexiconError> {
        match self.heads.values().find(|t| !h.contains(t)) {
            Some(t) => Err(LexiconError::UnknownType(t.clone())),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefiniteDescription {
    /// Whole description as written, article included.
    pub text: String,
    pub head_noun: String,
    pub complement: String,
    pub span: Span,
    pub head_type: String,
}

/// Finds `<definite article> <head noun> de|d' <Capitalized Name...>` in one
/// sentence.
pub fn parse_descriptions(
    doc: &Document,
    sentence: &[Token],
    heads: &HeadLexicon,
) -> Vec<DefiniteDescription> {
    let mut out = Vec::new();
    let mut i = 0;
    while i + 3 < sentence.len() {
        let article = sentence[i].folded();
        let head = &sentence[i + 1];
        let head_type = heads.get(&head.surface);
        let of = sentence[i + 2].folded();
        let is_name = |t: &Token| t.is_word && t.is_capitalized() && !t.is_clitic();
        if !DEFINITE_ARTICLES.contains(&article.as_str())
            || !head.is_word
            || head_type.is_none()
            || !OF.contains(&of.as_str())
        {
            i += 1;
            continue;
        }
        let name_start = i + 3;
        let mut name_end = name_start;
        while name_end < sentence.len() && is_name(&sentence[name_end]) {
            name_end += 1;
        }
        if name_end == name_start {
            i += 1;
            continue;
        }
        let span = token_span(sentence, i, name_end);
        let complement_span = token_span(sentence, name_start, name_end);
        out.push(DefiniteDescription {
            text: doc.slice(span).unwrap_or_default().to_string(),
            head_noun: head.surface.clone(),
            complement: doc.slice(complement_span).unwrap_or_default().to_string(),
            span,
            head_type: head_type.unwrap_or_default().to_string(),
        });
        i = name_end;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub entity_id: String,
    pub attribute: String,
    /// The stored value that matched the complement.
    pub value: String,
}

impl Candidate {
    /// `Attr(Entity)=Value`, multiword values joined by underscores.
    pub fn justification(&self) -> String {
        format!(
            "{}({})={}",
            self.attribute,
            self.entity_id,
            normalize(&self.value).replace(' ', "_")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub description: DefiniteDescription,
    pub resolved_entity: Option<String>,
    pub justification: Option<String>,
    pub candidates: Vec<Candidate>,
}

impl Resolution {
    /// `Syn(<description>) = <entity>`, when resolved.
    pub fn synonymy(&self) -> Option<String> {
        self.resolved_entity
            .as_ref()
            .map(|e| format!("Syn({}) = {}", self.description.text, e))
    }
}

/// Ranking key of an attribute: leadership first, user-defined names last in
/// alphabetical order.
pub fn attribute_rank(attribute: &str) -> (u8, &str) {
    match attribute {
        IS_LEADED_BY => (0, ""),
        IS_COMPOSED_OF => (1, ""),
        IS_LOCATED_IN => (2, ""),
        KIND_OF => (3, ""),
        other => (4, other),
    }
}

pub fn resolve(d: &DefiniteDescription, store: &TemplateStore, h: &TypeHierarchy) -> Resolution {
    let complement = normalize(&d.complement);
    let mut candidates = Vec::new();
    for attribute in store.attribute_names() {
        for id in store.invert(attribute, &d.complement) {
            let Some(t) = store.lookup(id) else { continue };
            if !h.is_subtype(&t.entity_type, &d.head_type).unwrap_or(false) {
                continue;
            }
            let Some(value) = t
                .values(attribute)
                .iter()
                .find(|v| normalize(v) == complement)
            else {
                continue;
            };
            candidates.push(Candidate {
                entity_id: t.entity_id.clone(),
                attribute: attribute.to_string(),
                value: value.clone(),
            });
        }
    }
    candidates.sort_by(|a, b| {
        attribute_rank(&a.attribute)
            .cmp(&attribute_rank(&b.attribute))
            .then_with(|| a.entity_id.cmp(&b.entity_id))
    });
    let top = candidates.first();
    Resolution {
        description: d.clone(),
        resolved_entity: top.map(|c| c.entity_id.clone()),
        justification: top.map(Candidate::justification),
        candidates,
    }
}
