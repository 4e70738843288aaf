//! Annotated-entity data model shared across the pipeline.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::hierarchy::{HierarchyError, TypeHierarchy, NONE_FACET};

/// Half-open `[start, end)` interval of code-point offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// The profiled facet of an entity, or `none` when context leaves it open.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Focalisation {
    #[default]
    Underspecified,
    Facet(String),
}

impl Focalisation {
    pub fn facet(&self) -> Option<&str> {
        match self {
            Focalisation::Underspecified => None,
            Focalisation::Facet(f) => Some(f),
        }
    }

    pub fn as_str(&self) -> &str {
        self.facet().unwrap_or(NONE_FACET)
    }
}

impl fmt::Display for Focalisation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Focalisation {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "" | NONE_FACET => Focalisation::Underspecified,
            other => Focalisation::Facet(other.to_string()),
        })
    }
}

impl Serialize for Focalisation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Focalisation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(s.parse().unwrap())
    }
}

/// `Sem{Type; Focalisation}` block of an entity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemFrame {
    pub entity_type: String,
    pub focalisation: Focalisation,
}

impl SemFrame {
    pub fn new(entity_type: impl Into<String>) -> Self {
        SemFrame {
            entity_type: entity_type.into(),
            focalisation: Focalisation::Underspecified,
        }
    }

    pub fn is_valid(&self, h: &TypeHierarchy) -> Result<bool, HierarchyError> {
        h.admits_focalisation(&self.entity_type, self.focalisation.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mention {
    pub lexical_unit: String,
    pub span: Span,
    pub doc_id: String,
    pub sem: SemFrame,
}

/// A source text with code-point indexing.
#[derive(Debug, Clone)]
pub struct Document {
    pub id: String,
    text: String,
    /// Byte offset of every code point, plus the text length.
    offsets: Vec<usize>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        let mut offsets: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        offsets.push(text.len());
        Document {
            id: id.into(),
            text,
            offsets,
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Length in code points.
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Substring at a code-point span; `None` when out of bounds.
    pub fn slice(&self, span: Span) -> Option<&str> {
        if span.start > span.end || span.end > self.len() {
            return None;
        }
        Some(&self.text[self.offsets[span.start]..self.offsets[span.end]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_point_slicing() {
        let doc = Document::new("d", "L'ONU était en grève.");
        assert_eq!(doc.len(), 21);
        assert_eq!(doc.slice(Span::new(2, 5)), Some("ONU"));
        assert_eq!(doc.slice(Span::new(6, 11)), Some("était"));
        assert_eq!(doc.slice(Span::new(15, 20)), Some("grève"));
        assert_eq!(doc.slice(Span::new(15, 22)), None);
    }

    #[test]
    fn focalisation_text_form() {
        assert_eq!(Focalisation::Underspecified.to_string(), "none");
        assert_eq!(
            "none".parse::<Focalisation>().unwrap(),
            Focalisation::Underspecified
        );
        assert_eq!(
            "human_org".parse::<Focalisation>().unwrap(),
            Focalisation::Facet("human_org".into())
        );
    }

    #[test]
    fn span_relations() {
        let a = Span::new(0, 4);
        assert!(a.overlaps(&Span::new(3, 6)));
        assert!(!a.overlaps(&Span::new(4, 6)));
        assert!(a.contains(&Span::new(1, 3)));
    }
}
