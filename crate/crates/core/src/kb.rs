//! Entity templates: attribute/value records per canonical entity, with an
//! inverted index for attribute-inversion queries.
//!
//! File format, one block per entity, blocks separated by blank lines,
//! fields TAB-separated:
//!
//! ```text
//! entity<TAB>ONU<TAB>organization
//! attr<TAB>IsLocatedIn<TAB>New_York
//! attr<TAB>IsComposedOf<TAB>employees && diplomats
//! ```
//!
//! Entity ids and values compare with spaces and underscores interchangeable
//! (`Kofi Annan` == `Kofi_Annan`); otherwise comparison is exact.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hierarchy::TypeHierarchy;

pub const IS_LOCATED_IN: &str = "IsLocatedIn";
pub const IS_COMPOSED_OF: &str = "IsComposedOf";
pub const IS_LEADED_BY: &str = "IsLeadedBy";
pub const KIND_OF: &str = "KindOf";

/// Separator between values of a multi-valued attribute.
pub const VALUE_SEPARATOR: &str = "&&";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KbError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate entity `{id}`")]
    DuplicateEntity { line: usize, id: String },
    #[error("line {line}: entity `{id}` has unknown type `{entity_type}`")]
    UnknownType {
        line: usize,
        id: String,
        entity_type: String,
    },
    #[error("entity `{id}`: KindOf `{value}` is not a focalization of `{entity_type}`")]
    InvalidKindOf {
        id: String,
        value: String,
        entity_type: String,
    },
}

/// Underscores become spaces and whitespace runs collapse.
pub fn normalize(s: &str) -> String {
    s.split(|c: char| c == '_' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityTemplate {
    pub entity_id: String,
    pub entity_type: String,
    pub attributes: IndexMap<String, Vec<String>>,
}

impl EntityTemplate {
    pub fn new(entity_id: impl Into<String>, entity_type: impl Into<String>) -> Self {
        EntityTemplate {
            entity_id: entity_id.into(),
            entity_type: entity_type.into(),
            attributes: IndexMap::new(),
        }
    }

    pub fn with(mut self, attribute: &str, values: &[&str]) -> Self {
        self.attributes
            .entry(attribute.to_string())
            .or_default()
            .extend(values.iter().map(|v| v.to_string()));
        self
    }

    pub fn values(&self, attribute: &str) -> &[String] {
        self.attributes.get(attribute).map_or(&[], Vec::as_slice)
    }

    /// True iff `value` is stored under `attribute`, modulo normalization.
    pub fn has_value(&self, attribute: &str, value: &str) -> bool {
        let value = normalize(value);
        self.values(attribute).iter().any(|v| normalize(v) == value)
    }
}

#[derive(Debug, Clone, Default)]
pub struct TemplateStore {
    /// Keyed by normalized entity id.
    templates: BTreeMap<String, EntityTemplate>,
    /// `(attribute, normalized value)` to entity ids.
    inverted: HashMap<(String, String), BTreeSet<String>>,
}

impl PartialEq for TemplateStore {
    fn eq(&self, other: &Self) -> bool {
        self.templates == other.templates
    }
}

fn check_text(line: usize, what: &str, s: &str) -> Result<(), KbError> {
    if s.trim().is_empty() {
        return Err(KbError::Malformed {
            line,
            reason: format!("empty {what}"),
        });
    }
    if s.contains(['\t', '\n', '\r']) || s.contains(VALUE_SEPARATOR) || s.trim() != s {
        return Err(KbError::Malformed {
            line,
            reason: format!("{what} `{s}` contains a reserved character"),
        });
    }
    Ok(())
}

impl TemplateStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_templates(
        templates: impl IntoIterator<Item = EntityTemplate>,
        h: &TypeHierarchy,
    ) -> Result<Self, KbError> {
        let mut store = TemplateStore::new();
        for t in templates {
            store.insert_at(0, t, h)?;
        }
        Ok(store)
    }

    pub fn parse(src: &str, h: &TypeHierarchy) -> Result<Self, KbError> {
        let mut store = TemplateStore::new();
        let mut current: Option<(usize, EntityTemplate)> = None;

        for (n, raw) in src.lines().enumerate() {
            let line = n + 1;
            let trimmed = raw.trim();
            if trimmed.starts_with('#') {
                continue;
            }
            if trimmed.is_empty() {
                if let Some((at, t)) = current.take() {
                    store.insert_at(at, t, h)?;
                }
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
            match fields.as_slice() {
                ["entity", id, entity_type] => {
                    if let Some((at, t)) = current.take() {
                        store.insert_at(at, t, h)?;
                    }
                    current = Some((line, EntityTemplate::new(*id, *entity_type)));
                }
                ["attr", name, values] => {
                    let Some((_, t)) = current.as_mut() else {
                        return Err(KbError::Malformed {
                            line,
                            reason: "attribute outside an entity block".into(),
                        });
                    };
                    check_text(line, "attribute name", name)?;
                    let values: Vec<&str> = values.split(VALUE_SEPARATOR).map(str::trim).collect();
                    for v in &values {
                        check_text(line, "value", v)?;
                    }
                    t.attributes
                        .entry(name.to_string())
                        .or_default()
                        .extend(values.iter().map(|v| v.to_string()));
                }
                _ => {
                    return Err(KbError::Malformed {
                        line,
                        reason: format!("expected `entity<TAB>id<TAB>type` or `attr<TAB>name<TAB>values`, got `{trimmed}`"),
                    })
                }
            }
        }
        if let Some((at, t)) = current.take() {
            store.insert_at(at, t, h)?;
        }
        Ok(store)
    }

    fn insert_at(
        &mut self,
        line: usize,
        t: EntityTemplate,
        h: &TypeHierarchy,
    ) -> Result<(), KbError> {
        check_text(line, "entity id", &t.entity_id)?;
        for (name, values) in &t.attributes {
            check_text(line, "attribute name", name)?;
            if values.is_empty() {
                return Err(KbError::Malformed {
                    line,
                    reason: format!("attribute `{name}` has no value"),
                });
            }
            for v in values {
                check_text(line, "value", v)?;
            }
        }
        let key = normalize(&t.entity_id);
        if self.templates.contains_key(&key) {
            return Err(KbError::DuplicateEntity {
                line,
                id: t.entity_id,
            });
        }
        let facets = h
            .valid_focalizations(&t.entity_type)
            .map_err(|_| KbError::UnknownType {
                line,
                id: t.entity_id.clone(),
                entity_type: t.entity_type.clone(),
            })?;
        for v in t.values(KIND_OF) {
            if h.is_facet(v) && !facets.contains(&v.as_str()) {
                return Err(KbError::InvalidKindOf {
                    id: t.entity_id.clone(),
                    value: v.clone(),
                    entity_type: t.entity_type.clone(),
                });
            }
        }
        for (name, values) in &t.attributes {
            for v in values {
                self.inverted
                    .entry((name.clone(), normalize(v)))
                    .or_default()
                    .insert(t.entity_id.clone());
            }
        }
        self.templates.insert(key, t);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn templates(&self) -> impl Iterator<Item = &EntityTemplate> {
        self.templates.values()
    }

    /// Exact lookup, modulo space/underscore normalization.
    pub fn lookup(&self, entity_id: &str) -> Option<&EntityTemplate> {
        self.templates.get(&normalize(entity_id))
    }

    /// Entity ids carrying `value` under `attribute`.
    pub fn invert(&self, attribute: &str, value: &str) -> BTreeSet<&str> {
        self.inverted
            .get(&(attribute.to_string(), normalize(value)))
            .map(|ids| ids.iter().map(String::as_str).collect())
            .unwrap_or_default()
    }

    /// Every attribute name used in the store.
    pub fn attribute_names(&self) -> BTreeSet<&str> {
        self.inverted.keys().map(|(a, _)| a.as_str()).collect()
    }

    /// True iff the inverted index equals a fresh inversion of the templates.
    pub fn index_is_consistent(&self) -> bool {
        let mut rebuilt: HashMap<(String, String), BTreeSet<String>> = HashMap::new();
        for t in self.templates.values() {
            for (name, values) in &t.attributes {
                for v in values {
                    rebuilt
                        .entry((name.clone(), normalize(v)))
                        .or_default()
                        .insert(t.entity_id.clone());
                }
            }
        }
        rebuilt == self.inverted
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.templates.values().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "entity\t{}\t{}", t.entity_id, t.entity_type);
            for (name, values) in &t.attributes {
                let _ = writeln!(out, "attr\t{}\t{}", name, values.join(" && "));
            }
        }
        out
    }
}
