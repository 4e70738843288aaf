//! Linguistic resources: proper-name gazetteers, lexical markers, focalization
//! trigger rules and the general-language word list.
//!
//! All files are TAB-separated UTF-8 with one record per line. Blank lines and
//! lines starting with `#` are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::hierarchy::TypeHierarchy;
use crate::tokenizer::{fold, pattern_key};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: `{surface}` already typed `{existing}`, cannot also be `{new}`")]
    DuplicateConflict {
        line: usize,
        surface: String,
        existing: String,
        new: String,
    },
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("rule `{rule_id}`: facet `{facet}` is not a focalization of `{entity_type}`")]
    UnknownFacet {
        rule_id: String,
        entity_type: String,
        facet: String,
    },
    #[error("line {line}: duplicate rule id `{rule_id}`")]
    DuplicateRule { line: usize, rule_id: String },
}

/// Non-comment records of a TSV resource, with 1-based line numbers.
pub(crate) fn records(src: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    src.lines().enumerate().filter_map(|(n, line)| {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((n + 1, line.split('\t').map(str::trim).collect()))
        }
    })
}

fn expect_fields(line: usize, fields: &[&str], n: usize, what: &str) -> Result<(), LexiconError> {
    if fields.len() != n {
        return Err(LexiconError::Malformed {
            line,
            reason: format!(
                "expected {n} TAB-separated fields ({what}), found {}",
                fields.len()
            ),
        });
    }
    if let Some(i) = fields.iter().position(|f| f.is_empty()) {
        return Err(LexiconError::Malformed {
            line,
            reason: format!("field {} is empty", i + 1),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CasePolicy {
    #[default]
    Exact,
    Fold,
}

impl CasePolicy {
    pub fn key(self, s: &str) -> String {
        match self {
            CasePolicy::Exact => s.to_string(),
            CasePolicy::Fold => fold(s),
        }
    }
}

/// Proper-name dictionary: surface form to entity type.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Gazetteer {
    case_policy: CasePolicy,
    /// Keyed by the case-policy key of the surface.
    entries: BTreeMap<String, (String, String)>,
}

impl Gazetteer {
    pub fn new(case_policy: CasePolicy) -> Self {
        Gazetteer {
            case_policy,
            entries: BTreeMap::new(),
        }
    }

    /// Parses `surface<TAB>type` lines.
    pub fn parse(src: &str, case_policy: CasePolicy) -> Result<Self, LexiconError> {
        let mut g = Gazetteer::new(case_policy);
        for (line, fields) in records(src) {
            expect_fields(line, &fields, 2, "surface, type")?;
            g.insert_at(line, fields[0], fields[1])?;
        }
        Ok(g)
    }

    pub fn insert(&mut self, surface: &str, entity_type: &str) -> Result<(), LexiconError> {
        self.insert_at(0, surface, entity_type)
    }

    fn insert_at(
        &mut self,
        line: usize,
        surface: &str,
        entity_type: &str,
    ) -> Result<(), LexiconError> {
        if surface.trim().is_empty() {
            return Err(LexiconError::Malformed {
                line,
                reason: "empty surface form".into(),
            });
        }
        let key = self.case_policy.key(surface);
        match self.entries.get(&key) {
            Some((_, existing)) if existing != entity_type => {
                Err(LexiconError::DuplicateConflict {
                    line,
                    surface: surface.to_string(),
                    existing: existing.clone(),
                    new: entity_type.to_string(),
                })
            }
            Some(_) => Ok(()),
            None => {
                self.entries
                    .insert(key, (surface.to_string(), entity_type.to_string()));
                Ok(())
            }
        }
    }

    pub fn remove(&mut self, surface: &str) -> bool {
        self.entries
            .remove(&self.case_policy.key(surface))
            .is_some()
    }

    pub fn case_policy(&self) -> CasePolicy {
        self.case_policy
    }

    pub fn get(&self, surface: &str) -> Option<&str> {
        self.entries
            .get(&self.case_policy.key(surface))
            .map(|(_, t)| t.as_str())
    }

    /// `(surface, type)` pairs in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.values().map(|(s, t)| (s.as_str(), t.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks every type against the active hierarchy.
    pub fn bind(&self, h: &TypeHierarchy) -> Result<(), LexiconError> {
        for (_, t) in self.entries.values() {
            if !h.contains(t) {
                return Err(LexiconError::UnknownType(t.clone()));
            }
        }
        Ok(())
    }
}

/// Side of the marker on which the name it introduces stands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MarkerPosition {
    /// The marker precedes the name (`Mr Dupont`).
    Before,
    /// The marker follows the name (`Acme Inc.`).
    After,
}

impl FromStr for MarkerPosition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "before" => Ok(MarkerPosition::Before),
            "after" => Ok(MarkerPosition::After),
            other => Err(format!(
                "marker position must be `before` or `after`, got `{other}`"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marker {
    pub surface: String,
    pub entity_type: String,
    pub position: MarkerPosition,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MarkerLexicon {
    entries: BTreeMap<String, Marker>,
}

impl MarkerLexicon {
    /// Parses `surface<TAB>type<TAB>before|after` lines.
    pub fn parse(src: &str) -> Result<Self, LexiconError> {
        let mut m = MarkerLexicon::default();
        for (line, fields) in records(src) {
            expect_fields(line, &fields, 3, "surface, type, position")?;
            let position = fields[2]
                .parse()
                .map_err(|reason| LexiconError::Malformed { line, reason })?;
            let marker = Marker {
                surface: fields[0].to_string(),
                entity_type: fields[1].to_string(),
                position,
            };
            if let Some(existing) = m.entries.get(fields[0]) {
                if *existing != marker {
                    return Err(LexiconError::DuplicateConflict {
                        line,
                        surface: marker.surface,
                        existing: existing.entity_type.clone(),
                        new: marker.entity_type,
                    });
                }
            }
            m.entries.insert(fields[0].to_string(), marker);
        }
        Ok(m)
    }

    pub fn markers(&self) -> impl Iterator<Item = &Marker> {
        self.entries.values()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn bind(&self, h: &TypeHierarchy) -> Result<(), LexiconError> {
        for m in self.entries.values() {
            if !h.contains(&m.entity_type) {
                return Err(LexiconError::UnknownType(m.entity_type.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriggerKind {
    Verb,
    Noun,
    /// Head of a prepositional phrase.
    Prep,
}

impl FromStr for TriggerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "verb" => Ok(TriggerKind::Verb),
            "noun" => Ok(TriggerKind::Noun),
            "prep" => Ok(TriggerKind::Prep),
            other => Err(format!(
                "trigger kind must be verb, noun or prep, got `{other}`"
            )),
        }
    }
}

impl fmt::Display for TriggerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriggerKind::Verb => "verb",
            TriggerKind::Noun => "noun",
            TriggerKind::Prep => "prep",
        })
    }
}

/// A same-sentence cue that profiles one facet of an entity type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerRule {
    pub rule_id: String,
    /// Surface forms as written, e.g. `grève`, `avoir lieu`.
    pub forms: Vec<String>,
    pub kind: TriggerKind,
    pub applies_to: String,
    pub facet: String,
    pub priority: u32,
    /// Folded token sequence of each form.
    pub(crate) patterns: Vec<Vec<String>>,
}

impl TriggerRule {
    pub fn new(
        rule_id: &str,
        forms: &[&str],
        kind: TriggerKind,
        applies_to: &str,
        facet: &str,
        priority: u32,
    ) -> Self {
        TriggerRule {
            rule_id: rule_id.to_string(),
            forms: forms.iter().map(|s| s.to_string()).collect(),
            kind,
            applies_to: applies_to.to_string(),
            facet: facet.to_string(),
            priority,
            patterns: forms.iter().map(|f| pattern_key(f, true)).collect(),
        }
    }

    pub fn patterns(&self) -> &[Vec<String>] {
        &self.patterns
    }
}

/// Validated rules, sorted by descending priority then rule id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TriggerRuleSet {
    rules: Vec<TriggerRule>,
}

impl TriggerRuleSet {
    pub fn new(rules: Vec<TriggerRule>, h: &TypeHierarchy) -> Result<Self, LexiconError> {
        let mut seen = BTreeSet::new();
        for r in &rules {
            if !seen.insert(r.rule_id.clone()) {
                return Err(LexiconError::DuplicateRule {
                    line: 0,
                    rule_id: r.rule_id.clone(),
                });
            }
            validate_rule(r, h)?;
        }
        let mut rules = rules;
        rules.sort_by(|a, b| {
            b.priority
                .cmp(&a.priority)
                .then_with(|| a.rule_id.cmp(&b.rule_id))
        });
        Ok(TriggerRuleSet { rules })
    }

    /// Parses `rule_id<TAB>form[|form...]<TAB>kind<TAB>type<TAB>facet<TAB>priority` lines.
    pub fn parse(src: &str, h: &TypeHierarchy) -> Result<Self, LexiconError> {
        let mut rules = Vec::new();
        let mut seen = BTreeSet::new();
        for (line, fields) in records(src) {
            expect_fields(
                line,
                &fields,
                6,
                "rule_id, triggers, kind, type, facet, priority",
            )?;
            let malformed = |reason: String| LexiconError::Malformed { line, reason };
            let forms: Vec<&str> = fields[1].split('|').map(str::trim).collect();
            if forms.iter().any(|f| f.is_empty()) {
                return Err(malformed("empty trigger form".into()));
            }
            let kind = fields[2].parse().map_err(malformed)?;
            let priority = fields[5]
                .parse::<u32>()
                .map_err(|e| malformed(format!("priority `{}`: {e}", fields[5])))?;
            if !seen.insert(fields[0].to_string()) {
                return Err(LexiconError::DuplicateRule {
                    line,
                    rule_id: fields[0].to_string(),
                });
            }
            let rule = TriggerRule::new(fields[0], &forms, kind, fields[3], fields[4], priority);
            validate_rule(&rule, h)?;
            rules.push(rule);
        }
        Self::new(rules, h)
    }

    pub fn rules(&self) -> &[TriggerRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

fn validate_rule(r: &TriggerRule, h: &TypeHierarchy) -> Result<(), LexiconError> {
    let facets = h
        .valid_focalizations(&r.applies_to)
        .map_err(|_| LexiconError::UnknownType(r.applies_to.clone()))?;
    if !facets.contains(&r.facet.as_str()) {
        return Err(LexiconError::UnknownFacet {
            rule_id: r.rule_id.clone(),
            entity_type: r.applies_to.clone(),
            facet: r.facet.clone(),
        });
    }
    Ok(())
}

/// General-language dictionary, used to tell unknown words from known ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordList {
    words: BTreeSet<String>,
}

impl WordList {
    /// One word per line; first TAB-separated field is used.
    pub fn parse(src: &str) -> Self {
        WordList {
            words: records(src).map(|(_, f)| fold(f[0])).collect(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(&fold(word))
    }
}
