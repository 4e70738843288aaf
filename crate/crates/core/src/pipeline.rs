//! End-to-end annotation and resolution over loaded resources, plus the
//! record types the command-line front end emits.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::evaluation::GoldAnnotation;
use crate::focalizer::{focalize, FocalizationTrace};
use crate::hierarchy::TypeHierarchy;
use crate::kb::{EntityTemplate, TemplateStore};
use crate::lexicon::{CasePolicy, Gazetteer, MarkerLexicon, TriggerRuleSet, WordList};
use crate::matcher::PatternMatcher;
use crate::model::{Document, Focalisation, Mention, Span};
use crate::recognizer::recognize;
use crate::resolver::{parse_descriptions, resolve, Candidate, HeadLexicon, Resolution};
use crate::tokenizer::{sentences, tokenize};
use crate::{read_resource, Error};

pub mod bundled {
    pub const HIERARCHY: &str = include_str!("../resources/hierarchy.txt");
    pub const GAZETTEER: &str = include_str!("../resources/gazetteer.tsv");
    pub const MARKERS: &str = include_str!("../resources/markers.tsv");
    pub const TRIGGERS: &str = include_str!("../resources/triggers.tsv");
    pub const TEMPLATES: &str = include_str!("../resources/templates.tsv");
    pub const HEADS: &str = include_str!("../resources/heads.tsv");
}

/// Resource files; `None` selects the bundled resource.
#[derive(Debug, Clone, Default)]
pub struct ResourcePaths {
    pub hierarchy: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub markers: Option<PathBuf>,
    pub triggers: Option<PathBuf>,
    pub templates: Option<PathBuf>,
    pub heads: Option<PathBuf>,
    /// General-language word list; no bundled default.
    pub dictionary: Option<PathBuf>,
}

/// Every resource, loaded and validated against one hierarchy.
#[derive(Debug)]
pub struct Resources {
    pub hierarchy: TypeHierarchy,
    pub gazetteer: Gazetteer,
    pub markers: MarkerLexicon,
    pub matcher: PatternMatcher,
    pub triggers: TriggerRuleSet,
    pub templates: TemplateStore,
    pub heads: HeadLexicon,
    pub dictionary: Option<WordList>,
}

fn source(path: &Option<PathBuf>, name: &str, fallback: &str) -> Result<(String, String), Error> {
    match path {
        Some(p) => Ok((p.display().to_string(), read_resource(p)?)),
        None => Ok((format!("bundled {name}"), fallback.to_string())),
    }
}

impl Resources {
    pub fn bundled() -> Self {
        Self::load(&ResourcePaths::default()).expect("bundled resources are consistent")
    }

    /// Loads and cross-validates everything, failing on the first error.
    pub fn load(paths: &ResourcePaths) -> Result<Self, Error> {
        let (path, src) = source(&paths.hierarchy, "hierarchy", bundled::HIERARCHY)?;
        let hierarchy =
            TypeHierarchy::parse(&src).map_err(|source| Error::Hierarchy { path, source })?;

        let lexicon = |path: String| move |source| Error::Lexicon { path, source };

        let (path, src) = source(&paths.gazetteer, "gazetteer", bundled::GAZETTEER)?;
        let gazetteer = Gazetteer::parse(&src, CasePolicy::Exact)
            .and_then(|g| g.bind(&hierarchy).map(|_| g))
            .map_err(lexicon(path))?;

        let (path, src) = source(&paths.markers, "markers", bundled::MARKERS)?;
        let markers = MarkerLexicon::parse(&src)
            .and_then(|m| m.bind(&hierarchy).map(|_| m))
            .map_err(lexicon(path))?;

        let (path, src) = source(&paths.triggers, "triggers", bundled::TRIGGERS)?;
        let triggers = TriggerRuleSet::parse(&src, &hierarchy).map_err(lexicon(path))?;

        let (path, src) = source(&paths.templates, "templates", bundled::TEMPLATES)?;
        let templates = TemplateStore::parse(&src, &hierarchy)
            .map_err(|source| Error::Templates { path, source })?;

        let (path, src) = source(&paths.heads, "heads", bundled::HEADS)?;
        let heads = HeadLexicon::parse(&src)
            .and_then(|h| h.bind(&hierarchy).map(|_| h))
            .map_err(lexicon(path))?;

        let dictionary = match &paths.dictionary {
            Some(p) => Some(WordList::parse(&read_resource(p)?)),
            None => None,
        };

        let matcher = PatternMatcher::compile(&gazetteer, &markers);
        Ok(Resources {
            hierarchy,
            gazetteer,
            markers,
            matcher,
            triggers,
            templates,
            heads,
            dictionary,
        })
    }

    /// Recognizes and focalizes every mention of `doc`.
    pub fn annotate(&self, doc: &Document) -> Vec<Annotated> {
        let tokens = tokenize(doc.text());
        let mentions = recognize(
            doc,
            &tokens,
            &self.matcher,
            &self.hierarchy,
            self.dictionary.as_ref(),
        );
        let ranges = sentences(&tokens);
        mentions
            .into_iter()
            .map(|mut mention| {
                let sentence = tokens
                    .iter()
                    .find(|t| t.span.start == mention.span.start)
                    .map(|t| &tokens[ranges[t.sentence_index].clone()])
                    .unwrap_or(&[]);
                let (sem, trace) = focalize(&mention, sentence, &self.triggers, &self.hierarchy);
                mention.sem = sem;
                Annotated { mention, trace }
            })
            .collect()
    }

    /// Detects and resolves every definite description of `doc`.
    pub fn resolve(&self, doc: &Document) -> Vec<Resolution> {
        let tokens = tokenize(doc.text());
        sentences(&tokens)
            .into_iter()
            .flat_map(|r| parse_descriptions(doc, &tokens[r], &self.heads))
            .map(|d| resolve(&d, &self.templates, &self.hierarchy))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotated {
    pub mention: Mention,
    pub trace: FocalizationTrace,
}

/// One line of `annotate` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub doc_id: String,
    pub start: usize,
    pub end: usize,
    pub lexical_unit: String,
    pub entity_type: String,
    pub focalisation: Focalisation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<EntityTemplate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub fired_rule: Option<String>,
    pub competing_rules: Vec<String>,
}

impl AnnotationRecord {
    pub fn new(a: &Annotated, trace: bool, template: Option<&EntityTemplate>) -> Self {
        let m = &a.mention;
        AnnotationRecord {
            doc_id: m.doc_id.clone(),
            start: m.span.start,
            end: m.span.end,
            lexical_unit: m.lexical_unit.clone(),
            entity_type: m.sem.entity_type.clone(),
            focalisation: m.sem.focalisation.clone(),
            trace: trace.then(|| TraceRecord {
                fired_rule: a.trace.fired_rule.clone(),
                competing_rules: a.trace.competing_rules.clone(),
            }),
            template: template.cloned(),
        }
    }

    pub fn to_gold(&self) -> GoldAnnotation {
        GoldAnnotation {
            doc_id: self.doc_id.clone(),
            span: Span::new(self.start, self.end),
            entity_type: self.entity_type.clone(),
            focalisation: Some(self.focalisation.clone()),
        }
    }

    /// The `Entity{...}` block form.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} [{}, {})", self.doc_id, self.start, self.end);
        let _ = writeln!(out, "Entity{{");
        let _ = writeln!(out, "  Lexical_unit={};", self.lexical_unit);
        let _ = writeln!(out, "  Sem{{");
        let _ = writeln!(out, "    Type={};", self.entity_type);
        if let Some(t) = &self.template {
            let _ = writeln!(out, "    Focalisation={};", self.focalisation);
            let _ = writeln!(out, "  }}");
            let _ = writeln!(out, "  EntityTemplate{{");
            for (name, values) in &t.attributes {
                let _ = writeln!(out, "    {} = {};", name, values.join(" && "));
            }
            let _ = writeln!(out, "  }}");
        } else {
            let _ = writeln!(out, "    Focalisation={}; }}", self.focalisation);
        }
        if let Some(trace) = &self.trace {
            let _ = writeln!(
                out,
                "  # fired: {}; competing: [{}]",
                trace.fired_rule.as_deref().unwrap_or("-"),
                trace.competing_rules.join(", ")
            );
        }
        out.push_str("}\n");
        out
    }
}

/// One line of `resolve` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionRecord {
    pub doc_id: String,
    pub start: usize,
    pub end: usize,
    pub description: String,
    pub head_noun: String,
    pub complement: String,
    pub head_type: String,
    pub resolved: Option<String>,
    pub justification: Option<String>,
    pub candidates: Vec<CandidateRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub entity_id: String,
    pub attribute: String,
    pub value: String,
}

impl From<&Candidate> for CandidateRecord {
    fn from(c: &Candidate) -> Self {
        CandidateRecord {
            entity_id: c.entity_id.clone(),
            attribute: c.attribute.clone(),
            value: c.value.clone(),
        }
    }
}

impl ResolutionRecord {
    pub fn new(doc_id: &str, r: &Resolution) -> Self {
        let d = &r.description;
        ResolutionRecord {
            doc_id: doc_id.to_string(),
            start: d.span.start,
            end: d.span.end,
            description: d.text.clone(),
            head_noun: d.head_noun.clone(),
            complement: d.complement.clone(),
            head_type: d.head_type.clone(),
            resolved: r.resolved_entity.clone(),
            justification: r.justification.clone(),
            candidates: r.candidates.iter().map(CandidateRecord::from).collect(),
        }
    }

    pub fn pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} [{}, {})", self.doc_id, self.start, self.end);
        let _ = writeln!(out, "{}", self.description);
        match (&self.resolved, &self.justification) {
            (Some(e), Some(j)) => {
                let _ = writeln!(out, "Syn({}) = {}", self.description, e);
                let _ = writeln!(out, "Justification: {j}");
            }
            _ => {
                let _ = writeln!(out, "Syn({}) = ?", self.description);
            }
        }
        if self.candidates.len() > 1 {
            let all: Vec<String> = self
                .candidates
                .iter()
                .map(|c| format!("{}({})", c.attribute, c.entity_id))
                .collect();
            let _ = writeln!(out, "Candidates: {}", all.join(", "));
        }
        out
    }
}
