//! Token-level multi-pattern matcher over gazetteer names and markers.
//!
//! Patterns are token sequences stored in a trie keyed by token surface.
//! A scan reports non-overlapping leftmost-longest matches; matches never
//! cross a sentence boundary.

use std::collections::HashMap;

use crate::lexicon::{CasePolicy, Gazetteer, MarkerLexicon, MarkerPosition};
use crate::tokenizer::{pattern_key, Token};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternKind {
    Name {
        entity_type: String,
    },
    Marker {
        entity_type: String,
        position: MarkerPosition,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternMatch {
    /// Token index range `[start, end)`.
    pub start: usize,
    pub end: usize,
    pub kind: PatternKind,
}

#[derive(Debug, Default)]
struct TrieNode {
    children: HashMap<String, usize>,
    payload: Option<PatternKind>,
}

#[derive(Debug)]
struct Trie {
    nodes: Vec<TrieNode>,
    policy: CasePolicy,
}

impl Trie {
    fn new(policy: CasePolicy) -> Self {
        Trie {
            nodes: vec![TrieNode::default()],
            policy,
        }
    }

    fn insert(&mut self, key: Vec<String>, payload: PatternKind) {
        if key.is_empty() {
            return;
        }
        let mut cur = 0;
        for tok in key {
            cur = match self.nodes[cur].children.get(&tok) {
                Some(&next) => next,
                None => {
                    self.nodes.push(TrieNode::default());
                    let next = self.nodes.len() - 1;
                    self.nodes[cur].children.insert(tok, next);
                    next
                }
            };
        }
        self.nodes[cur].payload.get_or_insert(payload);
    }

    /// Longest pattern starting at token `at`, as `(end, payload)`.
    fn longest_at<'a>(&'a self, tokens: &[Token], at: usize) -> Option<(usize, &'a PatternKind)> {
        let sentence = tokens[at].sentence_index;
        let mut cur = 0;
        let mut best = None;
        for (i, tok) in tokens.iter().enumerate().skip(at) {
            if tok.sentence_index != sentence {
                break;
            }
            let key = self.policy.key(&tok.surface);
            match self.nodes[cur].children.get(&key) {
                Some(&next) => cur = next,
                None => break,
            }
            if let Some(p) = &self.nodes[cur].payload {
                best = Some((i + 1, p));
            }
        }
        best
    }
}

/// Immutable compiled matcher.
#[derive(Debug)]
pub struct PatternMatcher {
    names: Trie,
    markers: Trie,
}

impl PatternMatcher {
    pub fn compile(gazetteer: &Gazetteer, markers: &MarkerLexicon) -> Self {
        let policy = gazetteer.case_policy();
        let mut names = Trie::new(policy);
        for (surface, t) in gazetteer.entries() {
            let key = pattern_key(surface, policy == CasePolicy::Fold);
            names.insert(
                key,
                PatternKind::Name {
                    entity_type: t.to_string(),
                },
            );
        }
        let mut marker_trie = Trie::new(CasePolicy::Exact);
        for m in markers.markers() {
            marker_trie.insert(
                pattern_key(&m.surface, false),
                PatternKind::Marker {
                    entity_type: m.entity_type.clone(),
                    position: m.position,
                },
            );
        }
        PatternMatcher {
            names,
            markers: marker_trie,
        }
    }

    /// All non-overlapping leftmost-longest matches, left to right. On equal
    /// length a name wins over a marker.
    pub fn find_all(&self, tokens: &[Token]) -> Vec<PatternMatch> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let name = self.names.longest_at(tokens, i);
            let marker = self.markers.longest_at(tokens, i);
            let best = match (name, marker) {
                (Some(n), Some(m)) => Some(if m.0 > n.0 { m } else { n }),
                (n, m) => n.or(m),
            };
            match best {
                Some((end, kind)) => {
                    out.push(PatternMatch {
                        start: i,
                        end,
                        kind: kind.clone(),
                    });
                    i = end;
                }
                None => i += 1,
            }
        }
        out
    }
}
