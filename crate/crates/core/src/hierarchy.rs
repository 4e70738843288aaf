//! Entity type hierarchy with per-type focalization facets.
//!
//! The hierarchy is a rooted tree of lowercase type identifiers. Each type may
//! declare an ordered list of facets; a type's valid focalizations are the
//! facets declared along its parent chain, ancestors first.
//!
//! Text format, one directive per line:
//!
//! ```text
//! # comment
//! type entity parent -
//! type enamex parent entity
//! facet organization diplomatic_org
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

/// The reserved focalization value meaning "underspecified".
pub const NONE_FACET: &str = "none";

/// Marker used in place of a parent identifier for the root type.
const ROOT_PARENT: &str = "-";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("line {line}: malformed directive: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate type `{id}`")]
    DuplicateType { line: usize, id: String },
    #[error("type `{id}` declares undeclared parent `{parent}`")]
    UndeclaredParent { id: String, parent: String },
    #[error("line {line}: facet `{facet}` declared on undeclared type `{id}`")]
    UndeclaredFacet {
        line: usize,
        id: String,
        facet: String,
    },
    #[error("line {line}: facet `{facet}` declared twice on type `{id}`")]
    DuplicateFacet {
        line: usize,
        id: String,
        facet: String,
    },
    #[error("cycle in type hierarchy through `{0}`")]
    Cycle(String),
    #[error("hierarchy declares no root type")]
    NoRoot,
    #[error("line {line}: second root `{id}` (root is `{root}`)")]
    MultipleRoots {
        line: usize,
        id: String,
        root: String,
    },
    #[error("unknown type `{0}`")]
    UnknownType(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    id: String,
    parent: Option<usize>,
    facets: Vec<String>,
}

/// A validated, immutable type tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeHierarchy {
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    root: usize,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_lowercase() || c == '_')
        && s.chars()
            .all(|c| c.is_lowercase() || c.is_ascii_digit() || c == '_' || c == '-')
}

impl TypeHierarchy {
    /// The bundled default hierarchy (MUC families with organization facets).
    pub fn bundled() -> Self {
        Self::parse(crate::pipeline::bundled::HIERARCHY).expect("bundled hierarchy is valid")
    }

    pub fn parse(src: &str) -> Result<Self, HierarchyError> {
        let mut declared: Vec<(String, String, usize)> = Vec::new();
        let mut facet_lines: Vec<(String, String, usize)> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut root: Option<usize> = None;

        for (n, raw) in src.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            match words.as_slice() {
                ["type", id, "parent", parent] => {
                    if !is_identifier(id) {
                        return Err(HierarchyError::Malformed {
                            line,
                            reason: format!("invalid type identifier `{id}`"),
                        });
                    }
                    if *parent != ROOT_PARENT && !is_identifier(parent) {
                        return Err(HierarchyError::Malformed {
                            line,
                            reason: format!("invalid parent identifier `{parent}`"),
                        });
                    }
                    if index.contains_key(*id) {
                        return Err(HierarchyError::DuplicateType {
                            line,
                            id: id.to_string(),
                        });
                    }
                    if *parent == ROOT_PARENT {
                        if let Some(r) = root {
                            return Err(HierarchyError::MultipleRoots {
                                line,
                                id: id.to_string(),
                                root: declared[r].0.clone(),
                            });
                        }
                        root = Some(declared.len());
                    }
                    index.insert(id.to_string(), declared.len());
                    declared.push((id.to_string(), parent.to_string(), line));
                }
                ["facet", id, facet] => {
                    if !is_identifier(facet) || *facet == NONE_FACET {
                        return Err(HierarchyError::Malformed {
                            line,
                            reason: format!("invalid facet identifier `{facet}`"),
                        });
                    }
                    facet_lines.push((id.to_string(), facet.to_string(), line));
                }
                _ => {
                    return Err(HierarchyError::Malformed {
                        line,
                        reason: format!("unrecognized directive `{content}`"),
                    })
                }
            }
        }

        let mut nodes = Vec::with_capacity(declared.len());
        for (id, parent, _) in &declared {
            let parent = if parent == ROOT_PARENT {
                None
            } else {
                match index.get(parent) {
                    Some(&p) => Some(p),
                    None => {
                        return Err(HierarchyError::UndeclaredParent {
                            id: id.clone(),
                            parent: parent.clone(),
                        })
                    }
                }
            };
            nodes.push(Node {
                id: id.clone(),
                parent,
                facets: Vec::new(),
            });
        }

        // Every chain must terminate within `nodes.len()` steps.
        for start in 0..nodes.len() {
            let mut cur = Some(start);
            let mut steps = 0;
            while let Some(i) = cur {
                if steps > nodes.len() {
                    return Err(HierarchyError::Cycle(nodes[start].id.clone()));
                }
                cur = nodes[i].parent;
                steps += 1;
            }
        }
        let root = root.ok_or(HierarchyError::NoRoot)?;

        for (id, facet, line) in facet_lines {
            let Some(&i) = index.get(&id) else {
                return Err(HierarchyError::UndeclaredFacet { line, id, facet });
            };
            if nodes[i].facets.contains(&facet) {
                return Err(HierarchyError::DuplicateFacet { line, id, facet });
            }
            nodes[i].facets.push(facet);
        }

        Ok(TypeHierarchy { nodes, index, root })
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self, crate::Error> {
        let path = path.as_ref();
        let src = crate::read_resource(path)?;
        Self::parse(&src).map_err(|source| crate::Error::Hierarchy {
            path: path.display().to_string(),
            source,
        })
    }

    /// Renders the hierarchy back into its text format.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for node in &self.nodes {
            let parent = node
                .parent
                .map(|p| self.nodes[p].id.as_str())
                .unwrap_or(ROOT_PARENT);
            let _ = writeln!(out, "type {} parent {}", node.id, parent);
        }
        for node in &self.nodes {
            for facet in &node.facets {
                let _ = writeln!(out, "facet {} {}", node.id, facet);
            }
        }
        out
    }

    pub fn root(&self) -> &str {
        &self.nodes[self.root].id
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Type identifiers in declaration order.
    pub fn types(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|n| n.id.as_str())
    }

    pub fn parent(&self, id: &str) -> Result<Option<&str>, HierarchyError> {
        let i = self.lookup(id)?;
        Ok(self.nodes[i].parent.map(|p| self.nodes[p].id.as_str()))
    }

    fn lookup(&self, id: &str) -> Result<usize, HierarchyError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| HierarchyError::UnknownType(id.to_string()))
    }

    /// Indices from `id` up to the root, inclusive.
    fn chain(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::successors(Some(i), move |&j| self.nodes[j].parent)
    }

    /// True iff `ancestor` lies on the parent chain of `id` (reflexive).
    pub fn is_subtype(&self, id: &str, ancestor: &str) -> Result<bool, HierarchyError> {
        let a = self.lookup(id)?;
        let b = self.lookup(ancestor)?;
        Ok(self.chain(a).any(|i| i == b))
    }

    /// Facets usable for `id`: inherited ones first (root downwards), then its own.
    pub fn valid_focalizations(&self, id: &str) -> Result<Vec<&str>, HierarchyError> {
        let i = self.lookup(id)?;
        let mut chain: Vec<usize> = self.chain(i).collect();
        chain.reverse();
        let mut out: Vec<&str> = Vec::new();
        for j in chain {
            for f in &self.nodes[j].facets {
                if !out.contains(&f.as_str()) {
                    out.push(f);
                }
            }
        }
        Ok(out)
    }

    /// True iff `facet` is declared on any type.
    pub fn is_facet(&self, facet: &str) -> bool {
        self.nodes
            .iter()
            .any(|n| n.facets.iter().any(|f| f == facet))
    }

    /// True iff `facet` is `none` or a valid focalization of `id`.
    pub fn admits_focalisation(&self, id: &str, facet: &str) -> Result<bool, HierarchyError> {
        if facet == NONE_FACET {
            self.lookup(id)?;
            return Ok(true);
        }
        Ok(self.valid_focalizations(id)?.contains(&facet))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_places_organization_under_enamex() {
        let h = TypeHierarchy::bundled();
        assert_eq!(h.parent("organization").unwrap(), Some("enamex"));
        for leaf in ["person", "location", "organization"] {
            assert!(h.is_subtype(leaf, "enamex").unwrap());
        }
        for leaf in ["date", "time"] {
            assert!(h.is_subtype(leaf, "timex").unwrap());
        }
        for leaf in ["money", "percent"] {
            assert!(h.is_subtype(leaf, "numex").unwrap());
        }
    }

    #[test]
    fn single_root() {
        let h = TypeHierarchy::parse("type thing parent -\n").unwrap();
        assert!(h.is_subtype("thing", "thing").unwrap());
        assert_eq!(h.types().count(), 1);
        assert!(h.valid_focalizations("thing").unwrap().is_empty());
    }

    #[test]
    fn two_node_cycle() {
        let err = TypeHierarchy::parse("type x parent y\ntype y parent x\n").unwrap_err();
        assert!(matches!(err, HierarchyError::Cycle(_)), "{err:?}");
        let err = TypeHierarchy::parse("type r parent -\ntype x parent y\ntype y parent x\n")
            .unwrap_err();
        assert!(matches!(err, HierarchyError::Cycle(_)), "{err:?}");
    }

    #[test]
    fn load_errors_are_distinct() {
        let cases = [
            ("type a parent\n", "malformed"),
            ("type a parent -\ntype a parent a\n", "duplicate"),
            ("type a parent -\ntype b parent c\n", "parent"),
            ("type a parent -\nfacet z loc\n", "facet"),
            ("type a parent -\nfacet a none\n", "malformed"),
            ("type a parent -\nfacet a loc\nfacet a loc\n", "dupfacet"),
            ("type a parent -\ntype b parent -\n", "roots"),
            ("# nothing\n", "noroot"),
            ("type A parent -\n", "malformed"),
        ];
        for (src, kind) in cases {
            let err = TypeHierarchy::parse(src).unwrap_err();
            let ok = match kind {
                "malformed" => matches!(err, HierarchyError::Malformed { .. }),
                "duplicate" => matches!(err, HierarchyError::DuplicateType { .. }),
                "parent" => matches!(err, HierarchyError::UndeclaredParent { .. }),
                "facet" => matches!(err, HierarchyError::UndeclaredFacet { .. }),
                "dupfacet" => matches!(err, HierarchyError::DuplicateFacet { .. }),
                "roots" => matches!(err, HierarchyError::MultipleRoots { .. }),
                "noroot" => matches!(err, HierarchyError::NoRoot),
                _ => unreachable!(),
            };
            assert!(ok, "{src:?} gave {err:?}");
        }
    }

    #[test]
    fn subtype_walks() {
        let h = TypeHierarchy::bundled();
        assert!(h.is_subtype("organization", "enamex").unwrap());
        assert!(h.is_subtype("organization", "organization").unwrap());
        assert!(!h.is_subtype("date", "enamex").unwrap());
        assert!(!h.is_subtype("enamex", "organization").unwrap());
        assert!(!h.is_subtype("person", "location").unwrap());
        assert_eq!(
            h.is_subtype("org", "enamex"),
            Err(HierarchyError::UnknownType("org".into()))
        );
    }

    #[test]
    fn organization_facets() {
        let h = TypeHierarchy::bundled();
        assert_eq!(
            h.valid_focalizations("organization").unwrap(),
            vec!["diplomatic_org", "location", "human_org"]
        );
        assert!(h.valid_focalizations("date").unwrap().is_empty());
        assert!(h.valid_focalizations("money").unwrap().is_empty());
        assert!(h.valid_focalizations("nope").is_err());
    }

    #[test]
    fn inherited_facets_come_first() {
        let src = "type entity parent -\n\
                   type enamex parent entity\n\
                   type person parent enamex\n\
                   facet person oeuvre\n\
                   facet enamex location\n";
        let h = TypeHierarchy::parse(src).unwrap();
        assert_eq!(
            h.valid_focalizations("person").unwrap(),
            vec!["location", "oeuvre"]
        );
        assert_eq!(h.valid_focalizations("enamex").unwrap(), vec!["location"]);
        assert!(h.valid_focalizations("entity").unwrap().is_empty());
    }

    #[test]
    fn admits_none_everywhere() {
        let h = TypeHierarchy::bundled();
        for t in h.types() {
            assert!(h.admits_focalisation(t, NONE_FACET).unwrap());
        }
        assert!(h.admits_focalisation("organization", "human_org").unwrap());
        assert!(!h.admits_focalisation("person", "human_org").unwrap());
    }

    #[test]
    fn bundled_round_trip() {
        let h = TypeHierarchy::bundled();
        let again = TypeHierarchy::parse(&h.serialize()).unwrap();
        assert_eq!(h, again);
    }
}
