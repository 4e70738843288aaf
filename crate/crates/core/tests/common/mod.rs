//! Random template stores shared by the KB and resolver suites.

use nefocal::EntityTemplate;
use proptest::prelude::*;

pub const TYPES: &[&str] = &["organization", "location", "person"];
pub const ATTRS: &[&str] = &[
    "IsLeadedBy",
    "IsComposedOf",
    "IsLocatedIn",
    "KindOf",
    "Founder",
    "Sponsor",
];
pub const VALUES: &[&str] = &[
    "Kofi_Annan",
    "Kofi Annan",
    "New_York",
    "Paris",
    "employees",
    "diplomats",
    "Bill  Gates",
    "human_org",
    "x",
];

/// Spaces and underscores are interchangeable; whitespace runs collapse.
pub fn norm(s: &str) -> String {
    s.replace('_', " ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

/// Up to `max` templates with up to 5 attributes each.
pub fn templates(max: usize) -> impl Strategy<Value = Vec<EntityTemplate>> {
    let attrs = prop::collection::vec(
        (
            prop::sample::select(ATTRS),
            prop::collection::vec(prop::sample::select(VALUES), 1..4),
        ),
        0..=5,
    );
    prop::collection::vec((0..TYPES.len(), attrs), 0..=max).prop_map(|raw| {
        raw.into_iter()
            .enumerate()
            .map(|(i, (ty, attrs))| {
                let id = if i % 2 == 0 {
                    format!("Org_{i}")
                } else {
                    format!("E{i}")
                };
                let mut t = EntityTemplate::new(id, TYPES[ty]);
                for (a, vs) in attrs {
                    // Only organizations admit the `human_org` facet.
                    let vs: Vec<&str> = vs
                        .into_iter()
                        .map(|v| {
                            if a == "KindOf" && v == "human_org" && ty != 0 {
                                "x"
                            } else {
                                v
                            }
                        })
                        .collect();
                    t = t.with(a, &vs);
                }
                t
            })
            .collect()
    })
}
