mod common;

use std::collections::BTreeSet;

use common::{norm, templates, ATTRS, VALUES};
use nefocal::{EntityTemplate, TemplateStore, TypeHierarchy};
use proptest::prelude::*;

fn brute_invert<'a>(ts: &'a [EntityTemplate], attr: &str, value: &str) -> BTreeSet<&'a str> {
    ts.iter()
        .filter(|t| {
            t.attributes
                .get(attr)
                .is_some_and(|vs| vs.iter().any(|v| norm(v) == norm(value)))
        })
        .map(|t| t.entity_id.as_str())
        .collect()
}

proptest! {
    #[test]
    fn invert_equals_brute_force(ts in templates(50)) {
        let h = TypeHierarchy::bundled();
        let store = TemplateStore::from_templates(ts.clone(), &h).unwrap();
        prop_assert!(store.index_is_consistent());
        for a in ATTRS {
            for v in VALUES.iter().chain(&["nobody", "kofi annan", "Kofi   Annan"]) {
                prop_assert_eq!(store.invert(a, v), brute_invert(&ts, a, v), "{} {}", a, v);
            }
        }
    }

    #[test]
    fn serialize_round_trips(ts in templates(50)) {
        let h = TypeHierarchy::bundled();
        let store = TemplateStore::from_templates(ts.clone(), &h).unwrap();
        let again = TemplateStore::parse(&store.serialize(), &h).unwrap();
        prop_assert_eq!(&again, &store);
        prop_assert_eq!(again.serialize(), store.serialize());
        for t in &ts {
            prop_assert_eq!(again.lookup(&t.entity_id), store.lookup(&t.entity_id));
            prop_assert_eq!(again.lookup(&t.entity_id), Some(t));
        }
        prop_assert!(again.index_is_consistent());
    }
}

#[test]
fn two_orgs_led_by_the_same_person() {
    let h = TypeHierarchy::bundled();
    let store = TemplateStore::from_templates(
        [
            EntityTemplate::new("B", "organization").with("IsLeadedBy", &["X"]),
            EntityTemplate::new("A", "organization").with("IsLeadedBy", &["X"]),
        ],
        &h,
    )
    .unwrap();
    assert_eq!(store.invert("IsLeadedBy", "X"), BTreeSet::from(["A", "B"]));
    assert!(store.invert("IsLeadedBy", "nobody").is_empty());
}
