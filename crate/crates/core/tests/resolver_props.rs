mod common;

use common::{norm, templates, VALUES};
use nefocal::resolver::{resolve, DefiniteDescription, HeadLexicon};
use nefocal::{Document, EntityTemplate, Span, TemplateStore, TypeHierarchy};
use proptest::prelude::*;

const HEAD_TYPES: &[&str] = &["organization", "location", "person", "enamex"];

fn description(complement: &str, head_type: &str) -> DefiniteDescription {
    DefiniteDescription {
        text: format!("l'organisation de {complement}"),
        head_noun: "organisation".into(),
        complement: complement.into(),
        span: Span::new(0, 0),
        head_type: head_type.into(),
    }
}

/// Rank of an attribute name, spelled out independently of the resolver.
fn rank(attr: &str) -> (u8, String) {
    let fixed = ["IsLeadedBy", "IsComposedOf", "IsLocatedIn", "KindOf"];
    match fixed.iter().position(|a| *a == attr) {
        Some(i) => (i as u8, String::new()),
        None => (4, attr.to_string()),
    }
}

/// Every (entity, attribute) whose value matches the complement and whose
/// type falls under the head type, in ranking order.
fn brute_candidates(
    ts: &[EntityTemplate],
    complement: &str,
    head_type: &str,
) -> Vec<(String, String)> {
    let h = TypeHierarchy::bundled();
    let mut out = Vec::new();
    for t in ts {
        if !h.is_subtype(&t.entity_type, head_type).unwrap() {
            continue;
        }
        for (a, vs) in &t.attributes {
            if vs.iter().any(|v| norm(v) == norm(complement)) {
                out.push((t.entity_id.clone(), a.clone()));
            }
        }
    }
    out.sort_by(|x, y| rank(&x.1).cmp(&rank(&y.1)).then_with(|| x.0.cmp(&y.0)));
    out
}

proptest! {
    #[test]
    fn candidates_equal_brute_force(
        ts in templates(30),
        complement in prop::sample::select(VALUES),
        head in prop::sample::select(HEAD_TYPES),
    ) {
        let h = TypeHierarchy::bundled();
        let store = TemplateStore::from_templates(ts.clone(), &h).unwrap();
        let r = resolve(&description(complement, head), &store, &h);
        let got: Vec<_> = r.candidates.iter().map(|c| (c.entity_id.clone(), c.attribute.clone())).collect();
        let expected = brute_candidates(&ts, complement, head);
        prop_assert_eq!(&got, &expected);
        prop_assert_eq!(r.resolved_entity.clone(), expected.first().map(|c| c.0.clone()));

        if let (Some(entity), Some(j)) = (&r.resolved_entity, &r.justification) {
            // Soundness: Attr(Entity)=Value holds in the store.
            let (attr, rest) = j.split_once('(').unwrap();
            let (id, value) = rest.split_once(")=").unwrap();
            prop_assert_eq!(id, entity.as_str());
            let t = store.lookup(id).unwrap();
            prop_assert!(t.has_value(attr, value));
            prop_assert!(h.is_subtype(&t.entity_type, head).unwrap());
        }
    }
}

#[test]
fn empty_store_resolves_nothing() {
    let h = TypeHierarchy::bundled();
    let r = resolve(
        &description("Kofi Annan", "organization"),
        &TemplateStore::new(),
        &h,
    );
    assert!(r.resolved_entity.is_none() && r.justification.is_none() && r.candidates.is_empty());
}

#[test]
fn ambiguous_store_prefers_smaller_id() {
    let h = TypeHierarchy::bundled();
    let store = TemplateStore::from_templates(
        [
            EntityTemplate::new("ZOrg", "organization").with("IsLeadedBy", &["X_Y"]),
            EntityTemplate::new("AOrg", "organization").with("IsLeadedBy", &["X_Y"]),
        ],
        &h,
    )
    .unwrap();
    let r = resolve(&description("X Y", "organization"), &store, &h);
    assert_eq!(r.resolved_entity.as_deref(), Some("AOrg"));
    assert_eq!(r.justification.as_deref(), Some("IsLeadedBy(AOrg)=X_Y"));
    assert_eq!(r.candidates.len(), 2);
}

#[test]
fn kofi_annan_resolves_to_onu() {
    let h = TypeHierarchy::bundled();
    let store = TemplateStore::parse(
        "entity\tONU\torganization\n\
         attr\tIsLocatedIn\tNew_York\n\
         attr\tIsComposedOf\temployees && diplomats\n\
         attr\tIsLeadedBy\tKofi_Annan\n\
         attr\tKindOf\tdiplomatic_org\n",
        &h,
    )
    .unwrap();
    let heads = HeadLexicon::parse("organisation\torganization\n").unwrap();
    let text = "L'organisation de Kofi Annan a voté une résolution.";
    let doc = Document::new("d", text);
    let tokens = nefocal::tokenizer::tokenize(text);
    let ds = nefocal::resolver::parse_descriptions(&doc, &tokens, &heads);
    assert_eq!(ds.len(), 1);
    let r = resolve(&ds[0], &store, &h);
    assert_eq!(r.resolved_entity.as_deref(), Some("ONU"));
    assert_eq!(
        r.justification.as_deref(),
        Some("IsLeadedBy(ONU)=Kofi_Annan")
    );
    assert_eq!(
        r.synonymy().as_deref(),
        Some("Syn(L'organisation de Kofi Annan) = ONU")
    );
}
