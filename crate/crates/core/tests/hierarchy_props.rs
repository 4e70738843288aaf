use nefocal::hierarchy::NONE_FACET;
use nefocal::TypeHierarchy;
use proptest::prelude::*;

/// `(parents, facets)`: type `i > 0` has parent `parents[i - 1] < i`; each
/// facet entry is `(type index, facet index)`.
fn tree() -> impl Strategy<Value = (Vec<usize>, Vec<(usize, usize)>)> {
    (1usize..12).prop_flat_map(|n| {
        let parents: Vec<_> = (1..n).map(|i| (0..i).boxed()).collect();
        (parents, prop::collection::vec((0..n, 0usize..5), 0..10))
    })
}

fn render(parents: &[usize], facets: &[(usize, usize)]) -> String {
    let mut src = String::from("# random\ntype t0 parent -\n");
    for (i, p) in parents.iter().enumerate() {
        src += &format!("type t{} parent t{}\n", i + 1, p);
    }
    let mut seen = std::collections::HashSet::new();
    for &(t, f) in facets {
        if seen.insert((t, f)) {
            src += &format!("facet t{t} f{f}\n");
        }
    }
    src
}

/// Ancestor chain from the root down to `i`.
fn chain(parents: &[usize], mut i: usize) -> Vec<usize> {
    let mut out = vec![i];
    while i > 0 {
        i = parents[i - 1];
        out.push(i);
    }
    out.reverse();
    out
}

fn t(i: usize) -> String {
    format!("t{i}")
}

proptest! {
    #[test]
    fn round_trip((parents, facets) in tree()) {
        let h = TypeHierarchy::parse(&render(&parents, &facets)).unwrap();
        let again = TypeHierarchy::parse(&h.serialize()).unwrap();
        prop_assert_eq!(&again, &h);
        prop_assert_eq!(again.serialize(), h.serialize());
    }

    #[test]
    fn subtyping_matches_ancestor_chains((parents, facets) in tree()) {
        let h = TypeHierarchy::parse(&render(&parents, &facets)).unwrap();
        let n = parents.len() + 1;
        for a in 0..n {
            let ca = chain(&parents, a);
            for b in 0..n {
                let expected = ca.contains(&b);
                prop_assert_eq!(h.is_subtype(&t(a), &t(b)).unwrap(), expected);
            }
            prop_assert!(h.is_subtype(&t(a), &t(a)).unwrap());
        }
    }

    #[test]
    fn distinct_leaves_are_unrelated((parents, facets) in tree()) {
        let h = TypeHierarchy::parse(&render(&parents, &facets)).unwrap();
        let n = parents.len() + 1;
        let leaves: Vec<usize> = (0..n).filter(|i| !parents.contains(i)).collect();
        for &a in &leaves {
            for &b in &leaves {
                if a != b {
                    prop_assert!(!h.is_subtype(&t(a), &t(b)).unwrap());
                }
            }
        }
    }

    #[test]
    fn facets_inherit_in_chain_order((parents, facets) in tree()) {
        let h = TypeHierarchy::parse(&render(&parents, &facets)).unwrap();
        for i in 0..=parents.len() {
            let mut expected: Vec<String> = Vec::new();
            for node in chain(&parents, i) {
                for &(ty, f) in &facets {
                    let name = format!("f{f}");
                    if ty == node && !expected.contains(&name) {
                        expected.push(name);
                    }
                }
            }
            let got = h.valid_focalizations(&t(i)).unwrap();
            prop_assert_eq!(got, expected.iter().map(String::as_str).collect::<Vec<_>>());
            prop_assert!(h.admits_focalisation(&t(i), NONE_FACET).unwrap());
        }
    }
}

#[test]
fn two_node_cycle_is_rejected() {
    let src = "type entity parent -\ntype x parent y\ntype y parent x\n";
    assert!(TypeHierarchy::parse(src).is_err());
}
