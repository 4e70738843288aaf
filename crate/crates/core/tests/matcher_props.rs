use nefocal::lexicon::{CasePolicy, Gazetteer, MarkerLexicon};
use nefocal::matcher::{PatternKind, PatternMatcher};
use nefocal::tokenizer::{tokenize, Token};
use proptest::prelude::*;

const WORDS: &[&str] = &[
    "Kofi", "Annan", "New", "York", "ONU", "de", "la", "Mr", "Inc.", ".",
];
const TYPES: &[&str] = &["person", "location", "organization"];
const MARKERS: &str = "Mr\tperson\tbefore\nInc.\torganization\tafter\nMr Kofi\tperson\tbefore\n";

/// Entry surfaces are 1-3 words; the type is a function of the surface so
/// no two entries conflict.
fn entries() -> impl Strategy<Value = Vec<String>> {
    let entry =
        prop::collection::vec(prop::sample::select(&WORDS[..9]), 1..4).prop_map(|w| w.join(" "));
    prop::collection::btree_set(entry, 0..8).prop_map(|s| s.into_iter().collect())
}

fn text() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(WORDS), 0..25).prop_map(|w| w.join(" "))
}

fn type_of(surface: &str) -> &'static str {
    TYPES[surface.len() % TYPES.len()]
}

fn gazetteer(entries: &[String], policy: CasePolicy) -> Gazetteer {
    let mut g = Gazetteer::new(policy);
    for e in entries {
        g.insert(e, type_of(e)).unwrap();
    }
    g
}

type Found = Vec<(usize, usize, String)>;

fn describe(kind: &PatternKind) -> String {
    match kind {
        PatternKind::Name { entity_type } => format!("name:{entity_type}"),
        PatternKind::Marker { entity_type, .. } => format!("marker:{entity_type}"),
    }
}

fn run(entries: &[String], policy: CasePolicy, text: &str) -> Found {
    run_with(
        entries,
        policy,
        text,
        &MarkerLexicon::parse(MARKERS).unwrap(),
    )
}

fn run_with(entries: &[String], policy: CasePolicy, text: &str, markers: &MarkerLexicon) -> Found {
    let g = gazetteer(entries, policy);
    let m = PatternMatcher::compile(&g, markers);
    m.find_all(&tokenize(text))
        .into_iter()
        .map(|m| (m.start, m.end, describe(&m.kind)))
        .collect()
}

/// Every occurrence of every pattern, staying within one sentence.
fn candidates(entries: &[String], tokens: &[Token]) -> Vec<(usize, usize, String)> {
    let mut patterns: Vec<(Vec<String>, String)> = entries
        .iter()
        .map(|e| (words(e), format!("name:{}", type_of(e))))
        .collect();
    for line in MARKERS.lines() {
        let f: Vec<&str> = line.split('\t').collect();
        patterns.push((words(f[0]), format!("marker:{}", f[1])));
    }
    let mut out = Vec::new();
    for start in 0..tokens.len() {
        for (p, label) in &patterns {
            let end = start + p.len();
            if end > tokens.len() {
                continue;
            }
            let same_sentence = tokens[start..end]
                .iter()
                .all(|t| t.sentence_index == tokens[start].sentence_index);
            let equal = tokens[start..end]
                .iter()
                .zip(p)
                .all(|(t, w)| &t.surface == w);
            if same_sentence && equal {
                out.push((start, end, label.clone()));
            }
        }
    }
    out
}

fn words(s: &str) -> Vec<String> {
    tokenize(s).into_iter().map(|t| t.surface).collect()
}

/// Scan left to right, keeping the longest candidate at each position
/// (names before markers at equal length).
fn oracle(entries: &[String], text: &str) -> Found {
    let tokens = tokenize(text);
    let all = candidates(entries, &tokens);
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let best = all
            .iter()
            .filter(|c| c.0 == i)
            .max_by_key(|c| (c.1, c.2.starts_with("name")));
        match best {
            Some(c) => {
                out.push(c.clone());
                i = c.1;
            }
            None => i += 1,
        }
    }
    out
}

fn recase(text: &str, mask: &[bool]) -> String {
    text.chars()
        .zip(mask.iter().cycle())
        .map(|(c, &up)| {
            if up {
                c.to_uppercase().collect::<String>()
            } else {
                c.to_lowercase().collect()
            }
        })
        .collect()
}

proptest! {
    #[test]
    fn agrees_with_brute_force(entries in entries(), text in text()) {
        prop_assert_eq!(run(&entries, CasePolicy::Exact, &text), oracle(&entries, &text));
    }

    #[test]
    fn independent_of_insertion_order(entries in entries(), text in text(), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut shuffled = entries.clone();
        shuffled.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        prop_assert_eq!(run(&entries, CasePolicy::Exact, &text), run(&shuffled, CasePolicy::Exact, &text));
    }

    #[test]
    fn no_longer_candidate_at_same_start(entries in entries(), text in text()) {
        let tokens = tokenize(&text);
        let all = candidates(&entries, &tokens);
        for (s, e, _) in run(&entries, CasePolicy::Exact, &text) {
            prop_assert!(!all.iter().any(|c| c.0 == s && c.1 > e));
        }
    }

    #[test]
    fn fold_is_case_invariant(entries in entries(), text in text(), mask in prop::collection::vec(any::<bool>(), 1..8)) {
        // Markers are always exact, so they are left out here.
        let none = MarkerLexicon::default();
        let lower = text.to_lowercase();
        let upper = recase(&lower, &mask);
        let a = run_with(&entries, CasePolicy::Fold, &lower, &none);
        let b = run_with(&entries, CasePolicy::Fold, &upper, &none);
        // Recasing can move sentence boundaries, so compare only when the
        // tokenization is structurally identical.
        let shape = |s: &str| tokenize(s).iter().map(|t| (t.span, t.sentence_index)).collect::<Vec<_>>();
        if shape(&lower) == shape(&upper) {
            prop_assert_eq!(a, b);
        }
    }
}

#[test]
fn exact_policy_rejects_lowercase() {
    assert!(run(&["ONU".to_string()], CasePolicy::Exact, "l'onu").is_empty());
    assert_eq!(
        run(&["ONU".to_string()], CasePolicy::Fold, "l'onu").len(),
        1
    );
}
