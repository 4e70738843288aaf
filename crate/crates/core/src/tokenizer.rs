//! French-aware word tokenization and sentence segmentation.
//!
//! Elided clitics keep their apostrophe and are split from the following word
//! (`l'ONU` gives `l'` and `ONU`). A sentence ends after `.`, `!` or `?` when
//! what follows is whitespace and an uppercase letter, or the end of the text.

use std::ops::Range;

use crate::model::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub span: Span,
    pub sentence_index: usize,
    pub is_word: bool,
}

impl Token {
    /// First character is uppercase.
    pub fn is_capitalized(&self) -> bool {
        self.surface.chars().next().is_some_and(char::is_uppercase)
    }

    /// `l'`, `d'`, `qu'` and friends.
    pub fn is_clitic(&self) -> bool {
        self.surface.ends_with(is_apostrophe)
    }

    pub fn folded(&self) -> String {
        fold(&self.surface)
    }
}

const CLITICS: &[&str] = &[
    "l", "d", "j", "m", "n", "s", "t", "c", "qu", "jusqu", "lorsqu", "puisqu", "quoiqu",
];

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_sentence_final(s: &str) -> bool {
    matches!(s, "." | "!" | "?")
}

/// Case folding used for case-insensitive comparisons; the typographic
/// apostrophe folds to the ASCII one.
pub fn fold(s: &str) -> String {
    s.chars()
        .map(|c| if c == '\u{2019}' { '\'' } else { c })
        .flat_map(char::to_lowercase)
        .collect()
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut sentence = 0;
    let mut i = 0;

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let is_word = c.is_alphanumeric();
        if is_word {
            i += 1;
            while i < chars.len() {
                let c = chars[i];
                let next = chars.get(i + 1).copied();
                let hyphenated = c == '-'
                    && chars[i - 1].is_alphanumeric()
                    && next.is_some_and(char::is_alphanumeric);
                let numeric = (c == '.' || c == ',')
                    && chars[i - 1].is_ascii_digit()
                    && next.is_some_and(|n| n.is_ascii_digit());
                if c.is_alphanumeric() || hyphenated || numeric {
                    i += 1;
                } else if is_apostrophe(c) && next.is_some_and(char::is_alphabetic) {
                    let stem: String = chars[start..i].iter().collect();
                    i += 1;
                    if CLITICS.contains(&fold(&stem).as_str()) {
                        break;
                    }
                } else {
                    break;
                }
            }
        } else {
            i += 1;
        }

        let surface: String = chars[start..i].iter().collect();
        let ends_sentence = is_sentence_final(&surface) && {
            let rest = &chars[i..];
            match rest.iter().position(|c| !c.is_whitespace()) {
                None => true,
                Some(0) => false,
                Some(k) => rest[k].is_uppercase(),
            }
        };
        tokens.push(Token {
            surface,
            span: Span::new(start, i),
            sentence_index: sentence,
            is_word,
        });
        if ends_sentence {
            sentence += 1;
        }
    }
    tokens
}

/// Token index ranges of each sentence, in order.
pub fn sentences(tokens: &[Token]) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=tokens.len() {
        if i == tokens.len() || tokens[i].sentence_index != tokens[start].sentence_index {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Token surfaces of `s`, folded when `fold_case`, used to key patterns.
pub fn pattern_key(s: &str, fold_case: bool) -> Vec<String> {
    tokenize(s)
        .into_iter()
        .map(|t| if fold_case { t.folded() } else { t.surface })
        .collect()
}
