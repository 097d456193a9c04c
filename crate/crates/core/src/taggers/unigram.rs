//! Most-frequent-tag baseline.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Tagger;
use crate::corpus::Corpus;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnigramModel {
    best: BTreeMap<String, String>,
    fallback: String,
}

/// Picks the highest count; ties go to the lexicographically smallest tag.
fn modal<'a>(counts: &BTreeMap<&'a str, usize>) -> &'a str {
    counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(t, _)| *t)
        .expect("non-empty counts")
}

pub fn train_unigram(train: &Corpus) -> Result<UnigramModel> {
    if train.token_count() == 0 {
        return Err(Error::Train("unigram tagger needs a non-empty corpus".into()));
    }
    let mut per_word: BTreeMap<&str, BTreeMap<&str, usize>> = BTreeMap::new();
    let mut global: BTreeMap<&str, usize> = BTreeMap::new();
    for t in train.tokens() {
        *per_word.entry(t.form()).or_default().entry(t.tag()).or_default() += 1;
        *global.entry(t.tag()).or_default() += 1;
    }
    Ok(UnigramModel {
        best: per_word
            .iter()
            .map(|(w, counts)| (w.to_string(), modal(counts).to_string()))
            .collect(),
        fallback: modal(&global).to_string(),
    })
}

impl UnigramModel {
    pub fn fallback(&self) -> &str {
        &self.fallback
    }

    pub fn tag_word(&self, word: &str) -> &str {
        self.best.get(word).map_or(&self.fallback, String::as_str)
    }
}

impl Tagger for UnigramModel {
    fn tag_sentence(&self, words: &[&str]) -> Vec<String> {
        words.iter().map(|w| self.tag_word(w).to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_vertical;

    #[test]
    fn majority_fallback_and_ties() {
        let c = parse_vertical("a\tX\na\tX\na\tY\nb\tN\nb\tM\nc\tN\nd\tN\n\n").unwrap();
        let m = train_unigram(&c).unwrap();
        assert_eq!(m.tag_word("a"), "X");
        assert_eq!(m.tag_word("b"), "M");
        assert_eq!(m.tag_word("zzz"), "N");
        assert_eq!(m.fallback(), "N");
        assert_eq!(m.tag(&c).len(), c.token_count());
    }

    #[test]
    fn empty_corpus_is_rejected() {
        assert!(matches!(train_unigram(&Corpus::empty()), Err(Error::Train(_))));
    }
}
