//! Memory-based tagger in the MBT style.
//!
//! Known words are classified from the two previously assigned tags, the
//! word's ambitag, the word itself and the ambitag of the next word.
//! Unknown words use the two previous tags, the first letter, the last
//! three letters and the next word's ambitag. Rare training words also
//! feed the unknown-word instance base.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Tagger;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::mbl::{self, ClassifierConfig, InstanceBase, TrainingCase, Weighting};

/// Padding outside the sentence. Contains a tab, so never equals data.
pub const PAD: &str = "\t#";
/// Ambitag of a word absent from training.
pub const UNSEEN_AMBITAG: &str = "\t?";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MbtConfig {
    /// Words seen at most this often also yield unknown-word cases.
    pub rare_threshold: usize,
    pub classifier: ClassifierConfig,
}

impl Default for MbtConfig {
    fn default() -> Self {
        MbtConfig {
            rare_threshold: 5,
            classifier: ClassifierConfig {
                k: 1,
                weighting: Weighting::GainRatio,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MbtModel {
    config: MbtConfig,
    ambitags: BTreeMap<String, String>,
    unambiguous: BTreeMap<String, String>,
    known: InstanceBase,
    unknown: Option<InstanceBase>,
    fallback: String,
}

fn left_context(tags: &[&str], pos: usize) -> [String; 2] {
    let at = |offset: usize| {
        pos.checked_sub(offset)
            .map_or(PAD.to_string(), |i| tags[i].to_string())
    };
    [at(2), at(1)]
}

fn last_letters(word: &str) -> [String; 3] {
    let chars: Vec<char> = word.chars().collect();
    let from_end = |k: usize| {
        chars
            .len()
            .checked_sub(k)
            .map_or(PAD.to_string(), |i| chars[i].to_string())
    };
    [from_end(3), from_end(2), from_end(1)]
}

/// Feature extraction over a word-to-ambitag map.
struct Templates<'a> {
    ambitags: &'a BTreeMap<String, String>,
}

impl Templates<'_> {
    fn ambitag(&self, word: &str) -> &str {
        self.ambitags.get(word).map_or(UNSEEN_AMBITAG, String::as_str)
    }

    fn right_ambitag(&self, words: &[&str], pos: usize) -> String {
        words
            .get(pos + 1)
            .map_or(PAD.to_string(), |w| self.ambitag(w).to_string())
    }

    fn known(&self, words: &[&str], left: &[&str], pos: usize) -> Vec<String> {
        let [l2, l1] = left_context(left, pos);
        vec![
            l2,
            l1,
            self.ambitag(words[pos]).to_string(),
            words[pos].to_string(),
            self.right_ambitag(words, pos),
        ]
    }

    fn unknown(&self, words: &[&str], left: &[&str], pos: usize) -> Vec<String> {
        let [l2, l1] = left_context(left, pos);
        let first = words[pos].chars().next().unwrap_or_default().to_string();
        let [c3, c2, c1] = last_letters(words[pos]);
        vec![l2, l1, first, c3, c2, c1, self.right_ambitag(words, pos)]
    }
}

impl MbtModel {
    fn templates(&self) -> Templates<'_> {
        Templates {
            ambitags: &self.ambitags,
        }
    }

    pub fn ambitags(&self) -> &BTreeMap<String, String> {
        &self.ambitags
    }

    pub fn known_base(&self) -> &InstanceBase {
        &self.known
    }

    pub fn unknown_base(&self) -> Option<&InstanceBase> {
        self.unknown.as_ref()
    }
}

pub fn train_mbt(train: &Corpus, config: &MbtConfig) -> Result<MbtModel> {
    if train.token_count() == 0 {
        return Err(Error::Train("MBT needs a non-empty training corpus".into()));
    }

    let mut tag_sets: BTreeMap<&str, BTreeMap<&str, usize>> = BTreeMap::new();
    let mut tag_freq: BTreeMap<&str, usize> = BTreeMap::new();
    for token in train.tokens() {
        *tag_sets
            .entry(token.form())
            .or_default()
            .entry(token.tag())
            .or_default() += 1;
        *tag_freq.entry(token.tag()).or_default() += 1;
    }
    let ambitags: BTreeMap<String, String> = tag_sets
        .iter()
        .map(|(w, tags)| {
            let joined: Vec<&str> = tags.keys().copied().collect();
            (w.to_string(), joined.join("|"))
        })
        .collect();
    let unambiguous = tag_sets
        .iter()
        .filter(|(_, tags)| tags.len() == 1)
        .map(|(w, tags)| (w.to_string(), tags.keys().next().unwrap().to_string()))
        .collect();
    let word_freq: BTreeMap<&str, usize> = tag_sets
        .iter()
        .map(|(w, tags)| (*w, tags.values().sum()))
        .collect();
    let fallback = tag_freq
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(t, _)| t.to_string())
        .unwrap();

    let templates = Templates {
        ambitags: &ambitags,
    };
    let mut known_cases = Vec::new();
    let mut unknown_cases = Vec::new();
    for sentence in train.sentences() {
        let words: Vec<&str> = sentence.forms().collect();
        let gold: Vec<&str> = sentence.tags().collect();
        for pos in 0..words.len() {
            known_cases.push(TrainingCase {
                features: templates.known(&words, &gold, pos),
                target: gold[pos].to_string(),
            });
            if word_freq[words[pos]] <= config.rare_threshold {
                unknown_cases.push(TrainingCase {
                    features: templates.unknown(&words, &gold, pos),
                    target: gold[pos].to_string(),
                });
            }
        }
    }

    let known = mbl::train(known_cases, config.classifier)?;
    let unknown = if unknown_cases.is_empty() {
        None
    } else {
        Some(mbl::train(unknown_cases, config.classifier)?)
    };
    Ok(MbtModel {
        config: *config,
        ambitags,
        unambiguous,
        known,
        unknown,
        fallback,
    })
}

impl MbtModel {
    fn tag_words(&self, words: &[&str]) -> Vec<String> {
        let templates = self.templates();
        let mut assigned: Vec<String> = Vec::with_capacity(words.len());
        for pos in 0..words.len() {
            let left: Vec<&str> = assigned.iter().map(String::as_str).collect();
            let tag = if let Some(tag) = self.unambiguous.get(words[pos]) {
                tag.clone()
            } else if self.ambitags.contains_key(words[pos]) {
                let features = templates.known(words, &left, pos);
                self.known.classify(&features).expect("arity fixed").0
            } else {
                match &self.unknown {
                    Some(base) => {
                        let features = templates.unknown(words, &left, pos);
                        base.classify(&features).expect("arity fixed").0
                    }
                    None => self.fallback.clone(),
                }
            };
            assigned.push(tag);
        }
        assigned
    }
}

impl Tagger for MbtModel {
    fn tag_sentence(&self, words: &[&str]) -> Vec<String> {
        self.tag_words(words)
    }
}
