//! Seeded synthetic corpora for bootstrap experiments.
//!
//! Sentences are drawn from a first-order Markov chain over hidden
//! categories. Each category has its own word pool; words tend to carry a
//! category-typical ending, and some words are shared between two
//! categories. The target tagset names categories `T0..`, while an
//! auxiliary tagset names them `aux-*` through a fixed permutation, with a
//! configurable share of random symbol noise. Test sentences draw a set
//! share of their words from pools never used in training.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::column::AnnotationColumn;
use crate::corpus::{Corpus, Sentence, TaggedToken};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub categories: usize,
    pub train_tokens: usize,
    pub test_tokens: usize,
    /// Probability that a test word comes from the unseen pool.
    pub oov_rate: f64,
    /// Probability that an auxiliary value is replaced by a random other symbol.
    pub aux_noise: f64,
    /// Share of seen words that belong to two categories.
    pub ambiguity: f64,
    pub seen_words_per_category: usize,
    pub unseen_words_per_category: usize,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            categories: 12,
            train_tokens: 2000,
            test_tokens: 1000,
            oov_rate: 0.3,
            aux_noise: 0.05,
            ambiguity: 0.2,
            seen_words_per_category: 25,
            unseen_words_per_category: 60,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub train: Corpus,
    pub test: Corpus,
    /// Auxiliary-tagset annotation of `train`.
    pub aux_train: AnnotationColumn,
    /// Auxiliary-tagset annotation of `test`.
    pub aux_test: AnnotationColumn,
}

const ENDINGS: &[&str] = &["en", "ing", "heid", "te", "lijk", "er"];
const ONSETS: &[&str] = &["b", "d", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "w", "z"];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "aa", "oe", "ie", "ei"];

fn make_word(rng: &mut ChaCha8Rng, category: usize, salt: usize) -> String {
    let syllables = rng.gen_range(1..=2);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push_str(ONSETS.choose(rng).unwrap());
        w.push_str(VOWELS.choose(rng).unwrap());
    }
    // endings hint at the category without determining it
    let ending = if rng.gen_bool(0.5) {
        ENDINGS[category % ENDINGS.len()]
    } else {
        ENDINGS.choose(rng).unwrap()
    };
    // a numeric infix keeps words unique across pools
    format!("{w}{salt}{ending}")
}

struct Language {
    start: WeightedIndex<f64>,
    transitions: Vec<WeightedIndex<f64>>,
    seen: Vec<Vec<String>>,
    unseen: Vec<Vec<String>>,
    aux_names: Vec<String>,
}

impl Language {
    fn generate(config: &ScenarioConfig, rng: &mut ChaCha8Rng) -> Self {
        let n = config.categories;
        let weights = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            // a few strong successors per category
            (0..n)
                .map(|_| {
                    let x: f64 = rng.gen();
                    x * x * x + 0.01
                })
                .collect()
        };
        let start = WeightedIndex::new(weights(rng)).unwrap();
        let transitions = (0..n)
            .map(|_| WeightedIndex::new(weights(rng)).unwrap())
            .collect();

        let mut salt = 0usize;
        let mut next_word = |rng: &mut ChaCha8Rng, c: usize| {
            salt += 1;
            make_word(rng, c, salt)
        };
        let mut seen: Vec<Vec<String>> = (0..n)
            .map(|c| {
                (0..config.seen_words_per_category)
                    .map(|_| next_word(rng, c))
                    .collect()
            })
            .collect();
        let unseen = (0..n)
            .map(|c| {
                (0..config.unseen_words_per_category)
                    .map(|_| next_word(rng, c))
                    .collect()
            })
            .collect();
        // share some seen words with a second category
        for c in 0..n {
            let shared = (config.ambiguity * config.seen_words_per_category as f64).round() as usize;
            for i in 0..shared.min(seen[c].len()) {
                let other = (c + 1 + rng.gen_range(0..n - 1)) % n;
                let word = seen[c][i].clone();
                seen[other].push(word);
            }
        }

        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let aux_names = perm.iter().map(|p| format!("aux-{p}")).collect();

        Language {
            start,
            transitions,
            seen,
            unseen,
            aux_names,
        }
    }

    fn sentence(
        &self,
        rng: &mut ChaCha8Rng,
        oov_rate: f64,
    ) -> (Vec<(String, usize)>, usize) {
        let len = rng.gen_range(4..=14);
        let mut out = Vec::with_capacity(len);
        let mut cat = self.start.sample(rng);
        for _ in 0..len {
            let pool = if oov_rate > 0.0 && rng.gen_bool(oov_rate) {
                &self.unseen[cat]
            } else {
                &self.seen[cat]
            };
            // Zipf-like preference for early words in the pool
            let r: f64 = rng.gen();
            let idx = ((r * r) * pool.len() as f64) as usize;
            out.push((pool[idx.min(pool.len() - 1)].clone(), cat));
            cat = self.transitions[cat].sample(rng);
        }
        (out, len)
    }
}

fn corpus_of(
    lang: &Language,
    rng: &mut ChaCha8Rng,
    tokens: usize,
    oov_rate: f64,
    noise: f64,
    n: usize,
    tagset: &str,
) -> (Corpus, Vec<String>) {
    let mut sentences = Vec::new();
    let mut aux = Vec::new();
    let mut count = 0;
    while count < tokens {
        let (words, len) = lang.sentence(rng, oov_rate);
        count += len;
        let mut tagged = Vec::with_capacity(len);
        for (word, cat) in words {
            tagged.push(TaggedToken::new(word, format!("T{cat}")).unwrap());
            let symbol = if rng.gen_bool(noise) {
                let other = (cat + 1 + rng.gen_range(0..n - 1)) % n;
                &lang.aux_names[other]
            } else {
                &lang.aux_names[cat]
            };
            aux.push(symbol.clone());
        }
        sentences.push(Sentence::new(tagged).unwrap());
    }
    (Corpus::new(tagset, sentences), aux)
}

/// Generates a train/test scenario from `config`.
pub fn scenario(config: &ScenarioConfig) -> Scenario {
    assert!(config.categories >= 2, "need at least two categories");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let lang = Language::generate(config, &mut rng);
    let n = config.categories;
    let (train, aux_train) = corpus_of(
        &lang,
        &mut rng,
        config.train_tokens,
        0.0,
        config.aux_noise,
        n,
        "target",
    );
    let (test, aux_test) = corpus_of(
        &lang,
        &mut rng,
        config.test_tokens,
        config.oov_rate,
        config.aux_noise,
        n,
        "target",
    );
    Scenario {
        train,
        test,
        aux_train: AnnotationColumn::new("aux", aux_train),
        aux_test: AnnotationColumn::new("aux", aux_test),
    }
}
