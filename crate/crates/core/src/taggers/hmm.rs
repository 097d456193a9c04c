//! Trigram HMM tagger in the TnT style.
//!
//! Transition probabilities interpolate unigram, bigram and trigram
//! maximum-likelihood estimates with weights fitted by deleted
//! interpolation. Unknown words get a tag distribution from successive
//! suffix abstraction over rare training words. Decoding is Viterbi over
//! (previous tag, tag) states with an optional top-`b` beam.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::Tagger;
use crate::corpus::Corpus;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HmmConfig {
    pub max_suffix_len: usize,
    /// Words seen at most this often feed the suffix statistics.
    pub rare_threshold: u64,
    /// States kept per position; `None` decodes exactly.
    pub beam: Option<usize>,
    pub seed: u64,
}

impl Default for HmmConfig {
    fn default() -> Self {
        HmmConfig {
            max_suffix_len: 10,
            rare_threshold: 10,
            beam: Some(5),
            seed: 0,
        }
    }
}

/// Raw counts an HMM is estimated from.
///
/// Tags are indexed `0..tags.len()`; index `tags.len()` is the sentence
/// boundary, which appears as history at sentence start and as outcome at
/// sentence end.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HmmCounts {
    pub tags: Vec<String>,
    /// Outcome counts, boundary last.
    pub unigrams: Vec<u64>,
    /// `(previous, outcome, count)`.
    pub bigrams: Vec<(u32, u32, u64)>,
    /// `(second previous, previous, outcome, count)`.
    pub trigrams: Vec<(u32, u32, u32, u64)>,
    /// Word to `(tag, count)` emissions.
    pub words: BTreeMap<String, Vec<(u32, u64)>>,
    /// Suffix to `(tag, count)` over rare words.
    pub suffixes: BTreeMap<String, Vec<(u32, u64)>>,
}

impl HmmCounts {
    /// Collects counts from a tagged corpus.
    pub fn collect(corpus: &Corpus, config: &HmmConfig) -> Result<Self> {
        if corpus.token_count() == 0 {
            return Err(Error::Train("HMM needs a non-empty training corpus".into()));
        }
        let mut tags: Vec<String> = corpus.tokens().map(|t| t.tag().to_string()).collect();
        tags.sort_unstable();
        tags.dedup();
        let index: HashMap<&str, u32> = tags
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i as u32))
            .collect();
        let boundary = tags.len() as u32;

        let mut unigrams = vec![0u64; tags.len() + 1];
        let mut bigrams: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        let mut trigrams: BTreeMap<(u32, u32, u32), u64> = BTreeMap::new();
        let mut words: BTreeMap<String, BTreeMap<u32, u64>> = BTreeMap::new();

        for sentence in corpus.sentences() {
            let (mut a, mut b) = (boundary, boundary);
            let ids = sentence.tags().map(|t| index[t]).chain(std::iter::once(boundary));
            for c in ids {
                unigrams[c as usize] += 1;
                *bigrams.entry((b, c)).or_default() += 1;
                *trigrams.entry((a, b, c)).or_default() += 1;
                (a, b) = (b, c);
            }
            for token in sentence.tokens() {
                *words
                    .entry(token.form().to_string())
                    .or_default()
                    .entry(index[token.tag()])
                    .or_default() += 1;
            }
        }

        let mut suffixes: BTreeMap<String, BTreeMap<u32, u64>> = BTreeMap::new();
        for (word, by_tag) in &words {
            let freq: u64 = by_tag.values().sum();
            if freq > config.rare_threshold {
                continue;
            }
            for suffix in suffixes_of(word, config.max_suffix_len) {
                let slot = suffixes.entry(suffix.to_string()).or_default();
                for (&tag, &count) in by_tag {
                    *slot.entry(tag).or_default() += count;
                }
            }
        }

        let flatten = |m: BTreeMap<String, BTreeMap<u32, u64>>| {
            m.into_iter()
                .map(|(k, v)| (k, v.into_iter().collect()))
                .collect()
        };
        Ok(HmmCounts {
            tags,
            unigrams,
            bigrams: bigrams.into_iter().map(|((b, c), n)| (b, c, n)).collect(),
            trigrams: trigrams
                .into_iter()
                .map(|((a, b, c), n)| (a, b, c, n))
                .collect(),
            words: flatten(words),
            suffixes: flatten(suffixes),
        })
    }
}

/// Suffixes of length 1 up to `max_len` characters, shortest first.
fn suffixes_of(word: &str, max_len: usize) -> impl Iterator<Item = &str> {
    word.char_indices()
        .rev()
        .take(max_len)
        .map(move |(i, _)| &word[i..])
}

/// Interpolation weights fitted by deleted interpolation.
///
/// Each trigram occurrence type votes, with its count, for the order whose
/// held-out estimate is largest. Ties go to the lower order.
pub fn deleted_interpolation(counts: &HmmCounts) -> [f64; 3] {
    let mut bigram = HashMap::new();
    let mut history1 = HashMap::<u32, u64>::new();
    for &(b, c, n) in &counts.bigrams {
        bigram.insert((b, c), n);
        *history1.entry(b).or_default() += n;
    }
    let mut history2 = HashMap::<(u32, u32), u64>::new();
    for &(a, b, _, n) in &counts.trigrams {
        *history2.entry((a, b)).or_default() += n;
    }
    let total: u64 = counts.unigrams.iter().sum();

    let ratio = |num: u64, den: u64| {
        if den <= 1 {
            0.0
        } else {
            (num as f64 - 1.0) / (den as f64 - 1.0)
        }
    };

    let mut weights = [0u64; 3];
    for &(a, b, c, n) in &counts.trigrams {
        let c3 = ratio(n, history2[&(a, b)]);
        let c2 = ratio(
            bigram.get(&(b, c)).copied().unwrap_or(0),
            history1.get(&b).copied().unwrap_or(0),
        );
        let c1 = ratio(counts.unigrams[c as usize], total);
        let order = if c1 >= c2 && c1 >= c3 {
            0
        } else if c2 >= c3 {
            1
        } else {
            2
        };
        weights[order] += n;
    }
    let sum: u64 = weights.iter().sum();
    if sum == 0 {
        return [1.0, 0.0, 0.0];
    }
    weights.map(|w| w as f64 / sum as f64)
}

/// A trained trigram tagger. Serializes as its counts and configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "StoredHmm", from = "StoredHmm")]
pub struct HmmModel {
    config: HmmConfig,
    counts: HmmCounts,
    lambdas: [f64; 3],
    unigram_p: Vec<f64>,
    // dense (tags+1) x (tags+1), row = previous
    bigram_p: Vec<f64>,
    trigram_p: HashMap<(u32, u32), Vec<(u32, f64)>>,
    emissions: HashMap<String, Vec<(u32, f64)>>,
    tag_prior: Vec<f64>,
    suffix_p: HashMap<String, Vec<(u32, f64)>>,
    theta: f64,
}

#[derive(Serialize, Deserialize)]
struct StoredHmm {
    config: HmmConfig,
    counts: HmmCounts,
}

impl From<HmmModel> for StoredHmm {
    fn from(m: HmmModel) -> Self {
        StoredHmm {
            config: m.config,
            counts: m.counts,
        }
    }
}

impl From<StoredHmm> for HmmModel {
    fn from(s: StoredHmm) -> Self {
        HmmModel::from_counts(s.counts, s.config)
    }
}

pub fn train_hmm(train: &Corpus, config: &HmmConfig) -> Result<HmmModel> {
    let counts = HmmCounts::collect(train, config)?;
    Ok(HmmModel::from_counts(counts, *config))
}

fn normalize(entries: &[(u32, u64)]) -> Vec<(u32, f64)> {
    let total: u64 = entries.iter().map(|&(_, n)| n).sum();
    entries
        .iter()
        .map(|&(t, n)| (t, n as f64 / total as f64))
        .collect()
}

impl HmmModel {
    /// Estimates all probabilities from `counts`.
    pub fn from_counts(counts: HmmCounts, config: HmmConfig) -> Self {
        let n_tags = counts.tags.len();
        let width = n_tags + 1;
        let lambdas = deleted_interpolation(&counts);

        let total: u64 = counts.unigrams.iter().sum();
        let unigram_p = counts
            .unigrams
            .iter()
            .map(|&n| n as f64 / total as f64)
            .collect();

        let mut history1 = vec![0u64; width];
        for &(b, _, n) in &counts.bigrams {
            history1[b as usize] += n;
        }
        let mut bigram_p = vec![0.0; width * width];
        for &(b, c, n) in &counts.bigrams {
            bigram_p[b as usize * width + c as usize] = n as f64 / history1[b as usize] as f64;
        }

        let mut grouped: BTreeMap<(u32, u32), Vec<(u32, u64)>> = BTreeMap::new();
        for &(a, b, c, n) in &counts.trigrams {
            grouped.entry((a, b)).or_default().push((c, n));
        }
        let trigram_p = grouped
            .into_iter()
            .map(|(h, v)| (h, normalize(&v)))
            .collect();

        let emissions = {
            let mut tag_totals = vec![0u64; n_tags];
            for by_tag in counts.words.values() {
                for &(t, n) in by_tag {
                    tag_totals[t as usize] += n;
                }
            }
            counts
                .words
                .iter()
                .map(|(w, by_tag)| {
                    let probs = by_tag
                        .iter()
                        .map(|&(t, n)| (t, n as f64 / tag_totals[t as usize] as f64))
                        .collect();
                    (w.clone(), probs)
                })
                .collect()
        };

        // tag prior excludes the boundary outcome
        let tag_tokens: u64 = counts.unigrams[..n_tags].iter().sum();
        let tag_prior: Vec<f64> = counts.unigrams[..n_tags]
            .iter()
            .map(|&n| n as f64 / tag_tokens as f64)
            .collect();
        let theta = if n_tags > 1 {
            let mean = 1.0 / n_tags as f64;
            let var = tag_prior.iter().map(|p| (p - mean).powi(2)).sum::<f64>()
                / (n_tags as f64 - 1.0);
            var.sqrt()
        } else {
            0.0
        };
        let suffix_p = counts
            .suffixes
            .iter()
            .map(|(s, v)| (s.clone(), normalize(v)))
            .collect();

        HmmModel {
            config,
            counts,
            lambdas,
            unigram_p,
            bigram_p,
            trigram_p,
            emissions,
            tag_prior,
            suffix_p,
            theta,
        }
    }

    pub fn config(&self) -> &HmmConfig {
        &self.config
    }

    pub fn set_beam(&mut self, beam: Option<usize>) {
        self.config.beam = beam;
    }

    pub fn counts(&self) -> &HmmCounts {
        &self.counts
    }

    pub fn tags(&self) -> &[String] {
        &self.counts.tags
    }

    /// Index of the sentence boundary in transition queries.
    pub fn boundary(&self) -> usize {
        self.counts.tags.len()
    }

    pub fn lambdas(&self) -> [f64; 3] {
        self.lambdas
    }

    /// Suffix-smoothing weight for unknown words.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_known(&self, word: &str) -> bool {
        self.emissions.contains_key(word)
    }

    /// Interpolated `P(c | a, b)`; an unseen `(a, b)` history backs off to the bigram.
    pub fn transition_prob(&self, a: usize, b: usize, c: usize) -> f64 {
        let width = self.boundary() + 1;
        let bigram = self.bigram_p[b * width + c];
        let trigram = match self.trigram_p.get(&(a as u32, b as u32)) {
            Some(dist) => dist
                .iter()
                .find(|&&(t, _)| t as usize == c)
                .map_or(0.0, |&(_, p)| p),
            None => bigram,
        };
        let [l1, l2, l3] = self.lambdas;
        l1 * self.unigram_p[c] + l2 * bigram + l3 * trigram
    }

    pub fn transition_logprob(&self, a: usize, b: usize, c: usize) -> f64 {
        self.transition_prob(a, b, c).ln()
    }

    /// Smoothed `P(tag | longest matching suffix)` for every tag.
    pub fn suffix_tag_distribution(&self, word: &str) -> Vec<f64> {
        let mut probs = self.tag_prior.clone();
        for suffix in suffixes_of(word, self.config.max_suffix_len) {
            let Some(dist) = self.suffix_p.get(suffix) else {
                break;
            };
            let mut ml = vec![0.0; probs.len()];
            for &(t, p) in dist {
                ml[t as usize] = p;
            }
            for (p, m) in probs.iter_mut().zip(ml) {
                *p = (m + self.theta * *p) / (1.0 + self.theta);
            }
        }
        probs
    }

    /// Log emission score of `word` for each tag (`-inf` where impossible).
    ///
    /// Unknown words score `P(tag | suffix) / P(tag)`, which is the
    /// emission up to a factor shared by all tags.
    pub fn emission_logprobs(&self, word: &str) -> Vec<f64> {
        let mut scores = vec![f64::NEG_INFINITY; self.boundary()];
        match self.emissions.get(word) {
            Some(dist) => {
                for &(t, p) in dist {
                    scores[t as usize] = p.ln();
                }
            }
            None => {
                for (t, p) in self.suffix_tag_distribution(word).into_iter().enumerate() {
                    scores[t] = (p / self.tag_prior[t]).ln();
                }
            }
        }
        scores
    }

    /// Viterbi decoding of one sentence into tag indices.
    pub fn decode(&self, words: &[&str]) -> Vec<usize> {
        if words.is_empty() {
            return Vec::new();
        }
        let boundary = self.boundary();

        #[derive(Clone, Copy)]
        struct State {
            prev: usize,
            cur: usize,
            score: f64,
            back: usize,
        }

        let mut lattice: Vec<Vec<State>> = Vec::with_capacity(words.len());
        let mut frontier = vec![State {
            prev: boundary,
            cur: boundary,
            score: 0.0,
            back: usize::MAX,
        }];

        for word in words {
            let emit = self.emission_logprobs(word);
            let mut next: Vec<State> = Vec::new();
            let mut slot: HashMap<(usize, usize), usize> = HashMap::new();
            for (from, state) in frontier.iter().enumerate() {
                for (tag, &e) in emit.iter().enumerate() {
                    if e == f64::NEG_INFINITY {
                        continue;
                    }
                    let score =
                        state.score + self.transition_logprob(state.prev, state.cur, tag) + e;
                    match slot.get(&(state.cur, tag)) {
                        Some(&i) => {
                            if score > next[i].score {
                                next[i].score = score;
                                next[i].back = from;
                            }
                        }
                        None => {
                            slot.insert((state.cur, tag), next.len());
                            next.push(State {
                                prev: state.cur,
                                cur: tag,
                                score,
                                back: from,
                            });
                        }
                    }
                }
            }
            if let Some(beam) = self.config.beam {
                if next.len() > beam {
                    next.sort_by(|x, y| {
                        y.score
                            .total_cmp(&x.score)
                            .then((x.prev, x.cur).cmp(&(y.prev, y.cur)))
                    });
                    next.truncate(beam.max(1));
                }
            }
            lattice.push(std::mem::replace(&mut frontier, next));
        }
        lattice.push(frontier);
        // lattice[0] is the start state; lattice[i + 1] holds states for words[i]

        let last = lattice.last().unwrap();
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (i, s) in last.iter().enumerate() {
            let score = s.score + self.transition_logprob(s.prev, s.cur, boundary);
            if score > best_score {
                best = i;
                best_score = score;
            }
        }

        let mut tags = vec![0; words.len()];
        let mut idx = best;
        for pos in (0..words.len()).rev() {
            let state = lattice[pos + 1][idx];
            tags[pos] = state.cur;
            idx = state.back;
        }
        tags
    }
}

impl Tagger for HmmModel {
    fn tag_sentence(&self, words: &[&str]) -> Vec<String> {
        self.decode(words)
            .into_iter()
            .map(|t| self.counts.tags[t].clone())
            .collect()
    }
}
