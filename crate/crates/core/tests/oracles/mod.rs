//! Independent reference implementations used by the integration and
//! acceptance tests. Nothing here calls into the code under test except to
//! read inputs.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use combitag::mbl::TrainingCase;
use combitag::taggers::hmm::{HmmCounts, HmmModel};
use rand::Rng;

// ---------- instance-based classification ----------

fn entropy(counts: impl IntoIterator<Item = usize>) -> f64 {
    let counts: Vec<usize> = counts.into_iter().collect();
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum()
}

pub fn gain_ratios(cases: &[TrainingCase]) -> Vec<f64> {
    let arity = cases[0].features.len();
    let mut class_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for c in cases {
        *class_counts.entry(&c.target).or_default() += 1;
    }
    let h_class = entropy(class_counts.values().copied());
    (0..arity)
        .map(|f| {
            let mut by_value: BTreeMap<&str, BTreeMap<&str, usize>> = BTreeMap::new();
            for c in cases {
                *by_value
                    .entry(&c.features[f])
                    .or_default()
                    .entry(&c.target)
                    .or_default() += 1;
            }
            let n = cases.len() as f64;
            let conditional: f64 = by_value
                .values()
                .map(|m| {
                    let size: usize = m.values().sum();
                    size as f64 / n * entropy(m.values().copied())
                })
                .sum();
            let split = entropy(by_value.values().map(|m| m.values().sum::<usize>()));
            if split == 0.0 {
                0.0
            } else {
                (h_class - conditional) / split
            }
        })
        .collect()
}

pub fn distance(a: &[String], b: &[String], weights: Option<&[f64]>) -> f64 {
    a.iter()
        .zip(b)
        .enumerate()
        .filter(|(_, (x, y))| x != y)
        .map(|(i, _)| weights.map_or(1.0, |w| w[i]))
        .sum()
}

/// Exhaustive k-distinct-distance nearest neighbor vote.
pub fn classify(cases: &[TrainingCase], query: &[String], weights: Option<&[f64]>, k: usize) -> String {
    let scored: Vec<(f64, &str)> = cases
        .iter()
        .map(|c| (distance(&c.features, query, weights), c.target.as_str()))
        .collect();
    let mut distinct: Vec<f64> = scored.iter().map(|s| s.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let cutoff = distinct[(k - 1).min(distinct.len() - 1)];

    let mut global: HashMap<&str, usize> = HashMap::new();
    for c in cases {
        *global.entry(&c.target).or_default() += 1;
    }
    let mut votes: BTreeMap<&str, usize> = BTreeMap::new();
    for (d, class) in &scored {
        if *d <= cutoff {
            *votes.entry(class).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&str, usize)> = votes.into_iter().collect();
    ranked.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then(global[b.0].cmp(&global[a.0]))
            .then(a.0.cmp(b.0))
    });
    ranked[0].0.to_string()
}

pub fn random_cases(rng: &mut impl Rng, arity: usize, n: usize, alphabet: usize) -> Vec<TrainingCase> {
    let classes = rng.gen_range(2..=alphabet.max(2));
    (0..n)
        .map(|_| {
            let features: Vec<String> = (0..arity)
                .map(|_| format!("v{}", rng.gen_range(0..alphabet)))
                .collect();
            TrainingCase::new(features, format!("c{}", rng.gen_range(0..classes)))
        })
        .collect()
}

pub fn random_query(rng: &mut impl Rng, arity: usize, alphabet: usize) -> Vec<String> {
    // one extra symbol so queries can hold values never stored
    (0..arity)
        .map(|_| format!("v{}", rng.gen_range(0..=alphabet)))
        .collect()
}

// ---------- trigram tagger ----------

pub struct ReferenceHmm {
    n_tags: usize,
    lambdas: [f64; 3],
    unigram: Vec<f64>,
    bigram: HashMap<(usize, usize), f64>,
    trigram: HashMap<(usize, usize), HashMap<usize, f64>>,
    emission: HashMap<String, HashMap<usize, f64>>,
    prior: Vec<f64>,
    theta: f64,
    suffix: HashMap<String, HashMap<usize, f64>>,
    max_suffix_len: usize,
}

fn conditional<K: std::hash::Hash + Eq + Copy>(
    rows: impl Iterator<Item = (K, usize, u64)>,
) -> HashMap<K, HashMap<usize, f64>> {
    let mut counts: HashMap<K, HashMap<usize, u64>> = HashMap::new();
    for (k, v, n) in rows {
        *counts.entry(k).or_default().entry(v).or_default() += n;
    }
    counts
        .into_iter()
        .map(|(k, m)| {
            let total: u64 = m.values().sum();
            (k, m.into_iter().map(|(v, n)| (v, n as f64 / total as f64)).collect())
        })
        .collect()
}

impl ReferenceHmm {
    /// Rebuilds probabilities from raw counts. Interpolation weights are
    /// taken as given.
    pub fn new(counts: &HmmCounts, lambdas: [f64; 3], max_suffix_len: usize) -> Self {
        let n_tags = counts.tags.len();
        let total: u64 = counts.unigrams.iter().sum();
        let unigram = counts.unigrams.iter().map(|&n| n as f64 / total as f64).collect();
        let bigram = conditional(counts.bigrams.iter().map(|&(b, c, n)| (b as usize, c as usize, n)))
            .into_iter()
            .flat_map(|(b, m)| m.into_iter().map(move |(c, p)| ((b, c), p)))
            .collect();
        let trigram = conditional(
            counts
                .trigrams
                .iter()
                .map(|&(a, b, c, n)| ((a as usize, b as usize), c as usize, n)),
        );
        // P(word | tag)
        let mut per_tag = vec![0u64; n_tags];
        for by_tag in counts.words.values() {
            for &(t, n) in by_tag {
                per_tag[t as usize] += n;
            }
        }
        let emission = counts
            .words
            .iter()
            .map(|(w, by_tag)| {
                let m = by_tag
                    .iter()
                    .map(|&(t, n)| (t as usize, n as f64 / per_tag[t as usize] as f64))
                    .collect();
                (w.clone(), m)
            })
            .collect();
        let tag_total: u64 = counts.unigrams[..n_tags].iter().sum();
        let prior: Vec<f64> = counts.unigrams[..n_tags]
            .iter()
            .map(|&n| n as f64 / tag_total as f64)
            .collect();
        let mean = prior.iter().sum::<f64>() / n_tags as f64;
        let theta = if n_tags > 1 {
            (prior.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / (n_tags - 1) as f64).sqrt()
        } else {
            0.0
        };
        let suffix = conditional(
            counts
                .suffixes
                .iter()
                .flat_map(|(s, v)| v.iter().map(move |&(t, n)| (s.as_str(), t as usize, n))),
        )
        .into_iter()
        .map(|(s, m)| (s.to_string(), m))
        .collect();
        ReferenceHmm {
            n_tags,
            lambdas,
            unigram,
            bigram,
            trigram,
            emission,
            prior,
            theta,
            suffix,
            max_suffix_len,
        }
    }

    pub fn transition(&self, a: usize, b: usize, c: usize) -> f64 {
        let bi = self.bigram.get(&(b, c)).copied().unwrap_or(0.0);
        let tri = match self.trigram.get(&(a, b)) {
            Some(m) => m.get(&c).copied().unwrap_or(0.0),
            None => bi,
        };
        self.lambdas[0] * self.unigram[c] + self.lambdas[1] * bi + self.lambdas[2] * tri
    }

    pub fn emission(&self, word: &str, tag: usize) -> f64 {
        if let Some(m) = self.emission.get(word) {
            return m.get(&tag).copied().unwrap_or(0.0);
        }
        let chars: Vec<char> = word.chars().collect();
        let mut p = self.prior.clone();
        for len in 1..=self.max_suffix_len.min(chars.len()) {
            let s: String = chars[chars.len() - len..].iter().collect();
            let Some(m) = self.suffix.get(&s) else { break };
            for (t, pt) in p.iter_mut().enumerate() {
                *pt = (m.get(&t).copied().unwrap_or(0.0) + self.theta * *pt) / (1.0 + self.theta);
            }
        }
        p[tag] / self.prior[tag]
    }

    /// Log score of a complete tag path, boundary transitions included.
    pub fn path_score(&self, words: &[&str], tags: &[usize]) -> f64 {
        let boundary = self.n_tags;
        let (mut a, mut b) = (boundary, boundary);
        let mut score = 0.0;
        for (w, &t) in words.iter().zip(tags) {
            score += self.transition(a, b, t).ln() + self.emission(w, t).ln();
            (a, b) = (b, t);
        }
        score + self.transition(a, b, boundary).ln()
    }

    /// Highest-scoring tag sequence and its score, by enumeration.
    pub fn best_path(&self, words: &[&str]) -> (Vec<usize>, f64) {
        let mut tags = vec![0usize; words.len()];
        let mut best = (tags.clone(), f64::NEG_INFINITY);
        loop {
            let score = self.path_score(words, &tags);
            if score > best.1 {
                best = (tags.clone(), score);
            }
            let mut i = 0;
            loop {
                if i == tags.len() {
                    return best;
                }
                tags[i] += 1;
                if tags[i] < self.n_tags {
                    break;
                }
                tags[i] = 0;
                i += 1;
            }
        }
    }

    pub fn best_score(&self, words: &[&str]) -> f64 {
        self.best_path(words).1
    }
}

/// Random counts with every transition observed, a few known words and
/// suffix statistics for the unknown ones.
pub fn random_hmm(rng: &mut impl Rng, n_tags: usize) -> (HmmModel, Vec<String>) {
    let width = n_tags + 1;
    let mut counts = HmmCounts {
        tags: (0..n_tags).map(|t| format!("t{t}")).collect(),
        unigrams: (0..width).map(|_| rng.gen_range(1..50)).collect(),
        ..HmmCounts::default()
    };
    for b in 0..width as u32 {
        for c in 0..width as u32 {
            counts.bigrams.push((b, c, rng.gen_range(1..20)));
            for a in 0..width as u32 {
                counts.trigrams.push((a, b, c, rng.gen_range(1..10)));
            }
        }
    }
    let mut vocab = Vec::new();
    for w in 0..4 {
        let word = format!("k{w}");
        let mut by_tag: Vec<(u32, u64)> = Vec::new();
        for t in 0..n_tags as u32 {
            if rng.gen_bool(0.6) {
                by_tag.push((t, rng.gen_range(1..8)));
            }
        }
        if by_tag.is_empty() {
            by_tag.push((rng.gen_range(0..n_tags as u32), 1));
        }
        counts.words.insert(word.clone(), by_tag);
        vocab.push(word);
    }
    for suffix in ["a", "ba", "b"] {
        let by_tag = (0..n_tags as u32).map(|t| (t, rng.gen_range(1..6))).collect();
        counts.suffixes.insert(suffix.to_string(), by_tag);
    }
    vocab.extend(["xba".to_string(), "yb".to_string(), "zz".to_string()]);
    let config = combitag::taggers::hmm::HmmConfig {
        beam: None,
        ..Default::default()
    };
    (HmmModel::from_counts(counts, config), vocab)
}

// ---------- cross-validation bookkeeping ----------

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use combitag::corpus::{Corpus, Sentence};
use combitag::taggers::{Tagger, Trainer};

/// Corpus whose first form in sentence `i` is `s{i}`.
pub fn numbered_corpus(sentences: usize, rng: &mut impl Rng) -> Corpus {
    Corpus::new(
        "t",
        (0..sentences)
            .map(|i| {
                let mut pairs = vec![(format!("s{i}"), "X".to_string())];
                for _ in 0..rng.gen_range(0..4) {
                    pairs.push((format!("w{}", rng.gen_range(0..10)), "Y".to_string()));
                }
                Sentence::from_pairs(&pairs).unwrap()
            })
            .collect(),
    )
}

fn sentence_id(words: &[&str]) -> usize {
    words[0][1..].parse().expect("numbered sentence")
}

struct Marker(String);

impl Tagger for Marker {
    fn tag_sentence(&self, words: &[&str]) -> Vec<String> {
        vec![self.0.clone(); words.len()]
    }
}

/// Trainer that records which sentences each model saw and tags every
/// token with the model's id.
#[derive(Clone, Default)]
pub struct Recorder {
    pub seen: Arc<Mutex<Vec<BTreeSet<usize>>>>,
}

impl Trainer for Recorder {
    fn train(&self, corpus: &Corpus) -> combitag::Result<Box<dyn Tagger>> {
        let ids: BTreeSet<usize> = corpus
            .sentences()
            .iter()
            .map(|s| sentence_id(&s.forms().collect::<Vec<_>>()))
            .collect();
        let mut seen = self.seen.lock().unwrap();
        seen.push(ids);
        Ok(Box::new(Marker(format!("m{}", seen.len() - 1))))
    }
}

/// Checks that no training token was annotated by a model that saw its
/// sentence, and that each sentence was held out exactly once.
pub fn check_no_leakage(corpus: &Corpus, column: &[String], seen: &[BTreeSet<usize>], folds: usize) -> Result<(), String> {
    if seen.len() != folds {
        return Err(format!("{} models trained, expected {folds}", seen.len()));
    }
    let mut offset = 0;
    for (i, s) in corpus.sentences().iter().enumerate() {
        let model: usize = column[offset][1..].parse().map_err(|_| "bad marker".to_string())?;
        if seen[model].contains(&i) {
            return Err(format!("sentence {i} tagged by model {model} that trained on it"));
        }
        if column[offset..offset + s.len()].iter().any(|v| *v != column[offset]) {
            return Err(format!("sentence {i} tagged by more than one model"));
        }
        let held_out = seen.iter().filter(|set| !set.contains(&i)).count();
        if held_out != 1 {
            return Err(format!("sentence {i} held out of {held_out} models"));
        }
        offset += s.len();
    }
    Ok(())
}
