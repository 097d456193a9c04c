//! Tagged corpora, the vertical file format, and train/test/fold planning.
//!
//! A vertical file holds one `form<TAB>tag` pair per line with a single
//! blank line after every sentence. Splits and folds always cut between
//! sentences.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TAGSET: &str = "default";

/// Checks the character restrictions shared by forms, tags and feature values.
pub fn validate_symbol(value: &str) -> std::result::Result<(), &'static str> {
    if value.is_empty() {
        return Err("empty field");
    }
    if value.contains(['\t', '\n', '\r']) {
        return Err("field contains a tab or line break");
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TaggedToken {
    form: String,
    tag: String,
}

impl TaggedToken {
    pub fn new(form: impl Into<String>, tag: impl Into<String>) -> Result<Self> {
        let form = form.into();
        let tag = tag.into();
        for field in [&form, &tag] {
            validate_symbol(field).map_err(|m| Error::Data {
                index: 0,
                message: format!("{m}: {field:?}"),
            })?;
        }
        Ok(TaggedToken { form, tag })
    }

    pub fn form(&self) -> &str {
        &self.form
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }
}

/// A non-empty sequence of tagged tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sentence(Vec<TaggedToken>);

impl Sentence {
    pub fn new(tokens: Vec<TaggedToken>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::Data {
                index: 0,
                message: "sentence has no tokens".into(),
            });
        }
        Ok(Sentence(tokens))
    }

    /// Builds a sentence from `(form, tag)` pairs.
    pub fn from_pairs<F: AsRef<str>, T: AsRef<str>>(pairs: &[(F, T)]) -> Result<Self> {
        let tokens = pairs
            .iter()
            .map(|(f, t)| TaggedToken::new(f.as_ref(), t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Sentence::new(tokens)
    }

    pub fn tokens(&self) -> &[TaggedToken] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn forms(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.iter().map(TaggedToken::form)
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.iter().map(TaggedToken::tag)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    tagset: String,
    sentences: Vec<Sentence>,
}

impl Corpus {
    pub fn new(tagset: impl Into<String>, sentences: Vec<Sentence>) -> Self {
        Corpus {
            tagset: tagset.into(),
            sentences,
        }
    }

    pub fn empty() -> Self {
        Corpus::new(DEFAULT_TAGSET, Vec::new())
    }

    pub fn with_tagset(mut self, tagset: impl Into<String>) -> Self {
        self.tagset = tagset.into();
        self
    }

    pub fn tagset(&self) -> &str {
        &self.tagset
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &TaggedToken> + '_ {
        self.sentences.iter().flat_map(|s| s.tokens().iter())
    }

    /// New corpus holding the sentences at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Corpus {
        Corpus {
            tagset: self.tagset.clone(),
            sentences: indices.iter().map(|&i| self.sentences[i].clone()).collect(),
        }
    }
}

/// Parses the vertical format.
pub fn parse_vertical(text: &str) -> Result<Corpus> {
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    let mut blank_run = 0usize;

    for (idx, line) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        if line.is_empty() {
            if !current.is_empty() {
                sentences.push(Sentence(std::mem::take(&mut current)));
                blank_run = 1;
            } else {
                blank_run += 1;
            }
            continue;
        }
        if blank_run > 1 && !sentences.is_empty() {
            return Err(Error::Parse {
                line: line_no - 1,
                message: "more than one blank line between sentences".into(),
            });
        }
        if sentences.is_empty() && current.is_empty() && blank_run > 0 {
            return Err(Error::Parse {
                line: 1,
                message: "leading blank line".into(),
            });
        }
        blank_run = 0;
        current.push(parse_pair(line, line_no)?);
    }
    if !current.is_empty() {
        sentences.push(Sentence(current));
    }
    if sentences.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(Corpus::new(DEFAULT_TAGSET, sentences))
}

pub(crate) fn parse_pair(line: &str, line_no: usize) -> Result<TaggedToken> {
    let mut fields = line.split('\t');
    let (Some(form), Some(tag), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected 2 tab-separated fields in {line:?}"),
        });
    };
    for field in [form, tag] {
        validate_symbol(field).map_err(|m| Error::Parse {
            line: line_no,
            message: m.to_string(),
        })?;
    }
    Ok(TaggedToken {
        form: form.to_string(),
        tag: tag.to_string(),
    })
}

pub fn write_vertical(corpus: &Corpus) -> String {
    let mut out = String::new();
    for sentence in corpus.sentences() {
        for token in sentence.tokens() {
            out.push_str(token.form());
            out.push('\t');
            out.push_str(token.tag());
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

/// Splits sentences into a train part and a test part.
///
/// Sentences are visited in corpus order, or in a permutation drawn from
/// `shuffle_seed`. The train part takes the longest prefix of that order
/// whose token count stays within `train_fraction` of all tokens. Both
/// parts keep the original relative sentence order.
pub fn split_train_test(
    corpus: &Corpus,
    train_fraction: f64,
    shuffle_seed: Option<u64>,
) -> Result<(Corpus, Corpus)> {
    let (train_idx, test_idx) = split_indices(corpus, train_fraction, shuffle_seed)?;
    Ok((corpus.select(&train_idx), corpus.select(&test_idx)))
}

/// Sentence indices of the two sides of [`split_train_test`], each ascending.
pub fn split_indices(
    corpus: &Corpus,
    train_fraction: f64,
    shuffle_seed: Option<u64>,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Config(format!(
            "train fraction {train_fraction} outside (0, 1)"
        )));
    }
    if corpus.sentence_count() < 2 {
        return Err(Error::Split("need at least 2 sentences".into()));
    }

    let mut order: Vec<usize> = (0..corpus.sentence_count()).collect();
    if let Some(seed) = shuffle_seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }

    let budget = train_fraction * corpus.token_count() as f64;
    let mut used = 0usize;
    let mut cut = 0usize;
    for &i in &order {
        let next = used + corpus.sentences[i].len();
        // slack absorbs representation error in fraction * total
        if next as f64 > budget + 1e-9 {
            break;
        }
        used = next;
        cut += 1;
    }
    if cut == 0 || cut == order.len() {
        return Err(Error::Split(format!(
            "fraction {train_fraction} leaves one side without sentences"
        )));
    }

    let mut train_idx = order[..cut].to_vec();
    let mut test_idx = order[cut..].to_vec();
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((train_idx, test_idx))
}

/// Assignment of sentences to cross-validation folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    n: usize,
    assignment: Vec<usize>,
}

impl FoldPlan {
    pub fn fold_count(&self) -> usize {
        self.n
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn fold_of(&self, sentence: usize) -> usize {
        self.assignment[sentence]
    }

    pub fn sentence_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }

    /// Sentence indices inside fold `fold` and outside it, both ascending.
    pub fn partition(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.assignment.len()).partition(|&s| self.assignment[s] == fold)
    }
}

/// Contiguous balanced folds: the first `len % n` folds get one extra sentence.
pub fn make_folds(corpus: &Corpus, n: usize) -> Result<FoldPlan> {
    if n < 2 {
        return Err(Error::Config(format!("fold count {n} must be at least 2")));
    }
    let sentences = corpus.sentence_count();
    if sentences < n {
        return Err(Error::Fold(format!(
            "{sentences} sentences cannot fill {n} folds"
        )));
    }
    let base = sentences / n;
    let extra = sentences % n;
    let mut assignment = Vec::with_capacity(sentences);
    for fold in 0..n {
        let size = base + usize::from(fold < extra);
        assignment.extend(std::iter::repeat_n(fold, size));
    }
    Ok(FoldPlan { n, assignment })
}

/// Distinct surface forms, compared byte for byte.
pub fn vocabulary(corpus: &Corpus) -> HashSet<String> {
    corpus.tokens().map(|t| t.form().to_string()).collect()
}
