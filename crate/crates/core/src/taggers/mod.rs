//! Component (level-0) taggers.
//!
//! Every trainable tagger implements [`Trainer`], producing a [`Tagger`]
//! that annotates a corpus one sentence at a time.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::column::AnnotationColumn;
use crate::corpus::Corpus;
use crate::error::{Error, Result};

pub mod hmm;
pub mod mbt;
pub mod unigram;

pub use crate::column::load_external_column;
pub use hmm::{train_hmm, HmmConfig, HmmCounts, HmmModel};
pub use mbt::{train_mbt, MbtConfig, MbtModel};
pub use unigram::{train_unigram, UnigramModel};

pub trait Tagger: Send + Sync {
    /// One tag per word.
    fn tag_sentence(&self, words: &[&str]) -> Vec<String>;

    /// Tags every sentence of `corpus`; sentences are processed in parallel.
    fn tag(&self, corpus: &Corpus) -> AnnotationColumn {
        let per_sentence: Vec<Vec<String>> = corpus
            .sentences()
            .par_iter()
            .map(|s| {
                let words: Vec<&str> = s.forms().collect();
                self.tag_sentence(&words)
            })
            .collect();
        AnnotationColumn::new("tagger", per_sentence.into_iter().flatten().collect())
    }
}

/// Something that can be trained into a [`Tagger`].
pub trait Trainer: Send + Sync {
    fn train(&self, corpus: &Corpus) -> Result<Box<dyn Tagger>>;
}

impl<F> Trainer for F
where
    F: Fn(&Corpus) -> Result<Box<dyn Tagger>> + Send + Sync,
{
    fn train(&self, corpus: &Corpus) -> Result<Box<dyn Tagger>> {
        self(corpus)
    }
}

/// The built-in trainable taggers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaggerKind {
    Hmm(HmmConfig),
    Mbt(MbtConfig),
    Unigram,
}

impl TaggerKind {
    pub fn train_model(&self, corpus: &Corpus) -> Result<TrainedModel> {
        Ok(match self {
            TaggerKind::Hmm(c) => TrainedModel::Hmm(train_hmm(corpus, c)?),
            TaggerKind::Mbt(c) => TrainedModel::Mbt(train_mbt(corpus, c)?),
            TaggerKind::Unigram => TrainedModel::Unigram(train_unigram(corpus)?),
        })
    }
}

impl Trainer for TaggerKind {
    fn train(&self, corpus: &Corpus) -> Result<Box<dyn Tagger>> {
        Ok(Box::new(self.train_model(corpus)?))
    }
}

impl FromStr for TaggerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hmm" => Ok(TaggerKind::Hmm(HmmConfig::default())),
            "mbt" => Ok(TaggerKind::Mbt(MbtConfig::default())),
            "unigram" => Ok(TaggerKind::Unigram),
            other => Err(Error::Config(format!(
                "unknown tagger {other:?} (expected hmm, mbt or unigram)"
            ))),
        }
    }
}

impl fmt::Display for TaggerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaggerKind::Hmm(_) => "hmm",
            TaggerKind::Mbt(_) => "mbt",
            TaggerKind::Unigram => "unigram",
        })
    }
}

/// A trained built-in model, serializable for reuse between runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "snake_case")]
pub enum TrainedModel {
    Hmm(HmmModel),
    Mbt(MbtModel),
    Unigram(UnigramModel),
}

impl Tagger for TrainedModel {
    fn tag_sentence(&self, words: &[&str]) -> Vec<String> {
        match self {
            TrainedModel::Hmm(m) => m.tag_sentence(words),
            TrainedModel::Mbt(m) => m.tag_sentence(words),
            TrainedModel::Unigram(m) => m.tag_sentence(words),
        }
    }
}
