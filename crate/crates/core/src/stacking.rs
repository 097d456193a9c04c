//! Level-1 case generation and the end-to-end combination experiment.
//!
//! Training cases for the combiner come from cross-validation: for fold
//! `i`, every internal tagger is trained on the other folds and tags fold
//! `i`. Lexicon, word and precomputed sources are not trained on the
//! target data and are applied to the whole corpus directly. Test cases
//! use internal taggers retrained on the full training corpus.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::column::AnnotationColumn;
use crate::corpus::{make_folds, vocabulary, Corpus, FoldPlan};
use crate::error::{Error, Result};
use crate::eval::{accuracy, EvalReport};
use crate::lexicon::Lexicon;
use crate::mbl::{self, ClassifierConfig, TrainingCase};
use crate::taggers::Trainer;

/// One level-1 case: one feature per source, gold tag as target.
pub type StackedCase = TrainingCase;

#[derive(Clone)]
pub enum SourceKind {
    /// The surface form itself.
    Word,
    Lexicon(Arc<Lexicon>),
    /// Precomputed annotations aligned with the train and test corpora.
    External {
        train: AnnotationColumn,
        test: AnnotationColumn,
    },
    /// A tagger trained on the target corpus.
    Tagger(Arc<dyn Trainer>),
}

impl fmt::Debug for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceKind::Word => f.write_str("Word"),
            SourceKind::Lexicon(l) => f.debug_tuple("Lexicon").field(&l.name()).finish(),
            SourceKind::External { train, test } => f
                .debug_struct("External")
                .field("train", &train.len())
                .field("test", &test.len())
                .finish(),
            SourceKind::Tagger(_) => f.write_str("Tagger"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SourceSpec {
    pub name: String,
    pub kind: SourceKind,
}

impl SourceSpec {
    pub fn new(name: impl Into<String>, kind: SourceKind) -> Self {
        SourceSpec {
            name: name.into(),
            kind,
        }
    }

    pub fn word(name: impl Into<String>) -> Self {
        SourceSpec::new(name, SourceKind::Word)
    }

    pub fn tagger(name: impl Into<String>, trainer: impl Trainer + 'static) -> Self {
        SourceSpec::new(name, SourceKind::Tagger(Arc::new(trainer)))
    }

    pub fn lexicon(name: impl Into<String>, lexicon: Lexicon) -> Self {
        SourceSpec::new(name, SourceKind::Lexicon(Arc::new(lexicon)))
    }

    pub fn external(
        name: impl Into<String>,
        train: AnnotationColumn,
        test: AnnotationColumn,
    ) -> Self {
        SourceSpec::new(name, SourceKind::External { train, test })
    }

    pub fn is_internal(&self) -> bool {
        matches!(self.kind, SourceKind::Tagger(_))
    }
}

fn check_sources(sources: &[SourceSpec]) -> Result<()> {
    if sources.is_empty() {
        return Err(Error::Config("at least one source is required".into()));
    }
    let mut seen = HashSet::new();
    for s in sources {
        if !seen.insert(s.name.as_str()) {
            return Err(Error::Config(format!("duplicate source name {:?}", s.name)));
        }
    }
    Ok(())
}

fn word_column(name: &str, corpus: &Corpus) -> AnnotationColumn {
    AnnotationColumn::new(name, corpus.tokens().map(|t| t.form().to_string()).collect())
}

/// Cross-validated predictions of `trainer` over `train`, in corpus order.
fn cross_validate(
    name: &str,
    trainer: &dyn Trainer,
    train: &Corpus,
    folds: &FoldPlan,
) -> Result<AnnotationColumn> {
    let per_fold: Vec<(Vec<usize>, Vec<Vec<String>>)> = (0..folds.fold_count())
        .into_par_iter()
        .map(|fold| {
            let (held_out, rest) = folds.partition(fold);
            let model = trainer.train(&train.select(&rest))?;
            let tagged = held_out
                .iter()
                .map(|&s| {
                    let words: Vec<&str> = train.sentences()[s].forms().collect();
                    model.tag_sentence(&words)
                })
                .collect();
            Ok((held_out, tagged))
        })
        .collect::<Result<_>>()?;

    let mut by_sentence: Vec<Option<Vec<String>>> = vec![None; train.sentence_count()];
    for (held_out, tagged) in per_fold {
        for (s, tags) in held_out.into_iter().zip(tagged) {
            by_sentence[s] = Some(tags);
        }
    }
    let values = by_sentence
        .into_iter()
        .flat_map(|tags| tags.expect("every sentence is in exactly one fold"))
        .collect();
    let column = AnnotationColumn::new(name, values);
    column.check_aligned(train)?;
    Ok(column)
}

/// Feature columns for the training corpus, in source order.
pub fn level1_columns(
    train: &Corpus,
    sources: &[SourceSpec],
    folds: &FoldPlan,
) -> Result<Vec<AnnotationColumn>> {
    check_sources(sources)?;
    if folds.sentence_count() != train.sentence_count() {
        return Err(Error::Fold(format!(
            "fold plan covers {} sentences, corpus has {}",
            folds.sentence_count(),
            train.sentence_count()
        )));
    }
    sources
        .iter()
        .map(|source| match &source.kind {
            SourceKind::Word => Ok(word_column(&source.name, train)),
            SourceKind::Lexicon(lex) => Ok(lex.annotate(train).renamed(&source.name)),
            SourceKind::External { train: column, .. } => {
                column.check_aligned(train)?;
                Ok(column.clone().renamed(&source.name))
            }
            SourceKind::Tagger(trainer) => {
                cross_validate(&source.name, trainer.as_ref(), train, folds)
            }
        })
        .collect()
}

/// Feature columns for the test corpus, in source order.
pub fn test_columns(
    train: &Corpus,
    test: &Corpus,
    sources: &[SourceSpec],
) -> Result<Vec<AnnotationColumn>> {
    check_sources(sources)?;
    sources
        .par_iter()
        .map(|source| match &source.kind {
            SourceKind::Word => Ok(word_column(&source.name, test)),
            SourceKind::Lexicon(lex) => Ok(lex.annotate(test).renamed(&source.name)),
            SourceKind::External { test: column, .. } => {
                column.check_aligned(test)?;
                Ok(column.clone().renamed(&source.name))
            }
            SourceKind::Tagger(trainer) => {
                if test.is_empty() {
                    return Ok(AnnotationColumn::new(source.name.clone(), Vec::new()));
                }
                let model = trainer.train(train)?;
                Ok(model.tag(test).renamed(&source.name))
            }
        })
        .collect()
}

/// Zips feature columns with the corpus's gold tags.
pub fn assemble_cases(corpus: &Corpus, columns: &[AnnotationColumn]) -> Result<Vec<StackedCase>> {
    for c in columns {
        c.check_aligned(corpus)?;
    }
    Ok(corpus
        .tokens()
        .enumerate()
        .map(|(i, token)| TrainingCase {
            features: columns.iter().map(|c| c.values()[i].clone()).collect(),
            target: token.tag().to_string(),
        })
        .collect())
}

/// Leak-free level-1 training cases, one per training token.
pub fn generate_level1_training(
    train: &Corpus,
    sources: &[SourceSpec],
    folds: &FoldPlan,
) -> Result<Vec<StackedCase>> {
    assemble_cases(train, &level1_columns(train, sources, folds)?)
}

/// Test cases, one per test token; targets are kept for scoring only.
pub fn generate_test_cases(
    train: &Corpus,
    test: &Corpus,
    sources: &[SourceSpec],
) -> Result<Vec<StackedCase>> {
    assemble_cases(test, &test_columns(train, test, sources)?)
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub train: Corpus,
    pub test: Corpus,
    pub sources: Vec<SourceSpec>,
    pub folds: usize,
    pub classifier: ClassifierConfig,
    pub seed: u64,
}

impl ExperimentPlan {
    pub fn new(train: Corpus, test: Corpus, sources: Vec<SourceSpec>) -> Self {
        ExperimentPlan {
            train,
            test,
            sources,
            folds: 9,
            classifier: ClassifierConfig::default(),
            seed: 0,
        }
    }

    pub fn source_names(&self) -> Vec<&str> {
        self.sources.iter().map(|s| s.name.as_str()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    /// Combiner output over the test corpus.
    pub predictions: AnnotationColumn,
    pub report: EvalReport,
    /// Internal taggers trained on the full training corpus, scored on test.
    pub baselines: Vec<EvalReport>,
    pub train_cases: Vec<StackedCase>,
    pub test_cases: Vec<StackedCase>,
}

impl ExperimentOutcome {
    /// The baseline with the highest total accuracy; earlier sources win ties.
    pub fn best_baseline(&self) -> Option<&EvalReport> {
        self.baselines.iter().fold(None, |best, r| match best {
            Some(b) if b.total_correct() >= r.total_correct() => Some(b),
            _ => Some(r),
        })
    }
}

/// Runs the whole protocol and scores the combiner on the test corpus.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentOutcome> {
    plan.classifier.validate()?;
    let folds = make_folds(&plan.train, plan.folds)?;
    let train_cases = generate_level1_training(&plan.train, &plan.sources, &folds)?;
    let base = mbl::train(train_cases.clone(), plan.classifier)?;

    let columns = test_columns(&plan.train, &plan.test, &plan.sources)?;
    let test_cases = assemble_cases(&plan.test, &columns)?;
    let queries: Vec<&Vec<String>> = test_cases.iter().map(|c| &c.features).collect();
    let predicted: Vec<String> = queries
        .par_iter()
        .map(|q| mbl::classify(&base, q, &plan.classifier).map(|(class, _)| class))
        .collect::<Result<_>>()?;

    let name = plan.source_names().join("+");
    let predictions = AnnotationColumn::new(name, predicted);
    let vocab = vocabulary(&plan.train);
    let report = accuracy(&predictions, &plan.test, &vocab)?;

    let baselines = plan
        .sources
        .iter()
        .zip(&columns)
        .filter(|(s, _)| s.is_internal())
        .map(|(_, column)| accuracy(column, &plan.test, &vocab))
        .collect::<Result<_>>()?;

    Ok(ExperimentOutcome {
        predictions,
        report,
        baselines,
        train_cases,
        test_cases,
    })
}
