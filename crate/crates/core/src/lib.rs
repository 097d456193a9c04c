//! Stacked combination of part-of-speech taggers for bootstrapping a
//! tagger in a new tagset from a small annotated sample.
//!
//! Component taggers, lexicon lookups and precomputed annotations are
//! turned into symbolic feature cases. Training cases come from n-fold
//! cross-validation over the training corpus so that no component has
//! seen the sentence it annotates. An IB1 memory-based learner then maps
//! those cases to the target tagset.

pub mod column;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod mbl;
pub mod stacking;
pub mod synth;
pub mod taggers;

pub use column::{load_external_column, write_column, AnnotationColumn};
pub use corpus::{
    make_folds, parse_vertical, split_indices, split_train_test, vocabulary, write_vertical, Corpus, FoldPlan,
    Sentence, TaggedToken,
};
pub use error::{Error, Result};
pub use eval::{accuracy, error_reduction, render_table, EvalReport, Layout};
pub use lexicon::{parse_lexicon, write_lexicon, Lexicon};
pub use mbl::{ClassifierConfig, InstanceBase, TrainingCase, Weighting};
pub use stacking::{
    generate_level1_training, generate_test_cases, run_experiment, ExperimentOutcome,
    ExperimentPlan, SourceKind, SourceSpec,
};
pub use taggers::{Tagger, TaggerKind, TrainedModel, Trainer};
