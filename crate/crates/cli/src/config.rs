//! Experiment configuration files.
//!
//! ```text
//! # comments and blank lines are ignored
//! train = data/train.tsv
//! test = data/test.tsv
//! folds = 9
//! k = 1
//! weighting = none
//! seed = 7
//! source = hmm:tagger:hmm
//! source = aux:external:aux.train.col,aux.test.col
//! source = lex:lexicon:lexicon.tsv
//! source = word:word
//! ```
//!
//! Relative paths resolve against the directory holding the config file.
//! Without `test`, the train file is split 90/10 by tokens, shuffled when a
//! seed is given; an external source may then name a single column file
//! aligned with the unsplit corpus.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use combitag::corpus::split_indices;
use combitag::stacking::{ExperimentPlan, SourceKind, SourceSpec};
use combitag::{
    parse_lexicon, AnnotationColumn, ClassifierConfig, Corpus, TaggerKind, Weighting,
};

use crate::error::CliError;
use crate::io::{load_column, read_corpus, read_text};

pub const DEFAULT_FOLDS: usize = 9;
pub const DEFAULT_TRAIN_FRACTION: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub enum SourceDecl {
    Tagger(TaggerKind),
    Lexicon(PathBuf),
    External { train: PathBuf, test: Option<PathBuf> },
    Word,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedSource {
    pub name: String,
    pub decl: SourceDecl,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub train: PathBuf,
    pub test: Option<PathBuf>,
    pub folds: usize,
    pub classifier: ClassifierConfig,
    pub seed: Option<u64>,
    pub sources: Vec<NamedSource>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

/// Parses `name:kind[:payload]`.
pub fn parse_source(spec: &str) -> Result<NamedSource, String> {
    let mut parts = spec.splitn(3, ':');
    let name = parts.next().unwrap_or_default().trim();
    let kind = parts.next().map(str::trim).unwrap_or_default();
    let payload = parts.next().map(str::trim).filter(|p| !p.is_empty());
    if !valid_name(name) {
        return Err(format!(
            "source name {name:?} must be non-empty letters, digits, '_', '-' or '.'"
        ));
    }
    let need = |what: &str| payload.ok_or_else(|| format!("source {name:?}: {kind} needs {what}"));
    let decl = match kind {
        "tagger" => SourceDecl::Tagger(need("hmm, mbt or unigram")?.parse().map_err(|e| format!("{e}"))?),
        "lexicon" => SourceDecl::Lexicon(need("a lexicon path")?.into()),
        "external" => {
            let paths = need("column paths")?;
            match paths.split_once(',') {
                Some((train, test)) => SourceDecl::External {
                    train: train.trim().into(),
                    test: Some(test.trim().into()),
                },
                None => SourceDecl::External {
                    train: paths.into(),
                    test: None,
                },
            }
        }
        "word" => {
            if payload.is_some() {
                return Err(format!("source {name:?}: word takes no payload"));
            }
            SourceDecl::Word
        }
        other => {
            return Err(format!(
                "source {name:?}: unknown kind {other:?} (expected tagger, lexicon, external or word)"
            ))
        }
    };
    Ok(NamedSource {
        name: name.to_string(),
        decl,
    })
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let mut train = None;
    let mut test = None;
    let mut folds = None;
    let mut k = None;
    let mut weighting = None;
    let mut seed = None;
    let mut sources: Vec<NamedSource> = Vec::new();

    fn set<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<(), CliError> {
        if slot.is_some() {
            return Err(CliError::config(line, format!("duplicate key {key:?}")));
        }
        *slot = Some(value);
        Ok(())
    }
    fn number<T: std::str::FromStr>(value: &str, key: &str, line: usize) -> Result<T, CliError> {
        value
            .parse()
            .map_err(|_| CliError::config(line, format!("{key} must be a non-negative integer, got {value:?}")))
    }

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(CliError::config(line, "expected `key = value`"));
        };
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(CliError::config(line, format!("{key} has no value")));
        }
        match key {
            "train" => set(&mut train, PathBuf::from(value), key, line)?,
            "test" => set(&mut test, PathBuf::from(value), key, line)?,
            "folds" => set(&mut folds, number(value, key, line)?, key, line)?,
            "k" => set(&mut k, number(value, key, line)?, key, line)?,
            "seed" => set(&mut seed, number(value, key, line)?, key, line)?,
            "weighting" => {
                let w: Weighting = value
                    .parse()
                    .map_err(|e: combitag::Error| CliError::config(line, e.to_string()))?;
                set(&mut weighting, w, key, line)?
            }
            "source" => {
                let source = parse_source(value).map_err(|m| CliError::config(line, m))?;
                if sources.iter().any(|s| s.name == source.name) {
                    return Err(CliError::config(
                        line,
                        format!("duplicate source name {:?}", source.name),
                    ));
                }
                sources.push(source);
            }
            other => return Err(CliError::config(line, format!("unknown key {other:?}"))),
        }
    }

    let last_line = text.lines().count().max(1);
    let train = train.ok_or_else(|| CliError::config(last_line, "missing required key \"train\""))?;
    if sources.is_empty() {
        return Err(CliError::config(last_line, "at least one `source` is required"));
    }
    let classifier = ClassifierConfig {
        k: k.unwrap_or(1),
        weighting: weighting.unwrap_or_default(),
    };
    Ok(ExperimentConfig {
        train,
        test,
        folds: folds.unwrap_or(DEFAULT_FOLDS),
        classifier,
        seed,
        sources,
    })
}

impl ExperimentConfig {
    /// Makes relative paths relative to `base`.
    pub fn resolve(mut self, base: &Path) -> Self {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        join(&mut self.train);
        if let Some(t) = &mut self.test {
            join(t);
        }
        for s in &mut self.sources {
            match &mut s.decl {
                SourceDecl::Lexicon(p) => join(p),
                SourceDecl::External { train, test } => {
                    join(train);
                    if let Some(t) = test {
                        join(t);
                    }
                }
                SourceDecl::Tagger(_) | SourceDecl::Word => {}
            }
        }
        self
    }

    /// Reads every referenced file and builds the experiment.
    pub fn load(&self) -> Result<ExperimentPlan, CliError> {
        let full = read_corpus(&self.train)?;
        let (train, test, split) = match &self.test {
            Some(path) => (full, read_corpus(path)?, None),
            None => {
                let (a, b) = split_indices(&full, DEFAULT_TRAIN_FRACTION, self.seed)?;
                let parts = (full.select(&a), full.select(&b));
                (parts.0, parts.1, Some((full, a, b)))
            }
        };

        let whole = split.as_ref().map(|(full, a, b)| (full, a.as_slice(), b.as_slice()));
        let specs = build_sources(&self.sources, &train, Some(&test), whole)?;
        let mut plan = ExperimentPlan::new(train, test, specs);
        plan.folds = self.folds;
        plan.classifier = self.classifier;
        plan.seed = self.seed.unwrap_or(0);
        Ok(plan)
    }
}

/// Materializes declared sources against loaded corpora.
///
/// Without a test corpus, external sources only load their train column.
/// `whole` carries the unsplit corpus and the sentence indices of both sides
/// when train and test were cut from one file; single-file external
/// columns need it.
pub fn build_sources(
    sources: &[NamedSource],
    train: &Corpus,
    test: Option<&Corpus>,
    whole: Option<(&Corpus, &[usize], &[usize])>,
) -> Result<Vec<SourceSpec>, CliError> {
    let mut specs = Vec::with_capacity(sources.len());
    for source in sources {
        let name = &source.name;
        let kind = match &source.decl {
            SourceDecl::Word => SourceKind::Word,
            SourceDecl::Tagger(kind) => SourceKind::Tagger(Arc::new(*kind)),
            SourceDecl::Lexicon(path) => {
                let lexicon = parse_lexicon(&read_text(path)?).map_err(|source| CliError::Input {
                    path: path.clone(),
                    source,
                })?;
                SourceKind::Lexicon(Arc::new(lexicon.with_name(name.clone())))
            }
            SourceDecl::External { train: path, test: test_path } => match (whole, test_path) {
                (Some((full, a, b)), None) => {
                    let column = load_column(full, path, name)?;
                    SourceKind::External {
                        train: column.select_sentences(full, a)?,
                        test: column.select_sentences(full, b)?,
                    }
                }
                (_, test_path) => {
                    let test_column = match (test, test_path) {
                        (Some(corpus), Some(p)) => load_column(corpus, p, name)?,
                        (None, _) => AnnotationColumn::new(name.clone(), Vec::new()),
                        (Some(_), None) => {
                            return Err(CliError::Usage(format!(
                                "source {name:?} needs `train_column,test_column` when a test corpus is given"
                            )))
                        }
                    };
                    SourceKind::External {
                        train: load_column(train, path, name)?,
                        test: test_column,
                    }
                }
            },
        };
        specs.push(SourceSpec::new(name.clone(), kind));
    }
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sources_keep_file_order() {
        let cfg = parse_config(
            "train = a.tsv\nsource = hmm:tagger:hmm\nsource = aux:external:x.col,y.col\nsource = w:word\n",
        )
        .unwrap();
        let names: Vec<&str> = cfg.sources.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["hmm", "aux", "w"]);
        assert_eq!(
            cfg.sources[1].decl,
            SourceDecl::External {
                train: "x.col".into(),
                test: Some("y.col".into())
            }
        );
    }

    #[test]
    fn defaults() {
        let cfg = parse_config("train = a.tsv\nsource = w:word\n").unwrap();
        assert_eq!(cfg.folds, 9);
        assert_eq!(cfg.classifier, ClassifierConfig { k: 1, weighting: Weighting::None });
        assert_eq!(cfg.test, None);
        assert_eq!(cfg.seed, None);
    }

    #[test]
    fn missing_train() {
        let err = parse_config("source = w:word\n").unwrap_err();
        assert!(matches!(err, CliError::Config { .. }));
        assert!(err.to_string().contains("train"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("train = a\n# note\ncolour = red\n", 3),
            ("train = a\ntrain = b\n", 2),
            ("train = a\n\nfolds = nine\n", 3),
            ("train = a\nsource = w:word\nsource = w:tagger:hmm\n", 3),
            ("train = a\nsource = x:tagger:crf\n", 2),
            ("train = a\nweighting = idf\n", 2),
            ("train = a\njust text\n", 2),
        ];
        for (text, expected) in cases {
            match parse_config(text) {
                Err(CliError::Config { line, .. }) => assert_eq!(line, expected, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn relative_paths_follow_the_config() {
        let cfg = parse_config("train = a.tsv\nsource = l:lexicon:lex.tsv\nsource = e:external:/abs.col\n")
            .unwrap()
            .resolve(Path::new("/data/exp"));
        assert_eq!(cfg.train, PathBuf::from("/data/exp/a.tsv"));
        assert_eq!(cfg.sources[0].decl, SourceDecl::Lexicon("/data/exp/lex.tsv".into()));
        assert_eq!(
            cfg.sources[1].decl,
            SourceDecl::External { train: "/abs.col".into(), test: None }
        );
    }
}
