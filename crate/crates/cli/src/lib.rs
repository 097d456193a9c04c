//! Command-line front end: each pipeline stage as a subcommand, plus a
//! `pipeline` command that runs a whole experiment from one config file.

pub mod config;
pub mod error;
mod io;
mod pipeline;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use combitag::corpus::split_train_test;
use combitag::mbl;
use combitag::stacking::{generate_level1_training, generate_test_cases};
use combitag::{
    accuracy, make_folds, render_table, vocabulary, write_column, write_vertical, AnnotationColumn,
    ClassifierConfig, InstanceBase, Layout, Tagger, TaggerKind, TrainedModel, Weighting,
};

pub use config::{parse_config, ExperimentConfig};
pub use error::CliError;
use io::{read_cases, read_corpus, read_json, read_text, write_json, write_text};

#[derive(Debug, Parser)]
#[command(name = "combitag", version, about = "Stacked tagger combination for new tagsets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split a corpus into train and test parts by token share.
    Split(SplitArgs),
    /// Train a tagger and save it as JSON.
    TrainTagger(TrainTaggerArgs),
    /// Tag a corpus with a saved tagger.
    Tag(TagArgs),
    /// Annotate a corpus with lexicon categories.
    AnnotateLexicon(AnnotateArgs),
    /// Build cross-validated combiner training cases (and test cases).
    StackTrainCases(StackArgs),
    /// Train the combiner from a case file.
    CombineTrain(CombineTrainArgs),
    /// Classify test cases with a trained combiner.
    CombineApply(CombineApplyArgs),
    /// Score predictions against a gold corpus.
    Eval(EvalArgs),
    /// Run a whole experiment from a config file.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
struct SplitArgs {
    /// Corpus to split.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = config::DEFAULT_TRAIN_FRACTION)]
    fraction: f64,
    /// Shuffle sentences with this seed; contiguous split when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Receives train.tsv and test.tsv.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct TrainTaggerArgs {
    #[arg(long)]
    kind: TaggerKind,
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TagArgs {
    #[arg(long)]
    model: PathBuf,
    /// Corpus to tag; its tag column is ignored.
    #[arg(long)]
    test: PathBuf,
    /// Column file to write; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnnotateArgs {
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StackArgs {
    #[arg(long)]
    train: PathBuf,
    /// Also write test cases for this corpus.
    #[arg(long)]
    test: Option<PathBuf>,
    /// `name:kind[:payload]`, in feature order.
    #[arg(long = "source", required = true)]
    sources: Vec<String>,
    #[arg(long, default_value_t = config::DEFAULT_FOLDS)]
    folds: usize,
    /// Receives train.cases and, with --test, test.cases.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct CombineTrainArgs {
    #[arg(long)]
    cases: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = Weighting::None)]
    weighting: Weighting,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CombineApplyArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    cases: PathBuf,
    /// Corpus the cases were built from; supplies forms for the output column.
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    /// Corpus whose forms count as known words.
    #[arg(long)]
    train_vocab_from: PathBuf,
    /// Print `metric<TAB>value` lines instead of a table.
    #[arg(long)]
    tsv: bool,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    #[arg(long)]
    config: PathBuf,
    /// Run directory; defaults to `<config name>.run` in the working directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    weighting: Option<Weighting>,
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => write_text(path, text),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Split(a) => {
            let corpus = read_corpus(&a.corpus)?;
            let (train, test) = split_train_test(&corpus, a.fraction, a.seed)?;
            write_text(&a.out_dir.join("train.tsv"), &write_vertical(&train))?;
            write_text(&a.out_dir.join("test.tsv"), &write_vertical(&test))?;
            writeln!(
                stdout,
                "train: {} sentences, {} tokens\ntest: {} sentences, {} tokens",
                train.sentence_count(),
                train.token_count(),
                test.sentence_count(),
                test.token_count()
            )
            .ok();
            Ok(())
        }
        Command::TrainTagger(a) => {
            let corpus = read_corpus(&a.train)?;
            let model = a.kind.train_model(&corpus)?;
            write_json(&a.out, &model)
        }
        Command::Tag(a) => {
            let model: TrainedModel = read_json(&a.model)?;
            let corpus = read_corpus(&a.test)?;
            let column = model.tag(&corpus);
            emit(a.out.as_deref(), &write_column(&corpus, &column)?, stdout)
        }
        Command::AnnotateLexicon(a) => {
            let lexicon = combitag::parse_lexicon(&read_text(&a.lexicon)?)?;
            let corpus = read_corpus(&a.test)?;
            let column = lexicon.annotate(&corpus);
            emit(a.out.as_deref(), &write_column(&corpus, &column)?, stdout)
        }
        Command::StackTrainCases(a) => {
            let declared = a
                .sources
                .iter()
                .map(|s| config::parse_source(s).map_err(CliError::Usage))
                .collect::<Result<Vec<_>, _>>()?;
            let train = read_corpus(&a.train)?;
            let test = a.test.as_deref().map(read_corpus).transpose()?;
            let sources = config::build_sources(&declared, &train, test.as_ref(), None)?;
            let folds = make_folds(&train, a.folds)?;
            let cases = generate_level1_training(&train, &sources, &folds)?;
            write_text(&a.out_dir.join("train.cases"), &mbl::write_cases(&cases))?;
            if let Some(test) = &test {
                let cases = generate_test_cases(&train, test, &sources)?;
                write_text(&a.out_dir.join("test.cases"), &mbl::write_cases(&cases))?;
            }
            Ok(())
        }
        Command::CombineTrain(a) => {
            let cases = read_cases(&a.cases)?;
            let base = mbl::train(
                cases,
                ClassifierConfig {
                    k: a.k,
                    weighting: a.weighting,
                },
            )?;
            write_json(&a.out, &base)
        }
        Command::CombineApply(a) => {
            let base: InstanceBase = read_json(&a.model)?;
            let cases = read_cases(&a.cases)?;
            let corpus = read_corpus(&a.test)?;
            let queries: Vec<Vec<String>> = cases.into_iter().map(|c| c.features).collect();
            let column = AnnotationColumn::new("combined", base.classify_all(&queries)?);
            emit(a.out.as_deref(), &write_column(&corpus, &column)?, stdout)
        }
        Command::Eval(a) => {
            let gold = read_corpus(&a.gold)?;
            let vocab = vocabulary(&read_corpus(&a.train_vocab_from)?);
            let name = a.pred.file_stem().unwrap_or_default().to_string_lossy();
            let pred = io::load_column(&gold, &a.pred, &name)?;
            let report = accuracy(&pred, &gold, &vocab)?;
            let text = if a.tsv {
                report.to_tsv()
            } else {
                render_table(&[report], Layout::Baseline)
            };
            emit(None, &text, stdout)
        }
        Command::Pipeline(a) => {
            let text = read_text(&a.config)?;
            let base = a.config.parent().unwrap_or(Path::new(""));
            let mut cfg = parse_config(&text)?.resolve(base);
            if a.seed.is_some() {
                cfg.seed = a.seed;
            }
            cfg.folds = a.folds.unwrap_or(cfg.folds);
            cfg.classifier.k = a.k.unwrap_or(cfg.classifier.k);
            cfg.classifier.weighting = a.weighting.unwrap_or(cfg.classifier.weighting);
            let out_dir = a.out_dir.unwrap_or_else(|| {
                let stem = a.config.file_stem().unwrap_or_default().to_string_lossy();
                PathBuf::from(format!("{stem}.run"))
            });
            let report = pipeline::run(&cfg, &out_dir)?;
            emit(None, &report, stdout)
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    write!(stdout, "{e}").ok();
                    0
                }
                _ => {
                    write!(stderr, "{}", e.render()).ok();
                    1
                }
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            writeln!(stderr, "combitag: {e}").ok();
            e.exit_code()
        }
    }
}
