use std::fmt::Write as _;
use std::path::Path;

use combitag::mbl::write_cases;
use combitag::stacking::{run_experiment, ExperimentOutcome, StackedCase};
use combitag::{render_table, write_column, AnnotationColumn, Corpus, Layout};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::io::write_text;

fn feature_column(cases: &[StackedCase], index: usize, name: &str) -> AnnotationColumn {
    AnnotationColumn::new(name, cases.iter().map(|c| c.features[index].clone()).collect())
}

fn write_columns(
    out_dir: &Path,
    names: &[String],
    role: &str,
    corpus: &Corpus,
    cases: &[StackedCase],
) -> Result<(), CliError> {
    if cases.is_empty() {
        return Ok(());
    }
    for (i, name) in names.iter().enumerate() {
        let column = feature_column(cases, i, name);
        let path = out_dir.join("columns").join(format!("{name}.{role}.col"));
        write_text(&path, &write_column(corpus, &column)?)?;
    }
    Ok(())
}

/// Baseline table over the internal taggers, then the combiner against the
/// best of them.
pub fn render_report(outcome: &ExperimentOutcome) -> String {
    let mut out = String::new();
    if !outcome.baselines.is_empty() {
        let _ = writeln!(out, "# baselines");
        out.push_str(&render_table(&outcome.baselines, Layout::Baseline));
        out.push('\n');
    }
    let _ = writeln!(out, "# combined");
    match outcome.best_baseline() {
        Some(best) => out.push_str(&render_table(
            &[best.clone(), outcome.report.clone()],
            Layout::Reduction,
        )),
        None => out.push_str(&render_table(
            std::slice::from_ref(&outcome.report),
            Layout::Baseline,
        )),
    }
    out
}

fn render_tsv(outcome: &ExperimentOutcome) -> String {
    std::iter::once(&outcome.report)
        .chain(&outcome.baselines)
        .map(|r| r.to_tsv())
        .collect::<Vec<_>>()
        .join("\n")
}

/// Runs the experiment and fills `out_dir`; returns the text report.
pub fn run(config: &ExperimentConfig, out_dir: &Path) -> Result<String, CliError> {
    let plan = config.load()?;
    let outcome = run_experiment(&plan)?;
    let names: Vec<String> = plan.source_names().into_iter().map(String::from).collect();

    write_text(&out_dir.join("train.cases"), &write_cases(&outcome.train_cases))?;
    write_text(&out_dir.join("test.cases"), &write_cases(&outcome.test_cases))?;
    write_columns(out_dir, &names, "train", &plan.train, &outcome.train_cases)?;
    write_columns(out_dir, &names, "test", &plan.test, &outcome.test_cases)?;
    write_text(
        &out_dir.join("predictions.col"),
        &write_column(&plan.test, &outcome.predictions)?,
    )?;
    let report = render_report(&outcome);
    write_text(&out_dir.join("report.txt"), &report)?;
    write_text(&out_dir.join("report.tsv"), &render_tsv(&outcome))?;
    Ok(report)
}
