//! Accuracy with known/unknown word splits, error reduction, and report tables.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::column::AnnotationColumn;
use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// Rendered in place of an accuracy over zero tokens.
pub const UNDEFINED: &str = "--";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub source: String,
    pub known_count: usize,
    pub unknown_count: usize,
    pub known_correct: usize,
    pub unknown_correct: usize,
}

fn percent(correct: usize, count: usize) -> Option<f64> {
    (count > 0).then(|| 100.0 * correct as f64 / count as f64)
}

impl EvalReport {
    pub fn total_count(&self) -> usize {
        self.known_count + self.unknown_count
    }

    pub fn total_correct(&self) -> usize {
        self.known_correct + self.unknown_correct
    }

    pub fn total_acc(&self) -> Option<f64> {
        percent(self.total_correct(), self.total_count())
    }

    pub fn known_acc(&self) -> Option<f64> {
        percent(self.known_correct, self.known_count)
    }

    pub fn unknown_acc(&self) -> Option<f64> {
        percent(self.unknown_correct, self.unknown_count)
    }

    pub fn unknown_pct(&self) -> Option<f64> {
        percent(self.unknown_count, self.total_count())
    }

    /// `metric<TAB>value` lines.
    pub fn to_tsv(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or(UNDEFINED.to_string(), |x| round_to(x, 2));
        let mut out = String::new();
        let _ = writeln!(out, "source\t{}", self.source);
        let _ = writeln!(out, "total_count\t{}", self.total_count());
        let _ = writeln!(out, "known_count\t{}", self.known_count);
        let _ = writeln!(out, "unknown_count\t{}", self.unknown_count);
        let _ = writeln!(out, "unknown_pct\t{}", fmt(self.unknown_pct()));
        let _ = writeln!(out, "total_acc\t{}", fmt(self.total_acc()));
        let _ = writeln!(out, "known_acc\t{}", fmt(self.known_acc()));
        let _ = writeln!(out, "unknown_acc\t{}", fmt(self.unknown_acc()));
        out
    }
}

/// Scores `pred` against the gold tags of `gold`.
///
/// A token is unknown when its form is absent from `train_vocab`.
pub fn accuracy(
    pred: &AnnotationColumn,
    gold: &Corpus,
    train_vocab: &HashSet<String>,
) -> Result<EvalReport> {
    pred.check_aligned(gold)?;
    let mut report = EvalReport {
        source: pred.source().to_string(),
        known_count: 0,
        unknown_count: 0,
        known_correct: 0,
        unknown_correct: 0,
    };
    for (token, predicted) in gold.tokens().zip(pred.values()) {
        let correct = usize::from(predicted == token.tag());
        if train_vocab.contains(token.form()) {
            report.known_count += 1;
            report.known_correct += correct;
        } else {
            report.unknown_count += 1;
            report.unknown_correct += correct;
        }
    }
    Ok(report)
}

/// Relative change in error rate, in percent. Negative means fewer errors.
pub fn error_reduction(baseline_acc: f64, new_acc: f64) -> Result<f64> {
    for acc in [baseline_acc, new_acc] {
        if !(0.0..=100.0).contains(&acc) {
            return Err(Error::Domain(format!("accuracy {acc} outside [0, 100]")));
        }
    }
    let base_err = 100.0 - baseline_acc;
    if base_err <= 0.0 {
        return Err(Error::Domain(
            "baseline accuracy of 100 leaves no error to reduce".into(),
        ));
    }
    Ok(100.0 * ((100.0 - new_acc) - base_err) / base_err)
}

/// Rounds half away from zero and formats with `decimals` places.
pub fn round_to(value: f64, decimals: u32) -> String {
    let scale = 10f64.powi(decimals as i32);
    let scaled = value * scale;
    // nudge values like 84.485 that sit a hair under the midpoint in binary
    let nudged = scaled + scaled.signum() * 1e-9 * scaled.abs().max(1.0);
    let rounded = nudged.round() / scale + 0.0;
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded:.prec$}", prec = decimals as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Unknown, known and total accuracy per source, plus the unknown-token share.
    Baseline,
    /// Total accuracy per source.
    Ablation,
    /// Unknown, known and total accuracy, then the error change from the
    /// first report to the last.
    Reduction,
}

const NUM_WIDTH: usize = 8;

fn cell(v: Option<f64>, decimals: u32) -> String {
    let text = v.map_or(UNDEFINED.to_string(), |x| round_to(x, decimals));
    format!("{text:>NUM_WIDTH$}")
}

pub fn render_table(reports: &[EvalReport], layout: Layout) -> String {
    const PCT_UNKNOWN: &str = "% unknown";
    const DELTA: &str = "Δ error (%)";

    let name_width = reports
        .iter()
        .map(|r| r.source.chars().count())
        .chain([PCT_UNKNOWN.len(), DELTA.chars().count(), "source".len()])
        .max()
        .unwrap_or(0);

    let mut out = String::new();
    let header: &[&str] = match layout {
        Layout::Ablation => &["t"],
        Layout::Baseline | Layout::Reduction => &["u", "k", "t"],
    };
    let _ = write!(out, "{:<name_width$}", "source");
    for h in header {
        let _ = write!(out, "{h:>NUM_WIDTH$}");
    }
    out.push('\n');

    for r in reports {
        let _ = write!(out, "{:<name_width$}", r.source);
        match layout {
            Layout::Ablation => out.push_str(&cell(r.total_acc(), 2)),
            Layout::Baseline | Layout::Reduction => {
                out.push_str(&cell(r.unknown_acc(), 2));
                out.push_str(&cell(r.known_acc(), 2));
                out.push_str(&cell(r.total_acc(), 2));
            }
        }
        out.push('\n');
    }

    match layout {
        Layout::Baseline => {
            if let Some(first) = reports.first() {
                let _ = writeln!(
                    out,
                    "{PCT_UNKNOWN:<name_width$}{}{}",
                    " ".repeat(2 * NUM_WIDTH),
                    cell(first.unknown_pct(), 2)
                );
            }
        }
        Layout::Reduction => {
            if let (Some(base), Some(new)) = (reports.first(), reports.last()) {
                if reports.len() > 1 {
                    let delta = |b: Option<f64>, n: Option<f64>| {
                        b.zip(n).and_then(|(b, n)| error_reduction(b, n).ok())
                    };
                    let _ = writeln!(
                        out,
                        "{DELTA:<name_width$}{}{}{}",
                        cell(delta(base.unknown_acc(), new.unknown_acc()), 1),
                        cell(delta(base.known_acc(), new.known_acc()), 1),
                        cell(delta(base.total_acc(), new.total_acc()), 1),
                    );
                }
            }
        }
        Layout::Ablation => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Sentence;

    fn report(source: &str, known: (usize, usize), unknown: (usize, usize)) -> EvalReport {
        EvalReport {
            source: source.into(),
            known_count: known.0,
            known_correct: known.1,
            unknown_count: unknown.0,
            unknown_correct: unknown.1,
        }
    }

    #[test]
    fn all_correct() {
        let gold = Corpus::new(
            "t",
            vec![Sentence::from_pairs(&[("a", "X"), ("b", "Y")]).unwrap()],
        );
        let vocab: HashSet<String> = ["a".to_string()].into();
        let r = accuracy(&AnnotationColumn::gold(&gold), &gold, &vocab).unwrap();
        assert_eq!(r.total_acc(), Some(100.0));
        assert_eq!(r.known_acc(), Some(100.0));
        assert_eq!(r.unknown_acc(), Some(100.0));
    }

    #[test]
    fn one_unknown_wrong_out_of_ten() {
        let pairs: Vec<(String, &str)> = (0..10).map(|i| (format!("w{i}"), "X")).collect();
        let gold = Corpus::new("t", vec![Sentence::from_pairs(&pairs).unwrap()]);
        let vocab: HashSet<String> = (0..9).map(|i| format!("w{i}")).collect();
        let mut values = vec!["X".to_string(); 10];
        values[9] = "Y".into();
        let r = accuracy(&AnnotationColumn::new("p", values), &gold, &vocab).unwrap();
        assert_eq!(r.unknown_pct(), Some(10.0));
        assert_eq!(r.unknown_acc(), Some(0.0));
        assert_eq!(r.known_acc(), Some(100.0));
        assert_eq!(r.total_acc(), Some(90.0));
    }

    #[test]
    fn no_unknown_tokens_leaves_unknown_undefined() {
        let r = report("x", (4, 3), (0, 0));
        assert_eq!(r.unknown_acc(), None);
        assert_eq!(r.total_acc(), r.known_acc());
        assert!(r.to_tsv().contains("unknown_acc\t--\n"));
    }

    #[test]
    fn misaligned_prediction() {
        let gold = Corpus::new("t", vec![Sentence::from_pairs(&[("a", "X")]).unwrap()]);
        let pred = AnnotationColumn::new("p", vec![]);
        assert!(matches!(
            accuracy(&pred, &gold, &HashSet::new()),
            Err(Error::Alignment { .. })
        ));
    }

    #[test]
    fn error_reduction_values() {
        assert!((error_reduction(90.75, 93.49).unwrap() - -29.6).abs() < 0.05);
        assert!((error_reduction(84.49, 91.42).unwrap() - -44.7).abs() < 0.05);
        assert_eq!(error_reduction(77.0, 77.0).unwrap(), 0.0);
        assert!(error_reduction(90.0, 80.0).unwrap() > 0.0);
        assert!(matches!(error_reduction(100.0, 90.0), Err(Error::Domain(_))));
        assert!(matches!(error_reduction(90.0, 101.0), Err(Error::Domain(_))));
    }

    #[test]
    fn rounding() {
        assert_eq!(round_to(84.485, 2), "84.49");
        assert_eq!(round_to(-56.26, 1), "-56.3");
        assert_eq!(round_to(-0.04, 1), "0.0");
        assert_eq!(round_to(2.5, 0), "3");
        assert_eq!(round_to(-2.5, 0), "-3");
    }

    #[test]
    fn one_report_is_one_row() {
        let table = render_table(&[report("TNT", (10, 9), (2, 1))], Layout::Ablation);
        assert_eq!(table.lines().count(), 2);
        assert!(table.lines().nth(1).unwrap().starts_with("TNT"));
    }

    #[test]
    fn baseline_columns_are_u_k_t() {
        let table = render_table(&[report("TNT", (8284, 7607), (1716, 842))], Layout::Baseline);
        let header: Vec<&str> = table.lines().next().unwrap().split_whitespace().collect();
        assert_eq!(header, vec!["source", "u", "k", "t"]);
        let row: Vec<&str> = table.lines().nth(1).unwrap().split_whitespace().collect();
        assert_eq!(row, vec!["TNT", "49.07", "91.83", "84.49"]);
        assert!(table.contains("17.16"));
    }

    #[test]
    fn reduction_row() {
        let base = report("best single", (8284, 7607), (1716, 842));
        let combined = report("combined", (8284, 7855), (1716, 1287));
        assert_eq!(round_to(base.total_acc().unwrap(), 2), "84.49");
        assert_eq!(round_to(combined.total_acc().unwrap(), 2), "91.42");
        let table = render_table(&[base, combined], Layout::Reduction);
        let last = table.lines().last().unwrap();
        assert!(last.starts_with("Δ error (%)"));
        assert!(last.trim_end().ends_with("-44.7"), "{table}");
    }
}
