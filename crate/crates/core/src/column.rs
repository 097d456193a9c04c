//! Per-token annotation columns and their aligned file format.

use serde::{Deserialize, Serialize};

use crate::corpus::{validate_symbol, Corpus};
use crate::error::{Error, Result};

/// One value per corpus token, produced by a single named source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationColumn {
    source: String,
    values: Vec<String>,
}

impl AnnotationColumn {
    pub fn new(source: impl Into<String>, values: Vec<String>) -> Self {
        AnnotationColumn {
            source: source.into(),
            values,
        }
    }

    /// The corpus's own gold tags as a column.
    pub fn gold(corpus: &Corpus) -> Self {
        AnnotationColumn::new(
            corpus.tagset().to_string(),
            corpus.tokens().map(|t| t.tag().to_string()).collect(),
        )
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn into_values(self) -> Vec<String> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn renamed(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    /// Values of the given sentences of `corpus`, in the order listed.
    pub fn select_sentences(&self, corpus: &Corpus, sentences: &[usize]) -> Result<AnnotationColumn> {
        self.check_aligned(corpus)?;
        let mut starts = Vec::with_capacity(corpus.sentence_count());
        let mut offset = 0;
        for s in corpus.sentences() {
            starts.push(offset..offset + s.len());
            offset += s.len();
        }
        let values = sentences
            .iter()
            .flat_map(|&i| self.values[starts[i].clone()].iter().cloned())
            .collect();
        Ok(AnnotationColumn::new(self.source.clone(), values))
    }

    pub fn check_aligned(&self, corpus: &Corpus) -> Result<()> {
        let expected = corpus.token_count();
        if self.values.len() != expected {
            return Err(Error::Alignment {
                position: self.values.len().min(expected),
                message: format!(
                    "column {:?} has {} values for {} tokens",
                    self.source,
                    self.values.len(),
                    expected
                ),
            });
        }
        Ok(())
    }
}

/// Writes `form<TAB>value` lines with the corpus's sentence breaks.
pub fn write_column(corpus: &Corpus, column: &AnnotationColumn) -> Result<String> {
    column.check_aligned(corpus)?;
    let mut out = String::new();
    let mut values = column.values().iter();
    for sentence in corpus.sentences() {
        for form in sentence.forms() {
            out.push_str(form);
            out.push('\t');
            // aligned above
            out.push_str(values.next().unwrap());
            out.push('\n');
        }
        out.push('\n');
    }
    Ok(out)
}

/// Reads predictions produced elsewhere for `corpus`.
///
/// Every line's form must equal the corpus token at the same position and
/// sentence breaks must coincide.
pub fn load_external_column(
    corpus: &Corpus,
    text: &str,
    source: &str,
) -> Result<AnnotationColumn> {
    let mut values = Vec::with_capacity(corpus.token_count());
    let mut lines = text.split('\n').enumerate().peekable();
    let mut position = 0usize;

    for sentence in corpus.sentences() {
        for form in sentence.forms() {
            let Some((idx, line)) = lines.next() else {
                return Err(Error::Alignment {
                    position,
                    message: "file ends before corpus".into(),
                });
            };
            let mut fields = line.split('\t');
            let (Some(got), Some(value), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(Error::Alignment {
                    position,
                    message: format!("line {}: expected `form<TAB>value`, got {line:?}", idx + 1),
                });
            };
            if got != form {
                return Err(Error::Alignment {
                    position,
                    message: format!("line {}: form {got:?} does not match {form:?}", idx + 1),
                });
            }
            validate_symbol(value).map_err(|m| Error::Alignment {
                position,
                message: format!("line {}: {m}", idx + 1),
            })?;
            values.push(value.to_string());
            position += 1;
        }
        match lines.next() {
            Some((_, "")) | None => {}
            Some((idx, line)) => {
                return Err(Error::Alignment {
                    position,
                    message: format!("line {}: expected sentence break, got {line:?}", idx + 1),
                })
            }
        }
    }
    if let Some((idx, line)) = lines.find(|(_, l)| !l.is_empty()) {
        return Err(Error::Alignment {
            position,
            message: format!("line {}: extra content after corpus end: {line:?}", idx + 1),
        });
    }
    Ok(AnnotationColumn::new(source, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_vertical;

    fn corpus() -> Corpus {
        parse_vertical("omdat\tVG\nik\tVNW\n\nklas\tN\n\n").unwrap()
    }

    #[test]
    fn selects_whole_sentences() {
        let col = AnnotationColumn::new("x", vec!["a".into(), "b".into(), "c".into()]);
        let picked = col.select_sentences(&corpus(), &[1, 0]).unwrap();
        assert_eq!(picked.values(), ["c", "a", "b"]);
    }

    #[test]
    fn loads_values_verbatim() {
        let text = "omdat\tConj(onder, metfin)\nik\tPron(per, 1, ev, nom)\n\nklas\tN(soort, ev, neut)\n\n";
        let col = load_external_column(&corpus(), text, "W1").unwrap();
        assert_eq!(col.source(), "W1");
        assert_eq!(col.values()[0], "Conj(onder, metfin)");
        assert_eq!(col.len(), 3);
    }

    #[test]
    fn missing_line_is_an_alignment_error() {
        let text = "omdat\ta\n\nklas\tc\n\n";
        match load_external_column(&corpus(), text, "x") {
            Err(Error::Alignment { position, .. }) => assert_eq!(position, 1),
            other => panic!("unexpected {other:?}"),
        }
        let text = "omdat\ta\nik\tb\n\n";
        match load_external_column(&corpus(), text, "x") {
            Err(Error::Alignment { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn form_mismatch_and_trailing_content() {
        let text = "omdat\ta\nwij\tb\n\nklas\tc\n\n";
        assert!(matches!(
            load_external_column(&corpus(), text, "x"),
            Err(Error::Alignment { position: 1, .. })
        ));
        let text = "omdat\ta\nik\tb\n\nklas\tc\n\nextra\td\n\n";
        assert!(matches!(
            load_external_column(&corpus(), text, "x"),
            Err(Error::Alignment { position: 3, .. })
        ));
    }

    #[test]
    fn write_then_load_is_identity() {
        let c = corpus();
        let col = AnnotationColumn::new("src", vec!["a".into(), "b".into(), "c".into()]);
        let text = write_column(&c, &col).unwrap();
        assert_eq!(text, "omdat\ta\nik\tb\n\nklas\tc\n\n");
        assert_eq!(load_external_column(&c, &text, "src").unwrap(), col);
    }
}
