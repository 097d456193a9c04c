//! Ambiguity-class lookup from a word/category lexicon.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::column::AnnotationColumn;
use crate::corpus::{validate_symbol, Corpus};
use crate::error::{Error, Result};

/// Value emitted for forms the lexicon does not list.
pub const UNKNOWN: &str = "UNKNOWN";

/// Separator between categories of one ambiguity class.
pub const CLASS_SEPARATOR: &str = "|";

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Lexicon {
    name: String,
    entries: BTreeMap<String, Vec<String>>,
}

impl Lexicon {
    /// Builds a lexicon from `(form, category)` records in any order.
    pub fn build<F, C>(pairs: impl IntoIterator<Item = (F, C)>) -> Result<Self>
    where
        F: AsRef<str>,
        C: AsRef<str>,
    {
        let mut sets: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (index, (form, category)) in pairs.into_iter().enumerate() {
            let (form, category) = (form.as_ref(), category.as_ref());
            for field in [form, category] {
                validate_symbol(field).map_err(|m| Error::Data {
                    index,
                    message: m.to_string(),
                })?;
            }
            if category == UNKNOWN {
                return Err(Error::Data {
                    index,
                    message: format!("category name {UNKNOWN} is reserved"),
                });
            }
            sets.entry(form.to_string())
                .or_default()
                .insert(category.to_string());
        }
        let entries = sets
            .into_iter()
            .map(|(form, cats)| (form, cats.into_iter().collect()))
            .collect();
        Ok(Lexicon {
            name: "lexicon".into(),
            entries,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn categories(&self, form: &str) -> Option<&[String]> {
        self.entries.get(form).map(Vec::as_slice)
    }

    /// The joined ambiguity class of `form`, or [`UNKNOWN`].
    pub fn lookup(&self, form: &str) -> String {
        match self.entries.get(form) {
            Some(cats) => cats.join(CLASS_SEPARATOR),
            None => UNKNOWN.to_string(),
        }
    }

    pub fn annotate(&self, corpus: &Corpus) -> AnnotationColumn {
        AnnotationColumn::new(
            self.name.clone(),
            corpus.tokens().map(|t| self.lookup(t.form())).collect(),
        )
    }
}

/// Parses `form<TAB>category` lines; blank lines are skipped.
pub fn parse_lexicon(text: &str) -> Result<Lexicon> {
    let mut pairs = Vec::new();
    for (idx, line) in text.split('\n').enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(form), Some(cat), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected `form<TAB>category`, got {line:?}"),
            });
        };
        pairs.push((idx + 1, form, cat));
    }
    Lexicon::build(pairs.iter().map(|&(_, f, c)| (f, c))).map_err(|e| match e {
        Error::Data { index, message } => Error::Parse {
            line: pairs[index].0,
            message,
        },
        other => other,
    })
}

/// One line per (form, category), forms and categories in sorted order.
pub fn write_lexicon(lexicon: &Lexicon) -> String {
    let mut out = String::new();
    for (form, cats) in &lexicon.entries {
        for cat in cats {
            out.push_str(form);
            out.push('\t');
            out.push_str(cat);
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_vertical;

    #[test]
    fn dedupes_and_sorts() {
        let lex = Lexicon::build([
            ("sta", "werkwoord"),
            ("sta", "substantief"),
            ("sta", "werkwoord"),
        ])
        .unwrap();
        assert_eq!(
            lex.categories("sta").unwrap(),
            &["substantief".to_string(), "werkwoord".to_string()]
        );
        assert_eq!(lex.lookup("sta"), "substantief|werkwoord");
    }

    #[test]
    fn lookup_cases() {
        let lex = Lexicon::build([("klas", "substantief")]).unwrap();
        assert_eq!(lex.lookup("klas"), "substantief");
        assert_eq!(lex.lookup("omdat"), UNKNOWN);
        assert_eq!(lex.lookup("Klas"), UNKNOWN);
        assert!(Lexicon::build(Vec::<(&str, &str)>::new()).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_records() {
        assert_eq!(
            Lexicon::build([("a", "x"), ("b", "")]),
            Err(Error::Data {
                index: 1,
                message: "empty field".into()
            })
        );
        assert!(matches!(
            Lexicon::build([("a", UNKNOWN)]),
            Err(Error::Data { index: 0, .. })
        ));
        assert!(matches!(
            parse_lexicon("a\tx\nb\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_lexicon("a\tx\n\nb\tUNKNOWN\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn annotates_every_token() {
        let corpus = parse_vertical("omdat\tVG\nklas\tN\n\nsta\tWW\n\n").unwrap();
        let lex = Lexicon::build([("klas", "substantief")]).unwrap().with_name("CEL");
        let col = lex.annotate(&corpus);
        assert_eq!(col.source(), "CEL");
        assert_eq!(col.values(), &["UNKNOWN", "substantief", "UNKNOWN"]);

        let disjoint = Lexicon::build([("zzz", "bijwoord")]).unwrap();
        assert!(disjoint.annotate(&corpus).values().iter().all(|v| v == UNKNOWN));
    }

    #[test]
    fn file_round_trip() {
        let lex = Lexicon::build([("b", "y"), ("a", "x"), ("b", "x")]).unwrap();
        let text = write_lexicon(&lex);
        assert_eq!(text, "a\tx\nb\tx\nb\ty\n");
        assert_eq!(parse_lexicon(&text).unwrap(), lex);
    }
}
