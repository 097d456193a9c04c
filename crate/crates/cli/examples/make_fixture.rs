//! Writes the bundled synthetic experiment into the given directory.
//!
//!     cargo run -p combitag-cli --example make_fixture -- crates/cli/fixtures

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use combitag::synth::{scenario, ScenarioConfig};
use combitag::{write_column, write_lexicon, write_vertical, Lexicon};

fn main() {
    let dir: PathBuf = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| "fixtures".into());
    std::fs::create_dir_all(&dir).expect("create fixture directory");
    let s = scenario(&ScenarioConfig::default());

    let write = |name: &str, text: String| std::fs::write(dir.join(name), text).expect("write fixture");
    write("train.tsv", write_vertical(&s.train));
    write("test.tsv", write_vertical(&s.test));
    write("aux.train.col", write_column(&s.train, &s.aux_train).unwrap());
    write("aux.test.col", write_column(&s.test, &s.aux_test).unwrap());

    // auxiliary categories observed per training word
    let mut seen: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (token, value) in s.train.tokens().zip(s.aux_train.values()) {
        seen.entry(token.form()).or_default().insert(value);
    }
    let lexicon = Lexicon::build(
        seen.iter()
            .flat_map(|(w, cats)| cats.iter().map(move |c| (*w, *c))),
    )
    .unwrap();
    write("aux.lex", write_lexicon(&lexicon));
}
