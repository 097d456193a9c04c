//! IB1 memory-based classification over symbolic feature vectors.
//!
//! All training cases are kept. A query is classified by majority vote
//! over every stored case whose overlap distance falls among the `k`
//! smallest distinct distances. Vote ties go to the class with the higher
//! training frequency, then to the lexicographically smaller class.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::validate_symbol;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    #[default]
    None,
    GainRatio,
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Weighting::None),
            "gain_ratio" | "gr" => Ok(Weighting::GainRatio),
            other => Err(Error::Config(format!("unknown weighting {other:?}"))),
        }
    }
}

impl std::fmt::Display for Weighting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Weighting::None => "none",
            Weighting::GainRatio => "gain_ratio",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    /// Number of nearest distinct distances whose cases vote.
    pub k: usize,
    pub weighting: Weighting,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            k: 1,
            weighting: Weighting::None,
        }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrainingCase {
    pub features: Vec<String>,
    pub target: String,
}

impl TrainingCase {
    pub fn new<S: Into<String>>(features: impl IntoIterator<Item = S>, target: impl Into<String>) -> Self {
        TrainingCase {
            features: features.into_iter().map(Into::into).collect(),
            target: target.into(),
        }
    }

    pub fn arity(&self) -> usize {
        self.features.len()
    }
}

/// Weighted count of mismatching positions. `None` means unit weights.
pub fn overlap_distance<A: AsRef<str>, B: AsRef<str>>(
    a: &[A],
    b: &[B],
    weights: Option<&[f64]>,
) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            actual: b.len(),
        });
    }
    if let Some(w) = weights {
        if w.len() != a.len() {
            return Err(Error::Dimension {
                expected: a.len(),
                actual: w.len(),
            });
        }
    }
    let mut sum = 0.0;
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        if x.as_ref() != y.as_ref() {
            sum += weights.map_or(1.0, |w| w[i]);
        }
    }
    Ok(sum)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// Stored cases in the neighbor set.
    pub neighbors: usize,
    /// Distinct distances that contributed neighbors, ascending.
    pub distances: Vec<f64>,
}

const UNSEEN: u32 = u32::MAX;

#[derive(Serialize, Deserialize)]
struct StoredBase {
    config: ClassifierConfig,
    cases: Vec<TrainingCase>,
}

/// Stored training cases with an interned copy for fast scanning.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "StoredBase", try_from = "StoredBase")]
pub struct InstanceBase {
    config: ClassifierConfig,
    cases: Vec<TrainingCase>,
    arity: usize,
    // per-feature symbol ids, assigned in order of first appearance
    symbols: Vec<HashMap<String, u32>>,
    encoded: Vec<u32>,
    targets: Vec<u32>,
    classes: Vec<String>,
    class_counts: Vec<usize>,
    gain_ratios: Vec<f64>,
}

impl From<InstanceBase> for StoredBase {
    fn from(base: InstanceBase) -> Self {
        StoredBase {
            config: base.config,
            cases: base.cases,
        }
    }
}

impl TryFrom<StoredBase> for InstanceBase {
    type Error = Error;

    fn try_from(stored: StoredBase) -> Result<Self> {
        train(stored.cases, stored.config)
    }
}

/// Stores `cases` and precomputes class frequencies and gain ratios.
pub fn train(cases: Vec<TrainingCase>, config: ClassifierConfig) -> Result<InstanceBase> {
    config.validate()?;
    let Some(first) = cases.first() else {
        return Err(Error::Train("no training cases".into()));
    };
    let arity = first.arity();
    if arity == 0 {
        return Err(Error::Train("cases have no features".into()));
    }

    let mut symbols = vec![HashMap::<String, u32>::new(); arity];
    let mut encoded = Vec::with_capacity(cases.len() * arity);
    let mut class_ids = HashMap::<String, u32>::new();
    let mut classes = Vec::new();
    let mut class_counts = Vec::new();
    let mut targets = Vec::with_capacity(cases.len());

    for case in &cases {
        if case.arity() != arity {
            return Err(Error::Dimension {
                expected: arity,
                actual: case.arity(),
            });
        }
        for (table, value) in symbols.iter_mut().zip(&case.features) {
            let next = table.len() as u32;
            encoded.push(*table.entry(value.clone()).or_insert(next));
        }
        let id = *class_ids.entry(case.target.clone()).or_insert_with(|| {
            classes.push(case.target.clone());
            class_counts.push(0);
            (classes.len() - 1) as u32
        });
        class_counts[id as usize] += 1;
        targets.push(id);
    }

    let mut base = InstanceBase {
        config,
        cases,
        arity,
        symbols,
        encoded,
        targets,
        classes,
        class_counts,
        gain_ratios: Vec::new(),
    };
    base.gain_ratios = base.compute_gain_ratios();
    Ok(base)
}

fn entropy(counts: impl Iterator<Item = usize>, total: usize) -> f64 {
    let total = total as f64;
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

impl InstanceBase {
    pub fn config(&self) -> ClassifierConfig {
        self.config
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn cases(&self) -> &[TrainingCase] {
        &self.cases
    }

    pub fn class_frequencies(&self) -> BTreeMap<&str, usize> {
        self.classes
            .iter()
            .map(String::as_str)
            .zip(self.class_counts.iter().copied())
            .collect()
    }

    /// Gain ratio of each feature with respect to the class, in bits.
    pub fn gain_ratios(&self) -> &[f64] {
        &self.gain_ratios
    }

    /// Weights applied under `weighting`, or `None` for unit weights.
    pub fn weights(&self, weighting: Weighting) -> Option<&[f64]> {
        match weighting {
            Weighting::None => None,
            Weighting::GainRatio => Some(&self.gain_ratios),
        }
    }

    fn compute_gain_ratios(&self) -> Vec<f64> {
        let n = self.targets.len();
        let n_classes = self.classes.len();
        let class_entropy = entropy(self.class_counts.iter().copied(), n);

        (0..self.arity)
            .map(|f| {
                let n_values = self.symbols[f].len();
                let mut joint = vec![0usize; n_values * n_classes];
                let mut value_counts = vec![0usize; n_values];
                for (row, &class) in self.targets.iter().enumerate() {
                    let v = self.encoded[row * self.arity + f] as usize;
                    value_counts[v] += 1;
                    joint[v * n_classes + class as usize] += 1;
                }
                let conditional: f64 = (0..n_values)
                    .map(|v| {
                        let nv = value_counts[v];
                        let row = &joint[v * n_classes..(v + 1) * n_classes];
                        nv as f64 / n as f64 * entropy(row.iter().copied(), nv)
                    })
                    .sum();
                let split_info = entropy(value_counts.iter().copied(), n);
                if split_info <= 0.0 {
                    0.0
                } else {
                    ((class_entropy - conditional) / split_info).max(0.0)
                }
            })
            .collect()
    }

    fn encode<Q: AsRef<str>>(&self, query: &[Q]) -> Result<Vec<u32>> {
        if query.len() != self.arity {
            return Err(Error::Dimension {
                expected: self.arity,
                actual: query.len(),
            });
        }
        Ok(query
            .iter()
            .zip(&self.symbols)
            .map(|(v, table)| table.get(v.as_ref()).copied().unwrap_or(UNSEEN))
            .collect())
    }

    /// Classifies with the base's own configuration.
    pub fn classify<Q: AsRef<str>>(&self, query: &[Q]) -> Result<(String, Diagnostics)> {
        classify(self, query, &self.config)
    }

    /// Classifies many queries in parallel; output order follows input order.
    pub fn classify_all<Q: AsRef<str> + Sync>(&self, queries: &[Vec<Q>]) -> Result<Vec<String>> {
        queries
            .par_iter()
            .map(|q| self.classify(q).map(|(class, _)| class))
            .collect()
    }

    fn vote(&self, neighbor_rows: impl Iterator<Item = usize>) -> usize {
        let mut tally: BTreeMap<u32, usize> = BTreeMap::new();
        for row in neighbor_rows {
            *tally.entry(self.targets[row]).or_default() += 1;
        }
        let (&winner, _) = tally
            .iter()
            .max_by(|x, y| {
                let ((a, ca), (b, cb)) = ((*x.0, *x.1), (*y.0, *y.1));
                ca.cmp(&cb)
                    .then(self.class_counts[a as usize].cmp(&self.class_counts[b as usize]))
                    // smaller symbol wins, so it must compare as greater
                    .then(self.classes[b as usize].cmp(&self.classes[a as usize]))
            })
            .expect("neighbor set is never empty");
        winner as usize
    }
}

/// Nearest-neighbor classification under `config`.
pub fn classify<Q: AsRef<str>>(
    base: &InstanceBase,
    query: &[Q],
    config: &ClassifierConfig,
) -> Result<(String, Diagnostics)> {
    config.validate()?;
    let query = base.encode(query)?;
    let weights = base.weights(config.weighting);
    let k = config.k;

    // ascending distinct distances, each with the rows at that distance
    let mut best: Vec<(f64, Vec<usize>)> = Vec::with_capacity(k + 1);
    for (row, stored) in base.encoded.chunks_exact(base.arity).enumerate() {
        let mut d = 0.0;
        for (i, (a, b)) in stored.iter().zip(&query).enumerate() {
            if a != b {
                d += weights.map_or(1.0, |w| w[i]);
            }
        }
        if best.len() == k && d > best[k - 1].0 {
            continue;
        }
        match best.binary_search_by(|(x, _)| x.total_cmp(&d)) {
            Ok(pos) => best[pos].1.push(row),
            Err(pos) => {
                best.insert(pos, (d, vec![row]));
                best.truncate(k);
            }
        }
    }

    let winner = base.vote(best.iter().flat_map(|(_, rows)| rows.iter().copied()));
    let diagnostics = Diagnostics {
        neighbors: best.iter().map(|(_, rows)| rows.len()).sum(),
        distances: best.iter().map(|(d, _)| *d).collect(),
    };
    Ok((base.classes[winner].clone(), diagnostics))
}

/// One case per line: tab-separated features, then the target.
pub fn write_cases(cases: &[TrainingCase]) -> String {
    let mut out = String::new();
    for case in cases {
        for f in &case.features {
            out.push_str(f);
            out.push('\t');
        }
        out.push_str(&case.target);
        out.push('\n');
    }
    out
}

pub fn parse_cases(text: &str) -> Result<Vec<TrainingCase>> {
    let mut cases = Vec::new();
    let mut columns = None;
    for (idx, line) in text.split('\n').enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut fields: Vec<&str> = line.split('\t').collect();
        let expected = *columns.get_or_insert(fields.len());
        if fields.len() != expected {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected {expected} columns, found {}", fields.len()),
            });
        }
        if fields.len() < 2 {
            return Err(Error::Parse {
                line: idx + 1,
                message: "a case needs at least one feature and a target".into(),
            });
        }
        for f in &fields {
            validate_symbol(f).map_err(|m| Error::Parse {
                line: idx + 1,
                message: m.to_string(),
            })?;
        }
        let target = fields.pop().unwrap();
        cases.push(TrainingCase::new(fields, target));
    }
    Ok(cases)
}
