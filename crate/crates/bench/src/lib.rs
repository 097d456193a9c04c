//! Seeded inputs shared by the benchmarks.

use combitag::mbl::{self, ClassifierConfig, InstanceBase, TrainingCase, Weighting};
use combitag::synth::{scenario, ScenarioConfig};
use combitag::taggers::{train_hmm, HmmConfig, HmmModel};
use combitag::Corpus;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random symbolic cases with a class that depends on the first features.
pub fn instance_base(cases: usize, arity: usize, alphabet: usize, weighting: Weighting) -> InstanceBase {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cases = (0..cases)
        .map(|_| {
            let values: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..alphabet)).collect();
            let class = (values[0] + values[1.min(arity - 1)]) % 5;
            TrainingCase::new(values.iter().map(|v| format!("v{v}")), format!("c{class}"))
        })
        .collect();
    mbl::train(cases, ClassifierConfig { k: 1, weighting }).expect("non-empty cases")
}

pub fn queries(count: usize, arity: usize, alphabet: usize) -> Vec<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    (0..count)
        .map(|_| (0..arity).map(|_| format!("v{}", rng.gen_range(0..alphabet))).collect())
        .collect()
}

/// An HMM trained on a synthetic corpus, plus held-out text to decode.
pub fn hmm_and_text(train_tokens: usize, beam: Option<usize>) -> (HmmModel, Corpus) {
    let s = scenario(&ScenarioConfig {
        train_tokens,
        test_tokens: 2000,
        ..ScenarioConfig::default()
    });
    let config = HmmConfig {
        beam,
        ..HmmConfig::default()
    };
    (train_hmm(&s.train, &config).expect("non-empty corpus"), s.test)
}
