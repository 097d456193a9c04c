mod oracles;

use combitag::corpus::{Corpus, Sentence};
use combitag::taggers::hmm::{train_hmm, HmmConfig};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn exact_decoding_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let n_tags = rng.gen_range(2..=4);
        let (model, vocab) = oracles::random_hmm(&mut rng, n_tags);
        let reference = oracles::ReferenceHmm::new(model.counts(), model.lambdas(), 10);
        for _ in 0..5 {
            let len = rng.gen_range(1..=6);
            let words: Vec<&str> = (0..len).map(|_| vocab.choose(&mut rng).unwrap().as_str()).collect();
            let decoded = model.decode(&words);
            let got = reference.path_score(&words, &decoded);
            let want = reference.best_score(&words);
            assert!((got - want).abs() < 1e-9, "{words:?}: {got} vs {want}");
        }
    }
}

#[test]
fn model_probabilities_match_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (model, vocab) = oracles::random_hmm(&mut rng, 3);
    let reference = oracles::ReferenceHmm::new(model.counts(), model.lambdas(), 10);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                assert!((model.transition_prob(a, b, c) - reference.transition(a, b, c)).abs() < 1e-12);
            }
        }
    }
    for w in &vocab {
        for (t, lp) in model.emission_logprobs(w).into_iter().enumerate() {
            let want = reference.emission(w, t).ln();
            assert!(lp == want || (lp - want).abs() < 1e-12, "{w} {t}");
        }
    }
}

fn random_corpus(seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sentences = (0..rng.gen_range(1..8))
        .map(|_| {
            let pairs: Vec<(String, String)> = (0..rng.gen_range(1..7))
                .map(|_| (format!("w{}", rng.gen_range(0..6)), format!("T{}", rng.gen_range(0..3))))
                .collect();
            Sentence::from_pairs(&pairs).unwrap()
        })
        .collect();
    Corpus::new("t", sentences)
}

proptest! {
    #[test]
    fn transitions_normalize(seed in any::<u64>()) {
        let model = train_hmm(&random_corpus(seed), &HmmConfig::default()).unwrap();
        let lambdas = model.lambdas();
        prop_assert!((lambdas.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let width = model.boundary() + 1;
        for a in 0..width {
            for b in 0..width {
                let total: f64 = (0..width).map(|c| model.transition_prob(a, b, c)).sum();
                prop_assert!((total - 1.0).abs() < 1e-9, "({a},{b}) sums to {total}");
            }
        }
    }

    #[test]
    fn suffix_distribution_normalizes(seed in any::<u64>(), word in "[a-z]{1,12}") {
        let model = train_hmm(&random_corpus(seed), &HmmConfig::default()).unwrap();
        let total: f64 = model.suffix_tag_distribution(&word).iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn decoding_has_one_tag_per_word(seed in any::<u64>(), len in 0usize..10) {
        let corpus = random_corpus(seed);
        let model = train_hmm(&corpus, &HmmConfig::default()).unwrap();
        let words: Vec<String> = (0..len).map(|i| format!("w{}", i % 9)).collect();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let tags = model.decode(&refs);
        prop_assert_eq!(tags.len(), len);
        prop_assert!(tags.iter().all(|&t| t < model.boundary()));
    }
}
