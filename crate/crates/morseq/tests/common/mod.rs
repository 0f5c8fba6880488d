//! Shared helpers for the integration suites.

use morseq::{Complex, MorseSequence, Tiebreak};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Builds a small random complex: the closure of up to five random facets
/// of dimension at most three over eight vertices, rerolled until it has
/// at most 25 faces.
#[must_use]
pub fn random_complex(seed: u64) -> Complex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let facet_count = rng.random_range(1..=5);
        let mut facets = Vec::new();
        for _ in 0..facet_count {
            let size = rng.random_range(1..=4);
            let mut pool: Vec<u32> = (0..8).collect();
            pool.shuffle(&mut rng);
            facets.push(pool[..size].to_vec());
        }
        let k = Complex::closure(&facets).expect("facets are nonempty");
        if k.face_count() <= 25 {
            return k;
        }
    }
}

/// Every scheme and tie-break combination on `k`, labeled.
#[must_use]
pub fn scheme_runs(k: &Complex, seed: u64) -> Vec<(String, MorseSequence)> {
    vec![
        (
            "increasing lex".into(),
            morseq::increasing_scheme(k, Tiebreak::Lex),
        ),
        (
            format!("increasing seeded {seed}"),
            morseq::increasing_scheme(k, Tiebreak::Seeded(seed)),
        ),
        (
            "decreasing lex".into(),
            morseq::decreasing_scheme(k, Tiebreak::Lex),
        ),
        (
            format!("decreasing seeded {seed}"),
            morseq::decreasing_scheme(k, Tiebreak::Seeded(seed)),
        ),
    ]
}
