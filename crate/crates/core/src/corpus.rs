//! Reference presentations used by the test suites and the CLI.

use num_integer::Integer;

use crate::cone_model::{from_weighted_action, quotient_cone, ConePresentation, WeightedAction};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub presentation: ConePresentation,
    /// Present for `C^n` with a weighted action.
    pub action: Option<WeightedAction>,
    /// Order of the cyclic quotient, `1` for weighted `C^n`.
    pub quotient_order: u64,
}

/// Every primitive weight vector of length `n` with entries in `1..=max_entry`.
pub fn weight_vectors(n: usize, max_entry: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = vec![1u64; n];
    loop {
        if current.iter().fold(0, |g, &a| g.gcd(&a)) == 1 {
            out.push(current.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < max_entry {
                current[i] += 1;
                break;
            }
            current[i] = 1;
        }
    }
}

pub fn pairwise_coprime(a: &[u64]) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, x)| a[i + 1..].iter().all(|y| x.gcd(y) == 1))
}

pub fn weighted_entry(a: &[u64]) -> CorpusEntry {
    let w = WeightedAction::new(a.to_vec()).expect("primitive weights");
    CorpusEntry {
        name: format!("weighted{a:?}"),
        presentation: from_weighted_action(&w).expect("n >= 2"),
        action: Some(w),
        quotient_order: 1,
    }
}

/// Weighted `C^n` for `n` in `2..=4` with entries at most 8.
pub fn weighted_corpus() -> Vec<CorpusEntry> {
    (2..=4)
        .flat_map(|n| weight_vectors(n, 8))
        .map(|a| weighted_entry(&a))
        .collect()
}

/// Cyclic quotients `C^n / mu_c`: `(weights, c)`.
pub const QUOTIENTS: &[(&[u64], u64)] = &[
    (&[1, 1], 2),
    (&[1, 2], 3),
    (&[1, 3], 4),
    (&[1, 4], 5),
    (&[2, 3], 5),
    (&[1, 2], 5),
    (&[3, 4], 5),
    (&[1, 1, 1], 2),
    (&[1, 1, 1], 3),
    (&[1, 1, 1], 4),
    (&[1, 1, 2], 3),
    (&[1, 1, 2], 5),
    (&[1, 2, 2], 5),
    (&[1, 2, 3], 5),
    (&[1, 2, 3], 7),
    (&[2, 3, 5], 7),
    (&[6, 10, 15], 7),
    (&[1, 1, 1, 1], 2),
    (&[1, 1, 1, 1], 3),
    (&[1, 1, 1, 1], 4),
    (&[1, 2, 3, 4], 5),
    (&[2, 2, 3, 3], 5),
    (&[1, 1, 1, 1, 1], 5),
];

pub fn quotient_entry(a: &[u64], c: u64) -> CorpusEntry {
    let w = WeightedAction::new(a.to_vec()).expect("primitive weights");
    CorpusEntry {
        name: format!("quotient{a:?}/{c}"),
        presentation: quotient_cone(&w, c).expect("free quotient"),
        action: None,
        quotient_order: c,
    }
}

pub fn quotient_corpus() -> Vec<CorpusEntry> {
    QUOTIENTS
        .iter()
        .map(|&(a, c)| quotient_entry(a, c))
        .collect()
}

pub fn full_corpus() -> Vec<CorpusEntry> {
    let mut all = weighted_corpus();
    all.extend(quotient_corpus());
    all
}
