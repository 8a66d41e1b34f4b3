//! Greedy word-family expansion.
//!
//! Starting from n families each holding the empty word, every step removes
//! one word of maximal contraction ratio from its family and replaces it by
//! its ℓ one-letter extensions. The comparability invariant
//! `min ρ_J ≥ ρ_min · max ρ_J` over the union is asserted after every step;
//! it is what lets the absorption lemma swallow one factor at a time.

use super::SumsError;
use crate::ifs::{Ifs, Word};

#[derive(Clone, Debug)]
pub struct WordFamilyTuple {
    /// One word list per summand; each entry carries its ratio ρ_J.
    pub families: Vec<Vec<(Word, f64)>>,
    pub steps: usize,
    /// (min ρ_J, max ρ_J) over the union of all families.
    pub ratio_stats: (f64, f64),
}

impl WordFamilyTuple {
    pub fn total_words(&self) -> usize {
        self.families.iter().map(|f| f.len()).sum()
    }

    fn stats(&self) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for fam in &self.families {
            for &(_, rho) in fam {
                min = min.min(rho);
                max = max.max(rho);
            }
        }
        (min, max)
    }
}

/// Runs `steps` greedy expansion steps for an n-tuple of word families.
///
/// Tie-breaking when several words share the maximal ratio: the
/// lexicographically smallest word wins, then the smallest family index.
pub fn expand_word_families(
    ifs: &Ifs,
    n: u64,
    steps: usize,
) -> Result<WordFamilyTuple, SumsError> {
    let Some(rho_min) = ifs.rho_min() else {
        return Err(SumsError::NotSimilitude);
    };
    let threshold = super::sum_identity_threshold(ifs)?;
    if n < threshold {
        return Err(SumsError::ThresholdNotMet { n, threshold });
    }

    let mut tuple = WordFamilyTuple {
        families: vec![vec![(Word::empty(), 1.0)]; n as usize],
        steps: 0,
        ratio_stats: (1.0, 1.0),
    };

    for step in 0..steps {
        // Locate the maximal-ratio word with deterministic tie-breaks.
        let mut best: Option<(f64, &Word, usize, usize)> = None;
        for (fi, fam) in tuple.families.iter().enumerate() {
            for (wi, (word, rho)) in fam.iter().enumerate() {
                let better = match best {
                    None => true,
                    Some((brho, bword, _, _)) => {
                        *rho > brho || (*rho == brho && word < bword)
                    }
                };
                if better {
                    best = Some((*rho, word, fi, wi));
                }
            }
        }
        let (rho_k, _, fi, wi) = best.expect("families are never empty");
        let (word_k, _) = tuple.families[fi].remove(wi);
        for letter in 0..ifs.len() as u8 {
            let child = word_k.child(letter);
            let child_rho = rho_k * ifs.map(letter as usize).ratio().unwrap();
            tuple.families[fi].push((child, child_rho));
        }
        tuple.steps = step + 1;

        let (min, max) = tuple.stats();
        tuple.ratio_stats = (min, max);
        let bound = rho_min * max;
        if min < bound * (1.0 - 1e-12) {
            return Err(SumsError::InvariantViolated { step: step + 1, min, bound });
        }
    }
    tuple.ratio_stats = tuple.stats();
    Ok(tuple)
}
