//! The greedy insertion process: starting from the first alphabet letter,
//! repeatedly insert at the rightmost possible position the earliest
//! possible letter that keeps the word square-free.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::word::{Extension, Word, WordError};

/// The next greedy insertion for a square-free word: maximal position first
/// (appending at the end is tried before any interior position), smallest
/// symbol among those. `None` means the word is extremal.
pub fn next_nonchalant(word: &Word, k: u8) -> Result<Option<Extension>, WordError> {
    if let Some(witness) = word.find_square() {
        return Err(WordError::NotSquareFree(witness));
    }
    Ok(next_step(word, k))
}

/// Greedy step without re-validating the input; callers maintain
/// square-freeness.
fn next_step(word: &Word, k: u8) -> Option<Extension> {
    (0..=word.len())
        .rev()
        .find_map(|position| {
            word.first_symbol_from(position, 0..k)
                .map(|symbol| Extension { position, symbol })
        })
}

/// A finished or suspended greedy run. Only the insertion steps are stored;
/// the word sequence is reconstructible from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonchalantRun {
    pub k: u8,
    pub steps: Vec<Extension>,
    /// True iff the run stopped because the last word is extremal.
    pub terminated: bool,
    final_word: Word,
}

impl NonchalantRun {
    /// Number of words in the sequence so far (the seed plus one per step).
    pub fn word_count(&self) -> usize {
        self.steps.len() + 1
    }

    pub fn final_word(&self) -> &Word {
        &self.final_word
    }

    /// The word sequence, replayed from the steps.
    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        let mut current = Word::from_letters(vec![0]);
        std::iter::once(current.clone()).chain(self.steps.iter().map(move |e| {
            current = current.apply_extension(e, self.k).expect("recorded step must apply");
            current.clone()
        }))
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint { k: self.k, steps: self.steps.clone() }
    }
}

/// Run the greedy process from the single-letter seed until the sequence
/// holds `max_words` words, or an extremal word stops it early.
pub fn run_nonchalant(k: u8, max_words: usize) -> NonchalantRun {
    let seed = NonchalantRun {
        k,
        steps: Vec::new(),
        terminated: false,
        final_word: Word::from_letters(vec![0]),
    };
    extend_run(seed, max_words)
}

/// Continue a run (fresh or resumed) until it holds `max_words` words.
pub fn extend_run(mut run: NonchalantRun, max_words: usize) -> NonchalantRun {
    debug_assert!(max_words >= 1);
    debug_assert!(run.final_word.is_square_free());
    while !run.terminated && run.word_count() < max_words {
        match next_step(&run.final_word, run.k) {
            Some(step) => {
                run.final_word =
                    run.final_word.apply_extension(&step, run.k).expect("step was validated");
                run.steps.push(step);
            }
            None => run.terminated = true,
        }
    }
    if !run.terminated && next_step(&run.final_word, run.k).is_none() {
        run.terminated = true;
    }
    run
}

/// Serialized form of a run: the alphabet size and the steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub k: u8,
    pub steps: Vec<Extension>,
}

impl Checkpoint {
    /// Rebuild the run state, validating every recorded step.
    pub fn restore(&self) -> Result<NonchalantRun, WordError> {
        let mut word = Word::from_letters(vec![0]);
        for step in &self.steps {
            if !word.extension_keeps_square_free(step, self.k)? {
                return Err(WordError::NotSquareFree(
                    word.apply_extension(step, self.k)?.find_square().expect("square exists"),
                ));
            }
            word = word.apply_extension(step, self.k)?;
        }
        Ok(NonchalantRun {
            k: self.k,
            steps: self.steps.clone(),
            terminated: false,
            final_word: word,
        })
    }
}

/// Telemetry over a finished run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub k: u8,
    pub words: usize,
    pub final_length: usize,
    pub terminated: bool,
    /// How far from the end each insertion happened (0 = appended).
    pub suffix_length_histogram: BTreeMap<usize, u64>,
    /// Insertion position per step.
    pub positions: Vec<usize>,
    /// Letter counts of the final word.
    pub letter_counts: Vec<u64>,
}

pub fn run_statistics(run: &NonchalantRun) -> RunSummary {
    let mut suffix_length_histogram = BTreeMap::new();
    let mut positions = Vec::with_capacity(run.steps.len());
    for (i, step) in run.steps.iter().enumerate() {
        // word length before step i is i + 1
        let suffix = (i + 1) - step.position;
        *suffix_length_histogram.entry(suffix).or_default() += 1;
        positions.push(step.position);
    }
    let mut letter_counts = vec![0u64; run.k as usize];
    for &l in run.final_word.letters() {
        letter_counts[l as usize] += 1;
    }
    RunSummary {
        k: run.k,
        words: run.word_count(),
        final_length: run.final_word.len(),
        terminated: run.terminated,
        suffix_length_histogram,
        positions,
        letter_counts,
    }
}
