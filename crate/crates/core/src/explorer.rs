//! Exhaustive and randomized search for extremal words: canonical
//! depth-first enumeration of square-free words with per-node extremality
//! tests, a plain census used as an independent cross-check, and budgeted
//! probe strategies for alphabets where no extremal word is expected.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::word::{square_containing, Word};

/// Default seed for the randomized probe strategies.
pub const DEFAULT_PROBE_SEED: u64 = 0x5175_6164_5346;

/// Exact number of square-free words over `k` letters for each length
/// `1..=max_len`, by plain depth-first enumeration with incremental square
/// pruning. Counts all words, not canonical representatives; the canonical
/// search is cross-checked against this.
pub fn census_square_free(k: u8, max_len: usize) -> Vec<u64> {
    let mut counts = vec![0u64; max_len];
    let mut buf = Vec::with_capacity(max_len);
    census_dfs(&mut buf, k, max_len, &mut counts);
    counts
}

fn census_dfs(buf: &mut Vec<u8>, k: u8, max_len: usize, counts: &mut [u64]) {
    if !buf.is_empty() {
        counts[buf.len() - 1] += 1;
    }
    if buf.len() == max_len {
        return;
    }
    for letter in 0..k {
        buf.push(letter);
        if square_containing(buf, buf.len() - 1).is_none() {
            census_dfs(buf, k, max_len, counts);
        }
        buf.pop();
    }
}

/// Whether the word admits no square-free single-letter extension. Scans
/// positions from the middle outward (interior insertions succeed most often
/// on extendable words) and short-circuits on the first success; the result
/// does not depend on the order. Every candidate tested increments
/// `checks`.
pub fn is_extremal_word(letters: &[u8], k: u8, checks: &mut u64) -> bool {
    let n = letters.len();
    let mut buf = Vec::with_capacity(n + 1);
    let mut try_position = |position: usize, checks: &mut u64| -> bool {
        buf.clear();
        buf.extend_from_slice(&letters[..position]);
        buf.push(0);
        buf.extend_from_slice(&letters[position..]);
        for symbol in 0..k {
            *checks += 1;
            buf[position] = symbol;
            if square_containing(&buf, position).is_none() {
                return true;
            }
        }
        false
    };
    let mid = (n + 1) / 2;
    for offset in 0..=mid {
        if mid + offset <= n && try_position(mid + offset, checks) {
            return false;
        }
        if offset != 0 && mid >= offset && try_position(mid - offset, checks) {
            return false;
        }
    }
    true
}

/// An extremal word found by a search, kept in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalHit {
    pub length: usize,
    pub word: Word,
}

/// Outcome of one search or probe. For exhaustive searches `counts[i]` is
/// the number of canonical square-free words of length `i+1`; for probes it
/// is the number of words of that length visited. Wall time is measured but
/// excluded from comparisons and serialization so reports are reproducible.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub alphabet_size: u8,
    pub max_len: usize,
    pub exhaustive: bool,
    pub counts: Vec<u64>,
    pub extremal: Vec<ExtremalHit>,
    pub nodes: u64,
    pub extension_checks: u64,
    #[serde(skip)]
    pub wall: Duration,
}

impl PartialEq for SearchReport {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet_size == other.alphabet_size
            && self.max_len == other.max_len
            && self.exhaustive == other.exhaustive
            && self.counts == other.counts
            && self.extremal == other.extremal
            && self.nodes == other.nodes
            && self.extension_checks == other.extension_checks
    }
}

impl Eq for SearchReport {}

impl SearchReport {
    /// Minimal length at which an extremal word was found, with all
    /// witnesses of that length.
    pub fn shortest_extremal(&self) -> Option<(usize, Vec<Word>)> {
        let min = self.extremal.iter().map(|h| h.length).min()?;
        let witnesses =
            self.extremal.iter().filter(|h| h.length == min).map(|h| h.word.clone()).collect();
        Some((min, witnesses))
    }
}

/// Partial tallies for a slice of the search tree; merged in prefix order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubReport {
    pub counts: Vec<u64>,
    pub extremal: Vec<ExtremalHit>,
    pub nodes: u64,
    pub extension_checks: u64,
}

impl SubReport {
    pub fn new(max_len: usize) -> SubReport {
        SubReport { counts: vec![0; max_len], ..SubReport::default() }
    }

    pub fn absorb(&mut self, other: &SubReport) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.extremal.extend(other.extremal.iter().cloned());
        self.nodes += other.nodes;
        self.extension_checks += other.extension_checks;
    }
}

/// A canonical prefix of the search tree: the word plus how many distinct
/// letters it uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchPrefix {
    pub word: Word,
    pub used: u8,
}

/// Exhaustive canonical search: square-free words with the first letter
/// fixed and new letters introduced in alphabet order, each node tested for
/// extremality. Subtrees below a fixed split depth run in parallel when the
/// `parallel` feature is active; reports merge in prefix order, so the
/// result is identical for any worker count.
pub fn search_extremal(k: u8, max_len: usize) -> SearchReport {
    let start = Instant::now();
    let mut merged = SubReport::new(max_len);
    let prefixes = split_prefixes(k, max_len, &mut merged);

    #[cfg(feature = "parallel")]
    let subs: Vec<SubReport> = {
        use rayon::prelude::*;
        prefixes.par_iter().map(|p| search_subtree(p, k, max_len)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let subs: Vec<SubReport> =
        prefixes.iter().map(|p| search_subtree(p, k, max_len)).collect();

    for sub in &subs {
        merged.absorb(sub);
    }
    finish_report(k, max_len, true, merged, start)
}

/// Sequential twin of [`search_extremal`], sharing the same traversal and
/// merge order.
pub fn search_extremal_seq(k: u8, max_len: usize) -> SearchReport {
    let start = Instant::now();
    let mut merged = SubReport::new(max_len);
    let prefixes = split_prefixes(k, max_len, &mut merged);
    for prefix in &prefixes {
        merged.absorb(&search_subtree(prefix, k, max_len));
    }
    finish_report(k, max_len, true, merged, start)
}

/// Assemble a [`SearchReport`] from merged tallies.
pub fn finish_report(
    k: u8,
    max_len: usize,
    exhaustive: bool,
    sub: SubReport,
    start: Instant,
) -> SearchReport {
    SearchReport {
        alphabet_size: k,
        max_len,
        exhaustive,
        counts: sub.counts,
        extremal: sub.extremal,
        nodes: sub.nodes,
        extension_checks: sub.extension_checks,
        wall: start.elapsed(),
    }
}

/// Depth at which the canonical tree is split into independent work items.
const SPLIT_DEPTH: usize = 10;

/// Enumerate the canonical prefixes at the split depth in lexicographic
/// order, accounting for the shallower nodes (which belong to no subtree) in
/// `shallow`.
pub fn split_prefixes(k: u8, max_len: usize, shallow: &mut SubReport) -> Vec<SearchPrefix> {
    let depth = SPLIT_DEPTH.min(max_len);
    let mut prefixes = Vec::new();
    let mut buf = Vec::new();
    prefix_dfs(&mut buf, 0, k, depth, max_len, shallow, &mut prefixes);
    prefixes
}

fn prefix_dfs(
    buf: &mut Vec<u8>,
    used: u8,
    k: u8,
    depth: usize,
    max_len: usize,
    shallow: &mut SubReport,
    prefixes: &mut Vec<SearchPrefix>,
) {
    if buf.len() == depth {
        prefixes.push(SearchPrefix { word: Word::from_letters(buf.clone()), used });
        return;
    }
    if !buf.is_empty() {
        shallow.nodes += 1;
        shallow.counts[buf.len() - 1] += 1;
        if is_extremal_word(buf, k, &mut shallow.extension_checks) {
            shallow
                .extremal
                .push(ExtremalHit { length: buf.len(), word: Word::from_letters(buf.clone()) });
        }
    }
    for letter in 0..k.min(used + 1) {
        buf.push(letter);
        if square_containing(buf, buf.len() - 1).is_none() {
            prefix_dfs(buf, used.max(letter + 1), k, depth, max_len, shallow, prefixes);
        }
        buf.pop();
    }
}

/// Run one canonical subtree to completion.
pub fn search_subtree(prefix: &SearchPrefix, k: u8, max_len: usize) -> SubReport {
    let mut sub = SubReport::new(max_len);
    let mut buf = prefix.word.letters().to_vec();
    canonical_dfs(&mut buf, prefix.used, k, max_len, &mut sub);
    sub
}

fn canonical_dfs(buf: &mut Vec<u8>, used: u8, k: u8, max_len: usize, sub: &mut SubReport) {
    if !buf.is_empty() {
        sub.nodes += 1;
        sub.counts[buf.len() - 1] += 1;
        if is_extremal_word(buf, k, &mut sub.extension_checks) {
            sub.extremal
                .push(ExtremalHit { length: buf.len(), word: Word::from_letters(buf.clone()) });
        }
    }
    if buf.len() == max_len {
        return;
    }
    for letter in 0..k.min(used + 1) {
        buf.push(letter);
        if square_containing(buf, buf.len() - 1).is_none() {
            canonical_dfs(buf, used.max(letter + 1), k, max_len, sub);
        }
        buf.pop();
    }
}

/// Minimal length admitting an extremal word over `k` letters, together
/// with every canonical witness of that length; `None` if there is none of
/// length at most `max_len`.
pub fn shortest_extremal(k: u8, max_len: usize) -> Option<(usize, Vec<Word>)> {
    search_extremal(k, max_len).shortest_extremal()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeStrategy {
    /// Grow random square-free words; fully test the dead ends.
    RandomWalk,
    /// Greedy rightmost insertion from random square-free seed words.
    NonchalantSeeded,
    /// Depth-first exploration with randomized branch order.
    DfsSampling,
}

impl std::str::FromStr for ProbeStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<ProbeStrategy, String> {
        match s {
            "random-walk" => Ok(ProbeStrategy::RandomWalk),
            "nonchalant-seeded" => Ok(ProbeStrategy::NonchalantSeeded),
            "dfs-sampling" => Ok(ProbeStrategy::DfsSampling),
            _ => Err(format!("unknown strategy {s:?}")),
        }
    }
}

/// Non-exhaustive randomized probe for extremal words, stopping after
/// `budget` extension checks. Any hit is re-verified with the full
/// classification before being reported. Deterministic for a fixed seed.
pub fn probe_extremal(
    k: u8,
    max_len: usize,
    strategy: ProbeStrategy,
    budget: u64,
    seed: u64,
) -> SearchReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sub = SubReport::new(max_len);
    if budget > 0 {
        match strategy {
            ProbeStrategy::RandomWalk => probe_random_walk(k, max_len, budget, &mut rng, &mut sub),
            ProbeStrategy::NonchalantSeeded => {
                probe_nonchalant_seeded(k, max_len, budget, &mut rng, &mut sub)
            }
            ProbeStrategy::DfsSampling => probe_dfs(k, max_len, budget, &mut rng, &mut sub),
        }
        sub.extremal.retain(|hit| {
            hit.word.classify(k).map(|r| r.status == crate::word::Status::Extremal).unwrap_or(false)
        });
        // randomized strategies may revisit a word after restarts
        sub.extremal.sort_by(|a, b| (a.length, &a.word).cmp(&(b.length, &b.word)));
        sub.extremal.dedup();
    }
    finish_report(k, max_len, false, sub, start)
}

fn visit(buf: &[u8], k: u8, sub: &mut SubReport) -> bool {
    sub.nodes += 1;
    sub.counts[buf.len() - 1] += 1;
    if is_extremal_word(buf, k, &mut sub.extension_checks) {
        sub.extremal
            .push(ExtremalHit { length: buf.len(), word: Word::from_letters(buf.to_vec()) });
        return true;
    }
    false
}

fn probe_random_walk(
    k: u8,
    max_len: usize,
    budget: u64,
    rng: &mut ChaCha8Rng,
    sub: &mut SubReport,
) {
    let mut buf: Vec<u8> = Vec::with_capacity(max_len);
    let mut order: Vec<u8> = (0..k).collect();
    while sub.extension_checks < budget {
        if buf.is_empty() {
            buf.push(rng.random_range(0..k));
        }
        if buf.len() >= max_len {
            buf.clear();
            continue;
        }
        order.shuffle(rng);
        let mut grew = false;
        for &letter in &order {
            sub.extension_checks += 1;
            buf.push(letter);
            if square_containing(&buf, buf.len() - 1).is_none() {
                grew = true;
                break;
            }
            buf.pop();
        }
        if !grew {
            // right-maximal word: the only candidates for extremality
            visit(&buf, k, sub);
            buf.clear();
        }
    }
}

fn probe_nonchalant_seeded(
    k: u8,
    max_len: usize,
    budget: u64,
    rng: &mut ChaCha8Rng,
    sub: &mut SubReport,
) {
    'outer: while sub.extension_checks < budget {
        // random square-free seed of modest length
        let target = rng.random_range(1..=24.min(max_len));
        let mut word = Vec::new();
        while word.len() < target {
            let letter = rng.random_range(0..k);
            sub.extension_checks += 1;
            word.push(letter);
            if square_containing(&word, word.len() - 1).is_some() {
                word.pop();
            }
            if sub.extension_checks >= budget {
                break 'outer;
            }
        }
        let mut current = Word::from_letters(word);
        while current.len() < max_len && sub.extension_checks < budget {
            let extremal = is_extremal_word(current.letters(), k, &mut sub.extension_checks);
            sub.nodes += 1;
            sub.counts[current.len() - 1] += 1;
            if extremal {
                sub.extremal.push(ExtremalHit { length: current.len(), word: current.clone() });
                break;
            }
            match crate::nonchalant::next_nonchalant(&current, k).expect("stays square-free") {
                Some(step) => current = current.apply_extension(&step, k).expect("validated"),
                None => break,
            }
        }
    }
}

fn probe_dfs(k: u8, max_len: usize, budget: u64, rng: &mut ChaCha8Rng, sub: &mut SubReport) {
    // explicit stack of shuffled letter orders
    let mut buf: Vec<u8> = Vec::new();
    let mut stack: Vec<Vec<u8>> = vec![shuffled_letters(k, rng)];
    while sub.extension_checks < budget {
        match stack.last_mut().and_then(|options| options.pop()) {
            Some(letter) => {
                sub.extension_checks += 1;
                buf.push(letter);
                if square_containing(&buf, buf.len() - 1).is_some() {
                    buf.pop();
                    continue;
                }
                visit(&buf, k, sub);
                if buf.len() < max_len {
                    stack.push(shuffled_letters(k, rng));
                } else {
                    buf.pop();
                }
            }
            None => {
                stack.pop();
                if buf.pop().is_none() {
                    // full tree exhausted below max_len
                    if stack.is_empty() {
                        stack.push(shuffled_letters(k, rng));
                    }
                }
            }
        }
    }
}

fn shuffled_letters(k: u8, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut letters: Vec<u8> = (0..k).collect();
    letters.shuffle(rng);
    letters
}
