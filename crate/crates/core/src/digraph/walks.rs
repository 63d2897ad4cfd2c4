//! Ternary driver words and the construction of arbitrarily long square-free
//! walks through a partitioned block digraph.
//!
//! The walk construction follows the driver word class by class: for each
//! step it appends a path that stays inside the current class and exits into
//! the next one, dropping the landing vertex (which opens the next leg). The
//! concatenation is square-free because the legs are words of distinct
//! letters over the three disjoint class alphabets, arranged by a square-free
//! ternary word.

use thiserror::Error;

use crate::word::{has_square, Word};

use super::partition::{confined_paths, verify_partition, ClassPartition};
use super::{is_square_free_walk, BlockDigraph};

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("length must be at least 1")]
    EmptyWord,
    #[error("no square-free ternary word of length {len} starts with {first:?} and ends with {last:?}")]
    InfeasibleEndpoints { len: usize, first: Option<u8>, last: Option<u8> },
    #[error("driver word letters must be < 3")]
    NotTernary,
    #[error("driver word must be square-free")]
    DriverNotSquareFree,
    #[error("expected one piece per driver letter ({expected}), got {got}")]
    PieceCountMismatch { expected: usize, got: usize },
    #[error("piece {index} must be a non-empty word of distinct letters over its class alphabet")]
    BadPiece { index: usize },
    #[error("class alphabets must be pairwise disjoint")]
    OverlappingClasses,
    #[error("partition does not satisfy the reachability property")]
    PartitionUnsatisfied,
    #[error("no square-free walk found for the requested endpoints")]
    Unreachable,
}

/// Prefix of the square-free fixed point of `a -> abc, b -> ac, c -> b`.
pub fn thue_word(min_len: usize) -> Word {
    let mut letters = vec![0u8];
    while letters.len() < min_len {
        letters = letters
            .iter()
            .flat_map(|&l| match l {
                0 => [0, 1, 2].as_slice(),
                1 => [0, 2].as_slice(),
                _ => [1].as_slice(),
            })
            .copied()
            .collect();
    }
    letters.truncate(min_len.max(1));
    Word::from_letters(letters)
}

/// Lazy lexicographic enumeration of square-free ternary words of a fixed
/// length, optionally with prescribed first and last letters.
struct SquareFreeTernary {
    len: usize,
    first: Option<u8>,
    last: Option<u8>,
    word: Vec<u8>,
    // next letter to try at each depth
    next: Vec<u8>,
    done: bool,
}

impl SquareFreeTernary {
    fn new(len: usize, first: Option<u8>, last: Option<u8>) -> SquareFreeTernary {
        SquareFreeTernary { len, first, last, word: Vec::new(), next: vec![0], done: len == 0 }
    }
}

impl Iterator for SquareFreeTernary {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        loop {
            let depth = self.word.len();
            let candidate = self.next[depth];
            if candidate >= 3 {
                // exhausted this depth; backtrack
                if self.word.is_empty() {
                    self.done = true;
                    return None;
                }
                self.word.pop();
                self.next.pop();
                continue;
            }
            self.next[depth] = candidate + 1;
            if self.first.is_some_and(|f| depth == 0 && candidate != f)
                || self.last.is_some_and(|l| depth + 1 == self.len && candidate != l)
            {
                continue;
            }
            self.word.push(candidate);
            if crate::word::square_containing(&self.word, depth).is_some() {
                self.word.pop();
                continue;
            }
            if self.word.len() == self.len {
                let result = Word::from_letters(self.word.clone());
                self.word.pop();
                return Some(result);
            }
            self.next.push(0);
        }
    }
}

/// A square-free ternary word of length `len` with optional endpoint
/// constraints. Unconstrained requests return the fixed-point prefix;
/// constrained ones the lexicographically least solution.
pub fn driver_word(len: usize, first: Option<u8>, last: Option<u8>) -> Result<Word, WalkError> {
    if len == 0 {
        return Err(WalkError::EmptyWord);
    }
    if first.map_or(false, |f| f >= 3) || last.map_or(false, |l| l >= 3) {
        return Err(WalkError::NotTernary);
    }
    if first.is_none() && last.is_none() {
        let word = thue_word(len);
        debug_assert!(word.is_square_free());
        return Ok(word);
    }
    SquareFreeTernary::new(len, first, last)
        .next()
        .ok_or(WalkError::InfeasibleEndpoints { len, first, last })
}

/// Substitute each letter of a square-free ternary word by a non-empty word
/// of pairwise distinct letters over that letter's class alphabet. With the
/// three class alphabets pairwise disjoint the result is square-free; the
/// output is re-checked and the check cannot fail on valid input.
pub fn substituted_word(
    driver: &Word,
    pieces: &[Word],
    classes: &[Vec<u8>; 3],
) -> Result<Word, WalkError> {
    if driver.letters().iter().any(|&l| l >= 3) {
        return Err(WalkError::NotTernary);
    }
    if !driver.is_square_free() {
        return Err(WalkError::DriverNotSquareFree);
    }
    if pieces.len() != driver.len() {
        return Err(WalkError::PieceCountMismatch { expected: driver.len(), got: pieces.len() });
    }
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            if a.iter().any(|x| b.contains(x)) {
                return Err(WalkError::OverlappingClasses);
            }
        }
    }
    for (index, (piece, &class)) in pieces.iter().zip(driver.letters()).enumerate() {
        let alphabet = &classes[class as usize];
        let distinct = piece
            .letters()
            .iter()
            .enumerate()
            .all(|(i, l)| !piece.letters()[..i].contains(l));
        if piece.is_empty() || !distinct || piece.letters().iter().any(|l| !alphabet.contains(l))
        {
            return Err(WalkError::BadPiece { index });
        }
    }
    let result = Word::concat(pieces.iter().cloned());
    assert!(result.is_square_free(), "substitution produced a square");
    Ok(result)
}

// Bounds on the backtracking searches; generous for any digraph of
// reasonable size, and hit only when the requested endpoints are genuinely
// awkward or unreachable.
const MAX_DRIVERS_PER_LENGTH: usize = 4096;
const MAX_LENGTH_BUMPS: usize = 16;

/// A square-free walk with at least `min_blocks` vertices, optionally with
/// prescribed first and last vertices. Legs are chosen by depth-first search
/// over the shortest confined paths, backtracking across driver words when a
/// prescribed endpoint turns out unreachable along the way.
pub fn long_square_free_walk(
    d: &BlockDigraph,
    partition: &ClassPartition,
    min_blocks: usize,
    start: Option<usize>,
    end: Option<usize>,
) -> Result<Vec<usize>, WalkError> {
    if !verify_partition(d, partition).satisfied {
        return Err(WalkError::PartitionUnsatisfied);
    }
    let first = start.map(|v| partition.class_of(v));
    let last = end.map(|v| partition.class_of(v));

    let mut len = min_blocks.max(1);
    if let (Some(s), Some(e)) = (start, end) {
        if s != e && len < 2 {
            len = 2;
        }
    }
    for _ in 0..MAX_LENGTH_BUMPS {
        let drivers: Box<dyn Iterator<Item = Word>> = if first.is_none() && last.is_none() {
            match driver_word(len, None, None) {
                Ok(w) => Box::new(std::iter::once(w)),
                Err(_) => Box::new(std::iter::empty()),
            }
        } else {
            Box::new(SquareFreeTernary::new(len, first, last).take(MAX_DRIVERS_PER_LENGTH))
        };
        for driver in drivers {
            if let Some(walk) = walk_for_driver(d, partition, driver.letters(), start, end) {
                debug_assert!(is_square_free_walk(&walk));
                debug_assert!(walk.len() >= min_blocks);
                return Ok(walk);
            }
        }
        len += 1;
    }
    Err(WalkError::Unreachable)
}

/// Depth-first search over leg landings for one fixed driver word.
fn walk_for_driver(
    d: &BlockDigraph,
    partition: &ClassPartition,
    driver: &[u8],
    start: Option<usize>,
    end: Option<usize>,
) -> Option<Vec<usize>> {
    let starts: Vec<usize> = match start {
        Some(v) => vec![v],
        None => (0..d.vertex_count())
            .filter(|&v| partition.class_of(v) == driver[0])
            .collect(),
    };

    let legs = driver.len() - 1;
    for v0 in starts {
        if legs == 0 {
            if end.map_or(true, |e| e == v0) {
                return Some(vec![v0]);
            }
            continue;
        }
        // Stack entry: remaining candidates for one leg plus the walk length
        // to restore when trying the next candidate.
        let mut walk: Vec<usize> = Vec::new();
        let mut stack: Vec<(std::vec::IntoIter<Vec<usize>>, usize)> =
            vec![(leg_options(d, partition, v0, driver, 0, end).into_iter(), 0)];
        while let Some(top) = stack.last_mut() {
            let mark = top.1;
            match top.0.next() {
                Some(path) => {
                    walk.truncate(mark);
                    walk.extend_from_slice(&path[..path.len() - 1]);
                    let landing = *path.last().unwrap();
                    let depth = stack.len();
                    if depth == legs {
                        if is_square_free_walk_with(&walk, landing) {
                            walk.push(landing);
                            return Some(walk);
                        }
                        continue;
                    }
                    let next_leg =
                        leg_options(d, partition, landing, driver, depth, end).into_iter();
                    stack.push((next_leg, walk.len()));
                }
                None => {
                    stack.pop();
                }
            }
        }
    }
    None
}

fn leg_options(
    d: &BlockDigraph,
    partition: &ClassPartition,
    from: usize,
    driver: &[u8],
    leg: usize,
    end: Option<usize>,
) -> Vec<Vec<usize>> {
    let target_class = driver[leg + 1];
    let exact = if leg + 2 == driver.len() { end } else { None };
    confined_paths(d, partition, from, target_class, exact)
}

fn is_square_free_walk_with(walk: &[usize], last: usize) -> bool {
    let mut full = Vec::with_capacity(walk.len() + 1);
    full.extend_from_slice(walk);
    full.push(last);
    !has_square(&full)
}
