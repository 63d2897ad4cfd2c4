//! Words over small ordered alphabets, square detection, single-letter
//! extensions, and the extendable / nearly-extremal / extremal classification.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest supported alphabet ('a'..='z' in the canonical rendering).
pub const MAX_ALPHABET: usize = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("alphabet symbols must be distinct (duplicate {0:?})")]
    DuplicateSymbol(char),
    #[error("alphabet size must be between 1 and {MAX_ALPHABET}")]
    BadAlphabetSize,
    #[error("position {position} out of range for word of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("letter index {letter} out of range for {k}-letter alphabet")]
    LetterOutOfRange { letter: u8, k: u8 },
    #[error("word contains a square at {}..{} (half-length {})", .0.start, .0.start + 2 * .0.half_len, .0.half_len)]
    NotSquareFree(SquareWitness),
    #[error("permutation is not a bijection on letter indices")]
    NotABijection,
}

/// An ordered alphabet of distinct printable symbols. Letter indices used by
/// [`Word`] refer to positions in this order; the order is what "earliest
/// possible letter" means everywhere in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    /// The canonical `k`-letter alphabet `a, b, c, ...`.
    ///
    /// Panics if `k` is zero or exceeds [`MAX_ALPHABET`].
    pub fn canonical(k: usize) -> Alphabet {
        assert!(k >= 1 && k <= MAX_ALPHABET, "alphabet size {k} out of range");
        Alphabet { symbols: (0..k).map(|i| (b'a' + i as u8) as char).collect() }
    }

    pub fn from_symbols(symbols: impl IntoIterator<Item = char>) -> Result<Alphabet, WordError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() || symbols.len() > MAX_ALPHABET {
            return Err(WordError::BadAlphabetSize);
        }
        for (i, &c) in symbols.iter().enumerate() {
            if symbols[..i].contains(&c) {
                return Err(WordError::DuplicateSymbol(c));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Alphabet consisting of the distinct symbols of `text`, in sorted order.
    pub fn infer(text: &str) -> Result<Alphabet, WordError> {
        let mut symbols: Vec<char> = text.chars().collect();
        symbols.sort_unstable();
        symbols.dedup();
        Alphabet::from_symbols(symbols)
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn k(&self) -> u8 {
        self.symbols.len() as u8
    }

    pub fn symbol(&self, index: u8) -> char {
        self.symbols[index as usize]
    }

    pub fn index_of(&self, symbol: char) -> Option<u8> {
        self.symbols.iter().position(|&c| c == symbol).map(|i| i as u8)
    }

    pub fn parse(&self, text: &str) -> Result<Word, WordError> {
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            letters.push(self.index_of(c).ok_or(WordError::UnknownSymbol(c))?);
        }
        Ok(Word { letters })
    }

    pub fn render(&self, word: &Word) -> String {
        word.letters.iter().map(|&l| self.symbol(l)).collect()
    }
}

/// A finite word stored as letter indices into some alphabet.
///
/// `Display`, `FromStr` and the serde impls use the canonical rendering
/// (index 0 is `a`, index 1 is `b`, ...).
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    pub fn new() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<u8>) -> Word {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn push(&mut self, letter: u8) {
        self.letters.push(letter);
    }

    pub fn concat(words: impl IntoIterator<Item = Word>) -> Word {
        let mut letters = Vec::new();
        for w in words {
            letters.extend_from_slice(&w.letters);
        }
        Word { letters }
    }

    /// Leftmost square factor, ties broken by shorter half-length.
    pub fn find_square(&self) -> Option<SquareWitness> {
        find_square_in(&self.letters)
    }

    pub fn is_square_free(&self) -> bool {
        !has_square(&self.letters)
    }

    fn check_extension(&self, e: &Extension, k: u8) -> Result<(), WordError> {
        if e.position > self.len() {
            return Err(WordError::PositionOutOfRange { position: e.position, len: self.len() });
        }
        if e.symbol >= k {
            return Err(WordError::LetterOutOfRange { letter: e.symbol, k });
        }
        Ok(())
    }

    /// The word with `e.symbol` inserted at `e.position`.
    pub fn apply_extension(&self, e: &Extension, k: u8) -> Result<Word, WordError> {
        self.check_extension(e, k)?;
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.extend_from_slice(&self.letters[..e.position]);
        letters.push(e.symbol);
        letters.extend_from_slice(&self.letters[e.position..]);
        Ok(Word { letters })
    }

    /// Whether applying `e` to this word yields a square-free word. Only
    /// squares whose span covers the inserted position are inspected — any
    /// square created by the insertion must contain it — so the answer is
    /// meaningful only when `self` is already square-free.
    pub fn extension_keeps_square_free(&self, e: &Extension, k: u8) -> Result<bool, WordError> {
        self.check_extension(e, k)?;
        Ok(self.first_symbol_from(e.position, e.symbol..=e.symbol).is_some())
    }

    /// Smallest symbol in `symbols` whose insertion at `position` keeps the
    /// word square-free, sharing one scratch buffer across the candidates.
    pub fn first_symbol_from(
        &self,
        position: usize,
        symbols: impl IntoIterator<Item = u8>,
    ) -> Option<u8> {
        let mut buf = Vec::with_capacity(self.len() + 1);
        buf.extend_from_slice(&self.letters[..position]);
        buf.push(0);
        buf.extend_from_slice(&self.letters[position..]);
        for symbol in symbols {
            buf[position] = symbol;
            if square_containing(&buf, position).is_none() {
                return Some(symbol);
            }
        }
        None
    }

    /// All square-free extensions over a `k`-letter alphabet, ordered by
    /// position, then by symbol.
    pub fn square_free_extensions(&self, k: u8) -> Result<Vec<Extension>, WordError> {
        if k == 0 || k as usize > MAX_ALPHABET {
            return Err(WordError::BadAlphabetSize);
        }
        if let Some(witness) = self.find_square() {
            return Err(WordError::NotSquareFree(witness));
        }
        Ok(self.extensions_inner(k))
    }

    fn extensions_at(&self, position: usize, k: u8) -> Vec<Extension> {
        let mut buf = Vec::with_capacity(self.len() + 1);
        buf.extend_from_slice(&self.letters[..position]);
        buf.push(0);
        buf.extend_from_slice(&self.letters[position..]);
        let mut found = Vec::new();
        for symbol in 0..k {
            buf[position] = symbol;
            if square_containing(&buf, position).is_none() {
                found.push(Extension { position, symbol });
            }
        }
        found
    }

    #[cfg(feature = "parallel")]
    fn extensions_inner(&self, k: u8) -> Vec<Extension> {
        use rayon::prelude::*;
        const PAR_MIN_LEN: usize = 1024;
        if self.len() >= PAR_MIN_LEN {
            (0..=self.len())
                .into_par_iter()
                .flat_map_iter(|p| self.extensions_at(p, k))
                .collect()
        } else {
            (0..=self.len()).flat_map(|p| self.extensions_at(p, k)).collect()
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn extensions_inner(&self, k: u8) -> Vec<Extension> {
        (0..=self.len()).flat_map(|p| self.extensions_at(p, k)).collect()
    }

    /// Classify a square-free word by its square-free extensions.
    pub fn classify(&self, k: u8) -> Result<ExtensionReport, WordError> {
        let extensions = self.square_free_extensions(k)?;
        let status = if extensions.is_empty() {
            Status::Extremal
        } else if extensions.iter().all(|e| e.position == 0 || e.position == self.len()) {
            Status::NearlyExtremal
        } else {
            Status::Extendable
        };
        Ok(ExtensionReport { word: self.clone(), status, extensions })
    }

    /// Letterwise image under a permutation of letter indices.
    pub fn permuted(&self, perm: &[u8]) -> Result<Word, WordError> {
        let k = perm.len();
        let mut seen = vec![false; k];
        for &img in perm {
            if (img as usize) >= k || seen[img as usize] {
                return Err(WordError::NotABijection);
            }
            seen[img as usize] = true;
        }
        let letters = self
            .letters
            .iter()
            .map(|&l| {
                if (l as usize) < k { Ok(perm[l as usize]) } else { Err(WordError::NotABijection) }
            })
            .collect::<Result<_, _>>()?;
        Ok(Word { letters })
    }

    pub fn reversed(&self) -> Word {
        Word { letters: self.letters.iter().rev().copied().collect() }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{}", (b'a' + l) as char)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            if !c.is_ascii_lowercase() {
                return Err(WordError::UnknownSymbol(c));
            }
            letters.push(c as u8 - b'a');
        }
        Ok(Word { letters })
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Word, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A square factor: the two halves `w[start..start+half_len]` and
/// `w[start+half_len..start+2*half_len]` are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareWitness {
    pub start: usize,
    pub half_len: usize,
}

/// A single-letter insertion: the extended word is
/// `w[..position] · symbol · w[position..]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Extension {
    pub position: usize,
    pub symbol: u8,
}

impl Serialize for Extension {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Extension", 2)?;
        s.serialize_field("position", &self.position)?;
        s.serialize_field("symbol", &((b'a' + self.symbol) as char))?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for Extension {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Extension, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            position: usize,
            symbol: char,
        }
        let raw = Raw::deserialize(deserializer)?;
        if !raw.symbol.is_ascii_lowercase() {
            return Err(serde::de::Error::custom("symbol must be a lowercase letter"));
        }
        Ok(Extension { position: raw.position, symbol: raw.symbol as u8 - b'a' })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "EXTENDABLE")]
    Extendable,
    #[serde(rename = "NEARLY_EXTREMAL")]
    NearlyExtremal,
    #[serde(rename = "EXTREMAL")]
    Extremal,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Extendable => "EXTENDABLE",
            Status::NearlyExtremal => "NEARLY_EXTREMAL",
            Status::Extremal => "EXTREMAL",
        };
        f.write_str(s)
    }
}

/// Classification result: the word, its status, and every square-free
/// extension. `Extremal` means the list is empty; `NearlyExtremal` means it
/// is non-empty but confined to the two end positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub word: Word,
    pub status: Status,
    pub extensions: Vec<Extension>,
}

/// Leftmost square in a slice, ties broken by shorter half-length.
///
/// Shift scan: for each candidate half-length `d`, positions `i` with
/// `s[i] == s[i+d]` are found in one pass; a run of `d` such positions
/// starting at `i` is exactly a square `(i, d)`.
pub fn find_square_in<T: Eq>(s: &[T]) -> Option<SquareWitness> {
    let n = s.len();
    let mut best: Option<SquareWitness> = None;
    for half in 1..=n / 2 {
        let mut run = 0usize;
        let mut start_for_half = None;
        for i in (0..n - half).rev() {
            if s[i] == s[i + half] {
                run += 1;
                if run >= half {
                    start_for_half = Some(i);
                }
            } else {
                run = 0;
            }
        }
        if let Some(start) = start_for_half {
            if best.map_or(true, |b| (start, half) < (b.start, b.half_len)) {
                best = Some(SquareWitness { start, half_len: half });
            }
        }
    }
    best
}

/// Existence-only variant of [`find_square_in`].
pub fn has_square<T: Eq>(s: &[T]) -> bool {
    let n = s.len();
    for half in 1..=n / 2 {
        let mut run = 0usize;
        for i in (0..n - half).rev() {
            if s[i] == s[i + half] {
                run += 1;
                if run >= half {
                    return true;
                }
            } else {
                run = 0;
            }
        }
    }
    false
}

/// First square (ordered by half-length, then start) whose span contains
/// index `pos`. Sound as a full square check only when the word minus
/// position `pos` is known square-free.
pub fn square_containing<T: Eq>(s: &[T], pos: usize) -> Option<SquareWitness> {
    let n = s.len();
    debug_assert!(pos < n);
    for half in 1..=n / 2 {
        let lo = pos.saturating_sub(2 * half - 1);
        let hi = pos.min(n - 2 * half);
        for start in lo..=hi {
            if s[start..start + half] == s[start + half..start + 2 * half] {
                return Some(SquareWitness { start, half_len: half });
            }
        }
    }
    None
}
