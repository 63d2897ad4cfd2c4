//! The concrete certified construction: the nearly extremal seed word N, its
//! twelve permutation/reversal variants, the block digraph over them, the
//! bracketing words P and S, and generators for arbitrarily long nearly
//! extremal and extremal ternary words.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::digraph::{
    long_square_free_walk, verify_partition, verify_thue, BlockDigraph, ClassPartition,
    DigraphError, PartitionCertificate, ThueCertificate, WalkError,
};
use crate::word::{Alphabet, Extension, ExtensionReport, Status, Word, WordError};

/// The 41-letter nearly extremal seed word.
pub const N_WORD: &str = "abacbabcabacbcacbabcabacabcbabcabacbcabcb";
/// 28-letter prefix word: `P · N` opens every generated extremal word.
pub const P_WORD: &str = "cbacbcabacbabcabacbcabcbacbc";
/// 33-letter suffix word: `N · S` closes every generated extremal word.
pub const S_WORD: &str = "acabcacbabcabacbcabcbacabacbcabcb";
/// A shortest extremal ternary word (25 letters).
pub const H_WORD: &str = "abcabacbcabcbabcabacbcabc";

/// The six alphabet permutations, named by their nontrivial cycle, in the
/// vertex order used throughout: identity, (ab), (ac), (bc), (abc), (acb).
const PERMUTATIONS: [(&str, [u8; 3]); 6] = [
    ("", [0, 1, 2]),
    ("ab", [1, 0, 2]),
    ("ac", [2, 1, 0]),
    ("bc", [0, 2, 1]),
    ("abc", [1, 2, 0]),
    ("acb", [2, 0, 1]),
];

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("minimum length for {kind} words is {min}, got {got}")]
    MinLength { kind: &'static str, min: usize, got: usize },
    #[error("digraph reconstruction failed: {0}")]
    Reconstruction(String),
    #[error("generated word failed re-verification: {0}")]
    Verification(String),
    #[error("fixture {path}: {message}")]
    Fixture { path: String, message: String },
}

/// The four named words of the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalWords {
    pub n: Word,
    pub p: Word,
    pub s: Word,
    pub h: Word,
}

impl CanonicalWords {
    pub fn builtin() -> CanonicalWords {
        CanonicalWords {
            n: N_WORD.parse().unwrap(),
            p: P_WORD.parse().unwrap(),
            s: S_WORD.parse().unwrap(),
            h: H_WORD.parse().unwrap(),
        }
    }

    /// Parse the `canonical_words.txt` fixture format: one `NAME word` line
    /// per entry, requiring exactly N, P, S, and H.
    pub fn parse(text: &str) -> Result<CanonicalWords, ConstructionError> {
        let mut n = None;
        let mut p = None;
        let mut s = None;
        let mut h = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (name, word) = (fields.next(), fields.next());
            let bad = |message: &str| ConstructionError::Fixture {
                path: "canonical_words".into(),
                message: message.into(),
            };
            let word: Word = word
                .ok_or_else(|| bad("expected: NAME word"))?
                .parse()
                .map_err(|e: WordError| bad(&e.to_string()))?;
            match name {
                Some("N") => n = Some(word),
                Some("P") => p = Some(word),
                Some("S") => s = Some(word),
                Some("H") => h = Some(word),
                _ => return Err(bad("unknown word name")),
            }
        }
        let missing = |what: &str| ConstructionError::Fixture {
            path: "canonical_words".into(),
            message: format!("missing word {what}"),
        };
        Ok(CanonicalWords {
            n: n.ok_or_else(|| missing("N"))?,
            p: p.ok_or_else(|| missing("P"))?,
            s: s.ok_or_else(|| missing("S"))?,
            h: h.ok_or_else(|| missing("H"))?,
        })
    }

    pub fn to_text(&self) -> String {
        format!("N {}\nP {}\nS {}\nH {}\n", self.n, self.p, self.s, self.h)
    }
}

/// The twelve blocks: N under the six alphabet permutations, and their
/// reversals. Reversed variants carry an `r` prefix (`rN_ab` is the reversal
/// of `N_ab`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockFamily {
    entries: Vec<(String, Word)>,
}

impl BlockFamily {
    pub fn entries(&self) -> &[(String, Word)] {
        &self.entries
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.entries.iter().map(|(_, w)| w)
    }

    pub fn get(&self, name: &str) -> Option<&Word> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, w)| w)
    }
}

/// Generate the block family from a seed word.
pub fn make_blocks_from(seed: &Word) -> BlockFamily {
    let mut entries = Vec::with_capacity(12);
    for (suffix, perm) in &PERMUTATIONS {
        let name = if suffix.is_empty() { "N".to_string() } else { format!("N_{suffix}") };
        entries.push((name, seed.permuted(perm).expect("fixed bijections")));
    }
    for (suffix, perm) in &PERMUTATIONS {
        let name = if suffix.is_empty() { "rN".to_string() } else { format!("rN_{suffix}") };
        entries.push((name, seed.permuted(perm).expect("fixed bijections").reversed()));
    }
    BlockFamily { entries }
}

pub fn make_blocks() -> BlockFamily {
    make_blocks_from(&CanonicalWords::builtin().n)
}

/// Build a block digraph on `vertices` whose short square-free walks all
/// have square-free images: starting from every edge whose two-block
/// concatenation is square-free, edges are greedily removed (most violating
/// first) until the three-vertex walk condition holds.
pub fn reconstruct_thue_digraph(
    alphabet: Alphabet,
    vertices: Vec<(String, Word)>,
) -> Result<BlockDigraph, ConstructionError> {
    let blocks: Vec<Word> = vertices.iter().map(|(_, w)| w.clone()).collect();
    let n = blocks.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v {
                let concat = Word::concat([blocks[u].clone(), blocks[v].clone()]);
                if concat.is_square_free() {
                    edges.push((u, v));
                }
            }
        }
    }

    loop {
        let d = BlockDigraph::new(alphabet.clone(), vertices.clone(), edges.clone())?;
        let violations = crate::digraph::check_condition_short_walks(&d);
        if violations.is_empty() {
            return Ok(d);
        }
        // Count how many violating walks traverse each edge, and drop the
        // worst offender; ties resolve to the lexicographically smallest
        // edge so the outcome does not depend on iteration order.
        let mut counts: std::collections::BTreeMap<(usize, usize), usize> =
            std::collections::BTreeMap::new();
        for violation in &violations {
            for pair in violation.walk.windows(2) {
                *counts.entry((pair[0], pair[1])).or_default() += 1;
            }
        }
        let (&worst, _) = counts
            .iter()
            .max_by_key(|&(edge, &count)| (count, std::cmp::Reverse(*edge)))
            .expect("violations must involve edges");
        edges.retain(|&e| e != worst);
        if edges.is_empty() {
            return Err(ConstructionError::Reconstruction(
                "pruned every edge without satisfying the short-walk condition".into(),
            ));
        }
    }
}

/// The published three-way partition of the block family, keyed by vertex
/// name.
pub fn published_partition(d: &BlockDigraph) -> Result<ClassPartition, ConstructionError> {
    const CLASSES: [&[&str]; 3] = [
        &["N", "N_bc", "rN", "rN_bc"],
        &["N_ab", "N_abc", "rN_ab", "rN_abc"],
        &["N_ac", "N_acb", "rN_ac", "rN_acb"],
    ];
    let mut labels = vec![u8::MAX; d.vertex_count()];
    for (label, names) in CLASSES.iter().enumerate() {
        for name in *names {
            let v = d.index_of(name).ok_or_else(|| {
                ConstructionError::Reconstruction(format!("vertex {name} missing from digraph"))
            })?;
            labels[v] = label as u8;
        }
    }
    if labels.iter().any(|&c| c == u8::MAX) {
        return Err(ConstructionError::Reconstruction(
            "partition does not cover the vertex set".into(),
        ));
    }
    Ok(ClassPartition::new(labels))
}

/// The reconstructed block digraph together with its condition certificate.
pub fn build_dn() -> Result<(BlockDigraph, ThueCertificate), ConstructionError> {
    let family = make_blocks();
    let d = reconstruct_thue_digraph(Alphabet::canonical(3), family.entries().to_vec())?;
    let cert = verify_thue(&d);
    if !cert.passed() {
        return Err(ConstructionError::Reconstruction(
            "reconstructed digraph fails the certificate".into(),
        ));
    }
    let partition = published_partition(&d)?;
    if !verify_partition(&d, &partition).satisfied {
        return Err(ConstructionError::Reconstruction(
            "reconstructed digraph does not satisfy the published partition property".into(),
        ));
    }
    Ok((d, cert))
}

/// `build_dn` extended by the two bracket vertices P and S, joined by the
/// edges P -> N and N -> S only.
pub fn build_dn_star() -> Result<(BlockDigraph, ThueCertificate), ConstructionError> {
    let (dn, _) = build_dn()?;
    extend_to_star(&dn, &CanonicalWords::builtin())
}

fn extend_to_star(
    dn: &BlockDigraph,
    words: &CanonicalWords,
) -> Result<(BlockDigraph, ThueCertificate), ConstructionError> {
    let n = dn.index_of("N").ok_or_else(|| {
        ConstructionError::Reconstruction("vertex N missing from digraph".into())
    })?;
    let p = dn.vertex_count();
    let s = p + 1;
    let star = dn.extended(
        vec![("P".into(), words.p.clone()), ("S".into(), words.s.clone())],
        vec![(p, n), (n, s)],
    )?;
    let cert = verify_thue(&star);
    if !cert.passed() {
        return Err(ConstructionError::Reconstruction(
            "extended digraph fails the certificate".into(),
        ));
    }
    Ok((star, cert))
}

/// Everything needed to generate certified words, built once and reused.
#[derive(Debug, Clone)]
pub struct Construction {
    pub words: CanonicalWords,
    pub dn: BlockDigraph,
    pub dn_star: BlockDigraph,
    pub partition: ClassPartition,
    n_vertex: usize,
}

pub const MIN_NEARLY_EXTREMAL_LENGTH: usize = 41;
pub const MIN_EXTREMAL_LENGTH: usize = 102;

impl Construction {
    pub fn new() -> Result<Construction, ConstructionError> {
        Construction::from_parts(CanonicalWords::builtin(), None)
    }

    /// Build around an externally supplied digraph (for example one loaded
    /// from a fixture file) instead of reconstructing it.
    pub fn with_digraph(
        words: CanonicalWords,
        dn: BlockDigraph,
    ) -> Result<Construction, ConstructionError> {
        Construction::from_parts(words, Some(dn))
    }

    fn from_parts(
        words: CanonicalWords,
        dn: Option<BlockDigraph>,
    ) -> Result<Construction, ConstructionError> {
        let dn = match dn {
            Some(d) => d,
            None => build_dn()?.0,
        };
        let (dn_star, _) = extend_to_star(&dn, &words)?;
        let partition = published_partition(&dn)?;
        let n_vertex = dn.index_of("N").expect("checked by extend_to_star");
        Ok(Construction { words, dn, dn_star, partition, n_vertex })
    }

    /// A square-free walk in the block digraph with at least `min_blocks`
    /// vertices.
    pub fn nearly_extremal_walk(&self, min_blocks: usize) -> Result<Vec<usize>, WalkError> {
        long_square_free_walk(&self.dn, &self.partition, min_blocks.max(1), None, None)
    }

    /// A word of at least `min_length` letters whose only square-free
    /// extensions are at its two ends.
    pub fn generate_nearly_extremal(&self, min_length: usize) -> Result<Word, ConstructionError> {
        if min_length < MIN_NEARLY_EXTREMAL_LENGTH {
            return Err(ConstructionError::MinLength {
                kind: "nearly extremal",
                min: MIN_NEARLY_EXTREMAL_LENGTH,
                got: min_length,
            });
        }
        let blocks = min_length.div_ceil(MIN_NEARLY_EXTREMAL_LENGTH);
        let walk = self.nearly_extremal_walk(blocks)?;
        let word = self.dn.image(&walk)?;
        if !word.is_square_free() || word.len() < min_length {
            return Err(ConstructionError::Verification(
                "nearly extremal image failed its checks".into(),
            ));
        }
        Ok(word)
    }

    /// A word of at least `min_length` letters with no square-free extension
    /// at any position: the image of a walk `P, N, ..., N, S` through the
    /// extended digraph.
    pub fn generate_extremal(&self, min_length: usize) -> Result<Word, ConstructionError> {
        if min_length < MIN_EXTREMAL_LENGTH {
            return Err(ConstructionError::MinLength {
                kind: "extremal",
                min: MIN_EXTREMAL_LENGTH,
                got: min_length,
            });
        }
        let bracket = self.words.p.len() + self.words.s.len();
        let interior_blocks =
            (min_length - bracket).div_ceil(MIN_NEARLY_EXTREMAL_LENGTH).max(1);
        let interior = long_square_free_walk(
            &self.dn,
            &self.partition,
            interior_blocks,
            Some(self.n_vertex),
            Some(self.n_vertex),
        )?;

        let p = self.dn.vertex_count();
        let s = p + 1;
        let mut walk = Vec::with_capacity(interior.len() + 2);
        walk.push(p);
        walk.extend_from_slice(&interior);
        walk.push(s);
        let word = self.dn_star.image(&walk)?;
        if !crate::digraph::is_square_free_walk(&walk)
            || !word.is_square_free()
            || word.len() < min_length
        {
            return Err(ConstructionError::Verification(
                "extremal image failed its checks".into(),
            ));
        }
        Ok(word)
    }

    /// Run every verification of the construction and bundle the evidence.
    pub fn certify(&self) -> ConstructionCertificate {
        certify_with_partition(&self.words, &self.dn, &self.partition)
            .expect("construction was validated when built")
    }
}

/// Certify an arbitrary digraph and word set against every check of the
/// shipped construction. Structural problems (a vertex named `N` missing,
/// blocks that cannot form a digraph) are errors; failed verifications are
/// reported inside the certificate.
pub fn certify_with(
    words: &CanonicalWords,
    dn: &BlockDigraph,
) -> Result<ConstructionCertificate, ConstructionError> {
    let partition = published_partition(dn)?;
    certify_with_partition(words, dn, &partition)
}

/// [`certify_with`] against an explicit partition instead of the published
/// one.
pub fn certify_with_partition(
    words: &CanonicalWords,
    dn: &BlockDigraph,
    partition: &ClassPartition,
) -> Result<ConstructionCertificate, ConstructionError> {
    let k = 3u8;
    let dn_star_thue = {
        let n = dn.index_of("N").ok_or_else(|| {
            ConstructionError::Reconstruction("vertex N missing from digraph".into())
        })?;
        let p = dn.vertex_count();
        let s = p + 1;
        let star = dn.extended(
            vec![("P".into(), words.p.clone()), ("S".into(), words.s.clone())],
            vec![(p, n), (n, s)],
        )?;
        verify_thue(&star)
    };
    let dn_thue = verify_thue(dn);
    let partition = verify_partition(dn, partition);

    let classify = |w: &Word| w.classify(k).map_err(|e| e.to_string());
    let pns = classify(&Word::concat([words.p.clone(), words.n.clone(), words.s.clone()]));
    let h = classify(&words.h);
    let n_report = classify(&words.n);
    let expected_n_extensions = vec![
        Extension { position: 0, symbol: 2 },
        Extension { position: words.n.len(), symbol: 0 },
    ];

    let blocks = (0..dn.vertex_count())
        .map(|v| {
            let word = dn.block(v);
            BlockCheck {
                name: dn.name(v).to_string(),
                length: word.len(),
                report: classify(word),
            }
        })
        .collect();

    Ok(ConstructionCertificate {
        dn_thue,
        dn_star_thue,
        partition,
        pns,
        h,
        n_report,
        expected_n_extensions,
        blocks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockCheck {
    pub name: String,
    pub length: usize,
    pub report: Result<ExtensionReport, String>,
}

impl BlockCheck {
    pub fn passed(&self) -> bool {
        self.length == 41
            && self.report.as_ref().is_ok_and(|r| r.status == Status::NearlyExtremal)
    }
}

/// Bundled evidence for the whole construction; `passed` demands every
/// component check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionCertificate {
    pub dn_thue: ThueCertificate,
    pub dn_star_thue: ThueCertificate,
    pub partition: PartitionCertificate,
    pub pns: Result<ExtensionReport, String>,
    pub h: Result<ExtensionReport, String>,
    pub n_report: Result<ExtensionReport, String>,
    pub expected_n_extensions: Vec<Extension>,
    pub blocks: Vec<BlockCheck>,
}

impl ConstructionCertificate {
    pub fn passed(&self) -> bool {
        self.dn_thue.passed()
            && self.dn_star_thue.passed()
            && self.partition.satisfied
            && self.pns.as_ref().is_ok_and(|r| r.status == Status::Extremal)
            && self.h.as_ref().is_ok_and(|r| r.status == Status::Extremal)
            && self.n_report.as_ref().is_ok_and(|r| {
                r.status == Status::NearlyExtremal && r.extensions == self.expected_n_extensions
            })
            && self.blocks.len() == 12
            && self.blocks.iter().all(BlockCheck::passed)
    }

    /// One `name: pass/fail` line per component.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let mut line = |name: &str, ok: bool| {
            writeln!(out, "{name}: {}", if ok { "pass" } else { "FAIL" }).unwrap()
        };
        line("digraph conditions", self.dn_thue.passed());
        line("extended digraph conditions", self.dn_star_thue.passed());
        line("partition property", self.partition.satisfied);
        line("PNS extremal", self.pns.as_ref().is_ok_and(|r| r.status == Status::Extremal));
        line("H extremal", self.h.as_ref().is_ok_and(|r| r.status == Status::Extremal));
        line(
            "N extension pair",
            self.n_report.as_ref().is_ok_and(|r| {
                r.status == Status::NearlyExtremal && r.extensions == self.expected_n_extensions
            }),
        );
        line(
            "12 blocks nearly extremal",
            self.blocks.len() == 12 && self.blocks.iter().all(BlockCheck::passed),
        );
        out
    }
}

/// Convenience wrapper: build the default construction and certify it.
pub fn construction_certificate() -> Result<ConstructionCertificate, ConstructionError> {
    Ok(Construction::new()?.certify())
}

pub const DIGRAPH_FIXTURE: &str = "dn.digraph";
pub const WORDS_FIXTURE: &str = "canonical_words.txt";

/// Write the frozen construction (digraph and named words) into `dir`.
pub fn write_fixture_files(dir: &Path) -> Result<(), ConstructionError> {
    let (dn, _) = build_dn()?;
    let io_err = |path: &Path, e: std::io::Error| ConstructionError::Fixture {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let digraph_path = dir.join(DIGRAPH_FIXTURE);
    fs::write(&digraph_path, dn.to_text()).map_err(|e| io_err(&digraph_path, e))?;
    let words_path = dir.join(WORDS_FIXTURE);
    fs::write(&words_path, CanonicalWords::builtin().to_text())
        .map_err(|e| io_err(&words_path, e))?;
    Ok(())
}

/// Load the digraph and canonical words from a fixture directory.
pub fn load_fixture_files(
    dir: &Path,
) -> Result<(CanonicalWords, BlockDigraph), ConstructionError> {
    let read = |name: &str| -> Result<String, ConstructionError> {
        let path = dir.join(name);
        fs::read_to_string(&path).map_err(|e| ConstructionError::Fixture {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    };
    let words = CanonicalWords::parse(&read(WORDS_FIXTURE)?)?;
    let digraph =
        BlockDigraph::parse(&read(DIGRAPH_FIXTURE)?).map_err(|e| ConstructionError::Fixture {
            path: dir.join(DIGRAPH_FIXTURE).display().to_string(),
            message: e.to_string(),
        })?;
    Ok((words, digraph))
}
