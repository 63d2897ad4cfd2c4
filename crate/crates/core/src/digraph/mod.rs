//! Block-labeled digraphs: vertices carry square-free words (blocks), walks
//! map to words by concatenating the blocks along the way.

mod conditions;
mod partition;
mod walks;

pub use conditions::{
    check_condition_factors, check_condition_short_walks, check_condition_short_walks_seq,
    check_condition_splices, check_condition_splices_seq, verify_thue, verify_thue_with_rule,
    FactorViolation, ShortWalkViolation, SpliceKind, SpliceRule, SpliceViolation,
    ThueCertificate,
};
pub use partition::{verify_partition, ClassPartition, PartitionCertificate};
pub use walks::{driver_word, long_square_free_walk, substituted_word, thue_word, WalkError};

use std::fmt::Write as _;

use thiserror::Error;

use crate::word::{has_square, Alphabet, SquareWitness, Word};

#[derive(Debug, Error)]
pub enum DigraphError {
    #[error("block for vertex {0:?} is empty")]
    EmptyBlock(String),
    #[error("block for vertex {name:?} contains a square at {}..{}", .witness.start, .witness.start + 2 * .witness.half_len)]
    BlockNotSquareFree { name: String, witness: SquareWitness },
    #[error("block for vertex {0:?} uses letters outside the alphabet")]
    BlockOutsideAlphabet(String),
    #[error("duplicate vertex name {0:?}")]
    DuplicateName(String),
    #[error("self-loop on vertex {0:?}")]
    SelfLoop(String),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("walk step {0} -> {1} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A walk is a vertex sequence following directed edges. It is square-free
/// when the sequence, read as a word over vertex ids, is square-free.
pub fn is_square_free_walk(walk: &[usize]) -> bool {
    !has_square(walk)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDigraph {
    alphabet: Alphabet,
    names: Vec<String>,
    blocks: Vec<Word>,
    edges: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
}

impl BlockDigraph {
    /// Build and validate. Blocks must be non-empty square-free words over
    /// `alphabet`; self-loops are rejected, since a walk `..v v..` can never
    /// be square-free.
    pub fn new(
        alphabet: Alphabet,
        vertices: Vec<(String, Word)>,
        edges: Vec<(usize, usize)>,
    ) -> Result<BlockDigraph, DigraphError> {
        let mut names = Vec::with_capacity(vertices.len());
        let mut blocks = Vec::with_capacity(vertices.len());
        for (name, block) in vertices {
            if names.contains(&name) {
                return Err(DigraphError::DuplicateName(name));
            }
            if block.is_empty() {
                return Err(DigraphError::EmptyBlock(name));
            }
            if block.letters().iter().any(|&l| l >= alphabet.k()) {
                return Err(DigraphError::BlockOutsideAlphabet(name));
            }
            if let Some(witness) = block.find_square() {
                return Err(DigraphError::BlockNotSquareFree { name, witness });
            }
            names.push(name);
            blocks.push(block);
        }
        let n = names.len();
        let mut edges: Vec<(usize, usize)> = edges;
        edges.sort_unstable();
        edges.dedup();
        let mut succ = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u >= n {
                return Err(DigraphError::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(DigraphError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(DigraphError::SelfLoop(names[u].clone()));
            }
            succ[u].push(v);
        }
        Ok(BlockDigraph { alphabet, names, blocks, edges, succ })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn block(&self, v: usize) -> &Word {
        &self.blocks[v]
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ.get(u).is_some_and(|s| s.binary_search(&v).is_ok())
    }

    /// A copy with extra vertices and edges; indices of existing vertices are
    /// preserved, new vertices follow in order.
    pub fn extended(
        &self,
        vertices: Vec<(String, Word)>,
        edges: Vec<(usize, usize)>,
    ) -> Result<BlockDigraph, DigraphError> {
        let mut all_vertices: Vec<(String, Word)> = self
            .names
            .iter()
            .cloned()
            .zip(self.blocks.iter().cloned())
            .collect();
        all_vertices.extend(vertices);
        let mut all_edges = self.edges.clone();
        all_edges.extend(edges);
        BlockDigraph::new(self.alphabet.clone(), all_vertices, all_edges)
    }

    /// Concatenation of the blocks along a walk.
    pub fn image(&self, walk: &[usize]) -> Result<Word, DigraphError> {
        for &v in walk {
            if v >= self.vertex_count() {
                return Err(DigraphError::VertexOutOfRange(v));
            }
        }
        for pair in walk.windows(2) {
            if !self.has_edge(pair[0], pair[1]) {
                return Err(DigraphError::NotAnEdge(pair[0], pair[1]));
            }
        }
        Ok(Word::concat(walk.iter().map(|&v| self.blocks[v].clone())))
    }

    /// Text form: an alphabet header, one `<id> <name> <block>` line per
    /// vertex, then one `edge <from> <to>` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let symbols: String = (0..self.alphabet.k()).map(|i| self.alphabet.symbol(i)).collect();
        writeln!(out, "alphabet: {symbols}").unwrap();
        for v in 0..self.vertex_count() {
            writeln!(out, "{v} {} {}", self.names[v], self.alphabet.render(&self.blocks[v]))
                .unwrap();
        }
        for &(u, v) in &self.edges {
            writeln!(out, "edge {u} {v}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<BlockDigraph, DigraphError> {
        let parse_err = |line: usize, message: &str| DigraphError::Parse {
            line: line + 1,
            message: message.to_string(),
        };
        let mut alphabet = None;
        let mut vertices: Vec<(String, Word)> = Vec::new();
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("alphabet:") {
                let symbols = rest.trim();
                alphabet = Some(
                    Alphabet::from_symbols(symbols.chars())
                        .map_err(|e| parse_err(lineno, &e.to_string()))?,
                );
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0] == "edge" {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "expected: edge <from> <to>"));
                }
                let u = fields[1].parse().map_err(|_| parse_err(lineno, "bad vertex id"))?;
                let v = fields[2].parse().map_err(|_| parse_err(lineno, "bad vertex id"))?;
                edges.push((u, v));
                continue;
            }
            if fields.len() != 3 {
                return Err(parse_err(lineno, "expected: <id> <name> <block>"));
            }
            let id: usize = fields[0].parse().map_err(|_| parse_err(lineno, "bad vertex id"))?;
            if id != vertices.len() {
                return Err(parse_err(lineno, "vertex ids must be consecutive from 0"));
            }
            let alphabet = alphabet
                .as_ref()
                .ok_or_else(|| parse_err(lineno, "alphabet line must come first"))?;
            let block = alphabet
                .parse(fields[2])
                .map_err(|e| parse_err(lineno, &e.to_string()))?;
            vertices.push((fields[1].to_string(), block));
        }
        let alphabet = alphabet.ok_or_else(|| parse_err(0, "missing alphabet line"))?;
        BlockDigraph::new(alphabet, vertices, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn tiny() -> BlockDigraph {
        BlockDigraph::new(
            Alphabet::canonical(3),
            vec![("u".into(), w("aba")), ("v".into(), w("cab"))],
            vec![(0, 1), (1, 0)],
        )
        .unwrap()
    }

    #[test]
    fn image_concatenates_blocks() {
        let d = tiny();
        assert_eq!(d.image(&[0]).unwrap(), w("aba"));
        assert_eq!(d.image(&[0, 1]).unwrap(), w("abacab"));
        assert!(matches!(d.image(&[0, 0]), Err(DigraphError::NotAnEdge(0, 0))));
    }

    #[test]
    fn square_free_walks() {
        assert!(is_square_free_walk(&[0, 1, 0]));
        assert!(!is_square_free_walk(&[0, 1, 0, 1]));
        assert!(is_square_free_walk(&[0]));
    }

    #[test]
    fn construction_rejects_bad_input() {
        let alpha = Alphabet::canonical(3);
        assert!(matches!(
            BlockDigraph::new(alpha.clone(), vec![("u".into(), w("abab"))], vec![]),
            Err(DigraphError::BlockNotSquareFree { .. })
        ));
        assert!(matches!(
            BlockDigraph::new(alpha.clone(), vec![("u".into(), w("ab"))], vec![(0, 0)]),
            Err(DigraphError::SelfLoop(_))
        ));
        assert!(matches!(
            BlockDigraph::new(alpha, vec![("u".into(), w(""))], vec![]),
            Err(DigraphError::EmptyBlock(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let d = tiny();
        let text = d.to_text();
        let parsed = BlockDigraph::parse(&text).unwrap();
        assert_eq!(parsed, d);
        assert!(BlockDigraph::parse("0 u aba\n").is_err());
        assert!(BlockDigraph::parse("alphabet: abc\n0 u aba\nedge 0 5\n").is_err());
    }
}
