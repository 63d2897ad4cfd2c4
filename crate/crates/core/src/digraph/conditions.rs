//! Machine checks of the three sufficient conditions under which every
//! square-free walk of a block digraph has a square-free image.

use serde::{Deserialize, Serialize};

use crate::word::{find_square_in, SquareWitness, Word};

use super::BlockDigraph;

/// A square-free walk of length at most 3 whose image contains a square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShortWalkViolation {
    pub walk: Vec<usize>,
    pub witness: SquareWitness,
}

/// Block `inner` occurs as a factor of block `outer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactorViolation {
    pub inner: usize,
    pub outer: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpliceKind {
    /// `X · Y'`: a prefix of the left block followed by a suffix of the right.
    PrefixSuffix,
    /// `X' · Y`: a suffix of the left block followed by a prefix of the right.
    SuffixPrefix,
}

/// A splice of two distinct blocks that reproduces some block `reproduced`.
/// `left_split` and `right_split` are the cut positions: block `left` is cut
/// into `X = B[..left_split]` and `X' = B[left_split..]`, likewise `right`
/// into `Y`/`Y'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpliceViolation {
    pub left: usize,
    pub right: usize,
    pub left_split: usize,
    pub right_split: usize,
    pub kind: SpliceKind,
    pub reproduced: usize,
}

/// Which splice matches count as violations.
///
/// In every mode the whole-block splices (one piece is a full block, the
/// other piece empty) are permitted. The modes differ on splices that equal
/// a block without being one:
///
/// * `Literal` permits a match only when the matched block equals the whole
///   contributing prefix piece. No family of distinct blocks can satisfy
///   this: the empty-cut splice `X'Y` with `X` and `Y` empty always
///   reproduces the left block.
/// * `Trivial` permits exactly the whole-block splices.
/// * `Reconstitution` (default) additionally permits a `X·Y'` match that
///   merely rebuilds one of the two spliced blocks, which happens whenever
///   the two blocks share the donated prefix or suffix. Such a match cannot
///   witness a new square: the spliced word already was a block. Splices of
///   the `X'·Y` kind stay restricted to whole-block matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SpliceRule {
    Literal,
    Trivial,
    #[default]
    Reconstitution,
}

/// Evidence for the three conditions on one digraph. `passed` holds iff all
/// violation lists are empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThueCertificate {
    pub rule: SpliceRule,
    pub short_walk_violations: Vec<ShortWalkViolation>,
    pub factor_violations: Vec<FactorViolation>,
    pub splice_violations: Vec<SpliceViolation>,
}

impl ThueCertificate {
    pub fn passed(&self) -> bool {
        self.short_walk_violations.is_empty()
            && self.factor_violations.is_empty()
            && self.splice_violations.is_empty()
    }
}

/// Condition 1: the image of every square-free walk with at most three
/// vertices is square-free. Lengths 1 and 2 are included so the certificate
/// stands on its own rather than assuming block and edge checks were done
/// elsewhere.
pub fn check_condition_short_walks(d: &BlockDigraph) -> Vec<ShortWalkViolation> {
    let walks = short_walks(d);
    let check = |walk: &Vec<usize>| -> Option<ShortWalkViolation> {
        let image = d.image(walk).expect("enumerated walk must be valid");
        find_square_in(image.letters())
            .map(|witness| ShortWalkViolation { walk: walk.clone(), witness })
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        walks.par_iter().filter_map(check).collect()
    }
    #[cfg(not(feature = "parallel"))]
    walks.iter().filter_map(check).collect()
}

/// Sequential twin of [`check_condition_short_walks`].
pub fn check_condition_short_walks_seq(d: &BlockDigraph) -> Vec<ShortWalkViolation> {
    short_walks(d)
        .iter()
        .filter_map(|walk| {
            let image = d.image(walk).expect("enumerated walk must be valid");
            find_square_in(image.letters())
                .map(|witness| ShortWalkViolation { walk: walk.clone(), witness })
        })
        .collect()
}

/// All square-free walks of length 1, 2, 3, in lexicographic order. A walk
/// of three vertices is square-free iff consecutive vertices differ.
fn short_walks(d: &BlockDigraph) -> Vec<Vec<usize>> {
    let mut walks: Vec<Vec<usize>> = (0..d.vertex_count()).map(|v| vec![v]).collect();
    for &(u, v) in d.edges() {
        walks.push(vec![u, v]);
    }
    for &(u, v) in d.edges() {
        for &w in d.successors(v) {
            walks.push(vec![u, v, w]);
        }
    }
    walks
}

/// Condition 2: no block is a factor of another block.
pub fn check_condition_factors(blocks: &[Word]) -> Vec<FactorViolation> {
    let mut violations = Vec::new();
    for (inner, bi) in blocks.iter().enumerate() {
        for (outer, bo) in blocks.iter().enumerate() {
            if inner == outer {
                continue;
            }
            if bo.letters().windows(bi.len()).any(|win| win == bi.letters()) {
                violations.push(FactorViolation { inner, outer });
            }
        }
    }
    violations
}

/// Condition 3: over all ordered pairs of distinct blocks and all cuts
/// `B_left = X·X'`, `B_right = Y·Y'`, neither `X·Y'` nor `X'·Y` equals any
/// block, except as permitted by `rule`.
pub fn check_condition_splices(blocks: &[Word], rule: SpliceRule) -> Vec<SpliceViolation> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let pairs = ordered_pairs(blocks.len());
        pairs
            .par_iter()
            .flat_map_iter(|&(left, right)| splices_for_pair(blocks, left, right, rule))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    check_condition_splices_seq(blocks, rule)
}

/// Sequential twin of [`check_condition_splices`].
pub fn check_condition_splices_seq(blocks: &[Word], rule: SpliceRule) -> Vec<SpliceViolation> {
    ordered_pairs(blocks.len())
        .into_iter()
        .flat_map(|(left, right)| splices_for_pair(blocks, left, right, rule))
        .collect()
}

fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1));
    for left in 0..n {
        for right in 0..n {
            if left != right {
                pairs.push((left, right));
            }
        }
    }
    pairs
}

fn splices_for_pair(
    blocks: &[Word],
    left: usize,
    right: usize,
    rule: SpliceRule,
) -> Vec<SpliceViolation> {
    // Blocks indexed by length so each candidate splice is compared against
    // the few blocks it could possibly equal, without building the spliced
    // word.
    let bl = blocks[left].letters();
    let br = blocks[right].letters();
    let mut violations = Vec::new();
    for left_split in 0..=bl.len() {
        let (x, xp) = bl.split_at(left_split);
        for right_split in 0..=br.len() {
            let (y, yp) = br.split_at(right_split);
            for (reproduced, block) in blocks.iter().enumerate() {
                let b = block.letters();
                if b.len() == x.len() + yp.len()
                    && &b[..x.len()] == x
                    && &b[x.len()..] == yp
                    && !allowed(rule, SpliceKind::PrefixSuffix, (x, xp), (y, yp), reproduced, left, right, blocks)
                {
                    violations.push(SpliceViolation {
                        left,
                        right,
                        left_split,
                        right_split,
                        kind: SpliceKind::PrefixSuffix,
                        reproduced,
                    });
                }
                if b.len() == xp.len() + y.len()
                    && &b[..xp.len()] == xp
                    && &b[xp.len()..] == y
                    && !allowed(rule, SpliceKind::SuffixPrefix, (x, xp), (y, yp), reproduced, left, right, blocks)
                {
                    violations.push(SpliceViolation {
                        left,
                        right,
                        left_split,
                        right_split,
                        kind: SpliceKind::SuffixPrefix,
                        reproduced,
                    });
                }
            }
        }
    }
    violations
}

#[allow(clippy::too_many_arguments)]
fn allowed(
    rule: SpliceRule,
    kind: SpliceKind,
    (x, xp): (&[u8], &[u8]),
    (y, yp): (&[u8], &[u8]),
    reproduced: usize,
    left: usize,
    right: usize,
    blocks: &[Word],
) -> bool {
    let b = blocks[reproduced].letters();
    let bl = blocks[left].letters();
    let br = blocks[right].letters();
    match rule {
        SpliceRule::Literal => (b == bl && x == bl) || (b == br && y == br),
        SpliceRule::Trivial => match kind {
            SpliceKind::PrefixSuffix => (x == bl && yp.is_empty()) || (x.is_empty() && yp == br),
            SpliceKind::SuffixPrefix => (xp == bl && y.is_empty()) || (xp.is_empty() && y == br),
        },
        SpliceRule::Reconstitution => match kind {
            // X·Y' equal to a spliced block forces Y' == X' (or X == Y), so
            // the match is that block itself, rebuilt from a shared piece.
            SpliceKind::PrefixSuffix => reproduced == left || reproduced == right,
            SpliceKind::SuffixPrefix => (xp == bl && y.is_empty()) || (xp.is_empty() && y == br),
        },
    }
}

/// Run all three checks with the default splice rule.
pub fn verify_thue(d: &BlockDigraph) -> ThueCertificate {
    verify_thue_with_rule(d, SpliceRule::default())
}

pub fn verify_thue_with_rule(d: &BlockDigraph, rule: SpliceRule) -> ThueCertificate {
    ThueCertificate {
        rule,
        short_walk_violations: check_condition_short_walks(d),
        factor_violations: check_condition_factors(d.blocks()),
        splice_violations: check_condition_splices(d.blocks(), rule),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn digraph(blocks: &[&str], edges: &[(usize, usize)]) -> BlockDigraph {
        let vertices =
            blocks.iter().enumerate().map(|(i, b)| (format!("v{i}"), w(b))).collect();
        BlockDigraph::new(Alphabet::canonical(3), vertices, edges.to_vec()).unwrap()
    }

    #[test]
    fn short_walk_violation_on_edge() {
        let d = digraph(&["ab", "ab"], &[(0, 1)]);
        let violations = check_condition_short_walks(&d);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].walk, vec![0, 1]);
        assert_eq!(violations[0].witness, SquareWitness { start: 0, half_len: 2 });
    }

    #[test]
    fn short_walk_violation_on_triple() {
        // aba · cab · acb contains (abac)^2.
        let d = digraph(&["aba", "cab", "acb"], &[(0, 1), (1, 2)]);
        let violations = check_condition_short_walks(&d);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].walk, vec![0, 1, 2]);
        let image = d.image(&[0, 1, 2]).unwrap();
        let witness = violations[0].witness;
        assert_eq!(
            image.letters()[witness.start..witness.start + witness.half_len],
            image.letters()[witness.start + witness.half_len..witness.start + 2 * witness.half_len]
        );
    }

    #[test]
    fn factor_condition() {
        assert_eq!(
            check_condition_factors(&[w("ab"), w("bab")]),
            vec![FactorViolation { inner: 0, outer: 1 }]
        );
        assert!(check_condition_factors(&[w("abc"), w("bca")]).is_empty());
    }

    #[test]
    fn splice_condition_under_trivial_rule() {
        // X = "a", Y' = "cb" gives X·Y' = "acb" = the right block, with
        // Y = "a" not the whole of it: forbidden under Trivial, permitted
        // as a reconstitution.
        let blocks = [w("abc"), w("acb")];
        let trivial = check_condition_splices(&blocks, SpliceRule::Trivial);
        assert!(trivial.iter().any(|v| {
            v.left == 0
                && v.right == 1
                && v.left_split == 1
                && v.right_split == 1
                && v.kind == SpliceKind::PrefixSuffix
                && v.reproduced == 1
        }));
        assert!(check_condition_splices(&blocks, SpliceRule::Reconstitution).is_empty());
    }

    #[test]
    fn splice_reports_reproduce_by_string_equality() {
        let blocks = [w("abc"), w("acb"), w("bac")];
        for rule in [SpliceRule::Trivial, SpliceRule::Reconstitution] {
            for v in check_condition_splices(&blocks, rule) {
                let bl = blocks[v.left].letters();
                let br = blocks[v.right].letters();
                let spliced: Vec<u8> = match v.kind {
                    SpliceKind::PrefixSuffix => bl[..v.left_split]
                        .iter()
                        .chain(&br[v.right_split..])
                        .copied()
                        .collect(),
                    SpliceKind::SuffixPrefix => bl[v.left_split..]
                        .iter()
                        .chain(&br[..v.right_split])
                        .copied()
                        .collect(),
                };
                assert_eq!(spliced, blocks[v.reproduced].letters());
            }
        }
    }

    #[test]
    fn literal_rule_rejects_every_distinct_pair() {
        // The empty-cut splice X'·Y with X and Y empty reproduces the left
        // block and the literal clause cannot permit it.
        let blocks = [w("abc"), w("bca")];
        let violations = check_condition_splices(&blocks, SpliceRule::Literal);
        assert!(violations.iter().any(|v| {
            v.kind == SpliceKind::SuffixPrefix
                && v.left_split == 0
                && v.right_split == 0
                && v.reproduced == v.left
        }));
    }

    #[test]
    fn single_block_whole_splice_is_allowed() {
        assert!(check_condition_splices(&[w("ab")], SpliceRule::Trivial).is_empty());
    }

    #[test]
    fn certificate_bundles_all_checks() {
        let d = digraph(&["ab", "bab"], &[]);
        let cert = verify_thue(&d);
        assert!(!cert.passed());
        assert_eq!(cert.factor_violations.len(), 1);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let blocks = [w("abc"), w("acb"), w("bac"), w("cab")];
        for rule in [SpliceRule::Trivial, SpliceRule::Reconstitution] {
            assert_eq!(
                check_condition_splices(&blocks, rule),
                check_condition_splices_seq(&blocks, rule)
            );
        }
        let d = digraph(&["aba", "cab", "acb"], &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(check_condition_short_walks(&d), check_condition_short_walks_seq(&d));
    }
}
