//! Three-way vertex partitions with the reachability property that makes a
//! block digraph produce arbitrarily long square-free walks: from any vertex
//! there is a directed path into each class whose interior stays in the
//! vertex's own class.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use serde::Serialize;

use super::BlockDigraph;

/// Assignment of every vertex to one of three classes (0, 1, 2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassPartition {
    classes: Vec<u8>,
}

impl ClassPartition {
    /// `classes[v]` is the class of vertex `v`; values must be < 3.
    pub fn new(classes: Vec<u8>) -> ClassPartition {
        assert!(classes.iter().all(|&c| c < 3), "class labels must be 0, 1, or 2");
        ClassPartition { classes }
    }

    pub fn from_sets(sets: [&[usize]; 3], vertex_count: usize) -> ClassPartition {
        let mut classes = vec![u8::MAX; vertex_count];
        for (label, set) in sets.iter().enumerate() {
            for &v in *set {
                assert!(classes[v] == u8::MAX, "vertex {v} assigned twice");
                classes[v] = label as u8;
            }
        }
        assert!(classes.iter().all(|&c| c != u8::MAX), "partition must cover all vertices");
        ClassPartition { classes }
    }

    pub fn class_of(&self, v: usize) -> u8 {
        self.classes[v]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Outcome of checking the reachability property. For every vertex `v` and
/// class `j`, `paths[(v, j)]` is a shortest witness path from `v` ending in
/// class `j` with interior vertices confined to `v`'s class; pairs with no
/// such path are listed in `missing`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionCertificate {
    pub satisfied: bool,
    pub missing: Vec<(usize, u8)>,
    #[serde(serialize_with = "paths_as_records")]
    pub paths: BTreeMap<(usize, u8), Vec<usize>>,
}

fn paths_as_records<S: serde::Serializer>(
    paths: &BTreeMap<(usize, u8), Vec<usize>>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Record<'a> {
        from: usize,
        class: u8,
        path: &'a [usize],
    }
    serializer.collect_seq(
        paths.iter().map(|(&(from, class), path)| Record { from, class, path }),
    )
}

pub fn verify_partition(d: &BlockDigraph, partition: &ClassPartition) -> PartitionCertificate {
    assert_eq!(partition.len(), d.vertex_count(), "partition must cover the vertex set");
    let mut paths = BTreeMap::new();
    let mut missing = Vec::new();
    for v in 0..d.vertex_count() {
        for class in 0..3u8 {
            match confined_paths(d, partition, v, class, None).into_iter().next() {
                Some(path) => {
                    paths.insert((v, class), path);
                }
                None => missing.push((v, class)),
            }
        }
    }
    PartitionCertificate { satisfied: missing.is_empty(), missing, paths }
}

/// Shortest confined paths from `v`: interior vertices (everything after the
/// first and before the last) must lie in `v`'s class, and the last vertex
/// must land in `target_class` (or be exactly `exact` when given). Returns
/// one shortest path per reachable landing vertex, ordered by length then
/// landing id; paths are simple by construction.
///
/// A single-vertex path `[v]` qualifies when `v` itself satisfies the target.
pub(super) fn confined_paths(
    d: &BlockDigraph,
    partition: &ClassPartition,
    v: usize,
    target_class: u8,
    exact: Option<usize>,
) -> Vec<Vec<usize>> {
    let own = partition.class_of(v);
    let hits_target =
        |u: usize| exact.map_or(partition.class_of(u) == target_class, |t| u == t);

    let mut found: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    if hits_target(v) {
        found.insert(v, vec![v]);
    }

    let mut prev: Vec<Option<usize>> = vec![None; d.vertex_count()];
    let mut seen = vec![false; d.vertex_count()];
    seen[v] = true;
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for &next in d.successors(u) {
            if hits_target(next) && !found.contains_key(&next) {
                let mut path = vec![next, u];
                while let Some(p) = prev[*path.last().unwrap()] {
                    path.push(p);
                }
                path.reverse();
                found.insert(next, path);
            }
            if !seen[next] && partition.class_of(next) == own {
                seen[next] = true;
                prev[next] = Some(u);
                queue.push_back(next);
            }
        }
    }

    let mut paths: Vec<Vec<usize>> = found.into_values().collect();
    paths.sort_by_key(|p| (p.len(), *p.last().unwrap()));
    paths
}
