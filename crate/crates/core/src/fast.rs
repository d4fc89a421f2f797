//! The fast reconstruction engine.
//!
//! Classes of coincident nodes that matter here have more than two members,
//! and such classes always touch block edges on grids stitched from
//! face-to-face patches: a node can only be shared by more than two blocks
//! where block faces meet, which is along edges. The engine exploits that:
//!
//! 1. seed an ordered set with the candidates that lie on block edges,
//! 2. close the set under pair completion, so copies of a seeded point
//!    that sit in face interiors are pulled back in,
//! 3. union the closed set along pairs using O(1) ring splices,
//! 4. drop what remains at size two or less.
//!
//! Membership tests run against an ordered set (logarithmic), partner
//! lookups scan only the per-block pair bucket, and each union is constant
//! amortized, which together keep the engine near-linear in the pair count.

use crate::grid::{edge_axes, Grid, GridError, NodeRef};
use crate::naive::candidate_set;
use crate::pairs::{bucketize, NodePair, PairBuckets};
use crate::report::SingularityReport;
use std::collections::{BTreeSet, HashMap, HashSet};

/// All nodes of every block that lie on a block edge (at least two indices
/// extreme), in canonical order. A block with dims `ni,nj,nk` contributes
/// `4(ni+nj+nk) - 16` of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeNodeSet {
    nodes: Vec<NodeRef>,
}

impl EdgeNodeSet {
    pub fn nodes(&self) -> &[NodeRef] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Enumerates the twelve edges of every block directly, without visiting
/// interior nodes.
pub fn edge_node_set(grid: &Grid) -> EdgeNodeSet {
    let mut nodes = Vec::new();
    for (idx, dims) in grid.blocks().iter().enumerate() {
        let block = idx as u32 + 1;
        let start = nodes.len();
        // Edges along i carry their corner endpoints; edges along j and k
        // skip theirs so every edge node appears exactly once.
        for j in [1, dims.nj] {
            for k in [1, dims.nk] {
                for i in 1..=dims.ni {
                    nodes.push(NodeRef::new(block, i, j, k));
                }
            }
        }
        for i in [1, dims.ni] {
            for k in [1, dims.nk] {
                for j in 2..dims.nj {
                    nodes.push(NodeRef::new(block, i, j, k));
                }
            }
        }
        for i in [1, dims.ni] {
            for j in [1, dims.nj] {
                for k in 2..dims.nk {
                    nodes.push(NodeRef::new(block, i, j, k));
                }
            }
        }
        nodes[start..].sort_unstable();
        debug_assert!(nodes[start..].iter().all(|&n| edge_axes(dims, n) >= 2));
    }
    EdgeNodeSet { nodes }
}

/// The working set of the fast engine: an ordered searchable set of nodes,
/// keyed in canonical order, with logarithmic membership and insertion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeedSet {
    nodes: BTreeSet<NodeRef>,
}

impl SeedSet {
    pub fn contains(&self, node: NodeRef) -> bool {
        self.nodes.contains(&node)
    }

    pub fn insert(&mut self, node: NodeRef) -> bool {
        self.nodes.insert(node)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeRef> + '_ {
        self.nodes.iter().copied()
    }
}

/// Seeds the working set with the candidates that are edge nodes.
pub fn seed_set(edges: &EdgeNodeSet, candidates: &crate::naive::CandidateSet) -> SeedSet {
    let lookup: HashSet<NodeRef> = candidates.nodes().iter().copied().collect();
    let mut nodes = BTreeSet::new();
    for &e in edges.nodes() {
        if lookup.contains(&e) {
            nodes.insert(e);
        }
    }
    SeedSet { nodes }
}

/// Closes `seed` under pair completion: whenever a pair has exactly one
/// endpoint in the set, the other endpoint joins. Runs a worklist to the
/// fixpoint, so chains of face-interior copies are pulled in no matter how
/// many hops they need. The result is the least superset of the seeds
/// closed under that rule, which makes it independent of visitation order.
pub fn addback_missing(seed: SeedSet, buckets: &PairBuckets) -> SeedSet {
    let mut seed = seed;
    let mut worklist: Vec<NodeRef> = seed.iter().collect();
    while let Some(p) = worklist.pop() {
        // Partner lookup touches only the bucket of p's block.
        let mut found: Vec<NodeRef> = Vec::new();
        for q in buckets.partners_of(p) {
            if !seed.contains(q) {
                found.push(q);
            }
        }
        for q in found {
            if seed.insert(q) {
                worklist.push(q);
            }
        }
    }
    seed
}

/// Disjoint classes over an indexed node universe, with two coupled
/// structures: a representative forest (union by size, path halving) that
/// answers "same class?", and circular doubly-linked membership rings that
/// splice in O(1) and enumerate a class without touching the rest.
#[derive(Debug)]
pub struct ClassRings {
    parent: Vec<u32>,
    size: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
    class_count: usize,
    splice_count: usize,
}

impl ClassRings {
    /// `n` singleton classes.
    pub fn new(n: usize) -> ClassRings {
        ClassRings {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            next: (0..n as u32).collect(),
            prev: (0..n as u32).collect(),
            class_count: n,
            splice_count: 0,
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grandparent = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grandparent;
            x = grandparent;
        }
        x
    }

    /// Splices the classes of `a` and `b`; no-op when already joined.
    /// Returns whether a splice happened. Each splice reduces the class
    /// count by exactly one.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
        // Cut both rings after a and after b and cross-link; the two cycles
        // become one containing every member of both.
        let an = self.next[a as usize];
        let bn = self.next[b as usize];
        self.next[a as usize] = bn;
        self.prev[bn as usize] = a;
        self.next[b as usize] = an;
        self.prev[an as usize] = b;
        self.class_count -= 1;
        self.splice_count += 1;
        true
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn splice_count(&self) -> usize {
        self.splice_count
    }

    pub fn class_size(&mut self, x: u32) -> u32 {
        let r = self.find(x);
        self.size[r as usize]
    }

    /// Walks the ring of `x`, yielding every member of its class once.
    pub fn ring_members(&self, x: u32) -> Vec<u32> {
        let mut out = vec![x];
        let mut cur = self.next[x as usize];
        while cur != x {
            out.push(cur);
            cur = self.next[cur as usize];
        }
        out
    }
}

/// Unions the closed seed set along every pair whose endpoints both sit in
/// it, then reads the classes of size three or more off the rings.
pub fn merge_classes(seed: &SeedSet, buckets: &PairBuckets) -> SingularityReport {
    let nodes: Vec<NodeRef> = seed.iter().collect();
    let index: HashMap<NodeRef, u32> = nodes
        .iter()
        .enumerate()
        .map(|(i, &node)| (node, i as u32))
        .collect();

    let mut rings = ClassRings::new(nodes.len());
    for pair in buckets.iter_pairs() {
        if let (Some(&a), Some(&b)) = (index.get(&pair.first()), index.get(&pair.second())) {
            rings.union(a, b);
        }
    }
    debug_assert_eq!(
        rings.splice_count(),
        nodes.len() - rings.class_count(),
        "every splice removes exactly one class"
    );

    let mut classes = Vec::new();
    for i in 0..nodes.len() as u32 {
        if rings.find(i) == i && rings.class_size(i) >= 3 {
            let members = rings
                .ring_members(i)
                .into_iter()
                .map(|m| nodes[m as usize])
                .collect();
            classes.push(members);
        }
    }
    SingularityReport::from_classes(classes)
}

/// Indices of report classes containing no edge-resident node. The seeding
/// premise of this engine says every singular class on a face-stitched grid
/// has one; a nonempty result on some exotic hand-written input means the
/// fast engine cannot be trusted there, so verification reports it rather
/// than repairing it.
pub fn classes_without_edge_nodes(
    grid: &Grid,
    report: &SingularityReport,
) -> Result<Vec<usize>, GridError> {
    let mut out = Vec::new();
    for (idx, class) in report.classes().iter().enumerate() {
        let mut has_edge = false;
        for &m in class.members() {
            if crate::grid::is_edge_node(grid, m)? {
                has_edge = true;
                break;
            }
        }
        if !has_edge {
            out.push(idx);
        }
    }
    Ok(out)
}

/// Knobs for the fast engine. `flat_partner_index` swaps the per-block
/// bucket scans for a prebuilt node-to-partners map; results are identical,
/// it exists to compare the two access patterns.
#[derive(Debug, Clone, Copy, Default)]
pub struct FastConfig {
    pub flat_partner_index: bool,
}

/// Runs the full fast pipeline with default configuration.
pub fn reconstruct_fast(
    grid: &Grid,
    pairs: &BTreeSet<NodePair>,
) -> Result<SingularityReport, GridError> {
    reconstruct_fast_with(grid, pairs, FastConfig::default())
}

pub fn reconstruct_fast_with(
    grid: &Grid,
    pairs: &BTreeSet<NodePair>,
    config: FastConfig,
) -> Result<SingularityReport, GridError> {
    for pair in pairs {
        for node in [pair.first(), pair.second()] {
            if !grid.contains(node) {
                return Err(GridError::InvalidNode { node });
            }
        }
    }

    let edges = edge_node_set(grid);
    let candidates = candidate_set(pairs);
    let seeds = seed_set(&edges, &candidates);
    let buckets = bucketize(grid, pairs);

    let closed = if config.flat_partner_index {
        addback_missing_flat(seeds, pairs)
    } else {
        addback_missing(seeds, &buckets)
    };

    Ok(merge_classes(&closed, &buckets))
}

/// Alternative add-back using one flat adjacency map over all pairs.
fn addback_missing_flat(seed: SeedSet, pairs: &BTreeSet<NodePair>) -> SeedSet {
    let mut adjacency: HashMap<NodeRef, Vec<NodeRef>> = HashMap::new();
    for pair in pairs {
        adjacency
            .entry(pair.first())
            .or_default()
            .push(pair.second());
        adjacency
            .entry(pair.second())
            .or_default()
            .push(pair.first());
    }
    let mut seed = seed;
    let mut worklist: Vec<NodeRef> = seed.iter().collect();
    while let Some(p) = worklist.pop() {
        let Some(neighbors) = adjacency.get(&p) else {
            continue;
        };
        for &q in neighbors {
            if seed.insert(q) {
                worklist.push(q);
            }
        }
    }
    seed
}
