//! Coincidence pairs: expanding interface patches into explicit node-node
//! identifications, and the per-block buckets used for partner lookup.

use crate::grid::{Grid, InterfacePatch, NodeRef, PatchViolation};
use std::collections::BTreeSet;

/// An unordered pair of coincident nodes, stored canonically with
/// `first < second`. Identity pairs (a node with itself) do not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodePair {
    first: NodeRef,
    second: NodeRef,
}

impl NodePair {
    /// Canonicalizes the endpoints; `None` when they are the same node.
    pub fn new(a: NodeRef, b: NodeRef) -> Option<NodePair> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(NodePair {
                first: a,
                second: b,
            }),
            std::cmp::Ordering::Greater => Some(NodePair {
                first: b,
                second: a,
            }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn first(&self) -> NodeRef {
        self.first
    }

    pub fn second(&self) -> NodeRef {
        self.second
    }

    pub fn touches(&self, node: NodeRef) -> bool {
        self.first == node || self.second == node
    }

    /// The endpoint opposite `node`; `None` when the pair does not touch it.
    pub fn partner_of(&self, node: NodeRef) -> Option<NodeRef> {
        if self.first == node {
            Some(self.second)
        } else if self.second == node {
            Some(self.first)
        } else {
            None
        }
    }
}

/// The partner of position `x` inside `range_a` of `patch`, per the
/// transform rule: with `d_a = x_a - lo_a(range_a)`, the image index on
/// side-B axis `b = |t_a|` is `lo_b(range_b) + d_a` for positive `t_a` and
/// `hi_b(range_b) - d_a` for negative. The caller guarantees `x` lies in
/// `range_a` of a validated patch.
pub fn partner_in_patch(patch: &InterfacePatch, x: NodeRef) -> NodeRef {
    debug_assert_eq!(x.block, patch.block_a);
    let mut out = [0u32; 3];
    for a in 0..3 {
        let delta = x.index(a as u8 + 1) - patch.range_a.lo[a];
        let t = patch.transform.0[a];
        let b = t.unsigned_abs() as usize - 1;
        out[b] = if t > 0 {
            patch.range_b.lo[b] + delta
        } else {
            patch.range_b.hi[b] - delta
        };
    }
    NodeRef::new(patch.block_b, out[0], out[1], out[2])
}

/// Expands one patch into coincidence pairs: one raw pair per node position
/// in `range_a`, then canonicalized, identity pairs dropped, deduplicated
/// and sorted. Dropped identities and duplicates only occur on
/// self-interfaces, so for a patch between distinct blocks the output
/// length equals the position count of `range_a`.
pub fn enumerate_pairs(
    grid: &Grid,
    patch: &InterfacePatch,
) -> Result<Vec<NodePair>, PatchViolation> {
    patch.validate(grid)?;
    let mut out = Vec::with_capacity(patch.range_a.positions() as usize);
    for_each_position(patch, |x| {
        let y = partner_in_patch(patch, x);
        if let Some(pair) = NodePair::new(x, y) {
            out.push(pair);
        }
    });
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn for_each_position(patch: &InterfacePatch, mut f: impl FnMut(NodeRef)) {
    let r = &patch.range_a;
    for i in r.lo[0]..=r.hi[0] {
        for j in r.lo[1]..=r.hi[1] {
            for k in r.lo[2]..=r.hi[2] {
                f(NodeRef::new(patch.block_a, i, j, k));
            }
        }
    }
}

/// Union of pairs over all patches, with set semantics: a pair named by
/// several patches appears once.
pub fn enumerate_all(
    grid: &Grid,
    patches: &[InterfacePatch],
) -> Result<BTreeSet<NodePair>, PatchViolation> {
    let mut set = BTreeSet::new();
    for patch in patches {
        set.extend(enumerate_pairs(grid, patch)?);
    }
    Ok(set)
}

/// Pairs partitioned by block: bucket `l` holds every pair with an endpoint
/// in block `l`. Partner lookups for a node touch only its block's bucket,
/// so a query costs time proportional to that bucket, about `2|E|/n` on
/// average instead of `|E|`.
#[derive(Debug, Clone)]
pub struct PairBuckets {
    per_block: Vec<Vec<NodePair>>,
    pair_count: usize,
}

/// Distributes `pairs` into per-block buckets. An inter-block pair lands in
/// both endpoint buckets, an intra-block pair in its single bucket once.
pub fn bucketize(grid: &Grid, pairs: &BTreeSet<NodePair>) -> PairBuckets {
    let mut per_block = vec![Vec::new(); grid.block_count() as usize];
    for &pair in pairs {
        let a = pair.first().block as usize - 1;
        let b = pair.second().block as usize - 1;
        per_block[a].push(pair);
        if a != b {
            per_block[b].push(pair);
        }
    }
    PairBuckets {
        per_block,
        pair_count: pairs.len(),
    }
}

impl PairBuckets {
    pub fn pair_count(&self) -> usize {
        self.pair_count
    }

    pub fn block_count(&self) -> usize {
        self.per_block.len()
    }

    /// The bucket of block `l` (1-based).
    pub fn bucket(&self, block: u32) -> &[NodePair] {
        &self.per_block[block as usize - 1]
    }

    /// All partners of `node`, found by scanning its block's bucket.
    pub fn partners_of<'a>(&'a self, node: NodeRef) -> impl Iterator<Item = NodeRef> + 'a {
        self.bucket(node.block)
            .iter()
            .filter_map(move |pair| pair.partner_of(node))
    }

    /// Every pair exactly once, in canonical order: each bucket is sorted
    /// and an inter-block pair is yielded only by its first endpoint's
    /// bucket.
    pub fn iter_pairs(&self) -> impl Iterator<Item = NodePair> + '_ {
        self.per_block.iter().enumerate().flat_map(|(idx, bucket)| {
            bucket
                .iter()
                .copied()
                .filter(move |p| p.first().block as usize - 1 == idx)
        })
    }
}
