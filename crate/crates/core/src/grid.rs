//! Block-structured grid topology: block dimensions, node references,
//! interface patches and the transform rule that maps one patch side onto
//! the other.
//!
//! Everything here is pure connectivity. Physical coordinates never appear;
//! two nodes coincide exactly when an interface patch (or a chain of them)
//! says they do.

use std::fmt;
use thiserror::Error;

/// Dimensions of one block: node counts along the three index axes.
/// Indices are 1-based, so valid node positions are `1..=ni` etc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockDims {
    pub ni: u32,
    pub nj: u32,
    pub nk: u32,
}

impl BlockDims {
    pub fn new(ni: u32, nj: u32, nk: u32) -> Self {
        BlockDims { ni, nj, nk }
    }

    /// Node count along `axis` (1, 2 or 3).
    pub fn extent(&self, axis: u8) -> u32 {
        match axis {
            1 => self.ni,
            2 => self.nj,
            3 => self.nk,
            _ => panic!("axis out of range: {axis}"),
        }
    }

    pub fn node_count(&self) -> u64 {
        self.ni as u64 * self.nj as u64 * self.nk as u64
    }
}

/// One grid node, identified by its owning block (1-based) and 1-based
/// indices within that block. Ordering is lexicographic on
/// `(block, i, j, k)`, which is the canonical order used everywhere a
/// deterministic sequence is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef {
    pub block: u32,
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl NodeRef {
    pub fn new(block: u32, i: u32, j: u32, k: u32) -> Self {
        NodeRef { block, i, j, k }
    }

    pub fn index(&self, axis: u8) -> u32 {
        match axis {
            1 => self.i,
            2 => self.j,
            3 => self.k,
            _ => panic!("axis out of range: {axis}"),
        }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.block, self.i, self.j, self.k)
    }
}

/// A whole grid: blocks with ids `1..=n`, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    blocks: Vec<BlockDims>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("block {id}: every dimension must be at least 2, got {ni}x{nj}x{nk}")]
    DegenerateBlock { id: u32, ni: u32, nj: u32, nk: u32 },
    #[error("node {node} does not exist in the grid")]
    InvalidNode { node: NodeRef },
}

impl Grid {
    /// Builds a grid from block dimensions; block ids are assigned 1..=n in
    /// order. Every dimension must be >= 2 (a block is at least one cell).
    pub fn new(blocks: Vec<BlockDims>) -> Result<Self, GridError> {
        for (idx, b) in blocks.iter().enumerate() {
            if b.ni < 2 || b.nj < 2 || b.nk < 2 {
                return Err(GridError::DegenerateBlock {
                    id: idx as u32 + 1,
                    ni: b.ni,
                    nj: b.nj,
                    nk: b.nk,
                });
            }
        }
        Ok(Grid { blocks })
    }

    pub fn block_count(&self) -> u32 {
        self.blocks.len() as u32
    }

    /// Dimensions of block `id` (1-based), or None if the id is unknown.
    pub fn block(&self, id: u32) -> Option<&BlockDims> {
        if id == 0 {
            return None;
        }
        self.blocks.get(id as usize - 1)
    }

    pub fn blocks(&self) -> &[BlockDims] {
        &self.blocks
    }

    pub fn contains(&self, node: NodeRef) -> bool {
        match self.block(node.block) {
            Some(b) => {
                (1..=b.ni).contains(&node.i)
                    && (1..=b.nj).contains(&node.j)
                    && (1..=b.nk).contains(&node.k)
            }
            None => false,
        }
    }

    /// Total node count over all blocks (block-local copies counted
    /// separately).
    pub fn node_count(&self) -> u64 {
        self.blocks.iter().map(|b| b.node_count()).sum()
    }
}

/// True when the node lies on a block edge: at least two of its three
/// indices sit at an extreme (1 or the dimension). Corners qualify.
pub fn is_edge_node(grid: &Grid, node: NodeRef) -> Result<bool, GridError> {
    let b = grid
        .block(node.block)
        .filter(|_| grid.contains(node))
        .ok_or(GridError::InvalidNode { node })?;
    Ok(edge_axes(b, node) >= 2)
}

/// Number of axes on which `node` sits at an extreme of `dims`. The caller
/// guarantees the node is in bounds.
pub(crate) fn edge_axes(dims: &BlockDims, node: NodeRef) -> u32 {
    let mut n = 0;
    if node.i == 1 || node.i == dims.ni {
        n += 1;
    }
    if node.j == 1 || node.j == dims.nj {
        n += 1;
    }
    if node.k == 1 || node.k == dims.nk {
        n += 1;
    }
    n
}

/// An axis-aligned index box on one block, `lo[a]..=hi[a]` per axis,
/// 1-based and ascending. Interface ranges are faces, edges or points, so
/// at least one axis is degenerate (`lo == hi`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub lo: [u32; 3],
    pub hi: [u32; 3],
}

impl IndexRange {
    pub fn new(lo: [u32; 3], hi: [u32; 3]) -> Self {
        IndexRange { lo, hi }
    }

    /// Node count difference along `axis` (1-based): `hi - lo`.
    pub fn span(&self, axis: u8) -> u32 {
        self.hi[axis as usize - 1] - self.lo[axis as usize - 1]
    }

    pub fn degenerate_axes(&self) -> u32 {
        (0..3).filter(|&a| self.lo[a] == self.hi[a]).count() as u32
    }

    /// Number of node positions in the box.
    pub fn positions(&self) -> u64 {
        (0..3)
            .map(|a| (self.hi[a] - self.lo[a] + 1) as u64)
            .product()
    }
}

/// Signed axis permutation mapping side-A range axes onto side-B range
/// axes. `t[a-1] = s*b` means axis `a` of the A range runs along axis `b`
/// of the B range, reversed when `s` is negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transform(pub [i8; 3]);

impl Transform {
    pub const IDENTITY: Transform = Transform([1, 2, 3]);

    /// A transform is valid when the absolute values are a permutation of
    /// (1, 2, 3).
    pub fn is_valid(&self) -> bool {
        let mut seen = [false; 3];
        for &t in &self.0 {
            let a = t.unsigned_abs() as usize;
            if !(1..=3).contains(&a) || seen[a - 1] {
                return false;
            }
            seen[a - 1] = true;
        }
        true
    }

    /// The transform that maps the B side back onto the A side:
    /// if axis `a` maps to signed axis `s*b`, then axis `b` maps back to
    /// `s*a`.
    pub fn inverse(&self) -> Transform {
        let mut inv = [0i8; 3];
        for (a, &t) in self.0.iter().enumerate() {
            let b = t.unsigned_abs() as usize;
            inv[b - 1] = (a as i8 + 1) * t.signum();
        }
        Transform(inv)
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A 1-to-1 point-matched interface record: a range on block A is glued
/// node-for-node onto a range on block B under `transform`. A and B may be
/// the same block (periodic wraps and O-grid seams do that).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterfacePatch {
    pub block_a: u32,
    pub range_a: IndexRange,
    pub block_b: u32,
    pub range_b: IndexRange,
    pub transform: Transform,
}

/// Which side of an interface record a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// Why a patch is not valid against a grid. `parse` maps these onto file
/// error classes; programmatic construction surfaces them directly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatchViolation {
    #[error("unknown block id {0}")]
    UnknownBlock(u32),
    #[error("side-{side} range axis {axis} is descending: {lo}..{hi}")]
    DescendingRange {
        side: Side,
        axis: u8,
        lo: u32,
        hi: u32,
    },
    #[error("side-{side} range axis {axis} is out of bounds: {lo}..{hi} not within 1..{dim}")]
    RangeOutOfBounds {
        side: Side,
        axis: u8,
        lo: u32,
        hi: u32,
        dim: u32,
    },
    #[error("side-{side} range has no degenerate axis; an interface is a face, edge or point")]
    NotAContact { side: Side },
    #[error("transform {0} is not a signed permutation of (1,2,3)")]
    BadTransform(Transform),
    #[error("extent mismatch: side-A axis {axis_a} spans {span_a}, its image axis {axis_b} spans {span_b}")]
    ExtentMismatch {
        axis_a: u8,
        span_a: u32,
        axis_b: u8,
        span_b: u32,
    },
}

impl InterfacePatch {
    /// Swaps the two sides, inverting the transform. Enumerating pairs from
    /// either representation yields the same pair set.
    pub fn swapped(&self) -> InterfacePatch {
        InterfacePatch {
            block_a: self.block_b,
            range_a: self.range_b,
            block_b: self.block_a,
            range_b: self.range_a,
            transform: self.transform.inverse(),
        }
    }

    /// Full validity check against a grid. Checks run in a fixed order
    /// (blocks, ranges, transform, extents) so a record with several
    /// defects reports the first one deterministically.
    pub fn validate(&self, grid: &Grid) -> Result<(), PatchViolation> {
        let dims_a = grid
            .block(self.block_a)
            .ok_or(PatchViolation::UnknownBlock(self.block_a))?;
        let dims_b = grid
            .block(self.block_b)
            .ok_or(PatchViolation::UnknownBlock(self.block_b))?;
        check_range(&self.range_a, dims_a, Side::A)?;
        check_range(&self.range_b, dims_b, Side::B)?;
        if !self.transform.is_valid() {
            return Err(PatchViolation::BadTransform(self.transform));
        }
        for a in 1..=3u8 {
            let b = self.transform.0[a as usize - 1].unsigned_abs();
            let span_a = self.range_a.span(a);
            let span_b = self.range_b.span(b);
            if span_a != span_b {
                return Err(PatchViolation::ExtentMismatch {
                    axis_a: a,
                    span_a,
                    axis_b: b,
                    span_b,
                });
            }
        }
        Ok(())
    }
}

fn check_range(range: &IndexRange, dims: &BlockDims, side: Side) -> Result<(), PatchViolation> {
    for a in 0..3 {
        let (lo, hi) = (range.lo[a], range.hi[a]);
        let axis = a as u8 + 1;
        if lo > hi {
            return Err(PatchViolation::DescendingRange { side, axis, lo, hi });
        }
        let dim = dims.extent(axis);
        if lo < 1 || hi > dim {
            return Err(PatchViolation::RangeOutOfBounds {
                side,
                axis,
                lo,
                hi,
                dim,
            });
        }
    }
    if range.degenerate_axes() == 0 {
        return Err(PatchViolation::NotAContact { side });
    }
    Ok(())
}
