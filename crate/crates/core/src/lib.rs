//! Reconstruction of singularity connectivity in 1-to-1 multi-block
//! structured grids.
//!
//! A multi-block grid stores each block with local `(i,j,k)` numbering and
//! describes how blocks abut with pairwise interface patches. Nodes on a
//! patch exist once per block that touches them, and where more than two
//! blocks meet, a physical point has three or more block-local copies.
//! Solvers need those copies grouped: each group is one equivalence class
//! under the coincidence relation induced by the patches, and the classes
//! with more than two members are the singular ones this crate recovers.
//!
//! Two engines compute the same answer. [`naive::reconstruct_naive`] keeps
//! flat arrays and linear searches and scales quadratically with the
//! number of interface nodes. [`fast::reconstruct_fast`] seeds from block
//! edges, completes the seed set along pairs, and splices classes through
//! linked rings, staying near-linear. An independent [`oracle`] computes
//! connected components of the pair graph by plain breadth-first search
//! and arbitrates whenever the engines are in doubt.
//!
//! The remaining modules feed and check the engines: [`mbc`] parses and
//! writes the grid interchange format, [`pairs`] expands patches into
//! node pairs, [`synth`] generates split-box grids with closed-form ground
//! truth, and [`bench`] times the engines and fits scaling slopes.

pub mod bench;
pub mod fast;
pub mod grid;
pub mod mbc;
pub mod naive;
pub mod oracle;
pub mod pairs;
pub mod report;
pub mod synth;

pub use fast::{reconstruct_fast, reconstruct_fast_with, FastConfig};
pub use grid::{
    is_edge_node, BlockDims, Grid, GridError, IndexRange, InterfacePatch, NodeRef, Transform,
};
pub use naive::reconstruct_naive;
pub use pairs::{enumerate_all, enumerate_pairs, NodePair};
pub use report::{EquivClass, SingularityReport};
pub use synth::{expected_census, generate_split, scaling_series, SynthSpec};
