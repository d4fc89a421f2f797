//! The straightforward reconstruction engine: grow classes by scanning
//! flat arrays with linear search.
//!
//! For every candidate node the engine looks for its class by walking all
//! classes built so far, then walks the whole pair list to collect the
//! candidate's direct partners and absorbs them. Both walks are linear, so
//! the whole pass is quadratic in the candidate count. That cost profile is
//! the point: this engine is the baseline the fast one is measured against,
//! and it must stay honestly quadratic.

use crate::grid::{Grid, GridError, NodeRef};
use crate::pairs::NodePair;
use crate::report::SingularityReport;
use std::collections::{BTreeSet, HashSet};

/// The distinct endpoints of a pair set, in first-seen order over the
/// canonical pair sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    nodes: Vec<NodeRef>,
}

impl CandidateSet {
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

/// Collects every node that appears in at least one pair.
pub fn candidate_set(pairs: &BTreeSet<NodePair>) -> CandidateSet {
    let mut seen = HashSet::with_capacity(pairs.len() * 2);
    let mut nodes = Vec::new();
    for pair in pairs {
        for node in [pair.first(), pair.second()] {
            if seen.insert(node) {
                nodes.push(node);
            }
        }
    }
    CandidateSet { nodes }
}

/// Reconstructs the singular classes by iterated linear search.
///
/// For each candidate `p`: find (or create) the class containing `p`, then
/// absorb every direct partner of `p`. A partner that already sits in a
/// different class pulls that whole class in, so transitive chains close no
/// matter how the candidates are ordered. Classes of size two are dropped
/// in one final pass.
pub fn reconstruct_naive(
    grid: &Grid,
    pairs: &BTreeSet<NodePair>,
) -> Result<SingularityReport, GridError> {
    for pair in pairs {
        for node in [pair.first(), pair.second()] {
            if !grid.contains(node) {
                return Err(GridError::InvalidNode { node });
            }
        }
    }

    let pair_list: Vec<NodePair> = pairs.iter().copied().collect();
    let candidates = candidate_set(pairs);

    // Classes as flat vectors; a merged-away class becomes an empty
    // tombstone so indices stay stable.
    let mut classes: Vec<Vec<NodeRef>> = Vec::new();

    for &p in candidates.nodes() {
        let home = match find_class(&classes, p) {
            Some(idx) => idx,
            None => {
                classes.push(vec![p]);
                classes.len() - 1
            }
        };

        // Direct partners of p, by scanning the whole pair list.
        let mut partners = Vec::new();
        for pair in &pair_list {
            if let Some(q) = pair.partner_of(p) {
                partners.push(q);
            }
        }

        for q in partners {
            match find_class(&classes, q) {
                Some(idx) if idx == home => {}
                Some(other) => {
                    // q was already classed elsewhere; the pair welds the
                    // two classes into one.
                    let absorbed = std::mem::take(&mut classes[other]);
                    classes[home].extend(absorbed);
                }
                None => classes[home].push(q),
            }
        }
    }

    Ok(SingularityReport::from_classes(classes))
}

fn find_class(classes: &[Vec<NodeRef>], node: NodeRef) -> Option<usize> {
    classes.iter().position(|class| class.contains(&node))
}
