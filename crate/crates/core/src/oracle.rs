//! Reference reconstruction by brute force: connected components over the
//! coincidence pairs, computed with a plain breadth-first search.
//!
//! This is the trusted baseline the real engines are checked against. It
//! shares the domain types but none of the engine machinery: no candidate
//! ordering, no edge-node seeding, no ring splicing. Slow is fine here.

use crate::grid::NodeRef;
use crate::pairs::NodePair;
use crate::report::SingularityReport;
use std::collections::{BTreeSet, HashMap, VecDeque};

/// The full partition of pair endpoints into coincidence classes, before
/// any size filtering. Classes and members are sorted canonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    classes: Vec<Vec<NodeRef>>,
}

impl ClosureResult {
    pub fn classes(&self) -> &[Vec<NodeRef>] {
        &self.classes
    }

    pub fn node_count(&self) -> usize {
        self.classes.iter().map(|c| c.len()).sum()
    }
}

/// Partitions the endpoints of `pairs` into connected components: the
/// finest partition in which both ends of every pair land in one class.
pub fn closure_classes(pairs: &BTreeSet<NodePair>) -> ClosureResult {
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

    // Seed the search in canonical node order so class discovery order is
    // deterministic regardless of map iteration order.
    let seeds: BTreeSet<NodeRef> = pairs.iter().flat_map(|p| [p.first(), p.second()]).collect();

    let mut visited: BTreeSet<NodeRef> = BTreeSet::new();
    let mut classes = Vec::new();
    for &seed in &seeds {
        if visited.contains(&seed) {
            continue;
        }
        let mut members = Vec::new();
        let mut queue = VecDeque::from([seed]);
        visited.insert(seed);
        while let Some(node) = queue.pop_front() {
            members.push(node);
            if let Some(neighbors) = adjacency.get(&node) {
                for &next in neighbors {
                    if visited.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    classes.sort_unstable_by(|a, b| a[0].cmp(&b[0]));
    ClosureResult { classes }
}

/// Keeps the classes with more than two members: the singular ones.
pub fn filter_singular(closure: &ClosureResult) -> SingularityReport {
    SingularityReport::from_classes(
        closure
            .classes
            .iter()
            .filter(|c| c.len() >= 3)
            .cloned()
            .collect(),
    )
}

/// Convenience composition of closure and filtering.
pub fn reconstruct(pairs: &BTreeSet<NodePair>) -> SingularityReport {
    filter_singular(&closure_classes(pairs))
}

/// Canonical report equality. Reports normalize on construction, so this
/// is plain structural equality; it exists to make comparison sites read
/// as intent.
pub fn reports_equal(a: &SingularityReport, b: &SingularityReport) -> bool {
    a == b
}
