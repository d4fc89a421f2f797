//! Reconstruction output: equivalence classes of coincident nodes and the
//! canonical text rendering every engine must agree on byte-for-byte.

use crate::grid::NodeRef;

/// One equivalence class of coincident grid nodes, members sorted in
/// canonical `NodeRef` order. Reported classes always have at least three
/// members; classes of size two are ordinary interior interface points and
/// are dropped before a report is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivClass {
    members: Vec<NodeRef>,
}

impl EquivClass {
    pub fn members(&self) -> &[NodeRef] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The set of singular classes of a grid: every class of coincident nodes
/// shared by more than two block-local copies. Classes are sorted by their
/// smallest member, so equal reports render to identical bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityReport {
    classes: Vec<EquivClass>,
}

impl SingularityReport {
    /// Normalizes raw class node sets into a report: deduplicates and sorts
    /// members, drops classes with fewer than three members, sorts classes
    /// by first member.
    pub fn from_classes(raw: Vec<Vec<NodeRef>>) -> SingularityReport {
        let mut classes: Vec<EquivClass> = raw
            .into_iter()
            .map(|mut members| {
                members.sort_unstable();
                members.dedup();
                EquivClass { members }
            })
            .filter(|c| c.len() >= 3)
            .collect();
        classes.sort_unstable_by(|a, b| a.members[0].cmp(&b.members[0]));
        debug_assert!(disjoint(&classes), "classes must not share nodes");
        SingularityReport { classes }
    }

    pub fn classes(&self) -> &[EquivClass] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Total node count over all classes.
    pub fn node_count(&self) -> usize {
        self.classes.iter().map(|c| c.len()).sum()
    }

    /// Histogram of class sizes, ascending by size.
    pub fn size_census(&self) -> Vec<(usize, usize)> {
        let mut census: Vec<(usize, usize)> = Vec::new();
        for c in &self.classes {
            match census.iter_mut().find(|(size, _)| *size == c.len()) {
                Some((_, n)) => *n += 1,
                None => census.push((c.len(), 1)),
            }
        }
        census.sort_unstable();
        census
    }

    /// Canonical class file: one line per class,
    /// `class <size>: (<l>,<i>,<j>,<k>) ...`, members in canonical order.
    /// An empty report renders to an empty string.
    pub fn to_class_file(&self) -> String {
        let mut out = String::new();
        for c in &self.classes {
            out.push_str(&format!("class {}:", c.len()));
            for m in c.members() {
                out.push_str(&format!(" {m}"));
            }
            out.push('\n');
        }
        out
    }
}

fn disjoint(classes: &[EquivClass]) -> bool {
    let mut all: Vec<NodeRef> = classes
        .iter()
        .flat_map(|c| c.members().iter().copied())
        .collect();
    let before = all.len();
    all.sort_unstable();
    all.dedup();
    all.len() == before
}
