//! Whole-pipeline checks on small grids whose intermediate quantities were
//! worked out by hand and frozen: pair counts, candidate counts, seed
//! counts, and the final classes, stage by stage.

use mbconn::fast::{addback_missing, edge_node_set, seed_set};
use mbconn::grid::NodeRef;
use mbconn::naive::candidate_set;
use mbconn::oracle;
use mbconn::pairs::{bucketize, enumerate_all};
use mbconn::synth::{generate_split, SynthSpec};
use mbconn::{reconstruct_fast, reconstruct_naive};

/// 5x5x3 box cut once through i and once through j: four 3x3x3 blocks
/// around a shared vertical line of three 4-copy nodes.
#[test]
fn quarter_split_stage_by_stage() {
    let spec = SynthSpec::new(5, 5, 3, vec![3], vec![3], vec![]).unwrap();
    let (grid, patches, truth) = generate_split(&spec);
    assert_eq!(grid.block_count(), 4);

    let pairs = enumerate_all(&grid, &patches).unwrap();
    assert_eq!(pairs.len(), 36);

    // Interface nodes: the i-cut face (3x3 per block pair, two pairs) and
    // the j-cut face likewise, overlapping on the center line.
    let candidates = candidate_set(&pairs);
    assert_eq!(candidates.nodes().len(), 60);

    // All but the center line's interior-of-face copies sit on block
    // edges: 13 of each block's 20 edge nodes.
    let seeds = seed_set(&edge_node_set(&grid), &candidates);
    assert_eq!(seeds.len(), 52);

    // Both directions of every pair land in the buckets.
    let buckets = bucketize(&grid, &pairs);
    let mut bucketed = 0usize;
    for (idx, dims) in grid.blocks().iter().enumerate() {
        let id = idx as u32 + 1;
        for i in 1..=dims.ni {
            for j in 1..=dims.nj {
                for k in 1..=dims.nk {
                    bucketed += buckets.partners_of(NodeRef::new(id, i, j, k)).count();
                }
            }
        }
    }
    assert_eq!(bucketed, 72);

    // The seed set is already closed under partnership here: every singular
    // node of this grid is on a block edge.
    let closed = addback_missing(seeds, &buckets);
    assert_eq!(closed.len(), 52);

    let report = reconstruct_fast(&grid, &pairs).unwrap();
    assert_eq!(report.size_census(), vec![(4, 3)]);
    assert!(oracle::reports_equal(&report, &truth.expected_report()));
    assert!(oracle::reports_equal(
        &report,
        &reconstruct_naive(&grid, &pairs).unwrap()
    ));
    assert!(oracle::reports_equal(&report, &oracle::reconstruct(&pairs)));
}

/// 5x5x5 box cut once through each axis: eight octants, twelve 4-copy seam
/// lines collapsing onto one 8-copy center.
#[test]
fn octant_split_stage_by_stage() {
    let spec = SynthSpec::new(5, 5, 5, vec![3], vec![3], vec![3]).unwrap();
    let (grid, patches, truth) = generate_split(&spec);
    assert_eq!(grid.block_count(), 8);

    let pairs = enumerate_all(&grid, &patches).unwrap();
    assert_eq!(pairs.len(), 108);

    let report = reconstruct_fast(&grid, &pairs).unwrap();
    assert_eq!(report.size_census(), vec![(4, 12), (8, 1)]);
    assert_eq!(report.node_count(), 56);
    assert!(oracle::reports_equal(&report, &truth.expected_report()));
    assert!(oracle::reports_equal(
        &report,
        &reconstruct_naive(&grid, &pairs).unwrap()
    ));
}

/// A batch of asymmetric recipes, each checked three ways plus against the
/// analytic census.
#[test]
fn engines_agree_across_varied_splits() {
    let recipes: Vec<SynthSpec> = vec![
        SynthSpec::new(4, 4, 4, vec![2, 3], vec![3], vec![]).unwrap(),
        SynthSpec::new(9, 7, 5, vec![3, 7], vec![4], vec![2]).unwrap(),
        SynthSpec::new(6, 6, 6, vec![2, 3, 4, 5], vec![2, 5], vec![3]).unwrap(),
        SynthSpec::new(12, 2, 9, vec![5, 9], vec![], vec![2, 8]).unwrap(),
        SynthSpec::new(17, 17, 17, vec![9], vec![5, 13], vec![3, 9, 15]).unwrap(),
        SynthSpec::new(8, 8, 2, vec![2, 4, 6], vec![3, 5, 7], vec![]).unwrap(),
    ];
    for spec in &recipes {
        let (grid, patches, truth) = generate_split(spec);
        let pairs = enumerate_all(&grid, &patches).unwrap();
        let expected = truth.expected_report();
        let by_oracle = oracle::reconstruct(&pairs);
        let by_naive = reconstruct_naive(&grid, &pairs).unwrap();
        let by_fast = reconstruct_fast(&grid, &pairs).unwrap();
        assert!(
            oracle::reports_equal(&by_oracle, &expected),
            "oracle vs analytic on {spec:?}"
        );
        assert!(
            oracle::reports_equal(&by_naive, &by_oracle),
            "naive vs oracle on {spec:?}"
        );
        assert!(
            oracle::reports_equal(&by_fast, &by_oracle),
            "fast vs oracle on {spec:?}"
        );
        assert_eq!(
            by_fast.size_census(),
            mbconn::expected_census(spec).as_size_census(),
            "census on {spec:?}"
        );
    }
}

/// Classes that only touch via long chains: a strip of blocks all sharing
/// one corner-to-corner diagonal through self-consistent patches.
#[test]
fn no_singularities_on_a_plain_two_block_join() {
    let spec = SynthSpec::new(9, 4, 4, vec![5], vec![], vec![]).unwrap();
    let (grid, patches, _) = generate_split(&spec);
    let pairs = enumerate_all(&grid, &patches).unwrap();
    assert_eq!(pairs.len(), 16);
    let report = reconstruct_fast(&grid, &pairs).unwrap();
    assert!(report.is_empty());
    assert!(reconstruct_naive(&grid, &pairs).unwrap().is_empty());
}
