//! Randomized invariants: the text format round-trips, the pair layer is
//! symmetric, and all three engines agree with each other and with the
//! analytic ground truth on generated grids.

use mbconn::fast::{reconstruct_fast_with, FastConfig};
use mbconn::grid::{BlockDims, Grid, IndexRange, InterfacePatch, NodeRef, Transform};
use mbconn::naive::reconstruct_naive;
use mbconn::oracle;
use mbconn::pairs::{bucketize, enumerate_all, enumerate_pairs, partner_in_patch, NodePair};
use mbconn::report::SingularityReport;
use mbconn::synth::{expected_census, generate_split, SynthSpec};
use mbconn::{mbc, reconstruct_fast};
use proptest::prelude::*;
use std::collections::BTreeSet;

const PERMS: [[i8; 3]; 6] = [
    [1, 2, 3],
    [1, 3, 2],
    [2, 1, 3],
    [2, 3, 1],
    [3, 1, 2],
    [3, 2, 1],
];

fn arb_transform() -> impl Strategy<Value = Transform> {
    (0usize..6, 0u8..8).prop_map(|(p, mask)| {
        let mut t = PERMS[p];
        for (a, v) in t.iter_mut().enumerate() {
            if mask >> a & 1 == 1 {
                *v = -*v;
            }
        }
        Transform(t)
    })
}

/// Raw material for one patch; resolved against concrete blocks later.
/// Spans are capped at 3 and dimensions start at 5, so any span fits at
/// more than one offset and every draw yields a valid patch.
#[derive(Debug, Clone)]
struct PatchSeed {
    a: usize,
    b: usize,
    spans: [u32; 3],
    transform: Transform,
    lo_raw: [u32; 6],
}

fn arb_patch_seed() -> impl Strategy<Value = PatchSeed> {
    (
        any::<proptest::sample::Index>(),
        any::<proptest::sample::Index>(),
        (0u32..=3, 0u32..=3, 0u32..=3).prop_filter("needs a degenerate axis", |s| {
            s.0 == 0 || s.1 == 0 || s.2 == 0
        }),
        arb_transform(),
        [any::<u32>(); 6],
    )
        .prop_map(|(a, b, spans, transform, lo_raw)| PatchSeed {
            a: a.index(usize::MAX),
            b: b.index(usize::MAX),
            spans: [spans.0, spans.1, spans.2],
            transform,
            lo_raw,
        })
}

fn resolve_patch(seed: &PatchSeed, blocks: &[BlockDims]) -> InterfacePatch {
    let a_id = (seed.a % blocks.len()) as u32 + 1;
    let b_id = (seed.b % blocks.len()) as u32 + 1;
    let dims_a = blocks[a_id as usize - 1];
    let dims_b = blocks[b_id as usize - 1];

    let mut lo_a = [0u32; 3];
    let mut hi_a = [0u32; 3];
    let mut span_b = [0u32; 3];
    for a in 0..3 {
        let slots = dims_a.extent(a as u8 + 1) - seed.spans[a];
        lo_a[a] = 1 + seed.lo_raw[a] % slots;
        hi_a[a] = lo_a[a] + seed.spans[a];
        span_b[seed.transform.0[a].unsigned_abs() as usize - 1] = seed.spans[a];
    }
    let mut lo_b = [0u32; 3];
    let mut hi_b = [0u32; 3];
    for b in 0..3 {
        let slots = dims_b.extent(b as u8 + 1) - span_b[b];
        lo_b[b] = 1 + seed.lo_raw[3 + b] % slots;
        hi_b[b] = lo_b[b] + span_b[b];
    }
    InterfacePatch {
        block_a: a_id,
        range_a: IndexRange::new(lo_a, hi_a),
        block_b: b_id,
        range_b: IndexRange::new(lo_b, hi_b),
        transform: seed.transform,
    }
}

/// A grid of 1..=4 blocks (every extent in 5..=8) with 0..=5 valid patches.
fn arb_case() -> impl Strategy<Value = (Grid, Vec<InterfacePatch>)> {
    (
        proptest::collection::vec((5u32..=8, 5u32..=8, 5u32..=8), 1..=4),
        proptest::collection::vec(arb_patch_seed(), 0..=5),
    )
        .prop_map(|(dims, seeds)| {
            let blocks: Vec<BlockDims> = dims
                .into_iter()
                .map(|(a, b, c)| BlockDims::new(a, b, c))
                .collect();
            let patches: Vec<InterfacePatch> =
                seeds.iter().map(|s| resolve_patch(s, &blocks)).collect();
            let grid = Grid::new(blocks).unwrap();
            for p in &patches {
                p.validate(&grid).unwrap();
            }
            (grid, patches)
        })
}

/// A split-box recipe with up to two interior cuts per axis.
fn arb_spec() -> impl Strategy<Value = SynthSpec> {
    (2u32..=10, 2u32..=10, 2u32..=10).prop_flat_map(|(ni, nj, nk)| {
        let cuts = |n: u32| {
            let interior: Vec<u32> = (2..n).collect();
            proptest::sample::subsequence(interior.clone(), 0..=interior.len().min(2))
        };
        (cuts(ni), cuts(nj), cuts(nk))
            .prop_map(move |(ci, cj, ck)| SynthSpec::new(ni, nj, nk, ci, cj, ck).unwrap())
    })
}

/// Rewrites canonical text with cosmetic noise the parser must ignore:
/// comment lines, trailing comments, blank lines, and stray indentation.
fn decorate(text: &str, salt: u64) -> String {
    let mut out = String::new();
    let mut state = salt | 1;
    let mut step = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) as u32
    };
    for line in text.lines() {
        match step() % 4 {
            0 => out.push_str("# noise\n"),
            1 => out.push('\n'),
            _ => {}
        }
        if step() % 3 == 0 {
            out.push_str("  \t");
        }
        let respaced: String = match step() % 3 {
            0 => line.split_whitespace().collect::<Vec<_>>().join("   "),
            1 => line.split_whitespace().collect::<Vec<_>>().join("\t"),
            _ => line.to_string(),
        };
        out.push_str(&respaced);
        if step() % 4 == 0 {
            out.push_str(" # trailing note");
        }
        out.push('\n');
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn written_text_parses_back_to_the_same_structures((grid, patches) in arb_case()) {
        let text = mbc::write(&grid, &patches);
        let (grid2, patches2) = mbc::parse(&text).unwrap();
        prop_assert_eq!(&grid2, &grid);
        prop_assert_eq!(&patches2, &patches);
        prop_assert_eq!(mbc::write(&grid2, &patches2), text);
    }

    #[test]
    fn cosmetic_noise_does_not_change_the_parse(
        (grid, patches) in arb_case(),
        salt in any::<u64>(),
    ) {
        let text = mbc::write(&grid, &patches);
        let (grid2, patches2) = mbc::parse(&decorate(&text, salt)).unwrap();
        prop_assert_eq!(grid2, grid);
        prop_assert_eq!(patches2, patches);
    }

    #[test]
    fn pair_enumeration_is_side_symmetric((grid, patches) in arb_case()) {
        for patch in &patches {
            let forward: BTreeSet<NodePair> =
                enumerate_pairs(&grid, patch).unwrap().into_iter().collect();
            let backward: BTreeSet<NodePair> =
                enumerate_pairs(&grid, &patch.swapped()).unwrap().into_iter().collect();
            prop_assert_eq!(forward, backward);
        }
    }

    #[test]
    fn partner_mapping_is_an_involution((grid, patches) in arb_case()) {
        for patch in &patches {
            let swapped = patch.swapped();
            let r = &patch.range_a;
            for i in r.lo[0]..=r.hi[0] {
                for j in r.lo[1]..=r.hi[1] {
                    for k in r.lo[2]..=r.hi[2] {
                        let x = NodeRef::new(patch.block_a, i, j, k);
                        let y = partner_in_patch(patch, x);
                        prop_assert!(grid.contains(y));
                        prop_assert_eq!(partner_in_patch(&swapped, y), x);
                    }
                }
            }
        }
    }

    #[test]
    fn buckets_hold_exactly_the_input_pairs((grid, patches) in arb_case()) {
        let pairs = enumerate_all(&grid, &patches).unwrap();
        let buckets = bucketize(&grid, &pairs);
        let flattened: BTreeSet<NodePair> = buckets.iter_pairs().collect();
        prop_assert_eq!(flattened, pairs);
    }

    #[test]
    fn report_normalization_ignores_input_order(
        nodes in proptest::collection::btree_set(
            (1u32..=4, 1u32..=6, 1u32..=6, 1u32..=6)
                .prop_map(|(l, i, j, k)| NodeRef::new(l, i, j, k)),
            0..40,
        ),
        chunk_raw in proptest::collection::vec(1usize..=5, 0..40),
        rotate in any::<usize>(),
    ) {
        // Partition distinct nodes into disjoint classes.
        let nodes: Vec<NodeRef> = nodes.into_iter().collect();
        let mut classes: Vec<Vec<NodeRef>> = Vec::new();
        let mut at = 0;
        for len in chunk_raw {
            if at >= nodes.len() {
                break;
            }
            let end = (at + len).min(nodes.len());
            classes.push(nodes[at..end].to_vec());
            at = end;
        }
        let baseline = SingularityReport::from_classes(classes.clone());

        // Scramble class order, member order, and inject duplicates.
        if !classes.is_empty() {
            let by = rotate % classes.len();
            classes.rotate_left(by);
        }
        for c in classes.iter_mut() {
            c.reverse();
            let first = c[0];
            c.push(first);
        }
        let scrambled = SingularityReport::from_classes(classes);
        prop_assert!(oracle::reports_equal(&baseline, &scrambled));
        prop_assert_eq!(baseline.to_class_file(), scrambled.to_class_file());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engines_and_ground_truth_agree_on_random_splits(spec in arb_spec()) {
        let (grid, patches, truth) = generate_split(&spec);
        let pairs = enumerate_all(&grid, &patches).unwrap();
        let expected = truth.expected_report();
        let by_oracle = oracle::reconstruct(&pairs);
        prop_assert!(oracle::reports_equal(&by_oracle, &expected));
        prop_assert!(oracle::reports_equal(
            &reconstruct_naive(&grid, &pairs).unwrap(),
            &expected,
        ));
        prop_assert!(oracle::reports_equal(
            &reconstruct_fast(&grid, &pairs).unwrap(),
            &expected,
        ));
        prop_assert_eq!(
            by_oracle.size_census(),
            expected_census(&spec).as_size_census()
        );
    }

    #[test]
    fn both_addback_strategies_give_the_same_report(spec in arb_spec()) {
        let (grid, patches, _) = generate_split(&spec);
        let pairs = enumerate_all(&grid, &patches).unwrap();
        let bucketed = reconstruct_fast(&grid, &pairs).unwrap();
        let flat = reconstruct_fast_with(
            &grid,
            &pairs,
            FastConfig { flat_partner_index: true },
        ).unwrap();
        prop_assert!(oracle::reports_equal(&bucketed, &flat));
    }

    #[test]
    fn random_patchworks_agree_across_engines((grid, patches) in arb_case()) {
        // Arbitrary valid patches, not just box splits: the closure can
        // produce huge classes through stacked self-identifications, which
        // is exactly the stress the equivalence engines must survive.
        let pairs = enumerate_all(&grid, &patches).unwrap();
        let by_oracle = oracle::reconstruct(&pairs);
        prop_assert!(oracle::reports_equal(
            &reconstruct_naive(&grid, &pairs).unwrap(),
            &by_oracle,
        ));
        // The fast engine's edge seeding is only sound when every class
        // reaches a block edge, which arbitrary patchworks do not promise;
        // check it only when the diagnostic clears it.
        let orphans = mbconn::fast::classes_without_edge_nodes(&grid, &by_oracle).unwrap();
        if orphans.is_empty() {
            prop_assert!(oracle::reports_equal(
                &reconstruct_fast(&grid, &pairs).unwrap(),
                &by_oracle,
            ));
        }
    }
}
