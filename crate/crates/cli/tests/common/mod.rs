//! Shared helpers for the integration tests: construction of the committed
//! grid fixtures (with their expected reports derived independently of the
//! engines) and plumbing for driving the real binary.

#![allow(dead_code)]

use mbconn::grid::{BlockDims, Grid, IndexRange, InterfacePatch, NodeRef, Transform};
use mbconn::mbc;
use mbconn::report::SingularityReport;
use std::path::PathBuf;
use std::process::{Command, Output};

pub struct Fixture {
    pub name: &'static str,
    pub text: String,
    pub expected: SingularityReport,
}

/// All 48 signed axis permutations, permutation-major: chunk g of 8 holds
/// every sign mask of one permutation.
pub fn all_transforms() -> Vec<Transform> {
    let perms = [
        [1, 2, 3],
        [1, 3, 2],
        [2, 1, 3],
        [2, 3, 1],
        [3, 1, 2],
        [3, 2, 1],
    ];
    let mut out = Vec::new();
    for p in perms {
        for mask in 0..8u8 {
            let mut t = [0i8; 3];
            for a in 0..3 {
                let sign: i8 = if mask >> a & 1 == 1 { -1 } else { 1 };
                t[a] = p[a] as i8 * sign;
            }
            out.push(Transform(t));
        }
    }
    out
}

/// A three-block junction exercising one transform: block A's 5x3 face is
/// covered by B over j 1..3 (identity) and C over j 3..5 (transform `t`),
/// and B and C also declare their shared seam face. The face line j=3 of A
/// then has three copies per k, two of them on block edges and A's middle
/// one (5,3,2) in the face interior, which only the add-back step can
/// recover.
///
/// Returns blocks, patches and the three expected classes, all with block
/// ids offset by `base`.
pub fn junction_gadget(
    t: Transform,
    base: u32,
) -> (Vec<BlockDims>, Vec<InterfacePatch>, Vec<Vec<NodeRef>>) {
    assert!(t.is_valid());
    let (a_id, b_id, c_id) = (base + 1, base + 2, base + 3);
    let blocks = vec![
        BlockDims::new(5, 5, 3),
        BlockDims::new(3, 3, 3),
        BlockDims::new(3, 3, 3),
    ];

    let [t1, t2, t3] = t.0;
    let (p1, p2, p3) = (
        t1.unsigned_abs() as usize - 1,
        t2.unsigned_abs() as usize - 1,
        t3.unsigned_abs() as usize - 1,
    );

    // A's face region j 1..3 onto B's face i=1, axes aligned.
    let a_b = InterfacePatch {
        block_a: a_id,
        range_a: IndexRange::new([5, 1, 1], [5, 3, 3]),
        block_b: b_id,
        range_b: IndexRange::new([1, 1, 1], [1, 3, 3]),
        transform: Transform::IDENTITY,
    };

    // A's face region j 3..5 onto C under `t`: the image of A's degenerate
    // i axis is pinned at C's low face, the other two image axes span C.
    let mut lo_c = [1u32; 3];
    let mut hi_c = [3u32; 3];
    hi_c[p1] = 1;
    let a_c = InterfacePatch {
        block_a: a_id,
        range_a: IndexRange::new([5, 3, 1], [5, 5, 3]),
        block_b: c_id,
        range_b: IndexRange::new(lo_c, hi_c),
        transform: t,
    };

    // The B-C seam: B's face j=3 meets C along the image of A's j=3 line,
    // extruded outward. Outward depth runs up C's axis |t1| whatever the
    // sign of t1 (a degenerate image axis carries no direction), so the
    // seam transform maps B's i to +|t1| and keeps t2, t3 for the rest.
    let c_join = if t2 > 0 { 1 } else { 3 };
    lo_c = [1; 3];
    hi_c = [3; 3];
    lo_c[p2] = c_join;
    hi_c[p2] = c_join;
    let b_c = InterfacePatch {
        block_a: b_id,
        range_a: IndexRange::new([1, 3, 1], [3, 3, 3]),
        block_b: c_id,
        range_b: IndexRange::new(lo_c, hi_c),
        transform: Transform([t1.abs(), t2, t3]),
    };

    // Per k, the junction line's three copies: A interiorish, B and C on
    // their block edges.
    let classes = (1..=3)
        .map(|k| {
            let mut c = [0u32; 3];
            c[p1] = 1;
            c[p2] = c_join;
            c[p3] = if t3 > 0 { k } else { 4 - k };
            vec![
                NodeRef::new(a_id, 5, 3, k),
                NodeRef::new(b_id, 1, 3, k),
                NodeRef::new(c_id, c[0], c[1], c[2]),
            ]
        })
        .collect();

    (blocks, vec![a_b, a_c, b_c], classes)
}

/// One fixture file holding eight junction gadgets: every sign mask of one
/// axis permutation.
fn transform_fixture(name: &'static str, perm_index: usize) -> Fixture {
    let transforms = &all_transforms()[perm_index * 8..perm_index * 8 + 8];
    let mut blocks = Vec::new();
    let mut patches = Vec::new();
    let mut classes = Vec::new();
    for (g, &t) in transforms.iter().enumerate() {
        let (b, p, c) = junction_gadget(t, g as u32 * 3);
        blocks.extend(b);
        patches.extend(p);
        classes.extend(c);
    }
    let grid = Grid::new(blocks).unwrap();
    for p in &patches {
        p.validate(&grid).unwrap();
    }
    Fixture {
        name,
        text: mbc::write(&grid, &patches),
        expected: SingularityReport::from_classes(classes),
    }
}

/// Edge and point contacts: three blocks sharing a spine edge (one of the
/// joints axis-scrambled and reversed) and a fourth touching the spine's
/// first node corner to corner.
fn contacts_fixture() -> Fixture {
    let blocks = vec![BlockDims::new(3, 3, 3); 4];
    let grid = Grid::new(blocks).unwrap();
    let patches = vec![
        // Spine edge of 1 glued to spine edge of 2, axes aligned.
        InterfacePatch {
            block_a: 1,
            range_a: IndexRange::new([1, 1, 1], [1, 1, 3]),
            block_b: 2,
            range_b: IndexRange::new([1, 1, 1], [1, 1, 3]),
            transform: Transform::IDENTITY,
        },
        // Same spine on 3, but along 3's i axis, reversed.
        InterfacePatch {
            block_a: 2,
            range_a: IndexRange::new([1, 1, 1], [1, 1, 3]),
            block_b: 3,
            range_b: IndexRange::new([1, 1, 1], [3, 1, 1]),
            transform: Transform([2, 3, -1]),
        },
        // Corner of 1 against the opposite corner of 4.
        InterfacePatch {
            block_a: 1,
            range_a: IndexRange::new([1, 1, 1], [1, 1, 1]),
            block_b: 4,
            range_b: IndexRange::new([3, 3, 3], [3, 3, 3]),
            transform: Transform::IDENTITY,
        },
    ];
    for p in &patches {
        p.validate(&grid).unwrap();
    }
    let classes = vec![
        vec![
            NodeRef::new(1, 1, 1, 1),
            NodeRef::new(2, 1, 1, 1),
            NodeRef::new(3, 3, 1, 1),
            NodeRef::new(4, 3, 3, 3),
        ],
        vec![
            NodeRef::new(1, 1, 1, 2),
            NodeRef::new(2, 1, 1, 2),
            NodeRef::new(3, 2, 1, 1),
        ],
        vec![
            NodeRef::new(1, 1, 1, 3),
            NodeRef::new(2, 1, 1, 3),
            NodeRef::new(3, 1, 1, 1),
        ],
    ];
    Fixture {
        name: "contacts.mbc",
        text: mbc::write(&grid, &patches),
        expected: SingularityReport::from_classes(classes),
    }
}

/// A block wrapping onto itself (face i=1 glued to face i=5) plus a second
/// block seated on one edge of the seam, tripling the seam edge's nodes.
fn selfwrap_fixture() -> Fixture {
    let grid = Grid::new(vec![BlockDims::new(5, 3, 3), BlockDims::new(3, 3, 3)]).unwrap();
    let patches = vec![
        InterfacePatch {
            block_a: 1,
            range_a: IndexRange::new([1, 1, 1], [1, 3, 3]),
            block_b: 1,
            range_b: IndexRange::new([5, 1, 1], [5, 3, 3]),
            transform: Transform::IDENTITY,
        },
        // Seam edge k=1 carried onto an edge of block 2.
        InterfacePatch {
            block_a: 1,
            range_a: IndexRange::new([1, 1, 1], [1, 3, 1]),
            block_b: 2,
            range_b: IndexRange::new([1, 1, 1], [3, 1, 1]),
            transform: Transform([2, 1, 3]),
        },
    ];
    for p in &patches {
        p.validate(&grid).unwrap();
    }
    let classes = (1..=3)
        .map(|j| {
            vec![
                NodeRef::new(1, 1, j, 1),
                NodeRef::new(1, 5, j, 1),
                NodeRef::new(2, j, 1, 1),
            ]
        })
        .collect();
    Fixture {
        name: "selfwrap.mbc",
        text: mbc::write(&grid, &patches),
        expected: SingularityReport::from_classes(classes),
    }
}

/// Every committed fixture with its canonical bytes and expected report.
pub fn all_fixtures() -> Vec<Fixture> {
    vec![
        transform_fixture("transforms_123.mbc", 0),
        transform_fixture("transforms_132.mbc", 1),
        transform_fixture("transforms_213.mbc", 2),
        transform_fixture("transforms_231.mbc", 3),
        transform_fixture("transforms_312.mbc", 4),
        transform_fixture("transforms_321.mbc", 5),
        contacts_fixture(),
        selfwrap_fixture(),
    ]
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Scratch directory for files a test creates; unique per test name.
pub fn scratch_dir(test: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(test);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Runs the real binary with the given arguments.
pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbconn"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

pub fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}
