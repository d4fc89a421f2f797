//! Synthetic grid generation with analytic ground truth.
//!
//! A global node box is split along axis-aligned interior cut planes into a
//! lattice of blocks; nodes on a cut plane are duplicated into both adjacent
//! blocks, and full-face identity interfaces stitch the lattice back
//! together. Because the construction is explicit, every block-local node
//! maps back to its global point, which makes the singular classes of the
//! result computable in closed form: a point picks up one factor of two for
//! every cut plane through it, so its copy count is 2^(number of cut planes
//! through the point), and exactly the points on two or three planes are
//! singular (4 and 8 copies).
//!
//! A scaling series refines a base split by doubling the cut density per
//! step at fixed global dims, growing the block and singular-node counts
//! geometrically for benchmark sweeps.

use crate::grid::{BlockDims, Grid, IndexRange, InterfacePatch, NodeRef, Transform};
use crate::report::SingularityReport;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("global extent on axis {axis} must be at least 2, got {n}")]
    SmallGlobalExtent { axis: u8, n: u32 },
    #[error("cut {cut} on axis {axis} is not interior: cuts must lie in 2..={max}")]
    CutOutOfRange { axis: u8, cut: u32, max: u32 },
    #[error("cuts on axis {axis} must be strictly increasing, got {prev} then {cut}")]
    CutsNotIncreasing { axis: u8, prev: u32, cut: u32 },
    #[error(
        "scaling step {step} wants {wanted} cuts on axis {axis} but at most {max} fit the extent"
    )]
    SeriesSaturated {
        axis: u8,
        step: usize,
        wanted: usize,
        max: u32,
    },
}

/// A recipe for splitting a global node box: global node counts per axis
/// plus strictly increasing interior cut indices per axis. A cut at index
/// `c` means the node plane `c` is shared by the blocks on either side.
///
/// Construction validates, so a held value is always a legal recipe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthSpec {
    global: [u32; 3],
    cuts: [Vec<u32>; 3],
}

impl SynthSpec {
    pub fn new(
        global_ni: u32,
        global_nj: u32,
        global_nk: u32,
        cuts_i: Vec<u32>,
        cuts_j: Vec<u32>,
        cuts_k: Vec<u32>,
    ) -> Result<SynthSpec, SynthError> {
        let spec = SynthSpec {
            global: [global_ni, global_nj, global_nk],
            cuts: [cuts_i, cuts_j, cuts_k],
        };
        for a in 0..3 {
            let axis = a as u8 + 1;
            let n = spec.global[a];
            if n < 2 {
                return Err(SynthError::SmallGlobalExtent { axis, n });
            }
            let mut prev = None;
            for &cut in &spec.cuts[a] {
                if !(2..=n - 1).contains(&cut) {
                    return Err(SynthError::CutOutOfRange {
                        axis,
                        cut,
                        max: n - 1,
                    });
                }
                if let Some(p) = prev {
                    if cut <= p {
                        return Err(SynthError::CutsNotIncreasing { axis, prev: p, cut });
                    }
                }
                prev = Some(cut);
            }
        }
        Ok(spec)
    }

    /// Global node count along `axis` (1, 2 or 3).
    pub fn global_extent(&self, axis: u8) -> u32 {
        self.global[axis as usize - 1]
    }

    pub fn cuts(&self, axis: u8) -> &[u32] {
        &self.cuts[axis as usize - 1]
    }

    /// Number of distinct physical points in the box.
    pub fn global_node_count(&self) -> u64 {
        self.global.iter().map(|&n| n as u64).product()
    }

    pub fn segment_count(&self, axis: u8) -> usize {
        self.cuts[axis as usize - 1].len() + 1
    }

    pub fn block_count(&self) -> u64 {
        (1..=3).map(|a| self.segment_count(a) as u64).product()
    }
}

/// Analytic class census of a split: how many singular classes of each size
/// the grid must contain. Only sizes 4 and 8 occur, since a point lies on
/// at most one cut plane per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusCounts {
    pub size4: u64,
    pub size8: u64,
}

impl CensusCounts {
    pub fn class_count(&self) -> u64 {
        self.size4 + self.size8
    }

    pub fn singular_node_count(&self) -> u64 {
        4 * self.size4 + 8 * self.size8
    }

    /// In the shape of `SingularityReport::size_census`: ascending sizes,
    /// zero counts omitted.
    pub fn as_size_census(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if self.size4 > 0 {
            out.push((4, self.size4 as usize));
        }
        if self.size8 > 0 {
            out.push((8, self.size8 as usize));
        }
        out
    }
}

/// Closed-form census. Size-8 classes sit on one cut plane of every axis;
/// size-4 classes sit on cut planes of exactly two axes, so the third axis
/// ranges over its full extent minus its own cut planes.
pub fn expected_census(spec: &SynthSpec) -> CensusCounts {
    let c: Vec<u64> = (0..3).map(|a| spec.cuts[a].len() as u64).collect();
    let n: Vec<u64> = (0..3).map(|a| spec.global[a] as u64).collect();
    let size8 = c[0] * c[1] * c[2];
    let size4 =
        c[0] * c[1] * (n[2] - c[2]) + c[0] * c[2] * (n[1] - c[1]) + c[1] * c[2] * (n[0] - c[0]);
    CensusCounts { size4, size8 }
}

/// The node-level answer key for a generated split: maps block-local nodes
/// to global points and back, counts copies, and can produce the full
/// expected singularity report without running any engine.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    spec: SynthSpec,
    // Per axis: [1, cuts.., extent]; segment s spans nodes
    // bounds[s]..=bounds[s+1] inclusive, so adjacent segments share the cut
    // plane node.
    bounds: [Vec<u32>; 3],
}

impl GroundTruth {
    fn new(spec: SynthSpec) -> GroundTruth {
        let bounds = std::array::from_fn(|a| {
            let mut b = vec![1];
            b.extend_from_slice(&spec.cuts[a]);
            b.push(spec.global[a]);
            b
        });
        GroundTruth { spec, bounds }
    }

    pub fn spec(&self) -> &SynthSpec {
        &self.spec
    }

    fn seg_count(&self, a: usize) -> usize {
        self.bounds[a].len() - 1
    }

    /// Node count of segment `s` on 0-based axis `a`.
    fn seg_len(&self, a: usize, s: usize) -> u32 {
        self.bounds[a][s + 1] - self.bounds[a][s] + 1
    }

    /// Row-major block id of the segment triple, 1-based.
    pub fn block_id(&self, seg: [usize; 3]) -> u32 {
        let (nsj, nsk) = (self.seg_count(1), self.seg_count(2));
        ((seg[0] * nsj + seg[1]) * nsk + seg[2]) as u32 + 1
    }

    pub fn segments_of_block(&self, block: u32) -> Option<[usize; 3]> {
        let (nsi, nsj, nsk) = (self.seg_count(0), self.seg_count(1), self.seg_count(2));
        let idx = (block as usize).checked_sub(1)?;
        if idx >= nsi * nsj * nsk {
            return None;
        }
        Some([idx / (nsj * nsk), idx / nsk % nsj, idx % nsk])
    }

    /// The global point a block-local node is a copy of.
    pub fn global_of(&self, node: NodeRef) -> Option<[u32; 3]> {
        let seg = self.segments_of_block(node.block)?;
        let mut g = [0u32; 3];
        for a in 0..3 {
            let local = node.index(a as u8 + 1);
            if local < 1 || local > self.seg_len(a, seg[a]) {
                return None;
            }
            g[a] = self.bounds[a][seg[a]] + local - 1;
        }
        Some(g)
    }

    /// Dense 1-based id of a global point, k fastest.
    pub fn gid_of(&self, g: [u32; 3]) -> u64 {
        let (nj, nk) = (self.spec.global[1] as u64, self.spec.global[2] as u64);
        ((g[0] as u64 - 1) * nj + (g[1] as u64 - 1)) * nk + g[2] as u64
    }

    pub fn global_from_gid(&self, gid: u64) -> Option<[u32; 3]> {
        let (nj, nk) = (self.spec.global[1] as u64, self.spec.global[2] as u64);
        if gid < 1 || gid > self.spec.global_node_count() {
            return None;
        }
        let z = gid - 1;
        Some([
            (z / (nj * nk)) as u32 + 1,
            (z / nk % nj) as u32 + 1,
            (z % nk) as u32 + 1,
        ])
    }

    /// How many block-local copies the global point has: one factor of two
    /// per cut plane through it.
    pub fn copy_count(&self, g: [u32; 3]) -> u32 {
        let planes = (0..3)
            .filter(|&a| self.spec.cuts[a].binary_search(&g[a]).is_ok())
            .count();
        1 << planes
    }

    /// Every block-local copy of the global point, sorted. On each axis the
    /// coordinate belongs to one segment, or to two when it is a cut plane;
    /// the copies are the product over axes.
    pub fn local_copies(&self, g: [u32; 3]) -> Vec<NodeRef> {
        let mut per_axis: [Vec<(usize, u32)>; 3] = Default::default();
        for a in 0..3 {
            for s in 0..self.seg_count(a) {
                let (lo, hi) = (self.bounds[a][s], self.bounds[a][s + 1]);
                if (lo..=hi).contains(&g[a]) {
                    per_axis[a].push((s, g[a] - lo + 1));
                }
            }
        }
        let mut copies = Vec::new();
        for &(si, li) in &per_axis[0] {
            for &(sj, lj) in &per_axis[1] {
                for &(sk, lk) in &per_axis[2] {
                    copies.push(NodeRef::new(self.block_id([si, sj, sk]), li, lj, lk));
                }
            }
        }
        copies.sort_unstable();
        copies
    }

    /// All singular global points as `(gid, copy count)`, ascending by gid.
    /// A point is singular when it lies on cut planes of at least two axes.
    pub fn singular_points(&self) -> Vec<(u64, u32)> {
        let mut points = Vec::new();
        let cuts = &self.spec.cuts;
        // Pairs of axes carrying the planes; the third axis sweeps its full
        // extent. Points on all three planes would be tripled here, so the
        // sweep skips the third axis's own cut planes and the triples are
        // added once at the end.
        for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let other = 3 - a - b;
            for &ca in &cuts[a] {
                for &cb in &cuts[b] {
                    for x in 1..=self.spec.global[other] {
                        if cuts[other].binary_search(&x).is_ok() {
                            continue;
                        }
                        let mut g = [0u32; 3];
                        g[a] = ca;
                        g[b] = cb;
                        g[other] = x;
                        points.push((self.gid_of(g), 4));
                    }
                }
            }
        }
        for &ci in &cuts[0] {
            for &cj in &cuts[1] {
                for &ck in &cuts[2] {
                    points.push((self.gid_of([ci, cj, ck]), 8));
                }
            }
        }
        points.sort_unstable();
        points
    }

    /// The full expected singularity report, built from the closed form
    /// with no engine involved.
    pub fn expected_report(&self) -> SingularityReport {
        let classes = self
            .singular_points()
            .iter()
            .map(|&(gid, _)| {
                let g = self.global_from_gid(gid).expect("gid from singular_points");
                self.local_copies(g)
            })
            .collect();
        SingularityReport::from_classes(classes)
    }

    pub fn census(&self) -> CensusCounts {
        expected_census(&self.spec)
    }

    /// Every block-local node with its gid, in canonical node order.
    /// Sized like the whole grid; meant for the flag-gated full dump.
    pub fn full_map(&self) -> Vec<(NodeRef, u64)> {
        let mut map = Vec::new();
        for si in 0..self.seg_count(0) {
            for sj in 0..self.seg_count(1) {
                for sk in 0..self.seg_count(2) {
                    let block = self.block_id([si, sj, sk]);
                    for i in 1..=self.seg_len(0, si) {
                        for j in 1..=self.seg_len(1, sj) {
                            for k in 1..=self.seg_len(2, sk) {
                                let node = NodeRef::new(block, i, j, k);
                                let g = self.global_of(node).expect("node is in range");
                                map.push((node, self.gid_of(g)));
                            }
                        }
                    }
                }
            }
        }
        map
    }
}

/// Splits the box: one block per segment triple in row-major id order, one
/// full-face identity interface per axis-adjacent block pair (block-id
/// ascending, +i then +j then +k neighbors).
pub fn generate_split(spec: &SynthSpec) -> (Grid, Vec<InterfacePatch>, GroundTruth) {
    let gt = GroundTruth::new(spec.clone());

    let mut blocks = Vec::new();
    let (nsi, nsj, nsk) = (gt.seg_count(0), gt.seg_count(1), gt.seg_count(2));
    for si in 0..nsi {
        for sj in 0..nsj {
            for sk in 0..nsk {
                blocks.push(BlockDims::new(
                    gt.seg_len(0, si),
                    gt.seg_len(1, sj),
                    gt.seg_len(2, sk),
                ));
            }
        }
    }
    // Interior cuts leave at least two nodes per segment.
    let grid = Grid::new(blocks).expect("segments are non-degenerate");

    let mut patches = Vec::new();
    for si in 0..nsi {
        for sj in 0..nsj {
            for sk in 0..nsk {
                let seg = [si, sj, sk];
                for a in 0..3 {
                    let mut nseg = seg;
                    nseg[a] += 1;
                    if nseg[a] >= gt.seg_count(a) {
                        continue;
                    }
                    let id_a = gt.block_id(seg);
                    let id_b = gt.block_id(nseg);
                    let dims_a = grid.block(id_a).unwrap();
                    let dims_b = grid.block(id_b).unwrap();
                    // Full shared face: pinned at A's high plane and B's
                    // low plane on the split axis, full extent elsewhere.
                    let mut lo_a = [1u32; 3];
                    let hi_a = [dims_a.ni, dims_a.nj, dims_a.nk];
                    lo_a[a] = hi_a[a];
                    let lo_b = [1u32; 3];
                    let mut hi_b = [dims_b.ni, dims_b.nj, dims_b.nk];
                    hi_b[a] = lo_b[a];
                    patches.push(InterfacePatch {
                        block_a: id_a,
                        range_a: IndexRange::new(lo_a, hi_a),
                        block_b: id_b,
                        range_b: IndexRange::new(lo_b, hi_b),
                        transform: Transform::IDENTITY,
                    });
                }
            }
        }
    }
    (grid, patches, gt)
}

/// `count` cut indices spread evenly across the interior of an axis with
/// `extent` nodes: cut t sits at round(1 + t·(extent−1)/(count+1)).
pub fn evenly_spaced_cuts(extent: u32, count: usize) -> Vec<u32> {
    let gap = (extent - 1) as f64 / (count + 1) as f64;
    (1..=count)
        .map(|t| (1.0 + t as f64 * gap).round() as u32)
        .collect()
}

/// A benchmark series at fixed global dims: element 0 is `base`; each later
/// step replaces every cut axis's list with evenly spaced cuts at double
/// the previous density (count c becomes 2c+1, halving every gap), so block
/// and singular-node counts grow geometrically. Axes the base leaves uncut
/// stay uncut. Fails when a step asks for more cuts than the interior of
/// an axis can hold.
pub fn scaling_series(base: &SynthSpec, steps: usize) -> Result<Vec<SynthSpec>, SynthError> {
    let mut series = Vec::with_capacity(steps);
    if steps == 0 {
        return Ok(series);
    }
    series.push(base.clone());
    for step in 1..steps {
        let mut cuts: [Vec<u32>; 3] = Default::default();
        for (a, out) in cuts.iter_mut().enumerate() {
            let c0 = base.cuts[a].len();
            if c0 == 0 {
                continue;
            }
            let wanted = (c0 + 1) * (1usize << step) - 1;
            let extent = base.global[a];
            // Evenly spaced cuts stay strictly increasing and interior
            // exactly while the gap is at least one node.
            if wanted as u64 > extent as u64 - 2 {
                return Err(SynthError::SeriesSaturated {
                    axis: a as u8 + 1,
                    step,
                    wanted,
                    max: extent - 2,
                });
            }
            *out = evenly_spaced_cuts(extent, wanted);
        }
        let [ci, cj, ck] = cuts;
        series.push(SynthSpec::new(
            base.global[0],
            base.global[1],
            base.global[2],
            ci,
            cj,
            ck,
        )?);
    }
    Ok(series)
}

/// Renders the ground-truth sidecar: header line, one `point <gid>
/// <ncopies>` line per singular point in gid order, and optionally one
/// `map <block> <i> <j> <k> <gid>` line per node of the whole grid.
pub fn write_ground_truth(gt: &GroundTruth, full_map: bool) -> String {
    let mut out = String::from("GT 1\n");
    for (gid, copies) in gt.singular_points() {
        writeln!(out, "point {gid} {copies}").unwrap();
    }
    if full_map {
        for (node, gid) in gt.full_map() {
            writeln!(
                out,
                "map {} {} {} {} {gid}",
                node.block, node.i, node.j, node.k
            )
            .unwrap();
        }
    }
    out
}

/// Parsed form of the sidecar, as written or hand-edited: the singular
/// census and the (possibly absent) node map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GtFile {
    pub points: Vec<(u64, u32)>,
    pub map: Vec<(NodeRef, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ground-truth file line {line}: {msg}")]
pub struct GtParseError {
    pub line: usize,
    pub msg: String,
}

pub fn parse_ground_truth(text: &str) -> Result<GtFile, GtParseError> {
    let mut file = GtFile::default();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| GtParseError { line, msg };
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let parse_u64 = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| err(format!("expected an integer, got {s:?}")))
        };
        if !saw_header {
            if fields != ["GT", "1"] {
                return Err(err(format!(
                    "expected header \"GT 1\", got {:?}",
                    body.trim()
                )));
            }
            saw_header = true;
            continue;
        }
        match fields[0] {
            "point" if fields.len() == 3 => {
                let gid = parse_u64(fields[1])?;
                let copies = parse_u64(fields[2])?;
                file.points.push((gid, copies as u32));
            }
            "map" if fields.len() == 6 => {
                let v: Vec<u64> = fields[1..]
                    .iter()
                    .map(|s| parse_u64(s))
                    .collect::<Result<_, _>>()?;
                file.map.push((
                    NodeRef::new(v[0] as u32, v[1] as u32, v[2] as u32, v[3] as u32),
                    v[4],
                ));
            }
            "point" | "map" => {
                return Err(err(format!(
                    "record {:?} has {} fields, expected {}",
                    fields[0],
                    fields.len() - 1,
                    if fields[0] == "point" { 2 } else { 5 }
                )));
            }
            other => return Err(err(format!("unknown record {other:?}"))),
        }
    }
    if !saw_header {
        return Err(GtParseError {
            line: 1,
            msg: "missing \"GT 1\" header".into(),
        });
    }
    Ok(file)
}
