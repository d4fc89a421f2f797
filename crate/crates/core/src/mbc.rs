//! The MBC connectivity file format.
//!
//! MBC is a line-oriented UTF-8 text format carrying block dimensions and
//! 1-to-1 interface records. Fields are whitespace-separated; `#` starts a
//! comment that runs to end of line; blank lines are ignored.
//!
//! ```text
//! MBC 1
//! blocks <n>
//! block <id> <ni> <nj> <nk>          # ids must appear as 1..n in order
//! interfaces <m>
//! interface <A> <ilo> <ihi> <jlo> <jhi> <klo> <khi>  <B> <ilo> <ihi> <jlo> <jhi> <klo> <khi>  <t1> <t2> <t3>
//! ```
//!
//! `write` emits the canonical serialization; parsing a canonical document
//! and writing it again reproduces it byte for byte.

use crate::grid::{BlockDims, Grid, IndexRange, InterfacePatch, PatchViolation, Side, Transform};
use std::fmt::Write as _;
use thiserror::Error;

/// What went wrong, independent of position. Robustness tests key on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MbcErrorKind {
    /// Structural damage: bad header, wrong keyword, missing or extra
    /// fields, unparsable numbers, out-of-order block ids, degenerate block
    /// dimensions, a range that is not a face/edge/point contact.
    MalformedSyntax,
    /// An interface names a block id outside `1..=n`.
    UnknownBlockId,
    /// A range interval is descending or exceeds its block's dimensions.
    RangeOutOfBounds,
    /// A transform triple is not a signed permutation of (1,2,3).
    BadTransform,
    /// Mapped range extents disagree under the transform.
    ExtentMismatch,
}

impl std::fmt::Display for MbcErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MbcErrorKind::MalformedSyntax => "malformed-syntax",
            MbcErrorKind::UnknownBlockId => "unknown-block-id",
            MbcErrorKind::RangeOutOfBounds => "range-out-of-bounds",
            MbcErrorKind::BadTransform => "bad-transform",
            MbcErrorKind::ExtentMismatch => "extent-mismatch",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at line {line}, column {col}: {msg}")]
pub struct MbcError {
    pub kind: MbcErrorKind,
    /// 1-based line number.
    pub line: usize,
    /// 1-based byte column of the offending token (1 for whole-line errors).
    pub col: usize,
    pub msg: String,
}

impl MbcError {
    fn new(kind: MbcErrorKind, line: usize, col: usize, msg: impl Into<String>) -> Self {
        MbcError {
            kind,
            line,
            col,
            msg: msg.into(),
        }
    }
}

/// Parses an MBC document into a validated grid and patch list.
pub fn parse(text: &str) -> Result<(Grid, Vec<InterfacePatch>), MbcError> {
    let mut lines = Lines::new(text);

    let header = lines.expect_line("MBC header")?;
    header.expect_exact(&["MBC", "1"], "expected header `MBC 1`")?;

    let blocks_line = lines.expect_line("blocks count")?;
    blocks_line.expect_keyword("blocks")?;
    let n_blocks: u32 = blocks_line.field(1, "block count")?;
    blocks_line.expect_end(2)?;

    let mut dims = Vec::with_capacity(n_blocks as usize);
    for expect_id in 1..=n_blocks {
        let line = lines.expect_line("block record")?;
        line.expect_keyword("block")?;
        let id: u32 = line.field(1, "block id")?;
        if id != expect_id {
            return Err(MbcError::new(
                MbcErrorKind::MalformedSyntax,
                line.number,
                line.col(1),
                format!("block ids must appear in order; expected {expect_id}, got {id}"),
            ));
        }
        let ni: u32 = line.field(2, "ni")?;
        let nj: u32 = line.field(3, "nj")?;
        let nk: u32 = line.field(4, "nk")?;
        line.expect_end(5)?;
        if ni < 2 || nj < 2 || nk < 2 {
            return Err(MbcError::new(
                MbcErrorKind::MalformedSyntax,
                line.number,
                line.col(2),
                format!("block dimensions must be at least 2, got {ni} {nj} {nk}"),
            ));
        }
        dims.push(BlockDims::new(ni, nj, nk));
    }
    let grid = Grid::new(dims).expect("dimensions were checked above");

    let ifaces_line = lines.expect_line("interfaces count")?;
    ifaces_line.expect_keyword("interfaces")?;
    let n_ifaces: u32 = ifaces_line.field(1, "interface count")?;
    ifaces_line.expect_end(2)?;

    let mut patches = Vec::with_capacity(n_ifaces as usize);
    for _ in 0..n_ifaces {
        let line = lines.expect_line("interface record")?;
        line.expect_keyword("interface")?;
        let block_a: u32 = line.field(1, "side-A block id")?;
        let range_a = parse_range(&line, 2)?;
        let block_b: u32 = line.field(8, "side-B block id")?;
        let range_b = parse_range(&line, 9)?;
        let t1: i8 = line.field(15, "t1")?;
        let t2: i8 = line.field(16, "t2")?;
        let t3: i8 = line.field(17, "t3")?;
        line.expect_end(18)?;

        let patch = InterfacePatch {
            block_a,
            range_a,
            block_b,
            range_b,
            transform: Transform([t1, t2, t3]),
        };
        if let Err(v) = patch.validate(&grid) {
            return Err(violation_error(&line, &patch, v));
        }
        patches.push(patch);
    }

    lines.expect_eof()?;
    Ok((grid, patches))
}

/// Maps a semantic patch violation onto the file error class, pointing the
/// column at the field that triggered it.
fn violation_error(line: &Line<'_>, patch: &InterfacePatch, v: PatchViolation) -> MbcError {
    // Field layout: 1 = A, 2..=7 = A range, 8 = B, 9..=14 = B range,
    // 15..=17 = transform.
    let range_base = |side: &Side| match side {
        Side::A => 2,
        Side::B => 9,
    };
    let (kind, field) = match &v {
        PatchViolation::UnknownBlock(id) => (
            MbcErrorKind::UnknownBlockId,
            if *id == patch.block_a { 1 } else { 8 },
        ),
        PatchViolation::DescendingRange { side, axis, .. }
        | PatchViolation::RangeOutOfBounds { side, axis, .. } => (
            MbcErrorKind::RangeOutOfBounds,
            range_base(side) + 2 * (*axis as usize - 1),
        ),
        PatchViolation::NotAContact { side } => (MbcErrorKind::MalformedSyntax, range_base(side)),
        PatchViolation::BadTransform(_) => (MbcErrorKind::BadTransform, 15),
        PatchViolation::ExtentMismatch { axis_a, .. } => {
            (MbcErrorKind::ExtentMismatch, 2 + 2 * (*axis_a as usize - 1))
        }
    };
    MbcError::new(kind, line.number, line.col(field), v.to_string())
}

fn parse_range(line: &Line<'_>, first_field: usize) -> Result<IndexRange, MbcError> {
    let mut lo = [0u32; 3];
    let mut hi = [0u32; 3];
    for a in 0..3 {
        lo[a] = line.field(first_field + 2 * a, "range lo")?;
        hi[a] = line.field(first_field + 2 * a + 1, "range hi")?;
    }
    Ok(IndexRange::new(lo, hi))
}

/// Canonical serialization. `parse(write(grid, patches))` returns the same
/// grid and patches, and writing that parse again is byte-identical.
pub fn write(grid: &Grid, patches: &[InterfacePatch]) -> String {
    let mut out = String::new();
    out.push_str("MBC 1\n");
    let _ = writeln!(out, "blocks {}", grid.block_count());
    for (idx, b) in grid.blocks().iter().enumerate() {
        let _ = writeln!(out, "block {} {} {} {}", idx + 1, b.ni, b.nj, b.nk);
    }
    let _ = writeln!(out, "interfaces {}", patches.len());
    for p in patches {
        let _ = writeln!(
            out,
            "interface {} {}  {} {}  {} {} {}",
            p.block_a,
            range_fields(&p.range_a),
            p.block_b,
            range_fields(&p.range_b),
            p.transform.0[0],
            p.transform.0[1],
            p.transform.0[2],
        );
    }
    out
}

fn range_fields(r: &IndexRange) -> String {
    format!(
        "{} {} {} {} {} {}",
        r.lo[0], r.hi[0], r.lo[1], r.hi[1], r.lo[2], r.hi[2]
    )
}

/// One significant line: its 1-based number and tokens with byte columns.
struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn col(&self, field: usize) -> usize {
        self.tokens
            .get(field)
            .or_else(|| self.tokens.last())
            .map_or(1, |(c, _)| *c)
    }

    fn expect_keyword(&self, kw: &str) -> Result<(), MbcError> {
        match self.tokens.first() {
            Some((_, tok)) if *tok == kw => Ok(()),
            Some((col, tok)) => Err(MbcError::new(
                MbcErrorKind::MalformedSyntax,
                self.number,
                *col,
                format!("expected keyword `{kw}`, got `{tok}`"),
            )),
            None => unreachable!("blank lines are skipped"),
        }
    }

    fn expect_exact(&self, want: &[&str], msg: &str) -> Result<(), MbcError> {
        let got: Vec<&str> = self.tokens.iter().map(|(_, t)| *t).collect();
        if got == want {
            Ok(())
        } else {
            Err(MbcError::new(
                MbcErrorKind::MalformedSyntax,
                self.number,
                self.col(0),
                msg,
            ))
        }
    }

    fn field<T: std::str::FromStr>(&self, idx: usize, what: &str) -> Result<T, MbcError> {
        match self.tokens.get(idx) {
            Some((col, tok)) => tok.parse().map_err(|_| {
                MbcError::new(
                    MbcErrorKind::MalformedSyntax,
                    self.number,
                    *col,
                    format!("cannot parse {what} from `{tok}`"),
                )
            }),
            None => Err(MbcError::new(
                MbcErrorKind::MalformedSyntax,
                self.number,
                self.col(idx),
                format!("missing field: {what}"),
            )),
        }
    }

    fn expect_end(&self, field_count: usize) -> Result<(), MbcError> {
        match self.tokens.get(field_count) {
            None => Ok(()),
            Some((col, tok)) => Err(MbcError::new(
                MbcErrorKind::MalformedSyntax,
                self.number,
                *col,
                format!("unexpected trailing field `{tok}`"),
            )),
        }
    }
}

/// Iterator over significant lines; comments and blank lines are skipped.
struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last_line: 0,
        }
    }

    fn next_significant(&mut self) -> Option<Line<'a>> {
        for (idx, raw) in self.inner.by_ref() {
            self.last_line = idx + 1;
            let tokens = tokenize(raw);
            if !tokens.is_empty() {
                return Some(Line {
                    number: idx + 1,
                    tokens,
                });
            }
        }
        None
    }

    fn expect_line(&mut self, what: &str) -> Result<Line<'a>, MbcError> {
        self.next_significant().ok_or_else(|| {
            MbcError::new(
                MbcErrorKind::MalformedSyntax,
                self.last_line + 1,
                1,
                format!("unexpected end of file; expected {what}"),
            )
        })
    }

    fn expect_eof(&mut self) -> Result<(), MbcError> {
        match self.next_significant() {
            None => Ok(()),
            Some(line) => Err(MbcError::new(
                MbcErrorKind::MalformedSyntax,
                line.number,
                line.col(0),
                "unexpected content after the last interface record",
            )),
        }
    }
}

fn tokenize(raw: &str) -> Vec<(usize, &str)> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (pos, b) in raw.bytes().enumerate() {
        if b == b'#' {
            if let Some(s) = start {
                tokens.push((s + 1, &raw[s..pos]));
            }
            return tokens;
        }
        if b.is_ascii_whitespace() {
            if let Some(s) = start.take() {
                tokens.push((s + 1, &raw[s..pos]));
            }
        } else if start.is_none() {
            start = Some(pos);
        }
    }
    if let Some(s) = start {
        tokens.push((s + 1, &raw[s..]));
    }
    tokens
}
