//! Corner-lettered tiles and unique-extension expansion.
//!
//! A tile is a unit square with a letter at each corner. Two tiles may be
//! joined along a side when the two letters on that side agree. Expansion
//! grows a partial tiling of an `N x N` square one tile at a time, placing a
//! tile only where exactly one permitted tile fits the placed neighbours.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::bits::Bits;
use crate::parse::{strip_comment, tokens, ParseError};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

impl Letter {
    /// Reserved id 0. Never appears on a tile.
    pub const BLANK: Letter = Letter(0);
    /// Reserved id 1, written `#` in the text format.
    pub const BORDER: Letter = Letter(1);
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    pub nw: Letter,
    pub ne: Letter,
    pub sw: Letter,
    pub se: Letter,
}

impl Tile {
    pub fn new(nw: Letter, ne: Letter, sw: Letter, se: Letter) -> Self {
        Tile { nw, ne, sw, se }
    }

    fn letters(&self) -> [Letter; 4] {
        [self.nw, self.ne, self.sw, self.se]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingError {
    #[error("letter {letter} outside alphabet of size {alphabet}")]
    LetterOutOfRange { letter: u32, alphabet: u32 },
    #[error("letter id 0 is reserved for the blank marker")]
    ReservedLetter,
    #[error("duplicate tile at positions {first} and {second}")]
    DuplicateTile { first: usize, second: usize },
    #[error("tile index {0} out of range")]
    TileOutOfRange(usize),
    #[error("cell ({row}, {col}) outside a board of side {side}")]
    OutOfBounds { row: usize, col: usize, side: usize },
    #[error("cell ({row}, {col}) is already occupied")]
    Occupied { row: usize, col: usize },
    #[error("tiles at ({row}, {col}) and its {side} neighbour do not join")]
    Mismatch { row: usize, col: usize, side: &'static str },
    #[error("top line contains a blank cell at position {0}")]
    BlankInTop(usize),
    #[error("line must have at least one cell")]
    EmptyLine,
    #[error("malformed instance encoding: {0}")]
    Malformed(&'static str),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Names used by the text format. Not part of a tile set's identity.
#[derive(Debug, Clone, Default)]
pub struct Naming {
    pub letters: Vec<String>,
    pub tiles: Vec<String>,
}

/// An ordered, duplicate-free set of permitted tiles.
///
/// Tile index = position. Lookup tables keyed by each side of a tile are
/// built at construction so candidate computation is proportional to the
/// number of tiles sharing a side, not the whole set.
#[derive(Clone)]
pub struct TileSet {
    alphabet: u32,
    tiles: Vec<Tile>,
    naming: Naming,
    by_top: HashMap<(Letter, Letter), Vec<usize>>,
    by_bottom: HashMap<(Letter, Letter), Vec<usize>>,
    by_left: HashMap<(Letter, Letter), Vec<usize>>,
    by_right: HashMap<(Letter, Letter), Vec<usize>>,
}

impl PartialEq for TileSet {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.tiles == other.tiles
    }
}

impl Eq for TileSet {}

impl fmt::Debug for TileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TileSet")
            .field("alphabet", &self.alphabet)
            .field("tiles", &self.tiles)
            .finish()
    }
}

impl TileSet {
    pub fn new(alphabet: u32, tiles: Vec<Tile>) -> Result<Self, TilingError> {
        Self::with_naming(alphabet, tiles, Naming::default())
    }

    pub fn with_naming(alphabet: u32, tiles: Vec<Tile>, naming: Naming) -> Result<Self, TilingError> {
        let mut seen: HashMap<Tile, usize> = HashMap::with_capacity(tiles.len());
        for (i, t) in tiles.iter().enumerate() {
            for l in t.letters() {
                if l.0 >= alphabet {
                    return Err(TilingError::LetterOutOfRange {
                        letter: l.0,
                        alphabet,
                    });
                }
                if l == Letter::BLANK {
                    return Err(TilingError::ReservedLetter);
                }
            }
            if let Some(&first) = seen.get(t) {
                return Err(TilingError::DuplicateTile { first, second: i });
            }
            seen.insert(*t, i);
        }
        let mut ts = TileSet {
            alphabet,
            tiles,
            naming,
            by_top: HashMap::new(),
            by_bottom: HashMap::new(),
            by_left: HashMap::new(),
            by_right: HashMap::new(),
        };
        for (i, t) in ts.tiles.iter().enumerate() {
            ts.by_top.entry((t.nw, t.ne)).or_default().push(i);
            ts.by_bottom.entry((t.sw, t.se)).or_default().push(i);
            ts.by_left.entry((t.nw, t.sw)).or_default().push(i);
            ts.by_right.entry((t.ne, t.se)).or_default().push(i);
        }
        Ok(ts)
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tile(&self, i: usize) -> Option<&Tile> {
        self.tiles.get(i)
    }

    pub fn naming(&self) -> &Naming {
        &self.naming
    }

    /// Index of the tile with exactly these corners.
    pub fn find(&self, t: &Tile) -> Option<usize> {
        self.by_top
            .get(&(t.nw, t.ne))?
            .iter()
            .copied()
            .find(|&i| self.tiles[i] == *t)
    }

    pub fn tile_name(&self, i: usize) -> String {
        self.naming
            .tiles
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("t{i}"))
    }

    pub fn letter_name(&self, l: Letter) -> String {
        if l == Letter::BORDER {
            return "#".into();
        }
        self.naming
            .letters
            .get(l.0 as usize)
            .filter(|s| !s.is_empty())
            .cloned()
            .unwrap_or_else(|| format!("l{}", l.0))
    }

    pub fn tile_by_name(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.naming.tiles.iter().position(|n| n == name) {
            return Some(i);
        }
        name.strip_prefix('t')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&i| i < self.tiles.len() && self.naming.tiles.get(i).is_none())
    }

    /// Parse the tile-set text format.
    ///
    /// ```text
    /// tiles 10
    /// T1 a x e r   # nw ne sw se
    /// ```
    ///
    /// Letter tokens receive ids from 2 upward in order of first appearance;
    /// the token `#` is the border letter (id 1). A line whose first token
    /// starts with `#` is a comment, as is anything after the fifth field.
    pub fn parse(text: &str) -> Result<Self, TilingError> {
        let mut alphabet: Option<u32> = None;
        let mut letter_ids: HashMap<String, u32> = HashMap::new();
        let mut naming = Naming {
            letters: vec![String::new(), "#".into()],
            tiles: Vec::new(),
        };
        let mut tiles = Vec::new();
        let mut header_line = 0;
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let toks = strip_comment(&tokens(raw), 5);
            if toks.is_empty() {
                continue;
            }
            if alphabet.is_none() {
                let (col, kw) = toks[0];
                if kw != "tiles" {
                    return Err(ParseError::new(ln, col, "expected header `tiles <alphabet-size>`").into());
                }
                let (col, n) = toks
                    .get(1)
                    .copied()
                    .ok_or_else(|| ParseError::new(ln, col + 5, "missing alphabet size"))?;
                let n: u32 = n
                    .parse()
                    .map_err(|_| ParseError::new(ln, col, format!("invalid alphabet size `{n}`")))?;
                if toks.len() > 2 {
                    return Err(ParseError::new(ln, toks[2].0, "unexpected token after alphabet size").into());
                }
                alphabet = Some(n);
                header_line = ln;
                continue;
            }
            if toks.len() != 5 {
                let col = toks.last().map(|t| t.0).unwrap_or(1);
                return Err(ParseError::new(ln, col, "expected `<name> <nw> <ne> <sw> <se>`").into());
            }
            let (ncol, name) = toks[0];
            if naming.tiles.iter().any(|n| n == name) {
                return Err(ParseError::new(ln, ncol, format!("duplicate tile name `{name}`")).into());
            }
            let mut corners = [Letter::BLANK; 4];
            for (k, &(col, tok)) in toks[1..].iter().enumerate() {
                let id = if tok == "#" {
                    1
                } else if tok == "_" {
                    return Err(ParseError::new(ln, col, "`_` is reserved for blank cells").into());
                } else {
                    let next = naming.letters.len() as u32;
                    *letter_ids.entry(tok.to_string()).or_insert_with(|| {
                        naming.letters.push(tok.to_string());
                        next
                    })
                };
                let a = alphabet.unwrap_or(0);
                if id >= a {
                    return Err(ParseError::new(
                        ln,
                        col,
                        format!("letter `{tok}` exceeds declared alphabet size {a}"),
                    )
                    .into());
                }
                corners[k] = Letter(id);
            }
            naming.tiles.push(name.to_string());
            tiles.push(Tile::new(corners[0], corners[1], corners[2], corners[3]));
        }
        let alphabet = alphabet.ok_or_else(|| ParseError::new(header_line.max(1), 1, "missing `tiles` header"))?;
        TileSet::with_naming(alphabet, tiles, naming).map_err(|e| match e {
            TilingError::DuplicateTile { second, .. } => {
                TilingError::Parse(ParseError::new(second + header_line + 1, 1, e.to_string()))
            }
            other => other,
        })
    }

    /// Render in the text format accepted by [`TileSet::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("tiles {}\n", self.alphabet);
        for (i, t) in self.tiles.iter().enumerate() {
            s.push_str(&format!(
                "{} {} {} {} {}\n",
                self.tile_name(i),
                self.letter_name(t.nw),
                self.letter_name(t.ne),
                self.letter_name(t.sw),
                self.letter_name(t.se)
            ));
        }
        s
    }

    /// Parse `line <name> ...` (or a bare list of names). `_` is a blank cell.
    pub fn parse_line(&self, text: &str) -> Result<Line, TilingError> {
        let toks = tokens(text.trim_end());
        let toks = strip_comment(&toks, usize::MAX);
        let body = match toks.first() {
            Some((_, "line")) => &toks[1..],
            _ => &toks[..],
        };
        let mut cells = Vec::with_capacity(body.len());
        for &(col, name) in body {
            if name == "_" {
                cells.push(None);
                continue;
            }
            let i = self
                .tile_by_name(name)
                .ok_or_else(|| ParseError::new(1, col, format!("unknown tile `{name}`")))?;
            cells.push(Some(i));
        }
        if cells.is_empty() {
            return Err(TilingError::EmptyLine);
        }
        Ok(Line(cells))
    }

    pub fn format_line(&self, line: &Line) -> String {
        line.0
            .iter()
            .map(|c| match c {
                Some(i) => self.tile_name(*i),
                None => "_".into(),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A row of cells; `None` is the blank marker.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line(pub Vec<Option<usize>>);

impl Line {
    pub fn from_tiles(tiles: &[usize]) -> Self {
        Line(tiles.iter().map(|&t| Some(t)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A partial tiling of an `N x N` square.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Board {
    side: usize,
    cells: Vec<Option<usize>>,
}

impl Board {
    pub fn empty(side: usize) -> Self {
        Board {
            side,
            cells: vec![None; side * side],
        }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn get(&self, row: usize, col: usize) -> Option<usize> {
        self.cells[row * self.side + col]
    }

    pub fn row(&self, row: usize) -> Line {
        Line(self.cells[row * self.side..(row + 1) * self.side].to_vec())
    }

    pub fn is_full(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    pub fn placed(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// Place without any checks; see [`Board::place`].
    pub fn set_unchecked(&mut self, row: usize, col: usize, tile: Option<usize>) {
        self.cells[row * self.side + col] = tile;
    }

    /// Place a tile, checking bounds, occupancy and joins with neighbours.
    pub fn place(&mut self, tiles: &TileSet, row: usize, col: usize, tile: usize) -> Result<(), TilingError> {
        self.check_empty(row, col)?;
        let t = tiles.tile(tile).ok_or(TilingError::TileOutOfRange(tile))?;
        for (side, nb) in self.neighbours(row, col) {
            if let Some(n) = nb {
                if !joins(tiles, t, side, &tiles.tiles[n]) {
                    return Err(TilingError::Mismatch {
                        row,
                        col,
                        side: side.name(),
                    });
                }
            }
        }
        self.set_unchecked(row, col, Some(tile));
        Ok(())
    }

    /// Check every adjacent pair of placed tiles.
    pub fn validate(&self, tiles: &TileSet) -> Result<(), TilingError> {
        for r in 0..self.side {
            for c in 0..self.side {
                let Some(i) = self.get(r, c) else { continue };
                let t = tiles.tile(i).ok_or(TilingError::TileOutOfRange(i))?;
                if c + 1 < self.side {
                    if let Some(j) = self.get(r, c + 1) {
                        if !joins(tiles, t, Side::East, &tiles.tiles[j]) {
                            return Err(TilingError::Mismatch { row: r, col: c, side: "east" });
                        }
                    }
                }
                if r + 1 < self.side {
                    if let Some(j) = self.get(r + 1, c) {
                        if !joins(tiles, t, Side::South, &tiles.tiles[j]) {
                            return Err(TilingError::Mismatch { row: r, col: c, side: "south" });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_empty(&self, row: usize, col: usize) -> Result<(), TilingError> {
        if row >= self.side || col >= self.side {
            return Err(TilingError::OutOfBounds {
                row,
                col,
                side: self.side,
            });
        }
        if self.get(row, col).is_some() {
            return Err(TilingError::Occupied { row, col });
        }
        Ok(())
    }

    fn neighbours(&self, row: usize, col: usize) -> [(Side, Option<usize>); 4] {
        let n = self.side;
        [
            (Side::North, if row > 0 { self.get(row - 1, col) } else { None }),
            (Side::West, if col > 0 { self.get(row, col - 1) } else { None }),
            (Side::East, if col + 1 < n { self.get(row, col + 1) } else { None }),
            (Side::South, if row + 1 < n { self.get(row + 1, col) } else { None }),
        ]
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Side {
    North,
    West,
    East,
    South,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::North => "north",
            Side::West => "west",
            Side::East => "east",
            Side::South => "south",
        }
    }
}

/// Whether `t` joins `other` placed on its `side`.
fn joins(_tiles: &TileSet, t: &Tile, side: Side, other: &Tile) -> bool {
    match side {
        Side::North => other.sw == t.nw && other.se == t.ne,
        Side::South => other.nw == t.sw && other.ne == t.se,
        Side::West => other.ne == t.nw && other.se == t.sw,
        Side::East => other.nw == t.ne && other.sw == t.se,
    }
}

fn candidates_unchecked(board: &Board, tiles: &TileSet, row: usize, col: usize) -> Vec<usize> {
    let nbs = board.neighbours(row, col);
    // Seed from the first placed neighbour's side bucket, then filter.
    let seed: Option<&[usize]> = nbs.iter().find_map(|&(side, nb)| {
        let o = &tiles.tiles[nb?];
        let bucket = match side {
            Side::North => tiles.by_top.get(&(o.sw, o.se)),
            Side::South => tiles.by_bottom.get(&(o.nw, o.ne)),
            Side::West => tiles.by_left.get(&(o.ne, o.se)),
            Side::East => tiles.by_right.get(&(o.nw, o.sw)),
        };
        Some(bucket.map(|v| v.as_slice()).unwrap_or(&[]))
    });
    match seed {
        None => (0..tiles.len()).collect(),
        Some(bucket) => bucket
            .iter()
            .copied()
            .filter(|&i| {
                let t = &tiles.tiles[i];
                nbs.iter()
                    .all(|&(side, nb)| nb.is_none_or(|n| joins(tiles, t, side, &tiles.tiles[n])))
            })
            .collect(),
    }
}

/// Tile indices that fit at an empty cell given its placed orthogonal
/// neighbours, in tile-set order. With no placed neighbours every tile fits.
pub fn candidates(board: &Board, tiles: &TileSet, row: usize, col: usize) -> Result<Vec<usize>, TilingError> {
    board.check_empty(row, col)?;
    Ok(candidates_unchecked(board, tiles, row, col))
}

/// Visiting order of cells within one sweep.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum SweepOrder {
    #[default]
    RowMajor,
    ColumnMajor,
}

/// One forced placement made by [`expand_traced`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub row: usize,
    pub col: usize,
    pub tile: usize,
    pub sweep: usize,
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub board: Board,
    pub trace: Vec<Placement>,
    /// Number of full sweeps run, including the final one that placed nothing.
    pub sweeps: usize,
    /// Visits to eligible cells that had more than one candidate.
    pub ambiguous_visits: usize,
    /// Visits to eligible cells that had no candidate at all.
    pub dead_visits: usize,
}

/// Maximal unique extension with repeated row-major sweeps.
pub fn expand(board: &Board, tiles: &TileSet) -> Board {
    expand_traced(board, tiles, SweepOrder::RowMajor).board
}

/// Expansion with an explicit sweep order and a placement trace.
///
/// Each sweep visits every cell; an empty cell with at least one placed
/// orthogonal neighbour and exactly one candidate gets that tile at once.
/// Stops after a sweep that places nothing.
pub fn expand_traced(board: &Board, tiles: &TileSet, order: SweepOrder) -> Expansion {
    let mut b = board.clone();
    let n = b.side;
    let mut trace = Vec::new();
    let mut sweeps = 0;
    let mut ambiguous_visits = 0;
    let mut dead_visits = 0;
    loop {
        sweeps += 1;
        let mut placed = false;
        for k in 0..n * n {
            let (r, c) = match order {
                SweepOrder::RowMajor => (k / n, k % n),
                SweepOrder::ColumnMajor => (k % n, k / n),
            };
            if b.get(r, c).is_some() || b.neighbours(r, c).iter().all(|(_, nb)| nb.is_none()) {
                continue;
            }
            let cands = candidates_unchecked(&b, tiles, r, c);
            match cands.as_slice() {
                [only] => {
                    b.set_unchecked(r, c, Some(*only));
                    trace.push(Placement {
                        row: r,
                        col: c,
                        tile: *only,
                        sweep: sweeps,
                    });
                    placed = true;
                }
                [] => dead_visits += 1,
                _ => ambiguous_visits += 1,
            }
        }
        if !placed {
            break;
        }
    }
    Expansion {
        board: b,
        trace,
        sweeps,
        ambiguous_visits,
        dead_visits,
    }
}

/// Check a top line: non-empty, no blanks, valid indices, adjacent tiles join.
pub fn validate_top(top: &Line, tiles: &TileSet) -> Result<(), TilingError> {
    if top.is_empty() {
        return Err(TilingError::EmptyLine);
    }
    let mut prev: Option<&Tile> = None;
    for (i, c) in top.0.iter().enumerate() {
        let idx = c.ok_or(TilingError::BlankInTop(i))?;
        let t = tiles.tile(idx).ok_or(TilingError::TileOutOfRange(idx))?;
        if let Some(p) = prev {
            if p.ne != t.nw || p.se != t.sw {
                return Err(TilingError::Mismatch {
                    row: 0,
                    col: i - 1,
                    side: "east",
                });
            }
        }
        prev = Some(t);
    }
    Ok(())
}

/// Board of side `len(top)` with the top line placed in row 0.
pub fn board_from_top(top: &Line, tiles: &TileSet) -> Result<Board, TilingError> {
    validate_top(top, tiles)?;
    let n = top.len();
    let mut b = Board::empty(n);
    for (c, t) in top.0.iter().enumerate() {
        b.set_unchecked(0, c, *t);
    }
    Ok(b)
}

/// The Tiling Expansion function: expand the top line to a square and
/// return the bottom line together with the unchanged tile set.
pub fn tiling_expansion(top: &Line, tiles: &TileSet) -> Result<(Line, TileSet), TilingError> {
    let b = board_from_top(top, tiles)?;
    let out = expand(&b, tiles);
    Ok((out.row(out.side() - 1), tiles.clone()))
}

/// Number of bits `L` with `2^L >= (base)^n`, i.e. `ceil(n * log2(base))`.
pub fn digit_block_bits(base: usize, n: usize) -> usize {
    let total = BigUint::from(base).pow(n as u32);
    if total <= BigUint::one() {
        return 0;
    }
    (total - 1u32).bits() as usize
}

fn push_gamma(out: &mut Bits, v: u64) {
    debug_assert!(v >= 1);
    let width = 64 - v.leading_zeros();
    for _ in 1..width {
        out.push(false);
    }
    out.extend_from(&Bits::from_u64(v, width));
}

fn read_gamma(bits: &[bool], pos: &mut usize) -> Result<u64, TilingError> {
    let mut zeros = 0;
    while *pos < bits.len() && !bits[*pos] {
        zeros += 1;
        *pos += 1;
    }
    if zeros >= 64 || *pos + zeros + 1 > bits.len() {
        return Err(TilingError::Malformed("truncated length prefix"));
    }
    let v = bits[*pos..*pos + zeros + 1]
        .iter()
        .fold(0u64, |a, &b| (a << 1) | b as u64);
    *pos += zeros + 1;
    Ok(v)
}

fn letter_bits(alphabet: u32) -> usize {
    if alphabet <= 1 {
        0
    } else {
        (32 - (alphabet - 1).leading_zeros()) as usize
    }
}

fn read_uint(bits: &[bool], pos: &mut usize, width: usize) -> Result<u64, TilingError> {
    if *pos + width > bits.len() {
        return Err(TilingError::Malformed("truncated field"));
    }
    let v = bits[*pos..*pos + width]
        .iter()
        .fold(0u64, |a, &b| (a << 1) | b as u64);
    *pos += width;
    Ok(v)
}

/// Bit encoding of an instance.
///
/// A self-delimiting header (Elias gamma of alphabet+1, tile count+1 and
/// line length+1, then every tile's corners in fixed-width letter fields)
/// followed by the line as a big-endian base-(τ+1) integer in exactly
/// `ceil(N·log2(τ+1))` bits, where τ is the tile count and digit τ is blank.
pub fn encode_instance(line: &Line, tiles: &TileSet) -> Result<Bits, TilingError> {
    let tau = tiles.len();
    for c in line.0.iter().flatten() {
        if *c >= tau {
            return Err(TilingError::TileOutOfRange(*c));
        }
    }
    let mut out = Bits::new();
    push_gamma(&mut out, tiles.alphabet as u64 + 1);
    push_gamma(&mut out, tau as u64 + 1);
    push_gamma(&mut out, line.len() as u64 + 1);
    let lw = letter_bits(tiles.alphabet) as u32;
    for t in &tiles.tiles {
        for l in t.letters() {
            out.extend_from(&Bits::from_u64(l.0 as u64, lw));
        }
    }
    out.extend_from(&encode_line_digits(line, tau));
    Ok(out)
}

/// Only the digit block of the instance encoding.
pub fn encode_line_digits(line: &Line, tau: usize) -> Bits {
    let base = BigUint::from(tau + 1);
    let mut value = BigUint::zero();
    for c in &line.0 {
        value = value * &base + BigUint::from(c.unwrap_or(tau));
    }
    let width = digit_block_bits(tau + 1, line.len());
    (0..width).rev().map(|i| value.bit(i as u64)).collect()
}

pub fn decode_instance(bits: &Bits) -> Result<(Line, TileSet), TilingError> {
    let b = bits.as_slice();
    let mut pos = 0;
    let alphabet = read_gamma(b, &mut pos)? - 1;
    let tau = (read_gamma(b, &mut pos)? - 1) as usize;
    let n = (read_gamma(b, &mut pos)? - 1) as usize;
    if alphabet > u32::MAX as u64 {
        return Err(TilingError::Malformed("alphabet too large"));
    }
    let alphabet = alphabet as u32;
    let lw = letter_bits(alphabet);
    if tau.saturating_mul(4 * lw) > b.len() {
        return Err(TilingError::Malformed("tile block longer than input"));
    }
    let mut tiles = Vec::with_capacity(tau);
    for _ in 0..tau {
        let mut ls = [Letter::BLANK; 4];
        for l in &mut ls {
            *l = Letter(read_uint(b, &mut pos, lw)? as u32);
        }
        tiles.push(Tile::new(ls[0], ls[1], ls[2], ls[3]));
    }
    let ts = TileSet::new(alphabet, tiles)?;
    let width = digit_block_bits(tau + 1, n);
    if pos + width != b.len() {
        return Err(TilingError::Malformed("digit block has the wrong length"));
    }
    let mut value = BigUint::zero();
    for &bit in &b[pos..] {
        value = (value << 1u32) | BigUint::from(bit as u8);
    }
    let base = BigUint::from(tau + 1);
    let mut cells = vec![None; n];
    for cell in cells.iter_mut().rev() {
        let d = (&value % &base).to_usize().unwrap_or(usize::MAX);
        value /= &base;
        *cell = if d == tau { None } else { Some(d) };
    }
    if !value.is_zero() {
        return Err(TilingError::Malformed("digit block exceeds line capacity"));
    }
    Ok((Line(cells), ts))
}

/// The four tiles of the worked example and, optionally, the extra tile
/// `(e, r, q, q)` that shares T3's top side.
pub fn example_tiles(with_fifth: bool) -> TileSet {
    let mut text = String::from(
        "tiles 11\n\
         T1 a x e r\n\
         T2 x c r z\n\
         T3 e r n s\n\
         T4 r z s z\n",
    );
    if with_fifth {
        text.push_str("T5 e r q q\n");
    }
    TileSet::parse(&text).expect("built-in tile set parses")
}
