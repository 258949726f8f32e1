//! Compile a machine into a tile set whose expansion replays its run.
//!
//! Row `r` of the square holds the step from configuration `r` to `r + 1`.
//! Corner letters sit on lattice points: point 0 and point `N` carry the
//! border letter `#`, point `c` in between carries tape cell `c - 1` as a
//! (symbol, tag, first-cell flag) triple, where the tag says whether the
//! head is left of, right of, or on the cell (with its state). Cells past
//! the end-tape cell are blank padding the head never reaches, so a width-`N`
//! instance fits inputs of length up to `N - 2` and runs `N - 1` steps.
//!
//! Tiles touching the head are fixed by their top side alone. Tiles left of
//! the head are fixed once their east neighbour is placed, tiles right of it
//! once their west neighbour is placed: a left-moving head is announced by
//! the tile above it and propagates outward.

use std::collections::HashSet;

use thiserror::Error;

use crate::tiling::{board_from_top, expand_traced, Expansion, Letter, Line, Naming, SweepOrder, Tile, TileSet, TilingError};
use crate::tm::{Machine, MachineError, Move, TapeConfig, BLANK, END};

pub const DEFAULT_LETTER_BUDGET: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("compiled alphabet needs {needed} letters, budget is {budget}")]
    LetterBudget { needed: usize, budget: usize },
    #[error("width {width} too small for an input of length {len} (need at least {})", len + 2)]
    WidthTooSmall { width: usize, len: usize },
    #[error("cannot decode line: {0}")]
    Decode(String),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    /// Head somewhere to the right.
    Left,
    /// Head somewhere to the left.
    Right,
    Head(usize),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Border,
    Cell { sym: usize, tag: Tag, first: bool },
}

impl Point {
    fn with_tag(self, tag: Tag) -> Point {
        match self {
            Point::Cell { sym, first, .. } => Point::Cell { sym, tag, first },
            Point::Border => Point::Border,
        }
    }

    fn with(self, sym: usize, tag: Tag) -> Point {
        match self {
            Point::Cell { first, .. } => Point::Cell { sym, tag, first },
            Point::Border => Point::Border,
        }
    }
}

/// A machine compiled to tiles, with the line encoder and decoder.
#[derive(Clone, Debug)]
pub struct CompiledReduction {
    machine: Machine,
    tiles: TileSet,
    tags: usize,
}

impl CompiledReduction {
    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    pub fn tiles(&self) -> &TileSet {
        &self.tiles
    }

    fn letter(&self, p: Point) -> Letter {
        match p {
            Point::Border => Letter::BORDER,
            Point::Cell { sym, tag, first } => {
                let t = match tag {
                    Tag::Left => 0,
                    Tag::Right => 1,
                    Tag::Head(q) => 2 + q,
                };
                Letter((2 + (sym * self.tags + t) * 2 + first as usize) as u32)
            }
        }
    }

    fn point(&self, l: Letter) -> Option<Point> {
        match l.0 {
            0 => None,
            1 => Some(Point::Border),
            id => {
                let k = id as usize - 2;
                let first = k % 2 == 1;
                let k = k / 2;
                let sym = k / self.tags;
                if sym >= self.machine.symbols().len() {
                    return None;
                }
                let tag = match k % self.tags {
                    0 => Tag::Left,
                    1 => Tag::Right,
                    t => Tag::Head(t - 2),
                };
                Some(Point::Cell { sym, tag, first })
            }
        }
    }

    fn points_of(&self, c: &TapeConfig, width: usize) -> Vec<Point> {
        let mut pts = Vec::with_capacity(width + 1);
        pts.push(Point::Border);
        for i in 0..width - 1 {
            let sym = c.tape.get(i).copied().unwrap_or(BLANK);
            let tag = match i.cmp(&c.head) {
                std::cmp::Ordering::Less => Tag::Left,
                std::cmp::Ordering::Equal => Tag::Head(c.state),
                std::cmp::Ordering::Greater => Tag::Right,
            };
            pts.push(Point::Cell { sym, tag, first: i == 0 });
        }
        pts.push(Point::Border);
        pts
    }

    /// The top line for input `word` on a square of side `width`.
    pub fn encode(&self, word: &[usize], width: usize) -> Result<Line, CompileError> {
        if width < word.len() + 2 {
            return Err(CompileError::WidthTooSmall {
                width,
                len: word.len(),
            });
        }
        let c0 = self.machine.initial(word)?;
        let mut c1 = c0.clone();
        self.machine.step(&mut c1);
        let top = self.points_of(&c0, width);
        let bottom = self.points_of(&c1, width);
        let cells = (0..width)
            .map(|c| {
                let t = Tile::new(
                    self.letter(top[c]),
                    self.letter(top[c + 1]),
                    self.letter(bottom[c]),
                    self.letter(bottom[c + 1]),
                );
                self.tiles.find(&t).map(Some).ok_or_else(|| {
                    CompileError::Decode(format!("no tile for the first step at column {c}"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Line(cells))
    }

    /// The configuration on the top side of a line of tiles.
    pub fn decode_config(&self, line: &Line) -> Result<TapeConfig, CompileError> {
        let n = line.len();
        let tiles: Vec<&Tile> = line
            .0
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.and_then(|t| self.tiles.tile(t))
                    .ok_or_else(|| CompileError::Decode(format!("blank or invalid cell at {i}")))
            })
            .collect::<Result<_, _>>()?;
        let mut cells = Vec::with_capacity(n.saturating_sub(1));
        for (i, t) in tiles.iter().enumerate().skip(1) {
            cells.push((i, t.nw));
        }
        let (mut tape, mut head, mut state) = (Vec::new(), None, None);
        for (i, l) in cells {
            match self.point(l) {
                Some(Point::Cell { sym, tag, .. }) => {
                    if let Tag::Head(q) = tag {
                        if head.replace(i - 1).is_some() {
                            return Err(CompileError::Decode("two heads".into()));
                        }
                        state = Some(q);
                    }
                    tape.push(sym);
                }
                _ => return Err(CompileError::Decode(format!("point {i} is not a tape cell"))),
            }
        }
        let last_end = tape
            .iter()
            .rposition(|&s| s == END)
            .ok_or_else(|| CompileError::Decode("no end-tape cell".into()))?;
        tape.truncate(last_end + 1);
        let head = head.ok_or_else(|| CompileError::Decode("no head".into()))?;
        Ok(TapeConfig {
            tape,
            head,
            state: state.unwrap_or(0),
            steps: 0,
        })
    }

    /// The output word encoded by a line: tape up to the first end-tape cell.
    pub fn decode(&self, line: &Line) -> Result<Vec<usize>, CompileError> {
        Ok(self.decode_config(line)?.output())
    }

    /// Encode, expand with the given order, and return the full expansion.
    pub fn expand(&self, word: &[usize], width: usize, order: SweepOrder) -> Result<Expansion, CompileError> {
        let top = self.encode(word, width)?;
        let board = board_from_top(&top, &self.tiles)?;
        Ok(expand_traced(&board, &self.tiles, order))
    }
}

struct Generator<'m> {
    m: &'m Machine,
    left_arrivals: Vec<usize>,
    right_arrivals: Vec<usize>,
}

impl Generator<'_> {
    fn step(&self, q: usize, s: usize) -> Option<(usize, usize, Move)> {
        self.m.transition(q, s).map(|t| (t.next, t.write, t.mv))
    }

    fn successors(&self, a: Point, b: Point) -> Vec<(Point, Point)> {
        use Point::{Border, Cell};
        use Tag::{Head, Left, Right};
        let mut out = Vec::new();
        match (a, b) {
            (Cell { tag: Left, .. }, Cell { tag: Left, .. }) | (Border, Cell { tag: Left, .. }) => {
                out.push((a, b));
                for &q in &self.left_arrivals {
                    out.push((a, b.with_tag(Head(q))));
                }
            }
            (Cell { tag: Right, .. }, Cell { tag: Right, .. }) | (Cell { tag: Right, .. }, Border) => {
                out.push((a, b));
                for &q in &self.right_arrivals {
                    out.push((a.with_tag(Head(q)), b));
                }
            }
            (Cell { tag: Left, .. }, Cell { sym, tag: Head(q), .. }) => match self.step(q, sym) {
                None => out.push((a, b)),
                Some((q2, y, Move::L)) => out.push((a.with_tag(Head(q2)), b.with(y, Right))),
                Some((q2, y, Move::S)) => out.push((a, b.with(y, Head(q2)))),
                Some((_, y, Move::R)) => out.push((a, b.with(y, Left))),
            },
            (Border, Cell { sym, tag: Head(q), .. }) => match self.step(q, sym) {
                None => out.push((a, b)),
                Some((q2, y, Move::L | Move::S)) => out.push((a, b.with(y, Head(q2)))),
                Some((_, y, Move::R)) => out.push((a, b.with(y, Left))),
            },
            (Cell { sym, tag: Head(q), first }, right) => {
                let stay_put = |q2: usize, y: usize| (a.with(y, Head(q2)), right);
                match (self.step(q, sym), right) {
                    (None, _) => out.push((a, b)),
                    (Some((q2, y, Move::L)), _) if first => out.push(stay_put(q2, y)),
                    (Some((_, y, Move::L)), _) => out.push((a.with(y, Right), right)),
                    (Some((q2, y, Move::S)), _) => out.push(stay_put(q2, y)),
                    (Some((q2, y, Move::R)), Cell { .. }) => out.push((a.with(y, Left), right.with_tag(Head(q2)))),
                    // no cell to move into
                    (Some((_, _, Move::R)), Border) => {}
                }
            }
            _ => {}
        }
        out
    }
}

/// Every point letter that can appear on a top side, paired with its right
/// neighbour.
fn top_pairs(m: &Machine) -> Vec<(Point, Point)> {
    let ns = m.symbols().len();
    let nq = m.states().len();
    let mut tags = vec![Tag::Left, Tag::Right];
    tags.extend((0..nq).map(Tag::Head));
    let mut cells = Vec::new();
    for sym in 0..ns {
        for &tag in &tags {
            for first in [false, true] {
                cells.push(Point::Cell { sym, tag, first });
            }
        }
    }
    let tag_of = |p: &Point| match p {
        Point::Cell { tag, .. } => *tag,
        Point::Border => Tag::Left,
    };
    let first_of = |p: &Point| matches!(p, Point::Cell { first: true, .. });
    let mut out = Vec::new();
    for &b in &cells {
        let tb = tag_of(&b);
        if first_of(&b) && tb != Tag::Right {
            out.push((Point::Border, b));
        }
    }
    for &a in &cells {
        let ta = tag_of(&a);
        if first_of(&a) && ta == Tag::Right {
            continue;
        }
        if ta != Tag::Left {
            out.push((a, Point::Border));
        }
        for &b in &cells {
            if first_of(&b) {
                continue;
            }
            let ok = matches!(
                (ta, tag_of(&b)),
                (Tag::Left, Tag::Left) | (Tag::Left, Tag::Head(_)) | (Tag::Head(_), Tag::Right) | (Tag::Right, Tag::Right)
            );
            if ok {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn compile_to_tiles(m: &Machine) -> Result<CompiledReduction, CompileError> {
    compile_with_budget(m, DEFAULT_LETTER_BUDGET)
}

pub fn compile_with_budget(m: &Machine, letter_budget: usize) -> Result<CompiledReduction, CompileError> {
    let tags = 2 + m.states().len();
    let needed = 2 + m.symbols().len() * tags * 2;
    if needed > letter_budget || needed > u32::MAX as usize {
        return Err(CompileError::LetterBudget {
            needed,
            budget: letter_budget,
        });
    }
    let (left_arrivals, right_arrivals) = m.arrival_states();
    let g = Generator {
        m,
        left_arrivals,
        right_arrivals,
    };
    let mut shell = CompiledReduction {
        machine: m.clone(),
        tiles: TileSet::new(needed as u32, Vec::new())?,
        tags,
    };
    let mut seen = HashSet::new();
    let mut tiles = Vec::new();
    for (a, b) in top_pairs(m) {
        for (c, d) in g.successors(a, b) {
            let t = Tile::new(shell.letter(a), shell.letter(b), shell.letter(c), shell.letter(d));
            if seen.insert(t) {
                tiles.push(t);
            }
        }
    }
    let mut letters = vec![String::new(); needed];
    letters[1] = "#".into();
    for id in 2..needed as u32 {
        if let Some(Point::Cell { sym, tag, first }) = shell.point(Letter(id)) {
            let t = match tag {
                Tag::Left => "<".to_string(),
                Tag::Right => ">".to_string(),
                Tag::Head(q) => m.states()[q].clone(),
            };
            let name = format!("{}.{}{}", m.symbols()[sym], t, if first { "!" } else { "" });
            letters[id as usize] = name;
        }
    }
    let naming = Naming {
        letters,
        tiles: (0..tiles.len()).map(|i| format!("t{i}")).collect(),
    };
    shell.tiles = TileSet::with_naming(needed as u32, tiles, naming)?;
    Ok(shell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::tiling_expansion;
    use crate::tm::{force_length, library, tm_run, words_up_to};

    #[test]
    fn not_machine_example() {
        let m = library::not();
        let c = compile_to_tiles(&m).unwrap();
        let w = m.parse_word("01").unwrap();
        let top = c.encode(&w, 4).unwrap();
        assert_eq!(c.decode(&top).unwrap(), w);
        let (bottom, ts) = tiling_expansion(&top, c.tiles()).unwrap();
        assert_eq!(&ts, c.tiles());
        assert_eq!(m.format_word(&c.decode(&bottom).unwrap()), "10");
    }

    #[test]
    fn identity_every_row_is_the_input() {
        let m = library::identity();
        let c = compile_to_tiles(&m).unwrap();
        for w in words_up_to(&m, &["0", "1"], 4) {
            for n in w.len() + 2..=7 {
                let (bottom, _) = tiling_expansion(&c.encode(&w, n).unwrap(), c.tiles()).unwrap();
                assert_eq!(c.decode(&bottom).unwrap(), w);
            }
        }
    }

    #[test]
    fn short_squares_abort_mid_run() {
        let m = library::not();
        let c = compile_to_tiles(&m).unwrap();
        let w = m.parse_word("0101").unwrap();
        let (bottom, _) = tiling_expansion(&c.encode(&w, 6).unwrap(), c.tiles()).unwrap();
        assert_eq!(c.decode(&bottom).unwrap(), tm_run(&m, &w, 5).unwrap());
        let f = force_length(&library::flip_last());
        let cf = compile_to_tiles(&f).unwrap();
        let w = f.parse_word("0110").unwrap();
        let ex = cf.expand(&w, 6, SweepOrder::RowMajor).unwrap();
        assert!(ex.board.is_full());
        for r in 0..6 {
            let cfg = cf.decode_config(&ex.board.row(r)).unwrap();
            let oracle = f.run_config(&w, r).unwrap();
            assert_eq!((cfg.tape, cfg.head, cfg.state), (oracle.tape, oracle.head, oracle.state), "row {r}");
        }
    }

    #[test]
    fn width_and_budget_errors() {
        let m = library::not();
        let c = compile_to_tiles(&m).unwrap();
        assert!(matches!(
            c.encode(&m.parse_word("01").unwrap(), 3),
            Err(CompileError::WidthTooSmall { width: 3, len: 2 })
        ));
        assert!(matches!(compile_with_budget(&m, 10), Err(CompileError::LetterBudget { .. })));
    }

    #[test]
    fn letters_round_trip() {
        let m = force_length(&library::increment());
        let c = compile_to_tiles(&m).unwrap();
        for id in 1..c.tiles().alphabet() {
            let p = c.point(Letter(id)).unwrap();
            assert_eq!(c.letter(p), Letter(id));
        }
    }
}
