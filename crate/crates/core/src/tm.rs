//! Step-bounded single-tape Turing machines.
//!
//! The tape of a run on input `w` is `w` followed by one end-tape cell `$`.
//! The machine may read `$` but never overwrites it and never moves right
//! from it, so the tape never grows. A left move at cell 0 stays put. The
//! output is the tape up to the first `$`.

#![allow(clippy::needless_range_loop)]

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::parse::{strip_comment, tokens, ParseError};

pub const BLANK: usize = 0;
pub const END: usize = 1;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    L,
    R,
    S,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: usize,
    pub write: usize,
    pub mv: Move,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("the halt state has an outgoing transition on `{0}`")]
    HaltTransition(String),
    #[error("state `{state}` on `$` must write `$` and not move right")]
    EndTapeViolation { state: String },
    #[error("transition for ({state}, {symbol}) defined twice")]
    DuplicateTransition { state: String, symbol: String },
    #[error("input symbol at position {0} is blank or end-tape")]
    MalformedInput(usize),
    #[error("program symbol at position {0} is not an input symbol")]
    MalformedProgram(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A deterministic single-tape machine. Symbol 0 is the blank `_`, symbol 1
/// the end-tape marker `$`. Missing transitions are completed as
/// "write the same symbol, stay, halt".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Machine {
    states: Vec<String>,
    symbols: Vec<String>,
    start: usize,
    halt: usize,
    delta: Vec<Option<Transition>>,
}

/// Builder-friendly rule: `(state, read) -> (next, write, move)` by name.
pub type Rule<'a> = (&'a str, &'a str, &'a str, &'a str, Move);

impl Machine {
    /// Build from names. `symbols` lists input/work symbols; `_` and `$` are
    /// added in front when absent.
    pub fn new(
        states: &[&str],
        symbols: &[&str],
        start: &str,
        halt: &str,
        rules: &[Rule<'_>],
    ) -> Result<Self, MachineError> {
        let mut syms = vec!["_".to_string(), "$".to_string()];
        for &s in symbols {
            if s == "_" || s == "$" {
                continue;
            }
            if syms.iter().any(|x| x == s) {
                return Err(MachineError::Duplicate(s.into()));
            }
            syms.push(s.into());
        }
        let mut sts: Vec<String> = Vec::new();
        for &s in states {
            if sts.iter().any(|x| x == s) {
                return Err(MachineError::Duplicate(s.into()));
            }
            sts.push(s.into());
        }
        let st = |n: &str| {
            sts.iter()
                .position(|x| x == n)
                .ok_or_else(|| MachineError::UnknownState(n.into()))
        };
        let sy = |n: &str| {
            syms.iter()
                .position(|x| x == n)
                .ok_or_else(|| MachineError::UnknownSymbol(n.into()))
        };
        let start = st(start)?;
        let halt = st(halt)?;
        let mut table = HashMap::new();
        for &(q, a, q2, b, mv) in rules {
            let key = (st(q)?, sy(a)?);
            let t = Transition {
                next: st(q2)?,
                write: sy(b)?,
                mv,
            };
            if table.insert(key, t).is_some() {
                return Err(MachineError::DuplicateTransition {
                    state: q.into(),
                    symbol: a.into(),
                });
            }
        }
        Self::from_table(sts, syms, start, halt, table)
    }

    fn from_table(
        states: Vec<String>,
        symbols: Vec<String>,
        start: usize,
        halt: usize,
        table: HashMap<(usize, usize), Transition>,
    ) -> Result<Self, MachineError> {
        let ns = symbols.len();
        let mut delta = vec![None; states.len() * ns];
        for q in 0..states.len() {
            for a in 0..ns {
                let t = table.get(&(q, a)).copied();
                if q == halt {
                    if t.is_some() {
                        return Err(MachineError::HaltTransition(symbols[a].clone()));
                    }
                    continue;
                }
                let t = t.unwrap_or(Transition {
                    next: halt,
                    write: a,
                    mv: Move::S,
                });
                if a == END && (t.write != END || t.mv == Move::R) {
                    return Err(MachineError::EndTapeViolation {
                        state: states[q].clone(),
                    });
                }
                delta[q * ns + a] = Some(t);
            }
        }
        Ok(Machine {
            states,
            symbols,
            start,
            halt,
            delta,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn halt(&self) -> usize {
        self.halt
    }

    /// `None` exactly for the halt state.
    pub fn transition(&self, state: usize, symbol: usize) -> Option<Transition> {
        self.delta[state * self.symbols.len() + symbol]
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    /// Symbols an input word may contain: all but blank and end-tape.
    pub fn input_symbols(&self) -> impl Iterator<Item = usize> + '_ {
        2..self.symbols.len()
    }

    /// States reached by some left move, and by some right move.
    pub fn arrival_states(&self) -> (Vec<usize>, Vec<usize>) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for t in self.delta.iter().flatten() {
            let v = match t.mv {
                Move::L => &mut left,
                Move::R => &mut right,
                Move::S => continue,
            };
            if !v.contains(&t.next) {
                v.push(t.next);
            }
        }
        left.sort_unstable();
        right.sort_unstable();
        (left, right)
    }

    /// Parse a word: whitespace-separated symbol names, or one symbol per
    /// character when the text has no whitespace.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, MachineError> {
        let text = text.trim();
        let pieces: Vec<String> = if text.contains(char::is_whitespace) {
            text.split_whitespace().map(str::to_string).collect()
        } else {
            text.chars().map(|c| c.to_string()).collect()
        };
        pieces
            .iter()
            .map(|p| self.symbol(p).ok_or_else(|| MachineError::UnknownSymbol(p.clone())))
            .collect()
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        let names: Vec<&str> = word.iter().map(|&s| self.symbols[s].as_str()).collect();
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join(" ")
        }
    }

    fn check_input(&self, input: &[usize]) -> Result<(), MachineError> {
        for (i, &s) in input.iter().enumerate() {
            if s == BLANK || s == END || s >= self.symbols.len() {
                return Err(MachineError::MalformedInput(i));
            }
        }
        Ok(())
    }

    /// Initial configuration on `input`.
    pub fn initial(&self, input: &[usize]) -> Result<TapeConfig, MachineError> {
        self.check_input(input)?;
        let mut tape = input.to_vec();
        tape.push(END);
        Ok(TapeConfig {
            tape,
            head: 0,
            state: self.start,
            steps: 0,
        })
    }

    /// One step. Returns false, leaving `c` unchanged, when halted.
    pub fn step(&self, c: &mut TapeConfig) -> bool {
        let Some(t) = self.transition(c.state, c.tape[c.head]) else {
            return false;
        };
        c.tape[c.head] = t.write;
        c.state = t.next;
        match t.mv {
            Move::L => c.head = c.head.saturating_sub(1),
            Move::R => c.head = (c.head + 1).min(c.tape.len() - 1),
            Move::S => {}
        }
        c.steps += 1;
        true
    }

    /// Run for at most `budget` steps and return the final configuration.
    pub fn run_config(&self, input: &[usize], budget: usize) -> Result<TapeConfig, MachineError> {
        let mut c = self.initial(input)?;
        while c.steps < budget && self.step(&mut c) {}
        Ok(c)
    }

    /// Parse the machine text format.
    ///
    /// ```text
    /// machine
    /// states s h
    /// alphabet 0 1
    /// start s
    /// halt h
    /// s 0 -> s 1 R
    /// ```
    pub fn parse(text: &str) -> Result<Self, MachineError> {
        let mut seen_header = false;
        let mut states: Option<Vec<String>> = None;
        let mut alphabet: Option<Vec<String>> = None;
        let mut start: Option<(usize, String)> = None;
        let mut halt: Option<(usize, String)> = None;
        let mut rules: Vec<(usize, Vec<(usize, String)>)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let toks = strip_comment(&tokens(raw), 6);
            let toks: Vec<(usize, String)> = toks.into_iter().map(|(c, t)| (c, t.to_string())).collect();
            let Some((col, kw)) = toks.first().cloned() else { continue };
            if !seen_header {
                if kw != "machine" || toks.len() != 1 {
                    return Err(ParseError::new(ln, col, "expected `machine`").into());
                }
                seen_header = true;
                continue;
            }
            let rest = || toks[1..].iter().map(|(_, t)| t.clone()).collect::<Vec<_>>();
            let single = |what: &str| -> Result<(usize, String), MachineError> {
                if toks.len() != 2 {
                    return Err(ParseError::new(ln, col, format!("expected `{what} <name>`")).into());
                }
                Ok((ln, toks[1].1.clone()))
            };
            match kw.as_str() {
                "states" => states = Some(rest()),
                "alphabet" => alphabet = Some(rest()),
                "start" => start = Some(single("start")?),
                "halt" => halt = Some(single("halt")?),
                _ => {
                    if toks.len() != 6 || toks[2].1 != "->" {
                        return Err(ParseError::new(
                            ln,
                            col,
                            "expected `<state> <sym> -> <state> <sym> <L|R|S>`",
                        )
                        .into());
                    }
                    rules.push((ln, toks));
                }
            }
        }
        if !seen_header {
            return Err(ParseError::new(1, 1, "missing `machine` header").into());
        }
        let missing = |what: &str| MachineError::Parse(ParseError::new(1, 1, format!("missing `{what}` line")));
        let states = states.ok_or_else(|| missing("states"))?;
        let alphabet = alphabet.ok_or_else(|| missing("alphabet"))?;
        let (sln, start) = start.ok_or_else(|| missing("start"))?;
        let (hln, halt) = halt.ok_or_else(|| missing("halt"))?;
        let st: Vec<&str> = states.iter().map(String::as_str).collect();
        let al: Vec<&str> = alphabet.iter().map(String::as_str).collect();
        // validate rule tokens individually for precise diagnostics
        let mut parsed = Vec::new();
        for (ln, toks) in &rules {
            let known_state = |i: usize| -> Result<(), MachineError> {
                if st.contains(&toks[i].1.as_str()) {
                    Ok(())
                } else {
                    Err(ParseError::new(*ln, toks[i].0, format!("unknown state `{}`", toks[i].1)).into())
                }
            };
            let known_sym = |i: usize| -> Result<(), MachineError> {
                let s = toks[i].1.as_str();
                if s == "_" || s == "$" || al.contains(&s) {
                    Ok(())
                } else {
                    Err(ParseError::new(*ln, toks[i].0, format!("unknown symbol `{s}`")).into())
                }
            };
            known_state(0)?;
            known_sym(1)?;
            known_state(3)?;
            known_sym(4)?;
            let mv = match toks[5].1.as_str() {
                "L" => Move::L,
                "R" => Move::R,
                "S" => Move::S,
                other => {
                    return Err(ParseError::new(*ln, toks[5].0, format!("bad move `{other}`")).into());
                }
            };
            parsed.push((*ln, toks[0].1.as_str(), toks[1].1.as_str(), toks[3].1.as_str(), toks[4].1.as_str(), mv));
        }
        if !st.contains(&start.as_str()) {
            return Err(ParseError::new(sln, 7, format!("unknown state `{start}`")).into());
        }
        if !st.contains(&halt.as_str()) {
            return Err(ParseError::new(hln, 6, format!("unknown state `{halt}`")).into());
        }
        let rules: Vec<Rule<'_>> = parsed.iter().map(|&(_, a, b, c, d, m)| (a, b, c, d, m)).collect();
        Machine::new(&st, &al, &start, &halt, &rules).map_err(|e| {
            // attach a line number where one is obvious
            let ln = match &e {
                MachineError::HaltTransition(_) => parsed.iter().find(|r| r.1 == halt).map(|r| r.0),
                MachineError::EndTapeViolation { state } => {
                    parsed.iter().find(|r| r.1 == state && r.2 == "$").map(|r| r.0)
                }
                MachineError::DuplicateTransition { state, symbol } => parsed
                    .iter()
                    .filter(|r| r.1 == state && r.2 == symbol)
                    .nth(1)
                    .map(|r| r.0),
                _ => None,
            };
            match ln {
                Some(ln) => ParseError::new(ln, 1, e.to_string()).into(),
                None => e,
            }
        })
    }

    /// Render in the text format; only non-default transitions are listed.
    pub fn to_text(&self) -> String {
        let mut s = String::from("machine\n");
        s.push_str(&format!("states {}\n", self.states.join(" ")));
        s.push_str(&format!("alphabet {}\n", self.symbols.join(" ")));
        s.push_str(&format!("start {}\n", self.states[self.start]));
        s.push_str(&format!("halt {}\n", self.states[self.halt]));
        for q in 0..self.states.len() {
            for a in 0..self.symbols.len() {
                if let Some(t) = self.transition(q, a) {
                    if t.next == self.halt && t.write == a && t.mv == Move::S {
                        continue;
                    }
                    s.push_str(&format!(
                        "{} {} -> {} {} {:?}\n",
                        self.states[q], self.symbols[a], self.states[t.next], self.symbols[t.write], t.mv
                    ));
                }
            }
        }
        s
    }
}

/// A configuration: tape (input plus end cell), head, state, steps used.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TapeConfig {
    pub tape: Vec<usize>,
    pub head: usize,
    pub state: usize,
    pub steps: usize,
}

impl TapeConfig {
    /// Tape content before the first end-tape symbol.
    pub fn output(&self) -> Vec<usize> {
        self.tape.iter().copied().take_while(|&s| s != END).collect()
    }
}

impl fmt::Display for TapeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.tape.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if i == self.head {
                write!(f, "[{}]{}", self.state, s)?;
            } else {
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

/// Run `m` on `input` for at most `budget` steps and return the output word.
/// If the budget runs out first, the tape as it stands is returned.
pub fn tm_run(m: &Machine, input: &[usize], budget: usize) -> Result<Vec<usize>, MachineError> {
    Ok(m.run_config(input, budget)?.output())
}

fn fresh(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.iter().any(|t| t == &name) {
        name.push('\'');
    }
    name
}

struct Builder {
    states: Vec<String>,
    symbols: Vec<String>,
    table: HashMap<(usize, usize), Transition>,
}

impl Builder {
    fn state(&mut self, base: &str) -> usize {
        let n = fresh(base, &self.states);
        self.states.push(n);
        self.states.len() - 1
    }

    fn symbol(&mut self, base: &str) -> usize {
        let n = fresh(base, &self.symbols);
        self.symbols.push(n);
        self.symbols.len() - 1
    }

    fn rule(&mut self, q: usize, a: usize, next: usize, write: usize, mv: Move) {
        self.table.insert((q, a), Transition { next, write, mv });
    }
}

/// Wrap `m` so that the output always has the input's length.
///
/// The wrapper marks cell 0, runs `m` (an early `$` written by `m` becomes a
/// soft end marker that `m` still reads as `$`), and once `m` halts returns
/// to the mark, unmarks it and blanks everything from the soft end marker up
/// to the real end-tape cell.
pub fn force_length(m: &Machine) -> Machine {
    let ns = m.symbols.len();
    let mut b = Builder {
        states: Vec::new(),
        symbols: m.symbols.clone(),
        table: HashMap::new(),
    };
    // wrapper symbol layout: m's symbols, soft end, marked copies of 0.. (all but END), marked soft end
    let soft = b.symbol("%");
    let marked: Vec<usize> = (0..ns)
        .map(|s| {
            if s == END {
                usize::MAX
            } else {
                let name = format!("^{}", m.symbols[s]);
                b.symbol(&name)
            }
        })
        .collect();
    let marked_soft = b.symbol("^%");

    let init = b.state("init");
    let inner: Vec<usize> = m.states.iter().map(|q| b.state(&format!("m.{q}"))).collect();
    let seek = b.state("seek");
    let keep = b.state("keep");
    let wipe = b.state("wipe");
    let done = b.state("done");
    let target = |q: usize| if q == m.halt { seek } else { inner[q] };

    // init: mark cell 0 or finish on empty input
    b.rule(init, END, done, END, Move::S);
    for s in 0..ns {
        if s != END {
            b.rule(init, s, target(m.start), marked[s], Move::S);
        }
    }
    b.rule(init, soft, done, soft, Move::S);
    b.rule(init, marked_soft, done, marked_soft, Move::S);
    for &x in &marked {
        if x != usize::MAX {
            b.rule(init, x, done, x, Move::S);
        }
    }

    // simulation of m; (wrapper symbol, m's view, is marked, is real end)
    let mut views: Vec<(usize, usize, bool, bool)> = Vec::new();
    for s in 0..ns {
        views.push((s, s, false, s == END));
        if s != END {
            views.push((marked[s], s, true, false));
        }
    }
    views.push((soft, END, false, false));
    views.push((marked_soft, END, true, false));
    for q in 0..m.states.len() {
        if q == m.halt {
            continue;
        }
        for &(x, view, is_marked, real_end) in &views {
            let t = m.transition(q, view).expect("non-halt states are total");
            let plain = if t.write == END && !real_end { soft } else { t.write };
            let write = match (is_marked, plain) {
                (false, w) => w,
                (true, w) if w == soft => marked_soft,
                (true, w) => marked[w],
            };
            b.rule(inner[q], x, target(t.next), write, t.mv);
        }
    }

    // cleanup
    for &(x, _, is_marked, _) in &views {
        if !is_marked {
            b.rule(seek, x, seek, x, Move::L);
        }
    }
    for s in 0..ns {
        if s != END {
            b.rule(seek, marked[s], keep, s, Move::R);
        }
    }
    b.rule(seek, marked_soft, wipe, BLANK, Move::R);
    for s in 0..ns {
        if s != END {
            b.rule(keep, s, keep, s, Move::R);
            b.rule(wipe, s, wipe, BLANK, Move::R);
        }
    }
    b.rule(keep, soft, wipe, BLANK, Move::R);
    b.rule(wipe, soft, wipe, BLANK, Move::R);
    b.rule(keep, END, done, END, Move::S);
    b.rule(wipe, END, done, END, Move::S);

    let Builder { states, symbols, table } = b;
    Machine::from_table(states, symbols, init, done, table).expect("wrapper is well formed")
}

/// A machine reading `program ++ payload` that checks the program prefix,
/// runs `m` on the payload and leaves the prefix unchanged.
///
/// If the prefix does not match (or the input is shorter than it) the
/// machine halts at once and the output equals the input. `m` sees the first
/// payload cell as its cell 0: a left move there stays put.
pub fn program_prefix_embed(m: &Machine, program: &[usize]) -> Result<Machine, MachineError> {
    for (i, &s) in program.iter().enumerate() {
        if s == BLANK || s == END || s >= m.symbols.len() {
            return Err(MachineError::MalformedProgram(i));
        }
    }
    let ns = m.symbols.len();
    let mut b = Builder {
        states: Vec::new(),
        symbols: m.symbols.clone(),
        table: HashMap::new(),
    };
    let marked: Vec<usize> = (0..ns)
        .map(|s| {
            let name = format!("^{}", m.symbols[s]);
            b.symbol(&name)
        })
        .collect();
    let checks: Vec<usize> = (0..program.len()).map(|i| b.state(&format!("p{i}"))).collect();
    let enter = b.state("enter");
    let inner: Vec<usize> = m.states.iter().map(|q| b.state(&format!("m.{q}"))).collect();
    let seek = b.state("seek");
    let done = b.state("done");

    for (i, &p) in program.iter().enumerate() {
        let next = checks.get(i + 1).copied().unwrap_or(enter);
        b.rule(checks[i], p, next, p, Move::R);
    }
    // enter payload cell 0
    b.rule(enter, END, done, END, Move::S);
    for s in 0..ns {
        if s == END {
            continue;
        }
        if m.start == m.halt {
            b.rule(enter, s, done, s, Move::S);
        } else {
            b.rule(enter, s, inner[m.start], marked[s], Move::S);
        }
    }
    let target = |q: usize| if q == m.halt { seek } else { inner[q] };
    for q in 0..m.states.len() {
        if q == m.halt {
            continue;
        }
        for s in 0..ns {
            let t = m.transition(q, s).expect("non-halt states are total");
            b.rule(inner[q], s, target(t.next), t.write, t.mv);
            let mv = if t.mv == Move::L { Move::S } else { t.mv };
            b.rule(inner[q], marked[s], target(t.next), marked[t.write], mv);
        }
    }
    for s in 0..ns {
        b.rule(seek, s, seek, s, Move::L);
        b.rule(seek, marked[s], done, s, Move::S);
    }
    let start = checks.first().copied().unwrap_or(enter);
    let Builder { states, symbols, table } = b;
    Machine::from_table(states, symbols, start, done, table)
}

/// Small machines over `{0, 1}` used in examples and tests.
pub mod library {
    use super::{Machine, Move};

    /// Halts immediately.
    pub fn identity() -> Machine {
        Machine::new(&["h"], &["0", "1"], "h", "h", &[]).unwrap()
    }

    /// Flips every bit left to right, halts on `$`.
    pub fn not() -> Machine {
        Machine::new(
            &["s", "h"],
            &["0", "1"],
            "s",
            "h",
            &[
                ("s", "0", "s", "1", Move::R),
                ("s", "1", "s", "0", Move::R),
                ("s", "$", "h", "$", Move::S),
            ],
        )
        .unwrap()
    }

    /// Unary increment: turns the first `0` into `1`.
    pub fn increment() -> Machine {
        Machine::new(
            &["s", "h"],
            &["0", "1"],
            "s",
            "h",
            &[
                ("s", "1", "s", "1", Move::R),
                ("s", "0", "h", "1", Move::S),
                ("s", "$", "h", "$", Move::S),
            ],
        )
        .unwrap()
    }

    /// Writes `1` on cell 0 and halts.
    pub fn write_one() -> Machine {
        Machine::new(
            &["s", "h"],
            &["0", "1"],
            "s",
            "h",
            &[("s", "0", "h", "1", Move::S), ("s", "1", "h", "1", Move::S)],
        )
        .unwrap()
    }

    /// Writes `1` on cell 0 and an early end marker on cell 1: output `1`.
    pub fn write_one_end() -> Machine {
        Machine::new(
            &["s", "e", "h"],
            &["0", "1"],
            "s",
            "h",
            &[
                ("s", "0", "e", "1", Move::R),
                ("s", "1", "e", "1", Move::R),
                ("e", "0", "h", "$", Move::S),
                ("e", "1", "h", "$", Move::S),
            ],
        )
        .unwrap()
    }

    /// Walks to `$`, steps back and flips the last bit.
    pub fn flip_last() -> Machine {
        Machine::new(
            &["s", "b", "h"],
            &["0", "1"],
            "s",
            "h",
            &[
                ("s", "0", "s", "0", Move::R),
                ("s", "1", "s", "1", Move::R),
                ("s", "$", "b", "$", Move::L),
                ("b", "0", "h", "1", Move::S),
                ("b", "1", "h", "0", Move::S),
                ("b", "$", "h", "$", Move::S),
            ],
        )
        .unwrap()
    }

    pub fn by_name(name: &str) -> Option<Machine> {
        Some(match name {
            "identity" => identity(),
            "not" => not(),
            "increment" | "inc" => increment(),
            "write-one" => write_one(),
            "write-one-end" => write_one_end(),
            "flip-last" => flip_last(),
            _ => return None,
        })
    }

    pub const NAMES: &[&str] = &["identity", "not", "increment", "write-one", "write-one-end", "flip-last"];
}

/// All words over `m`'s symbols named in `alphabet` with length `<= max_len`.
pub fn words_up_to(m: &Machine, alphabet: &[&str], max_len: usize) -> Vec<Vec<usize>> {
    let syms: Vec<usize> = alphabet.iter().filter_map(|a| m.symbol(a)).collect();
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &s in &syms {
                let mut v: Vec<usize> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
