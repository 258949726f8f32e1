//! `tilex`: command-line front end for the tiling-owf library.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tiling_owf::compile::compile_to_tiles;
use tiling_owf::dist::{
    check_perfectly_rounded, m_decode, m_encode, perfect_round, DistError, Measure, RoundedDistribution,
};
use tiling_owf::dyadic::Dyadic;
use tiling_owf::gf2::{FieldElement, ReductionPolynomial};
use tiling_owf::owf::{compare, sibling_stats, CandidateFunction};
use tiling_owf::tiling::{
    board_from_top, expand_traced, tiling_expansion, Line, SweepOrder, TileSet, TilingError,
};
use tiling_owf::tm::{force_length, library, tm_run, words_up_to, Machine, MachineError};
use tiling_owf::vegas::{
    estimate_security, invert_optimal, kl_estimate, multimedian, BernoulliFamily, DiceStream, GeneratorRegistry,
    LProgram, PlantedFamily, UniformWords,
};
use tiling_owf::Bits;

#[derive(Parser)]
#[command(name = "tilex", version, about = "Tiling Expansion, hashing transforms, perfect rounding and Las Vegas search")]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tile sets and expansion.
    #[command(subcommand)]
    Tile(TileCmd),
    /// Turing machines and their compilation to tiles.
    #[command(subcommand)]
    Tm(TmCmd),
    /// GF(2^n) arithmetic. Elements are written as n-bit strings, highest
    /// coefficient first.
    #[command(subcommand)]
    Gf2(Gf2Cmd),
    /// Sibling statistics of length-preserving functions.
    #[command(subcommand)]
    Owf(OwfCmd),
    /// Perfect rounding and the m-encoding.
    #[command(subcommand)]
    Dist(DistCmd),
    /// Optimal inversion by sampling the complete family.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Seeded benchmarks with CSV output.
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Copy, Clone, ValueEnum)]
enum Order {
    Row,
    Column,
}

#[derive(Subcommand)]
enum TileCmd {
    /// Expand a top line and print the bottom line as tile names.
    ///
    /// Output: one line of space-separated tile names (`_` for an empty
    /// cell). With --board, every row of the square.
    Expand {
        #[arg(long)]
        tiles: PathBuf,
        /// Top line, e.g. "T1 T2".
        #[arg(long)]
        top: String,
        #[arg(long, value_enum, default_value = "row")]
        order: Order,
        #[arg(long)]
        board: bool,
    },
}

#[derive(Args)]
struct MachineArgs {
    /// Machine description file.
    #[arg(long, conflicts_with = "builtin")]
    machine: Option<PathBuf>,
    /// Built-in machine: identity, not, increment, write-one, write-one-end, flip-last.
    #[arg(long)]
    builtin: Option<String>,
    /// Wrap the machine so that output length equals input length.
    #[arg(long)]
    force_length: bool,
}

#[derive(Subcommand)]
enum TmCmd {
    /// Run for a step budget. Output: the output word.
    Run {
        #[command(flatten)]
        m: MachineArgs,
        #[arg(long)]
        input: String,
        #[arg(long)]
        budget: usize,
    },
    /// Compile to a tile set. Output: tile-set text.
    Compile {
        #[command(flatten)]
        m: MachineArgs,
    },
    /// Check that expanding compiled top lines reproduces the machine on
    /// all words up to --max-len and widths up to --max-width. Output: CSV
    /// `input,width,expected,decoded,orders_agree,ok`; exit 1 on a mismatch.
    Check {
        #[command(flatten)]
        m: MachineArgs,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 6)]
        max_width: usize,
    },
}

#[derive(Subcommand)]
enum Gf2Cmd {
    /// Product of two elements. Output: the product bit string.
    Mul { a: String, b: String },
    /// Inverse. Output: the inverse bit string.
    Inv { a: String },
    /// Multiplication table for n <= 6. Output: CSV `a,b,product`.
    Table {
        #[arg(long)]
        n: u32,
    },
    /// Reduction polynomial used for width n.
    Modulus {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand)]
enum OwfCmd {
    /// Exact preimage histogram. Output: CSV `multiplicity,count`; the mean
    /// sibling count goes to standard error.
    Stats {
        /// identity, zero, not, square, cube, or pair:<name>.
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        n: u32,
    },
    /// Compare f with its pair transform. Output: CSV
    /// `fn,n,f_log_security,g_log_security,f_mean_siblings,g_mean_siblings`.
    Compare {
        #[arg(long = "fn", value_delimiter = ',', default_value = "identity,zero,not,square,cube")]
        functions: Vec<String>,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand)]
enum DistCmd {
    /// Perfectly round a measure. Output: CSV `x,cumulative,density,ell`.
    Round {
        #[arg(long)]
        measure: PathBuf,
    },
    /// Check a rounded measure (default: the rounding of --measure).
    /// Output: `pass` or one violation per line; exit 1 on failure.
    Check {
        #[arg(long)]
        measure: PathBuf,
        /// A measure file whose cumulative values are the rounded ones.
        #[arg(long)]
        rounded: Option<PathBuf>,
    },
    /// m-encoding of a point, or decoding of bits. Output: bits or a point.
    Encode {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, conflicts_with = "decode")]
        x: Option<usize>,
        #[arg(long)]
        decode: Option<String>,
    },
}

#[derive(Args)]
struct TargetArgs {
    #[arg(long)]
    tiles: PathBuf,
    /// Bottom line to invert, e.g. "T3 T4".
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Initial volume given to each generator run.
    #[arg(long, default_value_t = 64)]
    volume: u64,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Invert Tiling Expansion on a target bottom line with uniformly drawn
    /// top lines. Output: CSV `witness,runs,trials,successes,log2_security`.
    Invert {
        #[command(flatten)]
        t: TargetArgs,
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Estimate Kl of the target's preimage set. Output: CSV
    /// `hits,trials,estimate,lower,upper` (empty fields when undefined).
    Kl {
        #[command(flatten)]
        t: TargetArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Family {
    Bernoulli,
    Planted,
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Multimedian time. Output: CSV `repetition,trials,solved,seed`; the
    /// median goes to standard error.
    Mt {
        #[arg(long, default_value_t = 16)]
        k: usize,
        #[arg(long, default_value_t = 101)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "bernoulli")]
        family: Family,
        /// Per-attempt success probability (bernoulli family).
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Hard fraction and hard-instance attempts (planted family).
        #[arg(long, default_value_t = 0.125)]
        epsilon: f64,
        #[arg(long, default_value_t = 50)]
        hard_trials: u64,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
}

enum Failure {
    /// Malformed input: exit 2.
    Input(String),
    /// A check did not pass: exit 1.
    Check(String),
}

type Res<T> = Result<T, Failure>;

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn in_file<E: std::fmt::Display>(path: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", path.display()))
}

fn load_tiles(path: &Path) -> Res<TileSet> {
    TileSet::parse(&read(path)?).map_err(in_file::<TilingError>(path))
}

fn load_measure(path: &Path) -> Res<Measure> {
    Measure::parse(&read(path)?).map_err(in_file::<DistError>(path))
}

fn load_machine(a: &MachineArgs) -> Res<Machine> {
    Ok(load_machine_pair(a)?.1)
}

/// The machine as given and, with --force-length, its wrapped form.
fn load_machine_pair(a: &MachineArgs) -> Res<(Machine, Machine)> {
    let m = match (&a.machine, &a.builtin) {
        (Some(p), _) => Machine::parse(&read(p)?).map_err(in_file::<MachineError>(p))?,
        (None, Some(name)) => {
            library::by_name(name).ok_or_else(|| Failure::Input(format!("unknown built-in machine `{name}`")))?
        }
        (None, None) => return Err(Failure::Input("give --machine or --builtin".into())),
    };
    let wrapped = if a.force_length { force_length(&m) } else { m.clone() };
    Ok((m, wrapped))
}

fn parse_element(s: &str) -> Res<FieldElement> {
    let bits = Bits::parse(s).ok_or_else(|| Failure::Input(format!("`{s}` is not a bit string")))?;
    FieldElement::from_bits(&bits).map_err(input_err)
}

fn run(cli: Cli) -> Res<String> {
    match cli.command {
        Command::Tile(TileCmd::Expand { tiles, top, order, board }) => {
            let ts = load_tiles(&tiles)?;
            let line = ts.parse_line(&top).map_err(input_err)?;
            if board {
                let start = board_from_top(&line, &ts).map_err(input_err)?;
                let order = match order {
                    Order::Row => SweepOrder::RowMajor,
                    Order::Column => SweepOrder::ColumnMajor,
                };
                let ex = expand_traced(&start, &ts, order);
                let mut s = String::new();
                for r in 0..ex.board.side() {
                    s.push_str(&ts.format_line(&ex.board.row(r)));
                    s.push('\n');
                }
                Ok(s)
            } else {
                let (bottom, _) = tiling_expansion(&line, &ts).map_err(input_err)?;
                Ok(format!("{}\n", ts.format_line(&bottom)))
            }
        }
        Command::Tm(cmd) => tm(cmd),
        Command::Gf2(cmd) => gf2(cmd),
        Command::Owf(OwfCmd::Stats { function, n }) => {
            let f = CandidateFunction::named(&function, n).map_err(input_err)?;
            let s = sibling_stats(&f).map_err(input_err)?;
            eprintln!("mean_siblings={}", s.mean_siblings);
            Ok(s.to_csv())
        }
        Command::Owf(OwfCmd::Compare { functions, n }) => {
            let mut s = String::from("fn,n,f_log_security,g_log_security,f_mean_siblings,g_mean_siblings\n");
            for name in functions {
                let f = CandidateFunction::named(&name, n).map_err(input_err)?;
                let c = compare(&f).map_err(input_err)?;
                s.push_str(&format!(
                    "{},{},{:.6},{:.6},{},{}\n",
                    c.name, c.n, c.f_security, c.g_security, c.f_mean_siblings, c.g_mean_siblings
                ));
            }
            Ok(s)
        }
        Command::Dist(cmd) => dist(cmd),
        Command::Search(cmd) => search(cmd),
        Command::Bench(BenchCmd::Mt {
            k,
            reps,
            seed,
            family,
            p,
            epsilon,
            hard_trials,
            cap,
        }) => {
            if k == 0 || reps == 0 {
                return Err(Failure::Input("--k and --reps must be at least 1".into()));
            }
            let report = match family {
                Family::Bernoulli => {
                    if !(p > 0.0 && p <= 1.0) {
                        return Err(Failure::Input("--p must be in (0, 1]".into()));
                    }
                    multimedian(&BernoulliFamily { p }, k, reps, cap, seed)
                }
                Family::Planted => multimedian(
                    &PlantedFamily {
                        epsilon,
                        hard_trials,
                        unsolvable: 0.0,
                    },
                    k,
                    reps,
                    cap,
                    seed,
                ),
            };
            eprintln!("median={}", report.median);
            Ok(report.to_csv())
        }
    }
}

fn tm(cmd: TmCmd) -> Res<String> {
    match cmd {
        TmCmd::Run { m, input, budget } => {
            let m = load_machine(&m)?;
            let w = m.parse_word(&input).map_err(input_err)?;
            let out = tm_run(&m, &w, budget).map_err(input_err)?;
            Ok(format!("{}\n", m.format_word(&out)))
        }
        TmCmd::Compile { m } => {
            let m = load_machine(&m)?;
            let c = compile_to_tiles(&m).map_err(input_err)?;
            Ok(c.tiles().to_text())
        }
        TmCmd::Check { m, max_len, max_width } => {
            let (base, m) = load_machine_pair(&m)?;
            let c = compile_to_tiles(&m).map_err(input_err)?;
            let inputs: Vec<&str> = base
                .input_symbols()
                .map(|s| base.symbols()[s].as_str())
                .collect();
            let mut s = String::from("input,width,expected,decoded,orders_agree,ok\n");
            let mut failed = 0;
            for w in words_up_to(&m, &inputs, max_len) {
                for n in w.len() + 2..=max_width {
                    let expected = tm_run(&m, &w, n - 1).map_err(input_err)?;
                    let row = c.expand(&w, n, SweepOrder::RowMajor).map_err(input_err)?;
                    let col = c.expand(&w, n, SweepOrder::ColumnMajor).map_err(input_err)?;
                    let decoded = c.decode(&row.board.row(n - 1)).ok();
                    let agree = row.board == col.board;
                    let ok = agree && decoded.as_ref() == Some(&expected);
                    failed += !ok as usize;
                    s.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        m.format_word(&w),
                        n,
                        m.format_word(&expected),
                        decoded.map_or("-".to_string(), |d| m.format_word(&d)),
                        agree,
                        ok
                    ));
                }
            }
            if failed > 0 {
                return Err(Failure::Check(format!("{s}{failed} instance(s) failed")));
            }
            Ok(s)
        }
    }
}

fn gf2(cmd: Gf2Cmd) -> Res<String> {
    match cmd {
        Gf2Cmd::Mul { a, b } => {
            let p = parse_element(&a)?.mul(&parse_element(&b)?).map_err(input_err)?;
            Ok(format!("{p}\n"))
        }
        Gf2Cmd::Inv { a } => Ok(format!("{}\n", parse_element(&a)?.inv().map_err(input_err)?)),
        Gf2Cmd::Table { n } => {
            if !(1..=6).contains(&n) {
                return Err(Failure::Input("table needs 1 <= n <= 6".into()));
            }
            let mut s = String::from("a,b,product\n");
            for a in 0..1u64 << n {
                for b in 0..1u64 << n {
                    let (x, y) = (FieldElement::new(n, a).map_err(input_err)?, FieldElement::new(n, b).map_err(input_err)?);
                    s.push_str(&format!("{x},{y},{}\n", x.mul(&y).map_err(input_err)?));
                }
            }
            Ok(s)
        }
        Gf2Cmd::Modulus { n } => Ok(format!("{}\n", ReductionPolynomial::for_width(n).map_err(input_err)?)),
    }
}

fn rounded_from_measure(m: &Measure, path: &Path) -> Res<RoundedDistribution> {
    let values = (1..m.size())
        .map(|x| {
            Dyadic::from_rational(m.cumulative(x))
                .ok_or_else(|| Failure::Input(format!("{}: cumulative value at {x} is not dyadic", path.display())))
        })
        .collect::<Res<Vec<_>>>()?;
    Ok(RoundedDistribution::from_values(values))
}

fn dist(cmd: DistCmd) -> Res<String> {
    match cmd {
        DistCmd::Round { measure } => {
            let m = load_measure(&measure)?;
            let r = perfect_round(&m).map_err(input_err)?;
            let mut s = String::from("x,cumulative,density,ell\n");
            for x in 0..r.size() {
                let d = r.density(x).expect("rounded values increase");
                let ell = r.ell(x).map_err(input_err)?;
                s.push_str(&format!("{x},{},{d},{ell}\n", r.cumulative(x)));
            }
            Ok(s)
        }
        DistCmd::Check { measure, rounded } => {
            let m = load_measure(&measure)?;
            let r = match rounded {
                Some(p) => rounded_from_measure(&load_measure(&p)?, &p)?,
                None => perfect_round(&m).map_err(input_err)?,
            };
            let rep = check_perfectly_rounded(&r, &m);
            if rep.passed() {
                Ok("pass\n".into())
            } else {
                let lines: Vec<String> = rep.violations.iter().map(|v| v.to_string()).collect();
                Err(Failure::Check(format!("fail\n{}", lines.join("\n"))))
            }
        }
        DistCmd::Encode { measure, x, decode } => {
            let m = load_measure(&measure)?;
            let r = perfect_round(&m).map_err(input_err)?;
            match (x, decode) {
                (Some(x), _) => Ok(format!("{}\n", m_encode(&r, x).map_err(input_err)?)),
                (None, Some(bits)) => {
                    let b = Bits::parse(&bits).ok_or_else(|| Failure::Input(format!("`{bits}` is not a bit string")))?;
                    Ok(format!("{}\n", m_decode(&r, &b).map_err(input_err)?))
                }
                (None, None) => Err(Failure::Input("give --x or --decode".into())),
            }
        }
    }
}

fn search(cmd: SearchCmd) -> Res<String> {
    let t = match &cmd {
        SearchCmd::Invert { t, .. } | SearchCmd::Kl { t, .. } => t,
    };
    let ts = load_tiles(&t.tiles)?;
    let target = ts.parse_line(&t.target).map_err(input_err)?;
    let n = target.len();
    let program: Arc<dyn LProgram<Line, Vec<usize>>> = Arc::new(UniformWords {
        alphabet: ts.len(),
        len: n,
    });
    let reg = GeneratorRegistry::new(vec![program], t.volume);
    let verify = |w: &Vec<usize>| {
        let top = Line::from_tiles(w);
        matches!(tiling_expansion(&top, &ts), Ok((bottom, _)) if bottom == target)
    };
    match cmd {
        SearchCmd::Invert { t, cap, trials } => {
            let mut dice = DiceStream::new(t.seed);
            let inv = invert_optimal(&reg, &target, verify, cap, &mut dice);
            let est = estimate_security(&reg, &target, verify, trials, t.seed.wrapping_add(1));
            let witness = inv
                .witness
                .map(|w| ts.format_line(&Line::from_tiles(&w)))
                .unwrap_or_default();
            Ok(format!(
                "witness,runs,trials,successes,log2_security\n{},{},{},{},{}\n",
                witness,
                inv.runs,
                est.runs,
                est.successes,
                est.log_security.map_or(String::new(), |v| format!("{v:.6}"))
            ))
        }
        SearchCmd::Kl { t, trials } => {
            let k = kl_estimate(&reg, &target, verify, trials, t.seed);
            let f = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:.6}"));
            Ok(format!(
                "hits,trials,estimate,lower,upper\n{},{},{},{:.6},{}\n",
                k.hits,
                k.trials,
                f(k.estimate),
                k.lower,
                f(k.upper)
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let (text, code) = match run(cli) {
        Ok(s) => (s, 0),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Check(msg)) => (format!("{msg}\n"), 1),
    };
    let written = match &out {
        Some(p) => fs::write(p, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
