//! L-form Las Vegas programs.
//!
//! A program runs in steps against a volume budget. Each step may read fair
//! dice bits and bet part of the remaining volume; after the step one unit
//! of volume is charged. A run aborts when no volume is left to charge.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A source of fair bits. `None` means a fixed prefix ran out.
pub trait Dice {
    fn bit(&mut self) -> Option<bool>;
}

/// Seeded dice with a recorded transcript.
#[derive(Clone, Debug)]
pub struct DiceStream {
    seed: u64,
    rng: ChaCha8Rng,
    position: u64,
    transcript: Option<Vec<bool>>,
}

impl DiceStream {
    pub fn new(seed: u64) -> Self {
        DiceStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            position: 0,
            transcript: None,
        }
    }

    /// Same as `new`, keeping every bit drawn.
    pub fn recorded(seed: u64) -> Self {
        DiceStream {
            transcript: Some(Vec::new()),
            ..Self::new(seed)
        }
    }

    /// The stream of `seed` advanced to `position`.
    pub fn at(seed: u64, position: u64) -> Self {
        let mut d = Self::new(seed);
        for _ in 0..position {
            d.bit();
        }
        d
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn transcript(&self) -> Option<&[bool]> {
        self.transcript.as_deref()
    }
}

impl Dice for DiceStream {
    fn bit(&mut self) -> Option<bool> {
        let b = self.rng.next_u32() & 1 == 1;
        self.position += 1;
        if let Some(t) = self.transcript.as_mut() {
            t.push(b);
        }
        Some(b)
    }
}

/// A fixed finite dice prefix.
#[derive(Clone, Debug, Default)]
pub struct FixedDice {
    bits: Vec<bool>,
    pos: usize,
}

impl FixedDice {
    pub fn new(bits: Vec<bool>) -> Self {
        FixedDice { bits, pos: 0 }
    }

    pub fn used(&self) -> usize {
        self.pos
    }
}

impl Dice for FixedDice {
    fn bit(&mut self) -> Option<bool> {
        let b = self.bits.get(self.pos).copied();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BetRecord {
    pub stake: u64,
    pub dice: bool,
    pub volume_after: u64,
}

/// Remaining volume and the record of every bet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeBudget {
    pub initial: u64,
    pub remaining: u64,
    pub steps: u64,
    pub ledger: Vec<BetRecord>,
}

impl VolumeBudget {
    pub fn new(initial: u64) -> Self {
        VolumeBudget {
            initial,
            remaining: initial,
            steps: 0,
            ledger: Vec::new(),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Fault {
    DiceExhausted,
    Overdraw,
}

/// What a step may touch: the dice and the budget.
pub struct StepContext<'a> {
    dice: &'a mut dyn Dice,
    budget: &'a mut VolumeBudget,
    fault: Option<Fault>,
}

impl StepContext<'_> {
    /// One fair bit. After a fault every further bit reads `false` and the
    /// step's result is discarded.
    pub fn dice(&mut self) -> bool {
        if self.fault.is_some() {
            return false;
        }
        match self.dice.bit() {
            Some(b) => b,
            None => {
                self.fault = Some(Fault::DiceExhausted);
                false
            }
        }
    }

    pub fn remaining(&self) -> u64 {
        self.budget.remaining
    }

    /// Stake `stake` units: a 1 on the dice adds it, a 0 subtracts it.
    /// Returns the dice bit. Staking more than the remaining volume aborts
    /// the run.
    pub fn bet(&mut self, stake: u64) -> bool {
        if self.fault.is_some() {
            return false;
        }
        if stake > self.budget.remaining {
            self.fault = Some(Fault::Overdraw);
            return false;
        }
        let win = self.dice();
        if self.fault.is_some() {
            return false;
        }
        if win {
            self.budget.remaining += stake;
        } else {
            self.budget.remaining -= stake;
        }
        self.budget.ledger.push(BetRecord {
            stake,
            dice: win,
            volume_after: self.budget.remaining,
        });
        win
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step<O> {
    Continue,
    Emit(O),
    Abort,
}

pub trait Process<O> {
    fn step(&mut self, ctx: &mut StepContext<'_>) -> Step<O>;
}

/// A program started on an input.
pub trait LProgram<I, O>: Send + Sync {
    fn name(&self) -> String;
    fn spawn(&self, input: &I) -> Box<dyn Process<O>>;
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AbortReason {
    OutOfVolume,
    Overdraw,
    Program,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<O> {
    Output(O),
    Abort(AbortReason),
    /// The fixed dice prefix was too short to decide the run.
    Undecided,
}

impl<O> Outcome<O> {
    pub fn output(&self) -> Option<&O> {
        match self {
            Outcome::Output(o) => Some(o),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport<O> {
    pub outcome: Outcome<O>,
    pub budget: VolumeBudget,
}

/// Run `p` on `input` with initial volume `b`.
pub fn run_l<I, O>(p: &dyn LProgram<I, O>, input: &I, b: u64, dice: &mut dyn Dice) -> RunReport<O> {
    let mut process = p.spawn(input);
    run_process(process.as_mut(), b, dice)
}

fn run_process<O>(process: &mut dyn Process<O>, b: u64, dice: &mut dyn Dice) -> RunReport<O> {
    let mut budget = VolumeBudget::new(b);
    let outcome = loop {
        let mut ctx = StepContext {
            dice: &mut *dice,
            budget: &mut budget,
            fault: None,
        };
        let step = process.step(&mut ctx);
        match ctx.fault {
            Some(Fault::DiceExhausted) => break Outcome::Undecided,
            Some(Fault::Overdraw) => break Outcome::Abort(AbortReason::Overdraw),
            None => {}
        }
        if budget.remaining == 0 {
            break Outcome::Abort(AbortReason::OutOfVolume);
        }
        budget.remaining -= 1;
        budget.steps += 1;
        match step {
            Step::Continue => {}
            Step::Emit(o) => break Outcome::Output(o),
            Step::Abort => break Outcome::Abort(AbortReason::Program),
        }
    };
    RunReport { outcome, budget }
}

/// Exact output distribution over all dice sequences, explored to a fixed
/// number of dice bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution<O: Ord> {
    pub outputs: BTreeMap<O, BigRational>,
    pub abort: BigRational,
    /// Mass of dice prefixes still undecided at the depth limit.
    pub undecided: BigRational,
    /// `Σ Pr[leaf] · final volume` over decided leaves.
    pub expected_final_volume: BigRational,
}

impl<O: Ord> ExactDistribution<O> {
    pub fn prob(&self, y: &O) -> BigRational {
        self.outputs.get(y).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn prob_where(&self, mut pred: impl FnMut(&O) -> bool) -> BigRational {
        self.outputs
            .iter()
            .filter(|(o, _)| pred(o))
            .map(|(_, p)| p.clone())
            .sum()
    }

    pub fn success(&self) -> BigRational {
        self.outputs.values().cloned().sum()
    }
}

fn half_pow(d: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << d)
}

/// Enumerate dice prefixes up to `max_bits` for an arbitrary run function.
fn enumerate<O: Ord + Clone>(
    max_bits: usize,
    mut run: impl FnMut(&mut FixedDice) -> (Outcome<O>, u64),
) -> ExactDistribution<O> {
    let mut dist = ExactDistribution {
        outputs: BTreeMap::new(),
        abort: BigRational::zero(),
        undecided: BigRational::zero(),
        expected_final_volume: BigRational::zero(),
    };
    let mut stack: Vec<Vec<bool>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let mut dice = FixedDice::new(prefix.clone());
        let (outcome, volume) = run(&mut dice);
        let w = half_pow(prefix.len());
        match outcome {
            Outcome::Undecided => {
                if prefix.len() >= max_bits {
                    dist.undecided += w;
                } else {
                    for b in [true, false] {
                        let mut p = prefix.clone();
                        p.push(b);
                        stack.push(p);
                    }
                }
                continue;
            }
            Outcome::Output(o) => {
                *dist.outputs.entry(o).or_insert_with(BigRational::zero) += &w;
            }
            Outcome::Abort(_) => dist.abort += &w,
        }
        dist.expected_final_volume += w * BigRational::from_integer(volume.into());
    }
    dist
}

/// Exact distribution of `run_l(p, input, b, ·)` over dice prefixes of at
/// most `max_bits` bits.
pub fn exact_distribution<I, O: Ord + Clone>(
    p: &dyn LProgram<I, O>,
    input: &I,
    b: u64,
    max_bits: usize,
) -> ExactDistribution<O> {
    enumerate(max_bits, |dice| {
        let r = run_l(p, input, b, dice);
        (r.outcome, r.budget.remaining)
    })
}

// ---------------------------------------------------------------------------
// Program library

/// Emits its value in the first step.
pub struct Constant<O>(pub O);

impl<I, O: Clone + Send + Sync + fmt::Debug + 'static> LProgram<I, O> for Constant<O> {
    fn name(&self) -> String {
        format!("constant({:?})", self.0)
    }
    fn spawn(&self, _: &I) -> Box<dyn Process<O>> {
        let v = self.0.clone();
        Box::new(FnProcess(move |_: &mut StepContext<'_>| Step::Emit(v.clone())))
    }
}

struct FnProcess<F>(F);

impl<O, F: FnMut(&mut StepContext<'_>) -> Step<O>> Process<O> for FnProcess<F> {
    fn step(&mut self, ctx: &mut StepContext<'_>) -> Step<O> {
        (self.0)(ctx)
    }
}

/// Bets the whole budget once, then emits.
pub struct AllIn<O>(pub O);

impl<I, O: Clone + Send + Sync + fmt::Debug + 'static> LProgram<I, O> for AllIn<O> {
    fn name(&self) -> String {
        format!("all-in({:?})", self.0)
    }
    fn spawn(&self, _: &I) -> Box<dyn Process<O>> {
        let v = self.0.clone();
        let mut bet = false;
        Box::new(FnProcess(move |ctx: &mut StepContext<'_>| {
            if !bet {
                bet = true;
                let all = ctx.remaining();
                ctx.bet(all);
                Step::Continue
            } else {
                Step::Emit(v.clone())
            }
        }))
    }
}

/// Needs exactly `steps` units of volume, then emits.
pub struct Countdown<O> {
    pub steps: u64,
    pub out: O,
}

impl<I, O: Clone + Send + Sync + fmt::Debug + 'static> LProgram<I, O> for Countdown<O> {
    fn name(&self) -> String {
        format!("countdown({})", self.steps)
    }
    fn spawn(&self, _: &I) -> Box<dyn Process<O>> {
        let v = self.out.clone();
        let mut left = self.steps.max(1);
        Box::new(FnProcess(move |_: &mut StepContext<'_>| {
            left -= 1;
            if left == 0 {
                Step::Emit(v.clone())
            } else {
                Step::Continue
            }
        }))
    }
}

/// Emits `len` fair bits, one drawn per step.
pub struct RandomBits {
    pub len: usize,
}

impl<I> LProgram<I, Vec<bool>> for RandomBits {
    fn name(&self) -> String {
        format!("random-bits({})", self.len)
    }
    fn spawn(&self, _: &I) -> Box<dyn Process<Vec<bool>>> {
        let len = self.len;
        let mut acc = Vec::with_capacity(len);
        Box::new(FnProcess(move |ctx: &mut StepContext<'_>| {
            if acc.len() < len {
                acc.push(ctx.dice());
            }
            if acc.len() == len {
                Step::Emit(acc.clone())
            } else {
                Step::Continue
            }
        }))
    }
}

/// A uniform word of `len` symbols from `0..alphabet`, one symbol per step
/// by rejection sampling on `⌈log₂ alphabet⌉` bits.
pub struct UniformWords {
    pub alphabet: usize,
    pub len: usize,
}

impl<I> LProgram<I, Vec<usize>> for UniformWords {
    fn name(&self) -> String {
        format!("uniform-words({}^{})", self.alphabet, self.len)
    }
    fn spawn(&self, _: &I) -> Box<dyn Process<Vec<usize>>> {
        let (alphabet, len) = (self.alphabet.max(1), self.len);
        let bits = usize::BITS - (alphabet - 1).leading_zeros();
        let mut acc = Vec::with_capacity(len);
        Box::new(FnProcess(move |ctx: &mut StepContext<'_>| {
            if acc.len() < len {
                let mut v = 0usize;
                for _ in 0..bits {
                    v = (v << 1) | ctx.dice() as usize;
                }
                if v < alphabet {
                    acc.push(v);
                }
            }
            if acc.len() == len {
                Step::Emit(acc.clone())
            } else {
                Step::Continue
            }
        }))
    }
}

/// Each step stakes half the remaining volume; emits after `rounds` steps.
pub struct HalfBettor {
    pub rounds: u64,
}

impl<I> LProgram<I, u64> for HalfBettor {
    fn name(&self) -> String {
        format!("half-bettor({})", self.rounds)
    }
    fn spawn(&self, _: &I) -> Box<dyn Process<u64>> {
        let rounds = self.rounds;
        let mut done = 0u64;
        Box::new(FnProcess(move |ctx: &mut StepContext<'_>| {
            let stake = ctx.remaining() / 2;
            ctx.bet(stake);
            done += 1;
            if done >= rounds {
                Step::Emit(ctx.remaining())
            } else {
                Step::Continue
            }
        }))
    }
}

type VolumeFn<I> = Arc<dyn Fn(&I) -> u64 + Send + Sync>;

/// Runs an arbitrary program from a small constant volume: the first step
/// stakes the whole budget until it reaches the required volume `t(x)` or
/// is lost, then the inner program takes over.
pub struct Normalized<I, O> {
    inner: Arc<dyn LProgram<I, O>>,
    required: VolumeFn<I>,
}

pub fn normalize_to_l<I, O>(
    inner: Arc<dyn LProgram<I, O>>,
    required: impl Fn(&I) -> u64 + Send + Sync + 'static,
) -> Normalized<I, O> {
    Normalized {
        inner,
        required: Arc::new(required),
    }
}

struct NormalizedProcess<O> {
    inner: Box<dyn Process<O>>,
    target: u64,
    started: bool,
}

impl<O> Process<O> for NormalizedProcess<O> {
    fn step(&mut self, ctx: &mut StepContext<'_>) -> Step<O> {
        if !self.started {
            self.started = true;
            while ctx.remaining() > 0 && ctx.remaining() < self.target {
                let all = ctx.remaining();
                ctx.bet(all);
                if ctx.fault.is_some() {
                    return Step::Continue;
                }
            }
            if ctx.remaining() == 0 {
                return Step::Continue;
            }
        }
        self.inner.step(ctx)
    }
}

impl<I, O: 'static> LProgram<I, O> for Normalized<I, O> {
    fn name(&self) -> String {
        format!("normalized({})", self.inner.name())
    }
    fn spawn(&self, input: &I) -> Box<dyn Process<O>> {
        Box::new(NormalizedProcess {
            inner: self.inner.spawn(input),
            target: (self.required)(input),
            started: false,
        })
    }
}

// ---------------------------------------------------------------------------
// Complete families

/// Generators with weights `w_i ∝ 1/i²` (1-based), normalised exactly.
pub struct GeneratorRegistry<I, O> {
    programs: Vec<Arc<dyn LProgram<I, O>>>,
    weights: Vec<BigRational>,
    cumulative: Vec<BigRational>,
    volume: u64,
}

impl<I, O> GeneratorRegistry<I, O> {
    /// `volume` is the initial budget given to each generator run.
    pub fn new(programs: Vec<Arc<dyn LProgram<I, O>>>, volume: u64) -> Self {
        assert!(!programs.is_empty(), "registry needs a generator");
        let raw: Vec<BigRational> = (1..=programs.len() as i64)
            .map(|i| BigRational::new(BigInt::one(), BigInt::from(i * i)))
            .collect();
        let total: BigRational = raw.iter().cloned().sum();
        let weights: Vec<BigRational> = raw.into_iter().map(|w| w / &total).collect();
        let mut cumulative = vec![BigRational::zero()];
        for w in &weights {
            let next = cumulative.last().expect("non-empty") + w;
            cumulative.push(next);
        }
        GeneratorRegistry {
            programs,
            weights,
            cumulative,
            volume,
        }
    }

    pub fn len(&self) -> usize {
        self.programs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.programs.is_empty()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn volume(&self) -> u64 {
        self.volume
    }

    pub fn program(&self, i: usize) -> &dyn LProgram<I, O> {
        self.programs[i].as_ref()
    }
}

/// Draw an index with the given exact cumulative boundaries by refining a
/// dyadic interval until it fits inside one cell.
pub fn sample_index(cumulative: &[BigRational], dice: &mut dyn Dice) -> Option<usize> {
    let cells = cumulative.len() - 1;
    let mut num = BigInt::zero();
    let mut depth = 0usize;
    loop {
        let lo = BigRational::new(num.clone(), BigInt::one() << depth);
        let hi = BigRational::new(&num + 1, BigInt::one() << depth);
        // First boundary strictly above lo.
        let i = cumulative[1..].partition_point(|c| *c <= lo);
        if i < cells && hi <= cumulative[i + 1] {
            return Some(i);
        }
        num = (num << 1) + dice.bit()? as u8;
        depth += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample<O> {
    pub index: Option<usize>,
    pub report: RunReport<O>,
}

/// Draw a generator by weight and run it on `x`.
pub fn sample_complete<I, O>(reg: &GeneratorRegistry<I, O>, x: &I, dice: &mut dyn Dice) -> Sample<O> {
    match sample_index(&reg.cumulative, dice) {
        Some(i) => Sample {
            index: Some(i),
            report: run_l(reg.program(i), x, reg.volume, dice),
        },
        None => Sample {
            index: None,
            report: RunReport {
                outcome: Outcome::Undecided,
                budget: VolumeBudget::new(reg.volume),
            },
        },
    }
}

/// Distribution of [`sample_complete`] itself, by dice-prefix enumeration.
pub fn exact_complete_by_dice<I, O: Ord + Clone>(
    reg: &GeneratorRegistry<I, O>,
    x: &I,
    max_bits: usize,
) -> ExactDistribution<O> {
    enumerate(max_bits, |dice| {
        let s = sample_complete(reg, x, dice);
        (s.report.outcome, s.report.budget.remaining)
    })
}

/// Per-generator exact distributions and their weighted mixture.
pub struct Mixture<O: Ord> {
    pub components: Vec<ExactDistribution<O>>,
    pub mixture: ExactDistribution<O>,
}

pub fn exact_mixture<I, O: Ord + Clone>(reg: &GeneratorRegistry<I, O>, x: &I, max_bits: usize) -> Mixture<O> {
    let components: Vec<_> = (0..reg.len())
        .map(|i| exact_distribution(reg.program(i), x, reg.volume, max_bits))
        .collect();
    let mut mixture = ExactDistribution {
        outputs: BTreeMap::new(),
        abort: BigRational::zero(),
        undecided: BigRational::zero(),
        expected_final_volume: BigRational::zero(),
    };
    for (w, c) in reg.weights.iter().zip(&components) {
        for (o, p) in &c.outputs {
            *mixture.outputs.entry(o.clone()).or_insert_with(BigRational::zero) += w * p;
        }
        mixture.abort += w * &c.abort;
        mixture.undecided += w * &c.undecided;
        mixture.expected_final_volume += w * &c.expected_final_volume;
    }
    Mixture { components, mixture }
}

// ---------------------------------------------------------------------------
// Estimators

/// Wilson score interval for `hits / trials` at normal quantile `z`.
pub fn wilson(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// `Kl = -log₂ Pr[hit]` with an interval. With no hits only the lower
/// bound is reported.
#[derive(Clone, Debug, PartialEq)]
pub struct KlEstimate {
    pub hits: u64,
    pub trials: u64,
    pub estimate: Option<f64>,
    pub lower: f64,
    pub upper: Option<f64>,
}

impl KlEstimate {
    pub fn from_counts(hits: u64, trials: u64, z: f64) -> Self {
        let (plo, phi) = wilson(hits, trials, z);
        let neg_log = |p: f64| if p <= 0.0 { None } else { Some((-p.log2()).max(0.0)) };
        KlEstimate {
            hits,
            trials,
            estimate: (hits > 0).then(|| -(hits as f64 / trials as f64).log2()).map(|v| v.max(0.0)),
            lower: neg_log(phi).unwrap_or(0.0),
            upper: if hits == 0 { None } else { neg_log(plo) },
        }
    }
}

/// Monte Carlo `Kl(X/x)` over the complete family, 95% Wilson interval.
pub fn kl_estimate<I, O>(
    reg: &GeneratorRegistry<I, O>,
    x: &I,
    member: impl Fn(&O) -> bool,
    trials: u64,
    seed: u64,
) -> KlEstimate {
    let mut dice = DiceStream::new(seed);
    let mut hits = 0;
    for _ in 0..trials.max(1) {
        if let Outcome::Output(o) = sample_complete(reg, x, &mut dice).report.outcome {
            if member(&o) {
                hits += 1;
            }
        }
    }
    KlEstimate::from_counts(hits, trials.max(1), 1.96)
}

/// Exact bounds on `Kl(X/x)`: `(lower, upper)`, upper `None` when the
/// probability lower bound is zero.
pub fn kl_exact<I, O: Ord + Clone>(
    reg: &GeneratorRegistry<I, O>,
    x: &I,
    member: impl Fn(&O) -> bool,
    max_bits: usize,
) -> (f64, Option<f64>) {
    let m = exact_mixture(reg, x, max_bits).mixture;
    let lo = m.prob_where(&member);
    let hi = &lo + &m.undecided;
    let nl = |p: &BigRational| -> Option<f64> {
        let v = p.to_f64()?;
        (v > 0.0).then(|| (-v.log2()).max(0.0))
    };
    (nl(&hi).unwrap_or(f64::INFINITY), nl(&lo))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inversion<W> {
    pub witness: Option<W>,
    pub runs: u64,
}

/// Sample candidate witnesses from the complete family until `verify`
/// accepts one or `cap` runs are spent.
pub fn invert_optimal<I, W: Clone>(
    reg: &GeneratorRegistry<I, W>,
    x: &I,
    verify: impl Fn(&W) -> bool,
    cap: u64,
    dice: &mut dyn Dice,
) -> Inversion<W> {
    for run in 1..=cap {
        if let Outcome::Output(w) = sample_complete(reg, x, dice).report.outcome {
            if verify(&w) {
                return Inversion {
                    witness: Some(w),
                    runs: run,
                };
            }
        }
    }
    Inversion { witness: None, runs: cap }
}

/// `S(f/x)` as runs per success and `s = log₂ S`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecurityEstimate {
    pub runs: u64,
    pub successes: u64,
    pub security: Option<f64>,
    pub log_security: Option<f64>,
    /// With no success, `S` is at least about this.
    pub lower_bound: f64,
}

pub fn estimate_security<I, W>(
    reg: &GeneratorRegistry<I, W>,
    x: &I,
    verify: impl Fn(&W) -> bool,
    runs: u64,
    seed: u64,
) -> SecurityEstimate {
    let runs = runs.max(1);
    let mut dice = DiceStream::new(seed);
    let mut successes = 0;
    for _ in 0..runs {
        if let Outcome::Output(w) = sample_complete(reg, x, &mut dice).report.outcome {
            if verify(&w) {
                successes += 1;
            }
        }
    }
    let (_, phi) = wilson(successes, runs, 1.96);
    let s = (successes > 0).then(|| runs as f64 / successes as f64);
    SecurityEstimate {
        runs,
        successes,
        security: s,
        log_security: s.map(f64::log2),
        lower_bound: 1.0 / phi,
    }
}

// ---------------------------------------------------------------------------
// Multimedian

/// Instances, their solvability and one randomized inversion attempt.
pub trait InstanceFamily {
    type Instance;
    fn draw(&self, rng: &mut dyn RngCore) -> Self::Instance;
    fn solvable(&self, inst: &Self::Instance) -> bool;
    /// Attempt number `attempt` (0-based) on `inst`.
    fn attempt(&self, inst: &Self::Instance, attempt: u64, rng: &mut dyn RngCore) -> bool;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Repetition {
    pub repetition: usize,
    pub trials: u64,
    pub solved: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MtReport {
    pub k: usize,
    pub rows: Vec<Repetition>,
    pub median: u64,
}

impl MtReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("repetition,trials,solved,seed\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{},{}\n", r.repetition, r.trials, r.solved, r.seed));
        }
        s
    }

    /// Trial-count quantile over repetitions, nearest rank.
    pub fn quantile(&self, q: f64) -> u64 {
        let v: Vec<u64> = self.rows.iter().map(|r| r.trials).collect();
        quantile(&v, q)
    }
}

/// Nearest-rank quantile of a sample; `q = 0.5` on an odd sample is the
/// median.
pub fn quantile(values: &[u64], q: f64) -> u64 {
    assert!(!values.is_empty());
    let mut v = values.to_vec();
    v.sort_unstable();
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

/// Per-repetition seeds derived from a master seed.
pub fn repetition_seeds(seed: u64, reps: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..reps).map(|_| rng.gen()).collect()
}

/// `MT(k)`: for each repetition draw `k` instances and attempt each
/// solvable one until solved (at most `cap` attempts each), counting all
/// attempts. Unsolvable instances are skipped.
pub fn multimedian<F: InstanceFamily>(family: &F, k: usize, reps: usize, cap: u64, seed: u64) -> MtReport {
    assert!(k >= 1 && reps >= 1);
    let rows: Vec<Repetition> = repetition_seeds(seed, reps)
        .into_iter()
        .enumerate()
        .map(|(r, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let instances: Vec<F::Instance> = (0..k).map(|_| family.draw(&mut rng)).collect();
            let mut trials = 0;
            let mut solved = 0;
            for inst in instances.iter().filter(|i| family.solvable(i)) {
                for a in 0..cap {
                    trials += 1;
                    if family.attempt(inst, a, &mut rng) {
                        solved += 1;
                        break;
                    }
                }
            }
            Repetition {
                repetition: r,
                trials,
                solved,
                seed: s,
            }
        })
        .collect();
    let v: Vec<u64> = rows.iter().map(|r| r.trials).collect();
    MtReport {
        k,
        median: quantile(&v, 0.5),
        rows,
    }
}

/// Every instance solvable; each attempt succeeds with probability `p`.
#[derive(Clone, Debug)]
pub struct BernoulliFamily {
    pub p: f64,
}

impl InstanceFamily for BernoulliFamily {
    type Instance = ();
    fn draw(&self, _: &mut dyn RngCore) {}
    fn solvable(&self, _: &()) -> bool {
        true
    }
    fn attempt(&self, _: &(), _: u64, rng: &mut dyn RngCore) -> bool {
        rng.gen_bool(self.p)
    }
}

/// A fraction `epsilon` of instances needs exactly `hard_trials` attempts;
/// the rest are solved at the first attempt. A further fraction
/// `unsolvable` has no solution.
#[derive(Clone, Debug)]
pub struct PlantedFamily {
    pub epsilon: f64,
    pub hard_trials: u64,
    pub unsolvable: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Planted {
    Easy,
    Hard,
    Unsolvable,
}

impl InstanceFamily for PlantedFamily {
    type Instance = Planted;
    fn draw(&self, rng: &mut dyn RngCore) -> Planted {
        let u: f64 = rng.gen();
        if u < self.unsolvable {
            Planted::Unsolvable
        } else if u < self.unsolvable + self.epsilon {
            Planted::Hard
        } else {
            Planted::Easy
        }
    }
    fn solvable(&self, inst: &Planted) -> bool {
        *inst != Planted::Unsolvable
    }
    fn attempt(&self, inst: &Planted, attempt: u64, _: &mut dyn RngCore) -> bool {
        match inst {
            Planted::Easy => true,
            Planted::Hard => attempt + 1 >= self.hard_trials,
            Planted::Unsolvable => false,
        }
    }
}
