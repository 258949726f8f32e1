//! Exact measures on `{0..N}`, perfect rounding and the m-encoding.
//!
//! Cumulative values are exclusive: `μ(x) = Σ_{y<x} μ'(y)`, so `μ(0) = 0`
//! and `μ(N+1) = 1`. Rounding moves the interior points `μ(1)..μ(N)` to
//! dyadic values; the endpoints stay fixed.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::bits::Bits;
use crate::dyadic::Dyadic;
use crate::parse::{strip_comment, tokens, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistError {
    #[error("a measure needs at least two points")]
    Degenerate,
    #[error("negative density at point {0}")]
    NegativeDensity(usize),
    #[error("densities sum to {0}, not 1")]
    BadSum(BigRational),
    #[error("point {0} has zero density; rounding needs strictly positive densities")]
    ZeroDensity(usize),
    #[error("point {0} outside the domain")]
    OutOfDomain(usize),
    #[error("rounded density at point {0} is not a power of two")]
    NonPowerOfTwo(usize),
    #[error("no point has this encoding")]
    NoMatch,
    #[error("values are not increasing at point {0}")]
    NotIncreasing(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A probability measure on `{0..N}` with exact rational densities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    densities: Vec<BigRational>,
    cumulative: Vec<BigRational>,
}

fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl Measure {
    pub fn new(densities: Vec<BigRational>) -> Result<Self, DistError> {
        if densities.len() < 2 {
            return Err(DistError::Degenerate);
        }
        let mut cumulative = Vec::with_capacity(densities.len() + 1);
        let mut acc = BigRational::zero();
        cumulative.push(acc.clone());
        for (x, d) in densities.iter().enumerate() {
            if d.is_negative() {
                return Err(DistError::NegativeDensity(x));
            }
            acc += d;
            cumulative.push(acc.clone());
        }
        if !acc.is_one() {
            return Err(DistError::BadSum(acc));
        }
        Ok(Measure { densities, cumulative })
    }

    /// Normalise non-negative integer weights.
    pub fn from_weights(weights: &[BigUint]) -> Result<Self, DistError> {
        let total: BigUint = weights.iter().sum();
        if total.is_zero() {
            return Err(DistError::BadSum(BigRational::zero()));
        }
        let total = BigInt::from(total);
        Measure::new(
            weights
                .iter()
                .map(|w| BigRational::new(BigInt::from(w.clone()), total.clone()))
                .collect(),
        )
    }

    pub fn uniform(size: usize) -> Result<Self, DistError> {
        Measure::new(vec![ratio(1, size as i64); size])
    }

    /// Strictly positive random weights in `1..=max_weight`.
    pub fn random<R: Rng>(rng: &mut R, size: usize, max_weight: u64) -> Result<Self, DistError> {
        let w: Vec<BigUint> = (0..size).map(|_| BigUint::from(rng.gen_range(1..=max_weight))).collect();
        Measure::from_weights(&w)
    }

    /// `N + 1`.
    pub fn size(&self) -> usize {
        self.densities.len()
    }

    /// Largest point `N`.
    pub fn last(&self) -> usize {
        self.densities.len() - 1
    }

    pub fn density(&self, x: usize) -> &BigRational {
        &self.densities[x]
    }

    pub fn densities(&self) -> &[BigRational] {
        &self.densities
    }

    /// `μ(x)` for `x` in `0..=N+1`.
    pub fn cumulative(&self, x: usize) -> &BigRational {
        &self.cumulative[x]
    }

    /// ```text
    /// measure 3
    /// 0 1/3
    /// 1 1/6
    /// 2 1/2
    /// ```
    /// Points not listed have density 0.
    pub fn parse(text: &str) -> Result<Self, DistError> {
        let mut dens: Option<Vec<Option<BigRational>>> = None;
        let mut last_line = 0;
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            last_line = ln;
            let toks = strip_comment(&tokens(raw), 2);
            if toks.is_empty() {
                continue;
            }
            let Some(d) = dens.as_mut() else {
                let (col, kw) = toks[0];
                if kw != "measure" || toks.len() != 2 {
                    return Err(ParseError::new(ln, col, "expected header `measure <size>`").into());
                }
                let n: usize = toks[1]
                    .1
                    .parse()
                    .map_err(|_| ParseError::new(ln, toks[1].0, "invalid domain size"))?;
                if n < 2 {
                    return Err(ParseError::new(ln, toks[1].0, "domain size must be at least 2").into());
                }
                dens = Some(vec![None; n]);
                continue;
            };
            if toks.len() != 2 {
                let col = toks.get(2).map_or(toks[0].0, |t| t.0);
                return Err(ParseError::new(ln, col, "expected `<point> <p>/<q>`").into());
            }
            let (xc, xs) = toks[0];
            let x: usize = xs
                .parse()
                .map_err(|_| ParseError::new(ln, xc, format!("invalid point `{xs}`")))?;
            if x >= d.len() {
                return Err(ParseError::new(ln, xc, format!("point {x} outside domain of size {}", d.len())).into());
            }
            if d[x].is_some() {
                return Err(ParseError::new(ln, xc, format!("point {x} listed twice")).into());
            }
            let (pc, ps) = toks[1];
            let p = parse_rational(ps).ok_or_else(|| ParseError::new(ln, pc, format!("invalid probability `{ps}`")))?;
            if p.is_negative() {
                return Err(ParseError::new(ln, pc, "negative probability").into());
            }
            d[x] = Some(p);
        }
        let d = dens.ok_or_else(|| ParseError::new(last_line.max(1), 1, "missing header `measure <size>`"))?;
        Measure::new(d.into_iter().map(|p| p.unwrap_or_else(BigRational::zero)).collect())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("measure {}\n", self.size());
        for (x, p) in self.densities.iter().enumerate() {
            s.push_str(&format!("{x} {p}\n"));
        }
        s
    }
}

/// `p/q` or an integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Dyadic cumulative values at the interior points `1..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundedDistribution {
    values: Vec<Dyadic>,
}

impl RoundedDistribution {
    /// Interior values `μ₁(1)..μ₁(N)`. No invariant is checked here; use
    /// [`check_perfectly_rounded`].
    pub fn from_values(values: Vec<Dyadic>) -> Self {
        RoundedDistribution { values }
    }

    pub fn values(&self) -> &[Dyadic] {
        &self.values
    }

    /// `N + 1`.
    pub fn size(&self) -> usize {
        self.values.len() + 1
    }

    /// `μ₁(x)` for `x` in `0..=N+1`, sentinels included.
    pub fn cumulative(&self, x: usize) -> Dyadic {
        if x == 0 {
            Dyadic::zero()
        } else if x > self.values.len() {
            Dyadic::one()
        } else {
            self.values[x - 1].clone()
        }
    }

    /// `μ₁'(x) = μ₁(x+1) - μ₁(x)`; `None` when the values decrease.
    pub fn density(&self, x: usize) -> Option<Dyadic> {
        self.cumulative(x + 1).checked_sub(&self.cumulative(x))
    }

    /// `ℓ(x) = -log₂ μ₁'(x)`.
    pub fn ell(&self, x: usize) -> Result<u32, DistError> {
        if x >= self.size() {
            return Err(DistError::OutOfDomain(x));
        }
        self.density(x)
            .and_then(|d| d.neg_log2())
            .ok_or(DistError::NonPowerOfTwo(x))
    }

    /// The rounded distribution viewed as a measure.
    pub fn to_measure(&self) -> Result<Measure, DistError> {
        let d = (0..self.size())
            .map(|x| {
                self.density(x)
                    .map(|d| d.to_rational())
                    .ok_or(DistError::NotIncreasing(x))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Measure::new(d)
    }
}

impl fmt::Display for RoundedDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Largest aligned dyadic interval `[j/2^k, (j+1)/2^k)` inside `[lo, hi)`,
/// leftmost on ties.
fn largest_aligned(lo: &BigRational, hi: &BigRational) -> (BigUint, u32) {
    let to_u = |v: &BigInt| v.to_biguint().expect("non-negative");
    let (ln, ld) = (to_u(lo.numer()), to_u(lo.denom()));
    let (hn, hd) = (to_u(hi.numer()), to_u(hi.denom()));
    let width = hi - lo;
    let (wn, wd) = (to_u(width.numer()), to_u(width.denom()));
    let mut k = (wd.bits() as i64 - wn.bits() as i64 - 1).max(0) as u32;
    loop {
        let scaled = &ln << k;
        let s = scaled.div_ceil(&ld);
        if (&s + 1u32) * &hd <= &hn << k {
            return (s, k);
        }
        k += 1;
    }
}

struct Item {
    index: usize,
    j: BigUint,
    k: u32,
}

fn split(items: &[Item], a: BigUint, d: u32, leaves: &mut [(BigUint, u32)]) {
    if items.len() == 1 {
        leaves[items[0].index] = (a, d);
        return;
    }
    let in_right = |it: &Item| it.j.bit((it.k - d - 1) as u64);
    let cut = items.partition_point(|it| !in_right(it));
    let left = &a << 1u32;
    let right = &left + 1u32;
    let n = items.len();
    if cut == 0 {
        leaves[items[0].index] = (left, d + 1);
        split(&items[1..], right, d + 1, leaves);
    } else if cut == n {
        leaves[items[n - 1].index] = (right, d + 1);
        split(&items[..n - 1], left, d + 1, leaves);
    } else {
        split(&items[..cut], left, d + 1, leaves);
        split(&items[cut..], right, d + 1, leaves);
    }
}

/// Round a measure to a perfectly rounded one with `μ₁'(x) ≥ μ'(x)/4`.
///
/// Each point keeps the largest aligned dyadic interval inside its own
/// probability interval, which is longer than a quarter of it. The unit
/// interval is then split by halving until every node holds one point; a
/// half containing no kept interval is handed to the adjacent point. The
/// leaves form an ordered binary-tree partition, whose boundaries are
/// exactly the perfectly rounded cumulative values.
pub fn perfect_round(m: &Measure) -> Result<RoundedDistribution, DistError> {
    if let Some(x) = m.densities.iter().position(|d| d.is_zero()) {
        return Err(DistError::ZeroDensity(x));
    }
    let items: Vec<Item> = (0..m.size())
        .map(|x| {
            let (j, k) = largest_aligned(m.cumulative(x), m.cumulative(x + 1));
            Item { index: x, j, k }
        })
        .collect();
    let mut leaves = vec![(BigUint::zero(), 0u32); m.size()];
    split(&items, BigUint::zero(), 0, &mut leaves);
    let values = leaves[1..]
        .iter()
        .map(|(a, d)| Dyadic::new(a.clone(), *d))
        .collect();
    Ok(RoundedDistribution { values })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DomainMismatch { rounded: usize, measure: usize },
    NotIncreasing { x: usize },
    NotShortest { x: usize, shortest: Dyadic },
    NotPowerOfTwo { x: usize },
    BelowBound { x: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DomainMismatch { rounded, measure } => {
                write!(f, "domain sizes differ: rounded {rounded}, measure {measure}")
            }
            Violation::NotIncreasing { x } => write!(f, "point {x}: values not strictly increasing"),
            Violation::NotShortest { x, shortest } => {
                write!(f, "point {x}: {shortest} is a shorter fraction between the neighbours")
            }
            Violation::NotPowerOfTwo { x } => write!(f, "point {x}: density is not a power of two"),
            Violation::BelowBound { x } => write!(f, "point {x}: density below a quarter of the original"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verify every perfect-rounding invariant against the source measure.
pub fn check_perfectly_rounded(r: &RoundedDistribution, m: &Measure) -> CheckReport {
    let mut report = CheckReport::default();
    if r.size() != m.size() {
        report.violations.push(Violation::DomainMismatch {
            rounded: r.size(),
            measure: m.size(),
        });
        return report;
    }
    let n = m.last();
    for x in 0..=n {
        match r.density(x) {
            Some(d) if !d.is_zero() => {
                if d.neg_log2().is_none() {
                    report.violations.push(Violation::NotPowerOfTwo { x });
                }
                if d.to_rational() * ratio(4, 1) < *m.density(x) {
                    report.violations.push(Violation::BelowBound { x });
                }
            }
            _ => report.violations.push(Violation::NotIncreasing { x }),
        }
    }
    for x in 1..=n {
        let lo = r.cumulative(x - 1).to_rational();
        let hi = r.cumulative(x + 1).to_rational();
        if let Some(s) = Dyadic::shortest_between(&lo, &hi) {
            if s != r.cumulative(x) {
                report.violations.push(Violation::NotShortest { x, shortest: s });
            }
        }
    }
    report
}

/// `m(x)`: the `ℓ(x)` low bits of `μ₁(x+1)·2^{ℓ(x)}`. The last point has
/// `μ₁(N+1) = 1`, which reads as the all-zero string (`0.m` taken mod 1).
pub fn m_encode(r: &RoundedDistribution, x: usize) -> Result<Bits, DistError> {
    let l = r.ell(x)?;
    let right = r.cumulative(x + 1);
    if right.precision() > l {
        return Err(DistError::NonPowerOfTwo(x));
    }
    let v = right.scaled(l);
    Ok((0..l as u64).rev().map(|i| v.bit(i)).collect())
}

fn bits_value(bits: &Bits) -> Dyadic {
    let mut v = BigUint::zero();
    for &b in bits.as_slice() {
        v <<= 1u32;
        if b {
            v += 1u32;
        }
    }
    Dyadic::new(v, bits.len() as u32)
}

/// Inverse of [`m_encode`] by binary search over the right endpoints.
pub fn m_decode(r: &RoundedDistribution, bits: &Bits) -> Result<usize, DistError> {
    m_decode_counted(r, bits).map(|(x, _)| x)
}

/// [`m_decode`] together with the number of value comparisons made.
pub fn m_decode_counted(r: &RoundedDistribution, bits: &Bits) -> Result<(usize, usize), DistError> {
    let target = bits_value(bits);
    let n = r.size() - 1;
    let mut comparisons = 0;
    let x = if target.is_zero() {
        n
    } else {
        // Right endpoints μ₁(x+1), x in 0..N, are strictly increasing.
        let (mut lo, mut hi) = (0usize, n);
        let mut found = None;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            comparisons += 1;
            match r.cumulative(mid + 1).cmp(&target) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => {
                    found = Some(mid);
                    break;
                }
            }
        }
        found.ok_or(DistError::NoMatch)?
    };
    if r.ell(x).ok() != Some(bits.len() as u32) {
        return Err(DistError::NoMatch);
    }
    Ok((x, comparisons))
}

/// Reference decoder: encode every point and compare.
pub fn m_decode_linear(r: &RoundedDistribution, bits: &Bits) -> Result<usize, DistError> {
    (0..r.size())
        .find(|&x| m_encode(r, x).ok().as_ref() == Some(bits))
        .ok_or(DistError::NoMatch)
}

/// `2·m(x)·μ₁'(x)` with `m(x)` read as an integer.
pub fn uniformity_ratio(r: &RoundedDistribution, x: usize) -> Result<BigRational, DistError> {
    let bits = m_encode(r, x)?;
    let k = bits_value(&bits).scaled(bits.len() as u32);
    let l = bits.len() as u32;
    Ok(BigRational::new(
        BigInt::from(k) * 2,
        BigInt::from(BigUint::one() << l),
    ))
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Uniform over all `2^{n²}` directed graphs with loops, graphs ordered by
/// their adjacency matrix read as an integer.
pub fn graph_uniform(n: u32) -> Measure {
    assert!(n * n <= 20, "graph measure too large to materialise");
    Measure::uniform(1usize << (n * n)).expect("non-degenerate")
}

/// Uniform over the edge count `0..=n²`, then uniform over edge sets of
/// that size.
pub fn graph_edge_uniform(n: u32) -> Measure {
    assert!(n * n <= 20, "graph measure too large to materialise");
    let e = (n * n) as u64;
    let classes: Vec<BigInt> = (0..=e).map(|k| BigInt::from(binomial(e, k)) * (e + 1)).collect();
    let d = (0..1u64 << e)
        .map(|g| BigRational::new(BigInt::one(), classes[g.count_ones() as usize].clone()))
        .collect();
    Measure::new(d).expect("valid measure")
}

/// Probability of the class `{G : ||E|| = k}` under the uniform-graph and
/// uniform-edge-count measures on `n` vertices.
pub fn edge_class_probabilities(n: u32, k: u64) -> (BigRational, BigRational) {
    let e = (n * n) as u64;
    assert!(k <= e);
    let mu1 = BigRational::new(BigInt::from(binomial(e, k)), BigInt::from(BigUint::one() << e));
    let mu2 = ratio(1, (e + 1) as i64);
    (mu1, mu2)
}

/// Edge-count marginals of the two graph measures: `(uniform-graph,
/// uniform-edge-count)`. Defined for any `n`, including sizes too large to
/// list graph by graph.
pub fn edge_count_marginals(n: u32) -> (Measure, Measure) {
    let e = (n * n) as u64;
    let (a, b) = (0..=e).map(|k| edge_class_probabilities(n, k)).unzip();
    (Measure::new(a).expect("valid"), Measure::new(b).expect("valid"))
}

/// Weights `1/((x+2)·⌈log₂(x+2)⌉)²` on `{0..size-1}`, normalised.
pub fn footnote_family(size: usize) -> Measure {
    let w: Vec<BigRational> = (0..size as u64)
        .map(|x| {
            let v = x + 2;
            let lg = 64 - (v - 1).leading_zeros() as u64;
            let t = v * lg;
            ratio(1, BigInt::from(t) * t)
        })
        .collect();
    let total: BigRational = w.iter().sum();
    Measure::new(w.into_iter().map(|p| p / &total).collect()).expect("valid")
}

/// Weights `(2/3)^x` on `{0..size-1}`, normalised.
pub fn geometric(size: usize) -> Measure {
    let n = size as u32;
    let w: Vec<BigUint> = (0..n)
        .map(|x| BigUint::from(2u32).pow(x) * BigUint::from(3u32).pow(n - 1 - x))
        .collect();
    Measure::from_weights(&w).expect("valid")
}

/// The named example collection used as rounding inputs.
pub fn example_measures() -> Vec<(String, Measure)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push((format!("graph-uniform-n{n}"), graph_uniform(n)));
        out.push((format!("graph-edges-n{n}"), graph_edge_uniform(n)));
    }
    for n in 1..=5 {
        let (a, b) = edge_count_marginals(n);
        out.push((format!("edge-count-uniform-n{n}"), a));
        out.push((format!("edge-count-edges-n{n}"), b));
    }
    for size in [2usize, 8, 32] {
        out.push((format!("footnote-{size}"), footnote_family(size)));
        out.push((format!("geometric-{size}"), geometric(size)));
    }
    out
}

/// Exact `μ(x)` of a measure as a float, for display only.
pub fn approx(r: &BigRational) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    let shift = (d.bits().max(n.bits()) as i64 - 60).max(0) as usize;
    let n = (n >> shift).to_f64().unwrap_or(0.0);
    let d = (d >> shift).to_f64().unwrap_or(1.0);
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    fn dy(n: u64, p: u32) -> Dyadic {
        Dyadic::from_u64(n, p)
    }

    #[test]
    fn uniform_is_a_fixed_point() {
        let m = Measure::uniform(4).unwrap();
        let r = perfect_round(&m).unwrap();
        assert_eq!(r.values(), &[dy(1, 2), dy(1, 1), dy(3, 2)]);
        assert!(check_perfectly_rounded(&r, &m).passed());
    }

    #[test]
    fn thirds_example() {
        let m = Measure::new(vec![q(1, 3), q(1, 6), q(1, 2)]).unwrap();
        let r = perfect_round(&m).unwrap();
        assert_eq!(r.values(), &[dy(1, 2), dy(1, 1)]);
        assert!(check_perfectly_rounded(&r, &m).passed());
    }

    /// Every dyadic assignment of precision at most 6 that the checker
    /// accepts satisfies the invariants by direct arithmetic, and the
    /// rounding output is among them.
    #[test]
    fn checker_against_enumeration() {
        let m = Measure::new(vec![q(1, 3), q(1, 6), q(1, 2)]).unwrap();
        let out = perfect_round(&m).unwrap();
        let mut accepted = 0;
        let mut saw_output = false;
        for a in 1..64u64 {
            for b in a + 1..64u64 {
                let r = RoundedDistribution::from_values(vec![dy(a, 6), dy(b, 6)]);
                if check_perfectly_rounded(&r, &m).passed() {
                    accepted += 1;
                    saw_output |= r == out;
                    for x in 0..3 {
                        let d = r.density(x).unwrap();
                        assert!(d.neg_log2().is_some());
                        assert!(d.to_rational() * q(4, 1) >= *m.density(x));
                    }
                }
            }
        }
        assert!(accepted >= 1);
        assert!(saw_output);
    }

    #[test]
    fn checker_rejects_long_fraction() {
        let m = Measure::new(vec![q(1, 8), q(3, 8), q(1, 2)]).unwrap();
        let r = RoundedDistribution::from_values(vec![dy(1, 3), dy(1, 1)]);
        let rep = check_perfectly_rounded(&r, &m);
        assert!(rep
            .violations
            .contains(&Violation::NotShortest { x: 1, shortest: dy(1, 2) }));
        assert!(!rep.violations.iter().any(|v| matches!(v, Violation::NotShortest { x: 2, .. })));
    }

    #[test]
    fn random_measures_round_correctly_and_idempotently() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let size = rng.gen_range(2..=33);
            let m = Measure::random(&mut rng, size, 1000).unwrap();
            let r = perfect_round(&m).unwrap();
            let rep = check_perfectly_rounded(&r, &m);
            assert!(rep.passed(), "{:?}", rep.violations);
            let again = perfect_round(&r.to_measure().unwrap()).unwrap();
            assert_eq!(again, r);
        }
    }

    #[test]
    fn zero_density_is_rejected() {
        let m = Measure::new(vec![q(1, 2), q(0, 1), q(1, 2)]).unwrap();
        assert_eq!(perfect_round(&m), Err(DistError::ZeroDensity(1)));
        assert_eq!(Measure::new(vec![q(1, 1)]), Err(DistError::Degenerate));
        assert!(matches!(Measure::new(vec![q(1, 2), q(1, 3)]), Err(DistError::BadSum(_))));
    }

    #[test]
    fn m_encoding_examples() {
        let r = perfect_round(&Measure::uniform(4).unwrap()).unwrap();
        assert_eq!(m_encode(&r, 1).unwrap().to_string(), "10");
        assert_eq!(m_encode(&r, 3).unwrap().to_string(), "00");
        let r2 = perfect_round(&Measure::uniform(2).unwrap()).unwrap();
        assert_eq!(m_encode(&r2, 0).unwrap().to_string(), "1");
        for x in 0..4 {
            let b = m_encode(&r, x).unwrap();
            assert_eq!(m_decode(&r, &b), Ok(x));
            assert_eq!(m_decode_linear(&r, &b), Ok(x));
        }
        assert_eq!(m_decode(&r, &Bits::parse("1").unwrap()), Err(DistError::NoMatch));
        assert_eq!(m_encode(&r, 4), Err(DistError::OutOfDomain(4)));
    }

    #[test]
    fn decode_round_trip_and_search_cost() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let size = rng.gen_range(2..=40);
            let m = Measure::random(&mut rng, size, 500).unwrap();
            let r = perfect_round(&m).unwrap();
            let bound = usize::BITS - size.leading_zeros();
            for x in 0..size {
                let b = m_encode(&r, x).unwrap();
                let (y, cmp) = m_decode_counted(&r, &b).unwrap();
                assert_eq!(y, x);
                assert!(cmp as u32 <= bound + 1);
                assert_eq!(m_decode_linear(&r, &b), Ok(x));
                if b.as_slice()[0] {
                    let u = uniformity_ratio(&r, x).unwrap();
                    assert!(u >= q(1, 1) && u <= q(2, 1));
                }
            }
        }
    }

    #[test]
    fn graph_measures() {
        let m1 = graph_uniform(2);
        assert_eq!(m1.size(), 16);
        assert!(m1.densities().iter().all(|d| *d == q(1, 16)));
        let m2 = graph_edge_uniform(2);
        let mut by_edges = vec![BigRational::zero(); 5];
        for g in 0..16usize {
            by_edges[g.count_ones() as usize] += m2.density(g);
        }
        assert!(by_edges.iter().all(|p| *p == q(1, 5)));
        let (a, b) = edge_class_probabilities(4, 8);
        assert_eq!(a, q(12870, 65536));
        assert_eq!(b, q(1, 17));
        for (name, m) in example_measures() {
            if m.size() > 4096 {
                continue;
            }
            let r = perfect_round(&m).unwrap();
            assert!(check_perfectly_rounded(&r, &m).passed(), "{name}");
        }
    }

    #[test]
    fn sparse_class_ratio_grows() {
        // Class ||E|| = ⌊n^1.5⌋: the edge-count measure overtakes the uniform
        // one and the ratio keeps growing.
        let mut prev = BigRational::zero();
        for n in 6..=16u32 {
            let k = (n as f64).powf(1.5).floor() as u64;
            let (a, b) = edge_class_probabilities(n, k);
            let r = b / a;
            assert!(r > prev);
            prev = r;
        }
        assert!(prev > q(1_000_000_000, 1));
    }

    #[test]
    fn text_round_trip_and_errors() {
        let m = Measure::parse("measure 3\n# comment\n0 1/3\n1 1/6\n2 1/2\n").unwrap();
        assert_eq!(m.density(1), &q(1, 6));
        assert_eq!(Measure::parse(&m.to_text()).unwrap(), m);
        let e = Measure::parse("measure 3\n0 1/3\n5 1/6\n").unwrap_err();
        assert!(matches!(e, DistError::Parse(ParseError { line: 3, column: 1, .. })));
        let e = Measure::parse("measure 2\n0 x\n").unwrap_err();
        assert!(matches!(e, DistError::Parse(ParseError { line: 2, column: 3, .. })));
        assert!(matches!(Measure::parse("measure 2\n0 1/3\n1 1/3\n"), Err(DistError::BadSum(_))));
    }
}
