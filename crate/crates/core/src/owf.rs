//! Length-preserving transforms built on GF(2^n) hashing, and exhaustive
//! sibling statistics.
//!
//! A *sibling* of `x` under `f` is another `x'` with `f(x') = f(x)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::bits::Bits;
use crate::gf2::{self, FieldElement, FieldError};

/// Largest domain, in bits, that [`sibling_stats`] will enumerate.
pub const MAX_EXHAUSTIVE_BITS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OwfError {
    #[error("k = {k} outside 0..={n}")]
    KOutOfRange { k: u32, n: u32 },
    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: u32, got: u32 },
    #[error("domain of {0} bits too large for exhaustive enumeration")]
    TooWide(u32),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("function `{name}` needs {why}")]
    BadWidthFor { name: String, why: &'static str },
    #[error(transparent)]
    Field(#[from] FieldError),
}

type Evaluator = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// A total map on `width`-bit strings, stored as integers (first bit most
/// significant).
#[derive(Clone)]
pub struct CandidateFunction {
    name: String,
    width: u32,
    eval: Evaluator,
}

impl fmt::Debug for CandidateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CandidateFunction({}, {} bits)", self.name, self.width)
    }
}

fn mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl CandidateFunction {
    /// The evaluator's result is masked to `width` bits.
    pub fn new(name: impl Into<String>, width: u32, eval: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        assert!((1..=64).contains(&width));
        CandidateFunction {
            name: name.into(),
            width,
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn eval(&self, x: u64) -> u64 {
        (self.eval)(x & mask(self.width)) & mask(self.width)
    }

    pub fn eval_bits(&self, x: &Bits) -> Result<Bits, OwfError> {
        self.check(x.len() as u32)?;
        Ok(Bits::from_u64(self.eval(x.to_u64()), self.width))
    }

    fn check(&self, width: u32) -> Result<(), OwfError> {
        if width != self.width {
            return Err(OwfError::WidthMismatch {
                expected: self.width,
                got: width,
            });
        }
        Ok(())
    }

    pub fn identity(n: u32) -> Self {
        Self::new("identity", n, |x| x)
    }

    pub fn zero(n: u32) -> Self {
        Self::new("zero", n, |_| 0)
    }

    pub fn not(n: u32) -> Self {
        Self::new("not", n, |x| !x)
    }

    /// `x ↦ x²` in GF(2^n), a bijection.
    pub fn square(n: u32) -> Self {
        Self::new("square", n, move |x| {
            let e = FieldElement::new(n, x).expect("masked");
            e.mul(&e).expect("same width").value()
        })
    }

    /// `x ↦ x³` in GF(2^n); a bijection exactly when `n` is odd.
    pub fn cube(n: u32) -> Self {
        Self::new("cube", n, move |x| FieldElement::new(n, x).expect("masked").pow(3).value())
    }

    /// `g(a, x) = (a, f(x) + a·x)` on `2n` bits, `a` in the high half.
    pub fn pair(f: &CandidateFunction) -> Self {
        let n = f.width;
        let inner = f.clone();
        Self::new(format!("pair:{}", f.name), 2 * n, move |ax| {
            let a = ax >> n;
            let x = ax & mask(n);
            let (_, y) = pair_hash_raw(&inner, a, x);
            (a << n) | y
        })
    }

    /// Look up a named function on `n`-bit inputs. `pair:<name>` builds the
    /// pair transform of `<name>` on `2n` bits.
    pub fn named(name: &str, n: u32) -> Result<Self, OwfError> {
        if let Some(inner) = name.strip_prefix("pair:") {
            if 2 * n > 64 {
                return Err(OwfError::BadWidthFor {
                    name: name.into(),
                    why: "2n <= 64",
                });
            }
            return Ok(Self::pair(&Self::named(inner, n)?));
        }
        if !(1..=64).contains(&n) {
            return Err(OwfError::BadWidthFor {
                name: name.into(),
                why: "a width in 1..=64",
            });
        }
        Ok(match name {
            "identity" => Self::identity(n),
            "zero" => Self::zero(n),
            "not" => Self::not(n),
            "square" => Self::square(n),
            "cube" => Self::cube(n),
            _ => return Err(OwfError::UnknownFunction(name.into())),
        })
    }

    pub const NAMES: [&'static str; 5] = ["identity", "zero", "not", "square", "cube"];
}

/// `(f(w), k, a, h'_a(w))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeparatedOutput {
    pub image: Bits,
    pub k: u32,
    pub a: FieldElement,
    pub tag: Bits,
}

/// Bits used to write `k` in `0..=n`.
pub fn k_field_bits(n: u32) -> u32 {
    32 - n.leading_zeros()
}

impl SeparatedOutput {
    /// `image ∥ k ∥ a ∥ tag`, with `k` in a fixed field of
    /// `⌈log₂(n+1)⌉` bits.
    pub fn to_bits(&self) -> Bits {
        let n = self.a.width();
        let mut b = self.image.clone();
        b.extend_from(&Bits::from_u64(self.k as u64, k_field_bits(n)));
        b.extend_from(&self.a.to_bits());
        b.extend_from(&self.tag);
        b
    }

    pub fn bit_len(&self) -> u32 {
        let n = self.a.width();
        2 * n + k_field_bits(n) + self.k
    }
}

/// Append the `k` leading bits of `a·w` to `f(w)`.
pub fn sibling_separate(
    f: &CandidateFunction,
    w: &Bits,
    k: u32,
    a: &FieldElement,
) -> Result<SeparatedOutput, OwfError> {
    let n = f.width();
    f.check(w.len() as u32)?;
    f.check(a.width())?;
    if k > n {
        return Err(OwfError::KOutOfRange { k, n });
    }
    let wf = FieldElement::from_bits(w)?;
    let tag = gf2::truncate(&gf2::hash(a, &wf)?, k)?;
    Ok(SeparatedOutput {
        image: f.eval_bits(w)?,
        k,
        a: *a,
        tag,
    })
}

/// Multiply the serialisation by `c` in GF(2^L), `L` its length, and keep
/// the leading `n` bits.
pub fn compress_to_length(out: &SeparatedOutput, c: &FieldElement) -> Result<Bits, OwfError> {
    let len = out.bit_len();
    if c.width() != len {
        return Err(OwfError::WidthMismatch {
            expected: len,
            got: c.width(),
        });
    }
    let s = FieldElement::from_bits(&out.to_bits())?;
    Ok(gf2::truncate(&s.mul(c)?, out.a.width())?)
}

/// A fixed nonzero public multiplier for each width.
pub fn public_constant(width: u32) -> Result<FieldElement, OwfError> {
    let v = 0x9E37_79B9_7F4A_7C15u64 & mask(width);
    Ok(FieldElement::new(width, if v == 0 { 1 } else { v })?)
}

fn pair_hash_raw(f: &CandidateFunction, a: u64, x: u64) -> (u64, u64) {
    let n = f.width();
    let ax = FieldElement::new(n, a)
        .and_then(|a| a.mul(&FieldElement::new(n, x)?))
        .expect("masked operands")
        .value();
    (a, f.eval(x) ^ ax)
}

/// `g(a, x) = (a, f(x) + a·x)`.
pub fn pair_hash(
    f: &CandidateFunction,
    a: &FieldElement,
    x: &Bits,
) -> Result<(FieldElement, Bits), OwfError> {
    f.check(a.width())?;
    f.check(x.len() as u32)?;
    let (_, y) = pair_hash_raw(f, a.value(), x.to_u64());
    Ok((*a, Bits::from_u64(y, f.width())))
}

/// Exact preimage statistics of a function on its whole domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiblingStats {
    pub domain_bits: u32,
    /// multiplicity -> number of images with that many preimages.
    pub histogram: BTreeMap<u64, u64>,
    /// Mean number of other preimages per input, `Σ m(m-1) / 2^bits`.
    pub mean_siblings: BigRational,
}

impl SiblingStats {
    pub fn image_count(&self) -> u64 {
        self.histogram.values().sum()
    }

    /// `multiplicity,count` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("multiplicity,count\n");
        for (m, c) in &self.histogram {
            s.push_str(&format!("{m},{c}\n"));
        }
        s
    }
}

/// Preimage count of every image, by exhaustive evaluation.
pub fn preimage_counts(f: &CandidateFunction) -> Result<Vec<u32>, OwfError> {
    let n = f.width();
    if n > MAX_EXHAUSTIVE_BITS {
        return Err(OwfError::TooWide(n));
    }
    let mut counts = vec![0u32; 1 << n];
    for x in 0..1u64 << n {
        counts[f.eval(x) as usize] += 1;
    }
    Ok(counts)
}

pub fn sibling_stats(f: &CandidateFunction) -> Result<SiblingStats, OwfError> {
    let counts = preimage_counts(f)?;
    let mut histogram = BTreeMap::new();
    let mut pairs = 0u64;
    for &m in counts.iter().filter(|&&m| m > 0) {
        *histogram.entry(m as u64).or_insert(0) += 1;
        pairs += m as u64 * (m as u64 - 1);
    }
    Ok(SiblingStats {
        domain_bits: f.width(),
        histogram,
        mean_siblings: BigRational::new(BigInt::from(pairs), BigInt::from(1u64 << f.width())),
    })
}

/// Over all `a`, the mean number of siblings of `w` whose `k`-bit tag
/// equals that of `w`.
pub fn tag_collisions(f: &CandidateFunction, w: u64, k: u32) -> Result<BigRational, OwfError> {
    let n = f.width();
    if n > MAX_EXHAUSTIVE_BITS {
        return Err(OwfError::TooWide(n));
    }
    if k > n {
        return Err(OwfError::KOutOfRange { k, n });
    }
    let y = f.eval(w);
    let siblings: Vec<u64> = (0..1u64 << n).filter(|&x| x != w && f.eval(x) == y).collect();
    let tag = |a: u64, x: u64| -> Result<Bits, OwfError> {
        let h = gf2::hash(&FieldElement::new(n, a)?, &FieldElement::new(n, x)?)?;
        Ok(gf2::truncate(&h, k)?)
    };
    let mut hits = 0u64;
    for a in 0..1u64 << n {
        let t = tag(a, w)?;
        for &s in &siblings {
            if tag(a, s)? == t {
                hits += 1;
            }
        }
    }
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(1u64 << n)))
}

/// Number of `a` in GF(2^n) with equal `k`-bit truncated hashes of `w` and
/// `w2`.
pub fn truncated_collision_count(n: u32, w: u64, w2: u64, k: u32) -> Result<u64, OwfError> {
    let (w, w2) = (FieldElement::new(n, w)?, FieldElement::new(n, w2)?);
    let mut c = 0;
    for a in 0..1u64 << n {
        let a = FieldElement::new(n, a)?;
        if gf2::truncate(&gf2::hash(&a, &w)?, k)? == gf2::truncate(&gf2::hash(&a, &w2)?, k)? {
            c += 1;
        }
    }
    Ok(c)
}

/// Mean over uniform inputs of `log₂(2^bits / |f⁻¹(f(x))|)`, the expected
/// log-cost of inverting by uniform guessing.
pub fn mean_log_security(f: &CandidateFunction) -> Result<f64, OwfError> {
    let counts = preimage_counts(f)?;
    let n = f.width() as f64;
    let total: f64 = counts
        .iter()
        .filter(|&&m| m > 0)
        .map(|&m| m as f64 * (n - (m as f64).log2()))
        .sum();
    Ok(total / 2f64.powf(n))
}

/// Security comparison of `f` on `n` bits against its pair transform.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub name: String,
    pub n: u32,
    pub f_security: f64,
    pub g_security: f64,
    pub f_mean_siblings: BigRational,
    pub g_mean_siblings: BigRational,
}

pub fn compare(f: &CandidateFunction) -> Result<Comparison, OwfError> {
    let g = CandidateFunction::pair(f);
    Ok(Comparison {
        name: f.name().to_string(),
        n: f.width(),
        f_security: mean_log_security(f)?,
        g_security: mean_log_security(&g)?,
        f_mean_siblings: sibling_stats(f)?.mean_siblings,
        g_mean_siblings: sibling_stats(&g)?.mean_siblings,
    })
}
