//! Arithmetic in GF(2^n) for 1 <= n <= 64.
//!
//! Bit `i` of a value (LSB = bit 0) is the coefficient of `x^i`. Each width
//! uses the numerically smallest irreducible polynomial of that degree, found
//! on first use and cached.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::bits::Bits;

pub const MAX_WIDTH: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("width {0} outside 1..=64")]
    BadWidth(u32),
    #[error("value {value:#x} does not fit in {width} bits")]
    ValueTooWide { value: u64, width: u32 },
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(u32, u32),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("truncation to {k} bits out of range for width {width}")]
    TruncateRange { k: u32, width: u32 },
    #[error("{0} is not irreducible")]
    Reducible(String),
}

/// Carry-less product of two 64-bit polynomials.
pub fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let wide = a as u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= wide << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn degree(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

/// Remainder of polynomial division over GF(2).
pub fn poly_rem(mut a: u128, m: u128) -> u128 {
    let dm = degree(m);
    assert!(dm >= 0, "division by zero polynomial");
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    // operands are reduced (degree < deg m <= 64)
    poly_rem(clmul(a as u64, b as u64), m)
}

/// Irreducibility by trial division by every polynomial of degree
/// `1..=deg/2`. Exponential; meant for small degrees.
pub fn irreducible_by_trial_division(p: u128) -> bool {
    let d = degree(p);
    if d < 1 {
        return false;
    }
    let half = d / 2;
    for dd in 1..=half {
        for q in (1u128 << dd)..(1u128 << (dd + 1)) {
            if poly_rem(p, q) == 0 {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `p` of degree `n` is irreducible iff `x^(2^n) = x mod p`
/// and `gcd(x^(2^(n/q)) - x, p) = 1` for every prime `q | n`.
pub fn irreducible_rabin(p: u128) -> bool {
    let n = degree(p);
    if n < 1 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let n = n as u32;
    let x = 0b10u128;
    let frob = |k: u32| -> u128 {
        let mut y = poly_rem(x, p);
        for _ in 0..k {
            y = mulmod(y, y, p);
        }
        y
    };
    if frob(n) != poly_rem(x, p) {
        return false;
    }
    prime_factors(n)
        .into_iter()
        .all(|q| poly_gcd(p, frob(n / q) ^ x) == 1)
}

/// The modulus for one width: `x^n` plus the low coefficient mask.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ReductionPolynomial {
    width: u32,
    low: u64,
}

impl ReductionPolynomial {
    pub fn new(width: u32, low: u64) -> Result<Self, FieldError> {
        if width == 0 || width > MAX_WIDTH {
            return Err(FieldError::BadWidth(width));
        }
        if width < 64 && low >> width != 0 {
            return Err(FieldError::ValueTooWide { value: low, width });
        }
        let p = ReductionPolynomial { width, low };
        if !irreducible_rabin(p.full()) {
            return Err(FieldError::Reducible(p.to_string()));
        }
        Ok(p)
    }

    /// The smallest irreducible polynomial of degree `width` (cached).
    pub fn for_width(width: u32) -> Result<Self, FieldError> {
        static TABLE: [OnceLock<ReductionPolynomial>; 64] = [const { OnceLock::new() }; 64];
        if width == 0 || width > MAX_WIDTH {
            return Err(FieldError::BadWidth(width));
        }
        Ok(*TABLE[width as usize - 1].get_or_init(|| {
            let top = 1u128 << width;
            let low = (0u64..)
                .find(|&low| {
                    let p = top | low as u128;
                    if width <= 16 {
                        irreducible_by_trial_division(p)
                    } else {
                        irreducible_rabin(p)
                    }
                })
                .expect("irreducible polynomials exist in every degree");
            ReductionPolynomial { width, low }
        }))
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Full coefficient mask including the leading `x^n`.
    pub fn full(&self) -> u128 {
        (1u128 << self.width) | self.low as u128
    }
}

impl fmt::Display for ReductionPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let full = self.full();
        let mut terms = Vec::new();
        for i in (0..=self.width).rev() {
            if (full >> i) & 1 == 1 {
                terms.push(match i {
                    0 => "1".to_string(),
                    1 => "x".to_string(),
                    _ => format!("x^{i}"),
                });
            }
        }
        f.write_str(&terms.join("+"))
    }
}

fn mask(width: u32) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// An element of GF(2^width).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    width: u32,
    value: u64,
}

impl FieldElement {
    pub fn new(width: u32, value: u64) -> Result<Self, FieldError> {
        if width == 0 || width > MAX_WIDTH {
            return Err(FieldError::BadWidth(width));
        }
        if value & !mask(width) != 0 {
            return Err(FieldError::ValueTooWide { value, width });
        }
        Ok(FieldElement { width, value })
    }

    pub fn zero(width: u32) -> Result<Self, FieldError> {
        Self::new(width, 0)
    }

    pub fn one(width: u32) -> Result<Self, FieldError> {
        Self::new(width, 1)
    }

    /// Element from a bit string; the first bit is the highest coefficient.
    pub fn from_bits(bits: &Bits) -> Result<Self, FieldError> {
        let w = bits.len() as u32;
        if w == 0 || w > MAX_WIDTH {
            return Err(FieldError::BadWidth(w));
        }
        Self::new(w, bits.to_u64())
    }

    pub fn to_bits(&self) -> Bits {
        Bits::from_u64(self.value, self.width)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_width(&self, other: &Self) -> Result<(), FieldError> {
        if self.width != other.width {
            Err(FieldError::WidthMismatch(self.width, other.width))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_width(other)?;
        Ok(FieldElement {
            width: self.width,
            value: self.value ^ other.value,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_width(other)?;
        let m = ReductionPolynomial::for_width(self.width)?;
        let r = poly_rem(clmul(self.value, other.value), m.full());
        Ok(FieldElement {
            width: self.width,
            value: r as u64,
        })
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut base = *self;
        let mut acc = FieldElement {
            width: self.width,
            value: 1,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same width");
            }
            base = base.mul(&base).expect("same width");
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `a^(2^n - 2)`.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow((1u128 << self.width) - 2))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bits())
    }
}

/// The universal hash `h_a(w) = a·w`.
pub fn hash(a: &FieldElement, w: &FieldElement) -> Result<FieldElement, FieldError> {
    a.mul(w)
}

/// The `k` highest-degree coefficients of `y`, highest first.
pub fn truncate(y: &FieldElement, k: u32) -> Result<Bits, FieldError> {
    if k > y.width {
        return Err(FieldError::TruncateRange { k, width: y.width });
    }
    Ok(y.to_bits().slice(0, k as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(w: u32, v: u64) -> FieldElement {
        FieldElement::new(w, v).unwrap()
    }

    /// Schoolbook long division oracle, kept apart from `poly_rem`.
    fn long_division_product(a: u64, b: u64, modulus: u128) -> u64 {
        let mut prod = [false; 130];
        for i in 0..64 {
            for j in 0..64 {
                if (a >> i) & 1 == 1 && (b >> j) & 1 == 1 {
                    prod[i + j] ^= true;
                }
            }
        }
        let dm = 127 - modulus.leading_zeros() as usize;
        for d in (dm..130).rev() {
            if prod[d] {
                for k in 0..=dm {
                    if (modulus >> k) & 1 == 1 {
                        prod[d - dm + k] ^= true;
                    }
                }
            }
        }
        prod[..dm].iter().rev().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    #[test]
    fn known_moduli() {
        assert_eq!(ReductionPolynomial::for_width(1).unwrap().full(), 0b10);
        assert_eq!(ReductionPolynomial::for_width(2).unwrap().full(), 0b111);
        assert_eq!(ReductionPolynomial::for_width(3).unwrap().full(), 0b1011);
        assert_eq!(ReductionPolynomial::for_width(4).unwrap().full(), 0b10011);
        assert_eq!(ReductionPolynomial::for_width(8).unwrap().full(), 0x11b);
        assert_eq!(ReductionPolynomial::for_width(4).unwrap().to_string(), "x^4+x+1");
    }

    #[test]
    fn trial_division_and_rabin_agree() {
        for p in 2u128..(1 << 12) {
            assert_eq!(irreducible_by_trial_division(p), irreducible_rabin(p), "{p:b}");
        }
    }

    #[test]
    fn smallest_moduli_for_all_widths() {
        for w in 1..=MAX_WIDTH {
            let m = ReductionPolynomial::for_width(w).unwrap();
            assert!(irreducible_rabin(m.full()));
            for low in 0..m.full() as u64 & mask(w) {
                assert!(!irreducible_rabin((1u128 << w) | low as u128), "width {w}");
            }
        }
    }

    #[test]
    fn addition() {
        let a = fe(4, 0b1010);
        assert_eq!(a.add(&a).unwrap(), fe(4, 0));
        assert_eq!(a.add(&fe(4, 0)).unwrap(), a);
        assert_eq!(a.add(&fe(4, 0b0110)).unwrap(), fe(4, 0b1100));
        assert!(matches!(a.add(&fe(5, 1)), Err(FieldError::WidthMismatch(4, 5))));
    }

    #[test]
    fn multiplication() {
        assert_eq!(fe(4, 0b0010).mul(&fe(4, 0b1001)).unwrap(), fe(4, 1));
        for w in 1..=4u32 {
            let m = ReductionPolynomial::for_width(w).unwrap().full();
            for a in 0..1u64 << w {
                assert_eq!(fe(w, a).mul(&fe(w, 1)).unwrap(), fe(w, a));
                for b in 0..1u64 << w {
                    assert_eq!(fe(w, a).mul(&fe(w, b)).unwrap().value(), long_division_product(a, b, m));
                }
            }
        }
        let a = fe(64, u64::MAX);
        let b = fe(64, 0x1234_5678_9abc_def0);
        let m = ReductionPolynomial::for_width(64).unwrap().full();
        assert_eq!(a.mul(&b).unwrap().value(), long_division_product(a.value(), b.value(), m));
    }

    #[test]
    fn inverses() {
        assert_eq!(fe(4, 1).inv().unwrap(), fe(4, 1));
        assert_eq!(fe(4, 0b0010).inv().unwrap(), fe(4, 0b1001));
        assert_eq!(fe(4, 0).inv(), Err(FieldError::ZeroInverse));
        for w in 1..=6u32 {
            for a in 1..1u64 << w {
                let x = fe(w, a);
                // exhaustive-search oracle
                let found = (1..1u64 << w).find(|&b| x.mul(&fe(w, b)).unwrap().value() == 1);
                assert_eq!(Some(x.inv().unwrap().value()), found);
            }
        }
    }

    #[test]
    fn field_axioms_small_widths() {
        for w in 1..=5u32 {
            let n = 1u64 << w;
            for a in 0..n {
                for b in 0..n {
                    let (a, b) = (fe(w, a), fe(w, b));
                    assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
                    for c in 0..n {
                        let c = fe(w, c);
                        assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
                        assert_eq!(
                            a.mul(&b.add(&c).unwrap()).unwrap(),
                            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn hashing_and_truncation() {
        for w in 0..16 {
            assert!(hash(&fe(4, 0), &fe(4, w)).unwrap().is_zero());
        }
        let y = fe(6, 0b101100);
        assert!(truncate(&y, 0).unwrap().is_empty());
        assert_eq!(truncate(&y, 3).unwrap().to_string(), "101");
        assert_eq!(truncate(&y, 6).unwrap().to_string(), "101100");
        assert!(truncate(&y, 7).is_err());
    }

    #[test]
    fn bad_construction() {
        assert!(FieldElement::new(0, 0).is_err());
        assert!(FieldElement::new(65, 0).is_err());
        assert!(FieldElement::new(3, 8).is_err());
        assert!(ReductionPolynomial::new(4, 0b0000).is_err());
        assert!(ReductionPolynomial::new(4, 0b0011).is_ok());
    }
}
