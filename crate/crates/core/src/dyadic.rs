//! Exact binary fractions `n / 2^p`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A non-negative dyadic rational kept in canonical form: the numerator is
/// odd, or the value is zero with precision 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    prec: u32,
}

impl Dyadic {
    pub fn new(num: BigUint, prec: u32) -> Self {
        let mut d = Dyadic { num, prec };
        d.canonicalize();
        d
    }

    pub fn from_u64(num: u64, prec: u32) -> Self {
        Self::new(BigUint::from(num), prec)
    }

    pub fn zero() -> Self {
        Dyadic { num: BigUint::zero(), prec: 0 }
    }

    pub fn one() -> Self {
        Dyadic { num: BigUint::one(), prec: 0 }
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        Dyadic { num: BigUint::one(), prec: k }
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.prec = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.prec as u64) as u32;
        if shift > 0 {
            self.num >>= shift;
            self.prec -= shift;
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    /// Number of fractional bits in canonical form.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Numerator when written over `2^prec`. Requires `prec >= precision()`.
    pub fn scaled(&self, prec: u32) -> BigUint {
        assert!(prec >= self.prec);
        &self.num << (prec - self.prec)
    }

    /// `Some(k)` when the value is exactly `2^-k` with `k >= 0`.
    pub fn neg_log2(&self) -> Option<u32> {
        self.num.is_one().then_some(self.prec)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.num.clone()),
            BigInt::from(BigUint::one() << self.prec),
        )
    }

    /// Exact conversion; `None` unless the reduced denominator is a power of
    /// two and the value is non-negative.
    pub fn from_rational(r: &BigRational) -> Option<Self> {
        if r < &BigRational::zero() {
            return None;
        }
        let den = r.denom().to_biguint()?;
        let tz = den.trailing_zeros().unwrap_or(0);
        if den != BigUint::one() << tz {
            return None;
        }
        let num = r.numer().to_biguint()?;
        Some(Self::new(num, tz.to_u32()?))
    }

    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let p = self.prec.max(other.prec);
        let a = self.scaled(p);
        let b = other.scaled(p);
        (a >= b).then(|| Dyadic::new(a - b, p))
    }

    /// Binary expansion after the point, e.g. `0.101`. Whole values print as
    /// `0` or `1`.
    pub fn to_binary(&self) -> String {
        if self.prec == 0 {
            return self.num.to_string();
        }
        let digits = self.num.to_str_radix(2);
        let pad = self.prec as usize - digits.len().min(self.prec as usize);
        format!("0.{}{}", "0".repeat(pad), digits)
    }

    /// The shortest dyadic strictly inside `(lo, hi)`. Among equal
    /// precision candidates the smallest is returned, though the shortest
    /// one is always unique. `None` when the interval is empty.
    pub fn shortest_between(lo: &BigRational, hi: &BigRational) -> Option<Dyadic> {
        if lo >= hi {
            return None;
        }
        let mut k = 0u32;
        loop {
            let scale = BigRational::from_integer(BigInt::one() << k);
            let i = (lo * &scale).floor() + BigRational::one();
            if i < hi * &scale {
                let n = i.to_integer();
                if n.sign() == num_bigint::Sign::Minus {
                    return None;
                }
                return Some(Dyadic::new(n.to_biguint()?, k));
            }
            k += 1;
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let p = self.prec.max(other.prec);
        self.scaled(p).cmp(&other.scaled(p))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, other: &Dyadic) -> Dyadic {
        let p = self.prec.max(other.prec);
        Dyadic::new(self.scaled(p) + other.scaled(p), p)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prec == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigUint::one() << self.prec)
        }
    }
}
