use std::fmt;

/// A finite bit string, first bit first.
///
/// When read as an integer the first bit is the most significant one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn new() -> Self {
        Bits(Vec::new())
    }

    /// The `width` low bits of `value`, most significant first.
    pub fn from_u64(value: u64, width: u32) -> Self {
        assert!(width <= 64);
        Bits((0..width).rev().map(|i| (value >> i) & 1 == 1).collect())
    }

    /// Interpret as a big-endian integer. Panics above 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.0.len() <= 64, "bit string too long for u64");
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn extend_from(&mut self, other: &Bits) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn slice(&self, from: usize, to: usize) -> Bits {
        Bits(self.0[from..to].to_vec())
    }

    /// Parse a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Option<Bits> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Bits)
    }
}

impl From<Vec<bool>> for Bits {
    fn from(v: Vec<bool>) -> Self {
        Bits(v)
    }
}

impl FromIterator<bool> for Bits {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        Bits(iter.into_iter().collect())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u64_round_trip() {
        let b = Bits::from_u64(0b00101, 5);
        assert_eq!(b.to_string(), "00101");
        assert_eq!(b.to_u64(), 5);
        assert_eq!(Bits::from_u64(0, 0).len(), 0);
    }

    #[test]
    fn parse_rejects_junk() {
        assert_eq!(Bits::parse("0110").unwrap().to_u64(), 6);
        assert!(Bits::parse("01x").is_none());
    }
}
