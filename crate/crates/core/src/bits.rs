use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest arity a signature may have; strings are packed into one `u64`.
pub const MAX_WIDTH: usize = 64;

/// A 0/1 string `x_1 … x_width`. Variable `x_i` (1-based) lives in bit `i-1`.
/// Bits at positions `>= width` are always zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: u8,
    bits: u64,
}

pub(crate) fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl BitString {
    pub fn new(width: usize, bits: u64) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::ArityTooLarge(width));
        }
        if bits & !mask(width) != 0 {
            return Err(Error::InvalidArgument(format!(
                "bits set beyond width {width}"
            )));
        }
        Ok(BitString { width: width as u8, bits })
    }

    /// Caller guarantees `width <= 64` and no stray high bits.
    pub(crate) fn from_raw(width: usize, bits: u64) -> Self {
        debug_assert!(width <= MAX_WIDTH && bits & !mask(width) == 0);
        BitString { width: width as u8, bits }
    }

    pub fn zeros(width: usize) -> Result<Self> {
        Self::new(width, 0)
    }

    pub fn from_bools(values: &[bool]) -> Result<Self> {
        if values.len() > MAX_WIDTH {
            return Err(Error::ArityTooLarge(values.len()));
        }
        let bits = values
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        Ok(BitString::from_raw(values.len(), bits))
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn raw(&self) -> u64 {
        self.bits
    }

    /// Value of `x_index` (1-based).
    pub fn get(&self, index: usize) -> bool {
        debug_assert!(index >= 1 && index <= self.width());
        self.bits >> (index - 1) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        debug_assert!(index >= 1 && index <= self.width());
        if value {
            self.bits |= 1 << (index - 1);
        } else {
            self.bits &= !(1 << (index - 1));
        }
    }

    /// `#_1(α)`.
    pub fn ones(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// `#_0(α)`.
    pub fn zeros_count(&self) -> usize {
        self.width() - self.ones()
    }

    /// The dual string `ᾱ`.
    pub fn dual(&self) -> Self {
        BitString { width: self.width, bits: !self.bits & mask(self.width()) }
    }

    pub fn xor(&self, other: &Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        BitString { width: self.width, bits: self.bits ^ other.bits }
    }

    /// Left-then-right concatenation: `self` occupies `x_1..x_w`, `other` the rest.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let w = self.width() + other.width();
        if w > MAX_WIDTH {
            return Err(Error::ArityTooLarge(w));
        }
        Ok(BitString::from_raw(w, self.bits | (other.bits << self.width())))
    }

    /// Deletes the listed (1-based) coordinates, keeping the order of the others.
    pub fn remove(&self, indices: &[usize]) -> Self {
        let mut out = 0u64;
        let mut k = 0;
        for i in 1..=self.width() {
            if indices.contains(&i) {
                continue;
            }
            if self.get(i) {
                out |= 1 << k;
            }
            k += 1;
        }
        BitString::from_raw(k, out)
    }

    /// Picks the listed (1-based) coordinates in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let bits = indices
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, &i)| acc | ((self.get(i) as u64) << k));
        BitString::from_raw(indices.len(), bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.width() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut values = Vec::with_capacity(s.len());
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '0' => values.push(false),
                '1' => values.push(true),
                _ => {
                    return Err(Error::Parse(format!(
                        "invalid character {ch:?} at position {pos} of bit string {s:?}"
                    )))
                }
            }
        }
        BitString::from_bools(&values)
    }
}

impl serde::Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for BitString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and builders: parses a literal bit string, panicking on bad input.
pub fn bs(s: &str) -> BitString {
    s.parse().expect("valid bit string literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let a = bs("1100");
        assert_eq!(a.width(), 4);
        assert!(a.get(1) && a.get(2) && !a.get(3));
        assert_eq!(a.to_string(), "1100");
        assert_eq!(bs("").width(), 0);
        assert!("10a".parse::<BitString>().is_err());
    }

    #[test]
    fn dual_is_an_involution() {
        let a = bs("10110");
        assert_eq!(a.dual(), bs("01001"));
        assert_eq!(a.dual().dual(), a);
        let wide = BitString::new(64, 0x0123_4567_89ab_cdef).unwrap();
        assert_eq!(wide.dual().dual(), wide);
    }

    #[test]
    fn remove_select_concat() {
        let a = bs("101101");
        assert_eq!(a.remove(&[1, 3]), bs("0101"));
        assert_eq!(a.select(&[6, 1, 2]), bs("110"));
        assert_eq!(bs("10").concat(&bs("011")).unwrap(), bs("10011"));
        assert_eq!(a.ones(), 4);
        assert_eq!(a.zeros_count(), 2);
    }
}
