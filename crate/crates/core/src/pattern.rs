//! Fixed-width bit patterns.
//!
//! Qubit `q[0]` is the most significant bit: the pattern `"10110"` marks
//! `q0=1, q1=0, q2=1, q3=1, q4=0` and has integer value `0b10110`. The same
//! convention is used for classical registers and for basis-state indices in
//! the simulator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest supported pattern width.
pub const MAX_WIDTH: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern must be non-empty")]
    Empty,
    #[error("pattern width {0} exceeds the maximum of {MAX_WIDTH}")]
    TooWide(usize),
    #[error("invalid character {ch:?} at position {pos} (expected 0 or 1)")]
    BadChar { pos: usize, ch: char },
    #[error("value {value} does not fit in {width} bits")]
    Overflow { value: u64, width: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    width: usize,
    bits: u64,
}

impl Pattern {
    pub fn new(width: usize, bits: u64) -> Result<Self, PatternError> {
        if width == 0 {
            return Err(PatternError::Empty);
        }
        if width > MAX_WIDTH {
            return Err(PatternError::TooWide(width));
        }
        if bits >> width != 0 {
            return Err(PatternError::Overflow { value: bits, width });
        }
        Ok(Pattern { width, bits })
    }

    /// All-ones pattern of the given width.
    pub fn ones(width: usize) -> Self {
        Pattern::new(width, (1u64 << width) - 1).expect("valid width")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn value(&self) -> u64 {
        self.bits
    }

    /// Bit carried by position `i` (`i = 0` is the leftmost character).
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.width, "bit {i} out of range for width {}", self.width);
        (self.bits >> (self.width - 1 - i)) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.width).map(move |i| self.bit(i))
    }

    /// Every pattern of width `n`, in increasing value order.
    pub fn all(n: usize) -> impl Iterator<Item = Pattern> {
        (0..(1u64 << n)).map(move |v| Pattern { width: n, bits: v })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PatternError::Empty);
        }
        if s.len() > MAX_WIDTH {
            return Err(PatternError::TooWide(s.len()));
        }
        let mut bits = 0u64;
        for (pos, ch) in s.chars().enumerate() {
            bits = (bits << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(PatternError::BadChar { pos, ch }),
                };
        }
        Pattern::new(s.len(), bits)
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_character_is_most_significant() {
        let p: Pattern = "10110".parse().unwrap();
        assert_eq!(p.value(), 0b10110);
        assert!(p.bit(0));
        assert!(!p.bit(1));
        assert!(!p.bit(4));
        assert_eq!(p.to_string(), "10110");
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!("".parse::<Pattern>(), Err(PatternError::Empty));
        assert_eq!(
            "10a".parse::<Pattern>(),
            Err(PatternError::BadChar { pos: 2, ch: 'a' })
        );
        assert!(Pattern::new(2, 4).is_err());
    }

    #[test]
    fn enumerates_all() {
        let all: Vec<String> = Pattern::all(2).map(|p| p.to_string()).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
    }
}
