//! Classical bit strings, including the empty string λ.

use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// A finite classical binary string. The empty string λ is a valid value
/// and is the identity for concatenation.
///
/// Ordering is *shortlex*: first by length, then lexicographically with
/// `0 < 1`. This is the canonical enumeration and rendering order used
/// throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

/// Parse failure for [`BitString::parse`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid character {found:?} at position {position}: expected '0' or '1'")]
pub struct BitStringParseError {
    /// 1-based position of the offending character.
    pub position: usize,
    pub found: char,
}

impl BitString {
    /// The empty string λ.
    pub const fn empty() -> Self {
        BitString { bits: Vec::new() }
    }

    /// Parse from text. The empty string is the designated token for λ;
    /// any character other than `'0'` or `'1'` is rejected with its
    /// 1-based position.
    pub fn parse(text: &str) -> Result<Self, BitStringParseError> {
        let mut bits = Vec::with_capacity(text.len());
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(BitStringParseError {
                        position: i + 1,
                        found: c,
                    })
                }
            }
        }
        Ok(BitString { bits })
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString {
            bits: iter.into_iter().collect(),
        }
    }

    /// Length ℓ(s); zero for λ.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// The bit at 0-based position `i`.
    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Concatenation `self ∘ other`.
    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    /// The first `n` bits. `n` must not exceed the length.
    pub fn prefix(&self, n: usize) -> BitString {
        BitString {
            bits: self.bits[..n].to_vec(),
        }
    }

    /// The suffix starting at 0-based position `n`.
    pub fn suffix_from(&self, n: usize) -> BitString {
        BitString {
            bits: self.bits[n..].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len() <= other.len() && other.bits[..self.len()] == self.bits[..]
    }

    /// All strings of exactly length `n`, in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < usize::BITS as usize - 1, "enumeration length too large");
        (0..(1usize << n))
            .map(move |v| BitString::from_bits((0..n).map(|i| (v >> (n - 1 - i)) & 1 == 1)))
    }

    /// All strings with length in `min_len..=max_len`, in shortlex order.
    pub fn all_up_to(min_len: usize, max_len: usize) -> impl Iterator<Item = BitString> {
        (min_len..=max_len).flat_map(BitString::all_of_length)
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "λ");
        }
        for b in &self.bits {
            write!(f, "{}", if *b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Convenience for literals in tests and examples: `bitstring("110")`.
/// Panics on invalid input.
pub fn bitstring(text: &str) -> BitString {
    BitString::parse(text).expect("invalid bit string literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_empty_is_lambda() {
        let s = BitString::parse("").unwrap();
        assert!(s.is_empty());
        assert_eq!(s.len(), 0);
        assert_eq!(s, BitString::empty());
    }

    #[test]
    fn parse_reads_bits_in_order() {
        let s = BitString::parse("110").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.bits().collect::<Vec<_>>(), vec![true, true, false]);
        assert_eq!(s.to_string(), "110");
    }

    #[test]
    fn parse_rejects_bad_character_with_position() {
        let err = BitString::parse("10a").unwrap_err();
        assert_eq!(err.position, 3);
        assert_eq!(err.found, 'a');
    }

    #[test]
    fn concat_and_prefix() {
        let s = bitstring("10").concat(&bitstring("01"));
        assert_eq!(s, bitstring("1001"));
        assert_eq!(s.prefix(2), bitstring("10"));
        assert_eq!(s.suffix_from(2), bitstring("01"));
        assert_eq!(bitstring("10").concat(&BitString::empty()), bitstring("10"));
        assert_eq!(BitString::empty().concat(&bitstring("10")), bitstring("10"));
    }

    #[test]
    fn shortlex_order() {
        let mut all: Vec<BitString> = BitString::all_up_to(0, 2).collect();
        let sorted = {
            let mut v = all.clone();
            v.sort();
            v
        };
        assert_eq!(all, sorted);
        all.dedup();
        assert_eq!(all.len(), 1 + 2 + 4);
        assert!(bitstring("1") < bitstring("00"));
        assert!(bitstring("01") < bitstring("10"));
    }

    #[test]
    fn prefix_relation() {
        assert!(bitstring("0").is_prefix_of(&bitstring("01")));
        assert!(BitString::empty().is_prefix_of(&bitstring("1")));
        assert!(!bitstring("1").is_prefix_of(&bitstring("01")));
        assert!(bitstring("01").is_prefix_of(&bitstring("01")));
    }
}
