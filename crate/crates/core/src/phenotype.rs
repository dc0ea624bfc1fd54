//! Truth-table phenotypes and the standard input contexts.
//!
//! A circuit with `n` inputs is evaluated on all `2^n` input combinations at
//! once: every wire carries a `2^n`-bit vector, one bit per combination. Bit
//! `b` (least significant = 0) holds the combination in which input `i`
//! (1-based) takes the value of bit `n - i` of `b`, so the all-ones
//! combination sits in the most significant column.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported input count. Bit vectors are `u128`, two machine words.
pub const MAX_INPUTS: usize = 7;

/// Mask with the low `2^n` bits set.
#[inline]
pub fn width_mask(n_inputs: usize) -> u128 {
    let width = 1u32 << n_inputs;
    if width >= 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

pub(crate) fn check_inputs(n_inputs: usize) -> Result<()> {
    if (1..=MAX_INPUTS).contains(&n_inputs) {
        Ok(())
    } else {
        Err(Error::Bounds {
            what: "input count",
            value: n_inputs,
            min: 1,
            max: MAX_INPUTS,
        })
    }
}

/// The Boolean function computed by a single-output circuit, as a `2^n`-bit
/// truth table.
///
/// Ordering is by input count, then by numeric value of the table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phenotype {
    n_inputs: u8,
    bits: u128,
}

impl Phenotype {
    pub fn new(n_inputs: usize, bits: u128) -> Result<Self> {
        check_inputs(n_inputs)?;
        if bits & !width_mask(n_inputs) != 0 {
            return Err(Error::Bounds {
                what: "phenotype bits",
                value: (128 - bits.leading_zeros()) as usize,
                min: 0,
                max: 1 << n_inputs,
            });
        }
        Ok(Phenotype {
            n_inputs: n_inputs as u8,
            bits,
        })
    }

    /// Caller guarantees `bits` fits the width.
    #[inline]
    pub(crate) fn from_raw(n_inputs: usize, bits: u128) -> Self {
        debug_assert_eq!(bits & !width_mask(n_inputs), 0);
        Phenotype {
            n_inputs: n_inputs as u8,
            bits,
        }
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs as usize
    }

    /// Truth table length, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n_inputs
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn hamming(&self, other: &Phenotype) -> u32 {
        debug_assert_eq!(self.n_inputs, other.n_inputs);
        (self.bits ^ other.bits).count_ones()
    }

    /// Number of distinct phenotypes for `n` inputs, `2^(2^n)`, when it fits.
    pub fn space_size(n_inputs: usize) -> Option<u128> {
        1u128.checked_shl(1 << n_inputs)
    }

    /// Iterates every phenotype of `n` inputs in numeric order. Only
    /// sensible for `n <= 4`.
    pub fn all(n_inputs: usize) -> Result<impl Iterator<Item = Phenotype>> {
        check_inputs(n_inputs)?;
        if n_inputs > 4 {
            return Err(Error::Resource {
                what: "phenotype enumeration",
                required: 1 << 32,
                limit: 1 << 16,
            });
        }
        let count = 1u128 << (1 << n_inputs);
        Ok((0..count).map(move |b| Phenotype::from_raw(n_inputs, b)))
    }

    /// Number of hex digits in the canonical text form.
    pub fn hex_digits(n_inputs: usize) -> usize {
        ((1usize << n_inputs) / 4).max(1)
    }

    /// Parses `0x..` (prefix optional) for a known input count.
    pub fn parse_hex(text: &str, n_inputs: usize) -> Result<Self> {
        check_inputs(n_inputs)?;
        let t = text.trim();
        let digits = t
            .strip_prefix("0x")
            .or_else(|| t.strip_prefix("0X"))
            .unwrap_or(t);
        let bits = u128::from_str_radix(digits, 16).map_err(|e| Error::Syntax {
            position: 0,
            message: format!("bad phenotype `{text}`: {e}"),
        })?;
        Phenotype::new(n_inputs, bits)
    }

    /// Parses a canonical, zero-padded hex phenotype and infers the input
    /// count from the digit count. A single digit is read as `n = 2`.
    pub fn parse_canonical(text: &str) -> Result<Self> {
        let t = text.trim();
        let digits = t.strip_prefix("0x").unwrap_or(t);
        let n = match digits.len() {
            1 => 2,
            2 => 3,
            4 => 4,
            8 => 5,
            16 => 6,
            32 => 7,
            _ => {
                return Err(Error::Syntax {
                    position: 0,
                    message: format!("cannot infer input count from `{text}`"),
                })
            }
        };
        Phenotype::parse_hex(t, n)
    }
}

impl fmt::Display for Phenotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = Phenotype::hex_digits(self.n_inputs());
        write!(f, "0x{:0width$x}", self.bits)
    }
}

impl fmt::Debug for Phenotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phenotype({self}, n={})", self.n_inputs)
    }
}

impl Serialize for Phenotype {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Phenotype {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Phenotype::parse_canonical(&s).map_err(serde::de::Error::custom)
    }
}

/// The per-input bit vectors that feed every combination of inputs into a
/// circuit simultaneously.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputContext {
    rows: Vec<u128>,
}

impl InputContext {
    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn n_inputs(&self) -> usize {
        self.rows.len()
    }
}

/// Row `i` (1-based) is blocks of `2^(n-i)` ones then `2^(n-i)` zeros,
/// starting with ones at the most significant end.
pub fn standard_contexts(n_inputs: usize) -> Result<InputContext> {
    check_inputs(n_inputs)?;
    let width = 1usize << n_inputs;
    let rows = (1..=n_inputs)
        .map(|i| {
            let block = 1usize << (n_inputs - i);
            (0..width)
                .filter(|b| (b / block) % 2 == 1)
                .fold(0u128, |acc, b| acc | (1u128 << b))
        })
        .collect();
    Ok(InputContext { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_context_rows() {
        assert_eq!(standard_contexts(2).unwrap().rows(), &[0xc, 0xa]);
        assert_eq!(standard_contexts(3).unwrap().rows(), &[0xf0, 0xcc, 0xaa]);
        assert_eq!(
            standard_contexts(4).unwrap().rows(),
            &[0xff00, 0xf0f0, 0xcccc, 0xaaaa]
        );
        assert_eq!(standard_contexts(1).unwrap().rows(), &[0x2]);
    }

    /// Independent construction: list the input tuples in descending binary
    /// order (most significant column first) and read off each input's column.
    fn contexts_by_enumeration(n: usize) -> Vec<u128> {
        let width = 1usize << n;
        let mut rows = vec![0u128; n];
        for (col_from_msb, tuple) in (0..width).rev().enumerate() {
            let bit = width - 1 - col_from_msb;
            for (i, row) in rows.iter_mut().enumerate() {
                if (tuple >> (n - 1 - i)) & 1 == 1 {
                    *row |= 1u128 << bit;
                }
            }
        }
        rows
    }

    #[test]
    fn contexts_match_enumeration_oracle() {
        for n in 1..=MAX_INPUTS {
            assert_eq!(
                standard_contexts(n).unwrap().rows(),
                contexts_by_enumeration(n).as_slice(),
                "n={n}"
            );
        }
        assert_eq!(
            standard_contexts(5).unwrap().rows(),
            &[0xffff0000, 0xff00ff00, 0xf0f0f0f0, 0xcccccccc, 0xaaaaaaaa]
        );
    }

    #[test]
    fn columns_are_complete() {
        for n in 1..=MAX_INPUTS {
            let ctx = standard_contexts(n).unwrap();
            let mut seen = std::collections::HashSet::new();
            for col in 0..(1 << n) {
                let key: Vec<bool> = ctx.rows().iter().map(|r| (r >> col) & 1 == 1).collect();
                assert!(seen.insert(key));
            }
            assert_eq!(seen.len(), 1 << n);
        }
    }

    #[test]
    fn context_bounds() {
        assert!(matches!(standard_contexts(0), Err(Error::Bounds { .. })));
        assert!(matches!(standard_contexts(8), Err(Error::Bounds { .. })));
    }

    #[test]
    fn hex_format() {
        assert_eq!(Phenotype::new(3, 0x74).unwrap().to_string(), "0x74");
        assert_eq!(Phenotype::new(3, 0x4).unwrap().to_string(), "0x04");
        assert_eq!(Phenotype::new(2, 0x9).unwrap().to_string(), "0x9");
        assert_eq!(Phenotype::new(1, 0x2).unwrap().to_string(), "0x2");
        assert_eq!(Phenotype::new(4, 0xab).unwrap().to_string(), "0x00ab");
        assert!(Phenotype::new(2, 0x10).is_err());
        let p = Phenotype::parse_canonical("0x0074").unwrap();
        assert_eq!((p.n_inputs(), p.bits()), (4, 0x74));
        assert_eq!(Phenotype::parse_hex("74", 3).unwrap().bits(), 0x74);
    }
}
