//! Fixed-length binary vectors packed into 64-bit words.
//!
//! Bits beyond `len` in the last word are always zero, so word-wise popcounts
//! never need masking.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sdr {
    len: usize,
    words: Vec<u64>,
}

impl Sdr {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(WORD)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self { len, words: vec![u64::MAX; len.div_ceil(WORD)] };
        s.clear_tail();
        s
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut s = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                s.set(i, true);
            }
        }
        s
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bit_str(text: &str) -> Option<Self> {
        let mut bits = Vec::with_capacity(text.len());
        for ch in text.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return None,
            }
        }
        Some(Self::from_bools(bits))
    }

    pub fn from_indices(len: usize, active: &[usize]) -> Self {
        let mut s = Self::zeros(len);
        for &i in active {
            s.set(i, true);
        }
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of active bits in increasing order.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    fn check_len(&self, other: &Sdr) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len, right: other.len });
        }
        Ok(())
    }

    /// `popcount(self AND other)`.
    pub fn overlap(&self, other: &Sdr) -> Result<usize> {
        self.check_len(other)?;
        Ok(self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum())
    }

    /// Hamming distance, `popcount(self XOR other)`.
    pub fn hamming(&self, other: &Sdr) -> Result<usize> {
        self.check_len(other)?;
        Ok(self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as usize).sum())
    }

    /// Number of positions where both vectors hold the same bit.
    pub fn agreement(&self, other: &Sdr) -> Result<usize> {
        Ok(self.len - self.hamming(other)?)
    }

    pub fn or(&self, other: &Sdr) -> Result<Sdr> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn and(&self, other: &Sdr) -> Result<Sdr> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn or_assign(&mut self, other: &Sdr) -> Result<()> {
        self.check_len(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        Ok(())
    }

    pub fn complement(&self) -> Sdr {
        let mut s = Sdr { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        s.clear_tail();
        s
    }

    fn zip_words(&self, other: &Sdr, f: impl Fn(u64, u64) -> u64) -> Result<Sdr> {
        self.check_len(other)?;
        Ok(Sdr { len: self.len, words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect() })
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for Sdr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sdr({})", self.to_bit_string())
    }
}

impl fmt::Display for Sdr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}
