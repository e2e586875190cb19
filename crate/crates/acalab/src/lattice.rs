//! Configurations on a periodic ring.
//!
//! A configuration is `n` binary cells with wraparound neighbors, stored
//! bit-packed in a single `u128`: cell 0 occupies the most significant of the
//! low `n` bits, so the integer code of a configuration reads the same
//! left-to-right as its bit string. Ring sizes 3..=128 are supported; the
//! exhaustive analyses elsewhere in the crate impose their own, smaller
//! limits.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rule::{EcaRule, MinTerm};

/// Smallest supported ring: three neighborhoods need three distinct cells.
pub const MIN_RING: usize = 3;
/// Largest supported ring, set by the `u128` cell storage.
pub const MAX_RING: usize = 128;

/// A ring of `n` binary cells, bit-packed with cell 0 as the MSB.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    n: usize,
    code: u128,
}

/// A maximal run of equal cells, part of the alternating decomposition of a
/// ring. `start` indexes the first cell of the run in ring order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub state: u8,
    pub start: usize,
    pub length: usize,
}

/// All-ones mask over the low `n` bits.
pub(crate) fn ring_mask(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

impl Configuration {
    /// Builds a configuration from its integer code.
    pub fn new(n: usize, code: u128) -> Result<Self> {
        if !(MIN_RING..=MAX_RING).contains(&n) {
            return Err(Error::BadRingSize {
                n,
                min: MIN_RING,
                max: MAX_RING,
            });
        }
        if code & !ring_mask(n) != 0 {
            return Err(Error::CodeOutOfRange { code, n });
        }
        Ok(Configuration { n, code })
    }

    /// The all-zero configuration.
    pub fn zeros(n: usize) -> Result<Self> {
        Configuration::new(n, 0)
    }

    /// The all-one configuration.
    pub fn ones(n: usize) -> Result<Self> {
        Configuration::new(n, 0).map(|c| Configuration {
            code: ring_mask(n),
            ..c
        })
    }

    /// Builds a configuration from explicit cell states.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let n = bits.len();
        let mut code = 0u128;
        for &b in bits {
            code = (code << 1) | u128::from(b & 1);
        }
        Configuration::new(n, code)
    }

    /// Ring size.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Rings are never empty; present for clippy symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The packed integer code.
    pub fn code(&self) -> u128 {
        self.code
    }

    /// State of cell `i`.
    pub fn bit(&self, i: usize) -> u8 {
        debug_assert!(i < self.n);
        ((self.code >> (self.n - 1 - i)) & 1) as u8
    }

    /// Cell states in ring order.
    pub fn bits(&self) -> Vec<u8> {
        (0..self.n).map(|i| self.bit(i)).collect()
    }

    /// Fraction of cells in state 1.
    pub fn density(&self) -> f64 {
        self.code.count_ones() as f64 / self.n as f64
    }

    /// Number of cells in state 1.
    pub fn weight(&self) -> u32 {
        self.code.count_ones()
    }

    /// The neighborhood min term seen by cell `i`, with wraparound.
    pub fn rmt_at(&self, i: usize) -> Result<MinTerm> {
        if i >= self.n {
            return Err(Error::CellIndexOutOfRange { index: i, n: self.n });
        }
        let left = self.bit((i + self.n - 1) % self.n);
        let right = self.bit((i + 1) % self.n);
        Ok(MinTerm::from_bits(left, self.bit(i), right))
    }

    /// The word holding each cell's left neighbor in that cell's position.
    pub(crate) fn left_word(&self) -> u128 {
        // Cell i sits at bit n-1-i; its left neighbor sits one bit higher,
        // so shift right and wrap the old LSB to the top of the window.
        (self.code >> 1) | ((self.code & 1) << (self.n - 1))
    }

    /// Cellwise complement.
    pub fn complement(&self) -> Configuration {
        Configuration {
            n: self.n,
            code: !self.code & ring_mask(self.n),
        }
    }

    /// Left/right mirror image (cell i moves to n-1-i).
    pub fn mirror(&self) -> Configuration {
        let mut code = 0u128;
        for i in 0..self.n {
            code = (code << 1) | u128::from(self.bit(self.n - 1 - i));
        }
        Configuration { n: self.n, code }
    }

    /// Rotates the ring left by `k` cells (cell k becomes cell 0).
    pub fn rotate_left(&self, k: usize) -> Configuration {
        let k = k % self.n;
        if k == 0 {
            return *self;
        }
        let mask = ring_mask(self.n);
        let code = ((self.code << k) & mask) | (self.code >> (self.n - k));
        Configuration { n: self.n, code }
    }

    /// The maximal-run decomposition of the ring, starting from the first
    /// cell after the run that wraps past cell 0 (so runs never split).
    pub fn regions(&self) -> Vec<Region> {
        let first = self.bit(0);
        if (0..self.n).all(|i| self.bit(i) == first) {
            return vec![Region {
                state: first,
                start: 0,
                length: self.n,
            }];
        }
        // Walk back to the start of the run containing cell 0.
        let mut origin = 0usize;
        while self.bit((origin + self.n - 1) % self.n) == first {
            origin = (origin + self.n - 1) % self.n;
        }
        let mut regions = Vec::new();
        let mut start = origin;
        let mut state = first;
        let mut length = 0usize;
        for offset in 0..self.n {
            let i = (origin + offset) % self.n;
            let b = self.bit(i);
            if b == state {
                length += 1;
            } else {
                regions.push(Region {
                    state,
                    start,
                    length,
                });
                state = b;
                start = i;
                length = 1;
            }
        }
        regions.push(Region {
            state,
            start,
            length,
        });
        regions
    }

    /// Number of maximal 1-runs on the ring (0 for all-zero).
    pub fn one_run_count(&self) -> usize {
        if self.code == 0 {
            return 0;
        }
        if self.code == ring_mask(self.n) {
            return 1;
        }
        // A run starts wherever a 1 has a 0 to its left.
        let starts = self.code & !self.left_word();
        starts.count_ones() as usize
    }

    /// True when no update under `rule` can change any cell: every
    /// neighborhood on the ring is passive.
    pub fn is_point_attractor(&self, rule: EcaRule) -> bool {
        (0..self.n).all(|i| {
            let rmt = self
                .rmt_at(i)
                .expect("index bounded by ring size");
            !rule.is_active(rmt)
        })
    }

    /// Hamming distance to another configuration of the same ring size.
    pub fn hamming(&self, other: &Configuration) -> Result<u32> {
        if self.n != other.n {
            return Err(Error::SelectionSizeMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok((self.code ^ other.code).count_ones())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return Err(Error::BadConfigurationString(s.to_string())),
            }
        }
        if bits.is_empty() {
            return Err(Error::BadConfigurationString(s.to_string()));
        }
        Configuration::from_bits(&bits)
    }
}

/// Iterates all `2^n` configuration codes (requires `n <= 32` to stay sane;
/// callers enforce their own limits before enumerating).
pub fn all_codes(n: usize) -> impl Iterator<Item = u128> {
    let count: u128 = 1u128 << n;
    (0..count as u64).map(u128::from)
}
