//! Elementary cellular automaton rules.
//!
//! A rule is an 8-entry lookup table over three-cell neighborhoods,
//! identified by its Wolfram number: bit `r` of the number is the output for
//! neighborhood `r = 4x + 2y + z`, so the most significant bit answers
//! `(1,1,1)` and the least significant `(0,0,0)`.
//!
//! Each neighborhood index is a "min term". A min term is *active* when the
//! rule changes the center cell, *passive* when it leaves it alone; activity
//! is what drives every reachability argument in this crate.
//!
//! Two table transforms, left/right reflection and 0/1 conjugation,
//! partition the 256 rules into orbits of up to four members. The least
//! member of each orbit is its minimal representative; there are exactly 88.

use std::fmt;
use std::sync::OnceLock;

/// A neighborhood index in 0..8, encoding `(x, y, z)` as `4x + 2y + z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinTerm(u8);

impl MinTerm {
    /// Builds a min term from an index in 0..8.
    ///
    /// # Panics
    /// Panics if `value >= 8`; min terms come from 3-bit neighborhoods only.
    pub fn new(value: u8) -> Self {
        assert!(value < 8, "min term index must be 0..8, got {value}");
        MinTerm(value)
    }

    /// Builds a min term from an explicit `(left, center, right)` triple.
    pub fn from_bits(left: u8, center: u8, right: u8) -> Self {
        MinTerm::new(4 * (left & 1) + 2 * (center & 1) + (right & 1))
    }

    /// The raw index in 0..8.
    pub fn index(self) -> u8 {
        self.0
    }

    /// The center bit `y` of the neighborhood.
    pub fn center(self) -> u8 {
        (self.0 >> 1) & 1
    }

    /// All eight min terms in ascending order.
    pub fn all() -> impl Iterator<Item = MinTerm> {
        (0..8).map(MinTerm)
    }
}

impl fmt::Display for MinTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An elementary CA rule, wrapping its Wolfram number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EcaRule(u8);

impl EcaRule {
    /// Wraps a Wolfram number. All 256 values are valid rules.
    pub fn new(number: u8) -> Self {
        EcaRule(number)
    }

    /// The Wolfram number.
    pub fn number(self) -> u8 {
        self.0
    }

    /// Output bit for min term `rmt` (bit `rmt` of the number).
    pub fn output(self, rmt: MinTerm) -> u8 {
        (self.0 >> rmt.index()) & 1
    }

    /// Applies the local rule to an explicit neighborhood.
    pub fn apply(self, left: u8, center: u8, right: u8) -> u8 {
        self.output(MinTerm::from_bits(left, center, right))
    }

    /// True when the rule changes the center cell of `rmt`.
    pub fn is_active(self, rmt: MinTerm) -> bool {
        self.output(rmt) != rmt.center()
    }

    /// Bitmask over min-term indices with bit `r` set iff min term `r` is active.
    pub fn active_mask(self) -> u8 {
        // The center bit of min term r is bit 1 of r, so XOR against the
        // pattern of center bits (0b11001100: terms 2,3,6,7 have center 1).
        self.0 ^ 0b1100_1100
    }

    /// The left/right mirror image: `g(x,y,z) = f(z,y,x)`.
    pub fn reflect(self) -> EcaRule {
        let mut out = 0u8;
        for r in 0..8u8 {
            let (x, y, z) = (r >> 2 & 1, r >> 1 & 1, r & 1);
            let mirrored = 4 * z + 2 * y + x;
            out |= ((self.0 >> mirrored) & 1) << r;
        }
        EcaRule(out)
    }

    /// The 0/1 complement: `g(x,y,z) = 1 - f(1-x, 1-y, 1-z)`.
    pub fn conjugate(self) -> EcaRule {
        let mut out = 0u8;
        for r in 0..8u8 {
            out |= (1 - ((self.0 >> (7 - r)) & 1)) << r;
        }
        EcaRule(out)
    }

    /// The orbit under reflection and conjugation, sorted ascending.
    pub fn orbit(self) -> Vec<u8> {
        let mut members = vec![
            self.0,
            self.reflect().0,
            self.conjugate().0,
            self.reflect().conjugate().0,
        ];
        members.sort_unstable();
        members.dedup();
        members
    }

    /// The least-numbered member of this rule's orbit.
    pub fn minimal_representative(self) -> EcaRule {
        EcaRule(representative_table()[self.0 as usize])
    }

    /// True when this rule is the minimal representative of its orbit.
    pub fn is_minimal_representative(self) -> bool {
        self.minimal_representative() == self
    }
}

impl fmt::Display for EcaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Representative lookup for all 256 rules, built once on first use.
fn representative_table() -> &'static [u8; 256] {
    static TABLE: OnceLock<[u8; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0u8; 256];
        for n in 0..=255u8 {
            let rule = EcaRule(n);
            table[n as usize] = *rule.orbit().first().expect("orbit is non-empty");
        }
        table
    })
}

/// The 88 minimal representative rule numbers, ascending.
pub fn minimal_representatives() -> Vec<u8> {
    let mut reps: Vec<u8> = representative_table().to_vec();
    reps.sort_unstable();
    reps.dedup();
    reps
}
