//! Update schemes: which cells fire in a step, sampled or enumerated.
//!
//! Four schemes are supported:
//! - `Synchronous`: every cell updates each step.
//! - `FullyAsync`: one uniformly random cell updates.
//! - `AlphaAsync(a)`: each cell updates independently with probability `a`.
//! - `SkewAsync`: a uniformly random cell `i` is drawn and cells `i` and
//!   `i+1 (mod n)` update together, both reading the pre-step state. This is
//!   the one scheme here that lets two neighbors fire in the same step.
//!
//! Every step, under every scheme, applies the local rule to the *old*
//! configuration for all selected cells (simultaneous semantics), so a step
//! is fully described by (rule, configuration, selected-cell set).

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{ring_mask, Configuration};
use crate::rule::EcaRule;

/// Default ring-size cap for exact any-subset successor enumeration.
pub const DEFAULT_ALPHA_EXACT_LIMIT: usize = 12;

/// An update discipline. `alpha` is a probability strictly inside (0, 1);
/// the boundary values are rejected because they degenerate to "no dynamics"
/// and to the synchronous scheme respectively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpdateScheme {
    Synchronous,
    FullyAsync,
    AlphaAsync(f64),
    SkewAsync,
}

impl UpdateScheme {
    /// Validated constructor for the alpha scheme.
    pub fn alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(UpdateScheme::AlphaAsync(alpha))
    }

    /// Short lowercase name used in CLI I/O and file manifests.
    pub fn name(&self) -> &'static str {
        match self {
            UpdateScheme::Synchronous => "sync",
            UpdateScheme::FullyAsync => "fully",
            UpdateScheme::AlphaAsync(_) => "alpha",
            UpdateScheme::SkewAsync => "skew",
        }
    }

    /// Raw steps making up one normalized time step, chosen so that all
    /// schemes touch about `n` cells per normalized step: 1 sweep for
    /// synchronous and alpha, `n` single-cell updates for fully async,
    /// `ceil(n/2)` pair updates for skew.
    pub fn raw_steps_per_normalized(&self, n: usize) -> usize {
        match self {
            UpdateScheme::Synchronous | UpdateScheme::AlphaAsync(_) => 1,
            UpdateScheme::FullyAsync => n,
            UpdateScheme::SkewAsync => n.div_ceil(2),
        }
    }
}

impl fmt::Display for UpdateScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpdateScheme::AlphaAsync(a) => write!(f, "alpha({a})"),
            other => f.write_str(other.name()),
        }
    }
}

/// The set of cells updated in one step, as a bitmask in configuration
/// layout (cell 0 at the MSB of the low `n` bits).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    n: usize,
    mask: u128,
}

impl Selection {
    /// Every cell.
    pub fn all(n: usize) -> Selection {
        Selection {
            n,
            mask: ring_mask(n),
        }
    }

    /// No cell (legal for the alpha scheme).
    pub fn none(n: usize) -> Selection {
        Selection { n, mask: 0 }
    }

    /// The single cell `i`.
    pub fn single(n: usize, i: usize) -> Selection {
        debug_assert!(i < n);
        Selection {
            n,
            mask: 1u128 << (n - 1 - i),
        }
    }

    /// The adjacent pair `{i, i+1 mod n}`.
    pub fn pair(n: usize, i: usize) -> Selection {
        let first = Selection::single(n, i);
        let second = Selection::single(n, (i + 1) % n);
        Selection {
            n,
            mask: first.mask | second.mask,
        }
    }

    /// An arbitrary cell set from explicit indices.
    pub fn from_cells(n: usize, cells: &[usize]) -> Selection {
        let mut mask = 0u128;
        for &i in cells {
            debug_assert!(i < n);
            mask |= 1u128 << (n - 1 - i);
        }
        Selection { n, mask }
    }

    pub(crate) fn from_mask(n: usize, mask: u128) -> Selection {
        Selection { n, mask }
    }

    /// Ring size this selection belongs to.
    pub fn ring_size(&self) -> usize {
        self.n
    }

    /// Number of selected cells.
    pub fn count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Selected cell indices in ring order.
    pub fn cells(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.mask >> (self.n - 1 - i) & 1 == 1)
            .collect()
    }

    pub(crate) fn mask(&self) -> u128 {
        self.mask
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.cells().iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", cells.join(","))
    }
}

/// The fully synchronous image of `x`: every cell's next state at once.
///
/// Evaluated word-parallel: the three neighbor words are combined through
/// the rule's truth table, one AND/OR term per min term, so a step costs a
/// handful of word operations regardless of ring size.
pub fn sync_image(rule: EcaRule, x: &Configuration) -> Configuration {
    let code = image_code(rule, x.len(), x.code());
    Configuration::new(x.len(), code).expect("image stays inside the ring mask")
}

/// [`sync_image`] on a bare code, for graph loops that stay in code space.
pub(crate) fn image_code(rule: EcaRule, n: usize, code: u128) -> u128 {
    let mask = ring_mask(n);
    let left = (code >> 1) | ((code & 1) << (n - 1));
    let right = ((code << 1) & mask) | (code >> (n - 1));
    let mut image = 0u128;
    for rmt in 0..8u8 {
        if rule.number() >> rmt & 1 == 0 {
            continue;
        }
        let l_term = if rmt & 4 != 0 { left } else { !left };
        let c_term = if rmt & 2 != 0 { code } else { !code };
        let r_term = if rmt & 1 != 0 { right } else { !right };
        image |= l_term & c_term & r_term;
    }
    image & mask
}

/// Applies one step: selected cells take their synchronous-image value, the
/// rest are copied unchanged.
pub fn step(rule: EcaRule, x: &Configuration, sel: &Selection) -> Result<Configuration> {
    if sel.ring_size() != x.len() {
        return Err(Error::SelectionSizeMismatch {
            expected: x.len(),
            got: sel.ring_size(),
        });
    }
    let image = sync_image(rule, x);
    let code = (x.code() & !sel.mask()) | (image.code() & sel.mask());
    Configuration::new(x.len(), code)
}

/// Draws one selection according to the scheme.
pub fn sample_selection<R: Rng + ?Sized>(
    scheme: UpdateScheme,
    n: usize,
    rng: &mut R,
) -> Selection {
    match scheme {
        UpdateScheme::Synchronous => Selection::all(n),
        UpdateScheme::FullyAsync => Selection::single(n, rng.gen_range(0..n)),
        UpdateScheme::SkewAsync => Selection::pair(n, rng.gen_range(0..n)),
        UpdateScheme::AlphaAsync(alpha) => {
            let mut mask = 0u128;
            for i in 0..n {
                if rng.gen_bool(alpha) {
                    mask |= 1u128 << (n - 1 - i);
                }
            }
            Selection::from_mask(n, mask)
        }
    }
}

/// Exact one-step successor set (deduplicated, ascending by code).
///
/// For the alpha scheme this is the any-subset relation: since each cell
/// flips independently, the reachable set in one step is `{x ^ s}` over all
/// submasks `s` of the cells the synchronous image would change. It is the
/// same set for every alpha in (0, 1), and it includes `x` itself through the
/// empty selection. Ring size is capped (`DEFAULT_ALPHA_EXACT_LIMIT`,
/// adjustable via [`successors_with_limit`]) because the set can reach `2^n`.
pub fn successors(
    rule: EcaRule,
    x: &Configuration,
    scheme: UpdateScheme,
) -> Result<Vec<Configuration>> {
    successors_with_limit(rule, x, scheme, DEFAULT_ALPHA_EXACT_LIMIT)
}

/// [`successors`] with an explicit alpha enumeration cap.
pub fn successors_with_limit(
    rule: EcaRule,
    x: &Configuration,
    scheme: UpdateScheme,
    alpha_limit: usize,
) -> Result<Vec<Configuration>> {
    let n = x.len();
    let mut out: Vec<u128> = match scheme {
        UpdateScheme::Synchronous => vec![sync_image(rule, x).code()],
        UpdateScheme::FullyAsync => (0..n)
            .map(|i| step(rule, x, &Selection::single(n, i)).map(|c| c.code()))
            .collect::<Result<_>>()?,
        UpdateScheme::SkewAsync => (0..n)
            .map(|i| step(rule, x, &Selection::pair(n, i)).map(|c| c.code()))
            .collect::<Result<_>>()?,
        UpdateScheme::AlphaAsync(_) => {
            if n > alpha_limit {
                return Err(Error::ExactLimitExceeded {
                    n,
                    limit: alpha_limit,
                    what: "any-subset successor enumeration",
                });
            }
            let image = sync_image(rule, x).code();
            let diff = x.code() ^ image;
            let mut subs = Vec::with_capacity(1 << diff.count_ones());
            // Standard submask walk: s runs over every submask of diff.
            let mut s = diff;
            loop {
                subs.push(x.code() ^ s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & diff;
            }
            subs
        }
    };
    out.sort_unstable();
    out.dedup();
    out.into_iter()
        .map(|code| Configuration::new(n, code))
        .collect()
}

/// A replayable stochastic run: the seed, every configuration visited, and
/// every selection drawn (so `configurations[t+1]` is always the step of
/// `configurations[t]` under `selections[t]`).
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub seed: u64,
    pub configurations: Vec<Configuration>,
    pub selections: Vec<Selection>,
}

impl TrajectoryRecord {
    /// Number of raw steps taken.
    pub fn steps(&self) -> usize {
        self.selections.len()
    }
}

/// Runs `raw_steps` sampled steps from `x0`, deterministically under `seed`.
pub fn trajectory(
    rule: EcaRule,
    x0: &Configuration,
    scheme: UpdateScheme,
    raw_steps: usize,
    seed: u64,
) -> TrajectoryRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut configurations = Vec::with_capacity(raw_steps + 1);
    let mut selections = Vec::with_capacity(raw_steps);
    configurations.push(*x0);
    let mut current = *x0;
    for _ in 0..raw_steps {
        let sel = sample_selection(scheme, current.len(), &mut rng);
        current = step(rule, &current, &sel).expect("selection built for this ring size");
        selections.push(sel);
        configurations.push(current);
    }
    TrajectoryRecord {
        seed,
        configurations,
        selections,
    }
}

/// Draws a random configuration with each cell Bernoulli(`d_ini`).
pub fn random_configuration<R: Rng + ?Sized>(
    n: usize,
    d_ini: f64,
    rng: &mut R,
) -> Result<Configuration> {
    if !(0.0..=1.0).contains(&d_ini) {
        return Err(Error::DensityOutOfRange(d_ini));
    }
    let mut mask = 0u128;
    for i in 0..n {
        if rng.gen_bool(d_ini) {
            mask |= 1u128 << (n - 1 - i);
        }
    }
    Configuration::new(n, mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        s.parse().expect("valid test configuration")
    }

    #[test]
    fn alpha_constructor_rejects_degenerate_probabilities() {
        assert!(UpdateScheme::alpha(0.0).is_err());
        assert!(UpdateScheme::alpha(1.0).is_err());
        assert!(UpdateScheme::alpha(-0.2).is_err());
        assert!(UpdateScheme::alpha(0.5).is_ok());
    }

    #[test]
    fn sync_image_matches_cellwise_evaluation() {
        for rule_number in [30u8, 90, 110, 142, 204] {
            let rule = EcaRule::new(rule_number);
            for code in 0..64u128 {
                let x = Configuration::new(6, code).unwrap();
                let image = sync_image(rule, &x);
                for i in 0..6 {
                    let l = x.bit((i + 5) % 6);
                    let r = x.bit((i + 1) % 6);
                    assert_eq!(image.bit(i), rule.apply(l, x.bit(i), r));
                }
            }
        }
    }

    #[test]
    fn worked_single_step_rows() {
        // Rule 90, cells {0,1} firing on 11001.
        let x = cfg("11001");
        let next = step(EcaRule::new(90), &x, &Selection::from_cells(5, &[0, 1])).unwrap();
        assert_eq!(next, cfg("01001"));

        // The identity rule never moves.
        assert_eq!(
            step(EcaRule::new(204), &x, &Selection::all(5)).unwrap(),
            x
        );

        // The null rule zeroes exactly the selected cells.
        assert_eq!(
            step(EcaRule::new(0), &cfg("1111"), &Selection::from_cells(4, &[1, 2])).unwrap(),
            cfg("1001")
        );
    }

    #[test]
    fn step_rejects_mismatched_selection() {
        let x = cfg("1010");
        assert!(step(EcaRule::new(90), &x, &Selection::all(5)).is_err());
    }

    #[test]
    fn skew_selection_is_always_an_adjacent_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let sel = sample_selection(UpdateScheme::SkewAsync, 5, &mut rng);
            let cells = sel.cells();
            assert_eq!(cells.len(), 2);
            let adjacent = (cells[1] == cells[0] + 1) || (cells[0] == 0 && cells[1] == 4);
            assert!(adjacent, "cells {cells:?} are not an adjacent ring pair");
        }
    }

    #[test]
    fn fully_async_sampling_is_roughly_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 5;
        let samples = 100_000;
        let mut counts = vec![0u32; n];
        for _ in 0..samples {
            let sel = sample_selection(UpdateScheme::FullyAsync, n, &mut rng);
            counts[sel.cells()[0]] += 1;
        }
        for &c in &counts {
            let freq = f64::from(c) / samples as f64;
            assert!((freq - 0.2).abs() < 0.01, "cell frequency {freq}");
        }
    }

    #[test]
    fn successor_sets_match_hand_enumeration() {
        // Rule 30 from 0001 under single-cell updates.
        let got = successors(EcaRule::new(30), &cfg("0001"), UpdateScheme::FullyAsync).unwrap();
        let want: Vec<Configuration> = ["0001", "0011", "1001"]
            .iter()
            .map(|s| cfg(s))
            .collect();
        assert_eq!(got, want);

        // A point attractor has itself as sole successor under every scheme.
        let fixed = cfg("1010");
        for scheme in [
            UpdateScheme::Synchronous,
            UpdateScheme::FullyAsync,
            UpdateScheme::SkewAsync,
            UpdateScheme::AlphaAsync(0.5),
        ] {
            let got = successors(EcaRule::new(142), &fixed, scheme).unwrap();
            assert_eq!(got, vec![fixed], "scheme {scheme}");
        }
    }

    #[test]
    fn alpha_successors_are_the_any_subset_relation() {
        let x = cfg("11001");
        let rule = EcaRule::new(90);
        let got = successors(rule, &x, UpdateScheme::AlphaAsync(0.5)).unwrap();
        // Contains x (empty selection), all single-cell updates, and the
        // synchronous image.
        assert!(got.contains(&x));
        assert!(got.contains(&sync_image(rule, &x)));
        for single in successors(rule, &x, UpdateScheme::FullyAsync).unwrap() {
            assert!(got.contains(&single));
        }
        // Three cells want to change, so the set has one entry per flip
        // subset; the two-cell update {0,1} lands on 01001 (cell 1 keeps
        // its value, cell 0 flips).
        assert_eq!(got.len(), 8);
        assert!(got.contains(&cfg("01001")));
    }

    #[test]
    fn alpha_enumeration_refuses_oversized_rings() {
        let x = Configuration::zeros(13).unwrap();
        let err = successors(EcaRule::new(90), &x, UpdateScheme::AlphaAsync(0.5));
        assert!(matches!(
            err,
            Err(Error::ExactLimitExceeded { n: 13, limit: 12, .. })
        ));
        assert!(successors_with_limit(EcaRule::new(90), &x, UpdateScheme::AlphaAsync(0.5), 13)
            .is_ok());
    }

    #[test]
    fn trajectory_replays_deterministically() {
        let x0 = cfg("1100110011");
        let a = trajectory(EcaRule::new(30), &x0, UpdateScheme::FullyAsync, 50, 99);
        let b = trajectory(EcaRule::new(30), &x0, UpdateScheme::FullyAsync, 50, 99);
        assert_eq!(a.configurations, b.configurations);
        assert_eq!(a.selections.len(), 50);
        // The record is internally consistent.
        for t in 0..a.steps() {
            let replayed =
                step(EcaRule::new(30), &a.configurations[t], &a.selections[t]).unwrap();
            assert_eq!(replayed, a.configurations[t + 1]);
        }

        // Zero steps returns just the start; the identity rule never moves.
        let empty = trajectory(EcaRule::new(30), &x0, UpdateScheme::SkewAsync, 0, 1);
        assert_eq!(empty.configurations, vec![x0]);
        let constant = trajectory(EcaRule::new(204), &x0, UpdateScheme::SkewAsync, 20, 1);
        assert!(constant.configurations.iter().all(|c| *c == x0));
    }

    #[test]
    fn normalized_step_sizes() {
        assert_eq!(UpdateScheme::Synchronous.raw_steps_per_normalized(9), 1);
        assert_eq!(UpdateScheme::FullyAsync.raw_steps_per_normalized(9), 9);
        assert_eq!(UpdateScheme::SkewAsync.raw_steps_per_normalized(9), 5);
        assert_eq!(UpdateScheme::SkewAsync.raw_steps_per_normalized(8), 4);
        assert_eq!(UpdateScheme::AlphaAsync(0.3).raw_steps_per_normalized(9), 1);
    }
}
