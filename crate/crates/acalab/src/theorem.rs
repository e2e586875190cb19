//! Sufficient conditions, read off the rule table alone, for a ring under
//! the adjacent-pair update scheme to be drainable into a homogeneous fixed
//! point from every start, plus exact-graph validation of those claims.
//!
//! The test is sound but not complete: a `false` verdict never asserts
//! divergence. Soundness is cross-checked against exact reachability in this
//! module's tests and in the integration suite.

use serde::Serialize;

use crate::dynamics::classify_exact;
use crate::error::Result;
use crate::lattice::Configuration;
use crate::rule::{minimal_representatives, EcaRule, MinTerm};
use crate::scheme::UpdateScheme;

/// What the activity test concludes about one rule.
///
/// `zero_condition` / `one_condition` report which of the two condition
/// families fired (the first one, when both do).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConvergenceVerdict {
    pub rule: u8,
    pub to_zero: bool,
    pub to_one: bool,
    pub zero_condition: Option<u8>,
    pub one_condition: Option<u8>,
}

impl ConvergenceVerdict {
    /// True when the rule is claimed to drain to at least one homogeneous
    /// fixed point.
    pub fn claims_any(&self) -> bool {
        self.to_zero || self.to_one
    }

    /// The homogeneous configurations the verdict claims as reachable
    /// attractors, for ring size `n`.
    pub fn claimed_attractors(&self, n: usize) -> Result<Vec<Configuration>> {
        let mut out = Vec::new();
        if self.to_zero {
            out.push(Configuration::zeros(n)?);
        }
        if self.to_one {
            out.push(Configuration::ones(n)?);
        }
        Ok(out)
    }
}

/// Decides convergence claims from min-term activity.
///
/// Writing `A[i]` for "min term i is active" and `P[i]` for passive, the
/// all-0 direction holds when either family fires:
///
/// 1. `P0 & A2 & (P1 | P4)`, together with an escape clause that rules out
///    stalling on non-homogeneous fixed patterns: when `A7` any other
///    activity among 1/3/4/5/6 suffices, while under `P7` it takes
///    `A3 | A6 | ((A1 | A4) & A5)`.
/// 2. `P0 & A3 & A6 & (A1 | A2 | A4)`.
///
/// The all-1 direction is the exact 0/1 mirror (swap `i` with `7-i`), so the
/// two directions trade places under rule conjugation. The escape clauses
/// were pinned by exhaustive cross-validation against exact pair-update
/// reachability for all 256 rules at small rings; dropping any of them
/// either admits a rule with a foreign fixed point or loses a rule that
/// does drain.
pub fn convergence_verdict(rule: EcaRule) -> ConvergenceVerdict {
    let a = |i: u8| rule.is_active(MinTerm::new(i));
    let p = |i: u8| !a(i);

    let zero_escape = if a(7) {
        a(1) || a(3) || a(4) || a(5) || a(6)
    } else {
        a(3) || a(6) || ((a(1) || a(4)) && a(5))
    };
    let zero_family_1 = p(0) && a(2) && (p(1) || p(4)) && zero_escape;
    let zero_family_2 = p(0) && a(3) && a(6) && (a(1) || a(2) || a(4));

    let one_escape = if a(0) {
        a(6) || a(4) || a(3) || a(2) || a(1)
    } else {
        a(4) || a(1) || ((a(6) || a(3)) && a(2))
    };
    let one_family_1 = p(7) && a(5) && (p(6) || p(3)) && one_escape;
    let one_family_2 = p(7) && a(4) && a(1) && (a(6) || a(5) || a(3));

    let pick = |f1: bool, f2: bool| {
        if f1 {
            Some(1)
        } else if f2 {
            Some(2)
        } else {
            None
        }
    };
    ConvergenceVerdict {
        rule: rule.number(),
        to_zero: zero_family_1 || zero_family_2,
        to_one: one_family_1 || one_family_2,
        zero_condition: pick(zero_family_1, zero_family_2),
        one_condition: pick(one_family_1, one_family_2),
    }
}

/// Minimal-representative rules with a positive verdict, ascending.
pub fn survey_minimal() -> Vec<u8> {
    minimal_representatives()
        .into_iter()
        .filter(|&r| convergence_verdict(EcaRule::new(r)).claims_any())
        .collect()
}

/// Positive-verdict rules over the whole 256-rule space, ascending.
pub fn survey_all_rules() -> Vec<u8> {
    (0..=255u8)
        .filter(|&r| convergence_verdict(EcaRule::new(r)).claims_any())
        .collect()
}

/// Minimal representatives claimed to drain to both homogeneous fixed
/// points, ascending.
pub fn both_attractor_minimal() -> Vec<u8> {
    minimal_representatives()
        .into_iter()
        .filter(|&r| {
            let v = convergence_verdict(EcaRule::new(r));
            v.to_zero && v.to_one
        })
        .collect()
}

/// Exact-graph check of a verdict at one ring size.
#[derive(Debug, Clone, Serialize)]
pub struct RingCheck {
    pub n: usize,
    /// Every claimed homogeneous configuration is a fixed point.
    pub claimed_attractors_present: bool,
    /// All fixed points of the system at this size.
    pub attractor_count: usize,
    /// Configurations (as bit strings) from which no fixed point is
    /// reachable under pair updates. Empty on a sound claim.
    pub unreachable: Vec<String>,
    /// How many configurations can reach all-0 / all-1, when claimed.
    pub coverage_all_zero: Option<usize>,
    pub coverage_all_one: Option<usize>,
    pub passed: bool,
}

/// A verdict checked against exact pair-update reachability over a range of
/// ring sizes.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub rule: u8,
    /// False when the activity test makes no claim for this rule; no checks
    /// are run in that case.
    pub applicable: bool,
    pub verdict: ConvergenceVerdict,
    pub checks: Vec<RingCheck>,
}

impl ValidationReport {
    /// True when the verdict is applicable and every ring size checked out.
    pub fn sound(&self) -> bool {
        self.applicable && self.checks.iter().all(|c| c.passed)
    }
}

/// Validates a rule's convergence claim by exhaustive reachability at each
/// ring size in the range.
///
/// A counterexample is a configuration from which no fixed point at all can
/// be reached: such a configuration can never drain, whatever the claimed
/// target. Claimed homogeneous configurations must additionally be fixed
/// points, and when the claimed target is the only fixed point it must be
/// reachable from the full space.
pub fn validate_convergence(
    rule: EcaRule,
    n_range: std::ops::RangeInclusive<usize>,
) -> Result<ValidationReport> {
    let verdict = convergence_verdict(rule);
    if !verdict.claims_any() {
        return Ok(ValidationReport {
            rule: rule.number(),
            applicable: false,
            verdict,
            checks: Vec::new(),
        });
    }
    let mut checks = Vec::new();
    for n in n_range {
        let summary = classify_exact(rule, n, UpdateScheme::SkewAsync)?;
        let claimed = verdict.claimed_attractors(n)?;
        let claimed_attractors_present = claimed
            .iter()
            .all(|c| summary.point_attractors.contains(c));
        let attractor_comps = summary.attractor_components();
        let unreachable: Vec<String> = summary
            .codes_not_reaching(&attractor_comps)
            .into_iter()
            .map(|code| {
                Configuration::new(n, code)
                    .expect("code from this ring")
                    .to_string()
            })
            .collect();

        let coverage_of = |target: &Configuration| -> usize {
            let comp = summary.component_of[target.code() as usize];
            let reach = summary.components_reaching(&[comp]);
            summary
                .component_of
                .iter()
                .filter(|&&c| reach[c as usize])
                .count()
        };
        let zeros = Configuration::zeros(n)?;
        let ones = Configuration::ones(n)?;
        let coverage_all_zero = verdict.to_zero.then(|| coverage_of(&zeros));
        let coverage_all_one = verdict.to_one.then(|| coverage_of(&ones));

        let full_when_sole = if summary.point_attractors.len() == 1 && claimed.len() == 1 {
            let sole = coverage_all_zero.or(coverage_all_one).unwrap_or(0);
            sole == 1usize << n
        } else {
            true
        };
        let passed = claimed_attractors_present && unreachable.is_empty() && full_when_sole;
        checks.push(RingCheck {
            n,
            claimed_attractors_present,
            attractor_count: summary.point_attractors.len(),
            unreachable,
            coverage_all_zero,
            coverage_all_one,
            passed,
        });
    }
    Ok(ValidationReport {
        rule: rule.number(),
        applicable: true,
        verdict,
        checks,
    })
}
