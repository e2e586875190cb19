//! Exact dynamics over the full configuration space, plus an empirical
//! fallback for rings too large to enumerate.
//!
//! The transition graph has one node per configuration code and one edge per
//! reachable one-step successor under the chosen scheme. Nothing is
//! materialized except per-node bookkeeping: successors are regenerated on
//! demand from (rule, code), so memory stays at a few words per node even at
//! the largest supported rings. Strongly connected components come from an
//! iterative Tarjan pass; all dynamics labels derive from the condensation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{all_codes, Configuration};
use crate::rule::{minimal_representatives, EcaRule};
use crate::scheme::{
    image_code, random_configuration, sample_selection, step, sync_image, UpdateScheme,
    DEFAULT_ALPHA_EXACT_LIMIT,
};

/// Largest ring enumerated exactly for the single-image and bounded-degree
/// schemes. The any-subset scheme has its own tighter default cap.
pub const MAX_EXACT_RING: usize = 24;

const UNVISITED: u32 = u32::MAX;

/// On-demand successor generation for one (rule, n, scheme) system.
struct SuccessorGen {
    rule: EcaRule,
    n: usize,
    scheme: UpdateScheme,
}

impl SuccessorGen {
    /// Out-degree of `code`, counting duplicate targets separately.
    fn degree(&self, code: u128) -> u32 {
        match self.scheme {
            UpdateScheme::Synchronous => 1,
            UpdateScheme::FullyAsync | UpdateScheme::SkewAsync => self.n as u32,
            UpdateScheme::AlphaAsync(_) => {
                let diff = code ^ image_code(self.rule, self.n, code);
                1u32 << diff.count_ones()
            }
        }
    }

    /// The `i`-th successor of `code`, `i < degree(code)`.
    fn at(&self, code: u128, i: u32) -> u128 {
        let image = image_code(self.rule, self.n, code);
        match self.scheme {
            UpdateScheme::Synchronous => image,
            UpdateScheme::FullyAsync => {
                let bit = 1u128 << i;
                (code & !bit) | (image & bit)
            }
            UpdateScheme::SkewAsync => {
                let pair = (1u128 << i) | (1u128 << ((i as usize + 1) % self.n));
                (code & !pair) | (image & pair)
            }
            UpdateScheme::AlphaAsync(_) => {
                // Spread the bits of i across the set bit positions of the
                // image difference; each spread pattern is one selection
                // outcome that actually changes something (plus i = 0 for
                // the no-change outcomes).
                let mut diff = code ^ image;
                let mut selector = i;
                let mut flips = 0u128;
                while diff != 0 {
                    let low = diff & diff.wrapping_neg();
                    if selector & 1 == 1 {
                        flips |= low;
                    }
                    selector >>= 1;
                    diff &= diff - 1;
                }
                code ^ flips
            }
        }
    }
}

fn check_ring_budget(n: usize, scheme: UpdateScheme, alpha_limit: usize) -> Result<()> {
    let limit = match scheme {
        UpdateScheme::AlphaAsync(_) => alpha_limit.min(MAX_EXACT_RING),
        _ => MAX_EXACT_RING,
    };
    if n > limit {
        return Err(Error::ExactLimitExceeded {
            n,
            limit,
            what: "exact transition graph",
        });
    }
    Ok(())
}

/// Whether a system can reach every behaviour the labels describe.
///
/// `convergent` and `recurrent` are independent bits: the identity rule is
/// both (every configuration is a fixed point), chaotic reversible rules are
/// recurrent only, and rules with a non-singleton absorbing cycle are
/// neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DynamicsClass {
    pub convergent: bool,
    pub recurrent: bool,
}

impl DynamicsClass {
    /// Human-readable label, also used in CSV/JSON artifacts.
    pub fn label(&self) -> &'static str {
        match (self.convergent, self.recurrent) {
            (true, true) => "Convergent+Recurrent",
            (true, false) => "Convergent",
            (false, true) => "Recurrent",
            (false, false) => "NC-NR",
        }
    }
}

impl std::fmt::Display for DynamicsClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One strongly connected component of the transition graph.
#[derive(Debug, Clone)]
pub struct ComponentInfo {
    pub size: usize,
    /// No edge leaves the component; member configurations are recurrent.
    pub closed: bool,
    pub min_code: u128,
}

/// A closed component: a set of configurations that communicate with each
/// other and lead nowhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommClass {
    /// Member codes, ascending.
    pub members: Vec<u128>,
}

impl CommClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Full exact analysis of one (rule, n, scheme) system.
#[derive(Debug, Clone)]
pub struct TransitionSummary {
    pub rule: EcaRule,
    pub n: usize,
    pub scheme: UpdateScheme,
    /// Component id per configuration code. Ids are assigned in reverse
    /// topological order: every cross-component edge points from a higher id
    /// to a lower one.
    pub component_of: Vec<u32>,
    pub components: Vec<ComponentInfo>,
    /// Configurations fixed under every selection, ascending by code.
    pub point_attractors: Vec<Configuration>,
    pub class: DynamicsClass,
}

impl TransitionSummary {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Closed components as explicit member lists, largest first, ties by
    /// smallest member code.
    pub fn communication_classes(&self) -> Vec<CommClass> {
        let mut buckets: Vec<Vec<u128>> = vec![Vec::new(); self.components.len()];
        for (code, &comp) in self.component_of.iter().enumerate() {
            buckets[comp as usize].push(code as u128);
        }
        let mut classes: Vec<CommClass> = buckets
            .into_iter()
            .enumerate()
            .filter(|(id, _)| self.components[*id].closed)
            .map(|(_, members)| CommClass { members })
            .collect();
        classes.sort_by(|a, b| {
            b.size()
                .cmp(&a.size())
                .then(a.members[0].cmp(&b.members[0]))
        });
        classes
    }

    /// Component ids holding a point attractor.
    pub fn attractor_components(&self) -> Vec<u32> {
        self.point_attractors
            .iter()
            .map(|c| self.component_of[c.code() as usize])
            .collect()
    }

    /// For each component, whether any target component is reachable from it
    /// (including being one). Walks the condensation once, exploiting the
    /// reverse-topological component ids.
    pub fn components_reaching(&self, targets: &[u32]) -> Vec<bool> {
        let mut reach = vec![false; self.components.len()];
        for &t in targets {
            reach[t as usize] = true;
        }
        // Counting-sort codes by component id so components are processed in
        // ascending id order; all cross-component edges then point at
        // components whose reach value is already final.
        let mut start: Vec<u32> = Vec::with_capacity(self.components.len() + 1);
        start.push(0);
        for info in &self.components {
            let prev = *start.last().expect("nonempty prefix sums");
            start.push(prev + info.size as u32);
        }
        let mut order: Vec<u32> = vec![0; self.component_of.len()];
        let mut cursor = start.clone();
        for (code, &comp) in self.component_of.iter().enumerate() {
            order[cursor[comp as usize] as usize] = code as u32;
            cursor[comp as usize] += 1;
        }
        let gen = SuccessorGen {
            rule: self.rule,
            n: self.n,
            scheme: self.scheme,
        };
        for &code in &order {
            let comp = self.component_of[code as usize] as usize;
            if reach[comp] {
                continue;
            }
            let code = code as u128;
            for i in 0..gen.degree(code) {
                let next_comp = self.component_of[gen.at(code, i) as usize] as usize;
                if next_comp != comp && reach[next_comp] {
                    reach[comp] = true;
                    break;
                }
            }
        }
        reach
    }

    /// Configurations from which none of the target components can be
    /// reached, ascending by code.
    pub fn codes_not_reaching(&self, targets: &[u32]) -> Vec<u128> {
        let reach = self.components_reaching(targets);
        self.component_of
            .iter()
            .enumerate()
            .filter(|(_, &comp)| !reach[comp as usize])
            .map(|(code, _)| code as u128)
            .collect()
    }

    /// Whether the configuration with this code sits in a closed component.
    pub fn is_recurrent_code(&self, code: u128) -> bool {
        self.components[self.component_of[code as usize] as usize].closed
    }
}

/// Exact classification with the default any-subset enumeration cap.
pub fn classify_exact(rule: EcaRule, n: usize, scheme: UpdateScheme) -> Result<TransitionSummary> {
    classify_exact_with_limit(rule, n, scheme, DEFAULT_ALPHA_EXACT_LIMIT)
}

/// Exact classification, with the cap for the any-subset scheme adjustable.
pub fn classify_exact_with_limit(
    rule: EcaRule,
    n: usize,
    scheme: UpdateScheme,
    alpha_limit: usize,
) -> Result<TransitionSummary> {
    Configuration::zeros(n)?;
    check_ring_budget(n, scheme, alpha_limit)?;
    let gen = SuccessorGen { rule, n, scheme };
    let total: usize = 1usize << n;

    // Iterative Tarjan. Frames are (node, next child index); lowlink updates
    // that textbook recursion performs on return are done when a frame pops.
    let mut index = vec![UNVISITED; total];
    let mut lowlink = vec![0u32; total];
    let mut component_of = vec![UNVISITED; total];
    let mut on_stack = vec![false; total];
    let mut tarjan_stack: Vec<u32> = Vec::new();
    let mut frames: Vec<(u32, u32)> = Vec::new();
    let mut next_index = 0u32;
    let mut components: Vec<ComponentInfo> = Vec::new();

    for root in 0..total {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        tarjan_stack.push(root as u32);
        on_stack[root] = true;
        frames.push((root as u32, 0));

        while let Some(top) = frames.last_mut() {
            let v = top.0 as usize;
            let child = top.1;
            if child < gen.degree(v as u128) {
                top.1 += 1;
                let w = gen.at(v as u128, child) as usize;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    tarjan_stack.push(w as u32);
                    on_stack[w] = true;
                    frames.push((w as u32, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(parent) = frames.last() {
                    let parent = parent.0 as usize;
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    let id = components.len() as u32;
                    let mut size = 0usize;
                    let mut min_code = v as u128;
                    loop {
                        let w = tarjan_stack.pop().expect("root still on stack") as usize;
                        on_stack[w] = false;
                        component_of[w] = id;
                        size += 1;
                        min_code = min_code.min(w as u128);
                        if w == v {
                            break;
                        }
                    }
                    components.push(ComponentInfo {
                        size,
                        closed: true,
                        min_code,
                    });
                }
            }
        }
    }

    // A component is closed until some edge is seen leaving it.
    for code in all_codes(n) {
        let comp = component_of[code as usize];
        if !components[comp as usize].closed {
            continue;
        }
        for i in 0..gen.degree(code) {
            if component_of[gen.at(code, i) as usize] != comp {
                components[comp as usize].closed = false;
                break;
            }
        }
    }

    let point_attractors: Vec<Configuration> = all_codes(n)
        .filter(|&code| image_code(rule, n, code) == code)
        .map(|code| Configuration::new(n, code).expect("enumerated code is in range"))
        .collect();

    let attractor_comp: Vec<bool> = {
        let mut flags = vec![false; components.len()];
        for c in &point_attractors {
            flags[component_of[c.code() as usize] as usize] = true;
        }
        flags
    };
    let convergent = components
        .iter()
        .zip(&attractor_comp)
        .all(|(info, &is_attractor)| !info.closed || (is_attractor && info.size == 1));
    let recurrent = components.iter().all(|info| info.closed);

    Ok(TransitionSummary {
        rule,
        n,
        scheme,
        component_of,
        components,
        point_attractors,
        class: DynamicsClass {
            convergent,
            recurrent,
        },
    })
}

/// Closed components of the system plus whether every component is closed.
#[derive(Debug, Clone)]
pub struct CommClassReport {
    pub rule: EcaRule,
    pub n: usize,
    pub scheme: UpdateScheme,
    /// True when the whole space is recurrent, i.e. the classes partition it.
    pub recurrent: bool,
    pub classes: Vec<CommClass>,
}

/// Extracts the closed components, largest first.
pub fn communication_classes(
    rule: EcaRule,
    n: usize,
    scheme: UpdateScheme,
) -> Result<CommClassReport> {
    let summary = classify_exact(rule, n, scheme)?;
    Ok(CommClassReport {
        rule,
        n,
        scheme,
        recurrent: summary.class.recurrent,
        classes: summary.communication_classes(),
    })
}

/// How one sampled trial ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrialOutcome {
    /// Landed on a configuration fixed under every selection.
    Converged { attractor: String, cell_updates: u64 },
    /// Never converged within the budget, but revisited the start at least
    /// once; `cell_updates` is the cost of the first revisit. A recurrence
    /// witness, not a proof.
    ReturnedToStart { cell_updates: u64 },
    BudgetExhausted,
}

/// One trial: outcome plus the density after each normalized step.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub outcome: TrialOutcome,
    pub densities: Vec<f64>,
}

/// Aggregate of sampled trials for one system.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalReport {
    pub rule: u8,
    pub n: usize,
    pub scheme: String,
    pub trials: Vec<TrialRecord>,
    pub converged_fraction: f64,
    /// Observed label; never a proof. "Convergent (observed)" when every
    /// trial converged, "Recurrent (observed)" when none converged but some
    /// returned to start, otherwise "Inconclusive".
    pub observed_label: String,
}

/// Samples `trials` runs from Bernoulli(`d_ini`) starts and reports how each
/// ended within a budget of `max_updates` individual cell updates.
///
/// Each trial draws from an independent, seed-derived random stream, so the
/// report is reproducible and trials are order-independent.
pub fn classify_empirical(
    rule: EcaRule,
    n: usize,
    scheme: UpdateScheme,
    trials: usize,
    max_updates: u64,
    d_ini: f64,
    seed: u64,
) -> Result<EmpiricalReport> {
    if trials == 0 {
        return Err(Error::EmptyDataset("zero trials requested".into()));
    }
    Configuration::zeros(n)?;
    if let UpdateScheme::AlphaAsync(a) = scheme {
        UpdateScheme::alpha(a)?;
    }
    let mut records = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let start = random_configuration(n, d_ini, &mut rng)?;
        let mut current = start;
        let mut used: u64 = 0;
        let mut densities = vec![current.density()];
        let mut until_sample: usize = 0;
        let per_normalized = scheme.raw_steps_per_normalized(n);
        let mut first_revisit: Option<u64> = None;
        let outcome = loop {
            if sync_image(rule, &current) == current {
                break TrialOutcome::Converged {
                    attractor: current.to_string(),
                    cell_updates: used,
                };
            }
            if first_revisit.is_none() && used > 0 && current == start {
                first_revisit = Some(used);
            }
            if used >= max_updates {
                break match first_revisit {
                    Some(cell_updates) => TrialOutcome::ReturnedToStart { cell_updates },
                    None => TrialOutcome::BudgetExhausted,
                };
            }
            let sel = sample_selection(scheme, n, &mut rng);
            used += sel.count() as u64;
            current = step(rule, &current, &sel).expect("selection drawn for this ring");
            until_sample += 1;
            if until_sample == per_normalized {
                densities.push(current.density());
                until_sample = 0;
            }
        };
        records.push(TrialRecord { outcome, densities });
    }
    let converged = records
        .iter()
        .filter(|r| matches!(r.outcome, TrialOutcome::Converged { .. }))
        .count();
    let returned = records
        .iter()
        .filter(|r| matches!(r.outcome, TrialOutcome::ReturnedToStart { .. }))
        .count();
    let observed_label = if converged == trials {
        "Convergent (observed)".to_string()
    } else if converged == 0 && returned > 0 {
        "Recurrent (observed)".to_string()
    } else {
        "Inconclusive".to_string()
    };
    Ok(EmpiricalReport {
        rule: rule.number(),
        n,
        scheme: scheme.name().to_string(),
        converged_fraction: converged as f64 / trials as f64,
        trials: records,
        observed_label,
    })
}

/// How [`scan_minimal`] evaluates each (rule, n) cell.
#[derive(Debug, Clone, Copy)]
pub enum ScanMode {
    Exact,
    Empirical {
        trials: usize,
        max_updates: u64,
        d_ini: f64,
        seed: u64,
    },
}

/// One row of a classification scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub rule: u8,
    pub n: usize,
    pub scheme: String,
    pub class: String,
    pub num_point_attractors: Option<usize>,
    pub num_closed_classes: Option<usize>,
}

/// Classifies every minimal-representative rule over a ring-size range.
/// Rows come back sorted by (rule, n). Exact cells are proven labels;
/// empirical cells carry observed labels only.
pub fn scan_minimal(
    scheme: UpdateScheme,
    n_range: std::ops::RangeInclusive<usize>,
    mode: ScanMode,
) -> Result<Vec<ScanRow>> {
    use rayon::prelude::*;

    let cells: Vec<(u8, usize)> = minimal_representatives()
        .into_iter()
        .flat_map(|rule| n_range.clone().map(move |n| (rule, n)))
        .collect();
    let mut rows = cells
        .into_par_iter()
        .map(|(rule_number, n)| {
            let rule = EcaRule::new(rule_number);
            match mode {
                ScanMode::Exact => {
                    let summary = classify_exact(rule, n, scheme)?;
                    Ok(ScanRow {
                        rule: rule_number,
                        n,
                        scheme: scheme.name().to_string(),
                        class: summary.class.label().to_string(),
                        num_point_attractors: Some(summary.point_attractors.len()),
                        num_closed_classes: Some(
                            summary.components.iter().filter(|c| c.closed).count(),
                        ),
                    })
                }
                ScanMode::Empirical {
                    trials,
                    max_updates,
                    d_ini,
                    seed,
                } => {
                    let report =
                        classify_empirical(rule, n, scheme, trials, max_updates, d_ini, seed)?;
                    Ok(ScanRow {
                        rule: rule_number,
                        n,
                        scheme: scheme.name().to_string(),
                        class: report.observed_label,
                        num_point_attractors: None,
                        num_closed_classes: None,
                    })
                }
            }
        })
        .collect::<Result<Vec<ScanRow>>>()?;
    rows.sort_by_key(|row| (row.rule, row.n));
    Ok(rows)
}
