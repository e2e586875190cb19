//! Level-wise cluster merging driven by communication classes.
//!
//! Level 0 puts each useful configuration in its own cluster. Each later
//! level picks a rule, computes the communication classes of the encoded
//! ring under single-cell updates, and merges clusters that show up together
//! in a class, weighted by how much of each cluster lands there. A seeded
//! driver loop repeats this until the requested cluster count, falling back
//! to a nearest-pair merge when rule draws stop making progress.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::communication_classes;
use crate::error::{Error, Result};
use crate::lattice::Configuration;
use crate::rule::EcaRule;
use crate::scheme::UpdateScheme;

use super::encoding::EncodedDataset;

/// Rules whose single-cell-update dynamics keep every configuration inside
/// a cycle at any ring size, making their communication classes usable as
/// similarity classes.
pub const CANDIDATE_RULES: [u8; 12] = [105, 108, 134, 142, 148, 150, 156, 158, 198, 201, 212, 214];

/// The candidate rules grouped by interchangeable class structure: members
/// of a group partition the configuration space identically.
pub const CANDIDATE_RULE_GROUPS: [&[u8]; 4] = [
    &[134, 142, 148, 150, 158, 212, 214],
    &[108, 201],
    &[156, 198],
    &[105],
];

fn require_candidate(rule: EcaRule) -> Result<()> {
    if CANDIDATE_RULES.contains(&rule.number()) {
        Ok(())
    } else {
        Err(Error::NotACandidateRule(rule.number()))
    }
}

/// Participation of one communication class across the previous level's
/// clusters: entry j is the percent of cluster j's objects whose
/// configuration falls in this class.
#[derive(Debug, Clone, Serialize)]
pub struct ParticipationRow {
    /// Index of the class in the rule's size-ordered class list.
    pub class_index: usize,
    pub per_cluster: Vec<f64>,
}

/// One merging level.
#[derive(Debug, Clone, Serialize)]
pub struct ClusterLevel {
    pub level: usize,
    /// The rule that drove the merge; absent for level 0 and for
    /// nearest-pair fallback levels.
    pub rule: Option<u8>,
    /// Object ids per cluster, ascending inside each cluster; clusters
    /// ordered by smallest member id.
    pub clusters: Vec<Vec<usize>>,
    /// Rows for every occupied communication class, in class order.
    pub participation: Vec<ParticipationRow>,
    pub merged_by_fallback: bool,
}

impl ClusterLevel {
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    /// Cluster id per object id, for the objects present in the level.
    pub fn labels(&self, object_count: usize) -> Vec<usize> {
        let mut labels = vec![usize::MAX; object_count];
        for (cluster_id, members) in self.clusters.iter().enumerate() {
            for &id in members {
                labels[id] = cluster_id;
            }
        }
        labels
    }
}

fn sorted_clusters(mut clusters: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for members in &mut clusters {
        members.sort_unstable();
    }
    clusters.sort_by_key(|members| members[0]);
    clusters
}

/// Runs one merging level over the current clusters under `rule`.
///
/// Classes are visited largest first. A class merges every previous cluster
/// that holds its maximum participation (ties include all holders) plus the
/// lowest-indexed holder of the strictly lower second maximum, when one
/// exists. A cluster consumed by an earlier class is out of play for later
/// ones; untouched clusters carry forward unchanged.
pub fn cluster_level(
    current: &[Vec<usize>],
    encoded: &EncodedDataset,
    rule: EcaRule,
) -> Result<ClusterLevel> {
    require_candidate(rule)?;
    if current.iter().any(Vec::is_empty) {
        let empty = current.iter().position(Vec::is_empty).unwrap_or_default();
        return Err(Error::EmptyCluster(empty));
    }
    let report = communication_classes(rule, encoded.n, UpdateScheme::FullyAsync)?;
    let class_of_code = |code: u128| -> usize {
        report
            .classes
            .iter()
            .position(|class| class.members.binary_search(&code).is_ok())
            .expect("candidate rules partition the space into classes")
    };

    let mut config_of_object = vec![None; encoded.objects.len()];
    for obj in &encoded.objects {
        config_of_object[obj.id] = Some(obj.configuration);
    }
    let class_of_object = |id: usize| -> usize {
        let config = config_of_object[id].expect("cluster members come from the encoded set");
        class_of_code(config.code())
    };

    // counts[t] = per-cluster member tallies for occupied class t.
    let mut counts: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for (j, members) in current.iter().enumerate() {
        for &id in members {
            let t = class_of_object(id);
            counts.entry(t).or_insert_with(|| vec![0; current.len()])[j] += 1;
        }
    }
    let participation: Vec<ParticipationRow> = counts
        .iter()
        .map(|(&class_index, tallies)| ParticipationRow {
            class_index,
            per_cluster: tallies
                .iter()
                .zip(current)
                .map(|(&c, members)| 100.0 * c as f64 / members.len() as f64)
                .collect(),
        })
        .collect();

    let mut consumed = vec![false; current.len()];
    let mut merged: Vec<Vec<usize>> = Vec::new();
    for row in &participation {
        let available: Vec<usize> = (0..current.len())
            .filter(|&j| !consumed[j] && row.per_cluster[j] > 0.0)
            .collect();
        if available.len() < 2 {
            continue;
        }
        let first_max = available
            .iter()
            .map(|&j| row.per_cluster[j])
            .fold(f64::MIN, f64::max);
        let mut group: Vec<usize> = available
            .iter()
            .copied()
            .filter(|&j| row.per_cluster[j] == first_max)
            .collect();
        let second_max = available
            .iter()
            .map(|&j| row.per_cluster[j])
            .filter(|&p| p < first_max)
            .fold(f64::MIN, f64::max);
        if second_max > 0.0 {
            let holder = available
                .iter()
                .copied()
                .find(|&j| row.per_cluster[j] == second_max)
                .expect("a cluster holds the second maximum");
            group.push(holder);
        }
        if group.len() < 2 {
            continue;
        }
        let mut union: Vec<usize> = Vec::new();
        for &j in &group {
            consumed[j] = true;
            union.extend_from_slice(&current[j]);
        }
        merged.push(union);
    }
    for (j, members) in current.iter().enumerate() {
        if !consumed[j] {
            merged.push(members.clone());
        }
    }

    Ok(ClusterLevel {
        level: 0,
        rule: Some(rule.number()),
        clusters: sorted_clusters(merged),
        participation,
        merged_by_fallback: false,
    })
}

/// Mean Hamming distance between the distinct configuration sets of two
/// clusters.
fn mean_hamming(a: &[Configuration], b: &[Configuration]) -> f64 {
    let mut total = 0u64;
    for x in a {
        for y in b {
            total += u64::from(x.hamming(y).expect("same ring size"));
        }
    }
    total as f64 / (a.len() * b.len()) as f64
}

/// Indices of the two clusters with minimum mean pairwise Hamming distance,
/// ties toward the lexicographically smallest index pair.
fn closest_pair_by_mean_hamming(
    clusters: &[Vec<usize>],
    encoded: &EncodedDataset,
) -> (usize, usize) {
    let config_sets: Vec<Vec<Configuration>> = clusters
        .iter()
        .map(|members| {
            let mut set: Vec<Configuration> = Vec::new();
            for &id in members {
                let config = encoded
                    .objects
                    .iter()
                    .find(|o| o.id == id)
                    .expect("member exists")
                    .configuration;
                if !set.contains(&config) {
                    set.push(config);
                }
            }
            set
        })
        .collect();
    let mut best = (0, 1);
    let mut best_distance = f64::INFINITY;
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let d = mean_hamming(&config_sets[i], &config_sets[j]);
            if d < best_distance {
                best_distance = d;
                best = (i, j);
            }
        }
    }
    best
}

fn fallback_merge(clusters: &[Vec<usize>], encoded: &EncodedDataset) -> Vec<Vec<usize>> {
    let (i, j) = closest_pair_by_mean_hamming(clusters, encoded);
    let mut next: Vec<Vec<usize>> = Vec::with_capacity(clusters.len() - 1);
    let mut union = clusters[i].clone();
    union.extend_from_slice(&clusters[j]);
    next.push(union);
    for (idx, members) in clusters.iter().enumerate() {
        if idx != i && idx != j {
            next.push(members.clone());
        }
    }
    sorted_clusters(next)
}

/// How many consecutive unproductive rule draws trigger a nearest-pair
/// merge.
pub const STALL_LIMIT: usize = 5;

/// Runs the whole pipeline down to exactly `k` clusters.
///
/// Level 0 is one cluster per useful configuration. Each iteration draws a
/// rule uniformly (with replacement) from `pool` using a ChaCha8 stream
/// seeded with `seed`, and keeps the level only if it lowers the cluster
/// count without dropping below `k`. After [`STALL_LIMIT`] consecutive
/// rejected draws the two closest clusters by mean Hamming distance merge
/// instead. The same run inputs always produce the same level sequence.
pub fn iterative_cluster(
    encoded: &EncodedDataset,
    k: usize,
    pool: &[u8],
    seed: u64,
) -> Result<Vec<ClusterLevel>> {
    if k == 0 {
        return Err(Error::ZeroClusters);
    }
    if k > encoded.useful.len() {
        return Err(Error::TooManyClusters {
            k,
            useful: encoded.useful.len(),
        });
    }
    if pool.is_empty() {
        return Err(Error::EmptyDataset("empty rule pool".into()));
    }
    for &rule in pool {
        require_candidate(EcaRule::new(rule))?;
    }

    let mut levels = vec![ClusterLevel {
        level: 0,
        rule: None,
        clusters: sorted_clusters(encoded.objects_by_useful()),
        participation: Vec::new(),
        merged_by_fallback: false,
    }];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stall = 0usize;
    while levels.last().expect("level 0 exists").cluster_count() > k {
        let current = levels.last().expect("level 0 exists");
        if stall >= STALL_LIMIT {
            levels.push(ClusterLevel {
                level: current.level + 1,
                rule: None,
                clusters: fallback_merge(&current.clusters, encoded),
                participation: Vec::new(),
                merged_by_fallback: true,
            });
            stall = 0;
            continue;
        }
        let rule = EcaRule::new(pool[rng.gen_range(0..pool.len())]);
        let mut candidate = cluster_level(&current.clusters, encoded, rule)?;
        let newcount = candidate.cluster_count();
        if (k..current.cluster_count()).contains(&newcount) {
            candidate.level = current.level + 1;
            levels.push(candidate);
            stall = 0;
        } else {
            stall += 1;
        }
    }
    Ok(levels)
}
