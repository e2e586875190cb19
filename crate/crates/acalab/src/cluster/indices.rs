//! Internal cluster validity indices over Euclidean feature space.
//!
//! [`validity_indices`] evaluates a labeling of a dataset on its z-scored
//! quantitative attributes; [`validity_indices_raw`] is the same computation
//! on caller-supplied points, which is what reference fixtures pin down.

use serde::Serialize;

use crate::error::{Error, Result};

use super::encoding::Dataset;

/// Reported in place of a ratio whose denominator degenerates to zero
/// (Dunn with all-zero diameters, Calinski-Harabasz with zero
/// within-cluster variance).
pub const DEGENERATE_SENTINEL: f64 = 1e12;

/// The four index values for one labeling.
#[derive(Debug, Clone, Serialize)]
pub struct ValidityReport {
    pub silhouette: f64,
    pub dunn: f64,
    pub davies_bouldin: f64,
    pub calinski_harabasz: f64,
    pub warnings: Vec<String>,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn centroid(points: &[Vec<f64>], members: &[usize]) -> Vec<f64> {
    let dim = points[0].len();
    let mut c = vec![0.0; dim];
    for &i in members {
        for (slot, value) in c.iter_mut().zip(&points[i]) {
            *slot += value;
        }
    }
    for slot in &mut c {
        *slot /= members.len() as f64;
    }
    c
}

/// Compacts arbitrary label values into cluster member lists.
fn group_by_label(labels: &[usize]) -> Result<Vec<Vec<usize>>> {
    let mut distinct: Vec<usize> = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::TooFewClusters(distinct.len()));
    }
    let mut clusters = vec![Vec::new(); distinct.len()];
    for (i, &label) in labels.iter().enumerate() {
        let slot = distinct.binary_search(&label).expect("label seen above");
        clusters[slot].push(i);
    }
    Ok(clusters)
}

/// Indices for explicit points under a labeling. Labels may be any usize
/// values; each distinct value is one cluster.
pub fn validity_indices_raw(points: &[Vec<f64>], labels: &[usize]) -> Result<ValidityReport> {
    if points.is_empty() {
        return Err(Error::EmptyDataset("no points to score".into()));
    }
    if points.len() != labels.len() {
        return Err(Error::EmptyDataset(format!(
            "{} points but {} labels",
            points.len(),
            labels.len()
        )));
    }
    let clusters = group_by_label(labels)?;
    let k = clusters.len();
    let total = points.len();
    let mut warnings = Vec::new();

    // Pairwise distances, computed once.
    let dist: Vec<Vec<f64>> = points
        .iter()
        .map(|a| points.iter().map(|b| euclidean(a, b)).collect())
        .collect();
    let cluster_of: Vec<usize> = {
        let mut map = vec![0usize; total];
        for (id, members) in clusters.iter().enumerate() {
            for &i in members {
                map[i] = id;
            }
        }
        map
    };

    // Silhouette: mean over points of (b - a) / max(a, b); singletons
    // contribute 0.
    let mut silhouette_sum = 0.0;
    for i in 0..total {
        let own = &clusters[cluster_of[i]];
        if own.len() == 1 {
            continue;
        }
        let a = own
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| dist[i][j])
            .sum::<f64>()
            / (own.len() - 1) as f64;
        let b = clusters
            .iter()
            .enumerate()
            .filter(|(id, _)| *id != cluster_of[i])
            .map(|(_, members)| {
                members.iter().map(|&j| dist[i][j]).sum::<f64>() / members.len() as f64
            })
            .fold(f64::INFINITY, f64::min);
        silhouette_sum += (b - a) / a.max(b);
    }
    let silhouette = silhouette_sum / total as f64;

    // Dunn: smallest between-cluster point distance over largest diameter.
    let mut min_between = f64::INFINITY;
    let mut max_diameter: f64 = 0.0;
    for (id, members) in clusters.iter().enumerate() {
        for &i in members {
            for &j in members {
                max_diameter = max_diameter.max(dist[i][j]);
            }
            for other in clusters.iter().skip(id + 1) {
                for &j in other {
                    min_between = min_between.min(dist[i][j]);
                }
            }
        }
    }
    let dunn = if max_diameter == 0.0 {
        warnings.push(
            "every cluster has zero diameter; reporting the degenerate sentinel for dunn".into(),
        );
        DEGENERATE_SENTINEL
    } else {
        min_between / max_diameter
    };

    // Davies-Bouldin over centroid scatter.
    let centroids: Vec<Vec<f64>> = clusters.iter().map(|m| centroid(points, m)).collect();
    let scatter: Vec<f64> = clusters
        .iter()
        .zip(&centroids)
        .map(|(members, c)| {
            members.iter().map(|&i| euclidean(&points[i], c)).sum::<f64>() / members.len() as f64
        })
        .collect();
    let mut db_sum = 0.0;
    for i in 0..k {
        let mut worst: f64 = 0.0;
        for j in 0..k {
            if i == j {
                continue;
            }
            let separation = euclidean(&centroids[i], &centroids[j]);
            let ratio = if separation == 0.0 {
                f64::INFINITY
            } else {
                (scatter[i] + scatter[j]) / separation
            };
            worst = worst.max(ratio);
        }
        db_sum += worst;
    }
    let davies_bouldin = db_sum / k as f64;

    // Calinski-Harabasz variance ratio.
    let overall = centroid(points, &(0..total).collect::<Vec<_>>());
    let between: f64 = clusters
        .iter()
        .zip(&centroids)
        .map(|(members, c)| {
            let d = euclidean(c, &overall);
            members.len() as f64 * d * d
        })
        .sum();
    let within: f64 = clusters
        .iter()
        .zip(&centroids)
        .map(|(members, c)| {
            members
                .iter()
                .map(|&i| {
                    let d = euclidean(&points[i], c);
                    d * d
                })
                .sum::<f64>()
        })
        .sum();
    let calinski_harabasz = if within == 0.0 {
        warnings.push(
            "zero within-cluster variance; reporting the degenerate sentinel for calinski_harabasz"
                .into(),
        );
        DEGENERATE_SENTINEL
    } else {
        (between / (k - 1) as f64) / (within / (total - k) as f64)
    };

    Ok(ValidityReport {
        silhouette,
        dunn,
        davies_bouldin,
        calinski_harabasz,
        warnings,
    })
}

/// Indices for a dataset labeling, computed on its quantitative attributes
/// after z-score normalization. Attributes with zero spread contribute
/// nothing to the distances.
pub fn validity_indices(dataset: &Dataset, labels: &[usize]) -> Result<ValidityReport> {
    let matrix = dataset.quantitative_matrix();
    if matrix.is_empty() || matrix[0].is_empty() {
        return Err(Error::EmptyDataset(
            "no quantitative attributes to score on".into(),
        ));
    }
    let rows = matrix.len();
    let dims = matrix[0].len();
    let mut normalized = vec![vec![0.0; dims]; rows];
    for d in 0..dims {
        let mean = matrix.iter().map(|row| row[d]).sum::<f64>() / rows as f64;
        let variance = matrix
            .iter()
            .map(|row| (row[d] - mean) * (row[d] - mean))
            .sum::<f64>()
            / rows as f64;
        let std = variance.sqrt();
        for (out, row) in normalized.iter_mut().zip(&matrix) {
            out[d] = if std == 0.0 { 0.0 } else { (row[d] - mean) / std };
        }
    }
    validity_indices_raw(&normalized, labels)
}
