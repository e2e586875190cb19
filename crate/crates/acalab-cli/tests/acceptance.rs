//! The ten acceptance checks for this artifact, one test each. Every test
//! prints exactly one `aNN <name>: PASS` or `aNN <name>: FAIL (...)` line,
//! so `cargo test --test acceptance -- --nocapture` reads as a checklist.
//!
//! Two checks are pinned to reference values that exhaustive analysis
//! contradicts; they fail by design and their diagnostics list every
//! disagreeing entry. The independently derived values are frozen (and pass)
//! in the library's own integration suites.

use std::process::Command;
use std::time::{Duration, Instant};

use acalab::cluster::{encode, load_csv, validity_indices_raw, EncodingSpec};
use acalab::{
    classify_empirical, classify_exact, step, survey_minimal, validate_convergence, Configuration,
    EcaRule, Selection, TrialOutcome, UpdateScheme,
};

fn acalab_stdout(args: &[&str]) -> String {
    let output = Command::new(env!("CARGO_BIN_EXE_acalab"))
        .args(args)
        .output()
        .expect("binary launches");
    assert!(
        output.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).expect("utf8 output")
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn verdict(check: &str, failures: &[String], note: &str) {
    if failures.is_empty() {
        println!("{check}: PASS{note}");
    } else {
        let detail = failures.join("\n  ");
        let plural = if failures.len() == 1 { "" } else { "s" };
        println!("{check}: FAIL ({} finding{plural})\n  {detail}", failures.len());
        panic!("{check} failed:\n  {detail}");
    }
}

const TABLE_RULES: [u8; 12] = [105, 134, 142, 148, 150, 158, 212, 214, 108, 201, 156, 198];

/// Reference class counts for rings 8 through 12, column order as in
/// `TABLE_RULES`. 28 of the 60 cells disagree with what the exact analysis
/// yields; the check reports each cell.
const REFERENCE_CLASS_COUNTS: [(usize, [usize; 12]); 5] = [
    (8, [7, 7, 7, 7, 7, 7, 7, 7, 90, 90, 48, 48]),
    (9, [2, 7, 7, 7, 7, 7, 7, 7, 154, 154, 76, 76]),
    (10, [5, 8, 8, 8, 8, 8, 8, 8, 270, 270, 123, 123]),
    (11, [2, 8, 8, 8, 8, 8, 8, 8, 471, 471, 200, 200]),
    (12, [9, 9, 9, 9, 9, 9, 9, 9, 825, 825, 322, 322]),
];

#[test]
fn a01_communication_class_counts() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for (n, row) in REFERENCE_CLASS_COUNTS {
        let n_text = n.to_string();
        for (&rule, &reference) in TABLE_RULES.iter().zip(&row) {
            let rule_text = rule.to_string();
            let out = acalab_stdout(&[
                "commclasses", "--rule", &rule_text, "--n", &n_text, "--scheme", "fully",
            ]);
            let computed: usize = out.trim().parse().expect("bare count on stdout");
            if computed != reference {
                failures.push(format!(
                    "rule {rule} n={n}: computed {computed}, reference {reference}"
                ));
            }
        }
    }
    assert!(
        started.elapsed() < Duration::from_secs(120),
        "a01 exceeded its 2 minute budget"
    );
    verdict("a01 communication-class counts", &failures, "");
}

const SURVEY: [u8; 34] = [
    0, 2, 6, 8, 10, 18, 22, 24, 32, 34, 38, 40, 42, 50, 54, 56, 74, 104, 106, 128, 130, 134, 136,
    138, 146, 150, 152, 154, 160, 162, 168, 170, 178, 184,
];

#[test]
fn a02_convergence_survey() {
    let parse = |text: String| -> Vec<u8> {
        text.lines()
            .filter(|l| !l.is_empty())
            .map(|l| l.parse().expect("rule number per line"))
            .collect()
    };
    let mut failures = Vec::new();
    let listed = parse(acalab_stdout(&["theorem", "--list"]));
    if listed != SURVEY.to_vec() {
        failures.push(format!("survey list mismatch: got {listed:?}"));
    }
    let both = parse(acalab_stdout(&["theorem", "--list", "--both"]));
    if both != vec![146, 150, 168, 170, 178, 184] {
        failures.push(format!("both-attractor list mismatch: got {both:?}"));
    }
    verdict("a02 convergence survey", &failures, "");
}

#[test]
fn a03_convergence_soundness_at_desk_scale() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for rule in survey_minimal() {
        let report = validate_convergence(EcaRule::new(rule), 4..=10).expect("within limits");
        for check in &report.checks {
            if !check.passed {
                let sample: Vec<&str> = check
                    .unreachable
                    .iter()
                    .take(3)
                    .map(String::as_str)
                    .collect();
                failures.push(format!(
                    "rule {rule} n={}: {} of {} configurations cannot reach the claimed attractor (e.g. {})",
                    check.n,
                    check.unreachable.len(),
                    1usize << check.n,
                    sample.join(", ")
                ));
            }
        }
    }
    assert!(
        started.elapsed() < Duration::from_secs(600),
        "a03 exceeded its 10 minute budget"
    );
    verdict("a03 convergence soundness", &failures, "");
}

#[test]
fn a04_pair_update_phase_change() {
    let classify = |rule: u8, n: usize, scheme: UpdateScheme| {
        classify_exact(EcaRule::new(rule), n, scheme)
            .expect("within limits")
            .class
    };
    let mut failures = Vec::new();
    for n in 4..=9usize {
        for rule in [38u8, 54, 134, 150] {
            let skew = classify(rule, n, UpdateScheme::SkewAsync);
            let fully = classify(rule, n, UpdateScheme::FullyAsync);
            if !(skew.convergent && fully.label() == "Recurrent") {
                failures.push(format!(
                    "rule {rule} n={n}: skew {}, fully {}",
                    skew.label(),
                    fully.label()
                ));
            }
        }
        for rule in [26u8, 58, 90, 122] {
            let skew = classify(rule, n, UpdateScheme::SkewAsync);
            let fully = classify(rule, n, UpdateScheme::FullyAsync);
            if !(fully.convergent && !skew.convergent) {
                failures.push(format!(
                    "rule {rule} n={n}: fully {}, skew {}",
                    fully.label(),
                    skew.label()
                ));
            }
        }
        if n % 2 == 1 {
            for rule in [6u8, 22] {
                let fully = classify(rule, n, UpdateScheme::FullyAsync);
                let skew = classify(rule, n, UpdateScheme::SkewAsync);
                if !(fully.label() == "NC-NR" && skew.convergent) {
                    failures.push(format!(
                        "rule {rule} n={n}: fully {}, skew {}",
                        fully.label(),
                        skew.label()
                    ));
                }
            }
        }
        let summary = classify_exact(EcaRule::new(105), n, UpdateScheme::SkewAsync).unwrap();
        if n % 4 == 0 {
            let base: Configuration = "0011".repeat(n / 4).parse().unwrap();
            let mut expected: Vec<u128> = (0..n).map(|k| base.rotate_left(k).code()).collect();
            expected.sort_unstable();
            expected.dedup();
            let mut got: Vec<u128> = summary.point_attractors.iter().map(|c| c.code()).collect();
            got.sort_unstable();
            if !summary.class.convergent || got != expected {
                failures.push(format!("rule 105 n={n}: expected convergence onto the 0011 block rotations"));
            }
        } else if summary.class.convergent {
            failures.push(format!("rule 105 n={n}: convergent although 4 does not divide n"));
        }
    }
    verdict("a04 pair-update phase change", &failures, "");
}

const RECURRENT_46: [u8; 46] = [
    33, 35, 38, 41, 43, 46, 49, 51, 52, 54, 57, 59, 60, 62, 97, 99, 102, 105, 107, 108, 113, 115,
    116, 118, 121, 123, 131, 134, 139, 142, 145, 147, 148, 150, 153, 155, 156, 158, 195, 198, 201,
    204, 209, 211, 212, 214,
];

#[test]
fn a05_single_cell_update_recurrent_list() {
    let mut failures = Vec::new();
    for &rule in &RECURRENT_46 {
        for n in 4..=9usize {
            let summary = classify_exact(EcaRule::new(rule), n, UpdateScheme::FullyAsync).unwrap();
            if !summary.class.recurrent {
                let witness = (0..1u128 << n)
                    .find(|&code| !summary.is_recurrent_code(code))
                    .map(|code| Configuration::new(n, code).unwrap().to_string())
                    .unwrap_or_else(|| "none".to_string());
                failures.push(format!(
                    "rule {rule} n={n}: not recurrent, transient witness {witness}"
                ));
            }
        }
    }
    verdict("a05 single-cell-update recurrent list", &failures, "");
}

#[test]
fn a06_any_subset_worked_example() {
    let rule = EcaRule::new(90);
    let states: [Configuration; 5] = [
        "11001".parse().unwrap(),
        "01001".parse().unwrap(),
        "01111".parse().unwrap(),
        "01011".parse().unwrap(),
        "00011".parse().unwrap(),
    ];
    let apply = |x: &Configuration, cells: &[usize]| {
        step(rule, x, &Selection::from_cells(5, cells)).expect("selection fits the ring")
    };
    let mut failures = Vec::new();
    let consistent_rows: [(usize, &Configuration, &Configuration, &[usize]); 3] = [
        (1, &states[0], &states[1], &[0, 1]),
        (2, &states[1], &states[2], &[0, 2, 3]),
        (4, &states[3], &states[4], &[0, 1, 2, 3, 4]),
    ];
    for (row, from, to, cells) in consistent_rows {
        let got = apply(from, cells);
        if got != *to {
            failures.push(format!(
                "row {row}: {from} under {cells:?} gave {got}, tabulated {to}"
            ));
        }
    }
    // The third tabulated row pairs output 01011 with selection {1}, but
    // updating cell 1 of 01111 changes nothing; the output is produced by
    // exactly one single-cell selection, {2}.
    if apply(&states[2], &[1]) != states[2] {
        failures.push("selection {1} on 01111 was expected to be inert".to_string());
    }
    let producers: Vec<usize> = (0..5)
        .filter(|&i| apply(&states[2], &[i]) == states[3])
        .collect();
    if producers != vec![2] {
        failures.push(format!(
            "single-cell selections producing 01011 from 01111: {producers:?}, expected just cell 2"
        ));
    }
    verdict(
        "a06 any-subset worked example",
        &failures,
        " (row 3 reproduces under selection {2}; its tabulated selection {1} is an inert update)",
    );
}

#[test]
fn a07_any_subset_reversibility() {
    let mut failures = Vec::new();
    for n in 4..=7usize {
        for alpha in [0.1, 0.5, 0.9] {
            let scheme = UpdateScheme::AlphaAsync(alpha);
            for rule in [1u8, 3, 33, 51, 204] {
                let class = classify_exact(EcaRule::new(rule), n, scheme).unwrap().class;
                if !class.recurrent {
                    failures.push(format!("rule {rule} n={n} alpha={alpha}: {}", class.label()));
                }
            }
            let zero = classify_exact(EcaRule::new(0), n, scheme).unwrap().class;
            if !(zero.convergent && !zero.recurrent) {
                failures.push(format!("rule 0 n={n} alpha={alpha}: {}", zero.label()));
            }
        }
        // The successor relation itself is probability-independent.
        for rule in [1u8, 51, 90] {
            let low = classify_exact(EcaRule::new(rule), n, UpdateScheme::AlphaAsync(0.05)).unwrap();
            let high = classify_exact(EcaRule::new(rule), n, UpdateScheme::AlphaAsync(0.95)).unwrap();
            if low.component_of != high.component_of || low.class != high.class {
                failures.push(format!("rule {rule} n={n}: graph depends on the update probability"));
            }
        }
    }
    verdict("a07 any-subset reversibility", &failures, "");
}

#[test]
fn a08_encoding_fixture() {
    let dataset = load_csv(fixture("books.csv").as_ref()).expect("fixture loads");
    let spec_text = std::fs::read_to_string(fixture("books_encoding.json")).unwrap();
    let spec = EncodingSpec::from_json(&spec_text).expect("fixture spec is valid");
    let encoded = encode(&dataset, &spec).expect("table encodes");
    let expected = [
        "001101", "010010", "011110", "111101", "010101", "000110", "110101", "000001", "110001",
        "111101",
    ];
    let mut failures = Vec::new();
    for (obj, want) in encoded.objects.iter().zip(expected) {
        let got = obj.configuration.to_string();
        if got != want {
            failures.push(format!("object {}: encoded {got}, tabulated {want}", obj.id + 1));
        }
    }
    if encoded.useful.len() != 9 {
        failures.push(format!(
            "useful configurations: {} instead of 9",
            encoded.useful.len()
        ));
    }
    verdict("a08 encoding fixture", &failures, "");
}

/// Index computation written independently of the library: explicit loops,
/// no shared helpers, fixed 2-dimensional points.
fn brute_force_indices(points: &[[f64; 2]], labels: &[usize]) -> [f64; 4] {
    let n = points.len();
    let d = |i: usize, j: usize| -> f64 {
        let dx = points[i][0] - points[j][0];
        let dy = points[i][1] - points[j][1];
        (dx * dx + dy * dy).sqrt()
    };
    let mut ids: Vec<usize> = labels.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let k = ids.len();
    let members: Vec<Vec<usize>> = ids
        .iter()
        .map(|&c| (0..n).filter(|&i| labels[i] == c).collect())
        .collect();

    let mut silhouette = 0.0;
    for (i, &label) in labels.iter().enumerate() {
        let mine = ids.iter().position(|&c| c == label).unwrap();
        if members[mine].len() < 2 {
            continue;
        }
        let a = members[mine]
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| d(i, j))
            .sum::<f64>()
            / (members[mine].len() - 1) as f64;
        let mut b = f64::INFINITY;
        for (c, group) in members.iter().enumerate() {
            if c == mine {
                continue;
            }
            b = b.min(group.iter().map(|&j| d(i, j)).sum::<f64>() / group.len() as f64);
        }
        silhouette += (b - a) / a.max(b);
    }
    silhouette /= n as f64;

    let mut smallest_between = f64::INFINITY;
    let mut widest_diameter = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                widest_diameter = widest_diameter.max(d(i, j));
            } else {
                smallest_between = smallest_between.min(d(i, j));
            }
        }
    }
    let dunn = smallest_between / widest_diameter;

    let centroid = |group: &[usize]| -> [f64; 2] {
        let mut c = [0.0, 0.0];
        for &i in group {
            c[0] += points[i][0];
            c[1] += points[i][1];
        }
        [c[0] / group.len() as f64, c[1] / group.len() as f64]
    };
    let centroids: Vec<[f64; 2]> = members.iter().map(|g| centroid(g)).collect();
    let point_to = |i: usize, c: [f64; 2]| -> f64 {
        let dx = points[i][0] - c[0];
        let dy = points[i][1] - c[1];
        (dx * dx + dy * dy).sqrt()
    };
    let scatters: Vec<f64> = members
        .iter()
        .zip(&centroids)
        .map(|(g, &c)| g.iter().map(|&i| point_to(i, c)).sum::<f64>() / g.len() as f64)
        .collect();
    let mut db = 0.0;
    for i in 0..k {
        let mut worst = 0.0f64;
        for j in 0..k {
            if i != j {
                let dx = centroids[i][0] - centroids[j][0];
                let dy = centroids[i][1] - centroids[j][1];
                worst = worst.max((scatters[i] + scatters[j]) / (dx * dx + dy * dy).sqrt());
            }
        }
        db += worst;
    }
    db /= k as f64;

    let grand = {
        let mut c = [0.0, 0.0];
        for p in points {
            c[0] += p[0];
            c[1] += p[1];
        }
        [c[0] / n as f64, c[1] / n as f64]
    };
    let mut between = 0.0;
    let mut within = 0.0;
    for (group, &c) in members.iter().zip(&centroids) {
        let dx = c[0] - grand[0];
        let dy = c[1] - grand[1];
        between += group.len() as f64 * (dx * dx + dy * dy);
        for &i in group {
            let px = points[i][0] - c[0];
            let py = points[i][1] - c[1];
            within += px * px + py * py;
        }
    }
    let ch = (between / (k - 1) as f64) / (within / (n - k) as f64);

    [silhouette, dunn, db, ch]
}

#[test]
fn a09_validity_index_cross_check() {
    let rectangle: Vec<[f64; 2]> = vec![[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]];
    let fixtures: Vec<(Vec<[f64; 2]>, Vec<usize>)> = vec![
        (rectangle.clone(), vec![0, 0, 1, 1]),
        // The same labeling under renamed cluster ids.
        (rectangle.clone(), vec![7, 7, 3, 3]),
        (
            vec![[0.0, 0.0], [1.0, 0.0], [10.0, 0.0], [11.0, 0.0], [20.0, 0.0], [21.0, 0.0]],
            vec![0, 0, 1, 1, 2, 2],
        ),
        // A singleton cluster, which contributes 0 to the silhouette.
        (
            vec![[0.0, 0.0], [0.0, 2.0], [8.0, 1.0], [9.0, 1.0], [50.0, 50.0]],
            vec![0, 0, 1, 1, 2],
        ),
        (
            vec![
                [0.0, 0.0], [1.0, 1.0], [2.0, 0.0], [9.0, 9.0], [10.0, 10.0], [8.0, 10.0],
                [20.0, 1.0], [21.0, 0.0],
            ],
            vec![0, 0, 0, 1, 1, 1, 2, 2],
        ),
    ];
    let mut failures = Vec::new();
    for (which, (points, labels)) in fixtures.iter().enumerate() {
        let rows: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
        let report = validity_indices_raw(&rows, labels).expect("valid labeling");
        let expected = brute_force_indices(points, labels);
        let got = [
            report.silhouette,
            report.dunn,
            report.davies_bouldin,
            report.calinski_harabasz,
        ];
        for (name, (g, e)) in ["silhouette", "dunn", "davies_bouldin", "calinski_harabasz"]
            .iter()
            .zip(got.iter().zip(&expected))
        {
            if (g - e).abs() > 1e-9 {
                failures.push(format!("labeling {which}: {name} {g} vs brute force {e}"));
            }
        }
    }
    // Hand-computed values for the rectangle fixture.
    let report = validity_indices_raw(
        &rectangle.iter().map(|p| p.to_vec()).collect::<Vec<_>>(),
        &[0, 0, 1, 1],
    )
    .unwrap();
    let expected_silhouette = 1.0 - 2.0 / (10.0 + 101.0f64.sqrt());
    if (report.silhouette - expected_silhouette).abs() > 1e-9
        || (report.dunn - 10.0).abs() > 1e-9
        || (report.davies_bouldin - 0.1).abs() > 1e-9
        || (report.calinski_harabasz - 200.0).abs() > 1e-9
    {
        failures.push(format!(
            "rectangle fixture: got ({}, {}, {}, {})",
            report.silhouette, report.dunn, report.davies_bouldin, report.calinski_harabasz
        ));
    }
    verdict("a09 validity-index cross-check", &failures, "");
}

#[test]
fn a10_stochastic_convergence_of_rule_50() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for scheme in [UpdateScheme::FullyAsync, UpdateScheme::SkewAsync] {
        let report =
            classify_empirical(EcaRule::new(50), 50, scheme, 100, 1_000_000, 0.5, 42).unwrap();
        let all_zero = "0".repeat(50);
        let reached: usize = report
            .trials
            .iter()
            .filter(|t| {
                matches!(&t.outcome, TrialOutcome::Converged { attractor, .. } if *attractor == all_zero)
            })
            .count();
        notes.push(format!("{} {reached}/100", scheme.name()));
        if reached < 95 {
            failures.push(format!(
                "{}: only {reached} of 100 trials reached all-0 within the budget",
                scheme.name()
            ));
        }
    }
    assert!(
        started.elapsed() < Duration::from_secs(60),
        "a10 exceeded its 1 minute budget"
    );
    verdict(
        "a10 stochastic convergence",
        &failures,
        &format!(" ({})", notes.join(", ")),
    );
}
