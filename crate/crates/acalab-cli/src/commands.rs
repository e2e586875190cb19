//! Implementations behind the subcommands: build the result, wrap it in a
//! manifest, render, write.

use std::fmt;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use acalab::cluster::{build_encoding, encode, load_csv, validity_indices, EncodingSpec, CANDIDATE_RULES};
use acalab::{
    classify_empirical, classify_exact, communication_classes, convergence_verdict,
    random_configuration, sample_selection, scan_minimal, step, survey_all_rules, survey_minimal,
    validate_convergence, Configuration, EcaRule, ScanMode, ScanRow, Selection, UpdateScheme,
};

use crate::manifest::{output_name, RunManifest};
use crate::{
    ClassifyArgs, ClusterArgs, CommclassesArgs, FormatArg, ModeArg, ScanArgs, SchemeArg,
    SimulateArgs, TableFormatArg, TheoremArgs,
};

/// A command failure bucketed by exit code: 2 for bad invocations, 3 for
/// requests too large for exact analysis, 1 for everything else.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Limit(String),
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Limit(_) => 3,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Limit(msg) | CliError::Failure(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl From<acalab::Error> for CliError {
    fn from(err: acalab::Error) -> CliError {
        use acalab::Error::*;
        match err {
            ExactLimitExceeded { .. } => CliError::Limit(err.to_string()),
            BadRingSize { .. }
            | AlphaOutOfRange(_)
            | DensityOutOfRange(_)
            | BadConfigurationString(_)
            | ZeroClusters
            | TooManyClusters { .. }
            | TooFewClusters(_)
            | NotACandidateRule(_) => CliError::Usage(err.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> CliError {
        CliError::Failure(format!("io error: {err}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> CliError {
        CliError::Failure(format!("json error: {err}"))
    }
}

type CmdResult = Result<(), CliError>;

fn make_scheme(arg: SchemeArg, alpha: Option<f64>) -> Result<UpdateScheme, CliError> {
    match (arg, alpha) {
        (SchemeArg::Alpha, Some(a)) => Ok(UpdateScheme::alpha(a)?),
        (SchemeArg::Alpha, None) => Err(CliError::Usage(
            "--scheme alpha requires --alpha".to_string(),
        )),
        (_, Some(_)) => Err(CliError::Usage(
            "--alpha only applies to --scheme alpha".to_string(),
        )),
        (SchemeArg::Sync, None) => Ok(UpdateScheme::Synchronous),
        (SchemeArg::Fully, None) => Ok(UpdateScheme::FullyAsync),
        (SchemeArg::Skew, None) => Ok(UpdateScheme::SkewAsync),
    }
}

fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let bad = || CliError::Usage(format!("range must be written a:b with a <= b, got {text:?}"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let lo: usize = a.trim().parse().map_err(|_| bad())?;
    let hi: usize = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

/// Writes `content` to the path, or to stdout when no path is given.
fn write_artifact(out: Option<&Path>, content: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn run_simulate(args: &SimulateArgs) -> CmdResult {
    let scheme = make_scheme(args.scheme, args.alpha)?;
    let rule = EcaRule::new(args.rule);
    let draws_randomness = scheme != UpdateScheme::Synchronous || args.start.is_none();
    if draws_randomness && args.seed.is_none() {
        return Err(CliError::Usage(
            "this run draws randomness; pass --seed".to_string(),
        ));
    }
    let mut rng = args.seed.map(ChaCha8Rng::seed_from_u64);

    let start = match &args.start {
        Some(bits) => {
            let config: Configuration = bits.parse()?;
            if config.len() != args.n {
                return Err(CliError::Usage(format!(
                    "--start has {} cells but --n is {}",
                    config.len(),
                    args.n
                )));
            }
            config
        }
        None => {
            let rng = rng.as_mut().expect("seed presence checked above");
            random_configuration(args.n, args.d_ini, rng)?
        }
    };

    let per_normalized = scheme.raw_steps_per_normalized(args.n);
    let mut rows = vec![start];
    let mut current = start;
    for _ in 0..args.steps {
        for _ in 0..per_normalized {
            let sel = match rng.as_mut() {
                Some(rng) => sample_selection(scheme, args.n, rng),
                None => Selection::all(args.n),
            };
            current = step(rule, &current, &sel)?;
        }
        rows.push(current);
    }

    let parameters = json!({
        "rule": args.rule,
        "n": args.n,
        "scheme": scheme.name(),
        "alpha": args.alpha,
        "steps": args.steps,
        "start": args.start,
        "d_ini": args.d_ini,
        "format": format_name(args.format),
    });
    let manifest = RunManifest::new(
        "simulate",
        parameters,
        args.seed,
        vec![output_name(args.out.as_deref())],
    );

    let content = match args.format {
        FormatArg::Pbm => render_pbm(&manifest, &rows),
        FormatArg::Txt => render_txt(&manifest, &rows),
        FormatArg::Csv => render_density_csv(&manifest, &rows),
        FormatArg::Json => pretty(&json!({
            "manifest": manifest.to_value(),
            "rule": args.rule,
            "n": args.n,
            "scheme": scheme.name(),
            "rows": rows.iter().map(Configuration::to_string).collect::<Vec<_>>(),
            "densities": rows.iter().map(Configuration::density).collect::<Vec<_>>(),
        })),
    };
    write_artifact(args.out.as_deref(), &content)
}

fn format_name(format: FormatArg) -> &'static str {
    match format {
        FormatArg::Pbm => "pbm",
        FormatArg::Txt => "txt",
        FormatArg::Csv => "csv",
        FormatArg::Json => "json",
    }
}

fn render_pbm(manifest: &RunManifest, rows: &[Configuration]) -> String {
    let mut out = String::from("P1\n");
    out.push_str(&manifest.comment_line());
    out.push('\n');
    out.push_str(&format!("{} {}\n", rows[0].len(), rows.len()));
    for row in rows {
        out.push_str(&row.to_string());
        out.push('\n');
    }
    out
}

fn render_txt(manifest: &RunManifest, rows: &[Configuration]) -> String {
    let mut out = manifest.comment_line();
    out.push('\n');
    for row in rows {
        for bit in row.bits() {
            out.push(if bit == 1 { '#' } else { '.' });
        }
        out.push('\n');
    }
    out
}

fn render_density_csv(manifest: &RunManifest, rows: &[Configuration]) -> String {
    let mut out = manifest.comment_line();
    out.push_str("\nstep,density\n");
    for (step, row) in rows.iter().enumerate() {
        out.push_str(&format!("{step},{}\n", row.density()));
    }
    out
}

pub fn run_classify(args: &ClassifyArgs) -> CmdResult {
    let scheme = make_scheme(args.scheme, args.alpha)?;
    let rule = EcaRule::new(args.rule);
    let mode_name = match args.mode {
        ModeArg::Exact => "exact",
        ModeArg::Empirical => "empirical",
    };
    let parameters = json!({
        "rule": args.rule,
        "n": args.n,
        "scheme": scheme.name(),
        "alpha": args.alpha,
        "mode": mode_name,
        "trials": args.trials,
        "max_updates": args.max_updates,
        "d_ini": args.d_ini,
    });
    let manifest = RunManifest::new(
        "classify",
        parameters,
        args.seed,
        vec![output_name(args.out.as_deref())],
    );

    let value = match args.mode {
        ModeArg::Exact => {
            let summary = classify_exact(rule, args.n, scheme)?;
            let closed = summary.components.iter().filter(|c| c.closed).count();
            json!({
                "manifest": manifest.to_value(),
                "rule": args.rule,
                "n": args.n,
                "scheme": scheme.name(),
                "mode": "exact",
                "class": summary.class.label(),
                "closed_classes": closed,
                "point_attractors": summary.point_attractors.len(),
                "components": summary.components.len(),
            })
        }
        ModeArg::Empirical => {
            let seed = args.seed.ok_or_else(|| {
                CliError::Usage("empirical mode draws randomness; pass --seed".to_string())
            })?;
            let report = classify_empirical(
                rule,
                args.n,
                scheme,
                args.trials,
                args.max_updates,
                args.d_ini,
                seed,
            )?;
            json!({
                "manifest": manifest.to_value(),
                "rule": args.rule,
                "n": args.n,
                "scheme": scheme.name(),
                "mode": "empirical",
                "class": report.observed_label,
                "converged_fraction": report.converged_fraction,
                "report": report,
            })
        }
    };
    write_artifact(args.out.as_deref(), &pretty(&value))
}

pub fn run_scan(args: &ScanArgs) -> CmdResult {
    let scheme = make_scheme(args.scheme, args.alpha)?;
    let range = parse_range(&args.n_range)?;
    let (mode, mode_name) = match args.mode {
        ModeArg::Exact => (ScanMode::Exact, "exact"),
        ModeArg::Empirical => {
            let seed = args.seed.ok_or_else(|| {
                CliError::Usage("empirical mode draws randomness; pass --seed".to_string())
            })?;
            (
                ScanMode::Empirical {
                    trials: args.trials,
                    max_updates: args.max_updates,
                    d_ini: args.d_ini,
                    seed,
                },
                "empirical",
            )
        }
    };
    let rows = scan_minimal(scheme, range, mode)?;

    let parameters = json!({
        "scheme": scheme.name(),
        "alpha": args.alpha,
        "n_range": args.n_range,
        "mode": mode_name,
        "trials": args.trials,
        "max_updates": args.max_updates,
        "d_ini": args.d_ini,
        "format": match args.format { TableFormatArg::Csv => "csv", TableFormatArg::Json => "json" },
    });
    let manifest = RunManifest::new(
        "scan",
        parameters,
        args.seed,
        vec![output_name(args.out.as_deref())],
    );

    let content = match args.format {
        TableFormatArg::Csv => render_scan_csv(&manifest, &rows),
        TableFormatArg::Json => pretty(&json!({
            "manifest": manifest.to_value(),
            "rows": rows,
        })),
    };
    write_artifact(args.out.as_deref(), &content)
}

fn render_scan_csv(manifest: &RunManifest, rows: &[ScanRow]) -> String {
    let mut out = manifest.comment_line();
    out.push_str("\nrule,n,scheme,class,point_attractors,closed_classes\n");
    for row in rows {
        let attractors = row
            .num_point_attractors
            .map(|v| v.to_string())
            .unwrap_or_default();
        let closed = row
            .num_closed_classes
            .map(|v| v.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{attractors},{closed}\n",
            row.rule, row.n, row.scheme, row.class
        ));
    }
    out
}

pub fn run_theorem(args: &TheoremArgs) -> CmdResult {
    let chosen =
        usize::from(args.list) + usize::from(args.rule.is_some()) + usize::from(args.validate.is_some());
    if chosen != 1 {
        return Err(CliError::Usage(
            "pass exactly one of --list, --rule, --validate".to_string(),
        ));
    }
    if (args.both || args.all_rules) && !args.list {
        return Err(CliError::Usage(
            "--both and --all-rules only apply to --list".to_string(),
        ));
    }

    if args.list {
        let rules: Vec<u8> = if args.all_rules {
            survey_all_rules()
        } else {
            survey_minimal()
        };
        let rules: Vec<u8> = if args.both {
            rules
                .into_iter()
                .filter(|&r| {
                    let v = convergence_verdict(EcaRule::new(r));
                    v.to_zero && v.to_one
                })
                .collect()
        } else {
            rules
        };
        let mut content = String::new();
        if args.out.is_some() {
            let parameters = json!({ "both": args.both, "all_rules": args.all_rules });
            let manifest =
                RunManifest::new("theorem", parameters, None, vec![output_name(args.out.as_deref())]);
            content.push_str(&manifest.comment_line());
            content.push('\n');
        }
        for rule in rules {
            content.push_str(&format!("{rule}\n"));
        }
        return write_artifact(args.out.as_deref(), &content);
    }

    if let Some(rule) = args.rule {
        let parameters = json!({ "rule": rule });
        let manifest = RunManifest::new(
            "theorem",
            parameters,
            None,
            vec![output_name(args.out.as_deref())],
        );
        let verdict = convergence_verdict(EcaRule::new(rule));
        let value = json!({
            "manifest": manifest.to_value(),
            "verdict": verdict,
        });
        return write_artifact(args.out.as_deref(), &pretty(&value));
    }

    let rule = args.validate.expect("argument counting above");
    let range = parse_range(&args.n_range)?;
    let parameters = json!({ "validate": rule, "n_range": args.n_range });
    let manifest = RunManifest::new(
        "theorem",
        parameters,
        None,
        vec![output_name(args.out.as_deref())],
    );
    let report = validate_convergence(EcaRule::new(rule), range)?;
    let value = json!({
        "manifest": manifest.to_value(),
        "sound": report.sound(),
        "report": report,
    });
    write_artifact(args.out.as_deref(), &pretty(&value))
}

pub fn run_commclasses(args: &CommclassesArgs) -> CmdResult {
    let scheme = make_scheme(args.scheme, args.alpha)?;
    let report = communication_classes(EcaRule::new(args.rule), args.n, scheme)?;

    if !args.json && args.out.is_none() {
        println!("{}", report.classes.len());
        return Ok(());
    }

    let parameters = json!({
        "rule": args.rule,
        "n": args.n,
        "scheme": scheme.name(),
        "alpha": args.alpha,
        "members": args.members,
    });
    let manifest = RunManifest::new(
        "commclasses",
        parameters,
        None,
        vec![output_name(args.out.as_deref())],
    );
    let mut value = json!({
        "manifest": manifest.to_value(),
        "rule": args.rule,
        "n": args.n,
        "scheme": scheme.name(),
        "recurrent": report.recurrent,
        "count": report.classes.len(),
        "class_sizes": report.classes.iter().map(|c| c.size()).collect::<Vec<_>>(),
    });
    if args.members {
        let classes: Vec<Vec<String>> = report
            .classes
            .iter()
            .map(|class| {
                class
                    .members
                    .iter()
                    .map(|&code| {
                        Configuration::new(args.n, code)
                            .expect("member codes fit the ring")
                            .to_string()
                    })
                    .collect()
            })
            .collect();
        value["classes"] = json!(classes);
    }
    write_artifact(args.out.as_deref(), &pretty(&value))
}

fn parse_rule_pool(text: Option<&str>) -> Result<Vec<u8>, CliError> {
    match text {
        None => Ok(CANDIDATE_RULES.to_vec()),
        Some(list) => list
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u8>()
                    .map_err(|_| CliError::Usage(format!("bad rule number {part:?} in --rules")))
            })
            .collect(),
    }
}

pub fn run_cluster(args: &ClusterArgs) -> CmdResult {
    let dataset = load_csv(&args.input)?;
    let spec = match &args.encoding {
        Some(path) => EncodingSpec::from_json(&fs::read_to_string(path)?)?,
        None => build_encoding(&dataset)?,
    };
    let encoded = encode(&dataset, &spec)?;
    for warning in &encoded.warnings {
        eprintln!("warning: {warning}");
    }
    let pool = parse_rule_pool(args.rules.as_deref())?;
    let levels = acalab::cluster::iterative_cluster(&encoded, args.k, &pool, args.seed)?;
    let last = levels.last().expect("level 0 always exists");
    let labels = last.labels(encoded.objects.len());

    let parameters = json!({
        "input": args.input.display().to_string(),
        "k": args.k,
        "rules": pool,
        "encoding": args.encoding.as_ref().map(|p| p.display().to_string()),
    });
    let mut outputs = vec![output_name(args.out.as_deref())];
    for extra in [&args.levels, &args.indices, &args.emit_encoding].into_iter().flatten() {
        outputs.push(extra.display().to_string());
    }
    let manifest = RunManifest::new("cluster", parameters, Some(args.seed), outputs);

    let mut labels_csv = manifest.comment_line();
    labels_csv.push_str("\nobject,cluster\n");
    for (object, label) in labels.iter().enumerate() {
        labels_csv.push_str(&format!("{object},{label}\n"));
    }
    write_artifact(args.out.as_deref(), &labels_csv)?;

    if let Some(path) = &args.levels {
        let value = json!({
            "manifest": manifest.to_value(),
            "levels": levels,
        });
        fs::write(path, pretty(&value))?;
    }
    if let Some(path) = &args.indices {
        let report = validity_indices(&dataset, &labels)?;
        let value = json!({
            "manifest": manifest.to_value(),
            "indices": report,
        });
        fs::write(path, pretty(&value))?;
    }
    if let Some(path) = &args.emit_encoding {
        fs::write(path, spec.to_json()?)?;
    }
    Ok(())
}
