//! Dataset ingestion and two-bits-per-attribute encoding into ring
//! configurations.
//!
//! Quantitative attributes are split into three ordered bins coded 00, 01,
//! 11 (adjacent bins differ in one bit, so ordinal closeness survives as
//! Hamming closeness). Two-category attributes are coded 01 and 10. An
//! object's configuration is the concatenation of its per-attribute codes in
//! attribute order, giving a ring of size 2 x attribute count.

use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Configuration;

/// How a column is treated by the encoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeKind {
    Quantitative,
    QualitativeBinary,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Category(String),
}

#[derive(Debug, Clone)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

/// A rectangular table with typed columns.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub attributes: Vec<Attribute>,
    /// rows[object][attribute]
    pub rows: Vec<Vec<Value>>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The quantitative columns as a dense row-major matrix.
    pub fn quantitative_matrix(&self) -> Vec<Vec<f64>> {
        let cols: Vec<usize> = self
            .attributes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.kind == AttributeKind::Quantitative)
            .map(|(i, _)| i)
            .collect();
        self.rows
            .iter()
            .map(|row| {
                cols.iter()
                    .map(|&i| match &row[i] {
                        Value::Number(x) => *x,
                        Value::Category(_) => unreachable!("column typed quantitative"),
                    })
                    .collect()
            })
            .collect()
    }
}

/// Reads a headed CSV and infers column kinds: a column where every value
/// parses as a number is quantitative; otherwise it must hold at most two
/// distinct strings.
pub fn load_csv(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    load_csv_from_reader(file)
}

/// [`load_csv`] over any reader, for in-memory tables.
pub fn load_csv_from_reader<R: Read>(reader: R) -> Result<Dataset> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = csv_reader
        .headers()?
        .iter()
        .map(|h| h.to_string())
        .collect();
    if headers.is_empty() {
        return Err(Error::EmptyDataset("no header row".into()));
    }
    let mut raw_rows: Vec<Vec<String>> = Vec::new();
    for (row_index, record) in csv_reader.records().enumerate() {
        let record = record?;
        if record.len() != headers.len() {
            return Err(Error::RaggedRow {
                row: row_index + 2,
                expected: headers.len(),
                got: record.len(),
            });
        }
        raw_rows.push(record.iter().map(|v| v.to_string()).collect());
    }
    if raw_rows.is_empty() {
        return Err(Error::EmptyDataset("no data rows after the header".into()));
    }

    let mut attributes = Vec::with_capacity(headers.len());
    for (col, name) in headers.iter().enumerate() {
        let numeric = raw_rows
            .iter()
            .all(|row| row[col].parse::<f64>().is_ok_and(f64::is_finite));
        if numeric {
            attributes.push(Attribute {
                name: name.clone(),
                kind: AttributeKind::Quantitative,
            });
            continue;
        }
        let distinct: BTreeSet<&str> = raw_rows.iter().map(|row| row[col].as_str()).collect();
        if distinct.len() > 2 {
            return Err(Error::TooManyCategories {
                name: name.clone(),
                categories: distinct.into_iter().map(String::from).collect(),
            });
        }
        attributes.push(Attribute {
            name: name.clone(),
            kind: AttributeKind::QualitativeBinary,
        });
    }

    let rows = raw_rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .zip(&attributes)
                .map(|(cell, attr)| match attr.kind {
                    AttributeKind::Quantitative => {
                        Value::Number(cell.parse::<f64>().expect("column checked numeric"))
                    }
                    AttributeKind::QualitativeBinary => Value::Category(cell),
                })
                .collect()
        })
        .collect();
    Ok(Dataset { attributes, rows })
}

/// Encoding of one attribute. Quantitative bins are closed intervals in
/// ascending order; gaps between intervals are legal (values falling in a
/// gap clamp to the nearest bin, with a warning). Qualitative categories are
/// listed in code order: first category 01, second 10.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AttributeEncoding {
    Quantitative {
        name: String,
        intervals: [[f64; 2]; 3],
    },
    Qualitative {
        name: String,
        categories: [String; 2],
    },
}

impl AttributeEncoding {
    pub fn name(&self) -> &str {
        match self {
            AttributeEncoding::Quantitative { name, .. } => name,
            AttributeEncoding::Qualitative { name, .. } => name,
        }
    }
}

/// Bin codes in bin order: adjacent codes differ in exactly one bit.
pub const QUANTITATIVE_CODES: [&str; 3] = ["00", "01", "11"];
/// Category codes in first-seen order.
pub const QUALITATIVE_CODES: [&str; 2] = ["01", "10"];

/// Complete per-attribute encoding; ring size is twice the attribute count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingSpec {
    pub attributes: Vec<AttributeEncoding>,
}

impl EncodingSpec {
    /// Ring size produced by this spec.
    pub fn ring_size(&self) -> usize {
        2 * self.attributes.len()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str) -> Result<EncodingSpec> {
        let spec: EncodingSpec = serde_json::from_str(json)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Checks interval ordering and category distinctness.
    pub fn validate(&self) -> Result<()> {
        for attr in &self.attributes {
            match attr {
                AttributeEncoding::Quantitative { name, intervals } => {
                    for [lo, hi] in intervals {
                        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                            return Err(Error::BadEncodingSpec(format!(
                                "attribute {name}: interval [{lo}, {hi}] is not an ordered finite pair"
                            )));
                        }
                    }
                    for pair in intervals.windows(2) {
                        if pair[1][0] < pair[0][1] {
                            return Err(Error::BadEncodingSpec(format!(
                                "attribute {name}: intervals overlap at [{}, {}] and [{}, {}]",
                                pair[0][0], pair[0][1], pair[1][0], pair[1][1]
                            )));
                        }
                    }
                }
                AttributeEncoding::Qualitative { name, categories } => {
                    if categories[0] == categories[1] {
                        return Err(Error::BadEncodingSpec(format!(
                            "attribute {name}: the two categories are identical"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Derives an encoding from the data: equal-frequency thirds for
/// quantitative attributes (boundaries at the 1/3 and 2/3 empirical
/// quantiles, intervals spanning observed values), first-seen category order
/// for two-category attributes.
pub fn build_encoding(dataset: &Dataset) -> Result<EncodingSpec> {
    let mut attributes = Vec::with_capacity(dataset.attributes.len());
    for (col, attr) in dataset.attributes.iter().enumerate() {
        match attr.kind {
            AttributeKind::Quantitative => {
                let mut values: Vec<f64> = dataset
                    .rows
                    .iter()
                    .map(|row| match &row[col] {
                        Value::Number(x) => *x,
                        Value::Category(_) => unreachable!("column typed quantitative"),
                    })
                    .collect();
                values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
                let mut distinct: Vec<f64> = Vec::new();
                let mut counts: Vec<usize> = Vec::new();
                for &v in &values {
                    if distinct.last() == Some(&v) {
                        *counts.last_mut().expect("parallel arrays") += 1;
                    } else {
                        distinct.push(v);
                        counts.push(1);
                    }
                }
                if distinct.len() == 1 {
                    return Err(Error::ConstantAttribute(attr.name.clone()));
                }
                if distinct.len() < 3 {
                    return Err(Error::TooFewDistinctValues {
                        name: attr.name.clone(),
                        distinct: distinct.len(),
                    });
                }
                let total = values.len() as f64;
                let cut_at = |target: f64, at_least: usize, at_most: usize| {
                    let mut cum = 0usize;
                    let mut cut = at_most;
                    for (i, &c) in counts.iter().enumerate() {
                        cum += c;
                        if cum as f64 >= target {
                            cut = i;
                            break;
                        }
                    }
                    cut.clamp(at_least, at_most)
                };
                let cut1 = cut_at(total / 3.0, 0, distinct.len() - 3);
                let cut2 = cut_at(2.0 * total / 3.0, cut1 + 1, distinct.len() - 2);
                let intervals = [
                    [distinct[0], distinct[cut1]],
                    [distinct[cut1 + 1], distinct[cut2]],
                    [distinct[cut2 + 1], *distinct.last().expect("nonempty")],
                ];
                attributes.push(AttributeEncoding::Quantitative {
                    name: attr.name.clone(),
                    intervals,
                });
            }
            AttributeKind::QualitativeBinary => {
                let mut seen: Vec<String> = Vec::new();
                for row in &dataset.rows {
                    if let Value::Category(c) = &row[col] {
                        if !seen.contains(c) {
                            seen.push(c.clone());
                        }
                    }
                }
                if seen.len() != 2 {
                    return Err(Error::ConstantAttribute(attr.name.clone()));
                }
                attributes.push(AttributeEncoding::Qualitative {
                    name: attr.name.clone(),
                    categories: [seen[0].clone(), seen[1].clone()],
                });
            }
        }
    }
    let spec = EncodingSpec { attributes };
    spec.validate()?;
    Ok(spec)
}

/// One encoded object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedObject {
    /// Row index in the source dataset.
    pub id: usize,
    pub configuration: Configuration,
}

/// Encoded table: per-object configurations plus the distinct ("useful")
/// configurations in first-seen order.
#[derive(Debug, Clone)]
pub struct EncodedDataset {
    pub n: usize,
    pub objects: Vec<EncodedObject>,
    pub useful: Vec<Configuration>,
    pub warnings: Vec<String>,
}

impl EncodedDataset {
    /// Objects grouped by useful configuration, in first-seen order.
    pub fn objects_by_useful(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); self.useful.len()];
        for obj in &self.objects {
            let slot = self
                .useful
                .iter()
                .position(|u| *u == obj.configuration)
                .expect("every object maps to a useful configuration");
            groups[slot].push(obj.id);
        }
        groups
    }
}

fn quantitative_code(name: &str, value: f64, intervals: &[[f64; 2]; 3]) -> (usize, Option<String>) {
    for (bin, [lo, hi]) in intervals.iter().enumerate() {
        if value >= *lo && value <= *hi {
            return (bin, None);
        }
    }
    let (bin, gap) = intervals
        .iter()
        .enumerate()
        .map(|(bin, [lo, hi])| (bin, (lo - value).max(value - hi).max(0.0)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite gaps").then(a.0.cmp(&b.0)))
        .expect("three bins");
    let warning = format!(
        "attribute {name}: value {value} lies outside every bin, clamped to bin {} (gap {gap})",
        bin + 1
    );
    (bin, Some(warning))
}

/// Encodes every row under the given `spec`. Attributes are matched by name,
/// values outside every bin clamp to the nearest bin with a warning.
pub fn encode(dataset: &Dataset, spec: &EncodingSpec) -> Result<EncodedDataset> {
    spec.validate()?;
    let mut warnings = Vec::new();
    let mut column_encodings: Vec<&AttributeEncoding> = Vec::new();
    for attr in &dataset.attributes {
        let enc = spec
            .attributes
            .iter()
            .find(|e| e.name() == attr.name)
            .ok_or_else(|| Error::MissingAttributeEncoding(attr.name.clone()))?;
        let kinds_match = matches!(
            (enc, attr.kind),
            (AttributeEncoding::Quantitative { .. }, AttributeKind::Quantitative)
                | (AttributeEncoding::Qualitative { .. }, AttributeKind::QualitativeBinary)
        );
        if !kinds_match {
            return Err(Error::BadEncodingSpec(format!(
                "attribute {}: encoding kind does not match the column kind",
                attr.name
            )));
        }
        column_encodings.push(enc);
    }

    let mut objects = Vec::with_capacity(dataset.rows.len());
    let mut useful: Vec<Configuration> = Vec::new();
    for (id, row) in dataset.rows.iter().enumerate() {
        let mut bits = String::with_capacity(spec.ring_size());
        for (value, enc) in row.iter().zip(&column_encodings) {
            match (value, enc) {
                (Value::Number(x), AttributeEncoding::Quantitative { name, intervals }) => {
                    let (bin, warning) = quantitative_code(name, *x, intervals);
                    if let Some(w) = warning {
                        warnings.push(format!("object {id}: {w}"));
                    }
                    bits.push_str(QUANTITATIVE_CODES[bin]);
                }
                (Value::Category(c), AttributeEncoding::Qualitative { name, categories }) => {
                    let slot = categories.iter().position(|cat| cat == c).ok_or_else(|| {
                        Error::BadEncodingSpec(format!(
                            "attribute {name}: category {c:?} is not in the encoding"
                        ))
                    })?;
                    bits.push_str(QUALITATIVE_CODES[slot]);
                }
                _ => unreachable!("kinds checked against columns above"),
            }
        }
        let configuration: Configuration = bits.parse()?;
        if !useful.contains(&configuration) {
            useful.push(configuration);
        }
        objects.push(EncodedObject { id, configuration });
    }
    Ok(EncodedDataset {
        n: spec.ring_size(),
        objects,
        useful,
        warnings,
    })
}
